//! Small posets up to isomorphism and batch verification runs.
//!
//! Every run walks a fixed, ordered list of cases, checks each case
//! independently (optionally in parallel) and merges the results by case
//! index, so the serialized run is identical whatever the worker count.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::congruence::congruence_lattice;
use crate::folang::{library, EvalOptions, Evaluator, Valuation};
use crate::order::{self, crown, downset_lattice, fingerprint, is_isomorphic, Invariant, Lattice, Poset};
use crate::par;
use crate::props::{Analysis, EdgeReading};
use crate::slimsm::{build_ln, random_slim};
use crate::structures::BipartiteMode;

/// Largest poset size the catalog will enumerate.
pub const MAX_CATALOG_SIZE: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("poset size bound must be in 1..={MAX_CATALOG_SIZE}, got {0}")]
    SizeBound(usize),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// Posets of each size up to isomorphism; `by_size[k]` holds size `k + 1`.
#[derive(Clone, Debug)]
pub struct PosetCatalog {
    pub by_size: Vec<Vec<Poset>>,
}

impl PosetCatalog {
    pub fn counts(&self) -> Vec<usize> {
        self.by_size.iter().map(Vec::len).collect()
    }

    /// All entries in catalog order, labelled `P<size>.<index>`.
    pub fn entries(&self) -> Vec<(String, &Poset)> {
        self.by_size
            .iter()
            .enumerate()
            .flat_map(|(k, ps)| {
                ps.iter()
                    .enumerate()
                    .map(move |(i, p)| (format!("P{}.{}", k + 1, i), p))
            })
            .collect()
    }
}

/// Adds one new maximal element above each down-set of `p`.
fn extensions(p: &Poset) -> Vec<Poset> {
    let n = p.size();
    let rows: Vec<FixedBitSet> = (0..n)
        .map(|x| {
            let mut r = p.down_set(x).clone();
            r.grow(n + 1);
            r
        })
        .collect();
    order::down_sets(p)
        .expect("small poset")
        .into_iter()
        .map(|mut d| {
            d.grow(n + 1);
            d.insert(n);
            let mut down = rows.clone();
            down.push(d);
            Poset::from_down_rows(down)
        })
        .collect()
}

/// All posets with at most `max_size` elements, up to isomorphism.
///
/// Every poset of size `k + 1` arises from one of size `k` by adding a
/// maximal element, so extending each representative in all ways and
/// discarding isomorphic duplicates is complete.
pub fn enumerate_posets(max_size: usize) -> Result<PosetCatalog, VerifyError> {
    if !(1..=MAX_CATALOG_SIZE).contains(&max_size) {
        return Err(VerifyError::SizeBound(max_size));
    }
    let one = Poset::from_covers(1, &[]).expect("singleton");
    let mut by_size = vec![vec![one]];
    for _ in 1..max_size {
        let mut found: Vec<Poset> = Vec::new();
        let mut buckets: HashMap<(Vec<Invariant>, usize), Vec<usize>> = HashMap::new();
        for p in by_size.last().expect("nonempty") {
            for q in extensions(p) {
                let key = (fingerprint(&q), q.cover_pairs().len());
                let bucket = buckets.entry(key).or_default();
                if bucket.iter().all(|&i| is_isomorphic(&found[i], &q).is_none()) {
                    bucket.push(found.len());
                    found.push(q);
                }
            }
        }
        by_size.push(found);
    }
    Ok(PosetCatalog { by_size })
}

/// What was run and with which parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_poset_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_forks: Option<usize>,
    /// adjacency of maximal join-irreducibles used by the checks
    pub reading: EdgeReading,
    /// not serialized: output must not depend on it
    #[serde(skip)]
    pub workers: usize,
}

impl RunConfig {
    fn named(check: &str, workers: usize) -> Self {
        RunConfig {
            check: check.to_string(),
            max_poset_size: None,
            count: None,
            seed: None,
            grid_k: None,
            max_forks: None,
            reading: EdgeReading::default(),
            workers,
        }
    }
}

/// Outcome for one case. `values` holds the named booleans computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub index: usize,
    pub label: String,
    pub lattice_size: usize,
    pub skipped: bool,
    pub values: BTreeMap<String, bool>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub index: usize,
    pub label: String,
    pub reason: String,
    /// the lattice, as cover-pair JSON, for independent re-checking
    pub lattice: serde_json::Value,
}

/// Something worth reporting that is not a failure of the checked statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub label: String,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub verdict: String,
    pub cases: usize,
    pub checked: usize,
    pub skipped: usize,
    pub counterexamples: usize,
    pub findings: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationRun {
    pub config: RunConfig,
    pub results: Vec<CaseResult>,
    pub counterexamples: Vec<Counterexample>,
    pub findings: Vec<Finding>,
    pub summary: Summary,
    /// wall time in milliseconds; kept out of the JSON for reproducibility
    #[serde(skip)]
    pub wall_ms: u128,
}

impl VerificationRun {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("run serialises")
    }

    /// One-paragraph human-readable summary.
    pub fn summary_text(&self) -> String {
        let s = &self.summary;
        let mut out = format!(
            "{}: {} ({} cases, {} checked, {} skipped, {} counterexamples, {} findings)",
            self.config.check, s.verdict, s.cases, s.checked, s.skipped, s.counterexamples, s.findings
        );
        for c in &self.counterexamples {
            out.push_str(&format!("\n  counterexample {}: {}", c.label, c.reason));
        }
        out
    }
}

/// Per-case output of a checker.
struct Checked {
    result: CaseResult,
    counterexample: Option<Counterexample>,
    findings: Vec<Finding>,
}

struct Case {
    label: String,
    lattice: Result<Lattice, String>,
}

impl Checked {
    fn new(index: usize, case: &Case, size: usize) -> Self {
        Checked {
            result: CaseResult {
                index,
                label: case.label.clone(),
                lattice_size: size,
                skipped: false,
                values: BTreeMap::new(),
                ok: true,
            },
            counterexample: None,
            findings: Vec::new(),
        }
    }

    fn set(&mut self, name: &str, value: bool) {
        self.result.values.insert(name.to_string(), value);
    }

    fn fail(&mut self, lattice: Option<&Lattice>, reason: String) {
        self.result.ok = false;
        if self.counterexample.is_none() {
            self.counterexample = Some(Counterexample {
                index: self.result.index,
                label: self.result.label.clone(),
                reason,
                lattice: lattice.map(Lattice::to_json).unwrap_or(serde_json::Value::Null),
            });
        }
    }

    fn note(&mut self, note: String) {
        self.findings.push(Finding {
            label: self.result.label.clone(),
            note,
        });
    }
}

fn run_cases(config: RunConfig, cases: Vec<Case>, check: impl Fn(usize, &Case) -> Checked + Sync + Send) -> VerificationRun {
    let start = Instant::now();
    let checked = par::map_indexed(&cases, config.workers, |i, c| check(i, c));
    let mut results = Vec::new();
    let mut counterexamples = Vec::new();
    let mut findings = Vec::new();
    for c in checked {
        results.push(c.result);
        counterexamples.extend(c.counterexample);
        findings.extend(c.findings);
    }
    let skipped = results.iter().filter(|r| r.skipped).count();
    let summary = Summary {
        verdict: if counterexamples.is_empty() { "pass" } else { "fail" }.to_string(),
        cases: results.len(),
        checked: results.len() - skipped,
        skipped,
        counterexamples: counterexamples.len(),
        findings: findings.len(),
    };
    VerificationRun {
        config,
        results,
        counterexamples,
        findings,
        summary,
        wall_ms: start.elapsed().as_millis(),
    }
}

fn catalog_cases(max_poset_size: usize) -> Result<Vec<Case>, VerifyError> {
    let catalog = enumerate_posets(max_poset_size)?;
    Ok(catalog
        .entries()
        .into_iter()
        .map(|(label, p)| Case {
            label,
            lattice: downset_lattice(p).map_err(|e| e.to_string()),
        })
        .collect())
}

/// Common prologue: the lattice must build and be distributive; the
/// Two-cover filter marks the case skipped.
fn two_cover_case<'a>(i: usize, case: &'a Case, reading: EdgeReading) -> Result<(Checked, Analysis<'a>), Checked> {
    let mut out = Checked::new(i, case, case.lattice.as_ref().map_or(0, Lattice::size));
    let l = match &case.lattice {
        Ok(l) => l,
        Err(e) => {
            out.fail(None, format!("construction failed: {e}"));
            return Err(out);
        }
    };
    let a = match Analysis::with_reading(l, reading) {
        Ok(a) => a,
        Err(e) => {
            out.fail(Some(l), e.to_string());
            return Err(out);
        }
    };
    let tc = a.has_two_cover();
    out.set("two_cover", tc);
    if !tc {
        out.result.skipped = true;
        return Err(out);
    }
    Ok((out, a))
}

/// Within Two-cover lattices `Id(P)`, `|P| <= max_poset_size`: DCEP ⇔ BMEP.
///
/// Also records, as findings, lattices where the other reading of the
/// maximal-element graph gives a different bipartiteness verdict.
pub fn verify_theorem_b(
    max_poset_size: usize,
    workers: usize,
    reading: EdgeReading,
) -> Result<VerificationRun, VerifyError> {
    let cases = catalog_cases(max_poset_size)?;
    let mut config = RunConfig::named("theorem-b", workers);
    config.max_poset_size = Some(max_poset_size);
    config.reading = reading;
    Ok(run_cases(config, cases, move |i, case| {
        let (mut out, a) = match two_cover_case(i, case, reading) {
            Ok(x) => x,
            Err(out) => return out,
        };
        let bmep = a.has_bmep();
        out.set("bmep", bmep);
        match a.dcep_report() {
            Ok(r) => {
                out.set("dcep", r.verdict);
                if r.verdict != bmep {
                    out.fail(Some(a.lattice()), format!("dcep={} but bmep={bmep}", r.verdict));
                }
            }
            Err(e) => out.fail(Some(a.lattice()), e.to_string()),
        }
        let other = a.bmep_report(BipartiteMode::Standard, reading.other()).verdict;
        if other != bmep {
            out.note(format!(
                "{} reading gives bmep={other}, {} reading {bmep}",
                reading.other().name(),
                reading.name()
            ));
        }
        out
    }))
}

/// `ψ_DCEP` agrees with the combinatorial check, and `ρ_mcyclic` agrees
/// with `is_multicyclic` at every element, on the Two-cover family. The
/// formulas encode the lower-bound reading, so that is the one used.
pub fn verify_theorem_c(max_poset_size: usize, workers: usize) -> Result<VerificationRun, VerifyError> {
    let cases = catalog_cases(max_poset_size)?;
    let mut config = RunConfig::named("theorem-c", workers);
    config.max_poset_size = Some(max_poset_size);
    let psi = library::psi_dcep();
    let mcyclic = library::mcyclic_at("x");
    Ok(run_cases(config, cases, |i, case| {
        let (mut out, a) = match two_cover_case(i, case, EdgeReading::CommonLowerBound) {
            Ok(x) => x,
            Err(out) => return out,
        };
        let l = a.lattice();
        let s = l.to_structure();
        // the Two-cover family is small; no domain cap applies here
        let opts = EvalOptions { max_domain: usize::MAX };
        let dcep = match a.dcep_report() {
            Ok(r) => r.verdict,
            Err(e) => {
                out.fail(Some(l), e.to_string());
                return out;
            }
        };
        out.set("dcep", dcep);
        let sentence = Evaluator::new(&psi, &s, &opts).and_then(|mut e| e.eval(&Valuation::new()));
        match sentence {
            Ok(v) => {
                out.set("psi_dcep", v);
                if v != dcep {
                    out.fail(Some(l), format!("psi_dcep={v} but dcep={dcep}"));
                }
            }
            Err(e) => out.fail(Some(l), e.to_string()),
        }
        match Evaluator::new(&mcyclic, &s, &opts).and_then(|mut e| e.eval_each()) {
            Ok(values) => {
                let mismatch = values
                    .iter()
                    .enumerate()
                    .find(|&(x, &v)| a.is_multicyclic(x).ok() != Some(v));
                out.set("mcyclic_agrees", mismatch.is_none());
                if let Some((x, &v)) = mismatch {
                    out.fail(Some(l), format!("rho_mcyclic({x})={v} disagrees with is_multicyclic"));
                }
            }
            Err(e) => out.fail(Some(l), e.to_string()),
        }
        out
    }))
}

/// Two-cover lattices `Id(P)` with fewer than 18 elements have no cyclic
/// element; `Id(K_3)` has exactly 18 and a cyclic top.
pub fn verify_remark_18(
    max_poset_size: usize,
    workers: usize,
    reading: EdgeReading,
) -> Result<VerificationRun, VerifyError> {
    let mut cases = catalog_cases(max_poset_size)?;
    cases.push(Case {
        label: "Id(K3)".to_string(),
        lattice: crown(3)
            .and_then(|p| downset_lattice(&p))
            .map_err(|e| e.to_string()),
    });
    let fd3 = cases.len() - 1;
    let mut config = RunConfig::named("remark-18", workers);
    config.max_poset_size = Some(max_poset_size);
    config.reading = reading;
    Ok(run_cases(config, cases, move |i, case| {
        let (mut out, a) = match two_cover_case(i, case, reading) {
            Ok(x) => x,
            Err(mut out) => {
                if i == fd3 {
                    out.fail(None, "Id(K3) must satisfy Two-cover".to_string());
                }
                return out;
            }
        };
        let l = a.lattice();
        let cyclic = match a.cyclic_elements() {
            Ok(c) => c,
            Err(e) => {
                out.fail(Some(l), e.to_string());
                return out;
            }
        };
        out.set("has_cyclic", !cyclic.is_empty());
        if i == fd3 {
            let top_cyclic = cyclic.iter().any(|c| c.element == l.top());
            out.set("top_cyclic", top_cyclic);
            if l.size() != 18 || !top_cyclic {
                out.fail(Some(l), format!("size {} top cyclic {top_cyclic}", l.size()));
            }
        } else if l.size() >= 18 {
            out.result.skipped = true;
        } else if let Some(c) = cyclic.first() {
            out.fail(Some(l), format!("cyclic element {} in a {}-element lattice", c.element, l.size()));
        }
        out
    }))
}

/// Birkhoff round trip: `J(Id(P)) ≅ P` for every catalog poset.
pub fn verify_birkhoff(max_poset_size: usize, workers: usize) -> Result<VerificationRun, VerifyError> {
    let catalog = enumerate_posets(max_poset_size)?;
    let posets: Vec<(String, Poset)> = catalog.entries().into_iter().map(|(l, p)| (l, p.clone())).collect();
    let cases: Vec<Case> = posets
        .iter()
        .map(|(label, p)| Case {
            label: label.clone(),
            lattice: downset_lattice(p).map_err(|e| e.to_string()),
        })
        .collect();
    let mut config = RunConfig::named("birkhoff", workers);
    config.max_poset_size = Some(max_poset_size);
    Ok(run_cases(config, cases, |i, case| {
        let mut out = Checked::new(i, case, case.lattice.as_ref().map_or(0, Lattice::size));
        match &case.lattice {
            Ok(l) => {
                let iso = order::join_irreducibles(l).is_some_and(|j| is_isomorphic(&j.poset, &posets[i].1).is_some());
                out.set("round_trip", iso);
                if !iso {
                    out.fail(Some(l), "J(Id(P)) is not isomorphic to P".to_string());
                }
            }
            Err(e) => out.fail(None, e.clone()),
        }
        out
    }))
}

/// Parameters for [`verify_theorem_a`].
#[derive(Clone, Debug)]
pub struct TheoremAConfig {
    pub count: usize,
    pub seed: u64,
    /// grids are `k × k` with `1 <= k <= grid_k`
    pub grid_k: usize,
    pub max_forks: usize,
    /// `L_n` instances added after the random ones
    pub ln: Vec<usize>,
    pub reading: EdgeReading,
    pub workers: usize,
}

impl Default for TheoremAConfig {
    fn default() -> Self {
        TheoremAConfig {
            count: 100,
            seed: 2024,
            grid_k: 4,
            max_forks: 6,
            ln: vec![4, 6, 8, 10],
            reading: EdgeReading::default(),
            workers: 0,
        }
    }
}

/// Congruence lattices of slim semimodular lattices are distributive and
/// satisfy Two-cover, BMEP and DCEP.
pub fn verify_theorem_a(cfg: &TheoremAConfig) -> Result<VerificationRun, VerifyError> {
    if cfg.grid_k == 0 {
        return Err(VerifyError::Parameter("grid_k must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut specs: Vec<(String, Box<dyn Fn() -> Result<Lattice, String> + Send + Sync>)> = Vec::new();
    for i in 0..cfg.count {
        let k = rng.random_range(1..=cfg.grid_k);
        let forks = rng.random_range(0..=cfg.max_forks);
        let seed: u64 = rng.random();
        specs.push((
            format!("random#{i}(k={k},forks={forks})"),
            Box::new(move || {
                random_slim(seed, k, forks)
                    .map(|l| l.lattice().clone())
                    .map_err(|e| e.to_string())
            }),
        ));
    }
    for &n in &cfg.ln {
        specs.push((
            format!("L{n}"),
            Box::new(move || build_ln(n).map(|l| l.lattice().clone()).map_err(|e| e.to_string())),
        ));
    }
    let mut config = RunConfig::named("theorem-a", cfg.workers);
    config.count = Some(cfg.count);
    config.seed = Some(cfg.seed);
    config.grid_k = Some(cfg.grid_k);
    config.max_forks = Some(cfg.max_forks);
    config.reading = cfg.reading;
    let reading = cfg.reading;
    // build Con(L) inside the workers: it dominates the cost
    let cases: Vec<Case> = specs
        .iter()
        .map(|(label, _)| Case {
            label: label.clone(),
            lattice: Err(String::new()),
        })
        .collect();
    Ok(run_cases(config, cases, move |i, case| {
        let built = specs[i].1().and_then(|l| {
            congruence_lattice(&l)
                .map(|c| c.lattice)
                .map_err(|e| e.to_string())
        });
        let case = Case {
            label: case.label.clone(),
            lattice: built,
        };
        let mut out = Checked::new(i, &case, case.lattice.as_ref().map_or(0, Lattice::size));
        let con = match &case.lattice {
            Ok(c) => c,
            Err(e) => {
                out.fail(None, format!("construction failed: {e}"));
                return out;
            }
        };
        let distributive = order::is_distributive(con);
        out.set("distributive", distributive);
        if !distributive {
            out.fail(Some(con), "Con(L) is not distributive".to_string());
            return out;
        }
        let a = Analysis::with_reading(con, reading).expect("checked distributive");
        let (tc, bmep) = (a.has_two_cover(), a.has_bmep());
        out.set("two_cover", tc);
        out.set("bmep", bmep);
        let dcep = a.dcep_report().map(|r| r.verdict);
        out.set("dcep", dcep.as_ref().is_ok_and(|&d| d));
        let failed: Vec<&str> = [("two_cover", tc), ("bmep", bmep), ("dcep", *dcep.as_ref().unwrap_or(&false))]
            .iter()
            .filter(|(_, v)| !v)
            .map(|(k, _)| *k)
            .collect();
        if let Err(e) = &dcep {
            out.fail(Some(con), e.to_string());
        } else if !failed.is_empty() {
            out.fail(Some(con), format!("fails {}", failed.join(", ")));
            let b = Analysis::with_reading(con, reading.other()).expect("checked distributive");
            let other = b.dcep_report().map(|r| r.verdict);
            out.note(format!(
                "{} reading gives bmep={}, dcep={}",
                reading.other().name(),
                b.has_bmep(),
                other.map_or_else(|e| e.to_string(), |d| d.to_string())
            ));
        }
        out
    }))
}
