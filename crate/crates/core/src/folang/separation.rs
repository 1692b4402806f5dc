//! Evaluating one sentence across two indexed families of structures.

use serde::Serialize;

use super::eval::{eval_with, EvalError, EvalOptions, Valuation};
use super::Formula;
use crate::structures::FiniteStructure;

/// One index of the sweep; `None` where the family has no member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationRow {
    pub index: usize,
    pub holds_in_a: Option<bool>,
    pub holds_in_b: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub rows: Vec<SeparationRow>,
    /// The sentence holds on every sampled member of A and fails on every
    /// sampled member of B.
    pub separates: bool,
    /// First index where that pattern breaks.
    pub first_failure: Option<usize>,
}

/// Evaluates `f` on `family_a(i)` and `family_b(i)` for `i` in `0..=max_index`.
pub fn separation_report<A, B>(
    f: &Formula,
    family_a: A,
    family_b: B,
    max_index: usize,
) -> Result<SeparationReport, EvalError>
where
    A: Fn(usize) -> Option<FiniteStructure>,
    B: Fn(usize) -> Option<FiniteStructure>,
{
    let opts = EvalOptions::default();
    let val = Valuation::new();
    let check = |s: Option<FiniteStructure>| s.map(|s| eval_with(f, &s, &val, &opts)).transpose();
    let mut rows = Vec::new();
    let mut first_failure = None;
    for index in 0..=max_index {
        let holds_in_a = check(family_a(index))?;
        let holds_in_b = check(family_b(index))?;
        if holds_in_a.is_none() && holds_in_b.is_none() {
            continue;
        }
        if first_failure.is_none() && (holds_in_a == Some(false) || holds_in_b == Some(true)) {
            first_failure = Some(index);
        }
        rows.push(SeparationRow {
            index,
            holds_in_a,
            holds_in_b,
        });
    }
    Ok(SeparationReport {
        separates: first_failure.is_none(),
        rows,
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folang::{and_all, library};
    use crate::order::crown;
    use crate::structures::circle_graph;

    fn circles(parity: usize) -> impl Fn(usize) -> Option<FiniteStructure> {
        move |n| (n >= 3 && n % 2 == parity).then(|| circle_graph(n).unwrap().structure().clone())
    }

    fn crowns(parity: usize) -> impl Fn(usize) -> Option<FiniteStructure> {
        move |n| (n >= 2 && n % 2 == parity).then(|| crown(n).unwrap().to_structure())
    }

    #[test]
    fn short_odd_circles_separate_only_up_to_nine() {
        let f = and_all([3, 5, 7, 9].map(|m| library::no_spanned_circle(m).unwrap()));
        let r = separation_report(&f, circles(0), circles(1), 12).unwrap();
        assert_eq!(r.first_failure, Some(11));
        assert!(!r.separates);
        assert!(r.rows.iter().all(|row| row.holds_in_a != Some(false)));
        let r9 = separation_report(&f, circles(0), circles(1), 10).unwrap();
        assert!(r9.separates);
    }

    #[test]
    fn delta1_does_not_separate_crowns() {
        let r = separation_report(&library::delta1(), crowns(0), crowns(1), 8).unwrap();
        assert!(r
            .rows
            .iter()
            .all(|row| row.holds_in_a != Some(false) && row.holds_in_b != Some(false)));
        assert_eq!(r.first_failure, Some(3));
    }

    #[test]
    fn lambda6_on_crowns() {
        let r = separation_report(&library::lambda(6).unwrap(), crowns(0), crowns(1), 4).unwrap();
        let a: Vec<_> = r.rows.iter().map(|row| (row.index, row.holds_in_a, row.holds_in_b)).collect();
        assert_eq!(
            a,
            vec![(2, Some(false), None), (3, None, Some(true)), (4, Some(true), None)]
        );
    }
}
