//! Pinned outputs and the smallest known disagreements between the two
//! readings of the maximal-element graph.

use slimcon::congruence::{congruence_lattice, jir_congruence_poset};
use slimcon::order::{crown, downset_lattice, is_isomorphic, is_semimodular, is_slim, Poset};
use slimcon::props::{Analysis, EdgeReading};
use slimcon::slimsm::{build_ln, random_slim, PlanarSlimLattice};

#[test]
fn l8_matches_fixture() {
    let fixture: serde_json::Value = serde_json::from_str(include_str!("fixtures/l8.json")).unwrap();
    let built = build_ln(8).unwrap();
    assert_eq!(built.to_json(), fixture);
    let back = PlanarSlimLattice::from_json(&fixture).unwrap();
    assert_eq!(back.size(), 78);
    let j = jir_congruence_poset(back.lattice()).unwrap();
    assert!(is_isomorphic(&j, &crown(8).unwrap()).is_some());
}

// z < w < a, w < b, z < c
fn y_with_a_tail() -> Poset {
    Poset::from_covers(5, &[(0, 1), (1, 2), (1, 3), (0, 4)]).unwrap()
}

#[test]
fn eleven_element_two_cover_lattice_with_cyclic_top() {
    let d = downset_lattice(&y_with_a_tail()).unwrap();
    assert_eq!(d.size(), 11);
    let lb = Analysis::with_reading(&d, EdgeReading::CommonLowerBound).unwrap();
    assert!(lb.has_two_cover());
    let cyclic = lb.cyclic_elements().unwrap();
    assert_eq!(cyclic.len(), 1);
    assert_eq!(cyclic[0].element, d.top());
    assert!(!lb.has_bmep());
    // a and c share no lower cover, so the triangle disappears
    let lc = Analysis::with_reading(&d, EdgeReading::CommonLowerCover).unwrap();
    assert!(lc.cyclic_elements().unwrap().is_empty());
    assert!(lc.has_bmep());
    assert!(lc.dcep_report().unwrap().verdict);
}

#[test]
fn slim_semimodular_lattice_where_the_readings_split() {
    let l = random_slim(5, 2, 2).unwrap();
    assert_eq!(l.size(), 17);
    assert!(is_slim(l.lattice()) && is_semimodular(l.lattice()));
    let con = congruence_lattice(l.lattice()).unwrap();
    assert_eq!(con.lattice.size(), 22);
    let j = jir_congruence_poset(l.lattice()).unwrap();
    let shape = Poset::from_covers(6, &[(4, 0), (4, 5), (5, 1), (5, 2)]).unwrap();
    assert!(is_isomorphic(&j, &shape).is_some());

    let lb = Analysis::with_reading(&con.lattice, EdgeReading::CommonLowerBound).unwrap();
    assert!(lb.has_two_cover());
    assert!(!lb.has_bmep());
    assert!(!lb.dcep_report().unwrap().verdict);
    let lc = Analysis::with_reading(&con.lattice, EdgeReading::CommonLowerCover).unwrap();
    assert!(lc.has_bmep());
    assert!(lc.dcep_report().unwrap().verdict);
}
