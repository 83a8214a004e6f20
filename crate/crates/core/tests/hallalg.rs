use std::sync::Arc;

use hallcrest::hallalg::*;
use hallcrest::hallpoly::{ChiEngine, SamplingConfig};
use hallcrest::quiverlab::{DimVector, QuiverPresentation};
use hallcrest::repcore::*;
use hallcrest::ErrorKind;

fn algebra(name: &str, bound: &[usize]) -> HallAlgebra {
    let path = format!("{}/../../quivers/{name}", env!("CARGO_MANIFEST_DIR"));
    let pres = QuiverPresentation::parse(&std::fs::read_to_string(path).unwrap()).unwrap();
    let t = IndecTable::build(pres, &[2, 3, 5], DimVector::new(bound.to_vec()), CatalogOptions::default()).unwrap();
    HallAlgebra::new(ChiEngine::new(Arc::new(t), SamplingConfig::default()).unwrap())
}

fn u(h: &HallAlgebra, s: &str) -> HallElement {
    HallElement::basis(IsoClass::parse(s, h.table()).unwrap())
}

fn el(h: &HallAlgebra, terms: &[(&str, i64)]) -> HallElement {
    HallElement::from_terms(terms.iter().map(|&(s, k)| (IsoClass::parse(s, h.table()).unwrap(), k)))
}

fn dv(d: &[usize]) -> DimVector {
    DimVector::new(d.to_vec())
}

fn assert_pass(r: &SuiteReport) {
    assert!(r.passed(), "{} failed: {:?}", r.suite, r.witnesses);
    assert!(r.checks > 0, "{} ran no checks", r.suite);
}

#[test]
fn a2_table() {
    let h = algebra("a2.qv", &[1, 1]);
    let (s1, s2) = (u(&h, "S1"), u(&h, "S2"));
    assert_eq!(h.product(&s2, &s1).unwrap(), el(&h, &[("M11", 1), ("S1+S2", 1)]));
    assert_eq!(h.product(&s1, &s2).unwrap(), el(&h, &[("S1+S2", 1)]));
    assert_eq!(h.bracket(&s2, &s1).unwrap(), el(&h, &[("M11", 1)]));
}

#[test]
fn unit_is_two_sided() {
    let h = algebra("a2.qv", &[1, 1]);
    let one = HallElement::one();
    for s in ["S1", "S2", "M11", "S1+S2"] {
        assert_eq!(h.product(&one, &u(&h, s)).unwrap(), u(&h, s));
        assert_eq!(h.product(&u(&h, s), &one).unwrap(), u(&h, s));
    }
}

#[test]
fn loop_square() {
    let h = algebra("loop2.qv", &[2]);
    let s = u(&h, "S1");
    assert_eq!(h.product(&s, &s).unwrap(), el(&h, &[("2S1", 2), ("M2", 1)]));
}

#[test]
fn point_powers() {
    let h = algebra("point.qv", &[4]);
    let s = u(&h, "S1");
    let mut acc = HallElement::one();
    let mut fact = 1;
    for k in 1..=4 {
        acc = h.product(&acc, &s).unwrap();
        fact *= k;
        assert_eq!(acc, el(&h, &[(&format!("{k}S1"), fact)]));
    }
}

#[test]
fn product_beyond_bound_refused() {
    let h = algebra("a2.qv", &[1, 1]);
    let err = h.product(&u(&h, "S1"), &u(&h, "M11")).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Input);
}

#[test]
fn a2_suites() {
    let h = algebra("a2.qv", &[2, 2]);
    let b = dv(&[2, 2]);
    assert_pass(&h.verify_associativity(&b).unwrap());
    assert_pass(&h.verify_lie(&b).unwrap());
    assert_pass(&h.verify_jacobi(&b).unwrap());
    assert_pass(&h.verify_initial_terms(&b, 2).unwrap());
    assert_pass(&h.verify_green_degenerate(&b).unwrap());
    assert_pass(&h.verify_comult(&b).unwrap());
    assert_pass(&h.verify_ext_vanishing(&b).unwrap());
}

#[test]
fn pbw_loop_diagonal() {
    let h = algebra("loop2.qv", &[3]);
    let r = h.verify_pbw(&dv(&[2]), None).unwrap();
    assert_pass(&r);
    let diag: Vec<(String, i64)> = r.details["diagonal"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v[0].as_str().unwrap().to_string(), v[1].as_i64().unwrap()))
        .collect();
    assert!(diag.contains(&("S1".into(), 1)));
    assert!(diag.contains(&("2S1".into(), 2)));
    assert!(diag.contains(&("M2".into(), 1)));
}

#[test]
fn pbw_a2_other_order() {
    let h = algebra("a2.qv", &[2, 2]);
    let t = h.table();
    let order = [t.label_index("S1").unwrap(), t.label_index("S2").unwrap(), t.label_index("M11").unwrap()];
    assert_pass(&h.verify_pbw(&dv(&[2, 2]), Some(&order)).unwrap());
}

#[test]
fn green_degenerate_examples() {
    let h = algebra("a2.qv", &[1, 1]);
    let c = |s: &str| IsoClass::parse(s, h.table()).unwrap();
    assert_eq!(h.green_degenerate_sides(&[c("S2"), c("S1"), c("M11"), c("0")]).unwrap(), (1, 1));
    let p = algebra("point.qv", &[2]);
    let s = IsoClass::parse("S1", p.table()).unwrap();
    assert_eq!(p.green_degenerate_sides(&[s.clone(), s.clone(), s.clone(), s]).unwrap(), (2, 2));
}

#[test]
fn green_classical_a2() {
    let h = algebra("a2.qv", &[2, 2]);
    let r = h.verify_green_classical(&dv(&[1, 1]), 2, &[3]).unwrap();
    assert_pass(&r);
}

#[test]
fn green_classical_refuses_relations() {
    let h = algebra("loop2.qv", &[2]);
    let err = h.verify_green_classical(&dv(&[2]), 2, &[]).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Refusal);
}

#[test]
fn loop_green_and_comult() {
    let h = algebra("loop2.qv", &[3]);
    let b = dv(&[3]);
    assert_pass(&h.verify_green_degenerate(&b).unwrap());
    assert_pass(&h.verify_comult(&b).unwrap());
}

#[test]
fn comult_a2_example() {
    let h = algebra("a2.qv", &[1, 1]);
    let (s1, s2) = (u(&h, "S1"), u(&h, "S2"));
    let left = h.comult(&h.product(&s2, &s1).unwrap());
    let right = h.tensor_product(&h.comult(&s2), &h.comult(&s1)).unwrap();
    assert_eq!(left, right);
    assert_eq!(left.len(), 6);
}

#[test]
fn a2_constants() {
    let h = algebra("a2.qv", &[1, 1]);
    let c = h.structure_constants(&dv(&[1, 1])).unwrap();
    assert_eq!(
        c.rows,
        vec![("S1".into(), "S2".into(), "M11".into(), -1), ("S2".into(), "S1".into(), "M11".into(), 1)]
    );
    assert_eq!(c.to_csv(), "A,B,C,coefficient\nS1,S2,M11,-1\nS2,S1,M11,1\n");
    assert!(c.jacobi.passed() && c.lie.passed());
}

#[test]
fn a3_lie_closure() {
    let h = algebra("a3.qv", &[1, 1, 1]);
    let b = dv(&[1, 1, 1]);
    assert_pass(&h.verify_lie(&b).unwrap());
    assert_pass(&h.verify_jacobi(&b).unwrap());
    assert_pass(&h.verify_associativity(&b).unwrap());
}
