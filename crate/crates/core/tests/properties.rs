use std::sync::{Arc, OnceLock};

use hallcrest::countkit::count_filtrations;
use hallcrest::gfarith::{interpolate, FMatrix, PrimeField, QPolynomial};
use hallcrest::quiverlab::{check_relations, DimVector, QuiverPresentation};
use hallcrest::repcore::*;
use proptest::prelude::*;

fn load(name: &str) -> QuiverPresentation {
    let path = format!("{}/../../quivers/{name}", env!("CARGO_MANIFEST_DIR"));
    QuiverPresentation::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn a3() -> &'static Arc<IndecTable> {
    static T: OnceLock<Arc<IndecTable>> = OnceLock::new();
    T.get_or_init(|| Arc::new(IndecTable::build(load("a3.qv"), &[3], DimVector::new(vec![2, 2, 2]), CatalogOptions::default()).unwrap()))
}

fn loop2() -> &'static Arc<IndecTable> {
    static T: OnceLock<Arc<IndecTable>> = OnceLock::new();
    T.get_or_init(|| Arc::new(IndecTable::build(load("loop2.qv"), &[3], DimVector::new(vec![4]), CatalogOptions::default()).unwrap()))
}

fn field() -> PrimeField {
    PrimeField::new(3).unwrap()
}

/// A representation of `d` with maps read off `entries`.
fn rep_from(pres: &QuiverPresentation, d: &[usize], entries: &[u64]) -> Rep {
    let mut it = entries.iter().copied().cycle();
    let maps = pres
        .arrows()
        .iter()
        .map(|a| {
            let (r, c) = (d[a.target], d[a.source]);
            FMatrix::from_vec(field(), r, c, (0..r * c).map(|_| it.next().unwrap_or(0)).collect())
        })
        .collect();
    Rep::from_parts_unchecked(field(), DimVector::new(d.to_vec()), maps)
}

fn invertible(n: usize, entries: &[u64]) -> FMatrix {
    let mut it = entries.iter().copied().cycle();
    let m = FMatrix::from_vec(field(), n, n, (0..n * n).map(|_| it.next().unwrap()).collect());
    if m.is_invertible() {
        m
    } else {
        FMatrix::identity(field(), n)
    }
}

fn a3_rep(maxd: usize) -> impl Strategy<Value = Rep> {
    (prop::collection::vec(0usize..=maxd, 3), prop::collection::vec(0u64..3, 8)).prop_map(|(d, e)| rep_from(a3().presentation(), &d, &e))
}

fn small_class() -> impl Strategy<Value = IsoClass> {
    prop::collection::vec((0usize..6, 1u32..4), 0..4).prop_map(IsoClass::from_pairs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn splittings_partition_the_class(c in small_class()) {
        let sp = c.splittings();
        let expect: usize = c.terms().iter().map(|&(_, k)| k as usize + 1).product();
        prop_assert_eq!(sp.len(), expect);
        let mut seen = std::collections::BTreeSet::new();
        for (a, b) in &sp {
            prop_assert_eq!(&a.union(b), &c);
            prop_assert!(seen.insert(a.clone()));
            prop_assert_eq!(a.gamma() + b.gamma(), c.gamma());
        }
        prop_assert!(sp[0].0.is_zero());
    }

    #[test]
    fn factorial_weight_of_union(a in small_class(), b in small_class()) {
        let u = a.union(&b);
        prop_assert_eq!(u.factorial_weight() % (a.factorial_weight() * b.factorial_weight()), 0);
    }

    #[test]
    fn decompose_is_additive(m in a3_rep(1), n in a3_rep(1)) {
        let t = a3();
        let s = direct_sum(&m, &n).unwrap();
        let (dm, dn) = (decompose(&m, t).unwrap(), decompose(&n, t).unwrap());
        prop_assert_eq!(decompose(&s, t).unwrap(), dm.union(&dn));
        prop_assert_eq!(&dm.dim(t), m.dim());
    }

    #[test]
    fn decompose_is_base_change_invariant(m in a3_rep(2), g in prop::collection::vec(0u64..3, 4)) {
        let t = a3();
        let q = t.presentation();
        let base: Vec<FMatrix> = m.dim().as_slice().iter().map(|&k| invertible(k, &g)).collect();
        let c = m.conjugate(q, &base);
        prop_assert_eq!(decompose(&m, t).unwrap(), decompose(&c, t).unwrap());
        prop_assert_eq!(hom_dim(q, &m, &m).unwrap(), hom_dim(q, &c, &c).unwrap());
    }

    #[test]
    fn loop_modules_decompose_into_catalogued_classes(d in 1usize..=4, e in prop::collection::vec(0u64..3, 16)) {
        let t = loop2();
        let q = t.presentation();
        let m = rep_from(q, &[d], &e);
        prop_assume!(check_relations(q, &m));
        let c = decompose(&m, t).unwrap();
        // the rank of a determines the number of M2 summands
        let m2 = t.label_index("M2").unwrap();
        prop_assert_eq!(c.multiplicity(m2) as usize, m.map(0).rank());
        prop_assert_eq!(c.dim(t), DimVector::new(vec![d]));
    }

    #[test]
    fn interpolation_recovers_integer_polynomials(coeffs in prop::collection::vec(0i64..6, 1..5)) {
        let poly = QPolynomial::from_int_coeffs(&coeffs);
        let primes = [2u64, 3, 5, 7, 11, 13, 17];
        let samples: Vec<(u64, u64)> = primes
            .iter()
            .map(|&p| (p, poly.eval_int(p as i64).to_integer().try_into().unwrap()))
            .collect();
        let r = interpolate(&samples).unwrap();
        prop_assert!(r.stable);
        prop_assert_eq!(r.polynomial, poly);
    }

    #[test]
    fn point_filtrations_are_gaussian_binomials(n in 1usize..=4, k in 0usize..=4, pi in 0usize..3) {
        prop_assume!(k <= n);
        let p = [2u64, 3, 5][pi];
        let t = IndecTable::build(load("point.qv"), &[p], DimVector::new(vec![4]), CatalogOptions::default()).unwrap();
        let sub = IsoClass::from_pairs([(0, k as u32)]);
        let quot = IsoClass::from_pairs([(0, (n - k) as u32)]);
        let x = t.rep(&IsoClass::from_pairs([(0, n as u32)]), p).unwrap();
        let got = count_filtrations(&[sub, quot], &x, &t).unwrap();
        // q-binomial by the product formula
        let q = p as u128;
        let num: u128 = (0..k as u32).map(|i| q.pow(n as u32 - i) - 1).product();
        let den: u128 = (0..k as u32).map(|i| q.pow(i + 1) - 1).product();
        prop_assert_eq!(got, num / den);
    }
}
