//! Acceptance criteria, one PASS/FAIL line each. Every criterion is exact:
//! integer or rational equality, zero mismatches allowed.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use hallcrest::countkit::factorization_exists;
use hallcrest::hallalg::{HallAlgebra, HallElement, SuiteReport};
use hallcrest::hallpoly::{ChiEngine, SamplingConfig};
use hallcrest::quiverlab::{DimVector, QuiverPresentation};
use hallcrest::repcore::*;
use hallcrest::Result;

const BUDGET: u128 = 1 << 22;
const RERUN_LADDER: [u64; 4] = [3, 5, 7, 11];

fn load(name: &str) -> QuiverPresentation {
    let path = format!("{}/../../quivers/{name}", env!("CARGO_MANIFEST_DIR"));
    QuiverPresentation::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn table(name: &str, primes: &[u64], bound: &[usize]) -> Result<IndecTable> {
    IndecTable::build(load(name), primes, DimVector::new(bound.to_vec()), CatalogOptions::default())
}

fn algebra(name: &str, bound: &[usize]) -> Result<HallAlgebra> {
    let t = table(name, &[2, 3, 5], bound)?;
    Ok(HallAlgebra::new(ChiEngine::new(Arc::new(t), SamplingConfig::default())?))
}

fn dv(d: &[usize]) -> DimVector {
    DimVector::new(d.to_vec())
}

type Outcome = Result<(bool, String)>;

fn suites(reports: &[SuiteReport]) -> (bool, String) {
    let ok = reports.iter().all(|r| r.passed() && r.checks > 0);
    let checks: u64 = reports.iter().map(|r| r.checks).sum();
    let failures: u64 = reports.iter().map(|r| r.failures).sum();
    let mut detail = format!("{checks} checks, {failures} mismatches");
    for r in reports.iter().filter(|r| !r.passed()) {
        detail += &format!("; {} {:?} {:?} {:?}", r.suite, r.status, r.notes, r.witnesses.first());
    }
    (ok, detail)
}

/// Positive roots by the Tits form `q(d) = Σ d_i^2 - Σ_a d_s(a) d_t(a) = 1`.
fn tits_roots(pres: &QuiverPresentation, bound: &DimVector) -> Vec<DimVector> {
    bound
        .below()
        .into_iter()
        .filter(|d| {
            let sq: i64 = d.as_slice().iter().map(|&x| (x * x) as i64).sum();
            let ar: i64 = pres.arrows().iter().map(|a| (d[a.source] * d[a.target]) as i64).sum();
            !d.is_zero() && sq - ar == 1
        })
        .collect()
}

struct Algebras {
    a2: HallAlgebra,
    a3: HallAlgebra,
    lp: HallAlgebra,
    point: HallAlgebra,
}

const A2_BOUND: [usize; 2] = [2, 2];
const A3_BOUND: [usize; 3] = [1, 1, 1];
const LOOP_BOUND: [usize; 1] = [3];

impl Algebras {
    fn each(&self) -> [(&str, &HallAlgebra, DimVector); 3] {
        [("A2", &self.a2, dv(&A2_BOUND)), ("A3", &self.a3, dv(&A3_BOUND)), ("loop", &self.lp, dv(&LOOP_BOUND))]
    }
}

fn c1_catalogs() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, bound, want, dynkin) in [
        ("a2.qv", vec![2, 2], 3, true),
        ("a3.qv", vec![2, 2, 2], 6, true),
        ("d4.qv", vec![2, 2, 2, 3], 12, true),
        ("loop2.qv", vec![4], 2, false),
    ] {
        let joint = table(name, &[2, 3, 5], &bound)?;
        let labels = |t: &IndecTable| t.classes().iter().map(|c| (c.label.clone(), c.dim.clone())).collect::<Vec<_>>();
        let reference = labels(&joint);
        let mut same = true;
        for p in [2, 3, 5] {
            same &= labels(&table(name, &[p], &bound)?) == reference;
        }
        let n = joint.classes().len();
        let mut dims: Vec<DimVector> = joint.classes().iter().map(|c| c.dim.clone()).collect();
        dims.sort();
        let roots_ok = !dynkin || dims == tits_roots(joint.presentation(), &dv(&bound));
        ok &= n == want && same && roots_ok;
        parts.push(format!("{name}: {n}"));
    }
    Ok((ok, parts.join(", ")))
}

fn c2_point(alg: &Algebras) -> Outcome {
    let h = &alg.point;
    let s = IsoClass::single(0);
    let chi = h.engine().chi_filtration(&[s.clone(), s.clone()], &IsoClass::from_pairs([(0, 2)]))?;
    let mut ok = chi.value == 2;
    let mut acc = HallElement::one();
    let mut fact = 1i64;
    for k in 1..=4u32 {
        acc = h.product(&acc, &HallElement::basis(s.clone()))?;
        fact *= k as i64;
        ok &= acc == HallElement::from_terms([(IsoClass::from_pairs([(0, k)]), fact)]);
    }
    Ok((ok, format!("chi(V(S,S;2S)) = {} from {}; u_S^4 = {}", chi.value, chi.polynomial, acc.show(h.table()))))
}

fn c3_a2_table(alg: &Algebras) -> Outcome {
    let h = &alg.a2;
    let t = h.table();
    let u = |s: &str| IsoClass::parse(s, t).map(HallElement::basis);
    let el = |terms: &[(&str, i64)]| -> Result<HallElement> {
        Ok(HallElement::from_terms(terms.iter().map(|&(s, k)| (IsoClass::parse(s, t).unwrap(), k))))
    };
    let (s1, s2) = (u("S1")?, u("S2")?);
    let p21 = h.product(&s2, &s1)?;
    let p12 = h.product(&s1, &s2)?;
    let br = h.bracket(&s2, &s1)?;
    let ok = p21 == el(&[("M11", 1), ("S1+S2", 1)])? && p12 == el(&[("S1+S2", 1)])? && br == el(&[("M11", 1)])?;
    Ok((ok, format!("S2*S1 = {}; S1*S2 = {}; [S2,S1] = {}", p21.show(t), p12.show(t), br.show(t))))
}

fn c4_assoc(alg: &Algebras) -> Outcome {
    let r = alg.each().iter().map(|(_, h, b)| h.verify_associativity(b)).collect::<Result<Vec<_>>>()?;
    Ok(suites(&r))
}

fn c5_lie(alg: &Algebras) -> Outcome {
    let mut r = Vec::new();
    for (_, h, b) in alg.each() {
        r.push(h.verify_lie(&b)?);
        r.push(h.verify_jacobi(&b)?);
    }
    Ok(suites(&r))
}

fn c6_ext(alg: &Algebras) -> Outcome {
    let r = alg.each().iter().map(|(_, h, b)| h.verify_ext_vanishing(b)).collect::<Result<Vec<_>>>()?;
    Ok(suites(&r))
}

fn c7_green(alg: &Algebras) -> Outcome {
    let r = alg.each().iter().map(|(_, h, b)| h.verify_green_degenerate(b)).collect::<Result<Vec<_>>>()?;
    Ok(suites(&r))
}

fn c8_classical(alg: &Algebras) -> Outcome {
    let h = &alg.a2;
    let sampled = h.table().primes();
    let r = [2, 3].iter().map(|&p| h.verify_green_classical(&dv(&A2_BOUND), p, &sampled)).collect::<Result<Vec<_>>>()?;
    let (ok, d) = suites(&r);
    Ok((ok, format!("{d}; congruence primes {sampled:?}")))
}

fn c9_pbw(alg: &Algebras) -> Outcome {
    let t = alg.a2.table();
    let order: Vec<usize> = ["S1", "S2", "M11"].iter().map(|s| t.label_index(s).unwrap()).collect();
    let a = alg.a2.verify_pbw(&dv(&A2_BOUND), None)?;
    let b = alg.a2.verify_pbw(&dv(&A2_BOUND), Some(&order))?;
    let l = alg.lp.verify_pbw(&dv(&LOOP_BOUND), None)?;
    Ok(suites(&[a, b, l]))
}

fn c10_comult(alg: &Algebras) -> Outcome {
    let r = alg.each().iter().map(|(_, h, b)| h.verify_comult(b)).collect::<Result<Vec<_>>>()?;
    Ok(suites(&r))
}

fn c11_factorization() -> Outcome {
    let mut ok = true;
    for p in [2u64, 3, 5] {
        let t = table("loop2.qv", &[p], &[4])?;
        let q = t.presentation();
        let r = t.rep(&IsoClass::parse("M2", &t)?, p)?;
        let k = r.field();
        let alpha = GradedMap::new(vec![r.map(0).clone()]);
        ok &= alpha.is_module_map(q, &r, &r);
        ok &= !factorization_exists(&alpha, &r, &r, &t, BUDGET)?;
        ok &= factorization_exists(&GradedMap::zero(k, r.dim(), r.dim()), &r, &r, &t, BUDGET)?;
        ok &= factorization_exists(&GradedMap::identity(k, r.dim()), &r, &r, &t, BUDGET)?;
    }
    Ok((ok, "alpha: false, 0: true, id: true at p = 2, 3, 5".into()))
}

fn c12_stability(alg: &Algebras) -> Outcome {
    let mut total = 0;
    let mut unstable = 0;
    let mut diffs = Vec::new();
    for h in [&alg.point, &alg.a2, &alg.a3, &alg.lp] {
        let eng = h.engine();
        let res = eng.results();
        total += res.len();
        unstable += res.iter().filter(|(_, r)| !r.stable).count();
        let other = eng.with_config(SamplingConfig::with_ladder(RERUN_LADDER.to_vec()))?;
        diffs.extend(eng.compare_with(&other)?);
    }
    let ok = total > 0 && unstable == 0 && diffs.is_empty();
    Ok((ok, format!("{total} certified values, {unstable} unstable, {} differ on ladder {RERUN_LADDER:?}", diffs.len())))
}

fn report(n: u32, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let (ok, detail) = match f() {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    println!(
        "criterion {n:>2} {:<28} {}  ({detail}) [{:.1}s]",
        name,
        if ok { "PASS" } else { "FAIL" },
        t.elapsed().as_secs_f64()
    );
    ok
}

fn main() -> ExitCode {
    let mut ok = report(1, "catalog counts", c1_catalogs);
    let alg = match (|| -> Result<Algebras> {
        Ok(Algebras {
            a2: algebra("a2.qv", &A2_BOUND)?,
            a3: algebra("a3.qv", &A3_BOUND)?,
            lp: algebra("loop2.qv", &LOOP_BOUND)?,
            point: algebra("point.qv", &[4])?,
        })
    })() {
        Ok(a) => a,
        Err(e) => {
            println!("setup failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    ok &= report(2, "split square on a point", || c2_point(&alg));
    ok &= report(3, "A2 multiplication table", || c3_a2_table(&alg));
    ok &= report(4, "associativity", || c4_assoc(&alg));
    ok &= report(5, "Lie closure and Jacobi", || c5_lie(&alg));
    ok &= report(6, "Ext vanishing at q = 1", || c6_ext(&alg));
    ok &= report(7, "degenerate Green identity", || c7_green(&alg));
    ok &= report(8, "classical Green identity", || c8_classical(&alg));
    ok &= report(9, "PBW triangularity", || c9_pbw(&alg));
    ok &= report(10, "comultiplication", || c10_comult(&alg));
    ok &= report(11, "factorization criterion", c11_factorization);
    ok &= report(12, "interpolation stability", || c12_stability(&alg));
    println!("acceptance: {}", if ok { "PASS" } else { "FAIL" });
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
