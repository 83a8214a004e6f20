//! Sub/quotient convention check against a brute-force count that shares no
//! code with the submodule enumerator: every full-rank basis tuple is tried
//! and the stable ones are divided by the `GL` orbit sizes.

use std::sync::Arc;

use crate::countkit::count_filtrations;
use crate::error::{Error, Result};
use crate::gfarith::{FMatrix, PrimeField};
use crate::hallpoly::{ChiEngine, SamplingConfig};
use crate::quiverlab::{DimVector, QuiverPresentation};
use crate::repcore::{CatalogOptions, IndecTable, IsoClass, Rep};

const POINT: &str = "vertex 1\n";
const A2: &str = "vertex 1\nvertex 2\narrow a: 1 -> 2\n";

fn gl_order(k: usize, p: u128) -> u128 {
    (0..k as u32).map(|i| p.pow(k as u32) - p.pow(i)).product()
}

/// Every `k x n` matrix of rank `k`.
fn full_rank_frames(field: PrimeField, k: usize, n: usize) -> Vec<FMatrix> {
    let p = field.p();
    let mut entries = vec![0u64; k * n];
    let mut out = Vec::new();
    loop {
        let m = FMatrix::from_vec(field, k, n, entries.clone());
        if m.rank() == k {
            out.push(m);
        }
        let mut i = 0;
        loop {
            if i == entries.len() {
                return out;
            }
            entries[i] += 1;
            if entries[i] < p {
                break;
            }
            entries[i] = 0;
            i += 1;
        }
    }
}

fn contains_image(map: &FMatrix, src: &FMatrix, tgt: &FMatrix) -> bool {
    if src.rows() == 0 {
        return true;
    }
    let images: Vec<u64> = (0..src.rows()).flat_map(|j| map.mul_vec(src.row(j))).collect();
    let stacked = tgt.vstack(&FMatrix::from_vec(map.field(), src.rows(), tgt.cols(), images));
    stacked.rank() == tgt.rank()
}

/// Number of subrepresentations of `x` with dimension vector `d`.
fn brute_submodules(pres: &QuiverPresentation, x: &Rep, d: &DimVector) -> u128 {
    let field = x.field();
    let frames: Vec<Vec<FMatrix>> = (0..pres.vertex_count()).map(|v| full_rank_frames(field, d[v], x.dim()[v])).collect();
    let mut idx = vec![0usize; frames.len()];
    let mut stable = 0u128;
    if frames.iter().any(|f| f.is_empty()) {
        return 0;
    }
    loop {
        let pick: Vec<&FMatrix> = idx.iter().enumerate().map(|(v, &i)| &frames[v][i]).collect();
        if pres.arrows().iter().enumerate().all(|(ai, a)| contains_image(x.map(ai), pick[a.source], pick[a.target])) {
            stable += 1;
        }
        let mut v = 0;
        loop {
            if v == idx.len() {
                let orbit: u128 = (0..frames.len()).map(|v| gl_order(d[v], field.p() as u128)).product();
                return stable / orbit;
            }
            idx[v] += 1;
            if idx[v] < frames[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
}

fn fail(what: String) -> Error {
    Error::Internal(format!("sub/quotient convention check failed: {what}"))
}

fn table(text: &str, bound: Vec<usize>) -> Result<Arc<IndecTable>> {
    let pres = QuiverPresentation::parse(text).map_err(|e| fail(e.to_string()))?;
    Ok(Arc::new(IndecTable::build(pres, &[2, 3], DimVector::new(bound), CatalogOptions::default())?))
}

fn class(t: &IndecTable, expr: &str) -> Result<IsoClass> {
    IsoClass::parse(expr, t)
}

/// Runs before any suite. On the single vertex, `V(S, S; 2S)` is the
/// projective line; on `1 -> 2` the only submodule of the indecomposable of
/// dimension `(1, 1)` is the simple at the sink.
pub fn validate_conventions() -> Result<()> {
    let t = table(POINT, vec![2])?;
    let (s, s2) = (class(&t, "S1")?, class(&t, "2S1")?);
    for p in [2u64, 3] {
        let x = t.rep(&s2, p)?;
        let brute = brute_submodules(t.presentation(), &x, &DimVector::new(vec![1]));
        let fast = count_filtrations(&[s.clone(), s.clone()], &x, &t)?;
        if brute != fast || brute != p as u128 + 1 {
            return Err(fail(format!("point quiver at p={p}: brute {brute}, enumerator {fast}")));
        }
    }
    let chi = ChiEngine::new(t.clone(), SamplingConfig::default())?.chi_filtration(&[s.clone(), s], &s2)?;
    if chi.value != 2 {
        return Err(fail(format!("point quiver: chi {} instead of 2", chi.value)));
    }

    let t = table(A2, vec![1, 1])?;
    let (s1, s2, m) = (class(&t, "S1")?, class(&t, "S2")?, class(&t, "M11")?);
    for p in [2u64, 3] {
        let x = t.rep(&m, p)?;
        for (sub, quot, d) in [(&s2, &s1, [0, 1]), (&s1, &s2, [1, 0])] {
            let brute = brute_submodules(t.presentation(), &x, &DimVector::new(d.to_vec()));
            let fast = count_filtrations(&[sub.clone(), quot.clone()], &x, &t)?;
            if brute != fast {
                return Err(fail(format!("A2 at p={p}, sub dim {d:?}: brute {brute}, enumerator {fast}")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(0, 2), 1);
        assert_eq!(gl_order(2, 2), 6);
        assert_eq!(gl_order(2, 3), 48);
    }

    #[test]
    fn frames_count_matches_gl() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(full_rank_frames(f, 2, 2).len() as u128, gl_order(2, 3));
        // 1 x 2 frames at p = 3: 8 nonzero rows
        assert_eq!(full_rank_frames(f, 1, 2).len(), 8);
    }

    #[test]
    fn conventions_hold() {
        validate_conventions().unwrap();
    }
}
