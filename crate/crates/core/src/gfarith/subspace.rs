use itertools::Itertools;

use super::field::PrimeField;
use super::matrix::FMatrix;
use crate::error::{Error, Result};

/// Every `k`-dimensional subspace of `F_p^n`, each given once by its unique
/// reduced row-echelon basis (a `k x n` matrix).
///
/// Order: pivot sets in lexicographic order, then the free entries as a
/// base-`p` counter read row by row with the last free entry varying fastest.
pub fn enumerate_subspaces(n: usize, k: usize, field: PrimeField) -> Result<Vec<FMatrix>> {
    if k > n {
        return Err(Error::InvalidDimension { n, k });
    }
    let p = field.p();
    let mut out = Vec::new();
    for pivots in (0..n).combinations(k) {
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(row, &pc)| {
                let is_pivot = &is_pivot;
                ((pc + 1)..n).filter(move |&c| !is_pivot[c]).map(move |c| (row, c))
            })
            .collect();
        let mut values = vec![0u64; free.len()];
        loop {
            let mut m = FMatrix::zeros(field, k, n);
            for (row, &pc) in pivots.iter().enumerate() {
                m.set(row, pc, 1);
            }
            for (&(row, c), &v) in free.iter().zip(&values) {
                m.set(row, c, v);
            }
            out.push(m);
            if !advance(&mut values, p) {
                break;
            }
        }
    }
    Ok(out)
}

/// Base-`p` counter step; `false` once every digit has wrapped around.
pub(crate) fn advance(values: &mut [u64], p: u64) -> bool {
    for v in values.iter_mut().rev() {
        *v += 1;
        if *v < p {
            return true;
        }
        *v = 0;
    }
    false
}

/// Number of `k`-subspaces of `F_q^n` without enumerating them; `None` on overflow.
pub fn subspace_count(n: usize, k: usize, q: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.checked_mul(q.checked_pow((n - i) as u32)? - 1)?;
        den = den.checked_mul(q.checked_pow((i + 1) as u32)? - 1)?;
    }
    Some(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfarith::matrix::rref;
    use std::collections::HashSet;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    /// Independent oracle: `[n choose k]_q` by the q-Pascal recursion.
    fn gaussian_binomial_pascal(n: usize, k: usize, q: u128) -> u128 {
        if k == 0 || k == n {
            return 1;
        }
        if k > n {
            return 0;
        }
        gaussian_binomial_pascal(n - 1, k - 1, q) + q.pow(k as u32) * gaussian_binomial_pascal(n - 1, k, q)
    }

    #[test]
    fn lines_in_the_plane_over_f2() {
        assert_eq!(enumerate_subspaces(2, 1, f(2)).unwrap().len(), 3);
    }

    #[test]
    fn zero_subspace_only() {
        for n in 0..4 {
            let subs = enumerate_subspaces(n, 0, f(5)).unwrap();
            assert_eq!(subs.len(), 1);
            assert_eq!(subs[0].rows(), 0);
        }
    }

    #[test]
    fn planes_in_f3_cubed() {
        assert_eq!(enumerate_subspaces(3, 2, f(3)).unwrap().len(), 13);
    }

    #[test]
    fn k_above_n_is_rejected() {
        assert!(matches!(enumerate_subspaces(2, 3, f(2)), Err(Error::InvalidDimension { .. })));
    }

    #[test]
    fn counts_match_gaussian_binomials() {
        for &p in &[2u64, 3, 5] {
            for n in 0..=4 {
                for k in 0..=n {
                    let subs = enumerate_subspaces(n, k, f(p)).unwrap();
                    assert_eq!(subs.len() as u128, gaussian_binomial_pascal(n, k, p as u128), "n={n} k={k} p={p}");
                    assert_eq!(subspace_count(n, k, p), Some(subs.len() as u128));
                }
            }
        }
    }

    #[test]
    fn representatives_are_canonical_and_distinct() {
        let subs = enumerate_subspaces(4, 2, f(3)).unwrap();
        let mut seen = HashSet::new();
        for s in &subs {
            let r = rref(s);
            assert_eq!(&r.reduced, s);
            assert_eq!(r.rank, 2);
            assert!(seen.insert(s.clone()));
        }
        // deterministic
        assert_eq!(subs, enumerate_subspaces(4, 2, f(3)).unwrap());
    }
}
