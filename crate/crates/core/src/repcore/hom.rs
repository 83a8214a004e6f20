use crate::error::{Error, Result};
use crate::gfarith::{advance, FMatrix};
use crate::quiverlab::QuiverPresentation;

use super::rep::{GradedMap, Rep};

/// The linear system `f_t(a) M_a = N_a f_s(a)` on the blocks of `f`, with
/// the block offsets.
fn hom_system(pres: &QuiverPresentation, m: &Rep, n: &Rep) -> Result<(FMatrix, Vec<usize>)> {
    if m.field() != n.field() {
        return Err(Error::FieldMismatch(m.field().p(), n.field().p()));
    }
    let field = m.field();
    let nv = pres.vertex_count();
    let md = m.dim();
    let nd = n.dim();
    let mut offset = vec![0; nv + 1];
    for i in 0..nv {
        offset[i + 1] = offset[i] + nd[i] * md[i];
    }
    let unknowns = offset[nv];
    let var = |i: usize, r: usize, c: usize| offset[i] + r * md[i] + c;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (ai, a) in pres.arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let ma = m.map(ai);
        let na = n.map(ai);
        for r in 0..nd[t] {
            for c in 0..md[s] {
                let mut row = vec![0u64; unknowns];
                // (f_t M_a)[r, c]
                for k in 0..md[t] {
                    let x = ma.get(k, c);
                    if x != 0 {
                        let v = var(t, r, k);
                        row[v] = field.add(row[v], x);
                    }
                }
                // -(N_a f_s)[r, c]
                for k in 0..nd[s] {
                    let x = na.get(r, k);
                    if x != 0 {
                        let v = var(s, k, c);
                        row[v] = field.sub(row[v], x);
                    }
                }
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
    }
    Ok((FMatrix::from_vec(field, rows.len(), unknowns, rows.concat()), offset))
}

/// A basis of `Hom(M, N)`: graded maps `f` with `f_t(a) M_a = N_a f_s(a)`.
pub fn hom_space(pres: &QuiverPresentation, m: &Rep, n: &Rep) -> Result<Vec<GradedMap>> {
    let (system, offset) = hom_system(pres, m, n)?;
    if system.cols() == 0 {
        return Ok(Vec::new());
    }
    let field = m.field();
    let (nv, md, nd) = (pres.vertex_count(), m.dim(), n.dim());
    Ok(system
        .kernel()
        .into_iter()
        .map(|v| {
            GradedMap::new(
                (0..nv)
                    .map(|i| FMatrix::from_vec(field, nd[i], md[i], v[offset[i]..offset[i + 1]].to_vec()))
                    .collect(),
            )
        })
        .collect())
}

pub fn hom_dim(pres: &QuiverPresentation, m: &Rep, n: &Rep) -> Result<usize> {
    let (system, _) = hom_system(pres, m, n)?;
    Ok(system.cols() - system.rank())
}

/// Linear combination `sum_i coeffs[i] * basis[i]`; `basis` must be nonempty.
pub(crate) fn combine(basis: &[GradedMap], coeffs: &[u64]) -> GradedMap {
    let mut acc = basis[0].scale(coeffs[0]);
    for (b, &c) in basis.iter().zip(coeffs).skip(1) {
        if c != 0 {
            acc = acc.add(&b.scale(c));
        }
    }
    acc
}

/// `p^k` if it fits under `budget`.
pub fn enumeration_size(p: u64, k: usize, budget: u128) -> Option<u128> {
    let mut total: u128 = 1;
    for _ in 0..k {
        total = total.checked_mul(p as u128)?;
        if total > budget {
            return None;
        }
    }
    Some(total)
}

/// Number of automorphisms of `m`, by enumerating all of `End(m)`.
pub fn aut_order(pres: &QuiverPresentation, m: &Rep, budget: u128) -> Result<u128> {
    let basis = hom_space(pres, m, m)?;
    let p = m.field().p();
    if basis.is_empty() {
        // only the zero module has a zero endomorphism ring
        return Ok(1);
    }
    enumeration_size(p, basis.len(), budget).ok_or_else(|| {
        Error::BudgetExceeded(format!("End has {}^{} elements, over the budget {budget}", p, basis.len()))
    })?;
    let mut coeffs = vec![0u64; basis.len()];
    let mut count = 0u128;
    loop {
        if combine(&basis, &coeffs).is_invertible() {
            count += 1;
        }
        if !advance(&mut coeffs, p) {
            break;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfarith::PrimeField;
    use crate::quiverlab::DimVector;
    use crate::repcore::direct_sum;

    fn a2() -> QuiverPresentation {
        QuiverPresentation::parse("vertex 1\nvertex 2\narrow a: 1 -> 2\n").unwrap()
    }

    fn p1(q: &QuiverPresentation, k: PrimeField) -> Rep {
        Rep::new(q, k, DimVector::new(vec![1, 1]), vec![FMatrix::from_rows(k, &[[1]])]).unwrap()
    }

    #[test]
    fn hom_dims_a2() {
        let q = a2();
        let k = PrimeField::new(3).unwrap();
        let s1 = Rep::simple(&q, k, 0);
        let s2 = Rep::simple(&q, k, 1);
        let p = p1(&q, k);
        assert_eq!(hom_dim(&q, &s1, &s1).unwrap(), 1);
        assert_eq!(hom_dim(&q, &p, &s2).unwrap(), 0);
        assert_eq!(hom_dim(&q, &p, &s1).unwrap(), 1);
        assert_eq!(hom_dim(&q, &s2, &p).unwrap(), 1);
        assert_eq!(hom_dim(&q, &p, &p).unwrap(), 1);
        for f in hom_space(&q, &p, &s1).unwrap() {
            assert!(f.is_module_map(&q, &p, &s1));
        }
    }

    #[test]
    fn field_mismatch() {
        let q = a2();
        let a = Rep::simple(&q, PrimeField::new(2).unwrap(), 0);
        let b = Rep::simple(&q, PrimeField::new(3).unwrap(), 0);
        assert!(matches!(hom_space(&q, &a, &b), Err(Error::FieldMismatch(2, 3))));
    }

    #[test]
    fn aut_orders() {
        let q = a2();
        let f2 = PrimeField::new(2).unwrap();
        let s1 = Rep::simple(&q, f2, 0);
        assert_eq!(aut_order(&q, &s1, 1 << 20).unwrap(), 1);
        let ss = direct_sum(&s1, &s1).unwrap();
        assert_eq!(aut_order(&q, &ss, 1 << 20).unwrap(), 6);
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(aut_order(&q, &p1(&q, f3), 1 << 20).unwrap(), 2);
        assert!(matches!(aut_order(&q, &ss, 3), Err(Error::BudgetExceeded(_))));
    }
}
