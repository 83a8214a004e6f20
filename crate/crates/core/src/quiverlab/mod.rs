//! Quivers with relations: the text format, dimension vectors, path
//! evaluation on representations and relation checking.
//!
//! Paths are written in traversal order. The path `a1*a2*...*am` acts on a
//! representation as `x_am * ... * x_a2 * x_a1`: later arrows act after
//! earlier ones.

mod dimvec;
mod presentation;

pub use dimvec::DimVector;
pub use presentation::{Arrow, ParseError, ParseErrorKind, Path, QuiverPresentation, Relation};

use crate::error::{Error, Result};
use crate::gfarith::FMatrix;
use crate::repcore::{IndecTable, IsoClass, Rep};

/// The linear map `x_p` of a path on `rep`, from the space at the start
/// vertex to the space at the end vertex.
pub fn path_matrix(pres: &QuiverPresentation, rep: &Rep, path: &Path) -> Result<FMatrix> {
    if pres.path_end(path).is_none() {
        return Err(Error::NonComposable(format!("{:?}", path.arrows)));
    }
    let mut acc = FMatrix::identity(rep.field(), rep.dim()[path.start]);
    for &a in &path.arrows {
        acc = rep.map(a).mul(&acc);
    }
    Ok(acc)
}

/// Whether `rep` satisfies every relation of the presentation.
pub fn check_relations(pres: &QuiverPresentation, rep: &Rep) -> bool {
    let field = rep.field();
    pres.relations().iter().all(|rel| {
        let mut sum: Option<FMatrix> = None;
        for (c, path) in &rel.terms {
            let Some(c) = field.from_rational(c) else {
                return false;
            };
            let Ok(m) = path_matrix(pres, rep, path) else {
                return false;
            };
            let term = m.scale(c);
            sum = Some(match sum {
                None => term,
                Some(s) => s.add(&term),
            });
        }
        sum.is_none_or(|s| s.is_zero())
    })
}

/// Every isomorphism class of dimension `d`: all multisets of catalogued
/// indecomposables whose dimension vectors sum to `d`.
pub fn krull_schmidt_vectors(d: &DimVector, table: &IndecTable) -> Result<Vec<IsoClass>> {
    if !d.le(table.dim_bound()) {
        return Err(Error::CatalogBoundExceeded(format!(
            "dimension {d} is not below the catalog bound {}",
            table.dim_bound()
        )));
    }
    let dims: Vec<&DimVector> = table.classes().iter().map(|c| &c.dim).collect();
    Ok(multisets_summing_to(&dims, d))
}

/// All multisets of indices into `dims` whose dimension vectors sum to `d`.
pub(crate) fn multisets_summing_to(dims: &[&DimVector], d: &DimVector) -> Vec<IsoClass> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    ks_rec(dims, 0, d.clone(), &mut chosen, &mut out);
    out.sort();
    out
}

fn ks_rec(dims: &[&DimVector], i: usize, rest: DimVector, chosen: &mut Vec<(usize, u32)>, out: &mut Vec<IsoClass>) {
    if rest.is_zero() {
        out.push(IsoClass::from_pairs(chosen.iter().copied()));
        return;
    }
    if i == dims.len() {
        return;
    }
    // skip class i
    ks_rec(dims, i + 1, rest.clone(), chosen, out);
    let mut r = rest;
    let mut m = 0;
    while let Some(next) = r.checked_sub(dims[i]) {
        m += 1;
        chosen.push((i, m));
        ks_rec(dims, i + 1, next.clone(), chosen, out);
        chosen.pop();
        r = next;
    }
}

/// `sum_i d_i e_i - sum_arrows d_s(a) e_t(a)`; only meaningful without relations.
pub fn euler_form(pres: &QuiverPresentation, d: &DimVector, e: &DimVector) -> Result<i64> {
    if !pres.is_hereditary() {
        return Err(Error::NotHereditary);
    }
    let n = pres.vertex_count();
    if d.len() != n || e.len() != n {
        return Err(Error::DimensionMismatch(format!("{d} / {e} over a quiver with {n} vertices")));
    }
    let diag: i64 = (0..n).map(|i| (d[i] * e[i]) as i64).sum();
    let off: i64 = pres.arrows().iter().map(|a| (d[a.source] * e[a.target]) as i64).sum();
    Ok(diag - off)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfarith::PrimeField;

    fn loop2() -> QuiverPresentation {
        QuiverPresentation::parse("vertex 1\narrow a: 1 -> 1\nrelation a*a\n").unwrap()
    }

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn empty_path_is_identity() {
        let q = QuiverPresentation::parse("vertex 1\nvertex 2\narrow a: 1 -> 2\n").unwrap();
        let rep = Rep::new(&q, f(3), DimVector::new(vec![2, 1]), vec![FMatrix::from_rows(f(3), &[[1, 2]])]).unwrap();
        let id = path_matrix(&q, &rep, &Path { start: 0, arrows: vec![] }).unwrap();
        assert_eq!(id, FMatrix::identity(f(3), 2));
        let single = path_matrix(&q, &rep, &Path { start: 0, arrows: vec![0] }).unwrap();
        assert_eq!(&single, rep.map(0));
    }

    #[test]
    fn composition_order_is_traversal_order() {
        let q = QuiverPresentation::parse("vertex 1\nvertex 2\nvertex 3\narrow a: 1 -> 2\narrow b: 2 -> 3\n").unwrap();
        let a = FMatrix::from_rows(f(5), &[[1], [2]]);
        let b = FMatrix::from_rows(f(5), &[[3, 1], [0, 1], [1, 1]]);
        let rep = Rep::new(&q, f(5), DimVector::new(vec![1, 2, 3]), vec![a.clone(), b.clone()]).unwrap();
        let ab = path_matrix(&q, &rep, &Path { start: 0, arrows: vec![0, 1] }).unwrap();
        assert_eq!(ab, b.mul(&a));
        assert!(path_matrix(&q, &rep, &Path { start: 0, arrows: vec![1, 0] }).is_err());
    }

    #[test]
    fn jordan_block_squares_to_zero() {
        let q = loop2();
        let j = FMatrix::from_rows(f(2), &[[0, 1], [0, 0]]);
        let rep = Rep::new(&q, f(2), DimVector::new(vec![2]), vec![j]).unwrap();
        let sq = path_matrix(&q, &rep, &Path { start: 0, arrows: vec![0, 0] }).unwrap();
        assert!(sq.is_zero());
        assert!(check_relations(&q, &rep));
    }

    #[test]
    fn one_squared_is_not_zero() {
        let q = loop2();
        let rep = Rep::from_parts_unchecked(f(2), DimVector::new(vec![1]), vec![FMatrix::from_rows(f(2), &[[1]])]);
        assert!(!check_relations(&q, &rep));
        assert!(Rep::new(&q, f(2), DimVector::new(vec![1]), vec![FMatrix::from_rows(f(2), &[[1]])]).is_err());
    }

    #[test]
    fn relation_free_is_vacuous() {
        let q = QuiverPresentation::parse("vertex 1\narrow a: 1 -> 1\n").unwrap();
        let rep = Rep::new(&q, f(7), DimVector::new(vec![1]), vec![FMatrix::from_rows(f(7), &[[3]])]).unwrap();
        assert!(check_relations(&q, &rep));
    }

    #[test]
    fn relations_survive_base_change() {
        // commutative square: a*b = c*d
        let text = "vertex 1\nvertex 2\nvertex 3\nvertex 4\narrow a: 1 -> 2\narrow b: 2 -> 4\narrow c: 1 -> 3\narrow d: 3 -> 4\nrelation a*b + -1 c*d\n";
        let q = QuiverPresentation::parse(text).unwrap();
        let k = f(5);
        let one = FMatrix::from_rows(k, &[[1]]);
        let two = FMatrix::from_rows(k, &[[2]]);
        let three = FMatrix::from_rows(k, &[[3]]);
        // 2*3 = 6 = 1 mod 5, and 1*1 = 1
        let rep = Rep::new(&q, k, DimVector::new(vec![1, 1, 1, 1]), vec![two.clone(), three.clone(), one.clone(), one.clone()]).unwrap();
        let g = [FMatrix::from_rows(k, &[[2]]), FMatrix::from_rows(k, &[[3]]), FMatrix::from_rows(k, &[[4]]), FMatrix::from_rows(k, &[[1]])];
        let conj = rep.conjugate(&q, &g);
        assert!(check_relations(&q, &conj));
        let broken = Rep::from_parts_unchecked(k, rep.dim().clone(), vec![two, one.clone(), one.clone(), one]);
        assert!(!check_relations(&q, &broken));
        assert!(!check_relations(&q, &broken.conjugate(&q, &g)));
    }

    #[test]
    fn euler_form_a2() {
        let q = QuiverPresentation::parse("vertex 1\nvertex 2\narrow a: 1 -> 2\n").unwrap();
        let e1 = DimVector::new(vec![1, 0]);
        let e2 = DimVector::new(vec![0, 1]);
        assert_eq!(euler_form(&q, &e1, &e2).unwrap(), -1);
        assert_eq!(euler_form(&q, &e1, &e1).unwrap(), 1);
        assert_eq!(euler_form(&q, &e1, &DimVector::zero(2)).unwrap(), 0);
        assert!(matches!(euler_form(&loop2(), &DimVector::new(vec![1]), &DimVector::new(vec![1])), Err(Error::NotHereditary)));
    }
}
