use crate::error::{Error, Result};
use crate::gfarith::{advance, FMatrix};
use crate::quiverlab::{krull_schmidt_vectors, DimVector};
use crate::repcore::{combine, enumeration_size, hom_space, GradedMap, IndecTable, Rep};

/// Whether `f: Y -> X` factors as `c ∘ d` with `d: Y -> L` injective and
/// `c: L -> X` surjective for some `L` of dimension
/// `dim X + dim Y - dim Im f`. Enumerates `d` over all of `Hom(Y, L)` and
/// the solutions `c` of `c ∘ d = f` exhaustively; refuses rather than
/// answering when either enumeration exceeds `budget`.
pub fn factorization_exists(f: &GradedMap, y: &Rep, x: &Rep, table: &IndecTable, budget: u128) -> Result<bool> {
    let pres = table.presentation();
    if !f.is_module_map(pres, y, x) {
        return Err(Error::InvalidInput("f is not a module map Y -> X".into()));
    }
    let p = x.field().p();
    let sum = x.dim() + y.dim();
    let dim_l = sum.checked_sub(&f.rank()).expect("rank is bounded by both dimensions");
    for class in krull_schmidt_vectors(&dim_l, table)? {
        let l = table.rep(&class, p)?;
        let ds = hom_space(pres, y, &l)?;
        let cs = hom_space(pres, &l, x)?;
        if ds.is_empty() {
            let d = GradedMap::zero(x.field(), y.dim(), l.dim());
            if d.is_injective() && surjection_through(f, &d, &cs, p, budget)? {
                return Ok(true);
            }
            continue;
        }
        enumeration_size(p, ds.len(), budget).ok_or_else(|| {
            Error::BudgetExceeded(format!("Hom(Y, L) has {p}^{} elements, over the budget {budget}", ds.len()))
        })?;
        let mut coeffs = vec![0u64; ds.len()];
        loop {
            let d = combine(&ds, &coeffs);
            if d.is_injective() && surjection_through(f, &d, &cs, p, budget)? {
                return Ok(true);
            }
            if !advance(&mut coeffs, p) {
                break;
            }
        }
    }
    Ok(false)
}

/// Whether some surjective `c` in the span of `cs` satisfies `c ∘ d = f`.
fn surjection_through(f: &GradedMap, d: &GradedMap, cs: &[GradedMap], p: u64, budget: u128) -> Result<bool> {
    let field = f.comp(0).field();
    let target: Vec<u64> = f.comps().iter().flat_map(|m| m.data().to_vec()).collect();
    if cs.is_empty() {
        let zero = GradedMap::zero(field, &d.target_dim(), &f.target_dim());
        return Ok(target.iter().all(|&v| v == 0) && zero.is_surjective());
    }
    // linear system  sum_j lambda_j (c_j ∘ d) = f
    let columns: Vec<Vec<u64>> = cs
        .iter()
        .map(|c| c.compose(d).comps().iter().flat_map(|m| m.data().to_vec()).collect())
        .collect();
    let system = FMatrix::from_columns(field, target.len(), &columns);
    let Some(particular) = system.solve(&target) else { return Ok(false) };
    let kernel = system.kernel();
    enumeration_size(p, kernel.len(), budget).ok_or_else(|| {
        Error::BudgetExceeded(format!("solutions for c form {p}^{} elements, over the budget {budget}", kernel.len()))
    })?;
    let mut coeffs = vec![0u64; kernel.len()];
    loop {
        let mut lambda = particular.clone();
        for (k, v) in coeffs.iter().zip(&kernel) {
            for (l, x) in lambda.iter_mut().zip(v) {
                *l = field.add(*l, field.mul(*k, *x));
            }
        }
        if combine(cs, &lambda).is_surjective() {
            return Ok(true);
        }
        if !advance(&mut coeffs, p) {
            return Ok(false);
        }
    }
}

/// Dimension of the middle object searched for a given `f`.
pub fn factorization_dim(f: &GradedMap, y: &Rep, x: &Rep) -> Option<DimVector> {
    (x.dim() + y.dim()).checked_sub(&f.rank())
}
