use crate::error::{Error, Result};
use crate::gfarith::advance;
use crate::quiverlab::QuiverPresentation;

use super::catalog::IndecTable;
use super::hom::{combine, enumeration_size, hom_dim, hom_space};
use super::isoclass::IsoClass;
use super::rep::{GradedMap, Rep};

/// Fitting decomposition `M = ker(phi^n) ⊕ im(phi^n)`, or `None` when one
/// side is zero (phi nilpotent or invertible).
pub fn fitting_split(pres: &QuiverPresentation, m: &Rep, phi: &GradedMap) -> Option<(Rep, Rep)> {
    let n = m.dim().total().max(1) as u32;
    let psi = GradedMap::new(phi.comps().iter().map(|c| c.pow(n)).collect());
    let ker = psi.kernel();
    let kd = ker.dim();
    if kd.is_zero() || &kd == m.dim() {
        return None;
    }
    let im = psi.image();
    Some((ker.sub_rep(pres, m), im.sub_rep(pres, m)))
}

/// Deterministic sweep: each basis element, then every pairwise sum.
pub fn sweep_split(pres: &QuiverPresentation, m: &Rep, basis: &[GradedMap]) -> Option<(Rep, Rep)> {
    for b in basis {
        if let Some(s) = fitting_split(pres, m, b) {
            return Some(s);
        }
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if let Some(s) = fitting_split(pres, m, &basis[i].add(&basis[j])) {
                return Some(s);
            }
        }
    }
    None
}

/// Searches all of `End(M)` (up to scalars) for a splitting endomorphism.
/// Exact: `None` means `End(M)` is local, so `M` is indecomposable.
pub fn exhaustive_split(pres: &QuiverPresentation, m: &Rep, basis: &[GradedMap], budget: u128) -> Result<Option<(Rep, Rep)>> {
    if basis.len() <= 1 {
        return Ok(None);
    }
    let p = m.field().p();
    enumeration_size(p, basis.len(), budget).ok_or_else(|| {
        Error::BudgetExceeded(format!(
            "indecomposability test needs {}^{} endomorphisms, over the budget {budget}",
            p,
            basis.len()
        ))
    })?;
    let mut coeffs = vec![0u64; basis.len()];
    while advance(&mut coeffs, p) {
        // one representative per line
        if coeffs.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        if let Some(s) = fitting_split(pres, m, &combine(basis, &coeffs)) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Whether `m` is indecomposable, decided exactly (sweep, then full search).
pub fn is_indecomposable(pres: &QuiverPresentation, m: &Rep, budget: u128) -> Result<bool> {
    if m.is_zero() {
        return Ok(false);
    }
    let basis = hom_space(pres, m, m)?;
    if basis.len() == 1 {
        return Ok(true);
    }
    if sweep_split(pres, m, &basis).is_some() {
        return Ok(false);
    }
    Ok(exhaustive_split(pres, m, &basis, budget)?.is_none())
}

/// Isomorphism test against an indecomposable `c`: since `End(c)` is local,
/// `x ≅ c` iff some basis element of `Hom(x, c)` is invertible.
pub fn iso_to_indecomposable(pres: &QuiverPresentation, x: &Rep, c: &Rep) -> Result<bool> {
    if x.dim() != c.dim() {
        return Ok(false);
    }
    Ok(hom_space(pres, x, c)?.iter().any(|f| f.is_invertible()))
}

/// `m` is isomorphic to some class of its dimension, and `dim Hom(C, -)` is
/// additive, so a class whose profile is the only match is the answer.
fn identify_by_profile(m: &Rep, table: &IndecTable) -> Result<Option<IsoClass>> {
    let prof = table.profiles(m.field().p(), m.dim())?;
    if prof.classes.len() <= 1 {
        return Ok(prof.classes.first().map(|c| c.0.clone()));
    }
    let pres = table.presentation();
    let cat = table.catalog(m.field().p())?;
    let mut alive: Vec<&(IsoClass, Vec<usize>)> = prof.classes.iter().collect();
    for (r, &i) in prof.probes.iter().enumerate() {
        let h = hom_dim(pres, &cat.reps[i], m)?;
        alive.retain(|c| c.1[r] == h);
        if alive.len() <= 1 {
            break;
        }
    }
    Ok(match alive[..] {
        [c] => Some(c.0.clone()),
        _ => None,
    })
}

/// Krull–Schmidt decomposition against the catalog at `m`'s prime.
pub fn decompose(m: &Rep, table: &IndecTable) -> Result<IsoClass> {
    if let Some(c) = table.cached(m) {
        return Ok(c);
    }
    let pres = table.presentation();
    let p = m.field().p();
    let cat = table.catalog(p)?;
    if !m.dim().le(table.dim_bound()) {
        return Err(Error::CatalogBoundExceeded(format!(
            "module of dimension {} is not below the catalog bound {}",
            m.dim(),
            table.dim_bound()
        )));
    }
    if let Some(c) = identify_by_profile(m, table)? {
        table.remember(m, &c);
        return Ok(c);
    }
    let mut found = Vec::new();
    let mut stack = vec![m.clone()];
    while let Some(x) = stack.pop() {
        if x.is_zero() {
            continue;
        }
        if let Some(c) = table.cached(&x) {
            found.extend(c.indices());
            continue;
        }
        let basis = hom_space(pres, &x, &x)?;
        if let Some((a, b)) = sweep_split(pres, &x, &basis) {
            stack.push(a);
            stack.push(b);
            continue;
        }
        let mut matched = None;
        for (i, info) in table.classes().iter().enumerate() {
            if &info.dim == x.dim()
                && info.fingerprint.dim_end == basis.len()
                && iso_to_indecomposable(pres, &x, &cat.reps[i])?
            {
                matched = Some(i);
                break;
            }
        }
        if let Some(i) = matched {
            found.push(i);
            continue;
        }
        match exhaustive_split(pres, &x, &basis, table.end_budget())? {
            Some((a, b)) => {
                stack.push(a);
                stack.push(b);
            }
            None => {
                return Err(Error::CatalogIncomplete(format!(
                    "indecomposable summand of dimension {} over F_{p} matches no catalogued class",
                    x.dim()
                )))
            }
        }
    }
    let class = IsoClass::from_indices(found);
    table.remember(m, &class);
    Ok(class)
}

/// `M ≅ N`, decided by comparing Krull–Schmidt decompositions.
pub fn is_isomorphic(m: &Rep, n: &Rep, table: &IndecTable) -> Result<bool> {
    if m.field() != n.field() || m.dim() != n.dim() {
        return Ok(false);
    }
    Ok(decompose(m, table)? == decompose(n, table)?)
}
