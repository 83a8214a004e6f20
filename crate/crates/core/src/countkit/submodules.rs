use crate::error::{Error, Result};
use crate::gfarith::{enumerate_subspaces, FMatrix};
use crate::quiverlab::{DimVector, QuiverPresentation};
use crate::repcore::{arrow_stable, decompose, GradedSubspace, IndecTable, IsoClass, Rep};

/// An arrow-stable graded subspace together with the induced sub and
/// quotient representations.
#[derive(Clone, Debug)]
pub struct SubmodulePoint {
    pub subspace: GradedSubspace,
    pub sub: Rep,
    pub quotient: Rep,
}

/// All submodules of `x` with dimension vector `d1`.
pub fn submodules(pres: &QuiverPresentation, x: &Rep, d1: &DimVector) -> Result<Vec<SubmodulePoint>> {
    if !d1.le(x.dim()) {
        return Ok(Vec::new());
    }
    let field = x.field();
    let choices: Vec<Vec<FMatrix>> = (0..pres.vertex_count())
        .map(|i| enumerate_subspaces(x.dim()[i], d1[i], field))
        .collect::<Result<_>>()?;
    // arrows checked at the later of their two endpoints
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); pres.vertex_count()];
    for (ai, a) in pres.arrows().iter().enumerate() {
        due[a.source.max(a.target)].push(ai);
    }
    let mut out = Vec::new();
    let mut picked: Vec<FMatrix> = Vec::new();
    rec(pres, x, &choices, &due, &mut picked, &mut out);
    Ok(out)
}

fn rec(
    pres: &QuiverPresentation,
    x: &Rep,
    choices: &[Vec<FMatrix>],
    due: &[Vec<usize>],
    picked: &mut Vec<FMatrix>,
    out: &mut Vec<SubmodulePoint>,
) {
    let v = picked.len();
    if v == choices.len() {
        let subspace = GradedSubspace::new(picked.clone());
        let sub = subspace.sub_rep(pres, x);
        let quotient = subspace.quotient_rep(pres, x);
        out.push(SubmodulePoint { subspace, sub, quotient });
        return;
    }
    for u in &choices[v] {
        picked.push(u.clone());
        let ok = due[v].iter().all(|&ai| {
            let a = &pres.arrows()[ai];
            arrow_stable(x.map(ai), &picked[a.source], &picked[a.target])
        });
        if ok {
            rec(pres, x, choices, due, picked, out);
        }
        picked.pop();
    }
}

/// Number of filtrations `0 = M_0 ⊆ M_1 ⊆ ... ⊆ M_r = x` with
/// `M_i / M_(i-1)` in `classes[i-1]`; `classes[0]` is the bottom
/// (sub) factor.
pub fn count_filtrations(classes: &[IsoClass], x: &Rep, table: &IndecTable) -> Result<u128> {
    let pres = table.presentation();
    let mut total = DimVector::zero(pres.vertex_count());
    for c in classes {
        total = &total + &c.dim(table);
    }
    if &total != x.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subquotients add up to {total}, module has dimension {}",
            x.dim()
        )));
    }
    filtrations_rec(classes, x, table)
}

fn filtrations_rec(classes: &[IsoClass], x: &Rep, table: &IndecTable) -> Result<u128> {
    match classes {
        [] => Ok(u128::from(x.is_zero())),
        [only] => Ok(u128::from(&decompose(x, table)? == only)),
        [first, rest @ ..] => {
            let d1 = first.dim(table);
            let mut n = 0;
            for point in submodules(table.presentation(), x, &d1)? {
                if &decompose(&point.sub, table)? == first {
                    n += filtrations_rec(rest, &point.quotient, table)?;
                }
            }
            Ok(n)
        }
    }
}
