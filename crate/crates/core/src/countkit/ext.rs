use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gfarith::{advance, FMatrix};
use crate::quiverlab::{DimVector, QuiverPresentation};
use crate::repcore::{decompose, enumeration_size, span_basis, IndecTable, IsoClass, Rep};

/// Cocycles `Z(B, A)` and coboundaries `T(B, A)` for extensions
/// `0 -> A -> E -> B -> 0`. A cocycle is a tuple `(delta_a)` of
/// `dim A_t(a) x dim B_s(a)` matrices such that the glued representation
/// `[[A_a, delta_a], [0, B_a]]` satisfies every relation.
#[derive(Clone, Debug)]
pub struct CocycleSpace {
    pub b: Rep,
    pub a: Rep,
    /// Basis of Z, each element flattened arrow by arrow in row-major order.
    pub z: Vec<Vec<u64>>,
    /// Basis of T in reduced echelon form, same flattening.
    pub t: Vec<Vec<u64>>,
    shapes: Vec<(usize, usize)>,
}

impl CocycleSpace {
    pub fn dim_z(&self) -> usize {
        self.z.len()
    }

    pub fn dim_t(&self) -> usize {
        self.t.len()
    }

    /// Length of a flattened cocycle.
    pub fn width(&self) -> usize {
        self.shapes.iter().map(|&(r, c)| r * c).sum()
    }

    pub fn ext_dim(&self) -> usize {
        self.z.len() - self.t.len()
    }

    /// Splits a flat vector into per-arrow matrices.
    pub fn unflatten(&self, v: &[u64]) -> Vec<FMatrix> {
        let field = self.a.field();
        let mut off = 0;
        self.shapes
            .iter()
            .map(|&(r, c)| {
                let m = FMatrix::from_vec(field, r, c, v[off..off + r * c].to_vec());
                off += r * c;
                m
            })
            .collect()
    }

    /// The middle term `(A ⊕ B)_delta`; the first block of coordinates at
    /// each vertex is the submodule `A`.
    pub fn glue(&self, delta: &[u64]) -> Rep {
        let blocks = self.unflatten(delta);
        let field = self.a.field();
        let dim = self.a.dim() + self.b.dim();
        let maps = self
            .a
            .maps()
            .iter()
            .zip(self.b.maps())
            .zip(&blocks)
            .map(|((am, bm), d)| {
                let mut g = FMatrix::zeros(field, am.rows() + bm.rows(), am.cols() + bm.cols());
                g.paste(0, 0, am);
                g.paste(0, am.cols(), d);
                g.paste(am.rows(), am.cols(), bm);
                g
            })
            .collect();
        Rep::from_parts_unchecked(field, dim, maps)
    }

    /// A basis of a complement of T inside Z; its span meets every class of
    /// `Ext^1(B, A)` exactly once.
    pub fn ext_representatives(&self) -> Vec<Vec<u64>> {
        let field = self.a.field();
        let n = self.width();
        let mut span: Vec<Vec<u64>> = self.t.clone();
        let mut rank = span.len();
        let mut out = Vec::new();
        for z in &self.z {
            span.push(z.clone());
            let r = span_basis(field, n, &span).rows();
            if r > rank {
                rank = r;
                out.push(z.clone());
            } else {
                span.pop();
            }
        }
        out
    }
}

/// Builds Z and T for the pair `(B, A)` with `A` the submodule.
pub fn ext_cocycle_spaces(pres: &QuiverPresentation, b: &Rep, a: &Rep) -> Result<CocycleSpace> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(b.field().p(), a.field().p()));
    }
    let field = a.field();
    let (ad, bd) = (a.dim(), b.dim());
    let shapes: Vec<(usize, usize)> = pres.arrows().iter().map(|x| (ad[x.target], bd[x.source])).collect();
    let mut offset = vec![0];
    for &(r, c) in &shapes {
        offset.push(offset.last().unwrap() + r * c);
    }
    let n = *offset.last().unwrap();

    // Z: each relation's upper-right block, linear in delta.
    // A path a1..am contributes sum_k A_am..A_a(k+1) delta_ak B_a(k-1)..B_a1.
    let mut columns: Vec<Vec<u64>> = vec![Vec::new(); n];
    for rel in pres.relations() {
        let Some(first) = rel.terms.first() else { continue };
        let src = first.1.start;
        let tgt = pres.path_end(&first.1).expect("validated relation");
        let (rows, cols) = (ad[tgt], bd[src]);
        let mut block_cols = vec![vec![0u64; rows * cols]; n];
        for (coef, path) in &rel.terms {
            let c = field
                .from_rational(coef)
                .ok_or_else(|| Error::InvalidPrime(field.p()))?;
            let len = path.arrows.len();
            for k in 0..len {
                let mut left = FMatrix::identity(field, ad[pres.arrows()[path.arrows[k]].target]);
                for &x in &path.arrows[k + 1..] {
                    left = a.map(x).mul(&left);
                }
                let mut right = FMatrix::identity(field, bd[path.start]);
                for &x in &path.arrows[..k] {
                    right = b.map(x).mul(&right);
                }
                let ak = path.arrows[k];
                let (sr, sc) = shapes[ak];
                for i in 0..sr {
                    for j in 0..sc {
                        // left * E_ij * right = left[:, i] (x) right[j, :]
                        let col = &mut block_cols[offset[ak] + i * sc + j];
                        for r in 0..rows {
                            let l = field.mul(c, left.get(r, i));
                            if l == 0 {
                                continue;
                            }
                            for s in 0..cols {
                                let v = right.get(j, s);
                                if v != 0 {
                                    let e = &mut col[r * cols + s];
                                    *e = field.add(*e, field.mul(l, v));
                                }
                            }
                        }
                    }
                }
            }
        }
        for (u, col) in block_cols.into_iter().enumerate() {
            columns[u].extend(col);
        }
    }
    let eqs = columns.first().map_or(0, |c| c.len());
    let z = if n == 0 {
        Vec::new()
    } else {
        FMatrix::from_columns(field, eqs, &columns).kernel()
    };

    // T: images of unit graded maps eta: B -> A under eta |-> A eta_s - eta_t B.
    let mut images = Vec::new();
    for v in 0..pres.vertex_count() {
        for i in 0..ad[v] {
            for j in 0..bd[v] {
                let mut img = vec![0u64; n];
                for (x, arrow) in pres.arrows().iter().enumerate() {
                    let (sr, sc) = shapes[x];
                    let mut m = FMatrix::zeros(field, sr, sc);
                    if arrow.source == v {
                        // A_x * E_ij: column j gets A_x[:, i]
                        for r in 0..sr {
                            m.set(r, j, field.add(m.get(r, j), a.map(x).get(r, i)));
                        }
                    }
                    if arrow.target == v {
                        // - E_ij * B_x: row i gets -B_x[j, :]
                        for s in 0..sc {
                            m.set(i, s, field.sub(m.get(i, s), b.map(x).get(j, s)));
                        }
                    }
                    img[offset[x]..offset[x + 1]].copy_from_slice(m.data());
                }
                images.push(img);
            }
        }
    }
    let tb = span_basis(field, n, &images);
    let t = (0..tb.rows()).map(|i| tb.row(i).to_vec()).collect();
    Ok(CocycleSpace { b: b.clone(), a: a.clone(), z, t, shapes })
}

/// Dimension vector of any middle term.
pub fn middle_dim(b: &Rep, a: &Rep) -> DimVector {
    a.dim() + b.dim()
}

fn span_points(
    space: &CocycleSpace,
    gens: &[Vec<u64>],
    table: &IndecTable,
    budget: u128,
) -> Result<BTreeMap<IsoClass, u128>> {
    let field = space.a.field();
    let p = field.p();
    enumeration_size(p, gens.len(), budget).ok_or_else(|| {
        Error::BudgetExceeded(format!("cocycle enumeration has {p}^{} elements, over the budget {budget}", gens.len()))
    })?;
    let width = space.width();
    let mut counts: BTreeMap<IsoClass, u128> = BTreeMap::new();
    let mut coeffs = vec![0u64; gens.len()];
    loop {
        let mut delta = vec![0u64; width];
        for (c, z) in coeffs.iter().zip(gens) {
            if *c != 0 {
                for (x, y) in delta.iter_mut().zip(z) {
                    *x = field.add(*x, field.mul(*c, *y));
                }
            }
        }
        *counts.entry(decompose(&space.glue(&delta), table)?).or_default() += 1;
        if !advance(&mut coeffs, p) {
            break;
        }
    }
    Ok(counts)
}

/// `|Ext^1(B, A)_X|` for every middle class `X`. Cohomologous cocycles glue
/// to isomorphic middle terms, so one cocycle per class of `Z / T` is enough.
pub fn ext_middle_histogram(
    b: &Rep,
    a: &Rep,
    table: &IndecTable,
    budget: u128,
) -> Result<BTreeMap<IsoClass, u128>> {
    let space = ext_cocycle_spaces(table.presentation(), b, a)?;
    span_points(&space, &space.ext_representatives(), table, budget)
}

/// The same histogram by walking all of `Z(B, A)` and dividing each fibre
/// by `|T(B, A)|`; slower, kept as a cross-check.
pub fn ext_middle_histogram_full(
    b: &Rep,
    a: &Rep,
    table: &IndecTable,
    budget: u128,
) -> Result<BTreeMap<IsoClass, u128>> {
    let space = ext_cocycle_spaces(table.presentation(), b, a)?;
    let p = a.field().p();
    let t = (p as u128).pow(space.dim_t() as u32);
    span_points(&space, &space.z, table, budget)?
        .into_iter()
        .map(|(x, n)| {
            if n % t != 0 {
                return Err(Error::Internal(format!(
                    "fibre count {n} is not divisible by |T| = {t} over F_{p}"
                )));
            }
            Ok((x, n / t))
        })
        .collect()
}

/// `|Ext^1(B, A)_X|`: extensions `0 -> A -> X -> B -> 0` with middle term
/// in class `x`, with `A` the submodule.
pub fn count_ext_with_middle(b: &Rep, a: &Rep, x: &IsoClass, table: &IndecTable, budget: u128) -> Result<u128> {
    if a.dim() + b.dim() != x.dim(table) {
        return Ok(0);
    }
    Ok(ext_middle_histogram(b, a, table, budget)?.get(x).copied().unwrap_or(0))
}
