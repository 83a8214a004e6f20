use std::collections::HashMap;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::hallpoly::{ChiEngine, ChiResult};
use crate::quiverlab::DimVector;
use crate::repcore::{IndecTable, IsoClass};

use super::element::{HallElement, TensorElement};

/// `u_A ⊗ u_B ⊗ u_C` with its coefficient.
pub type TripleTerm = (IsoClass, IsoClass, IsoClass, i64);

/// The algebra on class symbols with `u_A • u_B = Σ_X χ(V(A, B; X)) u_X`,
/// `A` the submodule class, together with the comultiplication.
pub struct HallAlgebra {
    engine: ChiEngine,
    products: RwLock<HashMap<(IsoClass, IsoClass), HallElement>>,
}

impl HallAlgebra {
    pub fn new(engine: ChiEngine) -> Self {
        HallAlgebra { engine, products: RwLock::default() }
    }

    pub fn engine(&self) -> &ChiEngine {
        &self.engine
    }

    pub fn table(&self) -> &IndecTable {
        self.engine.table()
    }

    pub fn dim(&self, c: &IsoClass) -> DimVector {
        c.dim(self.table())
    }

    /// Every class of dimension at most `bound`, zero first, ordered by
    /// total dimension, then dimension vector, then symbol.
    pub fn classes_up_to(&self, bound: &DimVector) -> Result<Vec<IsoClass>> {
        let mut out = Vec::new();
        let mut dims = bound.below();
        dims.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
        for d in dims {
            out.extend(self.table().classes_of_dim(&d)?);
        }
        Ok(out)
    }

    /// Indecomposable classes of dimension at most `bound`, in label order.
    pub fn indecomposables_up_to(&self, bound: &DimVector) -> Vec<IsoClass> {
        let t = self.table();
        t.indecomposables().into_iter().filter(|c| c.dim(t).le(bound)).collect()
    }

    /// Structure constants of `u_a • u_b` with their certificates.
    pub fn product_chi(&self, a: &IsoClass, b: &IsoClass) -> Result<Vec<(IsoClass, ChiResult)>> {
        let d = &self.dim(a) + &self.dim(b);
        if !d.le(self.table().dim_bound()) {
            return Err(Error::CatalogBoundExceeded(format!(
                "product lands in dimension {d}, beyond the catalog bound {}",
                self.table().dim_bound()
            )));
        }
        let pair = [a.clone(), b.clone()];
        self.table()
            .classes_of_dim(&d)?
            .into_iter()
            .map(|x| {
                let r = self.engine.chi_filtration(&pair, &x)?;
                Ok((x, r))
            })
            .collect()
    }

    pub fn product_basis(&self, a: &IsoClass, b: &IsoClass) -> Result<HallElement> {
        let key = (a.clone(), b.clone());
        if let Some(e) = self.products.read().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let e = HallElement::from_terms(self.product_chi(a, b)?.into_iter().map(|(x, r)| (x, r.value)));
        self.products.write().unwrap().insert(key, e.clone());
        Ok(e)
    }

    pub fn product(&self, u: &HallElement, v: &HallElement) -> Result<HallElement> {
        let mut out = HallElement::zero();
        for (a, x) in u.terms() {
            for (b, y) in v.terms() {
                out = out.add(&self.product_basis(a, b)?.scale(x * y));
            }
        }
        Ok(out)
    }

    /// Ordered product of several elements, left to right.
    pub fn product_all(&self, factors: &[HallElement]) -> Result<HallElement> {
        let mut acc = HallElement::one();
        for f in factors {
            acc = self.product(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn bracket(&self, u: &HallElement, v: &HallElement) -> Result<HallElement> {
        Ok(self.product(u, v)?.sub(&self.product(v, u)?))
    }

    /// `δ(u_M) = Σ u_{M'} ⊗ u_{M''}` over ordered splittings `M' ⊕ M'' = M`.
    pub fn comult_basis(&self, m: &IsoClass) -> TensorElement {
        let mut out = TensorElement::zero();
        for (a, b) in m.splittings() {
            out.add_term(a, b, 1);
        }
        out
    }

    /// `δ(u_M)` with each coefficient of `u_A ⊗ u_B` computed as
    /// `χ(Ext^1(A, B)_M)`.
    pub fn comult_oracle(&self, m: &IsoClass) -> Result<TensorElement> {
        let t = self.table();
        let d = self.dim(m);
        let mut out = TensorElement::zero();
        for d1 in d.below() {
            let d2 = d.checked_sub(&d1).unwrap();
            for a in t.classes_of_dim(&d1)? {
                for b in t.classes_of_dim(&d2)? {
                    let r = self.engine.chi_ext_middle(&a, &b, m)?;
                    out.add_term(a.clone(), b, r.value);
                }
            }
        }
        Ok(out)
    }

    pub fn comult(&self, u: &HallElement) -> TensorElement {
        let mut out = TensorElement::zero();
        for (m, k) in u.terms() {
            out = out.add(&self.comult_basis(m).scale(k));
        }
        out
    }

    /// Multiplication in the tensor square: `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
    pub fn tensor_product(&self, x: &TensorElement, y: &TensorElement) -> Result<TensorElement> {
        let mut out = TensorElement::zero();
        for (a, b, k) in x.terms() {
            for (c, d, l) in y.terms() {
                let left = self.product_basis(a, c)?;
                let right = self.product_basis(b, d)?;
                for (p, i) in left.terms() {
                    for (q, j) in right.terms() {
                        out.add_term(p.clone(), q.clone(), k * l * i * j);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `(δ ⊗ id) δ (u_M)` and `(id ⊗ δ) δ (u_M)` as triple-indexed sums.
    pub fn coassociativity_sides(&self, m: &IsoClass) -> (Vec<TripleTerm>, Vec<TripleTerm>) {
        let mut left = std::collections::BTreeMap::new();
        let mut right = std::collections::BTreeMap::new();
        for (a, b, k) in self.comult_basis(m).terms() {
            for (x, y, l) in self.comult_basis(a).terms() {
                *left.entry((x.clone(), y.clone(), b.clone())).or_insert(0) += k * l;
            }
            for (x, y, l) in self.comult_basis(b).terms() {
                *right.entry((a.clone(), x.clone(), y.clone())).or_insert(0) += k * l;
            }
        }
        let flat = |m: std::collections::BTreeMap<(IsoClass, IsoClass, IsoClass), i64>| {
            m.into_iter().filter(|(_, v)| *v != 0).map(|((a, b, c), v)| (a, b, c, v)).collect()
        };
        (flat(left), flat(right))
    }
}
