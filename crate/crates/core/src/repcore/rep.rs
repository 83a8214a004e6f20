use crate::error::{Error, Result};
use crate::gfarith::{rref, FMatrix, PrimeField};
use crate::quiverlab::{check_relations, DimVector, QuiverPresentation};

/// A point of the representation variety over `F_p`: one matrix per arrow,
/// of shape `dim[target] x dim[source]`, satisfying every relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rep {
    field: PrimeField,
    dim: DimVector,
    maps: Vec<FMatrix>,
}

/// A vertex-wise linear map between two representations; component `i`
/// has shape `target_dim[i] x source_dim[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedMap {
    comps: Vec<FMatrix>,
}

impl Rep {
    pub fn new(pres: &QuiverPresentation, field: PrimeField, dim: DimVector, maps: Vec<FMatrix>) -> Result<Rep> {
        if dim.len() != pres.vertex_count() {
            return Err(Error::MalformedRep(format!("dimension vector {dim} has wrong length")));
        }
        if maps.len() != pres.arrows().len() {
            return Err(Error::MalformedRep(format!("{} arrow maps for {} arrows", maps.len(), pres.arrows().len())));
        }
        for (a, m) in pres.arrows().iter().zip(&maps) {
            if m.field() != field {
                return Err(Error::FieldMismatch(m.field().p(), field.p()));
            }
            if (m.rows(), m.cols()) != (dim[a.target], dim[a.source]) {
                return Err(Error::MalformedRep(format!(
                    "arrow {} has shape {}x{}, expected {}x{}",
                    a.name,
                    m.rows(),
                    m.cols(),
                    dim[a.target],
                    dim[a.source]
                )));
            }
        }
        let rep = Rep { field, dim, maps };
        if !check_relations(pres, &rep) {
            return Err(Error::MalformedRep("relations are not satisfied".into()));
        }
        Ok(rep)
    }

    /// No shape or relation checks; callers guarantee the invariants.
    pub fn from_parts_unchecked(field: PrimeField, dim: DimVector, maps: Vec<FMatrix>) -> Rep {
        Rep { field, dim, maps }
    }

    pub fn zero(pres: &QuiverPresentation, field: PrimeField) -> Rep {
        let dim = DimVector::zero(pres.vertex_count());
        let maps = pres.arrows().iter().map(|_| FMatrix::zeros(field, 0, 0)).collect();
        Rep { field, dim, maps }
    }

    /// The one-dimensional representation at vertex `v` with all arrows zero.
    pub fn simple(pres: &QuiverPresentation, field: PrimeField, v: usize) -> Rep {
        let dim = DimVector::unit(pres.vertex_count(), v);
        Self::with_zero_maps(pres, field, dim)
    }

    pub fn with_zero_maps(pres: &QuiverPresentation, field: PrimeField, dim: DimVector) -> Rep {
        let maps = pres.arrows().iter().map(|a| FMatrix::zeros(field, dim[a.target], dim[a.source])).collect();
        Rep { field, dim, maps }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn dim(&self) -> &DimVector {
        &self.dim
    }
    pub fn maps(&self) -> &[FMatrix] {
        &self.maps
    }
    pub fn map(&self, arrow: usize) -> &FMatrix {
        &self.maps[arrow]
    }
    pub fn is_zero(&self) -> bool {
        self.dim.is_zero()
    }

    /// Base change `x_a -> g_t(a) x_a g_s(a)^-1` by invertible vertex matrices.
    pub fn conjugate(&self, pres: &QuiverPresentation, g: &[FMatrix]) -> Rep {
        let maps = pres
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| {
                let inv = g[a.source].inverse().expect("base change must be invertible");
                g[a.target].mul(m).mul(&inv)
            })
            .collect();
        Rep { field: self.field, dim: self.dim.clone(), maps }
    }
}

/// `M ⊕ N` with block-diagonal arrow maps.
pub fn direct_sum(m: &Rep, n: &Rep) -> Result<Rep> {
    if m.field != n.field {
        return Err(Error::FieldMismatch(m.field.p(), n.field.p()));
    }
    let maps = m.maps.iter().zip(&n.maps).map(|(a, b)| a.block_diag(b)).collect();
    Ok(Rep { field: m.field, dim: &m.dim + &n.dim, maps })
}

/// Canonical (reduced row-echelon, zero rows dropped) basis of the span of
/// `vectors` inside `F_p^n`, as a `k x n` matrix.
pub fn span_basis(field: PrimeField, n: usize, vectors: &[Vec<u64>]) -> FMatrix {
    let m = FMatrix::from_vec(field, vectors.len(), n, vectors.concat());
    let r = rref(&m);
    r.reduced.submatrix(0, 0, r.rank, n)
}

fn pivots_of(basis: &FMatrix) -> Vec<usize> {
    (0..basis.rows())
        .map(|i| basis.row(i).iter().position(|&x| x != 0).expect("basis rows are nonzero"))
        .collect()
}

/// Coordinates of `w` in the row-echelon basis `basis`, or `None` if `w`
/// is outside the span.
fn coords_in(basis: &FMatrix, pivots: &[usize], w: &[u64]) -> Option<Vec<u64>> {
    let f = basis.field();
    let coords: Vec<u64> = pivots.iter().map(|&c| w[c]).collect();
    let mut r = w.to_vec();
    for (i, &c) in coords.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for (j, x) in r.iter_mut().enumerate() {
            *x = f.sub(*x, f.mul(c, basis.get(i, j)));
        }
    }
    r.iter().all(|&x| x == 0).then_some(coords)
}

/// Per-vertex subspaces, each stored as a reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSubspace {
    bases: Vec<FMatrix>,
}

impl GradedSubspace {
    pub fn new(bases: Vec<FMatrix>) -> Self {
        GradedSubspace { bases }
    }

    pub fn bases(&self) -> &[FMatrix] {
        &self.bases
    }

    pub fn dim(&self) -> DimVector {
        DimVector::new(self.bases.iter().map(|b| b.rows()).collect())
    }

    /// Whether every arrow carries the source subspace into the target one.
    pub fn is_stable(&self, pres: &QuiverPresentation, rep: &Rep) -> bool {
        pres.arrows().iter().enumerate().all(|(ai, a)| arrow_stable(rep.map(ai), &self.bases[a.source], &self.bases[a.target]))
    }

    /// The induced subrepresentation, in the coordinates of the stored bases.
    /// Panics if the subspace is not arrow-stable.
    pub fn sub_rep(&self, pres: &QuiverPresentation, rep: &Rep) -> Rep {
        let field = rep.field();
        let pivots: Vec<Vec<usize>> = self.bases.iter().map(pivots_of).collect();
        let maps = pres
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let src = &self.bases[a.source];
                let tgt = &self.bases[a.target];
                let mut m = FMatrix::zeros(field, tgt.rows(), src.rows());
                for j in 0..src.rows() {
                    let w = rep.map(ai).mul_vec(src.row(j));
                    let c = coords_in(tgt, &pivots[a.target], &w).expect("subspace is not arrow-stable");
                    for (i, x) in c.into_iter().enumerate() {
                        m.set(i, j, x);
                    }
                }
                m
            })
            .collect();
        Rep::from_parts_unchecked(field, self.dim(), maps)
    }

    /// The quotient representation; its basis at each vertex is the images of
    /// the standard basis vectors at the non-pivot positions.
    pub fn quotient_rep(&self, pres: &QuiverPresentation, rep: &Rep) -> Rep {
        let field = rep.field();
        let proj: Vec<FMatrix> = (0..self.bases.len()).map(|i| self.projection(i, rep.dim()[i])).collect();
        let maps = pres
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let section = self.section(a.source, rep.dim()[a.source]);
                proj[a.target].mul(rep.map(ai)).mul(&section)
            })
            .collect();
        let qdim = DimVector::new(rep.dim().as_slice().iter().zip(&self.bases).map(|(n, b)| n - b.rows()).collect());
        Rep::from_parts_unchecked(field, qdim, maps)
    }

    /// Matrix of the projection `F^n -> F^n / U_i` in quotient coordinates.
    pub fn projection(&self, i: usize, n: usize) -> FMatrix {
        let basis = &self.bases[i];
        let field = basis.field();
        let piv = pivots_of(basis);
        let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
        let mut m = FMatrix::zeros(field, free.len(), n);
        for col in 0..n {
            // reduce e_col modulo the basis, read off free coordinates
            let mut w = vec![0; n];
            w[col] = 1;
            for (r, &pc) in piv.iter().enumerate() {
                let c = w[pc];
                if c != 0 {
                    for (j, x) in w.iter_mut().enumerate() {
                        *x = field.sub(*x, field.mul(c, basis.get(r, j)));
                    }
                }
            }
            for (k, &fc) in free.iter().enumerate() {
                m.set(k, col, w[fc]);
            }
        }
        m
    }

    /// Inclusion `U_i -> F^n` (the basis vectors as columns).
    pub fn inclusion(&self, i: usize) -> FMatrix {
        self.bases[i].transpose()
    }

    /// Section `F^n / U_i -> F^n` sending quotient basis vectors to the
    /// matching standard basis vectors.
    pub fn section(&self, i: usize, n: usize) -> FMatrix {
        let basis = &self.bases[i];
        let piv = pivots_of(basis);
        let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
        let mut m = FMatrix::zeros(basis.field(), n, free.len());
        for (k, &fc) in free.iter().enumerate() {
            m.set(fc, k, 1);
        }
        m
    }
}

/// Whether `map` sends the row span of `src` into the row span of `tgt`.
pub fn arrow_stable(map: &FMatrix, src: &FMatrix, tgt: &FMatrix) -> bool {
    if src.rows() == 0 {
        return true;
    }
    let piv = pivots_of(tgt);
    (0..src.rows()).all(|j| coords_in(tgt, &piv, &map.mul_vec(src.row(j))).is_some())
}

impl GradedMap {
    pub fn new(comps: Vec<FMatrix>) -> Self {
        GradedMap { comps }
    }

    pub fn zero(field: PrimeField, source: &DimVector, target: &DimVector) -> Self {
        GradedMap { comps: (0..source.len()).map(|i| FMatrix::zeros(field, target[i], source[i])).collect() }
    }

    pub fn identity(field: PrimeField, dim: &DimVector) -> Self {
        GradedMap { comps: dim.as_slice().iter().map(|&n| FMatrix::identity(field, n)).collect() }
    }

    pub fn comps(&self) -> &[FMatrix] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &FMatrix {
        &self.comps[i]
    }

    pub fn source_dim(&self) -> DimVector {
        DimVector::new(self.comps.iter().map(|c| c.cols()).collect())
    }

    pub fn target_dim(&self) -> DimVector {
        DimVector::new(self.comps.iter().map(|c| c.rows()).collect())
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &GradedMap) -> GradedMap {
        GradedMap { comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn add(&self, rhs: &GradedMap) -> GradedMap {
        GradedMap { comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, rhs: &GradedMap) -> GradedMap {
        GradedMap { comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: u64) -> GradedMap {
        GradedMap { comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn rank(&self) -> DimVector {
        DimVector::new(self.comps.iter().map(|c| c.rank()).collect())
    }

    pub fn is_injective(&self) -> bool {
        self.comps.iter().all(|c| c.rank() == c.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.comps.iter().all(|c| c.rank() == c.rows())
    }

    pub fn is_invertible(&self) -> bool {
        self.comps.iter().all(|c| c.is_square() && c.rank() == c.rows())
    }

    /// Whether `f_t(a) M_a = N_a f_s(a)` for every arrow.
    pub fn is_module_map(&self, pres: &QuiverPresentation, source: &Rep, target: &Rep) -> bool {
        pres.arrows().iter().enumerate().all(|(ai, a)| {
            self.comps[a.target].mul(source.map(ai)) == target.map(ai).mul(&self.comps[a.source])
        })
    }

    /// Kernel as a graded subspace of the source.
    pub fn kernel(&self) -> GradedSubspace {
        GradedSubspace::new(
            self.comps
                .iter()
                .map(|c| span_basis(c.field(), c.cols(), &c.kernel()))
                .collect(),
        )
    }

    /// Image as a graded subspace of the target.
    pub fn image(&self) -> GradedSubspace {
        GradedSubspace::new(
            self.comps
                .iter()
                .map(|c| span_basis(c.field(), c.rows(), &c.column_space()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> QuiverPresentation {
        QuiverPresentation::parse("vertex 1\nvertex 2\narrow a: 1 -> 2\n").unwrap()
    }

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn p1(q: &QuiverPresentation, k: PrimeField) -> Rep {
        Rep::new(q, k, DimVector::new(vec![1, 1]), vec![FMatrix::from_rows(k, &[[1]])]).unwrap()
    }

    #[test]
    fn sum_of_simples() {
        let q = a2();
        let k = f(3);
        let s = direct_sum(&Rep::simple(&q, k, 0), &Rep::simple(&q, k, 1)).unwrap();
        assert_eq!(s.dim(), &DimVector::new(vec![1, 1]));
        assert!(s.map(0).is_zero());
    }

    #[test]
    fn sum_with_zero() {
        let q = a2();
        let k = f(3);
        let m = p1(&q, k);
        assert_eq!(direct_sum(&m, &Rep::zero(&q, k)).unwrap(), m);
        assert!(direct_sum(&m, &Rep::zero(&q, f(5))).is_err());
    }

    #[test]
    fn socle_sub_and_quotient() {
        let q = a2();
        let k = f(5);
        let m = p1(&q, k);
        let socle = GradedSubspace::new(vec![FMatrix::zeros(k, 0, 1), FMatrix::from_rows(k, &[[1]])]);
        assert!(socle.is_stable(&q, &m));
        assert_eq!(socle.sub_rep(&q, &m), Rep::simple(&q, k, 1));
        assert_eq!(socle.quotient_rep(&q, &m), Rep::simple(&q, k, 0));
        let top = GradedSubspace::new(vec![FMatrix::from_rows(k, &[[1]]), FMatrix::zeros(k, 0, 1)]);
        assert!(!top.is_stable(&q, &m));
    }

    #[test]
    fn projection_kills_subspace() {
        let k = f(7);
        let u = GradedSubspace::new(vec![FMatrix::from_rows(k, &[[1, 0, 3], [0, 1, 5]])]);
        let pr = u.projection(0, 3);
        assert_eq!(pr.rows(), 1);
        assert!(pr.mul(&u.inclusion(0)).is_zero());
        assert_eq!(pr.mul(&u.section(0, 3)), FMatrix::identity(k, 1));
    }
}
