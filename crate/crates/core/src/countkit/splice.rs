use crate::error::{Error, Result};
use crate::gfarith::FMatrix;
use crate::quiverlab::QuiverPresentation;
use crate::repcore::{direct_sum, span_basis, GradedMap, GradedSubspace, Rep};

/// Data for the splice: submodules `S ⊆ A`, `T ⊆ B` and two short exact
/// columns `0 -> T -e1-> B' -e3-> S -> 0` and
/// `0 -> B/T -e2-> A' -e4-> A/S -> 0`. Sub and quotient modules use the
/// coordinates of [`GradedSubspace::sub_rep`] and
/// [`GradedSubspace::quotient_rep`].
#[derive(Clone, Debug)]
pub struct SpliceInput {
    pub a: Rep,
    pub s: GradedSubspace,
    pub b: Rep,
    pub t: GradedSubspace,
    pub b_prime: Rep,
    pub e1: GradedMap,
    pub e3: GradedMap,
    pub a_prime: Rep,
    pub e2: GradedMap,
    pub e4: GradedMap,
}

/// `0 -> T -> Y -f-> X -> A/S -> 0`, verified exact.
#[derive(Clone, Debug)]
pub struct Splice {
    pub t: Rep,
    /// Pushout `(B ⊕ B') / {(u_T t, -e1 t)}`.
    pub y: Rep,
    /// Pullback `{(a, a') : q_S(a) = e4(a')}`.
    pub x: Rep,
    pub a_over_s: Rep,
    pub t_to_y: GradedMap,
    pub f: GradedMap,
    pub x_to_quotient: GradedMap,
}

fn check_column(pres: &QuiverPresentation, names: &str, l: &Rep, m: &Rep, r: &Rep, i: &GradedMap, p: &GradedMap) -> Result<()> {
    let bad = |why: &str| Err(Error::InvalidInput(format!("column {names} is not short exact: {why}")));
    if i.source_dim() != *l.dim() || i.target_dim() != *m.dim() || p.source_dim() != *m.dim() || p.target_dim() != *r.dim() {
        return bad("shapes do not match");
    }
    if !i.is_module_map(pres, l, m) || !p.is_module_map(pres, m, r) {
        return bad("maps are not module maps");
    }
    if !i.is_injective() || !p.is_surjective() || !p.compose(i).is_zero() || l.dim() + r.dim() != *m.dim() {
        return bad("not exact");
    }
    Ok(())
}

/// Vertex-wise coordinates of the columns of `v` in the basis given by
/// the columns of `basis` (which must contain them).
fn coords(basis: &FMatrix, v: &FMatrix) -> FMatrix {
    let cols: Vec<Vec<u64>> = (0..v.cols())
        .map(|j| basis.solve(&v.column(j)).expect("vector lies in the subspace"))
        .collect();
    FMatrix::from_columns(v.field(), basis.cols(), &cols)
}

pub fn splice_pushout_pullback(pres: &QuiverPresentation, input: &SpliceInput) -> Result<Splice> {
    let SpliceInput { a, s, b, t, b_prime, e1, e3, a_prime, e2, e4 } = input;
    let field = a.field();
    if !s.is_stable(pres, a) || !t.is_stable(pres, b) {
        return Err(Error::InvalidInput("S and T must be submodules".into()));
    }
    let s_rep = s.sub_rep(pres, a);
    let t_rep = t.sub_rep(pres, b);
    let a_s = s.quotient_rep(pres, a);
    let b_t = t.quotient_rep(pres, b);
    check_column(pres, "T -> B' -> S", &t_rep, b_prime, &s_rep, e1, e3)?;
    check_column(pres, "B/T -> A' -> A/S", &b_t, a_prime, &a_s, e2, e4)?;
    let n = pres.vertex_count();

    // Y = (B ⊕ B') / W,  W = image of t -> (u_T t, -e1 t)
    let bb = direct_sum(b, b_prime)?;
    let w = GradedSubspace::new(
        (0..n)
            .map(|i| {
                let emb = t.inclusion(i).vstack(&e1.comp(i).scale(field.neg(1)));
                span_basis(field, bb.dim()[i], &emb.column_space())
            })
            .collect(),
    );
    let y = w.quotient_rep(pres, &bb);

    // X = ker (A ⊕ A' -> A/S, (a, a') |-> q_S a - e4 a')
    let aa = direct_sum(a, a_prime)?;
    let phi = GradedMap::new((0..n).map(|i| s.projection(i, a.dim()[i]).hstack(&e4.comp(i).scale(field.neg(1)))).collect());
    let k = phi.kernel();
    let x = k.sub_rep(pres, &aa);

    let mut t_to_y = Vec::new();
    let mut f = Vec::new();
    let mut x_to_q = Vec::new();
    for i in 0..n {
        let (bi, bpi, ai, api) = (b.dim()[i], b_prime.dim()[i], a.dim()[i], a_prime.dim()[i]);
        let proj_y = w.projection(i, bi + bpi);
        let sec_y = w.section(i, bi + bpi);
        let incl_x = k.inclusion(i);
        // t |-> class of (u_T t, 0)
        let tt = t.inclusion(i).vstack(&FMatrix::zeros(field, bpi, t.bases()[i].rows()));
        t_to_y.push(proj_y.mul(&tt));
        // (b, b') |-> (u_S e3 b', e2 q_T b)
        let mut lift = FMatrix::zeros(field, ai + api, bi + bpi);
        lift.paste(0, bi, &s.inclusion(i).mul(e3.comp(i)));
        lift.paste(ai, 0, &e2.comp(i).mul(&t.projection(i, bi)));
        f.push(coords(&incl_x, &lift.mul(&sec_y)));
        // (a, a') |-> q_S a
        let first = FMatrix::identity(field, ai).hstack(&FMatrix::zeros(field, ai, api));
        x_to_q.push(s.projection(i, ai).mul(&first).mul(&incl_x));
    }
    let splice = Splice {
        t: t_rep,
        y,
        x,
        a_over_s: a_s,
        t_to_y: GradedMap::new(t_to_y),
        f: GradedMap::new(f),
        x_to_quotient: GradedMap::new(x_to_q),
    };
    verify_exact(pres, &splice)?;
    Ok(splice)
}

/// Rank checks for exactness of `0 -> T -> Y -> X -> A/S -> 0`.
fn verify_exact(pres: &QuiverPresentation, sp: &Splice) -> Result<()> {
    let fail = |why: &str| Err(Error::Internal(format!("spliced sequence is not exact: {why}")));
    if !sp.t_to_y.is_module_map(pres, &sp.t, &sp.y)
        || !sp.f.is_module_map(pres, &sp.y, &sp.x)
        || !sp.x_to_quotient.is_module_map(pres, &sp.x, &sp.a_over_s)
    {
        return fail("a map is not a module map");
    }
    if !sp.t_to_y.is_injective() {
        return fail("T -> Y is not injective");
    }
    if !sp.f.compose(&sp.t_to_y).is_zero() || !sp.x_to_quotient.compose(&sp.f).is_zero() {
        return fail("consecutive maps do not compose to zero");
    }
    let rf = sp.f.rank();
    for i in 0..rf.len() {
        if rf[i] + sp.t.dim()[i] != sp.y.dim()[i] {
            return fail("ker f differs from the image of T");
        }
        if rf[i] + sp.a_over_s.dim()[i] != sp.x.dim()[i] {
            return fail("im f differs from the kernel of X -> A/S");
        }
    }
    if !sp.x_to_quotient.is_surjective() {
        return fail("X -> A/S is not surjective");
    }
    Ok(())
}
