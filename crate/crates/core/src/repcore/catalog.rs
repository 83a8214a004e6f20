use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::countkit::ext_cocycle_spaces;
use crate::error::{Error, Result};
use crate::gfarith::{advance, is_prime, FMatrix, PrimeField};
use crate::quiverlab::{check_relations, multisets_summing_to, DimVector, QuiverPresentation};

use super::decompose::{is_indecomposable, iso_to_indecomposable};
use super::hom::{aut_order, enumeration_size, hom_dim};
use super::isoclass::IsoClass;
use super::rep::{direct_sum, Rep};

/// Isomorphism invariants used to order classes and to align labels
/// across primes. The derived order is the canonical catalog order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub dim: DimVector,
    pub dim_end: usize,
    /// `(dim Hom(X, M), dim Hom(M, X))` for every class `X` of
    /// lexicographically smaller dimension vector, in catalog order.
    pub hom_profile: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndecInfo {
    pub label: String,
    pub dim: DimVector,
    pub fingerprint: Fingerprint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogMethod {
    /// Exhaustive when the point count fits the budget, else extensions.
    Auto,
    /// Every point of every `E_d(F_p)`.
    Exhaustive,
    /// Middle terms of `0 -> S_v -> M -> M' -> 0` over all classes `M'` of
    /// smaller dimension. Complete when every module has a simple submodule,
    /// i.e. for admissible relations.
    Extensions,
}

#[derive(Clone, Debug)]
pub struct CatalogOptions {
    pub method: CatalogMethod,
    /// Cap on the number of points (or cocycle classes) visited per prime.
    pub max_points: u128,
    /// `Auto` enumerates every point only below this many.
    pub exhaustive_limit: u128,
    /// Cap on `|End(M)|` for exhaustive endomorphism searches.
    pub end_budget: u128,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        CatalogOptions { method: CatalogMethod::Auto, max_points: 200_000, exhaustive_limit: 5_000, end_budget: 1 << 22 }
    }
}

/// Indecomposables at one prime, in canonical order.
#[derive(Clone, Debug)]
pub struct PrimeCatalog {
    pub prime: u64,
    pub method: CatalogMethod,
    pub reps: Vec<Rep>,
    pub fingerprints: Vec<Fingerprint>,
    pub warnings: Vec<String>,
}

fn entries(pres: &QuiverPresentation, d: &DimVector) -> usize {
    pres.arrows().iter().map(|a| d[a.target] * d[a.source]).sum()
}

/// Number of points of the ambient matrix spaces for all `d <= bound`.
pub fn exhaustive_cost(pres: &QuiverPresentation, p: u64, bound: &DimVector) -> Option<u128> {
    let mut total: u128 = 0;
    for d in bound.below() {
        let n = enumeration_size(p, entries(pres, &d), u128::MAX)?;
        total = total.checked_add(n)?;
    }
    Some(total)
}

/// Nonzero `d <= bound`, by total dimension then lexicographically.
fn build_order(bound: &DimVector) -> Vec<DimVector> {
    let mut ds: Vec<DimVector> = bound.below().into_iter().filter(|d| !d.is_zero()).collect();
    ds.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
    ds
}

fn validate_prime(pres: &QuiverPresentation, p: u64) -> Result<PrimeField> {
    if !is_prime(p) || !pres.admits_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    PrimeField::new(p)
}

/// Adds `m` to `found` unless an isomorphic class is already there.
fn insert_new(pres: &QuiverPresentation, found: &mut Vec<Rep>, m: Rep) -> Result<()> {
    for f in found.iter() {
        if iso_to_indecomposable(pres, &m, f)? {
            return Ok(());
        }
    }
    found.push(m);
    Ok(())
}

fn exhaustive_at(pres: &QuiverPresentation, field: PrimeField, d: &DimVector, opts: &CatalogOptions) -> Result<Vec<Rep>> {
    let shapes: Vec<(usize, usize)> = pres.arrows().iter().map(|a| (d[a.target], d[a.source])).collect();
    let n = entries(pres, d);
    let mut values = vec![0u64; n];
    let mut found = Vec::new();
    loop {
        let mut off = 0;
        let maps: Vec<FMatrix> = shapes
            .iter()
            .map(|&(r, c)| {
                let m = FMatrix::from_vec(field, r, c, values[off..off + r * c].to_vec());
                off += r * c;
                m
            })
            .collect();
        let rep = Rep::from_parts_unchecked(field, d.clone(), maps);
        if check_relations(pres, &rep) && is_indecomposable(pres, &rep, opts.end_budget)? {
            insert_new(pres, &mut found, rep)?;
        }
        if !advance(&mut values, field.p()) {
            break;
        }
    }
    Ok(found)
}

fn extensions_at(
    pres: &QuiverPresentation,
    field: PrimeField,
    d: &DimVector,
    lower: &[Rep],
    visited: &mut u128,
    opts: &CatalogOptions,
) -> Result<Vec<Rep>> {
    let dims: Vec<&DimVector> = lower.iter().map(|r| r.dim()).collect();
    let mut found = Vec::new();
    for v in 0..pres.vertex_count() {
        let Some(e) = d.checked_sub(&DimVector::unit(pres.vertex_count(), v)) else { continue };
        let simple = Rep::simple(pres, field, v);
        for class in multisets_summing_to(&dims, &e) {
            let mut quotient = Rep::zero(pres, field);
            for i in class.indices() {
                quotient = direct_sum(&quotient, &lower[i])?;
            }
            let space = ext_cocycle_spaces(pres, &quotient, &simple)?;
            let reps = space.ext_representatives();
            let n = enumeration_size(field.p(), reps.len(), opts.max_points).ok_or_else(|| {
                Error::BudgetExceeded(format!("Ext^1 with {}^{} classes while cataloguing {d}", field.p(), reps.len()))
            })?;
            *visited += n;
            if *visited > opts.max_points {
                return Err(Error::BudgetExceeded(format!(
                    "extension catalog over F_{} visits more than {} classes",
                    field.p(),
                    opts.max_points
                )));
            }
            let mut coeffs = vec![0u64; reps.len()];
            let width = space.width();
            loop {
                let mut delta = vec![0u64; width];
                for (c, r) in coeffs.iter().zip(&reps) {
                    if *c != 0 {
                        for (x, y) in delta.iter_mut().zip(r) {
                            *x = field.add(*x, field.mul(*c, *y));
                        }
                    }
                }
                let m = space.glue(&delta);
                if is_indecomposable(pres, &m, opts.end_budget)? {
                    insert_new(pres, &mut found, m)?;
                }
                if !advance(&mut coeffs, field.p()) {
                    break;
                }
            }
        }
    }
    Ok(found)
}

/// All indecomposables of dimension at most `bound` over `F_prime`, one
/// representative per isomorphism class, in canonical fingerprint order.
pub fn catalog_indecomposables(
    pres: &QuiverPresentation,
    prime: u64,
    bound: &DimVector,
    opts: &CatalogOptions,
) -> Result<PrimeCatalog> {
    let field = validate_prime(pres, prime)?;
    if bound.len() != pres.vertex_count() {
        return Err(Error::DimensionMismatch(format!("bound {bound} over a quiver with {} vertices", pres.vertex_count())));
    }
    let cost = exhaustive_cost(pres, prime, bound);
    let method = match opts.method {
        CatalogMethod::Auto => match cost {
            Some(c) if c <= opts.exhaustive_limit.min(opts.max_points) => CatalogMethod::Exhaustive,
            _ => CatalogMethod::Extensions,
        },
        CatalogMethod::Exhaustive => {
            match cost {
                Some(c) if c <= opts.max_points => {}
                _ => {
                    return Err(Error::BudgetExceeded(format!(
                        "exhaustive catalog over F_{prime} up to {bound} visits {} points (budget {})",
                        cost.map_or("more than 2^128".to_string(), |c| c.to_string()),
                        opts.max_points
                    )))
                }
            }
            CatalogMethod::Exhaustive
        }
        CatalogMethod::Extensions => CatalogMethod::Extensions,
    };

    let mut reps: Vec<Rep> = Vec::new();
    let mut visited = 0u128;
    for d in build_order(bound) {
        let new = match method {
            CatalogMethod::Exhaustive => exhaustive_at(pres, field, &d, opts)?,
            _ => extensions_at(pres, field, &d, &reps, &mut visited, opts)?,
        };
        reps.extend(new);
    }

    // fingerprints, computed in increasing dimension so profiles refer to
    // already-ordered classes
    let mut by_dim: BTreeMap<DimVector, Vec<Rep>> = BTreeMap::new();
    for r in reps {
        by_dim.entry(r.dim().clone()).or_default().push(r);
    }
    let mut ordered: Vec<(Fingerprint, Rep)> = Vec::new();
    for (d, group) in by_dim {
        let lower: Vec<&Rep> = ordered.iter().filter(|(f, _)| f.dim < d).map(|(_, r)| r).collect();
        let mut fps = Vec::new();
        for m in group {
            let dim_end = hom_dim(pres, &m, &m)?;
            let mut hom_profile = Vec::with_capacity(lower.len());
            for x in &lower {
                hom_profile.push((hom_dim(pres, x, &m)?, hom_dim(pres, &m, x)?));
            }
            fps.push((Fingerprint { dim: d.clone(), dim_end, hom_profile }, m));
        }
        fps.sort_by(|a, b| a.0.cmp(&b.0));
        for w in fps.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::FingerprintCollision(format!(
                    "two non-isomorphic indecomposables of dimension {d} over F_{prime} share a fingerprint"
                )));
            }
        }
        ordered.extend(fps);
    }

    let mut warnings = Vec::new();
    for (fp, m) in &ordered {
        // End(M) local with residue field F_p iff |Aut| = p^k - p^(k-1)
        let k = fp.dim_end as u32;
        match aut_order(pres, m, opts.end_budget) {
            Ok(units) => {
                let pk = (prime as u128).pow(k);
                if units != pk - pk / prime as u128 {
                    warnings.push(format!(
                        "indecomposable of dimension {} over F_{prime} is not absolutely indecomposable",
                        fp.dim
                    ));
                }
            }
            Err(_) => warnings.push(format!(
                "absolute indecomposability of a class of dimension {} over F_{prime} not checked (End too large)",
                fp.dim
            )),
        }
    }

    let (fingerprints, reps) = ordered.into_iter().unzip();
    Ok(PrimeCatalog { prime, method, reps, fingerprints, warnings })
}

fn assign_labels(pres: &QuiverPresentation, fps: &[Fingerprint]) -> Vec<String> {
    let n = pres.vertex_count();
    let mut per_dim: HashMap<&DimVector, usize> = HashMap::new();
    for f in fps {
        *per_dim.entry(&f.dim).or_default() += 1;
    }
    let mut seen: HashMap<&DimVector, usize> = HashMap::new();
    fps.iter()
        .map(|f| {
            let count = per_dim[&f.dim];
            let k = seen.entry(&f.dim).or_default();
            *k += 1;
            if count == 1 && f.dim.total() == 1 {
                let v = (0..n).find(|&i| f.dim[i] == 1).unwrap();
                return format!("S{}", pres.vertices()[v]);
            }
            let parts: Vec<String> = f.dim.as_slice().iter().map(|x| x.to_string()).collect();
            let sep = if f.dim.as_slice().iter().any(|&x| x > 9) { "." } else { "" };
            let base = format!("M{}", parts.join(sep));
            if count == 1 {
                base
            } else {
                format!("{base}_{k}")
            }
        })
        .collect()
}

/// Indecomposable classes with labels shared by every catalogued prime.
/// Catalogs for further primes are built on demand and must reproduce the
/// same fingerprint sequence.
pub struct IndecTable {
    pres: QuiverPresentation,
    bound: DimVector,
    opts: CatalogOptions,
    classes: Vec<IndecInfo>,
    catalogs: RwLock<BTreeMap<u64, Arc<PrimeCatalog>>>,
    cache: Mutex<HashMap<Rep, IsoClass>>,
    profiles: Mutex<HashMap<(u64, DimVector), Arc<Profiles>>>,
}

/// For one prime and dimension vector: the indecomposables `C_i` that fit,
/// and for every class `X` of that dimension the vector `dim Hom(C_i, X)`.
#[derive(Debug)]
pub(crate) struct Profiles {
    pub(crate) probes: Vec<usize>,
    pub(crate) classes: Vec<(IsoClass, Vec<usize>)>,
}

impl fmt::Debug for IndecTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndecTable")
            .field("bound", &self.bound)
            .field("classes", &self.classes)
            .field("primes", &self.primes())
            .finish()
    }
}

impl IndecTable {
    pub fn build(pres: QuiverPresentation, primes: &[u64], bound: DimVector, opts: CatalogOptions) -> Result<IndecTable> {
        if primes.is_empty() {
            return Err(Error::InvalidInput("at least one prime is required".into()));
        }
        let mut sorted = primes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != primes.len() {
            return Err(Error::InvalidInput("primes must be distinct".into()));
        }
        let cats: Vec<PrimeCatalog> = sorted
            .par_iter()
            .map(|&p| catalog_indecomposables(&pres, p, &bound, &opts))
            .collect::<Result<_>>()?;
        let reference = &cats[0].fingerprints;
        for c in &cats[1..] {
            check_alignment(reference, c)?;
        }
        let labels = assign_labels(&pres, reference);
        let classes = reference
            .iter()
            .zip(labels)
            .map(|(f, label)| IndecInfo { label, dim: f.dim.clone(), fingerprint: f.clone() })
            .collect();
        let catalogs = cats.into_iter().map(|c| (c.prime, Arc::new(c))).collect();
        Ok(IndecTable { pres, bound, opts, classes, catalogs: RwLock::new(catalogs),
            cache: Mutex::default(),
            profiles: Mutex::default(),
        })
    }

    pub fn presentation(&self) -> &QuiverPresentation {
        &self.pres
    }

    pub fn dim_bound(&self) -> &DimVector {
        &self.bound
    }

    pub fn classes(&self) -> &[IndecInfo] {
        &self.classes
    }

    pub fn options(&self) -> &CatalogOptions {
        &self.opts
    }

    pub fn end_budget(&self) -> u128 {
        self.opts.end_budget
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    /// Every indecomposable as a one-term class, in catalog order.
    pub fn indecomposables(&self) -> Vec<IsoClass> {
        (0..self.classes.len()).map(IsoClass::single).collect()
    }

    pub fn primes(&self) -> Vec<u64> {
        self.catalogs.read().unwrap().keys().copied().collect()
    }

    /// The catalog at `p`, if already built.
    pub fn catalog(&self, p: u64) -> Result<Arc<PrimeCatalog>> {
        self.catalogs.read().unwrap().get(&p).cloned().ok_or(Error::PrimeNotCatalogued(p))
    }

    /// The catalog at `p`, building and aligning it first if needed.
    pub fn ensure_prime(&self, p: u64) -> Result<Arc<PrimeCatalog>> {
        if let Ok(c) = self.catalog(p) {
            return Ok(c);
        }
        let cat = catalog_indecomposables(&self.pres, p, &self.bound, &self.opts)?;
        let reference: Vec<Fingerprint> = self.classes.iter().map(|c| c.fingerprint.clone()).collect();
        check_alignment(&reference, &cat)?;
        let mut w = self.catalogs.write().unwrap();
        Ok(w.entry(p).or_insert_with(|| Arc::new(cat)).clone())
    }

    pub fn indec_rep(&self, class: usize, p: u64) -> Result<Rep> {
        Ok(self.ensure_prime(p)?.reps[class].clone())
    }

    /// Direct sum of the representatives, summands in ascending label order.
    pub fn rep(&self, class: &IsoClass, p: u64) -> Result<Rep> {
        let cat = self.ensure_prime(p)?;
        let field = PrimeField::new(p)?;
        let mut m = Rep::zero(&self.pres, field);
        for i in class.indices() {
            m = direct_sum(&m, &cat.reps[i])?;
        }
        Ok(m)
    }

    /// All classes of dimension `d`.
    pub fn classes_of_dim(&self, d: &DimVector) -> Result<Vec<IsoClass>> {
        crate::quiverlab::krull_schmidt_vectors(d, self)
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w: Vec<String> = self.catalogs.read().unwrap().values().flat_map(|c| c.warnings.clone()).collect();
        w.sort();
        w.dedup();
        w
    }

    pub(crate) fn cached(&self, m: &Rep) -> Option<IsoClass> {
        self.cache.lock().unwrap().get(m).cloned()
    }

    pub(crate) fn profiles(&self, p: u64, d: &DimVector) -> Result<Arc<Profiles>> {
        let key = (p, d.clone());
        if let Some(x) = self.profiles.lock().unwrap().get(&key) {
            return Ok(x.clone());
        }
        let cat = self.ensure_prime(p)?;
        let probes: Vec<usize> = (0..self.classes.len()).filter(|&i| self.classes[i].dim.le(d)).collect();
        let mut hom = vec![vec![0usize; self.classes.len()]; probes.len()];
        for (r, &i) in probes.iter().enumerate() {
            for &j in &probes {
                hom[r][j] = hom_dim(&self.pres, &cat.reps[i], &cat.reps[j])?;
            }
        }
        let classes = self
            .classes_of_dim(d)?
            .into_iter()
            .map(|x| {
                let v = (0..probes.len()).map(|r| x.terms().iter().map(|&(j, k)| k as usize * hom[r][j]).sum()).collect();
                (x, v)
            })
            .collect();
        let out = Arc::new(Profiles { probes, classes });
        self.profiles.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    pub(crate) fn remember(&self, m: &Rep, c: &IsoClass) {
        self.cache.lock().unwrap().insert(m.clone(), c.clone());
    }

    /// Export: classes sorted by label with dimension vector, fingerprint and
    /// per-prime representatives (row-major integer entries per arrow).
    pub fn to_json(&self) -> Value {
        let cats = self.catalogs.read().unwrap();
        let mut order: Vec<usize> = (0..self.classes.len()).collect();
        order.sort_by(|&a, &b| self.classes[a].label.cmp(&self.classes[b].label));
        let classes: Vec<Value> = order
            .into_iter()
            .map(|i| {
                let c = &self.classes[i];
                let reps: serde_json::Map<String, Value> = cats
                    .iter()
                    .map(|(p, cat)| {
                        let maps: Vec<Value> = cat.reps[i]
                            .maps()
                            .iter()
                            .map(|m| json!(m.to_int_rows()))
                            .collect();
                        (p.to_string(), Value::Array(maps))
                    })
                    .collect();
                json!({
                    "label": c.label,
                    "dim": c.dim,
                    "fingerprint": {
                        "dim_end": c.fingerprint.dim_end,
                        "hom_profile": c.fingerprint.hom_profile,
                    },
                    "reps": reps,
                })
            })
            .collect();
        json!({
            "arrows": self.pres.arrows().iter().map(|a| a.name.clone()).collect::<Vec<_>>(),
            "dim_bound": self.bound,
            "primes": cats.keys().collect::<Vec<_>>(),
            "classes": classes,
        })
    }
}

fn check_alignment(reference: &[Fingerprint], cat: &PrimeCatalog) -> Result<()> {
    if reference != cat.fingerprints.as_slice() {
        return Err(Error::FingerprintCollision(format!(
            "catalog over F_{} ({} classes) does not reproduce the reference fingerprints ({} classes); labels cannot be aligned across primes",
            cat.prime,
            cat.fingerprints.len(),
            reference.len()
        )));
    }
    Ok(())
}
