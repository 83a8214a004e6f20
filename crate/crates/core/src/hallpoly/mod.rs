//! Euler characteristics from point counts: sample a count at several
//! primes, interpolate a polynomial in `q`, certify it on held-out primes
//! and evaluate at `q = 1`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::countkit::{count_filtrations, ext_middle_histogram};
use crate::error::{Error, Result};
use crate::gfarith::{interpolate, is_prime, next_prime, QPolynomial};
use crate::repcore::{IndecTable, IsoClass};

/// Prime ladder and certification policy.
#[derive(Clone, Debug, Serialize)]
pub struct SamplingConfig {
    /// Primes tried first, ascending; later primes follow on demand.
    pub ladder: Vec<u64>,
    pub initial_samples: usize,
    /// Consecutive held-out predictions needed to accept a polynomial.
    pub stable_checks: usize,
    pub max_primes: usize,
    /// Unstable results are errors rather than flagged values.
    pub strict: bool,
    /// Cap on enumerated cocycles per Ext count.
    pub ext_budget: u128,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            ladder: vec![2, 3, 5, 7, 11, 13],
            initial_samples: 3,
            stable_checks: 2,
            max_primes: 8,
            strict: true,
            ext_budget: 1 << 22,
        }
    }
}

impl SamplingConfig {
    pub fn with_ladder(ladder: Vec<u64>) -> Self {
        SamplingConfig { ladder, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ladder.is_empty() {
            return Err(Error::InvalidInput("empty prime ladder".into()));
        }
        if let Some(&p) = self.ladder.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::InvalidPrime(p));
        }
        if self.ladder.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("ladder must be strictly increasing".into()));
        }
        if self.initial_samples < 2 || self.max_primes < self.initial_samples + self.stable_checks - 1 {
            return Err(Error::InvalidInput("sampling policy cannot certify any polynomial".into()));
        }
        Ok(())
    }
}

/// An Euler characteristic with the samples behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiResult {
    pub value: i64,
    #[serde(serialize_with = "poly_string")]
    pub polynomial: QPolynomial,
    pub samples: Vec<(u64, u64)>,
    pub stable: bool,
    pub verification_prime: u64,
}

fn poly_string<S: serde::Serializer>(p: &QPolynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// The `i`-th prime of the ladder, continuing past its end, skipping
/// primes excluded by the presentation.
fn ladder_primes(cfg: &SamplingConfig, table: &IndecTable, n: usize) -> Vec<u64> {
    let pres = table.presentation();
    let mut out: Vec<u64> = cfg.ladder.iter().copied().filter(|&p| pres.admits_prime(p)).take(n).collect();
    let mut p = *cfg.ladder.last().unwrap();
    while out.len() < n {
        p = next_prime(p);
        if pres.admits_prime(p) {
            out.push(p);
        }
    }
    out
}

/// Samples `count` along the ladder until the held-out check passes
/// `stable_checks` times in a row.
pub fn certify<F>(cfg: &SamplingConfig, table: &IndecTable, what: &str, count: F) -> Result<ChiResult>
where
    F: Fn(u64) -> Result<u128> + Sync,
{
    let primes = ladder_primes(cfg, table, cfg.max_primes);
    let to_sample = |p: u64| -> Result<(u64, u64)> {
        let c = count(p)?;
        let c = u64::try_from(c).map_err(|_| Error::Internal(format!("count {c} over F_{p} overflows")))?;
        Ok((p, c))
    };
    let first = (cfg.initial_samples + cfg.stable_checks - 1).min(primes.len());
    let mut samples: Vec<(u64, u64)> = primes[..first].par_iter().map(|&p| to_sample(p)).collect::<Result<_>>()?;
    let mut streak = 0;
    let mut checked = cfg.initial_samples;
    loop {
        while checked <= samples.len() {
            let interp = interpolate(&samples[..checked])?;
            streak = if interp.stable { streak + 1 } else { 0 };
            if streak >= cfg.stable_checks {
                return finish(&samples[..checked], true);
            }
            checked += 1;
        }
        if samples.len() >= primes.len() {
            break;
        }
        samples.push(to_sample(primes[samples.len()])?);
    }
    if cfg.strict {
        return Err(Error::NotPolynomialCount(format!(
            "{what}: held-out prime not predicted after {} primes, samples {samples:?}",
            samples.len()
        )));
    }
    finish(&samples, false)
}

fn finish(samples: &[(u64, u64)], stable: bool) -> Result<ChiResult> {
    let interp = interpolate(samples)?;
    let v = interp.polynomial.value_at_one();
    if !v.is_integer() {
        return Err(Error::Internal(format!("non-integer Euler characteristic {v}")));
    }
    let value = v.to_integer().to_i64().ok_or_else(|| Error::Internal(format!("Euler characteristic {v} overflows")))?;
    Ok(ChiResult {
        value,
        polynomial: interp.polynomial,
        samples: samples.to_vec(),
        stable,
        verification_prime: samples.last().unwrap().0,
    })
}

type FiltKey = (Vec<IsoClass>, IsoClass);
type ExtKey = (IsoClass, IsoClass);
type Histogram = Arc<BTreeMap<IsoClass, u128>>;

/// Memoized Euler characteristics over one table and one ladder. Raw
/// counts are shared between engines built with [`ChiEngine::with_config`].
pub struct ChiEngine {
    table: Arc<IndecTable>,
    cfg: SamplingConfig,
    counts: Arc<CountCache>,
    filt: RwLock<HashMap<FiltKey, ChiResult>>,
    ext: RwLock<HashMap<(IsoClass, IsoClass, IsoClass), ChiResult>>,
}

#[derive(Default)]
struct CountCache {
    filt: RwLock<HashMap<(FiltKey, u64), u128>>,
    ext: RwLock<HashMap<(ExtKey, u64), Histogram>>,
}

impl ChiEngine {
    pub fn new(table: Arc<IndecTable>, cfg: SamplingConfig) -> Result<ChiEngine> {
        cfg.validate()?;
        Ok(ChiEngine { table, cfg, counts: Arc::default(), filt: RwLock::default(), ext: RwLock::default() })
    }

    /// Same table and raw counts, different policy.
    pub fn with_config(&self, cfg: SamplingConfig) -> Result<ChiEngine> {
        cfg.validate()?;
        Ok(ChiEngine {
            table: self.table.clone(),
            cfg,
            counts: self.counts.clone(),
            filt: RwLock::default(),
            ext: RwLock::default(),
        })
    }

    pub fn table(&self) -> &IndecTable {
        &self.table
    }

    pub fn table_arc(&self) -> Arc<IndecTable> {
        self.table.clone()
    }

    pub fn config(&self) -> &SamplingConfig {
        &self.cfg
    }

    /// Point count of the filtration variety at one prime.
    pub fn filtration_count(&self, classes: &[IsoClass], x: &IsoClass, p: u64) -> Result<u128> {
        let key = ((classes.to_vec(), x.clone()), p);
        if let Some(&c) = self.counts.filt.read().unwrap().get(&key) {
            return Ok(c);
        }
        let rep = self.table.rep(x, p)?;
        let c = count_filtrations(classes, &rep, &self.table)?;
        self.counts.filt.write().unwrap().insert(key, c);
        Ok(c)
    }

    /// `|Ext^1(a, b)_X|` for all `X` at one prime; `a` is the quotient and
    /// `b` the submodule.
    pub fn ext_histogram(&self, a: &IsoClass, b: &IsoClass, p: u64) -> Result<Arc<BTreeMap<IsoClass, u128>>> {
        let key = ((a.clone(), b.clone()), p);
        if let Some(h) = self.counts.ext.read().unwrap().get(&key) {
            return Ok(h.clone());
        }
        let (ar, br) = (self.table.rep(a, p)?, self.table.rep(b, p)?);
        let h = Arc::new(ext_middle_histogram(&ar, &br, &self.table, self.cfg.ext_budget)?);
        self.counts.ext.write().unwrap().insert(key, h.clone());
        Ok(h)
    }

    /// `χ(V(classes; x))`, `classes[0]` being the submodule at the bottom.
    pub fn chi_filtration(&self, classes: &[IsoClass], x: &IsoClass) -> Result<ChiResult> {
        let key = (classes.to_vec(), x.clone());
        if let Some(r) = self.filt.read().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let mut total = crate::quiverlab::DimVector::zero(self.table.presentation().vertex_count());
        for c in classes {
            total = &total + &c.dim(&self.table);
        }
        if total != x.dim(&self.table) {
            return Err(Error::DimensionMismatch(format!(
                "subquotients add up to {total}, middle class has dimension {}",
                x.dim(&self.table)
            )));
        }
        let what = format!("filtration count {:?} in {:?}", classes, x);
        let r = certify(&self.cfg, &self.table, &what, |p| self.filtration_count(classes, x, p))?;
        self.filt.write().unwrap().insert(key, r.clone());
        Ok(r)
    }

    /// `χ(Ext^1(a, b)_x)` with `a` the quotient and `b` the submodule.
    /// A dimension mismatch gives the zero count.
    pub fn chi_ext_middle(&self, a: &IsoClass, b: &IsoClass, x: &IsoClass) -> Result<ChiResult> {
        let key = (a.clone(), b.clone(), x.clone());
        if let Some(r) = self.ext.read().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let t = &self.table;
        let what = format!("extension count {:?} by {:?} through {:?}", a, b, x);
        let r = if &a.dim(t) + &b.dim(t) != x.dim(t) {
            certify(&self.cfg, t, &what, |_| Ok(0))?
        } else {
            certify(&self.cfg, t, &what, |p| Ok(self.ext_histogram(a, b, p)?.get(x).copied().unwrap_or(0)))?
        };
        self.ext.write().unwrap().insert(key, r.clone());
        Ok(r)
    }

    /// Every certified result so far, in a deterministic order.
    pub fn results(&self) -> Vec<(String, ChiResult)> {
        let t = &self.table;
        let show = |c: &IsoClass| c.display(t).to_string();
        let mut out: Vec<(String, ChiResult)> = self
            .filt
            .read()
            .unwrap()
            .iter()
            .map(|((cs, x), r)| {
                let names: Vec<String> = cs.iter().map(show).collect();
                (format!("V({}; {})", names.join(", "), show(x)), r.clone())
            })
            .chain(self.ext.read().unwrap().iter().map(|((a, b, x), r)| {
                (format!("Ext({}, {})_{}", show(a), show(b), show(x)), r.clone())
            }))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

impl ChiEngine {
    /// Recomputes every result of `self` with `other` and lists the keys
    /// whose polynomials differ.
    pub fn compare_with(&self, other: &ChiEngine) -> Result<Vec<String>> {
        let t = &self.table;
        let show = |c: &IsoClass| c.display(t).to_string();
        let mut filt: Vec<(FiltKey, QPolynomial)> =
            self.filt.read().unwrap().iter().map(|(k, r)| (k.clone(), r.polynomial.clone())).collect();
        filt.sort_by(|a, b| a.0.cmp(&b.0));
        let mut ext: Vec<((IsoClass, IsoClass, IsoClass), QPolynomial)> =
            self.ext.read().unwrap().iter().map(|(k, r)| (k.clone(), r.polynomial.clone())).collect();
        ext.sort_by(|a, b| a.0.cmp(&b.0));
        let mut bad = Vec::new();
        for ((cs, x), poly) in filt {
            if other.chi_filtration(&cs, &x)?.polynomial != poly {
                let names: Vec<String> = cs.iter().map(show).collect();
                bad.push(format!("V({}; {})", names.join(", "), show(&x)));
            }
        }
        for ((a, b, x), poly) in ext {
            if other.chi_ext_middle(&a, &b, &x)?.polynomial != poly {
                bad.push(format!("Ext({}, {})_{}", show(&a), show(&b), show(&x)));
            }
        }
        Ok(bad)
    }

    /// Number of certified results held.
    pub fn result_count(&self) -> usize {
        self.filt.read().unwrap().len() + self.ext.read().unwrap().len()
    }
}
