use std::collections::BTreeMap;

use serde_json::{Map, Value};

use crate::repcore::{IndecTable, IsoClass};

/// An integer combination of class symbols `u_M`; zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HallElement {
    terms: BTreeMap<IsoClass, i64>,
}

/// An integer combination of `u_M ⊗ u_N`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorElement {
    terms: BTreeMap<(IsoClass, IsoClass), i64>,
}

fn add_term<K: Ord>(map: &mut BTreeMap<K, i64>, k: K, c: i64) {
    if c == 0 {
        return;
    }
    let v = map.get(&k).copied().unwrap_or(0) + c;
    if v == 0 {
        map.remove(&k);
    } else {
        map.insert(k, v);
    }
}

impl HallElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(c: IsoClass) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(c, 1);
        HallElement { terms }
    }

    /// The unit `u_0`.
    pub fn one() -> Self {
        Self::basis(IsoClass::zero())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (IsoClass, i64)>) -> Self {
        let mut e = Self::zero();
        for (c, k) in terms {
            e.add_term(c, k);
        }
        e
    }

    pub fn add_term(&mut self, c: IsoClass, k: i64) {
        add_term(&mut self.terms, c, k);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IsoClass, i64)> {
        self.terms.iter().map(|(c, &k)| (c, k))
    }

    pub fn coeff(&self, c: &IsoClass) -> i64 {
        self.terms.get(c).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &IsoClass> {
        self.terms.keys()
    }

    pub fn add(&self, other: &HallElement) -> HallElement {
        let mut out = self.clone();
        for (c, k) in other.terms() {
            out.add_term(c.clone(), k);
        }
        out
    }

    pub fn sub(&self, other: &HallElement) -> HallElement {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> HallElement {
        Self::from_terms(self.terms.iter().map(|(c, &v)| (c.clone(), v * k)))
    }

    /// `{"S1+S2": 1, ...}` keyed by label expressions.
    pub fn to_json(&self, table: &IndecTable) -> Value {
        let mut m = Map::new();
        for (c, k) in self.terms() {
            m.insert(c.display(table).to_string(), Value::from(k));
        }
        Value::Object(m)
    }

    pub fn show(&self, table: &IndecTable) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<(String, i64)> = self.terms().map(|(c, k)| (c.display(table).to_string(), k)).collect();
        parts.sort();
        parts.iter().map(|(c, k)| if *k == 1 { format!("u[{c}]") } else { format!("{k}*u[{c}]") }).collect::<Vec<_>>().join(" + ")
    }
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(a: IsoClass, b: IsoClass) -> Self {
        let mut e = Self::zero();
        e.add_term(a, b, 1);
        e
    }

    pub fn add_term(&mut self, a: IsoClass, b: IsoClass, k: i64) {
        add_term(&mut self.terms, (a, b), k);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IsoClass, &IsoClass, i64)> {
        self.terms.iter().map(|((a, b), &k)| (a, b, k))
    }

    pub fn coeff(&self, a: &IsoClass, b: &IsoClass) -> i64 {
        self.terms.get(&(a.clone(), b.clone())).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for (a, b, k) in other.terms() {
            out.add_term(a.clone(), b.clone(), k);
        }
        out
    }

    pub fn scale(&self, k: i64) -> TensorElement {
        let mut out = Self::zero();
        for (a, b, v) in self.terms() {
            out.add_term(a.clone(), b.clone(), v * k);
        }
        out
    }

    /// `{"A ⊗ B": k}` keyed by label expressions.
    pub fn to_json(&self, table: &IndecTable) -> Value {
        let mut m = Map::new();
        for (a, b, k) in self.terms() {
            m.insert(format!("{} ⊗ {}", a.display(table), b.display(table)), Value::from(k));
        }
        Value::Object(m)
    }
}
