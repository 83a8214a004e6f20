use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quiverlab::DimVector;

use super::catalog::IndecTable;

/// An isomorphism class as a Krull–Schmidt symbol: a multiset of catalogued
/// indecomposables, stored as `(class index, multiplicity)` sorted by index.
/// The empty multiset is the zero module.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoClass(Vec<(usize, u32)>);

impl IsoClass {
    pub fn zero() -> Self {
        IsoClass(Vec::new())
    }

    pub fn single(class: usize) -> Self {
        IsoClass(vec![(class, 1)])
    }

    /// Merges repeated indices and drops zero multiplicities.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut v: Vec<(usize, u32)> = Vec::new();
        let mut all: Vec<(usize, u32)> = pairs.into_iter().filter(|&(_, m)| m > 0).collect();
        all.sort_unstable();
        for (i, m) in all {
            match v.last_mut() {
                Some(last) if last.0 == i => last.1 += m,
                _ => v.push((i, m)),
            }
        }
        IsoClass(v)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Self::from_pairs(indices.into_iter().map(|i| (i, 1)))
    }

    pub fn terms(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of indecomposable summands counted with multiplicity.
    pub fn gamma(&self) -> u32 {
        self.0.iter().map(|&(_, m)| m).sum()
    }

    pub fn multiplicity(&self, class: usize) -> u32 {
        self.0.iter().find(|&&(i, _)| i == class).map_or(0, |&(_, m)| m)
    }

    pub fn is_indecomposable(&self) -> bool {
        self.gamma() == 1
    }

    /// Indices with repetition, ascending.
    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().flat_map(|&(i, m)| std::iter::repeat_n(i, m as usize)).collect()
    }

    pub fn dim(&self, table: &IndecTable) -> DimVector {
        let mut d = DimVector::zero(table.presentation().vertex_count());
        for &(i, m) in &self.0 {
            d = &d + &table.classes()[i].dim.scaled(m as usize);
        }
        d
    }

    /// Direct sum of classes (multiset union).
    pub fn union(&self, other: &IsoClass) -> IsoClass {
        Self::from_pairs(self.0.iter().chain(&other.0).copied())
    }

    /// `self - other` as multisets, if `other` is contained in `self`.
    pub fn difference(&self, other: &IsoClass) -> Option<IsoClass> {
        let mut out = Vec::new();
        for &(i, m) in &self.0 {
            let k = other.multiplicity(i);
            if k > m {
                return None;
            }
            out.push((i, m - k));
        }
        if other.0.iter().any(|&(i, _)| self.multiplicity(i) == 0) {
            return None;
        }
        Some(Self::from_pairs(out))
    }

    /// Every ordered pair `(a, b)` with `a ⊕ b = self`, sub-multiset `a`
    /// running over componentwise choices `0 <= k_i <= m_i` in ascending order.
    pub fn splittings(&self) -> Vec<(IsoClass, IsoClass)> {
        let mut out = Vec::new();
        let mut k = vec![0u32; self.0.len()];
        loop {
            let a = Self::from_pairs(self.0.iter().zip(&k).map(|(&(i, _), &ki)| (i, ki)));
            let b = Self::from_pairs(self.0.iter().zip(&k).map(|(&(i, m), &ki)| (i, m - ki)));
            out.push((a, b));
            let mut j = k.len();
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                if k[j] < self.0[j].1 {
                    k[j] += 1;
                    for x in k.iter_mut().skip(j + 1) {
                        *x = 0;
                    }
                    break;
                }
            }
        }
    }

    /// `∏ m_i!`.
    pub fn factorial_weight(&self) -> u64 {
        self.0.iter().map(|&(_, m)| (1..=m as u64).product::<u64>()).product()
    }

    /// Label expression such as `S1+S2`, `M11+2S1` or `0`, summands sorted by label.
    pub fn display<'a>(&'a self, table: &'a IndecTable) -> impl fmt::Display + 'a {
        IsoDisplay { class: self, table }
    }

    /// Parses a label expression (terms joined by `+`, each an optional
    /// multiplicity followed by a label; `0` is the zero class).
    pub fn parse(expr: &str, table: &IndecTable) -> Result<IsoClass> {
        let expr = expr.trim();
        if expr == "0" {
            return Ok(IsoClass::zero());
        }
        let mut pairs = Vec::new();
        for term in expr.split('+') {
            let term = term.trim();
            let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
            let (num, rest) = term.split_at(digits);
            let rest = rest.strip_prefix('*').unwrap_or(rest).trim();
            let mult: u32 = if num.is_empty() {
                1
            } else {
                num.parse().map_err(|_| Error::UnknownLabel(term.to_string()))?
            };
            let idx = table.label_index(rest).ok_or_else(|| Error::UnknownLabel(term.to_string()))?;
            pairs.push((idx, mult));
        }
        if pairs.iter().any(|&(_, m)| m == 0) {
            return Err(Error::UnknownLabel(expr.to_string()));
        }
        Ok(IsoClass::from_pairs(pairs))
    }
}

struct IsoDisplay<'a> {
    class: &'a IsoClass,
    table: &'a IndecTable,
}

impl fmt::Display for IsoDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.class.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&str, u32)> =
            self.class.0.iter().map(|&(i, m)| (self.table.classes()[i].label.as_str(), m)).collect();
        terms.sort();
        for (k, (label, m)) in terms.into_iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            if m > 1 {
                write!(f, "{m}")?;
            }
            write!(f, "{label}")?;
        }
        Ok(())
    }
}

impl Serialize for IsoClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merging_and_gamma() {
        let c = IsoClass::from_pairs([(2, 1), (0, 2), (2, 1), (1, 0)]);
        assert_eq!(c.terms(), &[(0, 2), (2, 2)]);
        assert_eq!(c.gamma(), 4);
        assert_eq!(c.indices(), vec![0, 0, 2, 2]);
        assert!(IsoClass::zero().is_zero());
        assert_eq!(IsoClass::zero().gamma(), 0);
    }

    #[test]
    fn splittings_cover_all_submultisets() {
        let c = IsoClass::from_pairs([(0, 2), (1, 1)]);
        let s = c.splittings();
        assert_eq!(s.len(), 6);
        for (a, b) in &s {
            assert_eq!(a.union(b), c);
            assert_eq!(c.difference(a).as_ref(), Some(b));
        }
        assert_eq!(s[0].0, IsoClass::zero());
        assert_eq!(s[5].1, IsoClass::zero());
        assert_eq!(IsoClass::zero().splittings(), vec![(IsoClass::zero(), IsoClass::zero())]);
    }

    #[test]
    fn factorial_weight() {
        assert_eq!(IsoClass::from_pairs([(0, 3), (1, 2)]).factorial_weight(), 12);
        assert_eq!(IsoClass::zero().factorial_weight(), 1);
    }

    #[test]
    fn difference_requires_containment() {
        let c = IsoClass::from_pairs([(0, 1)]);
        assert!(c.difference(&IsoClass::single(1)).is_none());
        assert!(c.difference(&IsoClass::from_pairs([(0, 2)])).is_none());
    }
}
