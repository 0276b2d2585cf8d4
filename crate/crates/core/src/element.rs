//! Parities and finitely supported combinations `Σ p_i(∂) x_i` over a free
//! `C[∂]`-basis. The same representation serves algebra elements (indices
//! name generators) and module elements (indices name carrier basis vectors).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::arith::{DPoly, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Parity {
    #[default]
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Option<Parity> {
        match bit {
            0 => Some(Parity::Even),
            1 => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Parity {
        self + Parity::Odd
    }

    /// Koszul sign `(-1)^{p·q}`.
    pub fn sign(self, other: Parity) -> Scalar {
        if self == Parity::Odd && other == Parity::Odd {
            Scalar::from_int(-1)
        } else {
            Scalar::one()
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

impl Serialize for Parity {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.bit())
    }
}

impl<'de> Deserialize<'de> for Parity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let bit = u8::deserialize(deserializer)?;
        Parity::from_bit(bit).ok_or_else(|| serde::de::Error::custom("parity must be 0 or 1"))
    }
}

/// Parity of a combination given the parities of the underlying basis;
/// `None` for zero, an error for mixed parities.
pub fn homogeneous_parity<'a>(
    indices: impl IntoIterator<Item = &'a usize>,
    parity_of: impl Fn(usize) -> Option<Parity>,
    unknown: impl Fn(usize) -> Error,
) -> Result<Option<Parity>> {
    let mut found = None;
    for &i in indices {
        let p = parity_of(i).ok_or_else(|| unknown(i))?;
        match found {
            None => found = Some(p),
            Some(q) if q != p => return Err(Error::MixedParity),
            _ => {}
        }
    }
    Ok(found)
}

/// `Σ_i p_i(∂) x_i` with only non-zero polynomials stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyVec {
    terms: BTreeMap<usize, DPoly>,
}

pub type AlgElement = PolyVec;
pub type ModElement = PolyVec;

impl PolyVec {
    pub fn zero() -> Self {
        PolyVec::default()
    }

    pub fn basis(i: usize) -> Self {
        PolyVec::term(i, DPoly::one())
    }

    pub fn term(i: usize, p: DPoly) -> Self {
        let mut v = PolyVec::zero();
        v.add_term(i, &p);
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, DPoly)>) -> Self {
        let mut v = PolyVec::zero();
        for (i, p) in terms {
            v.add_term(i, &p);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, i: usize) -> DPoly {
        self.terms.get(&i).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &DPoly)> {
        self.terms.iter().map(|(&i, p)| (i, p))
    }

    pub fn indices(&self) -> impl Iterator<Item = &usize> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, i: usize, p: &DPoly) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.get(&i) {
            Some(q) => q + p,
            None => p.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&i);
        } else {
            self.terms.insert(i, sum);
        }
    }

    pub fn add_scaled(&mut self, other: &PolyVec, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (&i, p) in &other.terms {
            self.add_term(i, &p.scale(c));
        }
    }

    pub fn scale(&self, c: &Scalar) -> PolyVec {
        PolyVec::from_terms(self.terms.iter().map(|(&i, p)| (i, p.scale(c))))
    }

    /// Left multiplication by `q(∂)`.
    pub fn mul_poly(&self, q: &DPoly) -> PolyVec {
        PolyVec::from_terms(self.terms.iter().map(|(&i, p)| (i, q * p)))
    }

    /// Left multiplication by `∂^k`.
    pub fn shift(&self, k: usize) -> PolyVec {
        PolyVec::from_terms(self.terms.iter().map(|(&i, p)| (i, p.shift(k))))
    }

    pub fn map_polys(&self, f: impl Fn(usize, &DPoly) -> DPoly) -> PolyVec {
        PolyVec::from_terms(self.terms.iter().map(|(&i, p)| (i, f(i, p))))
    }

    /// Largest `∂`-degree among the components.
    pub fn degree(&self) -> Option<usize> {
        self.terms.values().filter_map(DPoly::degree).max()
    }

    /// Expanded rendering such as `2∂L - 2L` or `(Δ+1)`-style sums written
    /// out monomial by monomial, highest degree first within each index.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (&i, p) in &self.terms {
            let name = names.get(i).map(String::as_str).unwrap_or("?");
            for (k, c) in p.coeffs().iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let neg = c.is_negative();
                if out.is_empty() {
                    if neg {
                        out.push('-');
                    }
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                let mag = c.abs();
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                }
                match k {
                    0 => {}
                    1 => out.push('∂'),
                    _ => out.push_str(&format!("∂^{k}")),
                }
                out.push_str(name);
            }
        }
        out
    }

    /// JSON form `[{key: name, "poly": [...]}, ...]`.
    pub fn to_json(&self, names: &[String], key: &str) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(&i, p)| {
                    let mut obj = serde_json::Map::new();
                    obj.insert(
                        key.to_string(),
                        json!(names.get(i).cloned().unwrap_or_else(|| i.to_string())),
                    );
                    obj.insert("poly".to_string(), json!(p));
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

impl Add<&PolyVec> for &PolyVec {
    type Output = PolyVec;
    fn add(self, rhs: &PolyVec) -> PolyVec {
        let mut out = self.clone();
        for (&i, p) in &rhs.terms {
            out.add_term(i, p);
        }
        out
    }
}

impl Sub<&PolyVec> for &PolyVec {
    type Output = PolyVec;
    fn sub(self, rhs: &PolyVec) -> PolyVec {
        let mut out = self.clone();
        for (&i, p) in &rhs.terms {
            out.add_term(i, &-p);
        }
        out
    }
}

impl Neg for &PolyVec {
    type Output = PolyVec;
    fn neg(self) -> PolyVec {
        self.scale(&Scalar::from_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_arithmetic() {
        assert_eq!(Parity::Odd + Parity::Odd, Parity::Even);
        assert_eq!(Parity::Odd.sign(Parity::Odd), Scalar::from_int(-1));
        assert_eq!(Parity::Odd.sign(Parity::Even), Scalar::one());
    }

    #[test]
    fn render_expands_monomials() {
        let names = vec!["L".to_string()];
        let v = PolyVec::term(0, DPoly::from_ints(&[-2, 2]));
        assert_eq!(v.render(&names), "2∂L - 2L");
        assert_eq!(PolyVec::zero().render(&names), "0");
    }

    #[test]
    fn cancellation_removes_entries() {
        let a = PolyVec::term(1, DPoly::d());
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).indices().count(), 0);
    }

    #[test]
    fn mixed_parity_detected() {
        let parities = [Parity::Even, Parity::Odd];
        let v = &PolyVec::basis(0) + &PolyVec::basis(1);
        let res = homogeneous_parity(v.indices(), |i| parities.get(i).copied(), |_| Error::ZeroElement);
        assert_eq!(res, Err(Error::MixedParity));
    }
}
