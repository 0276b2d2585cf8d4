use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Scalar;
use crate::error::Error;

/// A polynomial in the formal derivation `∂` with exact rational
/// coefficients, stored ascending by degree with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct DPoly {
    coeffs: Vec<Scalar>,
}

impl DPoly {
    pub fn zero() -> Self {
        DPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        DPoly::from_coeffs(vec![c])
    }

    /// `c·∂^k`
    pub fn monomial(c: Scalar, k: usize) -> Self {
        if c.is_zero() {
            return DPoly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); k + 1];
        coeffs[k] = c;
        DPoly { coeffs }
    }

    /// The polynomial `∂`.
    pub fn d() -> Self {
        DPoly::monomial(Scalar::one(), 1)
    }

    /// `∂ + c`
    pub fn d_plus(c: Scalar) -> Self {
        DPoly::from_coeffs(vec![c, Scalar::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        DPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        DPoly::from_coeffs(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    pub fn scale(&self, c: &Scalar) -> DPoly {
        if c.is_zero() {
            return DPoly::zero();
        }
        DPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiply by `∂^k`.
    pub fn shift(&self, k: usize) -> DPoly {
        if self.is_zero() {
            return DPoly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        DPoly { coeffs }
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| &acc * x + c)
    }

    pub fn monic(&self) -> DPoly {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip().expect("nonzero leading coefficient")),
            None => DPoly::zero(),
        }
    }

    /// Euclidean division: `self = q·quot + rem` with `deg rem < deg q`.
    pub fn divmod(&self, q: &DPoly) -> Result<(DPoly, DPoly), Error> {
        let dq = q.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = q.coeffs[dq].recip()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(); self.coeffs.len().saturating_sub(dq)];
        while rem.len() > dq {
            let top = rem.len() - 1;
            let c = &rem[top] * &lead_inv;
            if !c.is_zero() {
                let shift = top - dq;
                for (i, qc) in q.coeffs.iter().enumerate() {
                    rem[shift + i] -= &(&c * qc);
                }
                quot[shift] = c;
            }
            rem.pop();
        }
        Ok((DPoly::from_coeffs(quot), DPoly::from_coeffs(rem)))
    }

    pub fn rem(&self, q: &DPoly) -> Result<DPoly, Error> {
        Ok(self.divmod(q)?.1)
    }

    /// Extended Euclid: returns `(g, s, t)` with `g = s·a + t·b`, `g` monic
    /// (or zero when both inputs are zero).
    pub fn ext_gcd(a: &DPoly, b: &DPoly) -> (DPoly, DPoly, DPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (DPoly::one(), DPoly::zero());
        let (mut t0, mut t1) = (DPoly::zero(), DPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("nonzero divisor");
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.leading().cloned() {
            Some(lc) => {
                let inv = lc.recip().expect("nonzero");
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
            None => (r0, s0, t0),
        }
    }

    /// Renders the polynomial with `var` standing for `∂`, highest degree
    /// first, e.g. `∂^2 + 1/2`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let first = out.is_empty();
            let sign = c.is_negative();
            if first {
                if sign {
                    out.push('-');
                }
            } else {
                out.push_str(if sign { " - " } else { " + " });
            }
            let mag = c.abs();
            let var_part = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if var_part.is_empty() || !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            out.push_str(&var_part);
        }
        out
    }
}

impl fmt::Display for DPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("∂"))
    }
}

impl Add<&DPoly> for &DPoly {
    type Output = DPoly;
    fn add(self, rhs: &DPoly) -> DPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        DPoly::from_coeffs((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub<&DPoly> for &DPoly {
    type Output = DPoly;
    fn sub(self, rhs: &DPoly) -> DPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        DPoly::from_coeffs((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul<&DPoly> for &DPoly {
    type Output = DPoly;
    fn mul(self, rhs: &DPoly) -> DPoly {
        if self.is_zero() || rhs.is_zero() {
            return DPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        DPoly::from_coeffs(out)
    }
}

impl Neg for &DPoly {
    type Output = DPoly;
    fn neg(self) -> DPoly {
        DPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for DPoly {
    type Output = DPoly;
    fn add(self, rhs: DPoly) -> DPoly {
        &self + &rhs
    }
}

impl Sub for DPoly {
    type Output = DPoly;
    fn sub(self, rhs: DPoly) -> DPoly {
        &self - &rhs
    }
}

impl Mul for DPoly {
    type Output = DPoly;
    fn mul(self, rhs: DPoly) -> DPoly {
        &self * &rhs
    }
}

impl Neg for DPoly {
    type Output = DPoly;
    fn neg(self) -> DPoly {
        -&self
    }
}

impl Serialize for DPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(DPoly::from_coeffs(Vec::<Scalar>::deserialize(deserializer)?))
    }
}
