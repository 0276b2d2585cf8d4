//! Conformal (super)algebras that are free over `C[∂]`, given by a finite
//! table of n-th products on generators.

mod axioms;
pub(crate) mod product;
mod standard;

pub use axioms::{c2_residual, c3_residual, check_conformal_axioms, check_conformal_axioms_with, AxiomBounds};
pub use product::{nth_product, vanishing_bound};
pub use standard::{build_standard_algebra, theta_name, StandardKind};

use std::collections::BTreeMap;

use crate::arith::{factorial, DPoly, Scalar};
use crate::element::{homogeneous_parity, AlgElement, Parity};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
    /// Conformal weight used only to translate mode indices for display.
    pub weight: Option<Scalar>,
}

impl Generator {
    pub fn new(name: &str, parity: Parity, weight: Option<Scalar>) -> Self {
        Generator {
            name: name.to_string(),
            parity,
            weight,
        }
    }
}

/// A free conformal superalgebra `⊕ C[∂] a^i`. Absent table entries are zero;
/// `bounds[(i, j)]` is one past the largest `n` with a non-zero `a^i_(n) a^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalAlgebra {
    pub name: String,
    generators: Vec<Generator>,
    table: BTreeMap<(usize, usize, u32), AlgElement>,
    bounds: BTreeMap<(usize, usize), u32>,
}

impl ConformalAlgebra {
    pub fn new(name: &str, generators: Vec<Generator>) -> Self {
        ConformalAlgebra {
            name: name.to_string(),
            generators,
            table: BTreeMap::new(),
            bounds: BTreeMap::new(),
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.generators[i].parity
    }

    /// `None` for the zero element.
    pub fn parity_of(&self, x: &AlgElement) -> Result<Option<Parity>> {
        homogeneous_parity(
            x.indices(),
            |i| self.generators.get(i).map(|g| g.parity),
            |i| Error::UnknownGenerator(format!("#{i}")),
        )
    }

    pub fn generator(&self, name: &str) -> Result<AlgElement> {
        Ok(AlgElement::basis(self.index_of(name)?))
    }

    /// Sets `a^i_(n) a^j`; a zero value removes the entry.
    pub fn set_product(&mut self, i: usize, j: usize, n: u32, value: AlgElement) -> Result<()> {
        let k = self.len();
        if i >= k || j >= k || value.indices().any(|&g| g >= k) {
            return Err(Error::UnknownGenerator(format!("index out of range in ({i}, {j}, {n})")));
        }
        if let Some(p) = self.parity_of(&value)? {
            if p != self.parity(i) + self.parity(j) {
                return Err(Error::InconsistentTable(format!(
                    "{}_({n}){} has parity {p}",
                    self.generators[i].name, self.generators[j].name
                )));
            }
        }
        if value.is_zero() {
            self.table.remove(&(i, j, n));
        } else {
            self.table.insert((i, j, n), value);
        }
        self.refresh_bound(i, j);
        Ok(())
    }

    pub fn set_product_by_name(&mut self, a: &str, b: &str, n: u32, value: AlgElement) -> Result<()> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        self.set_product(i, j, n, value)
    }

    fn refresh_bound(&mut self, i: usize, j: usize) {
        let bound = self
            .table
            .range((i, j, 0)..=(i, j, u32::MAX))
            .map(|(&(_, _, n), _)| n + 1)
            .max()
            .unwrap_or(0);
        if bound == 0 {
            self.bounds.remove(&(i, j));
        } else {
            self.bounds.insert((i, j), bound);
        }
    }

    /// Table lookup `a^i_(n) a^j` on generators.
    pub fn product(&self, i: usize, j: usize, n: u32) -> AlgElement {
        self.table.get(&(i, j, n)).cloned().unwrap_or_default()
    }

    pub fn product_ref(&self, i: usize, j: usize, n: u32) -> Option<&AlgElement> {
        self.table.get(&(i, j, n))
    }

    /// Locality bound `N(i, j)`.
    pub fn bound(&self, i: usize, j: usize) -> u32 {
        self.bounds.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn max_bound(&self) -> u32 {
        self.bounds.values().copied().max().unwrap_or(0)
    }

    /// Largest `∂`-degree appearing in the table.
    pub fn max_table_degree(&self) -> usize {
        self.table.values().filter_map(AlgElement::degree).max().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u32, &AlgElement)> {
        self.table.iter().map(|(&(i, j, n), v)| (i, j, n, v))
    }

    pub fn has_entries(&self, i: usize, j: usize) -> bool {
        self.bound(i, j) > 0
    }

    /// Fills every ordered pair `(j, i)` that has no entries while `(i, j)`
    /// does, using the skew-symmetry axiom
    /// `b_(n)a = (-1)^{|a||b|} Σ_k (-1)^{k+n+1} ∂^(k)(a_(n+k)b)`.
    pub fn complete_by_skew_symmetry(&mut self) -> Result<()> {
        let mut pending = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i != j && self.has_entries(i, j) && !self.has_entries(j, i) {
                    pending.push((i, j));
                }
            }
        }
        for (i, j) in pending {
            let sign = self.parity(i).sign(self.parity(j));
            let bound = self.bound(i, j);
            for n in 0..bound {
                let mut value = AlgElement::zero();
                for k in 0..(bound - n) {
                    let entry = self.product(i, j, n + k);
                    let mut c = &sign / &factorial(k as usize);
                    if (k + n + 1) % 2 == 1 {
                        c = -c;
                    }
                    value.add_scaled(&entry.mul_poly(&DPoly::monomial(Scalar::one(), k as usize)), &c);
                }
                self.set_product(j, i, n, value)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_follow_the_table() {
        let mut a = ConformalAlgebra::new("t", vec![Generator::new("L", Parity::Even, None)]);
        assert_eq!(a.bound(0, 0), 0);
        a.set_product(0, 0, 0, AlgElement::term(0, DPoly::d())).unwrap();
        a.set_product(0, 0, 1, AlgElement::term(0, DPoly::from_ints(&[2]))).unwrap();
        assert_eq!(a.bound(0, 0), 2);
        a.set_product(0, 0, 1, AlgElement::zero()).unwrap();
        assert_eq!(a.bound(0, 0), 1);
    }

    #[test]
    fn parity_of_entries_is_enforced() {
        let mut a = ConformalAlgebra::new(
            "t",
            vec![Generator::new("L", Parity::Even, None), Generator::new("G", Parity::Odd, None)],
        );
        let err = a.set_product(0, 0, 0, AlgElement::basis(1)).unwrap_err();
        assert!(matches!(err, Error::InconsistentTable(_)));
        assert!(a.set_product(1, 1, 0, AlgElement::basis(0)).is_ok());
    }
}
