//! Conformal modules `M = ⊕_β C[∂]/(q_β) v^β` over a conformal algebra,
//! given by a finite action table on generators and basis vectors.

mod axioms;
mod families;
mod probe;

pub use axioms::{check_module_axioms, check_module_axioms_with, m1_residual, ModuleBounds};
pub use families::{build_module_family, FamilyParams, ModuleFamily};
pub use probe::{
    cyclic_submodule_closed, default_degree_cap, generated_submodule_contains, singular_subspace, submodule_closed,
    Closure, Membership, Singular, Step, StepOp,
};

use std::collections::BTreeMap;

use crate::algebra::product::extend_table;
use crate::algebra::ConformalAlgebra;
use crate::arith::DPoly;
use crate::element::{homogeneous_parity, AlgElement, ModElement, Parity};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarrierBasis {
    pub name: String,
    pub parity: Parity,
    /// Monic torsion polynomial, or zero for a free summand.
    pub torsion: DPoly,
}

impl CarrierBasis {
    pub fn free(name: &str, parity: Parity) -> Self {
        CarrierBasis {
            name: name.to_string(),
            parity,
            torsion: DPoly::zero(),
        }
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModuleCarrier {
    basis: Vec<CarrierBasis>,
}

impl ModuleCarrier {
    pub fn new(basis: Vec<CarrierBasis>) -> Result<Self> {
        for b in &basis {
            if !b.torsion.is_zero() && !b.torsion.is_monic() {
                return Err(Error::NonMonicTorsion(format!("{}: {}", b.name, b.torsion)));
            }
        }
        for (k, b) in basis.iter().enumerate() {
            if basis[..k].iter().any(|c| c.name == b.name) {
                return Err(Error::Spec(format!("duplicate basis name {:?}", b.name)));
            }
        }
        Ok(ModuleCarrier { basis })
    }

    pub fn free(basis: &[(&str, Parity)]) -> Self {
        ModuleCarrier {
            basis: basis.iter().map(|(n, p)| CarrierBasis::free(n, *p)).collect(),
        }
    }

    pub fn basis(&self) -> &[CarrierBasis] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.basis.iter().all(CarrierBasis::is_free)
    }

    pub fn names(&self) -> Vec<String> {
        self.basis.iter().map(|b| b.name.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalModule {
    pub name: String,
    algebra: ConformalAlgebra,
    carrier: ModuleCarrier,
    actions: BTreeMap<(usize, usize, u32), ModElement>,
    bounds: BTreeMap<(usize, usize), u32>,
}

impl ConformalModule {
    pub fn new(name: &str, algebra: ConformalAlgebra, carrier: ModuleCarrier) -> Self {
        ConformalModule {
            name: name.to_string(),
            algebra,
            carrier,
            actions: BTreeMap::new(),
            bounds: BTreeMap::new(),
        }
    }

    pub fn algebra(&self) -> &ConformalAlgebra {
        &self.algebra
    }

    pub fn carrier(&self) -> &ModuleCarrier {
        &self.carrier
    }

    pub fn names(&self) -> Vec<String> {
        self.carrier.names()
    }

    pub fn basis_index(&self, name: &str) -> Result<usize> {
        self.carrier
            .basis
            .iter()
            .position(|b| b.name == name)
            .ok_or_else(|| Error::UnknownBasis(name.to_string()))
    }

    pub fn vector(&self, name: &str) -> Result<ModElement> {
        Ok(ModElement::basis(self.basis_index(name)?))
    }

    pub fn parity_of(&self, v: &ModElement) -> Result<Option<Parity>> {
        homogeneous_parity(
            v.indices(),
            |i| self.carrier.basis.get(i).map(|b| b.parity),
            |i| Error::UnknownBasis(format!("#{i}")),
        )
    }

    /// Reduces torsion components modulo their torsion polynomial.
    pub fn reduce(&self, v: &ModElement) -> ModElement {
        v.map_polys(|i, p| match self.carrier.basis.get(i) {
            Some(b) if !b.is_free() => p.rem(&b.torsion).expect("monic torsion"),
            _ => p.clone(),
        })
    }

    /// Sets `a^i_(n) v^β`; a zero value removes the entry.
    pub fn set_action(&mut self, i: usize, beta: usize, n: u32, value: ModElement) -> Result<()> {
        if i >= self.algebra.len() {
            return Err(Error::UnknownGenerator(format!("#{i}")));
        }
        if beta >= self.carrier.len() || value.indices().any(|&b| b >= self.carrier.len()) {
            return Err(Error::UnknownBasis(format!("index out of range in ({i}, {beta}, {n})")));
        }
        let value = self.reduce(&value);
        if let Some(p) = self.parity_of(&value)? {
            let expected = self.algebra.parity(i) + self.carrier.basis[beta].parity;
            if p != expected {
                return Err(Error::InconsistentTable(format!(
                    "{}_({n}){} has parity {p}",
                    self.algebra.generators()[i].name,
                    self.carrier.basis[beta].name
                )));
            }
        }
        if value.is_zero() {
            self.actions.remove(&(i, beta, n));
        } else {
            self.actions.insert((i, beta, n), value);
        }
        let bound = self
            .actions
            .range((i, beta, 0)..=(i, beta, u32::MAX))
            .map(|(&(_, _, n), _)| n + 1)
            .max()
            .unwrap_or(0);
        if bound == 0 {
            self.bounds.remove(&(i, beta));
        } else {
            self.bounds.insert((i, beta), bound);
        }
        Ok(())
    }

    pub fn set_action_by_name(&mut self, gen: &str, basis: &str, n: u32, value: ModElement) -> Result<()> {
        let (i, b) = (self.algebra.index_of(gen)?, self.basis_index(basis)?);
        self.set_action(i, b, n, value)
    }

    pub fn action(&self, i: usize, beta: usize, n: u32) -> ModElement {
        self.actions.get(&(i, beta, n)).cloned().unwrap_or_default()
    }

    pub fn bound(&self, i: usize, beta: usize) -> u32 {
        self.bounds.get(&(i, beta)).copied().unwrap_or(0)
    }

    pub fn max_bound(&self) -> u32 {
        self.bounds.values().copied().max().unwrap_or(0)
    }

    pub fn max_action_degree(&self) -> usize {
        self.actions.values().filter_map(ModElement::degree).max().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u32, &ModElement)> {
        self.actions.iter().map(|(&(i, b, n), v)| (i, b, n, v))
    }

    /// Smallest `B` with `x_(n) v = 0` for all `n ≥ B`.
    pub fn vanishing_bound(&self, x: &AlgElement, v: &ModElement) -> u32 {
        let mut best = 0;
        for (i, p) in x.terms() {
            for (b, q) in v.terms() {
                let nb = self.bound(i, b);
                if nb > 0 {
                    best = best.max(nb + (p.degree().unwrap_or(0) + q.degree().unwrap_or(0)) as u32);
                }
            }
        }
        best
    }

    pub(crate) fn act_unchecked(&self, x: &AlgElement, n: u32, v: &ModElement) -> ModElement {
        let raw = extend_table(x, v, n, |i, b| self.bound(i, b), |i, b, m| self.actions.get(&(i, b, m)));
        self.reduce(&raw)
    }
}

/// `x_(n) v`, extended from the action table by
/// `(∂a)_(n) = -n a_(n-1)` and `a_(n) ∂ = ∂ a_(n) + n a_(n-1)`.
pub fn act(module: &ConformalModule, x: &AlgElement, n: u32, v: &ModElement) -> Result<ModElement> {
    module.algebra.parity_of(x)?;
    module.parity_of(v)?;
    Ok(module.act_unchecked(x, n, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Scalar;

    fn mvd(alpha: Scalar, delta: Scalar) -> ConformalModule {
        build_module_family(
            ModuleFamily::VirasoroMVD,
            &FamilyParams::new().alpha(alpha).delta(delta),
        )
        .unwrap()
    }

    #[test]
    fn virasoro_action_examples() {
        let (alpha, delta) = (Scalar::frac(1, 2), Scalar::from_int(3));
        let m = mvd(alpha.clone(), delta.clone());
        let l = m.algebra().generator("L").unwrap();
        let u = m.vector("u").unwrap();
        assert_eq!(act(&m, &l, 0, &u).unwrap(), ModElement::term(0, DPoly::d_plus(alpha.clone())));
        // L_(1) ∂u = (Δ+1) ∂u + α u
        let expected = ModElement::term(0, DPoly::from_coeffs(vec![alpha.clone(), &delta + &Scalar::one()]));
        assert_eq!(act(&m, &l, 1, &u.shift(1)).unwrap(), expected);
        // L_(2) (∂+α)u = 2Δ u
        let w = ModElement::term(0, DPoly::d_plus(alpha));
        assert_eq!(act(&m, &l, 2, &w).unwrap(), u.scale(&Scalar::from_int(6)));
    }

    #[test]
    fn torsion_is_reduced() {
        let alg = crate::algebra::build_standard_algebra(crate::algebra::StandardKind::Virasoro, None).unwrap();
        let carrier = ModuleCarrier::new(vec![CarrierBasis {
            name: "v".into(),
            parity: Parity::Even,
            torsion: DPoly::from_ints(&[-5, 1]),
        }])
        .unwrap();
        let m = ConformalModule::new("t", alg, carrier);
        assert_eq!(m.reduce(&ModElement::term(0, DPoly::d())), ModElement::term(0, DPoly::from_ints(&[5])));
    }

    #[test]
    fn non_monic_torsion_rejected() {
        let r = ModuleCarrier::new(vec![CarrierBasis {
            name: "v".into(),
            parity: Parity::Even,
            torsion: DPoly::from_ints(&[1, 2]),
        }]);
        assert!(matches!(r, Err(Error::NonMonicTorsion(_))));
    }
}
