//! Brute-force rank-1 classification: the commutator identity on an unknown
//! action table becomes a quadratic system, solved by Gröbner bases.

mod constraints;
mod groebner;
mod poly;
mod variety;

pub use constraints::{generate_constraints, generate_rank1_constraints, ConstraintSystem, Provenance, Unknown};
pub use groebner::{buchberger, in_ideal, in_radical, reduce};
pub use poly::{Monomial, MultiPoly};
pub use variety::{
    family_assignment, substitution_failures, variety_compare, virasoro_family, BranchReport, Family, Forced, Verdict,
};

use crate::algebra::{build_standard_algebra, StandardKind};
use crate::element::Parity;
use crate::error::Result;
use crate::module::{ModuleCarrier, ModuleFamily};

/// Experimental rank-(1|1) Neveu–Schwarz run on the carrier `u`, `uθ`.
/// Only containment of the family in the variety is checked; the returned
/// list holds the constraints that fail to vanish on it.
pub fn ns_rank11_substitution(nmax: u32, dmax: usize) -> Result<(ConstraintSystem, Family, Vec<(usize, String)>)> {
    let alg = build_standard_algebra(StandardKind::NeveuSchwarz, None)?;
    let carrier = ModuleCarrier::free(&[("u", Parity::Even), ("uθ", Parity::Odd)]);
    let sys = generate_constraints(&alg, &carrier, nmax, dmax);
    let family = family_assignment(&sys, ModuleFamily::NsMND, "c[L,0,u→u,1]")?;
    let failures = substitution_failures(&sys, &family);
    Ok((sys, family, failures))
}
