use serde_json::{json, Value};

use super::constraints::ConstraintSystem;
use super::groebner::{buchberger, in_ideal, in_radical};
use super::poly::MultiPoly;
use crate::arith::Scalar;
use crate::element::ModElement;
use crate::error::{Error, Result};
use crate::module::{build_module_family, FamilyParams, ModuleFamily};

/// A parametrized solution family: each unknown is a polynomial in the
/// parameters. `split` is the unknown whose values 1 and 0 separate the
/// generic branch (this assignment) from the zero branch.
#[derive(Clone, Debug)]
pub struct Family {
    pub name: String,
    pub params: Vec<String>,
    pub assignment: Vec<MultiPoly>,
    pub split: usize,
}

impl Family {
    /// Unknowns the generic branch leaves free (they depend on a parameter).
    pub fn free(&self) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| !self.assignment[i].is_zero() && !self.assignment[i].terms().all(|(m, _)| m.degree() == 0))
            .collect()
    }

    /// Unknowns forced to zero on the generic branch.
    pub fn excluded(&self) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i].is_zero())
            .collect()
    }
}

/// Reads the action table of a builtin family off as polynomials in its
/// parameters `alpha`, `delta`. The tables are affine in both, and the fit
/// is re-checked at two further points. An ansatz with no unknowns at
/// `n ≥ 1` has no room for `delta`, which is then fixed to 0.
pub fn family_assignment(sys: &ConstraintSystem, family: ModuleFamily, split: &str) -> Result<Family> {
    let uses_delta = sys.unknowns.iter().any(|u| u.n >= 1);
    let params: Vec<String> = if uses_delta { vec!["alpha".into(), "delta".into()] } else { vec!["alpha".into()] };
    let np = params.len();
    let table_at = |a: i64, d: i64| -> Result<Vec<Scalar>> {
        let d = if uses_delta { d } else { 0 };
        let m = build_module_family(family, &FamilyParams::new().alpha(Scalar::from_int(a)).delta(Scalar::from_int(d)))?;
        if m.carrier().names() != sys.carrier.names() || m.algebra().names() != sys.algebra.names() {
            return Err(Error::DimensionMismatch(format!("{family} does not match the ansatz carrier")));
        }
        let mut out = vec![Scalar::zero(); sys.nvars()];
        for (i, b, n, v) in m.entries() {
            for (g, p) in v.terms() {
                for (k, c) in p.coeffs().iter().enumerate() {
                    let key = (i, b, n, g, k);
                    match sys.unknowns.iter().position(|u| (u.gen, u.basis, u.n, u.target, u.k) == key) {
                        Some(idx) => out[idx] = c.clone(),
                        None if c.is_zero() => {}
                        None => {
                            return Err(Error::Unsupported(format!(
                                "{family} entry {}_({n}){} = {} lies outside the ansatz",
                                sys.algebra.names()[i],
                                sys.carrier.names()[b],
                                ModElement::term(g, p.clone()).render(&sys.carrier.names())
                            )))
                        }
                    }
                }
            }
        }
        Ok(out)
    };
    let base = table_at(0, 0)?;
    let da = table_at(1, 0)?;
    let dd = table_at(0, 1)?;
    let mut assignment = Vec::with_capacity(sys.nvars());
    for k in 0..sys.nvars() {
        let mut p = MultiPoly::constant(np, base[k].clone());
        p.add_scaled(&MultiPoly::var(np, 0), &(&da[k] - &base[k]));
        if uses_delta {
            p.add_scaled(&MultiPoly::var(np, 1), &(&dd[k] - &base[k]));
        }
        assignment.push(p);
    }
    for (a, d) in [(2, 3), (-5, 7)] {
        let want = table_at(a, d)?;
        let mut pt = vec![Scalar::from_int(a)];
        if uses_delta {
            pt.push(Scalar::from_int(d));
        }
        if (0..sys.nvars()).any(|k| assignment[k].eval(&pt) != want[k]) {
            return Err(Error::InconsistentTable(format!("{family} table is not affine in its parameters")));
        }
    }
    let split = sys
        .index_of(split)
        .ok_or_else(|| Error::Spec(format!("unknown split variable {split}")))?;
    Ok(Family { name: family.to_string(), params, assignment, split })
}

/// The rank-1 Virasoro family `p_0 = ∂ + α`, `p_1 = Δ`, `p_{≥2} = 0`, split on `c01`.
pub fn virasoro_family(sys: &ConstraintSystem) -> Result<Family> {
    family_assignment(sys, ModuleFamily::VirasoroMVD, "c01")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Forced {
    /// The unknown lies in the ideal.
    Ideal,
    /// Only a power of it does.
    Radical,
    No,
}

#[derive(Clone, Debug)]
pub struct BranchReport {
    pub name: String,
    pub basis: Vec<MultiPoly>,
    pub forced: Vec<(usize, Forced)>,
}

impl BranchReport {
    pub fn holds(&self) -> bool {
        self.forced.iter().all(|(_, f)| *f != Forced::No)
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub matched: bool,
    /// Constraints not identically zero on the generic or zero branch.
    pub substitution_failures: Vec<(usize, String)>,
    pub split_forced: Forced,
    pub basis: Vec<MultiPoly>,
    pub branches: Vec<BranchReport>,
    pub used_radical: bool,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        if self.matched {
            "match"
        } else {
            "no-match"
        }
    }

    pub fn to_json(&self, sys: &ConstraintSystem, branch_report: bool) -> Value {
        let names = sys.names();
        let forced = |f: Forced| match f {
            Forced::Ideal => "ideal",
            Forced::Radical => "radical",
            Forced::No => "no",
        };
        let mut out = json!({
            "verdict": self.label(),
            "unknowns": names,
            "groebner_basis": self.basis.iter().map(|g| g.render(&names)).collect::<Vec<_>>(),
            "split_forced": forced(self.split_forced),
            "substitution_failures": self
                .substitution_failures
                .iter()
                .map(|(k, s)| json!({"constraint": sys.polys[*k].render(&names), "from": sys.provenance[*k].to_json(), "value": s}))
                .collect::<Vec<_>>(),
            "used_radical": self.used_radical,
        });
        if branch_report {
            out["branches"] = json!(self
                .branches
                .iter()
                .map(|b| json!({
                    "branch": b.name,
                    "holds": b.holds(),
                    "groebner_basis": b.basis.iter().map(|g| g.render(&names)).collect::<Vec<_>>(),
                    "forced_zero": b.forced.iter().map(|(i, f)| json!({"unknown": names[*i], "by": forced(*f)})).collect::<Vec<_>>(),
                }))
                .collect::<Vec<_>>());
        }
        out
    }
}

fn forced_zero(x: &MultiPoly, polys: &[MultiPoly], gb: &[MultiPoly]) -> Forced {
    if in_ideal(x, gb) {
        Forced::Ideal
    } else if in_radical(x, polys) {
        Forced::Radical
    } else {
        Forced::No
    }
}

/// Substitution only: every constraint vanishes identically on the family.
pub fn substitution_failures(sys: &ConstraintSystem, family: &Family) -> Vec<(usize, String)> {
    let zeros = vec![Scalar::zero(); sys.nvars()];
    let mut out = Vec::new();
    for (k, p) in sys.polys.iter().enumerate() {
        let generic = p.substitute(&family.assignment);
        if !generic.is_zero() {
            out.push((k, generic.render(&family.params)));
        } else if !p.eval(&zeros).is_zero() {
            out.push((k, p.eval(&zeros).to_string()));
        }
    }
    out
}

/// Compares the variety of `sys` with `family ∪ {0}`: the family must satisfy
/// every constraint, the ideal must force `s(s - 1) = 0` for the split
/// unknown `s`, the branch `s = 1` must force every excluded unknown to zero,
/// and the branch `s = 0` must force all unknowns to zero.
pub fn variety_compare(sys: &ConstraintSystem, family: &Family) -> Verdict {
    let n = sys.nvars();
    let substitution_failures = substitution_failures(sys, family);
    let polys: Vec<MultiPoly> = if sys.polys.is_empty() { vec![MultiPoly::zero(n)] } else { sys.polys.clone() };
    let basis = buchberger(&polys);
    let s = MultiPoly::var(n, family.split);
    let one = MultiPoly::one(n);
    let split_forced = forced_zero(&s.mul(&s.sub(&one)), &polys, &basis);

    let mut branches = Vec::new();
    let mut branch = |name: &str, extra: MultiPoly, vars: Vec<usize>| {
        let mut ps = polys.clone();
        ps.push(extra);
        let gb = buchberger(&ps);
        let forced = vars
            .into_iter()
            .map(|i| (i, forced_zero(&MultiPoly::var(n, i), &ps, &gb)))
            .collect();
        branches.push(BranchReport { name: name.into(), basis: gb, forced });
    };
    branch(&format!("{} = 1", sys.names()[family.split]), s.sub(&one), family.excluded());
    branch(&format!("{} = 0", sys.names()[family.split]), s.clone(), (0..n).collect());

    let used_radical =
        split_forced == Forced::Radical || branches.iter().any(|b| b.forced.iter().any(|(_, f)| *f == Forced::Radical));
    let matched = substitution_failures.is_empty() && split_forced != Forced::No && branches.iter().all(BranchReport::holds);
    Verdict {
        matched,
        substitution_failures,
        split_forced,
        basis,
        branches,
        used_radical,
    }
}
