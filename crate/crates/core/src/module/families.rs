use std::fmt;
use std::str::FromStr;

use super::{check_module_axioms, ConformalModule, ModuleCarrier};
use crate::algebra::{build_standard_algebra, theta_name, StandardKind};
use crate::arith::{DPoly, Scalar};
use crate::element::{ModElement, Parity};
use crate::error::{Error, Result};
use crate::lie::{identity_matrix, LieRep, LieSuperData, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModuleFamily {
    /// `M_𝔙(A, B)`, rank one for scalar `α, Δ`.
    VirasoroMVD,
    /// `M_g̃(π)`.
    CurrentMgLambda,
    /// `M_𝔑(A, B)` on `U ⊕ U^θ`.
    NsMND,
    /// `M_g̃_super(π)` with `a^θ` acting trivially.
    SupercurrentMgLambda,
    /// `M_{𝔙⋉g̃}(Λ, α, Δ)`.
    VirCurrentMVgLambda,
    /// `M_{𝔑⋉g̃_super}(Λ, α, Δ)`.
    NsSupercurrentMNgLambda,
}

impl ModuleFamily {
    pub const ALL: [ModuleFamily; 6] = [
        ModuleFamily::VirasoroMVD,
        ModuleFamily::CurrentMgLambda,
        ModuleFamily::NsMND,
        ModuleFamily::SupercurrentMgLambda,
        ModuleFamily::VirCurrentMVgLambda,
        ModuleFamily::NsSupercurrentMNgLambda,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModuleFamily::VirasoroMVD => "virasoro_MVD",
            ModuleFamily::CurrentMgLambda => "current_MgLambda",
            ModuleFamily::NsMND => "ns_MND",
            ModuleFamily::SupercurrentMgLambda => "supercurrent_MgLambda",
            ModuleFamily::VirCurrentMVgLambda => "vir_current_MVgLambda",
            ModuleFamily::NsSupercurrentMNgLambda => "ns_supercurrent_MNgLambda",
        }
    }

    pub fn algebra_kind(self) -> StandardKind {
        match self {
            ModuleFamily::VirasoroMVD => StandardKind::Virasoro,
            ModuleFamily::CurrentMgLambda => StandardKind::Current,
            ModuleFamily::NsMND => StandardKind::NeveuSchwarz,
            ModuleFamily::SupercurrentMgLambda => StandardKind::Supercurrent,
            ModuleFamily::VirCurrentMVgLambda => StandardKind::VirCurrent,
            ModuleFamily::NsSupercurrentMNgLambda => StandardKind::NsSupercurrent,
        }
    }

    /// Whether the family uses the parameters `α, Δ`.
    pub fn uses_alpha_delta(self) -> bool {
        !matches!(self, ModuleFamily::CurrentMgLambda | ModuleFamily::SupercurrentMgLambda)
    }

    fn has_theta_copy(self) -> bool {
        matches!(self, ModuleFamily::NsMND | ModuleFamily::NsSupercurrentMNgLambda)
    }
}

impl fmt::Display for ModuleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModuleFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ModuleFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Spec(format!("unknown module family {s:?}")))
    }
}

/// Parameters of a family. Unset `lie`/`rep` default to `sl₂` and its
/// two-dimensional representation; unset `α, Δ` default to zero.
/// The matrices `A, B` replace `α·1, Δ·1` when given.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyParams {
    pub alpha: Option<Scalar>,
    pub delta: Option<Scalar>,
    pub a_matrix: Option<Matrix>,
    pub b_matrix: Option<Matrix>,
    pub lie: Option<LieSuperData>,
    pub rep: Option<LieRep>,
}

impl FamilyParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn alpha(mut self, alpha: Scalar) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn delta(mut self, delta: Scalar) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn matrices(mut self, a: Matrix, b: Matrix) -> Self {
        self.a_matrix = Some(a);
        self.b_matrix = Some(b);
        self
    }

    pub fn lie(mut self, lie: LieSuperData, rep: LieRep) -> Self {
        self.lie = Some(lie);
        self.rep = Some(rep);
        self
    }
}

fn scaled_identity(d: usize, c: &Scalar) -> Matrix {
    let mut m = identity_matrix(d);
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = c.clone();
    }
    m
}

/// `Σ_l m[l][k] v^{offset+l}`.
fn column(m: &Matrix, k: usize, offset: usize) -> ModElement {
    ModElement::from_terms(
        m.iter()
            .enumerate()
            .map(|(l, row)| (offset + l, DPoly::constant(row[k].clone()))),
    )
}

fn check_square(m: &Matrix, d: usize, what: &str) -> Result<()> {
    if m.len() != d || m.iter().any(|r| r.len() != d) {
        return Err(Error::DimensionMismatch(format!("{what} must be {d}x{d}")));
    }
    Ok(())
}

fn basis_names(d: usize) -> Vec<String> {
    if d == 1 {
        vec!["u".to_string()]
    } else {
        (1..=d).map(|k| format!("u{k}")).collect()
    }
}

/// Builds the named family and verifies its axioms; a table that fails the
/// check is reported as [`Error::NotAModule`].
pub fn build_module_family(family: ModuleFamily, params: &FamilyParams) -> Result<ConformalModule> {
    let kind = family.algebra_kind();
    let (lie, rep) = if kind.needs_lie_data() {
        let lie = params.lie.clone().unwrap_or_else(LieSuperData::sl2);
        let rep = match &params.rep {
            Some(r) => r.clone(),
            None if lie.name == "sl2" => LieRep::sl2_irrep(1),
            None => return Err(Error::MissingLieData(format!("{family} needs a representation of {}", lie.name))),
        };
        rep.validate(&lie)?;
        (Some(lie), Some(rep))
    } else {
        (None, None)
    };
    let alg = build_standard_algebra(kind, lie.as_ref())?;

    let d = match (&rep, &params.a_matrix) {
        (Some(r), _) => r.dim(),
        (None, Some(a)) => a.len(),
        (None, None) => 1,
    };
    let zero = Scalar::zero();
    let a_mat = match &params.a_matrix {
        Some(a) => a.clone(),
        None => scaled_identity(d, params.alpha.as_ref().unwrap_or(&zero)),
    };
    let b_mat = match &params.b_matrix {
        Some(b) => b.clone(),
        None => scaled_identity(d, params.delta.as_ref().unwrap_or(&zero)),
    };
    check_square(&a_mat, d, "A")?;
    check_square(&b_mat, d, "B")?;

    let parities: Vec<Parity> = rep.as_ref().map_or(vec![Parity::Even; d], |r| r.parities.clone());
    let names = basis_names(d);
    let mut basis: Vec<(String, Parity)> = names.iter().cloned().zip(parities.iter().copied()).collect();
    if family.has_theta_copy() {
        for k in 0..d {
            basis.push((theta_name(&names[k]), parities[k].flip()));
        }
    }
    let refs: Vec<(&str, Parity)> = basis.iter().map(|(n, p)| (n.as_str(), *p)).collect();
    let carrier = ModuleCarrier::free(&refs);

    let mut label = family.name().to_string();
    if family.uses_alpha_delta() {
        if params.a_matrix.is_some() || params.b_matrix.is_some() {
            label.push_str("(A,B)");
        } else {
            label.push_str(&format!(
                "({},{})",
                params.alpha.as_ref().unwrap_or(&zero),
                params.delta.as_ref().unwrap_or(&zero)
            ));
        }
    }
    let mut m = ConformalModule::new(&label, alg.clone(), carrier);
    let th = d;

    if kind != StandardKind::Current && kind != StandardKind::Supercurrent {
        let l = alg.index_of("L")?;
        for k in 0..d {
            // L_(0) u = (∂ + A) u, L_(1) u = B u
            let l0 = &ModElement::term(k, DPoly::d()) + &column(&a_mat, k, 0);
            m.set_action(l, k, 0, l0)?;
            m.set_action(l, k, 1, column(&b_mat, k, 0))?;
        }
    }
    if family.has_theta_copy() {
        let (l, g) = (alg.index_of("L")?, alg.index_of("G")?);
        let half = Scalar::frac(1, 2);
        for k in 0..d {
            let l0 = &ModElement::term(th + k, DPoly::d()) + &column(&a_mat, k, th);
            m.set_action(l, th + k, 0, l0)?;
            let l1 = &column(&b_mat, k, th) + &ModElement::term(th + k, DPoly::constant(half.clone()));
            m.set_action(l, th + k, 1, l1)?;
            m.set_action(g, k, 0, ModElement::basis(th + k))?;
            let g0 = &ModElement::term(k, DPoly::d()) + &column(&a_mat, k, 0);
            m.set_action(g, th + k, 0, g0)?;
            m.set_action(g, th + k, 1, column(&b_mat, k, 0).scale(&Scalar::from_int(2)))?;
        }
    }
    if let (Some(lie), Some(rep)) = (&lie, &rep) {
        for a in 0..lie.dim() {
            let ia = alg.index_of(&lie.basis()[a].name)?;
            let pi = &rep.matrices[a];
            for k in 0..d {
                m.set_action(ia, k, 0, column(pi, k, 0))?;
            }
            if family == ModuleFamily::NsSupercurrentMNgLambda {
                let ith = alg.index_of(&theta_name(&lie.basis()[a].name))?;
                let s = Parity::Odd.sign(lie.parity(a));
                for k in 0..d {
                    // a_(0) u^θ = (-1)^{|a|} (π(a)u)^θ, a^θ_(0) u^θ = π(a)u
                    m.set_action(ia, th + k, 0, column(pi, k, th).scale(&s))?;
                    m.set_action(ith, th + k, 0, column(pi, k, 0))?;
                }
            }
        }
    }

    let report = check_module_axioms(&m);
    if let Some(v) = report.violations.first() {
        return Err(Error::NotAModule(format!("{}: {} at {}: {}", m.name, v.check, v.location, v.rendering)));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::act;

    #[test]
    fn every_family_builds() {
        for family in ModuleFamily::ALL {
            let p = FamilyParams::new().alpha(Scalar::frac(2, 3)).delta(Scalar::frac(-5, 7));
            build_module_family(family, &p).unwrap_or_else(|e| panic!("{family}: {e}"));
        }
    }

    #[test]
    fn mvd_table() {
        let m = build_module_family(
            ModuleFamily::VirasoroMVD,
            &FamilyParams::new().alpha(Scalar::frac(1, 2)).delta(Scalar::from_int(3)),
        )
        .unwrap();
        assert_eq!(m.action(0, 0, 0), ModElement::term(0, DPoly::d_plus(Scalar::frac(1, 2))));
        assert_eq!(m.action(0, 0, 1), ModElement::term(0, DPoly::from_ints(&[3])));
        assert_eq!(m.entries().count(), 2);
    }

    #[test]
    fn current_fundamental() {
        let m = build_module_family(ModuleFamily::CurrentMgLambda, &FamilyParams::new()).unwrap();
        let f = m.algebra().generator("f").unwrap();
        let u1 = m.vector("u1").unwrap();
        assert_eq!(act(&m, &f, 0, &u1).unwrap(), m.vector("u2").unwrap());
        assert!(act(&m, &f, 1, &u1).unwrap().is_zero());
    }

    #[test]
    fn ns_table() {
        let delta = Scalar::from_int(2);
        let m = build_module_family(ModuleFamily::NsMND, &FamilyParams::new().alpha(Scalar::one()).delta(delta)).unwrap();
        let g = m.algebra().generator("G").unwrap();
        let l = m.algebra().generator("L").unwrap();
        let (u, ut) = (m.vector("u").unwrap(), m.vector("uθ").unwrap());
        assert_eq!(act(&m, &g, 0, &u).unwrap(), ut);
        assert_eq!(act(&m, &l, 1, &ut).unwrap(), ut.scale(&Scalar::frac(5, 2)));
        assert_eq!(act(&m, &g, 0, &ut).unwrap(), ModElement::term(0, DPoly::d_plus(Scalar::one())));
    }

    #[test]
    fn non_commuting_matrices_rejected() {
        let a = vec![vec![Scalar::zero(), Scalar::one()], vec![Scalar::zero(), Scalar::zero()]];
        let b = vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::zero(), Scalar::zero()]];
        let r = build_module_family(ModuleFamily::VirasoroMVD, &FamilyParams::new().matrices(a, b));
        assert!(matches!(r, Err(Error::NotAModule(_))));
    }

    #[test]
    fn family_names_parse() {
        for f in ModuleFamily::ALL {
            assert_eq!(f.name().parse::<ModuleFamily>().unwrap(), f);
        }
    }
}
