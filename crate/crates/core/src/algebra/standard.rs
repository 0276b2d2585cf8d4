use std::fmt;
use std::str::FromStr;

use super::{ConformalAlgebra, Generator};
use crate::arith::{DPoly, Scalar};
use crate::element::{AlgElement, Parity};
use crate::error::{Error, Result};
use crate::lie::{LieSuperData, LieVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StandardKind {
    Virasoro,
    Current,
    NeveuSchwarz,
    Supercurrent,
    VirCurrent,
    NsSupercurrent,
}

impl StandardKind {
    pub const ALL: [StandardKind; 6] = [
        StandardKind::Virasoro,
        StandardKind::Current,
        StandardKind::NeveuSchwarz,
        StandardKind::Supercurrent,
        StandardKind::VirCurrent,
        StandardKind::NsSupercurrent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StandardKind::Virasoro => "virasoro",
            StandardKind::Current => "current",
            StandardKind::NeveuSchwarz => "neveu_schwarz",
            StandardKind::Supercurrent => "supercurrent",
            StandardKind::VirCurrent => "vir_current",
            StandardKind::NsSupercurrent => "ns_supercurrent",
        }
    }

    pub fn needs_lie_data(self) -> bool {
        !matches!(self, StandardKind::Virasoro | StandardKind::NeveuSchwarz)
    }

    fn has_virasoro(self) -> bool {
        matches!(
            self,
            StandardKind::Virasoro | StandardKind::NeveuSchwarz | StandardKind::VirCurrent | StandardKind::NsSupercurrent
        )
    }

    fn has_ns(self) -> bool {
        matches!(self, StandardKind::NeveuSchwarz | StandardKind::NsSupercurrent)
    }

    fn has_theta(self) -> bool {
        matches!(self, StandardKind::Supercurrent | StandardKind::NsSupercurrent)
    }
}

impl fmt::Display for StandardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StandardKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        StandardKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .or(match key.as_str() {
                "ns" => Some(StandardKind::NeveuSchwarz),
                "vir" => Some(StandardKind::Virasoro),
                _ => None,
            })
            .ok_or_else(|| Error::Spec(format!("unknown standard algebra {s:?}")))
    }
}

/// Name of the odd copy `a^θ` of a current `a`.
pub fn theta_name(name: &str) -> String {
    format!("{name}θ")
}

fn lie_to_alg(v: &LieVec, offset: usize) -> AlgElement {
    AlgElement::from_terms(v.iter().map(|(&k, c)| (offset + k, DPoly::constant(c.clone()))))
}

fn poly(coeffs: &[(i64, i64)]) -> DPoly {
    DPoly::from_coeffs(coeffs.iter().map(|&(p, q)| Scalar::frac(p, q)).collect())
}

/// Builds one of the six standard conformal (super)algebras. Current-type
/// kinds need Lie superalgebra data, which must pass validation.
pub fn build_standard_algebra(kind: StandardKind, g: Option<&LieSuperData>) -> Result<ConformalAlgebra> {
    let g = if kind.needs_lie_data() {
        let g = g.ok_or_else(|| Error::MissingLieData(kind.name().to_string()))?;
        let report = g.validate();
        if !report.passed() {
            let first = &report.violations[0];
            return Err(Error::InvalidLieData(format!(
                "{} fails {} at {}: {}",
                g.name, first.check, first.location, first.rendering
            )));
        }
        Some(g)
    } else {
        None
    };

    let mut gens = Vec::new();
    if kind.has_virasoro() {
        gens.push(Generator::new("L", Parity::Even, Some(Scalar::from_int(2))));
    }
    if kind.has_ns() {
        gens.push(Generator::new("G", Parity::Odd, Some(Scalar::frac(3, 2))));
    }
    let cur = gens.len();
    if let Some(g) = g {
        for b in g.basis() {
            gens.push(Generator::new(&b.name, b.parity, Some(Scalar::one())));
        }
    }
    let th = gens.len();
    if let (Some(g), true) = (g, kind.has_theta()) {
        for b in g.basis() {
            gens.push(Generator::new(&theta_name(&b.name), b.parity.flip(), Some(Scalar::frac(1, 2))));
        }
    }

    let name = match g {
        Some(g) => format!("{}({})", kind.name(), g.name),
        None => kind.name().to_string(),
    };
    let mut alg = ConformalAlgebra::new(&name, gens);
    let (l, gg) = (0, 1);

    if kind.has_virasoro() {
        alg.set_product(l, l, 0, AlgElement::term(l, DPoly::d()))?;
        alg.set_product(l, l, 1, AlgElement::term(l, DPoly::from_ints(&[2])))?;
    }
    if kind.has_ns() {
        alg.set_product(l, gg, 0, AlgElement::term(gg, DPoly::d()))?;
        alg.set_product(gg, l, 0, AlgElement::term(gg, poly(&[(0, 1), (1, 2)])))?;
        alg.set_product(l, gg, 1, AlgElement::term(gg, poly(&[(3, 2)])))?;
        alg.set_product(gg, l, 1, AlgElement::term(gg, poly(&[(3, 2)])))?;
        alg.set_product(gg, gg, 0, AlgElement::term(l, DPoly::from_ints(&[2])))?;
    }
    if let Some(g) = g {
        let d = g.dim();
        for a in 0..d {
            for b in 0..d {
                let br = g.bracket(a, b);
                alg.set_product(cur + a, cur + b, 0, lie_to_alg(&br, cur))?;
                if kind.has_theta() {
                    alg.set_product(cur + a, th + b, 0, lie_to_alg(&br, th))?;
                }
            }
            if kind.has_virasoro() {
                alg.set_product(l, cur + a, 0, AlgElement::term(cur + a, DPoly::d()))?;
                alg.set_product(l, cur + a, 1, AlgElement::basis(cur + a))?;
            }
            if kind == StandardKind::NsSupercurrent {
                alg.set_product(l, th + a, 0, AlgElement::term(th + a, DPoly::d()))?;
                alg.set_product(l, th + a, 1, AlgElement::term(th + a, poly(&[(1, 2)])))?;
                // G passes the odd current a with sign (-1)^{|a|}
                let s = Parity::Odd.sign(g.parity(a));
                alg.set_product(gg, th + a, 0, AlgElement::basis(cur + a).scale(&s))?;
                alg.set_product(gg, cur + a, 0, AlgElement::term(th + a, DPoly::d()).scale(&s))?;
                alg.set_product(gg, cur + a, 1, AlgElement::basis(th + a).scale(&s))?;
            }
        }
    }
    alg.complete_by_skew_symmetry()?;
    Ok(alg)
}
