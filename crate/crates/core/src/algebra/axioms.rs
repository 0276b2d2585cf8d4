use serde_json::json;

use super::product::{product_unchecked, vanishing_bound};
use super::ConformalAlgebra;
use crate::arith::{binom, factorial, DPoly, Scalar};
use crate::element::{AlgElement, Parity};
use crate::error::Result;
use crate::report::{Location, Report};

/// Index ranges used by [`check_conformal_axioms`]; `margin` extra values
/// past each bound must give identically vanishing sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxiomBounds {
    pub b2: u32,
    pub b3: u32,
    pub margin: u32,
}

impl AxiomBounds {
    pub fn for_algebra(alg: &ConformalAlgebra) -> Self {
        let n = alg.max_bound();
        let d = alg.max_table_degree() as u32;
        AxiomBounds {
            b2: n + d + 2,
            b3: 2 * n + d + 2,
            margin: 2,
        }
    }
}

fn parity_or_even(alg: &ConformalAlgebra, x: &AlgElement) -> Result<Parity> {
    Ok(alg.parity_of(x)?.unwrap_or_default())
}

/// Both sides of the skew-symmetry identity
/// `x_(n)y = (-1)^{|x||y|} Σ_j (-1)^{j+n+1} ∂^(j)(y_(n+j)x)`.
fn c2_sides(alg: &ConformalAlgebra, x: &AlgElement, y: &AlgElement, n: u32) -> Result<(AlgElement, AlgElement)> {
    let sign = parity_or_even(alg, x)?.sign(parity_or_even(alg, y)?);
    let lhs = product_unchecked(alg, x, y, n);
    let mut rhs = AlgElement::zero();
    let bound = vanishing_bound(alg, y, x);
    for j in 0..bound.saturating_sub(n) {
        let inner = product_unchecked(alg, y, x, n + j);
        let mut c = &sign / &factorial(j as usize);
        if (j + n + 1) % 2 == 1 {
            c = -c;
        }
        rhs.add_scaled(&inner.mul_poly(&DPoly::monomial(Scalar::one(), j as usize)), &c);
    }
    Ok((lhs, rhs))
}

/// Both sides of the Jacobi identity
/// `x_(m)(y_(n)z) = Σ_j C(m,j)(x_(j)y)_(m+n-j)z + (-1)^{|x||y|} y_(n)(x_(m)z)`.
fn c3_sides(
    alg: &ConformalAlgebra,
    x: &AlgElement,
    y: &AlgElement,
    z: &AlgElement,
    m: u32,
    n: u32,
) -> Result<(AlgElement, AlgElement)> {
    let sign = parity_or_even(alg, x)?.sign(parity_or_even(alg, y)?);
    parity_or_even(alg, z)?;
    let lhs = product_unchecked(alg, x, &product_unchecked(alg, y, z, n), m);
    let mut rhs = product_unchecked(alg, y, &product_unchecked(alg, x, z, m), n).scale(&sign);
    let bound = vanishing_bound(alg, x, y);
    for j in 0..=m.min(bound.saturating_sub(1)) {
        if bound == 0 {
            break;
        }
        let xy = product_unchecked(alg, x, y, j);
        if xy.is_zero() {
            continue;
        }
        let term = product_unchecked(alg, &xy, z, m + n - j);
        rhs.add_scaled(&term, &binom(m as i64, j as usize));
    }
    Ok((lhs, rhs))
}

/// Right side minus left side of the skew-symmetry identity.
pub fn c2_residual(alg: &ConformalAlgebra, x: &AlgElement, y: &AlgElement, n: u32) -> Result<AlgElement> {
    let (lhs, rhs) = c2_sides(alg, x, y, n)?;
    Ok(&rhs - &lhs)
}

/// Right side minus left side of the Jacobi identity.
pub fn c3_residual(
    alg: &ConformalAlgebra,
    x: &AlgElement,
    y: &AlgElement,
    z: &AlgElement,
    m: u32,
    n: u32,
) -> Result<AlgElement> {
    let (lhs, rhs) = c3_sides(alg, x, y, z, m, n)?;
    Ok(&rhs - &lhs)
}

/// Checks skew-symmetry on generator pairs and Jacobi on generator triples
/// within [`AxiomBounds::for_algebra`].
pub fn check_conformal_axioms(alg: &ConformalAlgebra) -> Report {
    check_conformal_axioms_with(alg, AxiomBounds::for_algebra(alg))
}

pub fn check_conformal_axioms_with(alg: &ConformalAlgebra, bounds: AxiomBounds) -> Report {
    let mut report = Report::new(format!("axioms {}", alg.name));
    let names = alg.names();
    let k = alg.len();
    let gens: Vec<AlgElement> = (0..k).map(AlgElement::basis).collect();
    let push = |report: &mut Report, check: &str, loc: Location, v: &AlgElement| {
        report.push(check, loc, v.to_json(&names, "gen"), v.render(&names));
    };

    for i in 0..k {
        for j in 0..k {
            for n in 0..=bounds.b2 + bounds.margin {
                let (lhs, rhs) = c2_sides(alg, &gens[i], &gens[j], n).expect("generators are homogeneous");
                let loc = Location::new([&names[i], &names[j]]).with("n", n as i64);
                if n <= bounds.b2 {
                    let r = &rhs - &lhs;
                    if !r.is_zero() {
                        push(&mut report, "C2", loc, &r);
                    }
                } else {
                    for side in [&lhs, &rhs] {
                        if !side.is_zero() {
                            push(&mut report, "C2 margin", loc.clone(), side);
                        }
                    }
                }
            }
        }
    }

    let top = bounds.b3 + bounds.margin;
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                for m in 0..=top {
                    for n in 0..=top {
                        let (lhs, rhs) =
                            c3_sides(alg, &gens[i], &gens[j], &gens[l], m, n).expect("generators are homogeneous");
                        let loc = Location::new([&names[i], &names[j], &names[l]])
                            .with("m", m as i64)
                            .with("n", n as i64);
                        if m <= bounds.b3 && n <= bounds.b3 {
                            let r = &rhs - &lhs;
                            if !r.is_zero() {
                                push(&mut report, "C3", loc, &r);
                            }
                        } else {
                            for side in [&lhs, &rhs] {
                                if !side.is_zero() {
                                    push(&mut report, "C3 margin", loc.clone(), side);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report.set("bounds", json!({"C2": bounds.b2, "C3": bounds.b3, "margin": bounds.margin}));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_standard_algebra, StandardKind};

    #[test]
    fn bounds_for_virasoro() {
        let a = build_standard_algebra(StandardKind::Virasoro, None).unwrap();
        assert_eq!(AxiomBounds::for_algebra(&a), AxiomBounds { b2: 5, b3: 7, margin: 2 });
    }

    #[test]
    fn mutated_virasoro_fails_skew_at_zero() {
        let mut a = build_standard_algebra(StandardKind::Virasoro, None).unwrap();
        a.set_product(0, 0, 0, AlgElement::basis(0)).unwrap();
        let r = check_conformal_axioms(&a);
        let v = r
            .violations
            .iter()
            .find(|v| v.check == "C2" && v.location.index("n") == Some(0))
            .expect("C2 at n=0");
        assert_eq!(v.rendering, "2∂L - 2L");
    }

    #[test]
    fn skew_at_zero_for_virasoro_by_hand() {
        // -L_(0)L + ∂(L_(1)L) = -∂L + 2∂L = ∂L
        let a = build_standard_algebra(StandardKind::Virasoro, None).unwrap();
        let l = AlgElement::basis(0);
        let (lhs, rhs) = c2_sides(&a, &l, &l, 0).unwrap();
        assert_eq!(lhs, l.shift(1));
        assert_eq!(rhs, l.shift(1));
    }
}
