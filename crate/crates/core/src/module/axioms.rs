use serde_json::json;

use super::ConformalModule;
use crate::algebra::product::product_unchecked;
use crate::algebra::vanishing_bound;
use crate::arith::binom;
use crate::element::{AlgElement, ModElement};
use crate::error::Result;
use crate::report::{Location, Report};

/// Index range for the commutator identity and the number of extra values
/// past it on which both sides must vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModuleBounds {
    pub b: u32,
    pub margin: u32,
}

impl ModuleBounds {
    pub fn for_module(module: &ConformalModule) -> Self {
        let alg = module.algebra();
        let deg = alg.max_table_degree().max(module.max_action_degree()) as u32;
        ModuleBounds {
            b: alg.max_bound() + module.max_bound() + deg + 2,
            margin: 2,
        }
    }
}

/// `[x_(m), y_(n)] v` and `Σ_j C(m,j) (x_(j)y)_(m+n-j) v`.
fn m1_sides(
    module: &ConformalModule,
    x: &AlgElement,
    y: &AlgElement,
    v: &ModElement,
    m: u32,
    n: u32,
) -> Result<(ModElement, ModElement)> {
    let alg = module.algebra();
    let px = alg.parity_of(x)?.unwrap_or_default();
    let py = alg.parity_of(y)?.unwrap_or_default();
    module.parity_of(v)?;
    let xy_v = module.act_unchecked(x, m, &module.act_unchecked(y, n, v));
    let yx_v = module.act_unchecked(y, n, &module.act_unchecked(x, m, v));
    let lhs = &xy_v - &yx_v.scale(&px.sign(py));
    let mut rhs = ModElement::zero();
    let bound = vanishing_bound(alg, x, y);
    for j in 0..=m {
        if j >= bound {
            break;
        }
        let xy = product_unchecked(alg, x, y, j);
        if !xy.is_zero() {
            rhs.add_scaled(&module.act_unchecked(&xy, m + n - j, v), &binom(m as i64, j as usize));
        }
    }
    Ok((lhs, rhs))
}

/// Right side minus left side of `[x_(m), y_(n)] v = Σ_j C(m,j)(x_(j)y)_(m+n-j) v`.
pub fn m1_residual(
    module: &ConformalModule,
    x: &AlgElement,
    y: &AlgElement,
    v: &ModElement,
    m: u32,
    n: u32,
) -> Result<ModElement> {
    let (lhs, rhs) = m1_sides(module, x, y, v, m, n)?;
    Ok(&rhs - &lhs)
}

pub fn check_module_axioms(module: &ConformalModule) -> Report {
    check_module_axioms_with(module, ModuleBounds::for_module(module))
}

/// Checks the commutator identity on generators and basis vectors, and that
/// every action is well defined on torsion summands.
pub fn check_module_axioms_with(module: &ConformalModule, bounds: ModuleBounds) -> Report {
    let mut report = Report::new(format!("module axioms {}", module.name));
    let alg = module.algebra();
    let gnames = alg.names();
    let bnames = module.names();
    let gens: Vec<AlgElement> = (0..alg.len()).map(AlgElement::basis).collect();
    let push = |report: &mut Report, check: &str, loc: Location, v: &ModElement| {
        report.push(check, loc, v.to_json(&bnames, "basis"), v.render(&bnames));
    };

    let top = bounds.b + bounds.margin;
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            for beta in 0..bnames.len() {
                let v = ModElement::basis(beta);
                for m in 0..=top {
                    for n in 0..=top {
                        let (lhs, rhs) = m1_sides(module, &gens[i], &gens[j], &v, m, n).expect("basis is homogeneous");
                        let loc = Location::new([&gnames[i], &gnames[j], &bnames[beta]])
                            .with("m", m as i64)
                            .with("n", n as i64);
                        if m <= bounds.b && n <= bounds.b {
                            let r = &rhs - &lhs;
                            if !r.is_zero() {
                                push(&mut report, "M1", loc, &r);
                            }
                        } else {
                            for side in [&lhs, &rhs] {
                                if !side.is_zero() {
                                    push(&mut report, "M1 margin", loc.clone(), side);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    for (beta, b) in module.carrier().basis().iter().enumerate() {
        if b.is_free() {
            continue;
        }
        // q(∂) v^β is zero in the carrier, so every action on it must vanish
        let zero = ModElement::term(beta, b.torsion.clone());
        let deg = b.torsion.degree().unwrap_or(0) as u32;
        for i in 0..gens.len() {
            for n in 0..module.bound(i, beta) + deg + bounds.margin {
                let r = module.act_unchecked(&gens[i], n, &zero);
                if !r.is_zero() {
                    let loc = Location::new([&gnames[i], &bnames[beta]]).with("n", n as i64);
                    push(&mut report, "torsion", loc, &r);
                }
            }
        }
    }
    report.set("bounds", json!({"M1": bounds.b, "margin": bounds.margin}));
    report
}
