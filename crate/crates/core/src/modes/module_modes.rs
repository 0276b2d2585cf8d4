use super::{bracket_unchecked, element_mode, mode_parity, ModeVec, Window};
use crate::arith::gen_binomial;
use crate::error::{Error, Result};
use crate::module::ConformalModule;
use crate::report::{Location, Report};

fn check_module_modes(module: &ConformalModule, v: &ModeVec) -> Result<()> {
    let len = module.carrier().len();
    if let Some((b, _, _)) = v.terms().find(|&(b, _, _)| b >= len) {
        return Err(Error::UnknownBasis(format!("#{b}")));
    }
    Ok(())
}

fn act_modes(module: &ConformalModule, x: &ModeVec, v: &ModeVec) -> ModeVec {
    let mut out = ModeVec::zero();
    for (i, m, c) in x.terms() {
        for (b, n, d) in v.terms() {
            let cd = c * d;
            for j in 0..module.bound(i, b) {
                let coeff = gen_binomial(m, j as i64).expect("j ≥ 0");
                if coeff.is_zero() {
                    continue;
                }
                let image = element_mode(&module.action(i, b, j), m + n - j as i64);
                out.add_scaled(&image, &(&coeff * &cd));
            }
        }
    }
    out
}

/// `a_(m) v_(n) = Σ_j C(m,j) (a_(j)v)_(m+n-j)` on `V(M)`.
pub fn expand_module_modes(module: &ConformalModule, x: &ModeVec, v: &ModeVec) -> Result<ModeVec> {
    mode_parity(module.algebra(), x)?;
    check_module_modes(module, v)?;
    Ok(act_modes(module, x, v))
}

/// `[a_(m), b_(n)] v_(p) = Σ_j C(m,j) (a_(j)b)_(m+n-j) v_(p)` for generators,
/// basis vectors, and `m, n, p` in the window.
pub fn check_mode_compatibility(module: &ConformalModule, window: Window) -> Report {
    let alg = module.algebra();
    let (gnames, bnames) = (alg.names(), module.names());
    let mut report = Report::new(format!("mode compatibility {}", module.name));
    let label = |b: usize, n: i64| format!("{}_({n})", bnames[b]);
    for i in 0..alg.len() {
        for j in 0..alg.len() {
            let sign = alg.parity(i).sign(alg.parity(j));
            for b in 0..bnames.len() {
                for m in window.range() {
                    for n in window.range() {
                        let (x, y) = (ModeVec::mode(i, m), ModeVec::mode(j, n));
                        let xy = bracket_unchecked(alg, &x, &y);
                        for p in window.range() {
                            let v = ModeVec::mode(b, p);
                            let mut lhs = act_modes(module, &x, &act_modes(module, &y, &v));
                            lhs.add_scaled(&act_modes(module, &y, &act_modes(module, &x, &v)), &-&sign);
                            let rhs = act_modes(module, &xy, &v);
                            let r = rhs.sub(&lhs);
                            if !r.is_zero() {
                                let loc = Location::new([&gnames[i], &gnames[j], &bnames[b]])
                                    .with("m", m)
                                    .with("n", n)
                                    .with("p", p);
                                report.push("mode M1", loc, r.to_json(&bnames, "basis"), r.render(label));
                            }
                        }
                    }
                }
            }
        }
    }
    report.note(format!("modes in {window}"));
    report
}
