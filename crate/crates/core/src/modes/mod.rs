//! The Lie superalgebra of modes `a_(m)`, `m ∈ ℤ`, attached to a conformal
//! algebra, and the corresponding mode action on `V(M)`.

mod locality;
mod module_modes;

pub use locality::{
    action_array, bracket_array, check_dong, locality_order, ope_extract, BracketArray, DongTriple, Locality, Window,
};
pub use module_modes::{check_mode_compatibility, expand_module_modes};

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::algebra::{vanishing_bound, ConformalAlgebra};
use crate::algebra::product::product_unchecked;
use crate::arith::{falling, gen_binomial, Scalar};
use crate::element::{homogeneous_parity, Parity, PolyVec};
use crate::error::{Error, Result};
use crate::report::{Location, Report};

/// `Σ c · x^i_(m)` over `(i, m) ∈ I × ℤ`; used both for algebra modes and
/// for module modes `v^β_(n)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeVec {
    terms: BTreeMap<(usize, i64), Scalar>,
}

pub type ModeElement = ModeVec;
pub type ModeModuleElement = ModeVec;

impl ModeVec {
    pub fn zero() -> Self {
        ModeVec::default()
    }

    pub fn mode(i: usize, m: i64) -> Self {
        ModeVec::term(i, m, Scalar::one())
    }

    pub fn term(i: usize, m: i64, c: Scalar) -> Self {
        let mut v = ModeVec::zero();
        v.add(i, m, &c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, i64, &Scalar)> {
        self.terms.iter().map(|(&(i, m), c)| (i, m, c))
    }

    pub fn coeff(&self, i: usize, m: i64) -> Scalar {
        self.terms.get(&(i, m)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&mut self, i: usize, m: i64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, m)).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, m));
        }
    }

    pub fn add_scaled(&mut self, other: &ModeVec, c: &Scalar) {
        for (&(i, m), x) in &other.terms {
            self.add(i, m, &(x * c));
        }
    }

    pub fn scale(&self, c: &Scalar) -> ModeVec {
        let mut out = ModeVec::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &ModeVec) -> ModeVec {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    /// The derivation `a_(m) ↦ -m a_(m-1)`.
    pub fn derive(&self) -> ModeVec {
        let mut out = ModeVec::zero();
        for (&(i, m), c) in &self.terms {
            out.add(i, m - 1, &(c * &Scalar::from_int(-m)));
        }
        out
    }

    pub fn render(&self, label: impl Fn(usize, i64) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (&(i, m), c) in &self.terms {
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !c.abs().is_one() {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(&label(i, m));
        }
        out
    }

    pub fn to_json(&self, names: &[String], key: &str) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(&(i, m), c)| {
                    let mut obj = serde_json::Map::new();
                    obj.insert(key.into(), json!(names.get(i).cloned().unwrap_or_else(|| i.to_string())));
                    obj.insert("mode".into(), json!(m));
                    obj.insert("coeff".into(), json!(c));
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Modes of `Σ p_i(∂) x_i` at index `m`, using `(∂^r x)_(m) = (-1)^r m^{(r)} x_(m-r)`.
pub fn element_mode(x: &PolyVec, m: i64) -> ModeVec {
    let mut out = ModeVec::zero();
    for (i, p) in x.terms() {
        for (r, c) in p.coeffs().iter().enumerate() {
            let mut f = &falling(m, r) * c;
            if r % 2 == 1 {
                f = -f;
            }
            out.add(i, m - r as i64, &f);
        }
    }
    out
}

/// Label of `x^i_(m)`; with a display weight `w` the physics index
/// `m - w + 1` is used, e.g. `L_(2)` ↦ `L_1`, `G_(1)` ↦ `G_1/2`.
pub fn mode_label(alg: &ConformalAlgebra, i: usize, m: i64, physics: bool) -> String {
    let g = &alg.generators()[i];
    match (&g.weight, physics) {
        (Some(w), true) => {
            let idx = &(&Scalar::from_int(m) - w) + &Scalar::one();
            format!("{}_{}", g.name, idx)
        }
        _ => format!("{}_({m})", g.name),
    }
}

pub fn render_modes(alg: &ConformalAlgebra, v: &ModeVec, physics: bool) -> String {
    v.render(|i, m| mode_label(alg, i, m, physics))
}

pub(crate) fn mode_parity(alg: &ConformalAlgebra, x: &ModeVec) -> Result<Option<Parity>> {
    let idx: Vec<usize> = x.terms.keys().map(|&(i, _)| i).collect();
    homogeneous_parity(
        idx.iter(),
        |i| alg.generators().get(i).map(|g| g.parity),
        |i| Error::UnknownGenerator(format!("#{i}")),
    )
}

fn bracket_modes(alg: &ConformalAlgebra, i: usize, m: i64, j: usize, n: i64) -> ModeVec {
    let (a, b) = (PolyVec::basis(i), PolyVec::basis(j));
    let mut out = ModeVec::zero();
    for k in 0..vanishing_bound(alg, &a, &b) {
        let c = gen_binomial(m, k as i64).expect("k ≥ 0");
        if c.is_zero() {
            continue;
        }
        let entry = product_unchecked(alg, &a, &b, k);
        out.add_scaled(&element_mode(&entry, m + n - k as i64), &c);
    }
    out
}

pub(crate) fn bracket_unchecked(alg: &ConformalAlgebra, x: &ModeVec, y: &ModeVec) -> ModeVec {
    let mut out = ModeVec::zero();
    for (i, m, c) in x.terms() {
        for (j, n, d) in y.terms() {
            out.add_scaled(&bracket_modes(alg, i, m, j, n), &(c * d));
        }
    }
    out
}

/// `[a_(m), b_(n)] = Σ_k C(m,k) (a_(k)b)_(m+n-k)` with generalized binomials.
pub fn mode_bracket(alg: &ConformalAlgebra, x: &ModeVec, y: &ModeVec) -> Result<ModeVec> {
    mode_parity(alg, x)?;
    mode_parity(alg, y)?;
    Ok(bracket_unchecked(alg, x, y))
}

/// Super-Jacobi identity on all generator triples with modes in `[lo, hi]`.
pub fn check_jacobi_window(alg: &ConformalAlgebra, lo: i64, hi: i64) -> Report {
    let mut report = Report::new(format!("mode jacobi {}", alg.name));
    let names = alg.names();
    let k = alg.len();
    for i in 0..k {
        for j in 0..k {
            let sign = alg.parity(i).sign(alg.parity(j));
            for l in 0..k {
                for m in lo..=hi {
                    for n in lo..=hi {
                        let x = ModeVec::mode(i, m);
                        let y = ModeVec::mode(j, n);
                        for p in lo..=hi {
                            let z = ModeVec::mode(l, p);
                            let lhs = bracket_unchecked(alg, &x, &bracket_unchecked(alg, &y, &z));
                            let mut rhs = bracket_unchecked(alg, &bracket_unchecked(alg, &x, &y), &z);
                            rhs.add_scaled(&bracket_unchecked(alg, &y, &bracket_unchecked(alg, &x, &z)), &sign);
                            let r = rhs.sub(&lhs);
                            if !r.is_zero() {
                                let loc = Location::new([&names[i], &names[j], &names[l]])
                                    .with("m", m)
                                    .with("n", n)
                                    .with("p", p);
                                report.push("jacobi", loc, r.to_json(&names, "gen"), render_modes(alg, &r, false));
                            }
                        }
                    }
                }
            }
        }
    }
    report.note(format!("modes in [{lo}, {hi}]"));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_standard_algebra, StandardKind};
    use crate::lie::LieSuperData;

    fn vir() -> ConformalAlgebra {
        build_standard_algebra(StandardKind::Virasoro, None).unwrap()
    }

    #[test]
    fn virasoro_brackets() {
        let a = vir();
        let b = mode_bracket(&a, &ModeVec::mode(0, 2), &ModeVec::mode(0, 1)).unwrap();
        assert_eq!(b, ModeVec::mode(0, 2));
        assert_eq!(
            format!("[{}, {}] = {}", mode_label(&a, 0, 2, true), mode_label(&a, 0, 1, true), render_modes(&a, &b, true)),
            "[L_1, L_0] = L_1"
        );
        let b = mode_bracket(&a, &ModeVec::mode(0, -1), &ModeVec::mode(0, 1)).unwrap();
        assert_eq!(b, ModeVec::term(0, -1, Scalar::from_int(-2)));
    }

    #[test]
    fn current_brackets() {
        let a = build_standard_algebra(StandardKind::Current, Some(&LieSuperData::sl2())).unwrap();
        for m in -3..4 {
            for n in -3..4 {
                let b = mode_bracket(&a, &ModeVec::mode(0, m), &ModeVec::mode(2, n)).unwrap();
                assert_eq!(b, ModeVec::mode(1, m + n));
            }
        }
    }

    #[test]
    fn ns_odd_bracket() {
        let a = build_standard_algebra(StandardKind::NeveuSchwarz, None).unwrap();
        let b = mode_bracket(&a, &ModeVec::mode(1, 1), &ModeVec::mode(1, 1)).unwrap();
        assert_eq!(b, ModeVec::term(0, 2, Scalar::from_int(2)));
        assert_eq!(mode_label(&a, 1, 1, true), "G_1/2");
    }

    #[test]
    fn jacobi_windows() {
        assert!(check_jacobi_window(&vir(), -4, 8).passed());
        let ns = build_standard_algebra(StandardKind::NeveuSchwarz, None).unwrap();
        assert!(check_jacobi_window(&ns, -3, 6).passed());
        let mut bad = vir();
        bad.set_product(0, 0, 1, PolyVec::term(0, crate::arith::DPoly::from_ints(&[3]))).unwrap();
        let r = check_jacobi_window(&bad, -2, 3);
        assert!(!r.passed());
        assert_eq!(r.violations[0].location.subjects.len(), 3);
    }

    #[test]
    fn derivation_of_modes() {
        // [∂, a_(n)] = -n a_(n-1) is a derivation of the bracket
        let a = build_standard_algebra(StandardKind::NeveuSchwarz, None).unwrap();
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            for m in -3..5 {
                for n in -3..5 {
                    let (x, y) = (ModeVec::mode(i, m), ModeVec::mode(j, n));
                    let lhs = bracket_unchecked(&a, &x, &y).derive();
                    let mut rhs = bracket_unchecked(&a, &x.derive(), &y);
                    rhs.add_scaled(&bracket_unchecked(&a, &x, &y.derive()), &Scalar::one());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn element_modes_of_derivative() {
        let l = PolyVec::term(0, crate::arith::DPoly::d());
        assert_eq!(element_mode(&l, 3), ModeVec::term(0, 2, Scalar::from_int(-3)));
    }
}
