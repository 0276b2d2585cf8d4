use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::json;

use super::{bracket_unchecked, element_mode, expand_module_modes, ModeVec};
use crate::algebra::product::product_unchecked;
use crate::algebra::{vanishing_bound, ConformalAlgebra};
use crate::arith::binom;
use crate::element::{AlgElement, ModElement};
use crate::error::{Error, Result};
use crate::module::ConformalModule;
use crate::report::{Location, Report};

/// Closed integer interval of mode indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        Window { lo, hi }
    }

    /// `[lo + s, hi - s]`, if non-empty.
    pub fn shrink(self, s: i64) -> Option<Window> {
        (self.lo + s <= self.hi - s).then_some(Window::new(self.lo + s, self.hi - s))
    }

    pub fn grow(self, s: i64) -> Window {
        Window::new(self.lo - s, self.hi + s)
    }

    pub fn range(self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn contains(self, m: i64) -> bool {
        self.lo <= m && m <= self.hi
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl FromStr for Window {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("window must look like -6:10, got {s:?}"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        let (lo, hi) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if lo > hi {
            return Err(Error::WindowTooSmall(format!("empty window {s}")));
        }
        Ok(Window::new(lo, hi))
    }
}

/// Coefficients `x_(m) · y_(n)` for `(m, n)` in a square window: the mode
/// table of `[x(z), y(w)]` or of `x(z) v(w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketArray {
    pub left: String,
    pub right: String,
    pub window: Window,
    entries: BTreeMap<(i64, i64), ModeVec>,
}

impl BracketArray {
    pub fn entry(&self, m: i64, n: i64) -> &ModeVec {
        &self.entries[&(m, n)]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(ModeVec::is_zero)
    }
}

pub fn bracket_array(alg: &ConformalAlgebra, x: &AlgElement, y: &AlgElement, window: Window) -> Result<BracketArray> {
    alg.parity_of(x)?;
    alg.parity_of(y)?;
    let names = alg.names();
    let mut entries = BTreeMap::new();
    for m in window.range() {
        let xm = element_mode(x, m);
        for n in window.range() {
            entries.insert((m, n), bracket_unchecked(alg, &xm, &element_mode(y, n)));
        }
    }
    Ok(BracketArray {
        left: x.render(&names),
        right: y.render(&names),
        window,
        entries,
    })
}

/// Array of `x_(m) v_(n)` in `V(M)`.
pub fn action_array(module: &ConformalModule, x: &AlgElement, v: &ModElement, window: Window) -> Result<BracketArray> {
    module.algebra().parity_of(x)?;
    module.parity_of(v)?;
    let mut entries = BTreeMap::new();
    for m in window.range() {
        let xm = element_mode(x, m);
        for n in window.range() {
            entries.insert((m, n), expand_module_modes(module, &xm, &element_mode(v, n))?);
        }
    }
    Ok(BracketArray {
        left: x.render(&module.algebra().names()),
        right: v.render(&module.names()),
        window,
        entries,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Locality {
    /// `(z-w)^order` kills the array on the reliable sub-window.
    Order { order: u32, reliable: Window },
    /// No order up to `tested` fits inside the window.
    ExceedsWindow { tested: u32 },
}

impl Locality {
    pub fn order(self) -> Option<u32> {
        match self {
            Locality::Order { order, .. } => Some(order),
            Locality::ExceedsWindow { .. } => None,
        }
    }
}

/// Smallest `N` with `Σ_k (-1)^k C(N,k) entry(p+N-k, q+k) = 0` for all
/// `p, q` in `[lo+N, hi-N]`.
pub fn locality_order(arr: &BracketArray) -> Locality {
    let mut n = 0u32;
    while let Some(reliable) = arr.window.shrink(n as i64) {
        let holds = reliable.range().all(|p| {
            reliable.range().all(|q| {
                let mut acc = ModeVec::zero();
                for k in 0..=n as i64 {
                    let mut c = binom(n as i64, k as usize);
                    if k % 2 == 1 {
                        c = -c;
                    }
                    acc.add_scaled(arr.entry(p + n as i64 - k, q + k), &c);
                }
                acc.is_zero()
            })
        });
        if holds {
            return Locality::Order { order: n, reliable };
        }
        n += 1;
    }
    Locality::ExceedsWindow {
        tested: n.saturating_sub(1),
    }
}

/// Modes of `x_(j) y` read off the array:
/// `(x_(j)y)_(n) = Σ_k C(j,k) (-1)^k [x_(j-k), y_(n+k)]`, for `n` in `[lo+j, hi-j]`.
pub fn ope_extract(arr: &BracketArray, j: u32) -> Result<(Window, Vec<(i64, ModeVec)>)> {
    let w = arr.window;
    let reliable = w
        .shrink(j as i64)
        .filter(|_| w.contains(0) && w.contains(j as i64))
        .ok_or_else(|| Error::WindowTooSmall(format!("window {w} cannot resolve j = {j}")))?;
    let mut out = Vec::new();
    for n in reliable.range() {
        let mut acc = ModeVec::zero();
        for k in 0..=j as i64 {
            let mut c = binom(j as i64, k as usize);
            if k % 2 == 1 {
                c = -c;
            }
            acc.add_scaled(arr.entry(j as i64 - k, n + k), &c);
        }
        out.push((n, acc));
    }
    Ok((reliable, out))
}

/// A triple `(a, b, v)` for the derived pairs `(a_(j)b, v)` and `(a, b_(j)v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DongTriple {
    pub a: AlgElement,
    pub b: AlgElement,
    pub v: ModElement,
}

/// For each triple and each `j` below the locality bound of `(a, b)`, both
/// derived pairs must have a finite locality order inside the window.
pub fn check_dong(module: &ConformalModule, triples: &[DongTriple], window: Window) -> Result<Report> {
    let alg = module.algebra();
    let mut report = Report::new(format!("dong {}", module.name));
    let mut orders = Vec::new();
    for (t, tr) in triples.iter().enumerate() {
        for j in 0..vanishing_bound(alg, &tr.a, &tr.b) {
            let ab = product_unchecked(alg, &tr.a, &tr.b, j);
            let bv = module.act_unchecked(&tr.b, j, &tr.v);
            let pairs = [
                ("a_(j)b, v", action_array(module, &ab, &tr.v, window)?),
                ("a, b_(j)v", action_array(module, &tr.a, &bv, window)?),
            ];
            for (kind, arr) in pairs {
                let loc = Location::new([arr.left.clone(), arr.right.clone()])
                    .with("j", j as i64)
                    .with("triple", t as i64);
                match locality_order(&arr) {
                    Locality::Order { order, reliable } => orders.push(json!({
                        "triple": t,
                        "j": j,
                        "pair": kind,
                        "order": order,
                        "reliable": [reliable.lo, reliable.hi],
                    })),
                    Locality::ExceedsWindow { tested } => report.push(
                        "dong",
                        loc,
                        json!({"tested": tested}),
                        format!("{kind}: no locality order up to {tested} in {window}"),
                    ),
                }
            }
        }
    }
    report.set("orders", json!(orders));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_standard_algebra, StandardKind};
    use crate::arith::{DPoly, Scalar};
    use crate::lie::LieSuperData;
    use crate::module::{build_module_family, FamilyParams, ModuleFamily};

    fn order_of(kind: StandardKind, a: &str, b: &str, w: Window) -> Locality {
        let alg = build_standard_algebra(kind, Some(&LieSuperData::sl2())).unwrap();
        let arr = bracket_array(&alg, &alg.generator(a).unwrap(), &alg.generator(b).unwrap(), w).unwrap();
        locality_order(&arr)
    }

    #[test]
    fn standard_orders() {
        let w = Window::new(-6, 10);
        assert_eq!(
            order_of(StandardKind::Virasoro, "L", "L", w),
            Locality::Order { order: 2, reliable: Window::new(-4, 8) }
        );
        assert_eq!(order_of(StandardKind::Current, "e", "f", w).order(), Some(1));
        assert_eq!(order_of(StandardKind::Current, "e", "e", w).order(), Some(0));
        assert_eq!(order_of(StandardKind::NeveuSchwarz, "L", "G", w).order(), Some(2));
        assert_eq!(order_of(StandardKind::NeveuSchwarz, "G", "G", w).order(), Some(1));
    }

    #[test]
    fn tiny_window_exceeds() {
        let w = Window::new(0, 2);
        assert!(order_of(StandardKind::Virasoro, "L", "L", w).order().is_none());
    }

    #[test]
    fn virasoro_ope() {
        let alg = build_standard_algebra(StandardKind::Virasoro, None).unwrap();
        let l = alg.generator("L").unwrap();
        let arr = bracket_array(&alg, &l, &l, Window::new(-6, 10)).unwrap();
        let (_, modes) = ope_extract(&arr, 1).unwrap();
        for (n, v) in &modes {
            assert_eq!(*v, ModeVec::term(0, *n, Scalar::from_int(2)));
        }
        let (_, modes) = ope_extract(&arr, 0).unwrap();
        for (n, v) in &modes {
            assert_eq!(*v, ModeVec::term(0, n - 1, Scalar::from_int(-n)));
        }
        let (_, modes) = ope_extract(&arr, 5).unwrap();
        assert!(modes.iter().all(|(_, v)| v.is_zero()));
    }

    #[test]
    fn window_parsing() {
        assert_eq!("-6:10".parse::<Window>().unwrap(), Window::new(-6, 10));
        assert!("3:1".parse::<Window>().is_err());
        assert!("x".parse::<Window>().is_err());
    }

    #[test]
    fn dong_examples() {
        let m = build_module_family(
            ModuleFamily::VirasoroMVD,
            &FamilyParams::new().alpha(Scalar::frac(1, 3)).delta(Scalar::from_int(2)),
        )
        .unwrap();
        let l = m.algebra().generator("L").unwrap();
        let u = m.vector("u").unwrap();
        let w = Window::new(-8, 8);
        let two_l = l.scale(&Scalar::from_int(2));
        assert_eq!(locality_order(&action_array(&m, &two_l, &u, w).unwrap()).order(), Some(2));
        let l0u = ModElement::term(0, DPoly::d_plus(Scalar::frac(1, 3)));
        assert!(locality_order(&action_array(&m, &l, &l0u, w).unwrap()).order().unwrap() <= 3);
        let zero = action_array(&m, &AlgElement::zero(), &u, w).unwrap();
        assert_eq!(locality_order(&zero).order(), Some(0));
        let r = check_dong(&m, &[DongTriple { a: l.clone(), b: l, v: u }], w).unwrap();
        assert!(r.passed());
    }
}
