use super::ConformalAlgebra;
use crate::arith::{binom, falling};
use crate::element::{AlgElement, PolyVec};
use crate::error::Result;

/// `x_(n) y` for homogeneous `x, y`, extended from the generator table by
/// `(∂a)_(n)b = -n a_(n-1)b`, `a_(n)∂b = ∂(a_(n)b) + n a_(n-1)b` and
/// bilinearity. In closed form,
/// `(∂^k a)_(n)(∂^l b) = (-1)^k n^{(k)} Σ_t C(l,t) (n-k)^{(t)} ∂^{l-t}(a_(n-k-t)b)`
/// with `x^{(k)}` the falling factorial.
pub fn nth_product(alg: &ConformalAlgebra, x: &AlgElement, y: &AlgElement, n: u32) -> Result<AlgElement> {
    alg.parity_of(x)?;
    alg.parity_of(y)?;
    Ok(product_unchecked(alg, x, y, n))
}

pub(crate) fn product_unchecked(alg: &ConformalAlgebra, x: &AlgElement, y: &AlgElement, n: u32) -> AlgElement {
    extend_table(x, y, n, |i, j| alg.bound(i, j), |i, j, m| alg.product_ref(i, j, m))
}

/// Extends a table `(i, j, m) ↦ x_i (m) y_j` on basis elements to arbitrary
/// `Σ p_i(∂) x_i` and `Σ q_j(∂) y_j` by the two translation rules. Shared by
/// algebra products and module actions.
pub(crate) fn extend_table<'a>(
    x: &PolyVec,
    y: &PolyVec,
    n: u32,
    bound: impl Fn(usize, usize) -> u32,
    lookup: impl Fn(usize, usize, u32) -> Option<&'a PolyVec>,
) -> PolyVec {
    let n = n as i64;
    let mut out = PolyVec::zero();
    for (i, p) in x.terms() {
        for (j, q) in y.terms() {
            let bound = bound(i, j) as i64;
            if bound == 0 {
                continue;
            }
            for (k, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() || k as i64 > n {
                    continue;
                }
                let mut left = &falling(n, k) * c;
                if k % 2 == 1 {
                    left = -left;
                }
                for (l, d) in q.coeffs().iter().enumerate() {
                    if d.is_zero() {
                        continue;
                    }
                    let s = &left * d;
                    for t in 0..=l {
                        let idx = n - k as i64 - t as i64;
                        if idx < 0 {
                            break;
                        }
                        if idx >= bound {
                            continue;
                        }
                        let Some(entry) = lookup(i, j, idx as u32) else {
                            continue;
                        };
                        let coef = &(&s * &binom(l as i64, t)) * &falling(n - k as i64, t);
                        out.add_scaled(&entry.shift(l - t), &coef);
                    }
                }
            }
        }
    }
    out
}

/// Smallest `B` with `x_(n) y = 0` for all `n ≥ B`.
pub fn vanishing_bound(alg: &ConformalAlgebra, x: &AlgElement, y: &AlgElement) -> u32 {
    let mut best = 0;
    for (i, p) in x.terms() {
        for (j, q) in y.terms() {
            let b = alg.bound(i, j);
            if b > 0 {
                let deg = p.degree().unwrap_or(0) + q.degree().unwrap_or(0);
                best = best.max(b + deg as u32);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_standard_algebra, StandardKind};
    use crate::arith::{DPoly, Scalar};
    use crate::error::Error;

    /// Reference product by repeated use of the two translation rules.
    fn recursive(alg: &ConformalAlgebra, x: &AlgElement, y: &AlgElement, n: i64) -> AlgElement {
        if n < 0 {
            return AlgElement::zero();
        }
        let mut out = AlgElement::zero();
        for (i, p) in x.terms() {
            for (k, c) in p.coeffs().iter().enumerate() {
                for (j, q) in y.terms() {
                    for (l, d) in q.coeffs().iter().enumerate() {
                        let term = rec_mono(alg, i, k, j, l, n);
                        out.add_scaled(&term, &(c * d));
                    }
                }
            }
        }
        out
    }

    fn rec_mono(alg: &ConformalAlgebra, i: usize, k: usize, j: usize, l: usize, n: i64) -> AlgElement {
        if n < 0 {
            return AlgElement::zero();
        }
        if k > 0 {
            // (∂a)_(n) b = -n a_(n-1) b
            return rec_mono(alg, i, k - 1, j, l, n - 1).scale(&Scalar::from_int(-n));
        }
        if l > 0 {
            // a_(n) ∂b = ∂(a_(n) b) + n a_(n-1) b
            let first = rec_mono(alg, i, 0, j, l - 1, n).shift(1);
            let second = rec_mono(alg, i, 0, j, l - 1, n - 1).scale(&Scalar::from_int(n));
            return &first + &second;
        }
        alg.product(i, j, n as u32)
    }

    fn vir() -> ConformalAlgebra {
        build_standard_algebra(StandardKind::Virasoro, None).unwrap()
    }

    #[test]
    fn virasoro_examples() {
        let a = vir();
        let l = PolyVec::basis(0);
        let dl = l.shift(1);
        assert_eq!(nth_product(&a, &l, &l, 1).unwrap(), l.scale(&Scalar::from_int(2)));
        assert_eq!(nth_product(&a, &dl, &l, 1).unwrap(), -&dl);
        assert_eq!(nth_product(&a, &l, &dl, 0).unwrap(), l.shift(2));
        assert!(nth_product(&a, &l, &l, 3).unwrap().is_zero());
    }

    #[test]
    fn closed_form_matches_recursion() {
        let a = build_standard_algebra(StandardKind::NeveuSchwarz, None).unwrap();
        let polys = [
            DPoly::from_ints(&[1]),
            DPoly::from_ints(&[2, -1]),
            DPoly::from_ints(&[0, 3, 1]),
            DPoly::from_ints(&[-1, 0, 0, 2]),
        ];
        for gi in 0..2 {
            for gj in 0..2 {
                for p in &polys {
                    for q in &polys {
                        let x = PolyVec::term(gi, p.clone());
                        let y = PolyVec::term(gj, q.clone());
                        for n in 0..8 {
                            assert_eq!(
                                nth_product(&a, &x, &y, n).unwrap(),
                                recursive(&a, &x, &y, n as i64),
                                "x={x:?} y={y:?} n={n}"
                            );
                        }
                        let b = vanishing_bound(&a, &x, &y);
                        assert!(nth_product(&a, &x, &y, b).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_mixed_and_unknown() {
        let a = build_standard_algebra(StandardKind::NeveuSchwarz, None).unwrap();
        let mixed = &PolyVec::basis(0) + &PolyVec::basis(1);
        assert_eq!(nth_product(&a, &mixed, &PolyVec::basis(0), 0), Err(Error::MixedParity));
        assert!(matches!(
            nth_product(&a, &PolyVec::basis(7), &PolyVec::basis(0), 0),
            Err(Error::UnknownGenerator(_))
        ));
    }
}
