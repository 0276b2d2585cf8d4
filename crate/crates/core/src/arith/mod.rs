//! Exact scalars, polynomials in `∂`, and generalized binomial coefficients.

mod dpoly;
mod scalar;

pub use dpoly::DPoly;
pub use scalar::Scalar;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Error;

/// Falling factorial `m (m-1) ⋯ (m-k+1)`; empty product for `k = 0`.
pub fn falling(m: i64, k: usize) -> Scalar {
    let mut acc = BigInt::one();
    for i in 0..k as i64 {
        acc *= BigInt::from(m - i);
    }
    Scalar::from_bigint(acc)
}

pub fn factorial(k: usize) -> Scalar {
    falling(k as i64, k)
}

/// Generalized binomial `m (m-1) ⋯ (m-k+1) / k!`, valid for every integer `m`.
pub fn gen_binomial(m: i64, k: i64) -> Result<Scalar, Error> {
    if k < 0 {
        return Err(Error::NegativeBinomialIndex(k));
    }
    let k = k as usize;
    Ok(&falling(m, k) / &factorial(k))
}

/// Binomial coefficient with `k` known to be non-negative.
pub(crate) fn binom(m: i64, k: usize) -> Scalar {
    &falling(m, k) / &factorial(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(gen_binomial(3, 2).unwrap(), Scalar::from_int(3));
        assert_eq!(gen_binomial(-7, 0).unwrap(), Scalar::one());
        // (-1)(-2)/2! = 1
        assert_eq!(gen_binomial(-1, 2).unwrap(), Scalar::one());
        assert_eq!(gen_binomial(2, 5).unwrap(), Scalar::zero());
        assert!(matches!(gen_binomial(4, -1), Err(Error::NegativeBinomialIndex(-1))));
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling(5, 3), Scalar::from_int(60));
        assert_eq!(falling(-2, 3), Scalar::from_int(-24));
        assert_eq!(falling(2, 3), Scalar::zero());
        assert_eq!(factorial(0), Scalar::one());
    }

    proptest! {
        #[test]
        fn pascal_recurrence(m in -40i64..40, k in 1i64..9) {
            let lhs = gen_binomial(m, k).unwrap();
            let rhs = gen_binomial(m - 1, k).unwrap() + gen_binomial(m - 1, k - 1).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
