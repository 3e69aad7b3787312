//! Exact rational scalars.
//!
//! `BigRational` already maintains the invariants the kernel relies on:
//! values are stored in lowest terms with a positive denominator, and zero is
//! the unique `0/1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

pub type Rational = BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical rendering: `2`, `-2`, `3/2`, `-3/2`, `0`.
pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_negative(r: &Rational) -> bool {
    r.numer().is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn reduced_and_positive_denominator() {
        let r = rat(4, -6);
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
        assert_eq!(render_rational(&r), "-2/3");
    }

    #[test]
    fn zero_is_unique() {
        assert_eq!(rat(0, 5), rat_int(0));
        assert!(rat(0, 5).is_zero());
        assert_eq!(render_rational(&rat(0, 7)), "0");
    }
}
