//! Exact nonnegative rationals for densities of integer-weighted hypergraphs.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// A reduced fraction `num / den` with `den > 0`.
///
/// Comparisons cross-multiply in 128 bits, so they never overflow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    /// Panics if `den == 0`.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let g = num.gcd(&den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn one() -> Self {
        Ratio { num: 1, den: 1 }
    }

    /// `den / num`. Panics on zero.
    pub fn recip(self) -> Self {
        assert!(self.num > 0, "reciprocal of zero");
        Ratio {
            num: self.den,
            den: self.num,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_orders() {
        let r = Ratio::new(6, 4);
        assert_eq!(r, Ratio { num: 3, den: 2 });
        assert!(Ratio::new(2, 3) < Ratio::new(1, 1));
        assert_eq!(Ratio::new(2, 4).cmp(&Ratio::new(1, 2)), Ordering::Equal);
        assert_eq!(r.recip(), Ratio::new(2, 3));
        assert_eq!(r.to_string(), "3/2");
        assert_eq!(Ratio::new(0, 7), Ratio { num: 0, den: 1 });
    }

    #[test]
    fn large_values_compare_without_overflow() {
        let a = Ratio::new(u64::MAX - 1, u64::MAX);
        let b = Ratio::new(u64::MAX - 2, u64::MAX - 1);
        assert!(b < a);
    }
}
