//! Naturals with a 64-bit fast path and the six grounding functions.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// A natural number. Values that fit in a `u64` are always stored as `Small`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Nat {
    Small(u64),
    Big(BigUint),
}

impl Nat {
    pub const ZERO: Nat = Nat::Small(0);
    pub const ONE: Nat = Nat::Small(1);
    pub const TWO: Nat = Nat::Small(2);

    pub fn from_big(b: BigUint) -> Nat {
        match b.to_u64() {
            Some(v) => Nat::Small(v),
            None => Nat::Big(b),
        }
    }

    pub fn to_big(&self) -> BigUint {
        match self {
            Nat::Small(v) => BigUint::from(*v),
            Nat::Big(b) => b.clone(),
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self {
            Nat::Small(v) => Some(*v),
            Nat::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Nat::Small(0))
    }

    /// Number of significant bits; 0 for zero.
    pub fn bits(&self) -> u64 {
        match self {
            Nat::Small(v) => 64 - v.leading_zeros() as u64,
            Nat::Big(b) => b.bits(),
        }
    }

    /// `2^e`.
    pub fn pow2(e: u64) -> Nat {
        if e < 64 {
            Nat::Small(1u64 << e)
        } else {
            Nat::Big(BigUint::one() << e)
        }
    }

    /// The exponent `k` when `self == 2^k`.
    pub fn power_exponent(&self) -> Option<u64> {
        match self {
            Nat::Small(0) => None,
            Nat::Small(v) => v.is_power_of_two().then(|| v.trailing_zeros() as u64),
            Nat::Big(b) => {
                let tz = b.trailing_zeros()?;
                (tz + 1 == b.bits()).then_some(tz)
            }
        }
    }

    fn count_ones(&self) -> u64 {
        match self {
            Nat::Small(v) => v.count_ones() as u64,
            Nat::Big(b) => b.count_ones(),
        }
    }

    /// Truncated subtraction.
    pub fn sub(&self, y: &Nat) -> Nat {
        match (self, y) {
            (Nat::Small(a), Nat::Small(b)) => Nat::Small(a.saturating_sub(*b)),
            _ if self <= y => Nat::ZERO,
            _ => Nat::from_big(self.to_big() - y.to_big()),
        }
    }

    /// Floor division, 0 when dividing by 0.
    pub fn div(&self, y: &Nat) -> Nat {
        match (self, y) {
            (_, Nat::Small(0)) => Nat::ZERO,
            (Nat::Small(a), Nat::Small(b)) => Nat::Small(a / b),
            _ => {
                if let Some(k) = y.power_exponent() {
                    return Nat::from_big(self.to_big() >> k);
                }
                if self < y {
                    return Nat::ZERO;
                }
                Nat::from_big(self.to_big() / y.to_big())
            }
        }
    }

    pub fn max(&self, y: &Nat) -> Nat {
        if self >= y {
            self.clone()
        } else {
            y.clone()
        }
    }

    /// `floor(log2 x)`, with `Log(0) = 0`.
    pub fn log(&self) -> Nat {
        Nat::Small(self.bits().saturating_sub(1))
    }

    /// Number of one bits among the lowest `j` bits.
    pub fn count(&self, j: &Nat) -> Nat {
        let width = self.bits();
        match j.to_u64() {
            Some(j) if j < width => match self {
                Nat::Small(v) => Nat::Small((v & ((1u64 << j) - 1)).count_ones() as u64),
                Nat::Big(b) => {
                    let mask = (BigUint::one() << j) - BigUint::one();
                    Nat::Small((b & mask).count_ones())
                }
            },
            _ => Nat::Small(self.count_ones()),
        }
    }

    /// `floor(x^(1/y))` for `y >= 1`, and 0 for `y = 0`.
    pub fn root(&self, y: &Nat) -> Nat {
        let y = match y.to_u64() {
            Some(0) => return Nat::ZERO,
            Some(y) => y,
            None => u64::MAX,
        };
        if self.is_zero() {
            return Nat::ZERO;
        }
        if y == 1 {
            return self.clone();
        }
        let bits = self.bits();
        if y >= bits {
            // 2^(bits-1) <= x < 2^bits <= 2^y, so the root lies in [1, 2).
            return Nat::ONE;
        }
        let exp = y as u32;
        match self {
            Nat::Small(x) => {
                let (mut lo, mut hi) = (1u64, 1u64 << bits.div_ceil(y));
                // invariant: lo^y <= x < hi^y
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    match mid.checked_pow(exp) {
                        Some(p) if p <= *x => lo = mid,
                        _ => hi = mid,
                    }
                }
                Nat::Small(lo)
            }
            Nat::Big(x) => {
                let mut lo = BigUint::one() << ((bits - 1) / y);
                let mut hi = BigUint::one() << bits.div_ceil(y);
                let one = BigUint::one();
                while &hi - &lo > one {
                    let mid: BigUint = (&lo + &hi) >> 1u32;
                    if mid.pow(exp) <= *x {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Nat::from_big(lo)
            }
        }
    }

    /// The Power predicate: `x = 1` or `Log(x) != Log(x - 1)`.
    pub fn is_power(&self) -> bool {
        *self == Nat::ONE || self.log() != self.sub(&Nat::ONE).log()
    }
}

impl Ord for Nat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Nat::Small(a), Nat::Small(b)) => a.cmp(b),
            (Nat::Small(_), Nat::Big(_)) => Ordering::Less,
            (Nat::Big(_), Nat::Small(_)) => Ordering::Greater,
            (Nat::Big(a), Nat::Big(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Nat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Nat {
    fn from(v: u64) -> Self {
        Nat::Small(v)
    }
}

impl From<BigUint> for Nat {
    fn from(b: BigUint) -> Self {
        Nat::from_big(b)
    }
}

impl From<&BigUint> for Nat {
    fn from(b: &BigUint) -> Self {
        Nat::from_big(b.clone())
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nat::Small(v) => write!(f, "{v}"),
            Nat::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Default for Nat {
    fn default() -> Self {
        Nat::ZERO
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Nat {
        Nat::from(v)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(n(1).sub(&n(2)), n(0));
        assert_eq!(n(7).div(&n(0)), n(0));
        assert_eq!(n(13).count(&n(3)), n(2));
        assert!(n(1).is_power());
        assert!(n(4).is_power());
        assert!(!n(6).is_power());
        assert!(!n(0).is_power());
        assert_eq!(n(0).log(), n(0));
    }

    #[test]
    fn big_values_normalize() {
        let big = Nat::pow2(100);
        assert!(matches!(big, Nat::Big(_)));
        assert_eq!(big.div(&Nat::pow2(40)), Nat::pow2(60));
        assert_eq!(big.div(&Nat::pow2(100)), n(1));
        assert_eq!(big.power_exponent(), Some(100));
        assert_eq!(big.sub(&big), n(0));
        assert_eq!(big.log(), n(100));
        assert_eq!(Nat::pow2(64).sub(&n(1)), Nat::Small(u64::MAX));
    }

    #[test]
    fn roots() {
        assert_eq!(n(27).root(&n(3)), n(3));
        assert_eq!(n(26).root(&n(3)), n(2));
        assert_eq!(n(0).root(&n(5)), n(0));
        assert_eq!(n(5).root(&n(0)), n(0));
        assert_eq!(n(u64::MAX).root(&n(2)), n(u32::MAX as u64));
        assert_eq!(Nat::pow2(200).root(&n(2)), Nat::pow2(100));
        assert_eq!(Nat::pow2(200).sub(&n(1)).root(&n(2)), Nat::pow2(100).sub(&n(1)));
        assert_eq!(n(3).root(&Nat::pow2(70)), n(1));
    }

    #[test]
    fn count_wide_window() {
        assert_eq!(n(0b1011).count(&n(64)), n(3));
        assert_eq!(n(0b1011).count(&Nat::pow2(80)), n(3));
        let x = Nat::pow2(90).sub(&n(1));
        assert_eq!(x.count(&n(70)), n(70));
    }
}
