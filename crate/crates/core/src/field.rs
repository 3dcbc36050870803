//! Exact arithmetic in the prime field F_d.

use crate::{Error, Result};

/// A prime field F_d for an odd prime modulus d >= 3.
///
/// d = 2 is rejected: the quadratic-phase gate family is only defined for
/// odd primes, and nothing downstream supports the binary case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    d: u64,
}

/// A canonical field element, always in `[0, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Felt(pub u64);

impl std::fmt::Display for Felt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl PrimeField {
    pub fn new(d: u64) -> Result<Self> {
        if d < 3 {
            return Err(Error::Field(format!("modulus {d} must be an odd prime >= 3")));
        }
        if !is_prime(d) {
            return Err(Error::Field(format!("modulus {d} is not prime")));
        }
        Ok(PrimeField { d })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.d
    }

    /// Reduces an arbitrary integer to its canonical representative.
    #[inline]
    pub fn elt(&self, x: i64) -> Felt {
        Felt(x.rem_euclid(self.d as i64) as u64)
    }

    #[inline]
    pub fn zero(&self) -> Felt {
        Felt(0)
    }

    #[inline]
    pub fn one(&self) -> Felt {
        Felt(1)
    }

    #[inline]
    pub fn add(&self, x: Felt, y: Felt) -> Felt {
        let s = x.0 + y.0;
        Felt(if s >= self.d { s - self.d } else { s })
    }

    #[inline]
    pub fn sub(&self, x: Felt, y: Felt) -> Felt {
        Felt(if x.0 >= y.0 { x.0 - y.0 } else { x.0 + self.d - y.0 })
    }

    #[inline]
    pub fn mul(&self, x: Felt, y: Felt) -> Felt {
        Felt((x.0 * y.0) % self.d)
    }

    #[inline]
    pub fn neg(&self, x: Felt) -> Felt {
        Felt(if x.0 == 0 { 0 } else { self.d - x.0 })
    }

    /// Multiplicative inverse by extended Euclid.
    pub fn inverse(&self, x: Felt) -> Result<Felt> {
        if x.0 == 0 {
            return Err(Error::Field("no inverse of 0".into()));
        }
        let (mut r0, mut r1) = (self.d as i64, x.0 as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.elt(s0))
    }

    /// All field elements in order 0, 1, ..., d-1.
    pub fn elements(&self) -> impl Iterator<Item = Felt> {
        (0..self.d).map(Felt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_accepts_odd_primes_only() {
        for d in [3, 5, 7, 11, 13] {
            assert!(PrimeField::new(d).is_ok());
        }
        for d in [0, 1, 2, 4, 6, 9, 15, 21] {
            assert!(PrimeField::new(d).is_err(), "d={d} must be rejected");
        }
    }

    #[test]
    fn arith_examples() {
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(f3.mul(Felt(2), Felt(2)), Felt(1));
        assert_eq!(f3.add(Felt(1), Felt(2)), Felt(0));
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.mul(Felt(4), Felt(4)), Felt(1));
    }

    #[test]
    fn inverse_examples() {
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(f3.inverse(Felt(2)).unwrap(), Felt(2));
        assert_eq!(f3.inverse(Felt(1)).unwrap(), Felt(1));
        assert!(f3.inverse(Felt(0)).is_err());
        let f5 = PrimeField::new(5).unwrap();
        // brute-force oracle: the unique y in 1..5 with 2y = 1 (mod 5)
        let brute = (1..5).find(|y| (2 * y) % 5 == 1).unwrap();
        assert_eq!(brute, 3);
        assert_eq!(f5.inverse(Felt(2)).unwrap(), Felt(3));
    }

    #[test]
    fn inverse_is_involutive() {
        for d in [3u64, 5, 7] {
            let f = PrimeField::new(d).unwrap();
            for x in 1..d {
                let inv = f.inverse(Felt(x)).unwrap();
                assert_eq!(f.mul(Felt(x), inv), Felt(1));
                assert_eq!(f.inverse(inv).unwrap(), Felt(x));
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for d in [3u64, 5, 7] {
            let f = PrimeField::new(d).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    assert!(f.add(x, y).0 < d);
                    assert!(f.mul(x, y).0 < d);
                    assert_eq!(f.add(x, y), f.add(y, x));
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    assert_eq!(f.sub(f.add(x, y), y), x);
                    for z in f.elements() {
                        assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
                        assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                        assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                    }
                }
            }
        }
    }
}
