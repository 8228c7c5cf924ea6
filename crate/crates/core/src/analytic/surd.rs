//! Exact sums `α + Σ βₖ√rₖ` with rational coefficients and distinct
//! squarefree radicands.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdSum {
    rational: Q,
    terms: BTreeMap<BigUint, Q>,
}

fn square_part_small(n: u128) -> (u128, u128) {
    let (mut s, mut k, mut m) = (1u128, 1u128, n);
    let mut p = 2u128;
    while p * p * p <= n {
        let mut e = 0u32;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            k *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = m.isqrt();
    if r * r == m {
        (s * r, k)
    } else {
        (s, k * m)
    }
}

/// Splits `n` as `s²·k` with `k` squarefree.
fn square_part(n: &BigUint) -> (BigUint, BigUint) {
    if let Some(small) = n.to_u128().filter(|&v| v < 1 << 96) {
        let (s, k) = square_part_small(small);
        return (s.into(), k.into());
    }
    let mut s = BigUint::one();
    let mut k = BigUint::one();
    let mut m = n.clone();
    // trial division up to the cube root leaves at most two large primes
    let limit = n.cbrt().to_u64().unwrap_or(u64::MAX);
    let mut p = 2u64;
    while p <= limit {
        let pb = BigUint::from(p);
        let mut e = 0u32;
        while (&m % &pb).is_zero() {
            m /= &pb;
            e += 1;
        }
        if e > 0 {
            s *= pb.pow(e / 2);
            if e % 2 == 1 {
                k *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = m.sqrt();
    if &r * &r == m {
        s *= r;
    } else {
        k *= m;
    }
    (s, k)
}

impl SurdSum {
    pub fn rational(q: Q) -> Self {
        Self { rational: q, terms: BTreeMap::new() }
    }

    pub fn zero() -> Self {
        Self::rational(Q::zero())
    }

    /// `√q` for `q ≥ 0`.
    pub fn sqrt(q: &Q) -> Self {
        assert!(!q.is_negative(), "square root of a negative rational");
        if q.is_zero() {
            return Self::zero();
        }
        // √(p/r) = √(p·r)/r
        let p = q.numer().magnitude() * q.denom().magnitude();
        let (s, k) = square_part(&p);
        let coeff = Q::new(BigInt::from(s), q.denom().clone());
        if k.is_one() {
            Self::rational(coeff)
        } else {
            let mut terms = BTreeMap::new();
            terms.insert(k, coeff);
            Self { rational: Q::zero(), terms }
        }
    }

    pub fn rational_part(&self) -> &Q {
        &self.rational
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    fn bounds(&self, bits: u32) -> (Q, Q) {
        let scale = BigUint::one() << (2 * bits);
        let den = BigInt::one() << bits;
        let (mut lo, mut hi) = (self.rational.clone(), self.rational.clone());
        for (k, b) in &self.terms {
            let s = BigInt::from((k * &scale).sqrt());
            let a = Q::new(s.clone(), den.clone());
            let c = Q::new(s + 1, den.clone());
            if b.is_positive() {
                lo += b * &a;
                hi += b * &c;
            } else {
                lo += b * &c;
                hi += b * &a;
            }
        }
        (lo, hi)
    }

    /// Exact sign. Square roots of distinct squarefree integers are
    /// linearly independent over ℚ, so a sum with a surviving surd term is
    /// nonzero and interval refinement terminates.
    pub fn signum(&self) -> Ordering {
        if self.terms.is_empty() {
            return self.rational.cmp(&Q::zero());
        }
        let mut bits = 32;
        loop {
            let (lo, hi) = self.bounds(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == Ordering::Equal
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.bounds(64);
        ((lo + hi) / Q::from_integer(2.into())).to_f64().unwrap_or(f64::NAN)
    }

    fn normalize(mut self) -> Self {
        self.terms.retain(|_, b| !b.is_zero());
        self
    }
}

impl PartialOrd for SurdSum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SurdSum {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl Add for SurdSum {
    type Output = SurdSum;
    fn add(mut self, rhs: SurdSum) -> SurdSum {
        self.rational += rhs.rational;
        for (k, b) in rhs.terms {
            *self.terms.entry(k).or_insert_with(Q::zero) += b;
        }
        self.normalize()
    }
}

impl Neg for SurdSum {
    type Output = SurdSum;
    fn neg(mut self) -> SurdSum {
        self.rational = -self.rational;
        for b in self.terms.values_mut() {
            *b = -b.clone();
        }
        self
    }
}

impl Sub for SurdSum {
    type Output = SurdSum;
    fn sub(self, rhs: SurdSum) -> SurdSum {
        self + (-rhs)
    }
}

impl Mul<&Q> for SurdSum {
    type Output = SurdSum;
    fn mul(mut self, rhs: &Q) -> SurdSum {
        self.rational *= rhs;
        for b in self.terms.values_mut() {
            *b *= rhs;
        }
        self.normalize()
    }
}

impl std::fmt::Display for SurdSum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if !self.rational.is_zero() || self.terms.is_empty() {
            parts.push(self.rational.to_string());
        }
        for (k, b) in &self.terms {
            parts.push(format!("{b}·√{k}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn square_parts() {
        for n in 1u64..2000 {
            let (s, k) = square_part(&BigUint::from(n));
            assert_eq!(&s * &s * &k, BigUint::from(n));
            let k = k.to_u64().unwrap();
            assert!((2..=k).all(|p| k % (p * p) != 0), "{n}");
        }
        let big = BigUint::from(1_000_003u64) * BigUint::from(1_000_003u64) * 7u32;
        assert_eq!(square_part(&big), (BigUint::from(1_000_003u64), BigUint::from(7u32)));
    }

    #[test]
    fn exact_signs() {
        assert!(SurdSum::sqrt(&q(8, 1)) == SurdSum::sqrt(&q(2, 1)) * &q(2, 1));
        assert!(SurdSum::sqrt(&q(9, 4)).is_rational());
        let s = SurdSum::sqrt(&q(2, 1)) + SurdSum::sqrt(&q(3, 1)) - SurdSum::sqrt(&q(10, 1));
        // √2 + √3 ≈ 3.1463 < √10 ≈ 3.1623
        assert_eq!(s.signum(), Ordering::Less);
        let z = SurdSum::sqrt(&q(1, 2)) * &q(2, 1) - SurdSum::sqrt(&q(2, 1));
        assert!(z.is_zero());
    }
}
