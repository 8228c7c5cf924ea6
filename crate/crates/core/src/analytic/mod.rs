//! Exact formulas on cones, normed spaces and partitions of unity.

mod cover;
mod pl;
mod surd;

pub use cover::{random_partition, reduce_cover, three_tents, two_functions, CoverReport, CoverSet};
pub use pl::{Interval, OpenSet, PLFunc};
pub use surd::SurdSum;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

/// Parses `a`, `a/b` or a decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if frac.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let q = Q::new(n, BigInt::from(10u32).pow(frac.len() as u32));
        return Ok(if neg { -q } else { q });
    }
    let q: Q = s.parse().map_err(|_| bad())?;
    Ok(q)
}

/// A point `[x, t]` of the cone on a metric space; all points with `t = 0`
/// are the cone point.
#[derive(Clone, Debug)]
pub struct ConePoint<P> {
    pub t: Q,
    pub x: P,
}

impl<P: PartialEq> ConePoint<P> {
    pub fn new(x: P, t: Q) -> Result<Self> {
        if t.is_negative() || t > Q::one() {
            return Err(Error::ConeLevel(t.to_string()));
        }
        Ok(Self { t, x })
    }

    pub fn same_point(&self, other: &Self) -> bool {
        self.t == other.t && (self.t.is_zero() || self.x == other.x)
    }
}

/// `|s − t| + min{s, t}·d(x, y)`.
pub fn cone_metric<P>(d: impl Fn(&P, &P) -> SurdSum, a: &ConePoint<P>, b: &ConePoint<P>) -> Result<SurdSum> {
    for t in [&a.t, &b.t] {
        if t.is_negative() || *t > Q::one() {
            return Err(Error::ConeLevel(t.to_string()));
        }
    }
    let level = SurdSum::rational((&a.t - &b.t).abs());
    let m = (&a.t).min(&b.t).clone();
    if m.is_zero() {
        return Ok(level);
    }
    Ok(level + d(&a.x, &b.x) * &m)
}

pub fn euclidean(a: &[Q], b: &[Q]) -> SurdSum {
    let sq = a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + (x - y) * (x - y));
    SurdSum::sqrt(&sq)
}

pub fn sup_norm(x: &[Q]) -> Q {
    x.iter().map(|v| v.abs()).max().unwrap_or_else(Q::zero)
}

pub fn sup_distance(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap_or_else(Q::zero)
}

/// `[x, t] ↦ (tx/(1 + ‖x‖), t)` into `V ⊕ ℝ`, with `V = ℚⁿ` under the
/// sup-norm.
pub fn iota(x: &[Q], t: &Q) -> Result<(Vec<Q>, Q)> {
    if t.is_negative() || *t > Q::one() {
        return Err(Error::ConeLevel(t.to_string()));
    }
    let scale = t / (Q::one() + sup_norm(x));
    Ok((x.iter().map(|v| v * &scale).collect(), t.clone()))
}

/// `‖(v, r)‖ = max{‖v‖, |r|}`.
pub fn sum_norm(v: &[Q], r: &Q) -> Q {
    sup_norm(v).max(r.abs())
}

/// `d(x, C)/(d(x, Z) + d(x, C))` for finite nonempty `C` and `Z`.
pub fn urysohn_ratio<P>(x: &P, c: &[P], z: &[P], d: impl Fn(&P, &P) -> Q) -> Result<Q> {
    let dist = |s: &[P]| s.iter().map(|p| d(x, p)).min();
    let (Some(dc), Some(dz)) = (dist(c), dist(z)) else {
        return Err(Error::Parse("both point sets must be nonempty".into()));
    };
    let den = &dz + &dc;
    if den.is_zero() {
        return Err(Error::DegenerateDistance);
    }
    Ok(dc / den)
}
