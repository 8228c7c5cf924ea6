//! Piecewise-linear functions on `[0,1]` and relatively open subsets of
//! `[0,1]`, both over exact rationals.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{parse_rational, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunc {
    breakpoints: Vec<Q>,
    values: Vec<Q>,
}

fn merge(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut v: Vec<Q> = a.iter().chain(b).cloned().collect();
    v.sort();
    v.dedup();
    v
}

impl PLFunc {
    pub fn new(breakpoints: Vec<Q>, values: Vec<Q>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidPl(m.into()));
        if breakpoints.len() != values.len() {
            return bad("breakpoints and values differ in length");
        }
        if breakpoints.len() < 2 {
            return bad("at least two breakpoints are needed");
        }
        if !breakpoints[0].is_zero() || !breakpoints.last().unwrap().is_one() {
            return bad("breakpoints must start at 0 and end at 1");
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return bad("breakpoints must increase strictly");
        }
        Ok(Self { breakpoints, values })
    }

    pub fn parse(breakpoints: &[&str], values: &[&str]) -> Result<Self> {
        let b = breakpoints.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
        let v = values.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
        Self::new(b, v)
    }

    pub fn constant(c: Q) -> Self {
        Self {
            breakpoints: vec![Q::zero(), Q::one()],
            values: vec![c.clone(), c],
        }
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn eval(&self, x: &Q) -> Q {
        let b = &self.breakpoints;
        match b.binary_search(x) {
            Ok(i) => self.values[i].clone(),
            Err(i) => {
                let i = i.clamp(1, b.len() - 1);
                let (x0, x1) = (&b[i - 1], &b[i]);
                let (y0, y1) = (&self.values[i - 1], &self.values[i]);
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    fn on(&self, grid: &[Q]) -> Vec<Q> {
        grid.iter().map(|x| self.eval(x)).collect()
    }

    fn zip(&self, other: &PLFunc, op: impl Fn(&Q, &Q) -> Q) -> PLFunc {
        let grid = merge(&self.breakpoints, &other.breakpoints);
        let values = self.on(&grid).iter().zip(other.on(&grid).iter()).map(|(a, b)| op(a, b)).collect();
        PLFunc { breakpoints: grid, values }.simplified()
    }

    pub fn add(&self, other: &PLFunc) -> PLFunc {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PLFunc) -> PLFunc {
        self.zip(other, |a, b| a - b)
    }

    /// Breakpoints of both functions together with the points where their
    /// difference changes sign inside a segment.
    fn crossing_grid(&self, other: &PLFunc) -> Vec<Q> {
        let grid = merge(&self.breakpoints, &other.breakpoints);
        let d: Vec<Q> = self.on(&grid).iter().zip(other.on(&grid)).map(|(a, b)| a - b).collect();
        let mut out = grid.clone();
        for i in 0..grid.len() - 1 {
            if (d[i].is_positive() && d[i + 1].is_negative()) || (d[i].is_negative() && d[i + 1].is_positive()) {
                let t = &d[i] / (&d[i] - &d[i + 1]);
                out.push(&grid[i] + (&grid[i + 1] - &grid[i]) * t);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn min(&self, other: &PLFunc) -> PLFunc {
        let grid = self.crossing_grid(other);
        let values = self.on(&grid).into_iter().zip(other.on(&grid)).map(|(a, b)| a.min(b)).collect();
        PLFunc { breakpoints: grid, values }.simplified()
    }

    pub fn max(&self, other: &PLFunc) -> PLFunc {
        let grid = self.crossing_grid(other);
        let values = self.on(&grid).into_iter().zip(other.on(&grid)).map(|(a, b)| a.max(b)).collect();
        PLFunc { breakpoints: grid, values }.simplified()
    }

    /// Drops interior breakpoints where the function does not bend.
    pub fn simplified(self) -> PLFunc {
        let (b, v) = (&self.breakpoints, &self.values);
        let mut nb = vec![b[0].clone()];
        let mut nv = vec![v[0].clone()];
        for i in 1..b.len() - 1 {
            let left = (&v[i] - nv.last().unwrap()) / (&b[i] - nb.last().unwrap());
            let right = (&v[i + 1] - &v[i]) / (&b[i + 1] - &b[i]);
            if left != right {
                nb.push(b[i].clone());
                nv.push(v[i].clone());
            }
        }
        nb.push(b[b.len() - 1].clone());
        nv.push(v[v.len() - 1].clone());
        PLFunc { breakpoints: nb, values: nv }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn is_constant(&self, c: &Q) -> bool {
        self.values.iter().all(|v| v == c)
    }

    /// `{x | f(x) > 0}`.
    pub fn positive_set(&self) -> OpenSet {
        let grid = self.crossing_grid(&PLFunc::constant(Q::zero()));
        let vals = self.on(&grid);
        let points: Vec<bool> = vals.iter().map(|v| v.is_positive()).collect();
        let gaps: Vec<bool> = (0..grid.len() - 1).map(|i| (&vals[i] + &vals[i + 1]).is_positive()).collect();
        OpenSet::from_atoms(&grid, &points, &gaps)
    }
}

/// One piece of an [`OpenSet`]; closed ends occur only at 0 and 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    fn contains(&self, x: &Q) -> bool {
        (x > &self.lo || (self.lo_closed && x == &self.lo)) && (x < &self.hi || (self.hi_closed && x == &self.hi))
    }
}

/// A relatively open subset of `[0,1]` as a finite union of disjoint,
/// non-adjacent intervals in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OpenSet {
    pieces: Vec<Interval>,
}

impl OpenSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn whole() -> Self {
        Self {
            pieces: vec![Interval {
                lo: Q::zero(),
                hi: Q::one(),
                lo_closed: true,
                hi_closed: true,
            }],
        }
    }

    pub fn pieces(&self) -> &[Interval] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        *self == Self::whole()
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    /// Builds a set from membership of the grid points and of the open gaps
    /// between consecutive grid points.
    fn from_atoms(grid: &[Q], points: &[bool], gaps: &[bool]) -> Self {
        let mut pieces = Vec::new();
        let mut start: Option<(Q, bool)> = None;
        // atom 2i is grid[i], atom 2i+1 is the gap after it
        let n = grid.len();
        for atom in 0..2 * n - 1 {
            let (i, is_point) = (atom / 2, atom % 2 == 0);
            let inside = if is_point { points[i] } else { gaps[i] };
            match (&start, inside) {
                (None, true) => start = Some((grid[i].clone(), is_point)),
                (Some((lo, lo_closed)), false) => {
                    // the run ended at the previous atom
                    let (hi, hi_closed) = if is_point { (grid[i].clone(), false) } else { (grid[i].clone(), true) };
                    pieces.push(Interval {
                        lo: lo.clone(),
                        hi,
                        lo_closed: *lo_closed,
                        hi_closed,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some((lo, lo_closed)) = start {
            pieces.push(Interval {
                lo,
                hi: grid[n - 1].clone(),
                lo_closed,
                hi_closed: true,
            });
        }
        Self { pieces }
    }

    fn endpoints(&self) -> Vec<Q> {
        self.pieces.iter().flat_map(|p| [p.lo.clone(), p.hi.clone()]).collect()
    }

    fn combine(&self, other: &OpenSet, op: impl Fn(bool, bool) -> bool) -> OpenSet {
        let grid = merge(&merge(&self.endpoints(), &other.endpoints()), &[Q::zero(), Q::one()]);
        let points: Vec<bool> = grid.iter().map(|x| op(self.contains(x), other.contains(x))).collect();
        let two = Q::from_integer(2.into());
        let gaps: Vec<bool> = grid
            .windows(2)
            .map(|w| {
                let mid = (&w[0] + &w[1]) / &two;
                op(self.contains(&mid), other.contains(&mid))
            })
            .collect();
        Self::from_atoms(&grid, &points, &gaps)
    }

    pub fn union(&self, other: &OpenSet) -> OpenSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &OpenSet) -> OpenSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn is_subset(&self, other: &OpenSet) -> bool {
        self.combine(other, |a, b| a && !b).is_empty()
    }

    /// Parses unions such as `[0,1/2) ∪ (1/2,1]`; `∅` is the empty set.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |m: String| Err(Error::Parse(m));
        let s = s.trim();
        if s.is_empty() || s == "∅" || s == "{}" {
            return Ok(Self::empty());
        }
        let mut out = Self::empty();
        for part in s.split('∪').map(str::trim) {
            let (lo_closed, rest) = match part.chars().next() {
                Some('[') => (true, &part[1..]),
                Some('(') => (false, &part[1..]),
                _ => return bad(format!("interval {part:?} must start with [ or (")),
            };
            let (hi_closed, body) = if let Some(b) = rest.strip_suffix(']') {
                (true, b)
            } else if let Some(b) = rest.strip_suffix(')') {
                (false, b)
            } else {
                return bad(format!("interval {part:?} must end with ] or )"));
            };
            let Some((a, b)) = body.split_once(',') else {
                return bad(format!("interval {part:?} needs two endpoints"));
            };
            let (lo, hi) = (parse_rational(a)?, parse_rational(b)?);
            if lo.is_negative() || hi > Q::one() || lo >= hi {
                return bad(format!("interval {part:?} is not a nonempty subinterval of [0,1]"));
            }
            if (lo_closed && !lo.is_zero()) || (hi_closed && !hi.is_one()) {
                return bad(format!("interval {part:?} is not relatively open in [0,1]"));
            }
            let piece = Self {
                pieces: vec![Interval { lo, hi, lo_closed, hi_closed }],
            };
            out = out.union(&piece);
        }
        Ok(out)
    }
}

impl fmt::Display for OpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|p| {
                format!(
                    "{}{},{}{}",
                    if p.lo_closed { '[' } else { '(' },
                    p.lo,
                    p.hi,
                    if p.hi_closed { ']' } else { ')' }
                )
            })
            .collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Q {
        parse_rational(s).unwrap()
    }

    #[test]
    fn evaluation_and_lattice_operations() {
        let f = PLFunc::parse(&["0", "1"], &["1", "0"]).unwrap();
        let g = PLFunc::parse(&["0", "1"], &["0", "1"]).unwrap();
        assert_eq!(f.eval(&q("1/4")), q("3/4"));
        let m = f.min(&g);
        assert_eq!(m.breakpoints(), &[q("0"), q("1/2"), q("1")]);
        assert_eq!(m.values(), &[q("0"), q("1/2"), q("0")]);
        assert!(f.add(&g).is_constant(&q("1")));
        let d = f.sub(&g).max(&PLFunc::constant(Q::zero()));
        assert_eq!(d.positive_set().to_string(), "[0,1/2)");
    }

    #[test]
    fn rejects_bad_functions() {
        assert!(PLFunc::parse(&["0", "1/2"], &["0", "0"]).is_err());
        assert!(PLFunc::parse(&["0", "1/2", "1/2", "1"], &["0", "0", "0", "0"]).is_err());
        assert!(PLFunc::parse(&["0", "1"], &["0"]).is_err());
    }

    #[test]
    fn open_sets() {
        let a = OpenSet::parse("[0,1/2) ∪ (1/2,1]").unwrap();
        let b = OpenSet::parse("(1/4,3/4)").unwrap();
        assert!(a.union(&b).is_whole());
        assert_eq!(a.intersection(&b).to_string(), "(1/4,1/2) ∪ (1/2,3/4)");
        assert!(OpenSet::parse("(1/4,1/2)").unwrap().is_subset(&a));
        assert!(!b.is_subset(&a));
        assert!(OpenSet::parse("[1/4,1/2)").is_err());
        assert_eq!(OpenSet::parse("(0,1/2) ∪ [1/2,1]").err().map(|_| ()), Some(()));
        assert_eq!(OpenSet::parse("(0,1/2) ∪ (1/3,1]").unwrap().to_string(), "(0,1]");
        assert!(OpenSet::parse("∅").unwrap().is_empty());
    }

    #[test]
    fn positive_sets() {
        let tent = PLFunc::parse(&["0", "1/4", "1/2", "1"], &["0", "0", "1", "0"]).unwrap();
        assert_eq!(tent.positive_set().to_string(), "(1/4,1)");
        let neg = PLFunc::parse(&["0", "1"], &["-1", "1"]).unwrap();
        assert_eq!(neg.positive_set().to_string(), "(1/2,1]");
        assert!(PLFunc::constant(Q::zero()).positive_set().is_empty());
        assert!(PLFunc::constant(Q::one()).positive_set().is_whole());
    }
}
