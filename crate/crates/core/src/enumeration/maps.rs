use crate::error::{Error, Result};
use crate::finspace::{BitSet, FinSpace};

/// Points of `a` sorted so that every point comes after everything
/// strictly below it.
pub fn linear_extension(a: &FinSpace) -> Vec<usize> {
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by_key(|&x| (a.down_set(x).count(), x));
    order
}

struct Frame {
    cands: Vec<usize>,
    next: usize,
}

/// Monotone maps `A → Y` by backtracking over a linear extension of `A`.
/// Maps come out in lexicographic order of their values along that
/// extension; each item lists the value of every point of `A`.
pub struct MonotoneMaps<'a> {
    a: &'a FinSpace,
    y: &'a FinSpace,
    order: Vec<usize>,
    below: Vec<Vec<usize>>,
    above: Vec<Vec<usize>>,
    first: Option<usize>,
    values: Vec<usize>,
    stack: Vec<Frame>,
    started: bool,
    finished: bool,
}

impl<'a> MonotoneMaps<'a> {
    pub fn new(a: &'a FinSpace, y: &'a FinSpace) -> Self {
        let order = linear_extension(a);
        let below = (0..order.len())
            .map(|k| order[..k].iter().copied().filter(|&q| a.leq(q, order[k])).collect())
            .collect();
        let above = (0..order.len())
            .map(|k| order[..k].iter().copied().filter(|&q| a.leq(order[k], q)).collect())
            .collect();
        Self {
            a,
            y,
            order,
            below,
            above,
            first: None,
            values: vec![0; a.len()],
            stack: Vec::new(),
            started: false,
            finished: false,
        }
    }

    /// Restricts the stream to maps sending the first point of the linear
    /// extension to `v`.
    pub fn with_first(mut self, v: usize) -> Self {
        self.first = Some(v);
        self
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    fn candidates(&self, level: usize) -> Vec<usize> {
        if level == 0 {
            if let Some(v) = self.first {
                return if v < self.y.len() { vec![v] } else { vec![] };
            }
        }
        let mut mask = BitSet::full(self.y.len());
        for &q in &self.below[level] {
            mask.intersect_with(self.y.up_set(self.values[q]));
        }
        for &q in &self.above[level] {
            mask.intersect_with(self.y.down_set(self.values[q]));
        }
        mask.iter().collect()
    }
}

impl Iterator for MonotoneMaps<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.finished {
            return None;
        }
        let n = self.a.len();
        if !self.started {
            self.started = true;
            if n == 0 {
                self.finished = true;
                return Some(Vec::new());
            }
            let cands = self.candidates(0);
            self.stack.push(Frame { cands, next: 0 });
        }
        loop {
            let level = match self.stack.len() {
                0 => {
                    self.finished = true;
                    return None;
                }
                l => l - 1,
            };
            let top = self.stack.last_mut().unwrap();
            if top.next == top.cands.len() {
                self.stack.pop();
                continue;
            }
            let v = top.cands[top.next];
            top.next += 1;
            self.values[self.order[level]] = v;
            if level + 1 == n {
                return Some(self.values.clone());
            }
            let cands = self.candidates(level + 1);
            self.stack.push(Frame { cands, next: 0 });
        }
    }
}

/// A monotone map stream that fails once more than `budget` maps exist.
pub struct BudgetedMaps<'a> {
    inner: MonotoneMaps<'a>,
    budget: u64,
    produced: u64,
    failed: bool,
}

impl Iterator for BudgetedMaps<'_> {
    type Item = Result<Vec<usize>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let m = self.inner.next()?;
        if self.produced == self.budget {
            self.failed = true;
            return Some(Err(Error::BudgetExceeded {
                what: "monotone maps",
                limit: self.budget,
                reached: self.produced + 1,
            }));
        }
        self.produced += 1;
        Some(Ok(m))
    }
}

pub fn enumerate_monotone_maps<'a>(a: &'a FinSpace, y: &'a FinSpace, budget: u64) -> BudgetedMaps<'a> {
    BudgetedMaps {
        inner: MonotoneMaps::new(a, y),
        budget,
        produced: 0,
        failed: false,
    }
}

pub fn count_monotone_maps(a: &FinSpace, y: &FinSpace, budget: u64) -> Result<u64> {
    let mut n = 0;
    for m in enumerate_monotone_maps(a, y, budget) {
        m?;
        n += 1;
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::{all_preorders, SpaceMap};

    fn brute(a: &FinSpace, y: &FinSpace) -> Vec<Vec<usize>> {
        let (n, m) = (a.len(), y.len());
        let mut out = Vec::new();
        for code in 0..m.pow(n as u32) {
            let v: Vec<usize> = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
            if SpaceMap::new(a.clone(), y.clone(), v.clone()).unwrap().is_continuous() {
                out.push(v);
            }
        }
        out
    }

    #[test]
    fn small_counts() {
        let p = FinSpace::point();
        let i2 = FinSpace::bi_sierpinski();
        assert_eq!(count_monotone_maps(&p, &i2, 100).unwrap(), 3);
        let i1 = FinSpace::sierpinski();
        let maps: Vec<Vec<usize>> = MonotoneMaps::new(&i1, &i1).collect();
        assert_eq!(maps, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(count_monotone_maps(&FinSpace::discrete(2), &i2, 100).unwrap(), 9);
    }

    #[test]
    fn agrees_with_brute_force() {
        let spaces: Vec<FinSpace> = (1..=3).flat_map(all_preorders).collect();
        for a in &spaces {
            for y in &spaces {
                let mut got: Vec<Vec<usize>> = MonotoneMaps::new(a, y).collect();
                let n = got.len();
                got.sort();
                got.dedup();
                assert_eq!(got.len(), n);
                let mut want = brute(a, y);
                want.sort();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn partitions_by_first_value() {
        let a = FinSpace::bi_sierpinski().product(&FinSpace::sierpinski());
        let y = FinSpace::bi_sierpinski();
        let all: Vec<Vec<usize>> = MonotoneMaps::new(&a, &y).collect();
        let parts: Vec<Vec<usize>> = (0..y.len()).flat_map(|v| MonotoneMaps::new(&a, &y).with_first(v)).collect();
        assert_eq!(all, parts);
    }

    #[test]
    fn budget_is_reported() {
        let i2 = FinSpace::bi_sierpinski();
        match count_monotone_maps(&FinSpace::discrete(2), &i2, 5) {
            Err(Error::BudgetExceeded { limit: 5, reached: 6, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert_eq!(count_monotone_maps(&FinSpace::discrete(2), &i2, 9).unwrap(), 9);
    }
}
