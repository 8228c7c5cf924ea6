//! Canonical relabeling of finite preorders.
//!
//! Components are canonized independently and then sorted. Within a
//! component we run individualization-refinement: colour refinement on
//! (up, down, equivalent) neighbourhood colour multisets, then branch on the
//! first non-singleton cell and keep the least adjacency encoding over all
//! leaves. Automorphisms discovered at equal leaves prune sibling branches.

use super::{BitSet, FinSpace};

/// Canonical labeling and certificate of a finite space.
///
/// Two spaces are homeomorphic iff their certificates (`n` and `encoding`)
/// agree; `labeling[x]` is the canonical position of point `x`.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub n: usize,
    pub encoding: Vec<u64>,
    pub labeling: Vec<usize>,
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.encoding == other.encoding
    }
}

impl Eq for CanonicalForm {}

impl std::hash::Hash for CanonicalForm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.encoding.hash(state);
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, &self.encoding).cmp(&(other.n, &other.encoding))
    }
}

pub fn canonical_form(x: &FinSpace) -> CanonicalForm {
    let mut parts: Vec<(usize, Vec<u64>, Vec<usize>)> = x
        .components()
        .into_iter()
        .map(|comp| {
            let local = Local::new(x, &comp);
            let (enc, order) = local.canonize();
            (comp.len(), enc, order.into_iter().map(|i| comp[i]).collect())
        })
        .collect();
    parts.sort();
    let order: Vec<usize> = parts.into_iter().flat_map(|(_, _, o)| o).collect();
    let n = x.len();
    let mut labeling = vec![0; n];
    for (pos, &p) in order.iter().enumerate() {
        labeling[p] = pos;
    }
    CanonicalForm {
        n,
        encoding: encode(n, |i, j| x.leq(order[i], order[j])),
        labeling,
    }
}

fn encode(n: usize, leq: impl Fn(usize, usize) -> bool) -> Vec<u64> {
    let mut bits = BitSet::new(n * n);
    for i in 0..n {
        for j in 0..n {
            if leq(i, j) {
                bits.insert(i * n + j);
            }
        }
    }
    bits.words().to_vec()
}

struct Local {
    n: usize,
    leq: Vec<BitSet>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    equiv: Vec<Vec<usize>>,
}

struct Search {
    best: Option<(Vec<u64>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

impl Local {
    fn new(x: &FinSpace, comp: &[usize]) -> Self {
        let n = comp.len();
        let leq: Vec<BitSet> = comp
            .iter()
            .map(|&a| BitSet::from_indices(n, (0..n).filter(|&j| x.leq(a, comp[j]))))
            .collect();
        let mut up = vec![vec![]; n];
        let mut down = vec![vec![]; n];
        let mut equiv = vec![vec![]; n];
        for i in 0..n {
            for j in leq[i].iter().filter(|&j| j != i) {
                if leq[j].contains(i) {
                    equiv[i].push(j);
                } else {
                    up[i].push(j);
                    down[j].push(i);
                }
            }
        }
        Self {
            n,
            leq,
            up,
            down,
            equiv,
        }
    }

    fn canonize(&self) -> (Vec<u64>, Vec<usize>) {
        let mut search = Search {
            best: None,
            autos: Vec::new(),
        };
        let colors = self.refine(vec![0; self.n]);
        self.descend(colors, &mut Vec::new(), &mut search);
        let (enc, order) = search.best.expect("at least one leaf");
        (enc, order)
    }

    /// Equitable refinement; colours are ranks of sorted signatures, so the
    /// result is invariant under relabeling.
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let mut k = distinct(&colors);
        loop {
            let sigs: Vec<(usize, Vec<usize>, Vec<usize>, Vec<usize>)> = (0..self.n)
                .map(|x| {
                    let gather = |v: &[usize]| {
                        let mut c: Vec<usize> = v.iter().map(|&y| colors[y]).collect();
                        c.sort_unstable();
                        c
                    };
                    (colors[x], gather(&self.up[x]), gather(&self.down[x]), gather(&self.equiv[x]))
                })
                .collect();
            let mut sorted: Vec<&_> = sigs.iter().collect();
            sorted.sort();
            sorted.dedup();
            colors = sigs
                .iter()
                .map(|s| sorted.binary_search(&s).unwrap())
                .collect();
            let k2 = sorted.len();
            if k2 == k {
                return colors;
            }
            k = k2;
        }
    }

    fn descend(&self, colors: Vec<usize>, prefix: &mut Vec<usize>, search: &mut Search) {
        let k = distinct(&colors);
        if k == self.n {
            let mut order = vec![0; self.n];
            for (x, &c) in colors.iter().enumerate() {
                order[c] = x;
            }
            let enc = encode(self.n, |i, j| self.leq[order[i]].contains(order[j]));
            match &search.best {
                None => search.best = Some((enc, order)),
                Some((best, best_order)) => match enc.cmp(best) {
                    std::cmp::Ordering::Less => search.best = Some((enc, order)),
                    std::cmp::Ordering::Equal => {
                        let mut gamma = vec![0; self.n];
                        for pos in 0..self.n {
                            gamma[order[pos]] = best_order[pos];
                        }
                        if gamma.iter().enumerate().any(|(i, &g)| i != g) {
                            search.autos.push(gamma);
                        }
                    }
                    std::cmp::Ordering::Greater => {}
                },
            }
            return;
        }
        // first non-singleton cell
        let mut size = vec![0usize; k];
        for &c in &colors {
            size[c] += 1;
        }
        let cell = (0..k).find(|&c| size[c] > 1).unwrap();
        let members: Vec<usize> = (0..self.n).filter(|&x| colors[x] == cell).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &members {
            if self.pruned(v, &explored, prefix, &search.autos) {
                continue;
            }
            explored.push(v);
            let child: Vec<usize> = colors
                .iter()
                .enumerate()
                .map(|(x, &c)| match c.cmp(&cell) {
                    std::cmp::Ordering::Less => c,
                    std::cmp::Ordering::Equal if x == v => c,
                    _ => c + 1,
                })
                .collect();
            prefix.push(v);
            self.descend(self.refine(child), prefix, search);
            prefix.pop();
        }
    }

    /// `v` lies in the orbit of an explored sibling under the automorphisms
    /// found so far that fix the prefix pointwise.
    fn pruned(&self, v: usize, explored: &[usize], prefix: &[usize], autos: &[Vec<usize>]) -> bool {
        if explored.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for g in autos.iter().filter(|g| prefix.iter().all(|&p| g[p] == p)) {
            any = true;
            for x in 0..self.n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, g[x]));
                parent[a] = b;
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&w| find(&mut parent, w) == rv)
    }
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}
