//! Regular cell complexes, their face posets, and the search for free
//! bundles over them.

mod bundles;
mod maps;

pub use bundles::{
    bundle_certificate, bundle_iso_over_base, classify_round_trip, enumerate_bundles, oracle_bundles,
    BundleClass, Certificate, EnumerateOptions, EnumerationReport, ORACLE_CANDIDATE_CAP, ORACLE_SIZE_CAP,
};
pub use maps::{count_monotone_maps, enumerate_monotone_maps, linear_extension, BudgetedMaps, MonotoneMaps};

use crate::error::{Error, Result};
use crate::finspace::FinSpace;

/// Cells with dimensions and the closed-cell containment relation.
/// A pair `(i, j)` in `faces` says that cell `i` is a face of cell `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    dims: Vec<usize>,
    faces: Vec<(usize, usize)>,
    names: Vec<String>,
}

impl CellComplex {
    pub fn new(dims: Vec<usize>, faces: Vec<(usize, usize)>) -> Result<Self> {
        let n = dims.len();
        let bad = |m: String| Err(Error::InvalidComplex(m));
        for &(i, j) in &faces {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { index: i.max(j), len: n });
            }
            if dims[i] >= dims[j] {
                return bad(format!("cell {i} of dimension {} is not below cell {j} of dimension {}", dims[i], dims[j]));
            }
        }
        let space = FinSpace::from_relation(n, &faces)?;
        // covering pairs of the closure must raise dimension by one
        for (i, j) in space.strict_pairs() {
            let covered = !(0..n).any(|k| k != i && k != j && space.leq(i, k) && space.leq(k, j));
            if covered && dims[j] != dims[i] + 1 {
                return bad(format!("incidence {i} < {j} skips a dimension"));
            }
        }
        for (j, &d) in dims.iter().enumerate() {
            if d == 1 {
                let vertices = (0..n).filter(|&i| dims[i] == 0 && space.leq(i, j)).count();
                if vertices != 2 {
                    return bad(format!("1-cell {j} has {vertices} vertex faces"));
                }
            }
            if d > 0 && !(0..n).any(|i| i != j && space.leq(i, j)) {
                return bad(format!("cell {j} of dimension {d} has no faces"));
            }
        }
        let mut count = vec![0usize; dims.iter().max().map_or(0, |m| m + 1)];
        let names = dims
            .iter()
            .map(|&d| {
                count[d] += 1;
                let i = count[d] - 1;
                match d {
                    0 => format!("v{i}"),
                    1 => format!("e{i}"),
                    2 => format!("f{i}"),
                    _ => format!("c{d}.{i}"),
                }
            })
            .collect();
        Ok(Self { dims, faces, names })
    }

    pub fn vertex() -> Self {
        Self::new(vec![0], vec![]).unwrap()
    }

    /// A circle made of `m ≥ 2` vertices and `m` edges.
    pub fn polygon(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidComplex(format!("a polygon needs at least 2 vertices, got {m}")));
        }
        let mut dims = vec![0; m];
        dims.extend(std::iter::repeat_n(1, m));
        let faces = (0..m).flat_map(|e| [(e, m + e), ((e + 1) % m, m + e)]).collect();
        Self::new(dims, faces)
    }

    /// The circle with two vertices and two edges.
    pub fn circle() -> Self {
        Self::polygon(2).unwrap()
    }

    /// The closed `n`-simplex: one cell per nonempty vertex subset.
    pub fn simplex(n: usize) -> Result<Self> {
        if n > 5 {
            return Err(Error::InvalidComplex(format!("simplex dimension {n} is too large")));
        }
        let mut subsets: Vec<u32> = (1u32..1 << (n + 1)).collect();
        subsets.sort_by_key(|s| (s.count_ones(), *s));
        let dims = subsets.iter().map(|s| s.count_ones() as usize - 1).collect();
        let mut faces = Vec::new();
        for (j, &t) in subsets.iter().enumerate() {
            for (i, &s) in subsets.iter().enumerate() {
                if s & t == s && t.count_ones() == s.count_ones() + 1 {
                    faces.push((i, j));
                }
            }
        }
        Self::new(dims, faces)
    }

    /// `vertex`, `circle`, `polygon<m>`, `simplex<n>`, `interval`.
    pub fn builtin(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        let num = |p: &str| lower.strip_prefix(p).and_then(|r| r.parse::<usize>().ok());
        match lower.as_str() {
            "vertex" | "point" => Ok(Self::vertex()),
            "circle" => Ok(Self::circle()),
            "interval" => Self::simplex(1),
            _ => {
                if let Some(m) = num("polygon") {
                    Self::polygon(m)
                } else if let Some(n) = num("simplex") {
                    Self::simplex(n)
                } else {
                    Err(Error::Parse(format!("unknown complex {name:?}")))
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn faces(&self) -> &[(usize, usize)] {
        &self.faces
    }

    pub fn name(&self, cell: usize) -> &str {
        &self.names[cell]
    }
}

/// The face poset as a finite space: `x ⊑ y` iff `x` is a face of `y`.
pub fn face_space(k: &CellComplex) -> FinSpace {
    FinSpace::from_relation(k.len(), &k.faces)
        .expect("validated incidences")
        .with_labels(k.names.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_face_space() {
        let a = face_space(&CellComplex::circle());
        assert_eq!(a.len(), 4);
        for e in [2, 3] {
            assert_eq!(a.up_set(e).count(), 1);
            for v in [0, 1] {
                assert!(a.leq(v, e));
            }
        }
        for v in [0, 1] {
            assert_eq!(a.down_set(v).count(), 1);
        }
        assert_eq!(a.weight(), 4);
    }

    #[test]
    fn interval_is_bi_sierpinski() {
        let a = face_space(&CellComplex::simplex(1).unwrap());
        // relabel 𝕀₂ = {−1, 0, +1} as {v0, e0, v1}
        let b = FinSpace::bi_sierpinski();
        let perm = [0usize, 2, 1];
        assert!((0..3).all(|i| (0..3).all(|j| a.leq(i, j) == b.leq(perm[i], perm[j]))));
        assert_eq!(face_space(&CellComplex::vertex()).len(), 1);
    }

    #[test]
    fn rejects_bad_incidences() {
        assert!(matches!(CellComplex::new(vec![1, 0], vec![(0, 1)]), Err(Error::InvalidComplex(_))));
        assert!(matches!(CellComplex::new(vec![0, 2], vec![(0, 1)]), Err(Error::InvalidComplex(_))));
        // a loop on a single vertex
        assert!(matches!(CellComplex::new(vec![0, 1], vec![(0, 1)]), Err(Error::InvalidComplex(_))));
        assert!(CellComplex::polygon(1).is_err());
    }

    #[test]
    fn simplices() {
        let s2 = CellComplex::simplex(2).unwrap();
        assert_eq!(s2.len(), 7);
        let a = face_space(&s2);
        assert_eq!(a.up_set(0).count(), 4);
        assert_eq!(CellComplex::builtin("polygon3").unwrap().len(), 6);
        assert!(CellComplex::builtin("torus").is_err());
    }
}
