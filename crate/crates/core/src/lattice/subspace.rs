//! Coordinate subspaces of ℝⁿ, encoded by their (0-based) axis sets.

use std::fmt;

use crate::error::{Error, Result};

/// A coordinate subspace `P ∈ Gr(n, k)`. Axes are 0-based and sorted;
/// projection onto `P` deletes every other coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordSubspace {
    ambient: usize,
    axes: Vec<usize>,
}

impl CoordSubspace {
    pub fn new(ambient: usize, mut axes: Vec<usize>) -> Result<Self> {
        axes.sort_unstable();
        if let Some(&axis) = axes.iter().find(|&&a| a >= ambient) {
            return Err(Error::AxisOutOfRange {
                axis,
                dimension: ambient,
            });
        }
        if axes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("repeated axis in {axes:?}")));
        }
        Ok(Self { ambient, axes })
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            axes: (0..ambient).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[usize] {
        &self.axes
    }

    /// `P⊥`: the complementary axis set.
    pub fn complement(&self) -> CoordSubspace {
        CoordSubspace {
            ambient: self.ambient,
            axes: (0..self.ambient).filter(|a| !self.axes.contains(a)).collect(),
        }
    }

    pub fn project_point<T: Clone>(&self, x: &[T]) -> Vec<T> {
        self.axes.iter().map(|&a| x[a].clone()).collect()
    }
}

impl fmt::Display for CoordSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.axes.iter().map(|a| (a + 1).to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// All `k`-subsets of `{0..n}` in lexicographic order; `C(n, k)` of them.
pub fn enumerate_coordinate_subspaces(n: usize, k: usize) -> Result<Vec<CoordSubspace>> {
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<CoordSubspace>) {
        if cur.len() == k {
            out.push(CoordSubspace {
                ambient: n,
                axes: cur.clone(),
            });
            return;
        }
        for a in start..n {
            if n - a < k - cur.len() {
                break;
            }
            cur.push(a);
            go(n, k, a + 1, cur, out);
            cur.pop();
        }
    }
    go(n, k, 0, &mut cur, &mut out);
    Ok(out)
}
