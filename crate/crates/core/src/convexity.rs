//! Deciding ℓ1-convexity of pixellated sets.
//!
//! A pixellated set `X = λ(L + [0,1]ⁿ)` is ℓ1-convex exactly when every pair
//! of cells `h, h′ ∈ L` whose cubes are disjoint (Chebyshev gap ≥ 2) has a
//! third cell of `L` componentwise between them. Sufficiency is the Minkowski
//! criterion for `L + [0,1]ⁿ`; necessity follows by taking a monotone path
//! between points of the two cubes and reading off the cell it crosses in the
//! open slab separating them.
//!
//! [`monotone_reachable`] is an independent, one-sided oracle: king-move
//! paths through cells that never move away from the target.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{for_each_offset, Cell, CellSet, CubicalSet, RatBox};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexityVerdict {
    pub is_convex: bool,
    /// Lexicographically first violating pair, present iff not convex.
    pub witness: Option<(Cell, Cell)>,
}

impl ConvexityVerdict {
    fn convex() -> Self {
        Self {
            is_convex: true,
            witness: None,
        }
    }
}

fn chebyshev(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap_or(0)
}

/// Counts cells in index boxes. Dense prefix sums over the bounding box
/// when it is small enough, a linear scan otherwise.
struct BoxCounter<'a> {
    cells: &'a [&'a Cell],
    dense: Option<Dense>,
}

struct Dense {
    lo: Vec<i64>,
    strides: Vec<usize>,
    prefix: Vec<u32>,
    occupied: Vec<bool>,
}

const DENSE_LIMIT: usize = 1 << 23;

impl<'a> BoxCounter<'a> {
    fn new(cells: &'a [&'a Cell], lo: &[i64], hi: &[i64]) -> Self {
        let n = lo.len();
        let sizes: Option<Vec<usize>> = (0..n)
            .map(|i| usize::try_from(hi[i] - lo[i] + 2).ok())
            .collect();
        let dense = sizes.and_then(|sizes| {
            let total = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s))?;
            if total > DENSE_LIMIT {
                return None;
            }
            let mut strides = vec![1usize; n];
            for i in (0..n.saturating_sub(1)).rev() {
                strides[i] = strides[i + 1] * sizes[i + 1];
            }
            // prefix[k_0+1, …] counts cells with index ≤ k on every axis.
            let mut prefix = vec![0u32; total];
            let mut occupied = vec![false; total];
            for c in cells {
                let idx: usize = (0..n).map(|i| (c[i] - lo[i] + 1) as usize * strides[i]).sum();
                prefix[idx] += 1;
                occupied[idx] = true;
            }
            for axis in 0..n {
                for idx in 0..total {
                    if (idx / strides[axis]) % sizes[axis] > 0 {
                        prefix[idx] += prefix[idx - strides[axis]];
                    }
                }
            }
            Some(Dense {
                lo: lo.to_vec(),
                strides,
                prefix,
                occupied,
            })
        });
        Self { cells, dense }
    }

    /// Whether `from` has a neighbour in `X` one step toward `to` along some
    /// axis. Only answered on the dense grid; `false` means "unknown".
    fn has_step_toward(&self, from: &[i64], to: &[i64]) -> bool {
        let Some(d) = &self.dense else {
            return false;
        };
        let base: usize = (0..from.len())
            .map(|i| (from[i] - d.lo[i] + 1) as usize * d.strides[i])
            .sum();
        (0..from.len()).any(|i| match to[i].cmp(&from[i]) {
            std::cmp::Ordering::Greater => d.occupied[base + d.strides[i]],
            std::cmp::Ordering::Less => d.occupied[base - d.strides[i]],
            std::cmp::Ordering::Equal => false,
        })
    }

    /// Cells `k` with `a_i ≤ k_i ≤ b_i` on every axis.
    fn count(&self, a: &[i64], b: &[i64]) -> u32 {
        match &self.dense {
            Some(d) => {
                let n = a.len();
                let mut total: i64 = 0;
                for mask in 0u32..(1 << n) {
                    let mut idx = 0usize;
                    let mut neg = false;
                    let mut skip = false;
                    for i in 0..n {
                        let v = if mask >> i & 1 == 1 {
                            neg = !neg;
                            a[i] - d.lo[i]
                        } else {
                            b[i] - d.lo[i] + 1
                        };
                        if v < 0 {
                            skip = true;
                            break;
                        }
                        idx += v as usize * d.strides[i];
                    }
                    if skip {
                        continue;
                    }
                    let p = d.prefix[idx] as i64;
                    total += if neg { -p } else { p };
                }
                total as u32
            }
            None => self
                .cells
                .iter()
                .filter(|k| (0..a.len()).all(|i| a[i] <= k[i] && k[i] <= b[i]))
                .count() as u32,
        }
    }
}

/// Decides ℓ1-convexity with the pairwise betweenness criterion.
pub fn is_l1_convex(x: &CellSet) -> ConvexityVerdict {
    let cells: Vec<&Cell> = x.iter().collect();
    if cells.len() <= 1 {
        return ConvexityVerdict::convex();
    }
    let (lo, hi) = x.index_bounds().expect("non-empty");
    let counter = BoxCounter::new(&cells, &lo, &hi);
    let n = x.dimension();
    let mut a = vec![0i64; n];
    let mut b = vec![0i64; n];
    for (i, h) in cells.iter().enumerate() {
        for h2 in &cells[i + 1..] {
            if chebyshev(h, h2) < 2 {
                continue;
            }
            // A step from either end toward the other is already a third
            // cell in the box, since the ends are not adjacent.
            if counter.has_step_toward(h, h2) || counter.has_step_toward(h2, h) {
                continue;
            }
            for k in 0..n {
                a[k] = h[k].min(h2[k]);
                b[k] = h[k].max(h2[k]);
            }
            if counter.count(&a, &b) < 3 {
                return ConvexityVerdict {
                    is_convex: false,
                    witness: Some(((*h).clone(), (*h2).clone())),
                };
            }
        }
    }
    ConvexityVerdict::convex()
}

/// ℓ1-convexity of a closed cubical set, decided on its collapse model.
/// A witness is reported in doubled face coordinates.
pub fn is_l1_convex_cubical(c: &CubicalSet) -> ConvexityVerdict {
    is_l1_convex(&c.collapse_model())
}

/// Every axis-parallel line of cells meets `X` in consecutive cells.
pub fn is_orthogonally_convex(x: &CellSet) -> bool {
    let n = x.dimension();
    for axis in 0..n {
        let mut lines: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        for h in x.iter() {
            let mut key = h.clone();
            key.remove(axis);
            lines.entry(key).or_default().push(h[axis]);
        }
        for vals in lines.values_mut() {
            vals.sort_unstable();
            if vals.windows(2).any(|w| w[1] != w[0] + 1) {
                return false;
            }
        }
    }
    true
}

/// Repeatedly inserts the floor-midpoint of the first violating pair until
/// the set passes [`is_l1_convex`]. The midpoint is strictly between the pair
/// because some coordinate gap is at least 2, so each round adds a new cell
/// inside the index bounding box and the loop terminates.
pub fn convexify(x: &CellSet, bound: &RatBox) -> Result<CellSet> {
    check_dim(x.dimension(), bound.dimension())?;
    if let Some(h) = x.iter().find(|h| !bound.contains_box(&x.cell_box(h))) {
        return Err(Error::InvalidArgument(format!("cell {h:?} lies outside the bound")));
    }
    let mut out = x.clone();
    loop {
        let verdict = is_l1_convex(&out);
        let Some((h, h2)) = verdict.witness else {
            return Ok(out);
        };
        let mid: Cell = h
            .iter()
            .zip(&h2)
            .map(|(a, b)| (a + b).div_euclid(2))
            .collect();
        let fresh = out.insert(mid)?;
        debug_assert!(fresh);
    }
}

/// `X⁺` = cells with `h[axis] ≥ t`, `X⁻` = cells with `h[axis] < t`.
pub fn split_halves(x: &CellSet, axis: usize, threshold: i64) -> Result<(CellSet, CellSet)> {
    if axis >= x.dimension() {
        return Err(Error::AxisOutOfRange {
            axis,
            dimension: x.dimension(),
        });
    }
    let (plus, minus): (Vec<Cell>, Vec<Cell>) = x.iter().cloned().partition(|h| h[axis] >= threshold);
    let mk = |cells: Vec<Cell>| CellSet::from_cells(x.dimension(), x.resolution().clone(), cells);
    Ok((mk(plus)?, mk(minus)?))
}

/// Is there a king-move path `a → b` in `X` whose every step moves each
/// coordinate toward `b` (or keeps it)? A positive answer yields a monotone
/// path between the cube centres inside `X`.
pub fn monotone_reachable(x: &CellSet, a: &[i64], b: &[i64]) -> Result<bool> {
    for c in [a, b] {
        if !x.contains(c) {
            return Err(Error::CellNotInSet(c.to_vec()));
        }
    }
    let signs: Vec<i64> = a.iter().zip(b).map(|(p, q)| (q - p).signum()).collect();
    let reach = reach_set(x, a, &signs);
    Ok(reach.contains(b))
}

/// Cells reachable from `a` with steps `d ≠ 0`, `d_i ∈ {0, s_i}`.
fn reach_set(x: &CellSet, a: &[i64], signs: &[i64]) -> HashSet<Cell> {
    let steps: Vec<Vec<i64>> = {
        let ranges: Vec<Vec<i64>> = signs
            .iter()
            .map(|&s| if s == 0 { vec![0] } else { vec![0, s] })
            .collect();
        let mut out = Vec::new();
        for_each_offset(&ranges, &mut |d| {
            if d.iter().any(|&v| v != 0) {
                out.push(d.to_vec());
            }
        });
        out
    };
    let mut seen: HashSet<Cell> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(a.to_vec());
    queue.push_back(a.to_vec());
    while let Some(c) = queue.pop_front() {
        for d in &steps {
            let next: Cell = c.iter().zip(d).map(|(u, v)| u + v).collect();
            if x.contains(&next) && !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    seen
}

/// First ordered pair `(a, b)` that is not monotone-reachable, if any.
pub fn first_unreachable_pair(x: &CellSet) -> Option<(Cell, Cell)> {
    let n = x.dimension();
    for a in x.iter() {
        let mut by_orthant: HashMap<Vec<i64>, HashSet<Cell>> = HashMap::new();
        for b in x.iter() {
            let signs: Vec<i64> = (0..n).map(|i| if b[i] >= a[i] { 1 } else { -1 }).collect();
            let reach = by_orthant
                .entry(signs.clone())
                .or_insert_with(|| reach_set(x, a, &signs));
            if !reach.contains(b) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn cs(cells: &[&[i64]]) -> CellSet {
        let n = cells.first().map_or(2, |c| c.len());
        CellSet::from_cells(n, rat(1), cells.iter().map(|c| c.to_vec())).unwrap()
    }

    fn naive_convex(x: &CellSet) -> bool {
        let cells: Vec<&Cell> = x.iter().collect();
        cells.iter().all(|h| {
            cells.iter().all(|h2| {
                chebyshev(h, h2) < 2
                    || cells.iter().any(|k| {
                        k != h
                            && k != h2
                            && (0..x.dimension()).all(|i| h[i].min(h2[i]) <= k[i] && k[i] <= h[i].max(h2[i]))
                    })
            })
        })
    }

    #[test]
    fn small_examples() {
        assert!(is_l1_convex(&cs(&[&[0, 0], &[1, 0], &[0, 1]])).is_convex);
        assert!(is_l1_convex(&cs(&[&[0, 0], &[1, 1]])).is_convex);
        let v = is_l1_convex(&cs(&[&[0, 0], &[2, 0]]));
        assert!(!v.is_convex);
        assert_eq!(v.witness, Some((vec![0, 0], vec![2, 0])));
        assert!(is_l1_convex(&CellSet::new(3, rat(1)).unwrap()).is_convex);
        assert!(is_l1_convex(&cs(&[&[5, -3]])).is_convex);
    }

    #[test]
    fn dense_and_sparse_counters_agree() {
        // Far-apart cells force the linear-scan path.
        let far = cs(&[&[0, 0], &[1, 0], &[4000, 4000]]);
        assert!(!is_l1_convex(&far).is_convex);
        assert_eq!(is_l1_convex(&far).is_convex, naive_convex(&far));
        let ring = cs(&[&[0, 0], &[1, 0], &[2, 0], &[2, 1], &[2, 2], &[1, 2], &[0, 2], &[0, 1]]);
        assert_eq!(is_l1_convex(&ring).is_convex, naive_convex(&ring));
        assert!(!is_l1_convex(&ring).is_convex);
    }

    #[test]
    fn convexify_examples() {
        let bound = RatBox::new(vec![rat(-10), rat(-10)], vec![rat(10), rat(10)]).unwrap();
        let tri = cs(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(convexify(&tri, &bound).unwrap(), tri);
        assert_eq!(
            convexify(&cs(&[&[0, 0], &[2, 0]]), &bound).unwrap(),
            cs(&[&[0, 0], &[1, 0], &[2, 0]])
        );
        let diag = convexify(&cs(&[&[0, 0], &[3, 3]]), &bound).unwrap();
        assert!(diag.contains(&[1, 1]));
        assert!(is_l1_convex(&diag).is_convex);
        let (lo, hi) = diag.index_bounds().unwrap();
        assert_eq!((lo, hi), (vec![0, 0], vec![3, 3]));
        let tight = RatBox::new(vec![rat(0), rat(0)], vec![rat(1), rat(1)]).unwrap();
        assert!(convexify(&cs(&[&[0, 0], &[3, 3]]), &tight).is_err());
    }

    #[test]
    fn split_examples() {
        let tri = cs(&[&[0, 0], &[1, 0], &[0, 1]]);
        let (p, m) = split_halves(&tri, 0, 1).unwrap();
        assert_eq!(p, cs(&[&[1, 0]]));
        assert_eq!(m, cs(&[&[0, 0], &[0, 1]]));
        assert!(is_l1_convex(&p).is_convex && is_l1_convex(&m).is_convex);
        let row = cs(&[&[0, 0], &[1, 0], &[2, 0]]);
        let (p, m) = split_halves(&row, 0, 1).unwrap();
        assert_eq!(p, cs(&[&[1, 0], &[2, 0]]));
        assert_eq!(m, cs(&[&[0, 0]]));
        let (p, m) = split_halves(&row, 0, -5).unwrap();
        assert_eq!(p, row);
        assert!(m.is_empty());
        assert!(split_halves(&row, 2, 0).is_err());
    }

    #[test]
    fn reachability_examples() {
        let diag = cs(&[&[0, 0], &[1, 1]]);
        assert!(monotone_reachable(&diag, &[0, 0], &[0, 0]).unwrap());
        assert!(monotone_reachable(&diag, &[0, 0], &[1, 1]).unwrap());
        let gap = cs(&[&[0, 0], &[2, 0]]);
        assert!(!monotone_reachable(&gap, &[0, 0], &[2, 0]).unwrap());
        assert!(monotone_reachable(&gap, &[0, 0], &[5, 5]).is_err());
        assert_eq!(first_unreachable_pair(&gap), Some((vec![0, 0], vec![2, 0])));
        assert_eq!(first_unreachable_pair(&diag), None);
    }

    #[test]
    fn reachability_must_not_overshoot() {
        // (0,0) → (2,0) only through (1,1), which overshoots the second axis.
        let x = cs(&[&[0, 0], &[1, 1], &[2, 0]]);
        assert!(!monotone_reachable(&x, &[0, 0], &[2, 0]).unwrap());
    }

    #[test]
    fn orthogonal_convexity() {
        assert!(is_orthogonally_convex(&cs(&[&[0, 0], &[1, 0], &[0, 1]])));
        assert!(!is_orthogonally_convex(&cs(&[&[0, 0], &[2, 0]])));
    }

    #[test]
    fn cubical_criterion_matches_cells() {
        let shapes = [
            cs(&[&[0, 0], &[1, 0], &[0, 1]]),
            cs(&[&[0, 0], &[2, 0]]),
            cs(&[&[0, 0], &[1, 1]]),
            cs(&[&[0, 0], &[1, 1], &[2, 0]]),
        ];
        for x in &shapes {
            assert_eq!(is_l1_convex(x).is_convex, is_l1_convex_cubical(&x.faces()).is_convex);
        }
    }

    #[test]
    fn touching_intersection_is_convex_geometrically() {
        // Index intersection {(0,0),(2,1)} is not convex; the geometric one also
        // keeps the shared edge [1,2]×{1} and is.
        let x = cs(&[&[0, 0], &[1, 0], &[2, 1]]);
        let y = cs(&[&[0, 0], &[1, 1], &[2, 1]]);
        assert!(is_l1_convex(&x).is_convex && is_l1_convex(&y).is_convex);
        assert!(is_l1_convex(&x.union(&y).unwrap()).is_convex);
        assert!(!is_l1_convex(&x.intersection(&y).unwrap()).is_convex);
        let geo = x.faces().intersection(&y.faces()).unwrap();
        assert!(is_l1_convex_cubical(&geo).is_convex);
    }

    #[test]
    fn disconnected_faces_are_not_convex() {
        let a = cs(&[&[0, 0]]).faces();
        let b = cs(&[&[3, 0]]).faces();
        assert!(!is_l1_convex_cubical(&a.union(&b).unwrap()).is_convex);
        let e = cs(&[&[0, 0]]).faces().intersection(&cs(&[&[1, 0]]).faces()).unwrap();
        assert!(is_l1_convex_cubical(&e).is_convex);
    }
}
