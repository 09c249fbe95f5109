//! Pixellated sets: finite sets of lattice cubes `λ·(h + [0,1]ⁿ)`.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::lattice::{BoxUnion, CoordSubspace, CubicalSet, RatBox, Region, SignedPerm};
use crate::rational::{format_rational, integer_multiple, pow, rat, Rational};

/// Integer corner of a lattice cube.
pub type Cell = Vec<i64>;

/// A λ-pixellated set in ℝⁿ. Cell `h` denotes the closed cube
/// `λ·(h + [0,1]ⁿ)`; the set is the union of its cubes. Cells are kept in
/// lexicographic order so every traversal is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSet {
    dimension: usize,
    resolution: Rational,
    cells: BTreeSet<Cell>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BooleanOp {
    Union,
    Intersection,
    Difference,
}

impl CellSet {
    pub fn new(dimension: usize, resolution: Rational) -> Result<Self> {
        if resolution <= Rational::zero() {
            return Err(Error::NonPositiveResolution(format_rational(&resolution)));
        }
        Ok(Self {
            dimension,
            resolution,
            cells: BTreeSet::new(),
        })
    }

    /// Builds a set from cells; repeated cells collapse.
    pub fn from_cells(
        dimension: usize,
        resolution: Rational,
        cells: impl IntoIterator<Item = Cell>,
    ) -> Result<Self> {
        let mut out = Self::new(dimension, resolution)?;
        for c in cells {
            out.insert(c)?;
        }
        Ok(out)
    }

    pub(crate) fn from_parts_unchecked(dimension: usize, resolution: Rational, cells: BTreeSet<Cell>) -> Self {
        Self {
            dimension,
            resolution,
            cells,
        }
    }

    pub fn insert(&mut self, cell: Cell) -> Result<bool> {
        check_dim(self.dimension, cell.len())?;
        Ok(self.cells.insert(cell))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn resolution(&self) -> &Rational {
        &self.resolution
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: &[i64]) -> bool {
        self.cells.contains(cell)
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter()
    }

    fn empty_like(&self) -> Self {
        Self {
            dimension: self.dimension,
            resolution: self.resolution.clone(),
            cells: BTreeSet::new(),
        }
    }

    fn with_cells(&self, cells: BTreeSet<Cell>) -> Self {
        Self {
            dimension: self.dimension,
            resolution: self.resolution.clone(),
            cells,
        }
    }

    /// Per-axis (min, max) cell indices; `None` when empty.
    pub fn index_bounds(&self) -> Option<(Cell, Cell)> {
        let first = self.cells.iter().next()?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for c in &self.cells {
            for i in 0..self.dimension {
                lo[i] = lo[i].min(c[i]);
                hi[i] = hi[i].max(c[i]);
            }
        }
        Some((lo, hi))
    }

    pub fn cell_box(&self, h: &[i64]) -> RatBox {
        let lam = &self.resolution;
        let min: Vec<Rational> = h.iter().map(|&v| rat(v) * lam).collect();
        let max: Vec<Rational> = h.iter().map(|&v| rat(v + 1) * lam).collect();
        RatBox::new(min, max).expect("cell box is ordered")
    }

    /// One box per cell.
    pub fn to_box_union(&self) -> BoxUnion {
        BoxUnion::new(self.dimension, self.cells.iter().map(|h| self.cell_box(h)).collect())
            .expect("cell boxes share the dimension")
    }

    /// `λⁿ·|L|`.
    pub fn volume(&self) -> Rational {
        pow(&self.resolution, self.dimension) * rat(self.cells.len() as i64)
    }

    /// Coordinate deletion onto `P`, duplicates merged. Projecting a
    /// non-empty set onto the 0-dimensional subspace gives the single empty
    /// cell (a point).
    pub fn project(&self, p: &CoordSubspace) -> Result<CellSet> {
        check_dim(self.dimension, p.ambient())?;
        let cells = self.cells.iter().map(|h| p.project_point(h)).collect();
        Ok(CellSet {
            dimension: p.dim(),
            resolution: self.resolution.clone(),
            cells,
        })
    }

    /// Number of distinct projected cells, without building the projection.
    pub fn projected_count(&self, p: &CoordSubspace) -> usize {
        let set: HashSet<Vec<i64>> = self.cells.iter().map(|h| p.project_point(h)).collect();
        set.len()
    }

    /// Integer action: cell-wise image under `g` followed by a shift of
    /// `offset` cells.
    pub fn transform_cells(&self, g: &SignedPerm, offset: &[i64]) -> Result<CellSet> {
        check_dim(self.dimension, g.dimension())?;
        check_dim(self.dimension, offset.len())?;
        let cells = self
            .cells
            .iter()
            .map(|h| {
                let mut img = g.apply_cell(h);
                for (v, t) in img.iter_mut().zip(offset) {
                    *v += t;
                }
                img
            })
            .collect();
        Ok(self.with_cells(cells))
    }

    pub fn translate_cells(&self, offset: &[i64]) -> Result<CellSet> {
        self.transform_cells(&SignedPerm::identity(self.dimension), offset)
    }

    /// Image under `x ↦ g·x + q`. Stays a cell set when every `q_i` is a
    /// multiple of λ; otherwise the image is returned as a box union.
    pub fn apply_isometry(&self, g: &SignedPerm, q: &[Rational]) -> Result<Region> {
        check_dim(self.dimension, g.dimension())?;
        check_dim(self.dimension, q.len())?;
        let offsets: Option<Vec<i64>> = q
            .iter()
            .map(|v| integer_multiple(v, &self.resolution))
            .collect();
        match offsets {
            Some(offset) => Ok(Region::Cells(self.transform_cells(g, &offset)?)),
            None => Ok(Region::Boxes(self.to_box_union().apply_isometry(g, q)?)),
        }
    }

    /// `L + ({0..m₀} × … × {0..m_{n−1}}) + t`, the cell-level Minkowski sum
    /// with the box `λ·∏[0, m_i] + λ·t`.
    pub fn dilate(&self, extents: &[u64], offset: &[i64]) -> Result<CellSet> {
        check_dim(self.dimension, extents.len())?;
        check_dim(self.dimension, offset.len())?;
        let mut cells = BTreeSet::new();
        let ranges: Vec<Vec<i64>> = extents.iter().map(|&m| (0..=m as i64).collect()).collect();
        for h in &self.cells {
            for_each_offset(&ranges, &mut |d| {
                cells.insert(
                    h.iter()
                        .zip(d)
                        .zip(offset)
                        .map(|((a, b), t)| a + b + t)
                        .collect(),
                );
            });
        }
        Ok(self.with_cells(cells))
    }

    /// Exact Minkowski sum with a box. The result is a cell set when the box
    /// is cell-aligned (corners on the λ-lattice), a box union otherwise.
    pub fn minkowski_sum_box(&self, i: &RatBox) -> Result<Region> {
        check_dim(self.dimension, i.dimension())?;
        if let Some((extents, offset)) = self.aligned_extents(i) {
            return Ok(Region::Cells(self.dilate(&extents, &offset)?));
        }
        Ok(Region::Boxes(self.to_box_union().minkowski_sum_box(i)?))
    }

    /// `(m, t)` with `I = λ·∏[t_i, t_i + m_i]`, when such integers exist.
    pub fn aligned_extents(&self, i: &RatBox) -> Option<(Vec<u64>, Vec<i64>)> {
        let mut extents = Vec::with_capacity(self.dimension);
        let mut offset = Vec::with_capacity(self.dimension);
        for axis in 0..self.dimension {
            let t = integer_multiple(&i.min()[axis], &self.resolution)?;
            let e = integer_multiple(&i.max()[axis], &self.resolution)? - t;
            extents.push(e as u64);
            offset.push(t);
        }
        Some((extents, offset))
    }

    fn check_compatible(&self, other: &CellSet) -> Result<()> {
        check_dim(self.dimension, other.dimension)?;
        if self.resolution != other.resolution {
            return Err(Error::ResolutionMismatch {
                left: format_rational(&self.resolution),
                right: format_rational(&other.resolution),
            });
        }
        Ok(())
    }

    /// Index-level set algebra at a common resolution. Index intersection is
    /// the union of the common cubes; use [`CellSet::faces`] for the
    /// geometric intersection, which also keeps shared faces.
    pub fn boolean(&self, other: &CellSet, op: BooleanOp) -> Result<CellSet> {
        self.check_compatible(other)?;
        let cells = match op {
            BooleanOp::Union => self.cells.union(&other.cells).cloned().collect(),
            BooleanOp::Intersection => self.cells.intersection(&other.cells).cloned().collect(),
            BooleanOp::Difference => self.cells.difference(&other.cells).cloned().collect(),
        };
        Ok(self.with_cells(cells))
    }

    pub fn union(&self, other: &CellSet) -> Result<CellSet> {
        self.boolean(other, BooleanOp::Union)
    }

    pub fn intersection(&self, other: &CellSet) -> Result<CellSet> {
        self.boolean(other, BooleanOp::Intersection)
    }

    pub fn difference(&self, other: &CellSet) -> Result<CellSet> {
        self.boolean(other, BooleanOp::Difference)
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.cells.is_subset(&other.cells)
    }

    /// Cells whose index lies in `∏[lo_i, hi_i]`: the intersection with the
    /// cell-aligned box `λ·∏[lo_i, hi_i + 1]`, modulo boundary faces.
    pub fn restrict_to_index_box(&self, lo: &[i64], hi: &[i64]) -> CellSet {
        let cells = self
            .cells
            .iter()
            .filter(|h| (0..self.dimension).all(|i| lo[i] <= h[i] && h[i] <= hi[i]))
            .cloned()
            .collect();
        self.with_cells(cells)
    }

    /// Refines λ → λ/m; the point set is unchanged.
    pub fn subdivide(&self, m: u32) -> Result<CellSet> {
        if m == 0 {
            return Err(Error::InvalidArgument("subdivision factor must be ≥ 1".into()));
        }
        let mut out = self.blow_up(m as i64);
        out.resolution = &self.resolution / rat(m as i64);
        Ok(out)
    }

    /// `m·X` at the same resolution.
    pub fn scale(&self, m: u32) -> Result<CellSet> {
        if m == 0 {
            return Err(Error::InvalidArgument("scale factor must be ≥ 1".into()));
        }
        Ok(self.blow_up(m as i64))
    }

    fn blow_up(&self, m: i64) -> CellSet {
        let ranges: Vec<Vec<i64>> = vec![(0..m).collect(); self.dimension];
        let mut cells = BTreeSet::new();
        for h in &self.cells {
            for_each_offset(&ranges, &mut |d| {
                cells.insert(h.iter().zip(d).map(|(a, b)| m * a + b).collect());
            });
        }
        self.with_cells(cells)
    }

    /// Image under the embedding ℝⁿ → ℝⁿ⁺¹ that inserts a zero coordinate at
    /// `position`. The image is a null set, so it is returned as a union of
    /// zero-thickness boxes rather than cells.
    pub fn embed(&self, position: usize) -> Result<BoxUnion> {
        self.to_box_union().embed(position)
    }

    /// Cartesian product in ℝ^{m+p}; resolutions must agree.
    pub fn product(&self, other: &CellSet) -> Result<CellSet> {
        if self.resolution != other.resolution {
            return Err(Error::ResolutionMismatch {
                left: format_rational(&self.resolution),
                right: format_rational(&other.resolution),
            });
        }
        let mut cells = BTreeSet::new();
        for a in &self.cells {
            for b in &other.cells {
                cells.insert(a.iter().chain(b).copied().collect());
            }
        }
        Ok(CellSet {
            dimension: self.dimension + other.dimension,
            resolution: self.resolution.clone(),
            cells,
        })
    }

    /// The closed cubical complex of all faces of the cubes.
    pub fn faces(&self) -> CubicalSet {
        CubicalSet::from_cells(self)
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        if x.len() != self.dimension {
            return false;
        }
        // A point lies in cube h iff h_i ∈ {⌈x_i/λ⌉ − 1, ⌊x_i/λ⌋} on every axis.
        let candidates: Vec<Vec<i64>> = x
            .iter()
            .map(|v| {
                let q = v / &self.resolution;
                let fl: BigInt = q.floor().to_integer();
                let fl = i64::try_from(fl).unwrap_or(i64::MAX);
                if q.is_integer() {
                    vec![fl - 1, fl]
                } else {
                    vec![fl]
                }
            })
            .collect();
        let mut found = false;
        for_each_offset(&candidates, &mut |h| {
            if !found && self.cells.contains(h) {
                found = true;
            }
        });
        found
    }

    pub fn empty(&self) -> CellSet {
        self.empty_like()
    }
}

/// Calls `f` on every tuple of the Cartesian product of `ranges`.
pub(crate) fn for_each_offset(ranges: &[Vec<i64>], f: &mut impl FnMut(&[i64])) {
    fn go(ranges: &[Vec<i64>], cur: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
        if cur.len() == ranges.len() {
            f(cur);
            return;
        }
        for &v in &ranges[cur.len()] {
            cur.push(v);
            go(ranges, cur, f);
            cur.pop();
        }
    }
    go(ranges, &mut Vec::with_capacity(ranges.len()), f);
}

/// Set algebra on two cell sets at equal resolution.
pub fn cellset_boolean(x: &CellSet, y: &CellSet, op: BooleanOp) -> Result<CellSet> {
    x.boolean(y, op)
}
