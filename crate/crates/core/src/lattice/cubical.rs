//! Closed cubical sets: finite unions of closed faces (of any dimension) of
//! the λ-lattice. They carry geometric intersections of pixellated sets,
//! which keep the shared lower-dimensional faces that index-level
//! intersection drops.
//!
//! A face is encoded on the doubled lattice: coordinate `2a` is the point
//! `{aλ}`, coordinate `2a + 1` is the segment `[aλ, (a+1)λ]`. The face set is
//! closed under taking sub-faces, which makes it a canonical representation
//! of the point set.
//!
//! The *collapse model* of a cubical set reads its face indices as cells at
//! resolution λ/2. The coordinatewise monotone map that collapses every odd
//! half-cell `[2aμ, (2a+1)μ]` (μ = λ/2) to the lattice value `aλ` and
//! stretches the even ones maps the model onto the cubical set, has box
//! fibres inside the model, and both pushes forward and lifts monotone paths.
//! So the cubical set is ℓ1-convex exactly when its collapse model is.

use std::collections::{BTreeSet, HashSet};

use crate::error::{check_dim, Error, Result};
use crate::lattice::cells::for_each_offset;
use crate::lattice::{BoxUnion, CellSet, CoordSubspace, RatBox};
use crate::rational::{format_rational, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicalSet {
    dimension: usize,
    resolution: Rational,
    faces: BTreeSet<Vec<i64>>,
}

fn is_odd(v: i64) -> bool {
    v.rem_euclid(2) == 1
}

impl CubicalSet {
    pub fn empty(dimension: usize, resolution: Rational) -> Self {
        Self {
            dimension,
            resolution,
            faces: BTreeSet::new(),
        }
    }

    /// All faces of all cubes of `x`.
    pub fn from_cells(x: &CellSet) -> Self {
        let ranges = vec![vec![0, 1, 2]; x.dimension()];
        let mut faces = BTreeSet::new();
        for h in x.iter() {
            for_each_offset(&ranges, &mut |d| {
                faces.insert(h.iter().zip(d).map(|(a, b)| 2 * a + b).collect());
            });
        }
        Self {
            dimension: x.dimension(),
            resolution: x.resolution().clone(),
            faces,
        }
    }

    /// Builds from arbitrary faces, closing downward.
    pub fn from_faces(dimension: usize, resolution: Rational, faces: impl IntoIterator<Item = Vec<i64>>) -> Result<Self> {
        let mut out = Self::empty(dimension, resolution);
        for f in faces {
            check_dim(dimension, f.len())?;
            out.insert_closed(&f);
        }
        Ok(out)
    }

    fn insert_closed(&mut self, face: &[i64]) {
        let ranges: Vec<Vec<i64>> = face
            .iter()
            .map(|&v| if is_odd(v) { vec![v - 1, v, v + 1] } else { vec![v] })
            .collect();
        for_each_offset(&ranges, &mut |p| {
            self.faces.insert(p.to_vec());
        });
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn resolution(&self) -> &Rational {
        &self.resolution
    }

    pub fn faces(&self) -> &BTreeSet<Vec<i64>> {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains_face(&self, face: &[i64]) -> bool {
        self.faces.contains(face)
    }

    pub fn face_box(&self, face: &[i64]) -> RatBox {
        let lam = &self.resolution;
        let (min, max): (Vec<Rational>, Vec<Rational>) = face
            .iter()
            .map(|&v| {
                let a = v.div_euclid(2);
                if is_odd(v) {
                    (rat(a) * lam, rat(a + 1) * lam)
                } else {
                    (rat(a) * lam, rat(a) * lam)
                }
            })
            .unzip();
        RatBox::new(min, max).expect("face box is ordered")
    }

    /// Faces not contained in a larger face of the set.
    pub fn maximal_faces(&self) -> Vec<Vec<i64>> {
        self.faces
            .iter()
            .filter(|p| {
                !(0..self.dimension).any(|i| {
                    !is_odd(p[i])
                        && [-1, 1].iter().any(|d| {
                            let mut q = (*p).clone();
                            q[i] += d;
                            self.faces.contains(&q)
                        })
                })
            })
            .cloned()
            .collect()
    }

    pub fn to_box_union(&self) -> BoxUnion {
        BoxUnion::new(
            self.dimension,
            self.maximal_faces().iter().map(|p| self.face_box(p)).collect(),
        )
        .expect("face boxes share the dimension")
    }

    fn check_compatible(&self, other: &CubicalSet) -> Result<()> {
        check_dim(self.dimension, other.dimension)?;
        if self.resolution != other.resolution {
            return Err(Error::ResolutionMismatch {
                left: format_rational(&self.resolution),
                right: format_rational(&other.resolution),
            });
        }
        Ok(())
    }

    /// Geometric intersection.
    pub fn intersection(&self, other: &CubicalSet) -> Result<CubicalSet> {
        self.check_compatible(other)?;
        Ok(Self {
            dimension: self.dimension,
            resolution: self.resolution.clone(),
            faces: self.faces.intersection(&other.faces).cloned().collect(),
        })
    }

    pub fn union(&self, other: &CubicalSet) -> Result<CubicalSet> {
        self.check_compatible(other)?;
        Ok(Self {
            dimension: self.dimension,
            resolution: self.resolution.clone(),
            faces: self.faces.union(&other.faces).cloned().collect(),
        })
    }

    pub fn project(&self, p: &CoordSubspace) -> Result<CubicalSet> {
        check_dim(self.dimension, p.ambient())?;
        Ok(Self {
            dimension: p.dim(),
            resolution: self.resolution.clone(),
            faces: self.faces.iter().map(|f| p.project_point(f)).collect(),
        })
    }

    /// Number of distinct full-dimensional faces of the projection onto `P`.
    pub fn projected_top_count(&self, p: &CoordSubspace) -> usize {
        let set: HashSet<Vec<i64>> = self
            .faces
            .iter()
            .map(|f| p.project_point(f))
            .filter(|f| f.iter().all(|&v| is_odd(v)))
            .collect();
        set.len()
    }

    /// Minkowski sum with the cell-aligned box `λ·∏[0, m_i]`.
    pub fn dilate(&self, extents: &[u64]) -> Result<CubicalSet> {
        check_dim(self.dimension, extents.len())?;
        let mut faces = BTreeSet::new();
        for f in &self.faces {
            let ranges: Vec<Vec<i64>> = f
                .iter()
                .zip(extents)
                .map(|(&v, &m)| {
                    let lo = 2 * v.div_euclid(2);
                    let hi = if is_odd(v) { lo + 2 * m as i64 + 2 } else { lo + 2 * m as i64 };
                    (lo..=hi).collect()
                })
                .collect();
            for_each_offset(&ranges, &mut |p| {
                faces.insert(p.to_vec());
            });
        }
        Ok(Self {
            dimension: self.dimension,
            resolution: self.resolution.clone(),
            faces,
        })
    }

    /// Face indices read as cells at resolution λ/2 (see module docs).
    pub fn collapse_model(&self) -> CellSet {
        CellSet::from_parts_unchecked(self.dimension, &self.resolution / rat(2), self.faces.clone())
    }

    /// The full-dimensional cubes of the set, as cells at resolution λ.
    pub fn top_cells(&self) -> CellSet {
        let cells = self
            .faces
            .iter()
            .filter(|f| f.iter().all(|&v| is_odd(v)))
            .map(|f| f.iter().map(|&v| v.div_euclid(2)).collect())
            .collect();
        CellSet::from_parts_unchecked(self.dimension, self.resolution.clone(), cells)
    }

    pub fn is_down_closed(&self) -> bool {
        self.faces.iter().all(|f| {
            (0..self.dimension).all(|i| {
                !is_odd(f[i]) || {
                    let mut a = f.clone();
                    let mut b = f.clone();
                    a[i] -= 1;
                    b[i] += 1;
                    self.faces.contains(&a) && self.faces.contains(&b)
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::union_volume;

    fn cs(cells: &[&[i64]]) -> CellSet {
        CellSet::from_cells(cells[0].len(), rat(1), cells.iter().map(|c| c.to_vec())).unwrap()
    }

    #[test]
    fn single_square_has_nine_faces() {
        let f = cs(&[&[0, 0]]).faces();
        assert_eq!(f.len(), 9);
        assert!(f.is_down_closed());
        assert_eq!(f.maximal_faces(), vec![vec![1, 1]]);
        assert_eq!(f.top_cells(), cs(&[&[0, 0]]));
    }

    #[test]
    fn corner_touching_cells_meet_in_a_point() {
        let a = cs(&[&[0, 0]]).faces();
        let b = cs(&[&[1, 1]]).faces();
        let both = a.intersection(&b).unwrap();
        assert_eq!(both.faces().iter().cloned().collect::<Vec<_>>(), vec![vec![2, 2]]);
        assert_eq!(both.face_box(&[2, 2]), RatBox::point(vec![rat(1), rat(1)]));
    }

    #[test]
    fn shared_edge() {
        let a = cs(&[&[0, 0]]).faces();
        let b = cs(&[&[1, 0]]).faces();
        let both = a.intersection(&b).unwrap();
        assert_eq!(both.len(), 3);
        assert_eq!(both.maximal_faces(), vec![vec![2, 1]]);
        assert!(both.is_down_closed());
    }

    #[test]
    fn box_union_preserves_volume() {
        let x = cs(&[&[0, 0], &[1, 0], &[1, 1], &[3, 3]]);
        assert_eq!(union_volume(&x.faces().to_box_union()), rat(4));
    }

    #[test]
    fn dilate_matches_cell_dilation() {
        let x = cs(&[&[0, 0], &[1, 1], &[2, 1]]);
        for m in 0..3u64 {
            let via_cells = x.dilate(&[m, m + 1], &[0, 0]).unwrap().faces();
            let via_faces = x.faces().dilate(&[m, m + 1]).unwrap();
            assert_eq!(via_cells, via_faces);
        }
    }

    #[test]
    fn from_faces_closes_downward() {
        let c = CubicalSet::from_faces(2, rat(1), vec![vec![1, 2]]).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.is_down_closed());
    }
}
