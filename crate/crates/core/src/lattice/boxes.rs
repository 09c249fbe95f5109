//! Compact axis-aligned boxes with rational endpoints and finite unions of them.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{CoordSubspace, SignedPerm};
use crate::rational::{lcm_denominators, max_of, min_of, Rational};

/// A non-empty compact box `∏ [min_i, max_i]`. Zero-width sides are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatBox {
    min: Vec<Rational>,
    max: Vec<Rational>,
}

impl RatBox {
    pub fn new(min: Vec<Rational>, max: Vec<Rational>) -> Result<Self> {
        check_dim(min.len(), max.len())?;
        if let Some(axis) = (0..min.len()).find(|&i| min[i] > max[i]) {
            return Err(Error::InvertedBox { axis });
        }
        Ok(Self { min, max })
    }

    pub fn point(x: Vec<Rational>) -> Self {
        Self {
            min: x.clone(),
            max: x,
        }
    }

    /// `[0, side_0] × … × [0, side_{n-1}]`.
    pub fn from_sides(sides: &[Rational]) -> Result<Self> {
        Self::new(vec![Rational::zero(); sides.len()], sides.to_vec())
    }

    pub fn dimension(&self) -> usize {
        self.min.len()
    }

    pub fn min(&self) -> &[Rational] {
        &self.min
    }

    pub fn max(&self) -> &[Rational] {
        &self.max
    }

    pub fn lengths(&self) -> Vec<Rational> {
        self.min
            .iter()
            .zip(&self.max)
            .map(|(a, b)| b - a)
            .collect()
    }

    pub fn volume(&self) -> Rational {
        self.lengths()
            .iter()
            .fold(Rational::one(), |acc, l| acc * l)
    }

    pub fn is_degenerate(&self) -> bool {
        self.min.iter().zip(&self.max).any(|(a, b)| a == b)
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        x.len() == self.dimension()
            && x
                .iter()
                .enumerate()
                .all(|(i, v)| &self.min[i] <= v && v <= &self.max[i])
    }

    pub fn contains_box(&self, other: &RatBox) -> bool {
        (0..self.dimension()).all(|i| self.min[i] <= other.min[i] && other.max[i] <= self.max[i])
    }

    /// Closed intersection; `None` when disjoint.
    pub fn intersection(&self, other: &RatBox) -> Option<RatBox> {
        let n = self.dimension();
        let mut min = Vec::with_capacity(n);
        let mut max = Vec::with_capacity(n);
        for i in 0..n {
            let lo = max_of(&self.min[i], &other.min[i]);
            let hi = min_of(&self.max[i], &other.max[i]);
            if lo > hi {
                return None;
            }
            min.push(lo);
            max.push(hi);
        }
        Some(RatBox { min, max })
    }

    pub fn intersects(&self, other: &RatBox) -> bool {
        (0..self.dimension()).all(|i| self.min[i] <= other.max[i] && other.min[i] <= self.max[i])
    }

    pub fn translate(&self, q: &[Rational]) -> RatBox {
        RatBox {
            min: self.min.iter().zip(q).map(|(a, t)| a + t).collect(),
            max: self.max.iter().zip(q).map(|(a, t)| a + t).collect(),
        }
    }

    /// Minkowski sum of two boxes.
    pub fn sum(&self, other: &RatBox) -> RatBox {
        RatBox {
            min: self.min.iter().zip(&other.min).map(|(a, b)| a + b).collect(),
            max: self.max.iter().zip(&other.max).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self ⊕ (−other) = {a − b : a ∈ self, b ∈ other}`.
    pub fn difference_set(&self, other: &RatBox) -> RatBox {
        RatBox {
            min: self.min.iter().zip(&other.max).map(|(a, b)| a - b).collect(),
            max: self.max.iter().zip(&other.min).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn project(&self, p: &CoordSubspace) -> RatBox {
        RatBox {
            min: p.axes().iter().map(|&a| self.min[a].clone()).collect(),
            max: p.axes().iter().map(|&a| self.max[a].clone()).collect(),
        }
    }

    /// Image under `x ↦ g·x + q`.
    pub fn transform(&self, g: &SignedPerm, q: &[Rational]) -> RatBox {
        let n = self.dimension();
        let mut min = Vec::with_capacity(n);
        let mut max = Vec::with_capacity(n);
        for i in 0..n {
            let src = g.perm()[i];
            if g.signs()[i] > 0 {
                min.push(&self.min[src] + &q[i]);
                max.push(&self.max[src] + &q[i]);
            } else {
                min.push(&q[i] - &self.max[src]);
                max.push(&q[i] - &self.min[src]);
            }
        }
        RatBox { min, max }
    }

    /// Inserts a zero-width coordinate `[0, 0]` at `position`.
    pub fn embed(&self, position: usize) -> RatBox {
        let mut min = self.min.clone();
        let mut max = self.max.clone();
        min.insert(position, Rational::zero());
        max.insert(position, Rational::zero());
        RatBox { min, max }
    }

    /// Cartesian product `self × other`.
    pub fn product(&self, other: &RatBox) -> RatBox {
        RatBox {
            min: self.min.iter().chain(&other.min).cloned().collect(),
            max: self.max.iter().chain(&other.max).cloned().collect(),
        }
    }

    pub fn vertices(&self) -> Vec<Vec<Rational>> {
        let n = self.dimension();
        let mut out = vec![Vec::with_capacity(n)];
        for i in 0..n {
            let mut next = Vec::with_capacity(out.len() * 2);
            for v in &out {
                let mut a = v.clone();
                a.push(self.min[i].clone());
                next.push(a);
                if self.max[i] != self.min[i] {
                    let mut b = v.clone();
                    b.push(self.max[i].clone());
                    next.push(b);
                }
            }
            out = next;
        }
        out
    }
}

/// Exact ℓ1 distance `Σ max(min_i − x_i, x_i − max_i, 0)`.
pub fn point_box_distance(x: &[Rational], b: &RatBox) -> Result<Rational> {
    check_dim(b.dimension(), x.len())?;
    Ok(point_box_distance_unchecked(x, b))
}

fn point_box_distance_unchecked(x: &[Rational], b: &RatBox) -> Rational {
    let mut acc = Rational::zero();
    for (i, v) in x.iter().enumerate() {
        if v < &b.min[i] {
            acc += &b.min[i] - v;
        } else if v > &b.max[i] {
            acc += v - &b.max[i];
        }
    }
    acc
}

/// A finite union of boxes. The list is never canonicalized: overlaps and
/// duplicates are allowed and every consumer is overlap-correct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxUnion {
    dimension: usize,
    boxes: Vec<RatBox>,
}

impl BoxUnion {
    pub fn empty(dimension: usize) -> Self {
        Self {
            dimension,
            boxes: Vec::new(),
        }
    }

    pub fn new(dimension: usize, boxes: Vec<RatBox>) -> Result<Self> {
        for b in &boxes {
            check_dim(dimension, b.dimension())?;
        }
        Ok(Self { dimension, boxes })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn boxes(&self) -> &[RatBox] {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn push(&mut self, b: RatBox) -> Result<()> {
        check_dim(self.dimension, b.dimension())?;
        self.boxes.push(b);
        Ok(())
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        self.boxes.iter().any(|b| b.contains_point(x))
    }

    /// Smallest box containing the union; `None` when empty.
    pub fn bounding_box(&self) -> Option<RatBox> {
        let first = self.boxes.first()?;
        let mut min = first.min.clone();
        let mut max = first.max.clone();
        for b in &self.boxes[1..] {
            for i in 0..self.dimension {
                if b.min[i] < min[i] {
                    min[i] = b.min[i].clone();
                }
                if b.max[i] > max[i] {
                    max[i] = b.max[i].clone();
                }
            }
        }
        Some(RatBox { min, max })
    }

    /// Exact Lebesgue measure of the union by coordinate compression.
    pub fn volume(&self) -> Rational {
        union_volume(self)
    }

    pub fn project(&self, p: &CoordSubspace) -> Result<BoxUnion> {
        check_dim(self.dimension, p.ambient())?;
        Ok(BoxUnion {
            dimension: p.dim(),
            boxes: self.boxes.iter().map(|b| b.project(p)).collect(),
        })
    }

    pub fn apply_isometry(&self, g: &SignedPerm, q: &[Rational]) -> Result<BoxUnion> {
        check_dim(self.dimension, g.dimension())?;
        check_dim(self.dimension, q.len())?;
        Ok(BoxUnion {
            dimension: self.dimension,
            boxes: self.boxes.iter().map(|b| b.transform(g, q)).collect(),
        })
    }

    pub fn minkowski_sum_box(&self, i: &RatBox) -> Result<BoxUnion> {
        check_dim(self.dimension, i.dimension())?;
        Ok(BoxUnion {
            dimension: self.dimension,
            boxes: self.boxes.iter().map(|b| b.sum(i)).collect(),
        })
    }

    /// Intersection with a single box; empty pieces are dropped.
    pub fn clip(&self, i: &RatBox) -> Result<BoxUnion> {
        check_dim(self.dimension, i.dimension())?;
        Ok(BoxUnion {
            dimension: self.dimension,
            boxes: self.boxes.iter().filter_map(|b| b.intersection(i)).collect(),
        })
    }

    pub fn embed(&self, position: usize) -> Result<BoxUnion> {
        if position > self.dimension {
            return Err(Error::AxisOutOfRange {
                axis: position,
                dimension: self.dimension + 1,
            });
        }
        Ok(BoxUnion {
            dimension: self.dimension + 1,
            boxes: self.boxes.iter().map(|b| b.embed(position)).collect(),
        })
    }

    /// ℓ1 distance from `x` to the union (min over boxes); `None` when empty.
    pub fn distance_to_point(&self, x: &[Rational]) -> Option<Rational> {
        self.boxes
            .iter()
            .map(|b| point_box_distance_unchecked(x, b))
            .min()
    }
}

/// Exact n-volume of a box union.
///
/// Per-axis breakpoints induce a grid; a grid cell counts when its open
/// interior lies in some box. Degenerate boxes have empty interior and are
/// skipped. Coordinates are scaled to integers per axis so the accumulation
/// runs on `BigInt` rather than reduced fractions.
pub fn union_volume(u: &BoxUnion) -> Rational {
    let n = u.dimension();
    let boxes: Vec<&RatBox> = u.boxes.iter().filter(|b| !b.is_degenerate()).collect();
    if boxes.is_empty() {
        return Rational::zero();
    }
    if n == 0 {
        return Rational::one();
    }

    let mut breaks: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for axis in 0..n {
        let set: BTreeSet<&Rational> = boxes
            .iter()
            .flat_map(|b| [&b.min[axis], &b.max[axis]])
            .collect();
        breaks.push(set.into_iter().cloned().collect());
    }
    let sizes: Vec<usize> = breaks.iter().map(|b| b.len() - 1).collect();
    let total: usize = sizes.iter().product();

    // Scaled integer widths per axis.
    let mut scales = Vec::with_capacity(n);
    let mut widths: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for axis in 0..n {
        let d = lcm_denominators(breaks[axis].iter());
        let dr = Rational::from_integer(d.clone());
        let w = breaks[axis]
            .windows(2)
            .map(|p| ((&p[1] - &p[0]) * &dr).to_integer())
            .collect();
        widths.push(w);
        scales.push(d);
    }

    let mut covered = vec![false; total];
    let mut strides = vec![1usize; n];
    for axis in (0..n.saturating_sub(1)).rev() {
        strides[axis] = strides[axis + 1] * sizes[axis + 1];
    }
    for b in &boxes {
        let ranges: Vec<(usize, usize)> = (0..n)
            .map(|axis| {
                let lo = breaks[axis].binary_search(&b.min[axis]).unwrap();
                let hi = breaks[axis].binary_search(&b.max[axis]).unwrap();
                (lo, hi)
            })
            .collect();
        mark(&mut covered, &ranges, &strides, 0, 0);
    }

    let mut acc = BigInt::zero();
    accumulate(&covered, &widths, &strides, 0, 0, &BigInt::one(), &mut acc);
    let denom = scales.iter().fold(BigInt::one(), |a, d| a * d);
    Rational::new(acc, denom)
}

fn mark(covered: &mut [bool], ranges: &[(usize, usize)], strides: &[usize], axis: usize, base: usize) {
    let (lo, hi) = ranges[axis];
    if axis + 1 == ranges.len() {
        for c in &mut covered[base + lo..base + hi] {
            *c = true;
        }
        return;
    }
    for i in lo..hi {
        mark(covered, ranges, strides, axis + 1, base + i * strides[axis]);
    }
}

fn accumulate(
    covered: &[bool],
    widths: &[Vec<BigInt>],
    strides: &[usize],
    axis: usize,
    base: usize,
    weight: &BigInt,
    acc: &mut BigInt,
) {
    if axis + 1 == widths.len() {
        let mut row = BigInt::zero();
        for (i, w) in widths[axis].iter().enumerate() {
            if covered[base + i] {
                row += w;
            }
        }
        *acc += row * weight;
        return;
    }
    for (i, w) in widths[axis].iter().enumerate() {
        let next = weight * w;
        accumulate(covered, widths, strides, axis + 1, base + i * strides[axis], &next, acc);
    }
}

/// Directed bracket `(lower, upper)` for `sup_{u ∈ from} d(u, to)`.
fn directed_bracket(from: &BoxUnion, to: &BoxUnion, spacing: &Rational) -> (Rational, Rational) {
    let n = from.dimension();
    if to.len() == 1 {
        // Distance to one box is convex, so each source box attains its sup at a vertex.
        let target = &to.boxes[0];
        let exact = from
            .boxes
            .iter()
            .flat_map(|b| b.vertices())
            .map(|v| point_box_distance_unchecked(&v, target))
            .max()
            .unwrap_or_else(Rational::zero);
        return (exact.clone(), exact);
    }
    let mut lower = Rational::zero();
    for b in &from.boxes {
        let axes: Vec<Vec<Rational>> = (0..n)
            .map(|i| axis_samples(&b.min[i], &b.max[i], spacing))
            .collect();
        for_each_product(&axes, &mut |x| {
            let d = to.distance_to_point(x).unwrap_or_else(Rational::zero);
            if d > lower {
                lower = d;
            }
        });
    }
    let slack = spacing * Rational::from_integer(BigInt::from(n)) / Rational::from_integer(BigInt::from(2));
    let upper = &lower + slack;
    (lower, upper)
}

/// Grid multiples of `spacing` strictly inside `[lo, hi]` plus both endpoints.
fn axis_samples(lo: &Rational, hi: &Rational, spacing: &Rational) -> Vec<Rational> {
    let mut out = vec![lo.clone()];
    let mut k: BigInt = (lo / spacing).floor().to_integer() + 1;
    loop {
        let v = Rational::from_integer(k.clone()) * spacing;
        if &v >= hi {
            break;
        }
        out.push(v);
        k += 1;
    }
    if hi != lo {
        out.push(hi.clone());
    }
    out
}

fn for_each_product(axes: &[Vec<Rational>], f: &mut impl FnMut(&[Rational])) {
    fn go(axes: &[Vec<Rational>], cur: &mut Vec<Rational>, f: &mut impl FnMut(&[Rational])) {
        if cur.len() == axes.len() {
            f(cur);
            return;
        }
        for v in &axes[cur.len()] {
            cur.push(v.clone());
            go(axes, cur, f);
            cur.pop();
        }
    }
    go(axes, &mut Vec::with_capacity(axes.len()), f);
}

/// Rigorous bracket on the ℓ1-Hausdorff distance between two non-empty unions.
///
/// Each directed term samples every source box on the `spacing`-grid (plus
/// the box endpoints on each axis); the distance function is 1-Lipschitz and
/// the samples cover each box within `n·spacing/2`, so
/// `lower ≤ d_H ≤ upper ≤ lower + n·spacing/2`. A directed term whose target
/// is a single box is evaluated exactly.
pub fn hausdorff_distance(u: &BoxUnion, v: &BoxUnion, spacing: &Rational) -> Result<(Rational, Rational)> {
    check_dim(u.dimension(), v.dimension())?;
    if u.is_empty() || v.is_empty() {
        return Err(Error::EmptyInput);
    }
    if spacing <= &Rational::zero() {
        return Err(Error::InvalidArgument("spacing must be positive".into()));
    }
    let (l1, u1) = directed_bracket(u, v, spacing);
    let (l2, u2) = directed_bracket(v, u, spacing);
    Ok((max_of(&l1, &l2), max_of(&u1, &u2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn bx(min: &[i64], max: &[i64]) -> RatBox {
        RatBox::new(min.iter().map(|&v| rat(v)).collect(), max.iter().map(|&v| rat(v)).collect()).unwrap()
    }

    fn union(boxes: Vec<RatBox>) -> BoxUnion {
        let n = boxes[0].dimension();
        BoxUnion::new(n, boxes).unwrap()
    }

    #[test]
    fn empty_union_has_zero_volume() {
        assert_eq!(union_volume(&BoxUnion::empty(3)), rat(0));
    }

    #[test]
    fn overlapping_strips() {
        let u = union(vec![bx(&[0, 0], &[2, 1]), bx(&[1, 0], &[3, 1])]);
        assert_eq!(union_volume(&u), rat(3));
    }

    #[test]
    fn duplicate_boxes_count_once() {
        let u = union(vec![bx(&[0, 0], &[1, 1]), bx(&[0, 0], &[1, 1])]);
        assert_eq!(union_volume(&u), rat(1));
    }

    #[test]
    fn degenerate_boxes_have_no_volume() {
        let u = union(vec![bx(&[0, 0], &[1, 0]), bx(&[0, 0], &[0, 5])]);
        assert_eq!(union_volume(&u), rat(0));
    }

    #[test]
    fn rational_endpoints() {
        let b = RatBox::new(vec![ratio(1, 3), rat(0)], vec![ratio(1, 2), ratio(3, 4)]).unwrap();
        assert_eq!(union_volume(&union(vec![b])), ratio(1, 8));
    }

    #[test]
    fn inverted_box_rejected() {
        assert_eq!(
            RatBox::new(vec![rat(1)], vec![rat(0)]),
            Err(Error::InvertedBox { axis: 0 })
        );
    }

    #[test]
    fn point_distances() {
        let b = bx(&[0, 0], &[1, 1]);
        assert_eq!(point_box_distance(&[ratio(1, 2), ratio(1, 3)], &b).unwrap(), rat(0));
        assert_eq!(point_box_distance(&[rat(2), rat(0)], &b).unwrap(), rat(1));
        assert_eq!(point_box_distance(&[rat(2), rat(-1)], &b).unwrap(), rat(2));
        assert!(point_box_distance(&[rat(2)], &b).is_err());
    }

    #[test]
    fn hausdorff_self_is_zero() {
        let u = union(vec![bx(&[0, 0], &[2, 1]), bx(&[1, 0], &[3, 2])]);
        let (lo, hi) = hausdorff_distance(&u, &u, &ratio(1, 2)).unwrap();
        assert_eq!(lo, rat(0));
        assert!(hi <= ratio(1, 2));
    }

    #[test]
    fn hausdorff_between_side_by_side_squares() {
        // sup over U of d(u, V) is reached on the far edge x = 0: distance 2.
        let u = union(vec![bx(&[0, 0], &[1, 1])]);
        let v = union(vec![bx(&[2, 0], &[3, 1])]);
        for den in [2, 4] {
            let (lo, hi) = hausdorff_distance(&u, &v, &ratio(1, den)).unwrap();
            assert!(lo <= rat(2) && rat(2) <= hi, "{lo} {hi}");
        }
    }

    #[test]
    fn hausdorff_brackets_shrink() {
        let u = union(vec![bx(&[0, 0], &[1, 1]), bx(&[1, 0], &[2, 2])]);
        let v = union(vec![bx(&[0, 0], &[2, 1]), bx(&[0, 1], &[1, 3])]);
        let (l1, u1) = hausdorff_distance(&u, &v, &ratio(1, 2)).unwrap();
        let (l2, u2) = hausdorff_distance(&u, &v, &ratio(1, 4)).unwrap();
        assert!(l1 <= u1 && l2 <= u2);
        assert!(&u1 - &l1 <= ratio(1, 2) && &u2 - &l2 <= ratio(1, 4));
        assert!(l2 >= l1);
        assert!(u2 <= u1);
        // Corner (0,3) of V is at distance 2 from U.
        assert!(l2 <= rat(2) && rat(2) <= u2);
    }

    #[test]
    fn hausdorff_rejects_empty() {
        let u = union(vec![bx(&[0], &[1])]);
        assert_eq!(
            hausdorff_distance(&u, &BoxUnion::empty(1), &rat(1)),
            Err(Error::EmptyInput)
        );
    }

    #[test]
    fn axis_samples_include_endpoints() {
        let s = axis_samples(&ratio(1, 10), &ratio(19, 10), &rat(1));
        assert_eq!(s, vec![ratio(1, 10), rat(1), ratio(19, 10)]);
        assert_eq!(axis_samples(&rat(1), &rat(1), &rat(1)), vec![rat(1)]);
    }
}
