//! Outer pixellation `X_λ` of box unions and ℓ1 balls, the boundary region
//! `D(λ)` (cubes meeting a shape without lying inside it) and Hausdorff
//! brackets between a shape and its pixellation.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{point_box_distance, union_volume, BoxUnion, Cell, CellSet, RatBox};
use crate::rational::{ceil_div, floor_div, format_rational, lcm_denominators, pow, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Boxes(BoxUnion),
    Ball { center: Vec<Rational>, radius: Rational },
}

impl Shape {
    pub fn ball(center: Vec<Rational>, radius: Rational) -> Result<Self> {
        if radius <= Rational::zero() {
            return Err(Error::NonPositiveRadius(format_rational(&radius)));
        }
        Ok(Shape::Ball { center, radius })
    }

    pub fn unit_ball(n: usize) -> Self {
        Shape::Ball {
            center: vec![Rational::zero(); n],
            radius: rat(1),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Shape::Boxes(u) => u.dimension(),
            Shape::Ball { center, .. } => center.len(),
        }
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        match self {
            Shape::Boxes(u) => u.contains_point(x),
            Shape::Ball { center, radius } => {
                x.len() == center.len() && &l1_distance(x, center) <= radius
            }
        }
    }

    pub fn bounding_box(&self) -> Option<RatBox> {
        match self {
            Shape::Boxes(u) => u.bounding_box(),
            Shape::Ball { center, radius } => Some(
                RatBox::new(
                    center.iter().map(|c| c - radius).collect(),
                    center.iter().map(|c| c + radius).collect(),
                )
                .expect("radius is positive"),
            ),
        }
    }

    /// Whether the closed box meets the shape.
    pub fn meets_box(&self, b: &RatBox) -> bool {
        match self {
            Shape::Boxes(u) => u.boxes().iter().any(|s| s.intersects(b)),
            Shape::Ball { center, radius } => {
                &point_box_distance(center, b).expect("dimensions checked by caller") <= radius
            }
        }
    }

    /// Whether the closed box lies inside the shape.
    pub fn contains_box(&self, b: &RatBox) -> bool {
        match self {
            Shape::Boxes(u) => {
                if u.boxes().iter().any(|s| s.contains_box(b)) {
                    return true;
                }
                if b.is_degenerate() {
                    return b.vertices().iter().all(|v| u.contains_point(v));
                }
                let clipped = u.clip(b).expect("dimensions checked by caller");
                union_volume(&clipped) == b.volume()
            }
            // The ball is convex, so it suffices that every vertex lies inside.
            Shape::Ball { center, radius } => {
                let far: Rational = (0..center.len())
                    .map(|i| {
                        let a = (&b.min()[i] - &center[i]).abs();
                        let c = (&b.max()[i] - &center[i]).abs();
                        if a > c {
                            a
                        } else {
                            c
                        }
                    })
                    .sum();
                &far <= radius
            }
        }
    }
}

fn l1_distance(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum()
}

fn to_index(v: BigInt) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::InvalidArgument("cell index exceeds 64 bits".into()))
}

fn check_resolution(lambda: &Rational) -> Result<()> {
    if lambda <= &Rational::zero() {
        return Err(Error::NonPositiveResolution(format_rational(lambda)));
    }
    Ok(())
}

/// Cells `h` whose cube `[hλ, (h+1)λ]` meets `[lo, hi]`.
fn meeting_range(lo: &Rational, hi: &Rational, lambda: &Rational) -> Result<(i64, i64)> {
    Ok((to_index(ceil_div(lo, lambda))? - 1, to_index(floor_div(hi, lambda))?))
}

/// Per-axis ball data scaled to integers by a common denominator: for each
/// index, the distance from the center to the cell interval and to its far
/// endpoint.
struct BallTables {
    first: Vec<i64>,
    near: Vec<Vec<i128>>,
    far: Vec<Vec<i128>>,
    radius: i128,
}

impl BallTables {
    fn new(center: &[Rational], radius: &Rational, lambda: &Rational) -> Result<Self> {
        let mut denom = lambda.denom().clone();
        for v in center.iter().chain([radius]) {
            denom = denom.lcm(v.denom());
        }
        let scale = |v: &Rational| -> Result<i128> {
            (v * Rational::from_integer(denom.clone()))
                .to_integer()
                .to_i128()
                .ok_or_else(|| Error::InvalidArgument("ball coordinates too large".into()))
        };
        let lam = scale(lambda)?;
        let mut first = Vec::new();
        let mut near = Vec::new();
        let mut far = Vec::new();
        for c in center {
            let (lo, hi) = meeting_range(&(c - radius), &(c + radius), lambda)?;
            let cs = scale(c)?;
            let mut n_axis = Vec::new();
            let mut f_axis = Vec::new();
            for h in lo..=hi {
                let a = h as i128 * lam;
                let b = a + lam;
                n_axis.push((a - cs).max(cs - b).max(0));
                f_axis.push((a - cs).abs().max((b - cs).abs()));
            }
            first.push(lo);
            near.push(n_axis);
            far.push(f_axis);
        }
        Ok(Self {
            first,
            near,
            far,
            radius: scale(radius)?,
        })
    }

    /// Calls `f(cell, contained)` on every cell meeting the ball.
    fn for_each_meeting(&self, f: &mut impl FnMut(&[i64], bool)) {
        fn go(
            t: &BallTables,
            axis: usize,
            near_acc: i128,
            far_acc: i128,
            cell: &mut Vec<i64>,
            f: &mut impl FnMut(&[i64], bool),
        ) {
            if axis == t.first.len() {
                f(cell, far_acc <= t.radius);
                return;
            }
            for (k, d) in t.near[axis].iter().enumerate() {
                let acc = near_acc + d;
                if acc > t.radius {
                    continue;
                }
                cell.push(t.first[axis] + k as i64);
                go(t, axis + 1, acc, far_acc + t.far[axis][k], cell, f);
                cell.pop();
            }
        }
        go(self, 0, 0, 0, &mut Vec::with_capacity(self.first.len()), f);
    }
}

fn for_each_box_cell(u: &BoxUnion, lambda: &Rational, f: &mut impl FnMut(Cell)) -> Result<()> {
    for b in u.boxes() {
        let ranges: Vec<(i64, i64)> = (0..u.dimension())
            .map(|i| meeting_range(&b.min()[i], &b.max()[i], lambda))
            .collect::<Result<_>>()?;
        let mut cell: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        'outer: loop {
            f(cell.clone());
            for i in (0..cell.len()).rev() {
                if cell[i] < ranges[i].1 {
                    cell[i] += 1;
                    continue 'outer;
                }
                cell[i] = ranges[i].0;
            }
            break;
        }
    }
    Ok(())
}

/// `X_λ`: every cell whose closed cube meets the shape.
pub fn outer_pixellate(shape: &Shape, lambda: &Rational) -> Result<CellSet> {
    check_resolution(lambda)?;
    let n = shape.dimension();
    let mut cells = BTreeSet::new();
    match shape {
        Shape::Boxes(u) => for_each_box_cell(u, lambda, &mut |c| {
            cells.insert(c);
        })?,
        Shape::Ball { center, radius } => {
            BallTables::new(center, radius, lambda)?.for_each_meeting(&mut |c, _| {
                cells.insert(c.to_vec());
            })
        }
    }
    CellSet::from_cells(n, lambda.clone(), cells)
}

/// `D(λ)`: cells of `X_λ` whose cube is not contained in the shape.
pub fn boundary_region(shape: &Shape, lambda: &Rational) -> Result<CellSet> {
    check_resolution(lambda)?;
    let n = shape.dimension();
    match shape {
        Shape::Boxes(_) => {
            let outer = outer_pixellate(shape, lambda)?;
            let cells: Vec<Cell> = outer
                .iter()
                .filter(|h| !shape.contains_box(&outer.cell_box(h)))
                .cloned()
                .collect();
            CellSet::from_cells(n, lambda.clone(), cells)
        }
        Shape::Ball { center, radius } => {
            let mut cells = BTreeSet::new();
            BallTables::new(center, radius, lambda)?.for_each_meeting(&mut |c, inside| {
                if !inside {
                    cells.insert(c.to_vec());
                }
            });
            CellSet::from_cells(n, lambda.clone(), cells)
        }
    }
}

/// Bracket `(lower, upper)` on the ℓ1-Hausdorff distance between the shape
/// and `X_λ`, with `upper − lower ≤ tolerance`.
///
/// The shape lies inside `X_λ` and cubes inside the shape contribute
/// nothing, so only `D(λ) → S` is measured. Distance to a ball is convex and
/// its maximum over a cube sits at a vertex. For box unions each cube is
/// refined by bisection; on a piece `Q`, every box `b` gives
/// `sup_Q d(·, S) ≤ max_{v ∈ vert Q} d(v, b)`, and vertex values give lower bounds.
pub fn shape_hausdorff(shape: &Shape, lambda: &Rational, tolerance: &Rational) -> Result<(Rational, Rational)> {
    if tolerance <= &Rational::zero() {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let d = boundary_region(shape, lambda)?;
    if d.is_empty() {
        return Ok((Rational::zero(), Rational::zero()));
    }
    match shape {
        Shape::Ball { center, radius } => {
            let mut worst = Rational::zero();
            for h in d.iter() {
                for v in d.cell_box(h).vertices() {
                    let excess = l1_distance(&v, center) - radius;
                    if excess > worst {
                        worst = excess;
                    }
                }
            }
            Ok((worst.clone(), worst))
        }
        Shape::Boxes(u) => Ok(directed_to_boxes_scaled(&d, u, tolerance).unwrap_or_else(|| directed_to_boxes(&d, u, tolerance))),
    }
}

const MAX_BISECTIONS: u32 = 20;

/// `(max_v min_b d(v, b), min_b max_v d(v, b))` over the vertices of `q`.
fn piece_bounds(q: &RatBox, target: &BoxUnion) -> (Rational, Rational) {
    let vertices = q.vertices();
    let mut nearest: Vec<Option<Rational>> = vec![None; vertices.len()];
    let mut upper: Option<Rational> = None;
    for b in target.boxes() {
        let mut worst = Rational::zero();
        for (v, near) in vertices.iter().zip(nearest.iter_mut()) {
            let dist = point_box_distance(v, b).expect("dimensions agree");
            if near.as_ref().is_none_or(|m| &dist < m) {
                *near = Some(dist.clone());
            }
            if dist > worst {
                worst = dist;
            }
        }
        if upper.as_ref().is_none_or(|u| &worst < u) {
            upper = Some(worst);
        }
    }
    let lower = nearest.into_iter().flatten().max().unwrap_or_else(Rational::zero);
    (lower, upper.unwrap_or_else(Rational::zero))
}

fn bisect(q: &RatBox) -> Vec<RatBox> {
    let n = q.dimension();
    let mid: Vec<Rational> = (0..n).map(|i| (&q.min()[i] + &q.max()[i]) / rat(2)).collect();
    (0..1usize << n)
        .map(|mask| {
            let (lo, hi): (Vec<Rational>, Vec<Rational>) = (0..n)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        (mid[i].clone(), q.max()[i].clone())
                    } else {
                        (q.min()[i].clone(), mid[i].clone())
                    }
                })
                .unzip();
            RatBox::new(lo, hi).expect("halves are ordered")
        })
        .collect()
}

fn directed_to_boxes(d: &CellSet, target: &BoxUnion, tolerance: &Rational) -> (Rational, Rational) {
    let mut lower = Rational::zero();
    let mut settled = Rational::zero();
    let mut pending: Vec<(RatBox, Rational, u32)> = Vec::new();
    for h in d.iter() {
        let q = d.cell_box(h);
        let (lo, up) = piece_bounds(&q, target);
        if lo > lower {
            lower = lo;
        }
        pending.push((q, up, 0));
    }
    while let Some((q, up, depth)) = pending.pop() {
        if up <= &lower + tolerance || depth == MAX_BISECTIONS {
            if up > settled {
                settled = up;
            }
            continue;
        }
        for half in bisect(&q) {
            let (lo, up) = piece_bounds(&half, target);
            if lo > lower {
                lower = lo;
            }
            pending.push((half, up, depth + 1));
        }
    }
    let upper = if settled > lower { settled } else { lower.clone() };
    (lower, upper)
}

fn axis_gap(x: i128, lo: i128, hi: i128) -> i128 {
    if x < lo {
        lo - x
    } else if x > hi {
        x - hi
    } else {
        0
    }
}

/// Integer twin of [`directed_to_boxes`]. Coordinates are scaled by the lcm
/// of all denominators times `2^MAX_BISECTIONS`, so every bisection stays
/// exact. `None` when the scaled values do not fit comfortably in `i128`.
fn directed_to_boxes_scaled(d: &CellSet, target: &BoxUnion, tolerance: &Rational) -> Option<(Rational, Rational)> {
    let n = d.dimension();
    if target.is_empty() || n > 16 {
        return None;
    }
    let coords = target.boxes().iter().flat_map(|b| b.min().iter().chain(b.max()));
    let scale: BigInt = lcm_denominators(coords.chain(std::iter::once(d.resolution()))) << MAX_BISECTIONS;
    let big_scale = Rational::from_integer(scale.clone());
    let to_int = |v: &Rational| (v * &big_scale).to_integer().to_i128();
    let lam = to_int(d.resolution())?;
    let mut boxes = Vec::with_capacity(target.len());
    for b in target.boxes() {
        let lo: Vec<i128> = b.min().iter().map(to_int).collect::<Option<_>>()?;
        let hi: Vec<i128> = b.max().iter().map(to_int).collect::<Option<_>>()?;
        boxes.push((lo, hi));
    }
    let reach = d.iter().flat_map(|h| h.iter()).map(|&v| v.unsigned_abs() as i128 + 1).max()?;
    let extent = boxes.iter().flat_map(|(lo, hi)| lo.iter().chain(hi)).map(|v| v.abs()).max()?;
    let magnitude = lam.checked_mul(reach)?.max(extent);
    if magnitude.checked_mul(4 * n as i128)? > 1i128 << 120 {
        return None;
    }
    let tol = (tolerance * &big_scale).floor().to_integer().to_i128()?;

    let vertex_count = 1usize << n;
    let bounds = |qmin: &[i128], qmax: &[i128], nearest: &mut Vec<i128>| -> (i128, i128) {
        nearest.clear();
        nearest.resize(vertex_count, i128::MAX);
        let mut upper = i128::MAX;
        for (lo, hi) in &boxes {
            let mut worst = 0;
            for (mask, near) in nearest.iter_mut().enumerate() {
                let dist: i128 = (0..n)
                    .map(|i| axis_gap(if mask >> i & 1 == 1 { qmax[i] } else { qmin[i] }, lo[i], hi[i]))
                    .sum();
                *near = (*near).min(dist);
                worst = worst.max(dist);
            }
            upper = upper.min(worst);
        }
        (nearest.iter().copied().max().unwrap_or(0), upper)
    };

    let mut nearest = Vec::with_capacity(vertex_count);
    let mut lower = 0i128;
    let mut settled = 0i128;
    let mut pending: Vec<(Vec<i128>, Vec<i128>, i128, u32)> = Vec::new();
    for h in d.iter() {
        let qmin: Vec<i128> = h.iter().map(|&v| lam * v as i128).collect();
        let qmax: Vec<i128> = qmin.iter().map(|v| v + lam).collect();
        let (lo, up) = bounds(&qmin, &qmax, &mut nearest);
        lower = lower.max(lo);
        pending.push((qmin, qmax, up, 0));
    }
    while let Some((qmin, qmax, up, depth)) = pending.pop() {
        if up <= lower + tol || depth == MAX_BISECTIONS {
            settled = settled.max(up);
            continue;
        }
        let mid: Vec<i128> = qmin.iter().zip(&qmax).map(|(a, b)| (a + b) / 2).collect();
        for mask in 0..vertex_count {
            let (hmin, hmax): (Vec<i128>, Vec<i128>) = (0..n)
                .map(|i| if mask >> i & 1 == 1 { (mid[i], qmax[i]) } else { (qmin[i], mid[i]) })
                .unzip();
            let (lo, up) = bounds(&hmin, &hmax, &mut nearest);
            lower = lower.max(lo);
            pending.push((hmin, hmax, up, depth + 1));
        }
    }
    let upper = settled.max(lower);
    Some((
        Rational::new(BigInt::from(lower), scale.clone()),
        Rational::new(BigInt::from(upper), scale),
    ))
}

/// `λⁿ·|D(λ)|`.
pub fn boundary_volume(shape: &Shape, lambda: &Rational) -> Result<Rational> {
    let d = boundary_region(shape, lambda)?;
    Ok(pow(lambda, d.dimension()) * rat(d.len() as i64))
}

/// Checks that every point of `points` inside the shape is covered by `X_λ`.
pub fn covers_points(shape: &Shape, pixellation: &CellSet, points: &[Vec<Rational>]) -> Result<bool> {
    for p in points {
        check_dim(shape.dimension(), p.len())?;
    }
    Ok(points
        .iter()
        .filter(|p| shape.contains_point(p))
        .all(|p| pixellation.contains_point(p)))
}
