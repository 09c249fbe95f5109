//! Seeded generators for convex cell sets, intervals and shapes.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::convexity::{convexify, is_l1_convex};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_hyperoctahedral, BoxUnion, Cell, CellSet, RatBox};
use crate::pixellation::{outer_pixellate, Shape};
use crate::rational::{rat, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GenMode {
    /// Random seed cells, then [`convexify`].
    Convexify,
    /// Cells under a coordinatewise nondecreasing height function, then a
    /// random signed permutation of the axes.
    Staircase,
    /// Outer pixellation of a random ℓ1 ball.
    Ball,
}

impl GenMode {
    pub const ALL: [GenMode; 3] = [GenMode::Convexify, GenMode::Staircase, GenMode::Ball];
}

impl fmt::Display for GenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenMode::Convexify => "convexify",
            GenMode::Staircase => "staircase",
            GenMode::Ball => "ball",
        })
    }
}

impl FromStr for GenMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convexify" => Ok(GenMode::Convexify),
            "staircase" => Ok(GenMode::Staircase),
            "ball" => Ok(GenMode::Ball),
            other => Err(Error::InvalidArgument(format!("unknown generator mode {other:?}"))),
        }
    }
}

/// Parameters of [`gen_random_convex`]. Cells live in `[0, bound)ⁿ` before
/// any reflection; `density ∈ [0, 1]` scales how much of that box is used,
/// and density 0 always yields a single cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    pub dimension: usize,
    pub bound: i64,
    pub density_percent: u32,
    #[serde(serialize_with = "crate::rational::serialize_rational")]
    pub resolution: Rational,
    pub mode: GenMode,
}

impl GenConfig {
    pub fn new(dimension: usize, bound: i64, density: f64, mode: GenMode) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::InvalidArgument(format!("density {density} is outside [0, 1]")));
        }
        Ok(Self {
            dimension,
            bound,
            density_percent: (density * 100.0).round() as u32,
            resolution: rat(1),
            mode,
        })
    }

    pub fn with_resolution(mut self, lambda: Rational) -> Self {
        self.resolution = lambda;
        self
    }

    fn density(&self) -> f64 {
        f64::from(self.density_percent) / 100.0
    }
}

/// A seeded ℓ1-convex cell set. The result is checked before it is returned.
pub fn gen_random_convex(config: &GenConfig, seed: u64) -> Result<CellSet> {
    gen_with_rng(config, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn gen_with_rng(config: &GenConfig, rng: &mut impl Rng) -> Result<CellSet> {
    let n = config.dimension;
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if config.bound < 1 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    let x = match config.mode {
        GenMode::Convexify => gen_convexify(config, rng)?,
        GenMode::Staircase => gen_staircase(config, rng)?,
        GenMode::Ball => gen_ball(config, rng)?,
    };
    if !is_l1_convex(&x).is_convex {
        return Err(Error::InvalidArgument(format!("{} generator produced a non-convex set", config.mode)));
    }
    Ok(x)
}

fn scaled_extent(config: &GenConfig, rng: &mut impl Rng) -> i64 {
    let top = (config.density() * (config.bound - 1) as f64).floor() as i64;
    1 + rng.gen_range(0..=top)
}

fn gen_convexify(config: &GenConfig, rng: &mut impl Rng) -> Result<CellSet> {
    let n = config.dimension;
    let total = (config.bound as f64).powi(n as i32);
    let seeds = ((config.density() * total * 0.25).round() as usize).max(1);
    let seeds = if config.density() == 0.0 { 1 } else { seeds.max(2) };
    let mut x = CellSet::new(n, config.resolution.clone())?;
    for _ in 0..seeds {
        let h: Cell = (0..n).map(|_| rng.gen_range(0..config.bound)).collect();
        x.insert(h)?;
    }
    let bound = RatBox::from_sides(&vec![rat(config.bound) * &config.resolution; n])?;
    convexify(&x, &bound)
}

fn gen_staircase(config: &GenConfig, rng: &mut impl Rng) -> Result<CellSet> {
    let n = config.dimension;
    let extents: Vec<i64> = (0..n - 1).map(|_| scaled_extent(config, rng)).collect();
    let top = scaled_extent(config, rng);
    // Height = 1 + Σ steps_i[h_i] (clamped), each steps_i nondecreasing.
    let steps: Vec<Vec<i64>> = extents
        .iter()
        .map(|&e| {
            let mut acc = 0;
            (0..e)
                .map(|t| {
                    if t > 0 {
                        acc += rng.gen_range(0..=1);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let base = rng.gen_range(0..top);
    let mut x = CellSet::new(n, config.resolution.clone())?;
    let ranges: Vec<Vec<i64>> = extents.iter().map(|&e| (0..e).collect()).collect();
    let mut cells = Vec::new();
    crate::lattice::for_each_offset(&ranges, &mut |h| {
        let height = (1 + base + h.iter().zip(&steps).map(|(&v, s)| s[v as usize]).sum::<i64>()).min(top);
        for y in 0..height {
            let mut c = h.to_vec();
            c.push(y);
            cells.push(c);
        }
    });
    for c in cells {
        x.insert(c)?;
    }
    let group = enumerate_hyperoctahedral(n);
    let g = &group[rng.gen_range(0..group.len())];
    x.transform_cells(g, &vec![0; n])
}

fn gen_ball(config: &GenConfig, rng: &mut impl Rng) -> Result<CellSet> {
    let n = config.dimension;
    let lambda = &config.resolution;
    let shape = if config.density() == 0.0 {
        // Centered in cell 0 with radius λ/4: only that cube meets it.
        Shape::ball(vec![lambda * ratio(1, 2); n], lambda * ratio(1, 4))?
    } else {
        let center = (0..n)
            .map(|_| lambda * (rat(rng.gen_range(0..config.bound)) + ratio(rng.gen_range(0..8), 8)))
            .collect();
        let reach = config.density() * config.bound as f64 / 2.0;
        let sixteenths = rng.gen_range(0..=((reach * 16.0).round() as i64).max(1));
        Shape::ball(center, lambda * (ratio(1, 4) + ratio(sixteenths, 16)))?
    };
    outer_pixellate(&shape, lambda)
}

/// A random box with coordinates in sixths and sides in fifths.
pub fn random_box(n: usize, rng: &mut impl Rng) -> RatBox {
    let min: Vec<Rational> = (0..n).map(|_| ratio(rng.gen_range(-12..=12), 6)).collect();
    let max = min.iter().map(|m| m + ratio(rng.gen_range(1..=15), 5)).collect();
    RatBox::new(min, max).expect("positive sides")
}

/// A box with corners on the λ-lattice: `λ·∏[t_i, t_i + m_i]`.
pub fn random_aligned_box(n: usize, lambda: &Rational, max_extent: i64, rng: &mut impl Rng) -> RatBox {
    let t: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
    let m: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_extent)).collect();
    RatBox::new(
        t.iter().map(|&v| rat(v) * lambda).collect(),
        t.iter().zip(&m).map(|(&v, &e)| rat(v + e) * lambda).collect(),
    )
    .expect("non-negative extents")
}

/// A convex shape: a random ℓ1 ball, or a convex cell set pushed through a
/// positive diagonal scaling and a translation off the lattice. Both maps
/// preserve monotone paths, so the box union stays ℓ1-convex.
pub fn random_convex_shape(n: usize, rng: &mut impl Rng) -> Result<Shape> {
    if rng.gen_bool(0.5) {
        let center = (0..n).map(|_| ratio(rng.gen_range(-6..=6), 7)).collect();
        return Shape::ball(center, ratio(rng.gen_range(4..=12), 5));
    }
    let config = GenConfig::new(n, 3, 0.6, GenMode::ALL[rng.gen_range(0..3)])?;
    let x = gen_with_rng(&config, rng)?;
    let scale: Vec<Rational> = (0..n).map(|_| ratio(rng.gen_range(3..=10), 7)).collect();
    // Nonzero elevenths keep every face off the grids the suites refine to.
    let shift: Vec<Rational> = (0..n)
        .map(|_| {
            let j = rng.gen_range(1..=5);
            ratio(if rng.gen_bool(0.5) { j } else { -j }, 11)
        })
        .collect();
    let boxes = x
        .iter()
        .map(|h| {
            let b = x.cell_box(h);
            RatBox::new(
                (0..n).map(|i| &b.min()[i] * &scale[i] + &shift[i]).collect(),
                (0..n).map(|i| &b.max()[i] * &scale[i] + &shift[i]).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Shape::Boxes(BoxUnion::new(n, boxes)?))
}

/// A set failing the convexity check: two cells with an empty box between.
pub fn non_convex_pair(n: usize, lambda: &Rational, rng: &mut impl Rng) -> CellSet {
    let far: Cell = (0..n).map(|i| if i == 0 { 2 + rng.gen_range(0..3) } else { 0 }).collect();
    CellSet::from_cells(n, lambda.clone(), vec![vec![0; n], far]).expect("dimensions agree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_convex() {
        for mode in GenMode::ALL {
            for n in 1..=3 {
                for seed in 0..20 {
                    let config = GenConfig::new(n, 5, 0.4, mode).unwrap();
                    let a = gen_random_convex(&config, seed).unwrap();
                    let b = gen_random_convex(&config, seed).unwrap();
                    assert_eq!(a, b);
                    assert!(!a.is_empty());
                    assert!(is_l1_convex(&a).is_convex);
                }
            }
        }
    }

    #[test]
    fn zero_density_is_a_singleton() {
        for mode in GenMode::ALL {
            for seed in 0..5 {
                let config = GenConfig::new(2, 6, 0.0, mode).unwrap();
                assert_eq!(gen_random_convex(&config, seed).unwrap().len(), 1, "{mode}");
            }
        }
    }

    #[test]
    fn modes_parse() {
        for mode in GenMode::ALL {
            assert_eq!(mode.to_string().parse::<GenMode>().unwrap(), mode);
        }
        assert!("blob".parse::<GenMode>().is_err());
        assert!(GenConfig::new(2, 3, 1.5, GenMode::Ball).is_err());
    }

    #[test]
    fn shapes_and_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let s = random_convex_shape(2, &mut rng).unwrap();
            let x = outer_pixellate(&s, &ratio(1, 2)).unwrap();
            assert!(is_l1_convex(&x).is_convex);
            assert!(!is_l1_convex(&non_convex_pair(2, &rat(1), &mut rng)).is_convex);
        }
    }
}
