//! Monte-Carlo estimation of `∫ V′_k(gX ∩ I) dg` over Bₙ × ℝⁿ.
//!
//! For every group element the translation integrand vanishes outside the
//! bounding box `B_h` of the hit set, so `B_h` is sampled uniformly at dyadic
//! points. Each sample is valued exactly; only the running means use floats.
//! Samples are drawn in blocks, each with its own ChaCha stream selected by
//! `(element, block)`, and partial moments are merged in a fixed order, so
//! the estimate does not depend on thread scheduling.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::lattice::{enumerate_coordinate_subspaces, enumerate_hyperoctahedral, CellSet, RatBox, SignedPerm};
use crate::rational::{to_f64, Rational};
use crate::valuations::intrinsic_volumes_boxunion;

use super::{clip_translate, kinematic_rhs};

/// Bits of each sample coordinate: `q = lo + (hi − lo)·(2u + 1)/2^{B+1}`.
pub const SAMPLE_BITS: u32 = 24;

const BLOCK: u64 = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct MCEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    /// Samples per group element.
    pub samples: u64,
    pub seed: u64,
    pub exact_rhs: Rational,
}

impl MCEstimate {
    /// `(estimate − rhs)/standard_error`; zero when both agree exactly.
    /// `(estimate − rhs) / stderr`. The error is floored at float rounding
    /// of the rhs, so a zero-variance integrand scores 0 instead of ±∞.
    pub fn z_score(&self) -> f64 {
        let rhs = to_f64(&self.exact_rhs);
        let diff = self.estimate - rhs;
        let floor = 1e-12 * rhs.abs().max(1.0);
        diff / self.standard_error.max(floor)
    }

    pub fn within(&self, sigmas: f64) -> bool {
        self.z_score().abs() <= sigmas
    }

    pub fn relative_error(&self) -> f64 {
        let r = to_f64(&self.exact_rhs);
        if r == 0.0 {
            self.estimate.abs()
        } else {
            ((self.estimate - r) / r).abs()
        }
    }
}

/// Count, mean and centered second moment of a batch.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0.0 {
            return other;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + d * other.count / count,
            m2: self.m2 + other.m2 + d * d * self.count * other.count / count,
        }
    }

    fn variance(&self) -> f64 {
        if self.count < 2.0 {
            0.0
        } else {
            self.m2 / (self.count - 1.0)
        }
    }
}

/// Sampling domain for one group element.
struct Element {
    gx: CellSet,
    lo: Vec<Rational>,
    hi: Vec<Rational>,
    volume: f64,
    kernel: Option<Kernel>,
}

/// Integer evaluation of `V′_k((gX + q) ∩ I)`. All coordinates are scaled by
/// a common `D` so that cell corners, `I` and every sample are integers.
struct Kernel {
    k: usize,
    first: Vec<i64>,
    extent: Vec<usize>,
    cells: Vec<Vec<usize>>,
    lam: i128,
    imin: Vec<i128>,
    imax: Vec<i128>,
    lo: Vec<i128>,
    step: Vec<i128>,
    /// Axes and index strides of each k-subspace.
    subspaces: Vec<(Vec<usize>, Vec<usize>, usize)>,
    #[cfg(test)]
    scale: BigInt,
    scale_k: f64,
}

fn scaled(v: &Rational, d: &BigInt) -> Option<i128> {
    let s = v * Rational::from_integer(d.clone());
    if !s.is_integer() {
        return None;
    }
    s.to_integer().to_i128()
}

impl Kernel {
    fn new(gx: &CellSet, i: &RatBox, lo: &[Rational], hi: &[Rational], k: usize) -> Option<Kernel> {
        let n = gx.dimension();
        let (first, last) = gx.index_bounds()?;
        let mut d0 = gx.resolution().denom().clone();
        for v in i.min().iter().chain(i.max()) {
            d0 = d0.lcm(v.denom());
        }
        let d = &d0 * (BigInt::one() << (SAMPLE_BITS + 1));
        let lam = scaled(gx.resolution(), &d)?;
        let mut imin = Vec::with_capacity(n);
        let mut imax = Vec::with_capacity(n);
        let mut lo_s = Vec::with_capacity(n);
        let mut step = Vec::with_capacity(n);
        for axis in 0..n {
            imin.push(scaled(&i.min()[axis], &d)?);
            imax.push(scaled(&i.max()[axis], &d)?);
            lo_s.push(scaled(&lo[axis], &d)?);
            step.push(scaled(&(&hi[axis] - &lo[axis]), &d0)?);
        }
        let extent: Vec<usize> = (0..n).map(|a| (last[a] - first[a] + 1) as usize).collect();
        let cells = gx
            .iter()
            .map(|h| (0..n).map(|a| (h[a] - first[a]) as usize).collect())
            .collect();
        let subspaces = enumerate_coordinate_subspaces(n, k)
            .expect("k ≤ n")
            .into_iter()
            .map(|p| {
                let axes = p.axes().to_vec();
                let mut strides = vec![0; axes.len()];
                let mut size = 1usize;
                for (t, &a) in axes.iter().enumerate().rev() {
                    strides[t] = size;
                    size *= extent[a];
                }
                (axes, strides, size)
            })
            .collect();
        let scale_k = d.to_f64()?.powi(k as i32);
        // Products of k lengths must fit comfortably.
        let bound = (lam as f64).powi(k as i32) * gx.len() as f64 * 64.0;
        if !bound.is_finite() || bound > 1e36 {
            return None;
        }
        Some(Kernel {
            k,
            first,
            extent,
            cells,
            lam,
            imin,
            imax,
            lo: lo_s,
            step,
            subspaces,
            #[cfg(test)]
            scale: d.clone(),
            scale_k,
        })
    }

    fn eval(&self, u: &[u64], lens: &mut [Vec<i128>], stamps: &mut [Vec<u64>], tick: u64) -> f64 {
        self.eval_scaled(u, lens, stamps, tick) as f64 / self.scale_k
    }

    /// Value at sample `u` (odd numerators `2u + 1`) times `D^k`, reusing
    /// `lens` and `stamps`.
    fn eval_scaled(&self, u: &[u64], lens: &mut [Vec<i128>], stamps: &mut [Vec<u64>], tick: u64) -> i128 {
        let n = self.extent.len();
        for axis in 0..n {
            let q = self.lo[axis] + self.step[axis] * (2 * u[axis] as i128 + 1);
            for t in 0..self.extent[axis] {
                let a = (self.first[axis] + t as i64) as i128 * self.lam + q;
                let b = a + self.lam;
                let lo = a.max(self.imin[axis]);
                let hi = b.min(self.imax[axis]);
                lens[axis][t] = if hi < lo { -1 } else { hi - lo };
            }
        }
        let live = |c: &Vec<usize>| (0..n).all(|a| lens[a][c[a]] >= 0);
        if self.k == 0 {
            return i128::from(self.cells.iter().any(live));
        }
        let mut total: i128 = 0;
        for (s, (axes, strides, _)) in self.subspaces.iter().enumerate() {
            let stamp = &mut stamps[s];
            for c in self.cells.iter().filter(|c| live(c)) {
                let key: usize = axes.iter().zip(strides).map(|(&a, &st)| c[a] * st).sum();
                if stamp[key] == tick {
                    continue;
                }
                stamp[key] = tick;
                let mut prod: i128 = 1;
                for &a in axes {
                    prod *= lens[a][c[a]];
                }
                total += prod;
            }
        }
        total
    }
}

/// `q` for the dyadic sample `u` inside `[lo, hi]`.
fn sample_point(lo: &[Rational], hi: &[Rational], u: &[u64]) -> Vec<Rational> {
    let denom = BigInt::one() << (SAMPLE_BITS + 1);
    lo.iter()
        .zip(hi)
        .zip(u)
        .map(|((a, b), &ui)| a + (b - a) * Rational::new(BigInt::from(2 * ui + 1), denom.clone()))
        .collect()
}

/// Exact `V′_k((gX + q) ∩ I)` at the dyadic sample `u` of `[lo, hi]`.
pub fn sample_valuation_exact(
    x: &CellSet,
    g: &SignedPerm,
    i: &RatBox,
    lo: &[Rational],
    hi: &[Rational],
    u: &[u64],
    k: usize,
) -> Result<Rational> {
    let q = sample_point(lo, hi, u);
    Ok(intrinsic_volumes_boxunion(&clip_translate(x, g, &q, i)?)[k].clone())
}

fn element(x: &CellSet, g: &SignedPerm, i: &RatBox, k: usize) -> Element {
    let n = x.dimension();
    let gx = x.transform_cells(g, &vec![0; n]).expect("dimensions agree");
    let (first, last) = gx.index_bounds().expect("non-empty");
    let lam = gx.resolution().clone();
    let lo: Vec<Rational> = (0..n)
        .map(|a| &i.min()[a] - &lam * Rational::from_integer(BigInt::from(last[a] + 1)))
        .collect();
    let hi: Vec<Rational> = (0..n)
        .map(|a| &i.max()[a] - &lam * Rational::from_integer(BigInt::from(first[a])))
        .collect();
    let volume = to_f64(&lo.iter().zip(&hi).map(|(a, b)| b - a).product::<Rational>());
    let kernel = Kernel::new(&gx, i, &lo, &hi, k);
    Element {
        gx,
        lo,
        hi,
        volume,
        kernel,
    }
}

fn run_block(x: &CellSet, i: &RatBox, e: &Element, k: usize, seed: u64, elem: u64, block: u64, count: u64) -> Moments {
    let n = x.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((elem << 32) | block);
    let mut m = Moments::default();
    let mut u = vec![0u64; n];
    let (mut lens, mut stamps) = match &e.kernel {
        Some(kr) => (
            kr.extent.iter().map(|&s| vec![0i128; s]).collect::<Vec<_>>(),
            kr.subspaces.iter().map(|s| vec![u64::MAX; s.2]).collect::<Vec<_>>(),
        ),
        None => (Vec::new(), Vec::new()),
    };
    let id = SignedPerm::identity(n);
    for s in 0..count {
        for v in u.iter_mut() {
            *v = u64::from(rng.next_u32() >> (32 - SAMPLE_BITS));
        }
        let value = match &e.kernel {
            Some(kr) => kr.eval(&u, &mut lens, &mut stamps, s),
            None => to_f64(
                &sample_valuation_exact(&e.gx, &id, i, &e.lo, &e.hi, &u, k).expect("dimensions agree"),
            ),
        };
        m.push(value);
    }
    m
}

/// Runs `f` on a pool capped by `L1GEO_THREADS` when that is set.
pub(crate) fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let cap = std::env::var("L1GEO_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    match cap.filter(|&c| c > 0) {
        Some(c) => match rayon::ThreadPoolBuilder::new().num_threads(c).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

/// Estimates `∫_{Bₙ × ℝⁿ} V′_k(gX ∩ I) dg` with `samples` draws per group
/// element and compares against the closed form.
pub fn kinematic_higher_mc(x: &CellSet, i: &RatBox, k: usize, samples: u64, seed: u64) -> Result<MCEstimate> {
    let n = x.dimension();
    check_dim(n, i.dimension())?;
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("at least two samples per group element are needed".into()));
    }
    let exact_rhs = kinematic_rhs(x, i, k);
    if x.is_empty() {
        return Ok(MCEstimate {
            estimate: 0.0,
            standard_error: 0.0,
            samples,
            seed,
            exact_rhs,
        });
    }
    let group = enumerate_hyperoctahedral(n);
    let elements: Vec<Element> = group.iter().map(|g| element(x, g, i, k)).collect();
    let blocks = samples.div_ceil(BLOCK);
    let jobs: Vec<(usize, u64)> = (0..elements.len()).flat_map(|e| (0..blocks).map(move |b| (e, b))).collect();
    let partial: Vec<Moments> = with_thread_cap(|| {
        jobs.par_iter()
            .map(|&(e, b)| {
                let count = BLOCK.min(samples - b * BLOCK);
                run_block(x, i, &elements[e], k, seed, e as u64, b, count)
            })
            .collect()
    });
    let mut estimate = 0.0;
    let mut var = 0.0;
    for (e, el) in elements.iter().enumerate() {
        let m = partial[e * blocks as usize..(e + 1) * blocks as usize]
            .iter()
            .fold(Moments::default(), |acc, b| acc.merge(*b));
        estimate += el.volume * m.mean;
        var += el.volume * el.volume * m.variance() / m.count;
    }
    let size = elements.len() as f64;
    Ok(MCEstimate {
        estimate: estimate / size,
        standard_error: var.sqrt() / size,
        samples,
        seed,
        exact_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn cs(cells: &[&[i64]]) -> CellSet {
        CellSet::from_cells(cells[0].len(), rat(1), cells.iter().map(|c| c.to_vec())).unwrap()
    }

    #[test]
    fn kernel_matches_exact_valuation() {
        let x = CellSet::from_cells(2, ratio(1, 2), vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 1]]).unwrap();
        let i = RatBox::new(vec![ratio(-1, 3), rat(0)], vec![ratio(4, 5), ratio(3, 2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for g in enumerate_hyperoctahedral(2) {
            for k in 0..=2 {
                let e = element(&x, &g, &i, k);
                let kr = e.kernel.as_ref().expect("small inputs fit the integer kernel");
                let mut lens: Vec<Vec<i128>> = kr.extent.iter().map(|&s| vec![0; s]).collect();
                let mut stamps: Vec<Vec<u64>> = kr.subspaces.iter().map(|s| vec![u64::MAX; s.2]).collect();
                for t in 0..40 {
                    let u: Vec<u64> = (0..2).map(|_| u64::from(rng.next_u32() >> 8)).collect();
                    let fast = kr.eval_scaled(&u, &mut lens, &mut stamps, t);
                    let fast = Rational::new(BigInt::from(fast), kr.scale.pow(k as u32));
                    let exact = sample_valuation_exact(&x, &g, &i, &e.lo, &e.hi, &u, k).unwrap();
                    assert_eq!(fast, exact, "g={g} k={k} u={u:?}");
                }
            }
        }
    }

    #[test]
    fn unit_cells_top_degree() {
        let cell = cs(&[&[0, 0]]);
        let i = RatBox::from_sides(&[rat(1), rat(1)]).unwrap();
        let est = kinematic_higher_mc(&cell, &i, 2, 20_000, 3).unwrap();
        assert_eq!(est.exact_rhs, rat(1));
        assert!(est.within(4.0), "{est:?}");
    }

    #[test]
    fn reproducible() {
        let x = cs(&[&[0, 0], &[1, 0], &[0, 1]]);
        let i = RatBox::from_sides(&[ratio(3, 2), rat(1)]).unwrap();
        let a = kinematic_higher_mc(&x, &i, 1, 5000, 42).unwrap();
        let b = kinematic_higher_mc(&x, &i, 1, 5000, 42).unwrap();
        assert_eq!(a, b);
        let c = kinematic_higher_mc(&x, &i, 1, 5000, 43).unwrap();
        assert_ne!(a.estimate, c.estimate);
    }

    #[test]
    fn empty_and_errors() {
        let empty = CellSet::new(2, rat(1)).unwrap();
        let i = RatBox::from_sides(&[rat(1), rat(1)]).unwrap();
        let est = kinematic_higher_mc(&empty, &i, 1, 10, 0).unwrap();
        assert_eq!(est.estimate, 0.0);
        assert_eq!(est.exact_rhs, rat(0));
        assert!(kinematic_higher_mc(&cs(&[&[0, 0]]), &i, 1, 1, 0).is_err());
        assert!(kinematic_higher_mc(&cs(&[&[0, 0]]), &i, 3, 10, 0).is_err());
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..100).map(|v| (v as f64 * 0.37).sin()).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&v| whole.push(v));
        let mut a = Moments::default();
        let mut b = Moments::default();
        xs[..37].iter().for_each(|&v| a.push(v));
        xs[37..].iter().for_each(|&v| b.push(v));
        let merged = a.merge(b);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.variance() - whole.variance()).abs() < 1e-12);
    }
}
