//! Verification suites over seeded random instances.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::convexity::{first_unreachable_pair, is_l1_convex, is_l1_convex_cubical, is_orthogonally_convex, split_halves};
use crate::error::{Error, Result};
use crate::integral::{
    crofton_integral, kinematic_higher_mc, kinematic_principal, kubota_sum, steiner_check, with_thread_cap,
};
use crate::lattice::{enumerate_coordinate_subspaces, enumerate_hyperoctahedral, union_volume, CellSet};
use crate::pixellation::{boundary_volume, covers_points, outer_pixellate, shape_hausdorff, Shape};
use crate::rational::{format_rational, pow, rat, ratio, Rational};
use crate::valuations::{intrinsic_volumes_boxunion, intrinsic_volumes_cellset, intrinsic_volumes_cubical, IVVector};

use super::generate::{gen_with_rng, non_convex_pair, random_box, random_convex_shape, GenConfig, GenMode};
use super::report::{Outcome, Record, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Steiner,
    Crofton,
    Kubota,
    Kinematic,
    Algebra,
    Valuation,
    Pixellation,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Steiner,
        Suite::Crofton,
        Suite::Kubota,
        Suite::Kinematic,
        Suite::Algebra,
        Suite::Valuation,
        Suite::Pixellation,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Steiner => "steiner",
            Suite::Crofton => "crofton",
            Suite::Kubota => "kubota",
            Suite::Kinematic => "kinematic",
            Suite::Algebra => "algebra",
            Suite::Valuation => "valuation",
            Suite::Pixellation => "pixellation",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub dimensions: Vec<usize>,
    pub instances: usize,
    pub seed: u64,
    /// MC samples per group element (kinematic suite).
    pub samples: u64,
    /// Generator box side, in cells.
    pub bound: i64,
}

impl VerifyConfig {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            dimensions: vec![2, 3],
            instances: 20,
            seed: 0,
            samples: 2000,
            bound: 4,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dimensions.is_empty() || self.dimensions.iter().any(|&n| n == 0 || n > 4) {
            return Err(Error::InvalidArgument("dimensions must be between 1 and 4".into()));
        }
        if self.bound < 1 {
            return Err(Error::InvalidArgument("bound must be at least 1".into()));
        }
        if self.suite == Suite::Kinematic && self.samples < 2 {
            return Err(Error::InvalidArgument("the kinematic suite needs at least 2 samples".into()));
        }
        Ok(())
    }
}

/// Pixellations larger than this skip the quadratic pairwise convexity check.
pub const PAIRWISE_LIMIT: usize = 20_000;

/// Instance `index` draws from its own ChaCha stream.
pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// A random convex set: generator mode, density and resolution vary.
pub fn random_instance(n: usize, bound: i64, rng: &mut impl Rng) -> Result<CellSet> {
    let mode = GenMode::ALL[rng.gen_range(0..GenMode::ALL.len())];
    let lambda = [rat(1), ratio(1, 2), ratio(2, 3)][rng.gen_range(0..3)].clone();
    let density = [0.1, 0.25, 0.4, 0.6][rng.gen_range(0..4)];
    let config = GenConfig::new(n, bound, density, mode)?.with_resolution(lambda);
    gen_with_rng(&config, rng)
}

fn random_instance_at(n: usize, bound: i64, lambda: &Rational, rng: &mut impl Rng) -> Result<CellSet> {
    let mode = GenMode::ALL[rng.gen_range(0..GenMode::ALL.len())];
    let density = [0.1, 0.25, 0.4, 0.6][rng.gen_range(0..4)];
    let config = GenConfig::new(n, bound, density, mode)?.with_resolution(lambda.clone());
    gen_with_rng(&config, rng)
}

/// A pair `(X, Y)` at a common resolution for the two-set identities. Every
/// fifth instance pairs a convex set with a non-convex one; two in five
/// split one convex set into overlapping slabs (so `X ∪ Y` is convex); the
/// rest are independent.
fn random_pair(index: usize, n: usize, bound: i64, rng: &mut impl Rng) -> Result<(CellSet, CellSet)> {
    let x = random_instance(n, bound, rng)?;
    let lambda = x.resolution().clone();
    let y = match index % 5 {
        0 => non_convex_pair(n, &lambda, rng),
        1 | 2 => {
            let (lo, hi) = x.index_bounds().expect("generators are non-empty");
            let axis = rng.gen_range(0..n);
            // Both slabs stay non-empty; a single layer must overlap.
            let overlap = if lo[axis] == hi[axis] { 1 } else { rng.gen_range(0..=1) };
            let t = rng.gen_range(lo[axis] + 1 - overlap..=hi[axis]);
            let upper = x.restrict_to_index_box(
                &(0..n).map(|i| if i == axis { t } else { i64::MIN / 4 }).collect::<Vec<_>>(),
                &vec![i64::MAX / 4; n],
            );
            let lower = x.restrict_to_index_box(
                &vec![i64::MIN / 4; n],
                &(0..n).map(|i| if i == axis { t - 1 + overlap } else { i64::MAX / 4 }).collect::<Vec<_>>(),
            );
            return Ok((upper, lower));
        }
        _ => random_instance_at(n, bound, &lambda, rng)?,
    };
    Ok((x, y))
}

struct Checks {
    index: usize,
    dimension: usize,
    records: Vec<Record>,
}

impl Checks {
    fn new(index: usize, dimension: usize) -> Self {
        Self {
            index,
            dimension,
            records: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, outcome: Outcome) {
        self.records.push(Record {
            name: name.to_string(),
            instance: self.index,
            dimension: self.dimension,
            outcome,
        });
    }

    fn property(&mut self, name: &str, holds: bool, detail: impl Into<String>) {
        self.push(name, Outcome::property(holds, detail));
    }

    fn skip(&mut self, name: &str, reason: impl Into<String>) {
        self.push(name, Outcome::Skipped { reason: reason.into() });
    }
}

fn ivs_leq(a: &IVVector, b: &IVVector) -> bool {
    a.values().iter().zip(b.values()).all(|(x, y)| x <= y)
}

fn add(a: &IVVector, b: &IVVector) -> Vec<Rational> {
    a.values().iter().zip(b.values()).map(|(x, y)| x + y).collect()
}

fn steiner_suite(c: &mut Checks, x: &CellSet) -> Result<()> {
    for k in 0..=x.dimension() {
        for m in 1..=3 {
            c.push(&format!("steiner k={k} m={m}"), Outcome::exact(&steiner_check(x, k, m)?));
        }
    }
    Ok(())
}

fn crofton_suite(c: &mut Checks, x: &CellSet) -> Result<()> {
    for k in 0..=x.dimension() {
        for j in 0..=k {
            c.push(&format!("crofton k={k} j={j}"), Outcome::exact(&crofton_integral(x, k, j)?));
        }
    }
    Ok(())
}

fn kubota_suite(c: &mut Checks, x: &CellSet) -> Result<()> {
    for k in 0..=x.dimension() {
        for j in 0..=k {
            c.push(&format!("kubota k={k} j={j}"), Outcome::exact(&kubota_sum(x, k, j)?));
        }
    }
    Ok(())
}

fn kinematic_suite(c: &mut Checks, x: &CellSet, rng: &mut impl Rng, config: &VerifyConfig) -> Result<()> {
    let i = random_box(x.dimension(), rng);
    c.push("kinematic principal", Outcome::exact(&kinematic_principal(x, &i)?));
    let mc_seed = config.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(c.index as u64);
    for k in 0..=x.dimension() {
        let est = kinematic_higher_mc(x, &i, k, config.samples, mc_seed)?;
        c.push(&format!("kinematic mc k={k}"), Outcome::monte_carlo(&est));
    }
    Ok(())
}

fn algebra_suite(c: &mut Checks, rng: &mut impl Rng, config: &VerifyConfig) -> Result<()> {
    let n = c.dimension;
    let (x, y) = random_pair(c.index, n, config.bound, rng)?;
    let x_ok = is_l1_convex(&x).is_convex;
    let y_ok = is_l1_convex(&y).is_convex;
    let union = x.union(&y)?;
    let union_ok = is_l1_convex(&union).is_convex;
    let meet = x.faces().intersection(&y.faces())?;

    if x_ok && y_ok && union_ok {
        let verdict = is_l1_convex_cubical(&meet);
        c.property("cup-cap", verdict.is_convex, format!("|X∩Y| = {} faces", meet.len()));
    } else {
        c.skip("cup-cap", format!("precondition: X {x_ok}, Y {y_ok}, X∪Y {union_ok}"));
    }

    if union_ok {
        let extents: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        let lhs = meet.dilate(&extents)?;
        let rhs = x.faces().dilate(&extents)?.intersection(&y.faces().dilate(&extents)?)?;
        c.property("distributivity", lhs == rhs, format!("extents {extents:?}"));
        let mut same = true;
        for k in 1..n {
            for p in enumerate_coordinate_subspaces(n, k)? {
                let lhs = meet.project(&p)?;
                let rhs = x.faces().project(&p)?.intersection(&y.faces().project(&p)?)?;
                same &= lhs == rhs;
            }
        }
        c.property("projection distributivity", same, "all proper coordinate subspaces");
    } else {
        c.skip("distributivity", "precondition: X∪Y not convex");
        c.skip("projection distributivity", "precondition: X∪Y not convex");
    }

    // Single-set properties of the convex member.
    let z = if x_ok { &x } else { &y };
    if !x_ok && !y_ok {
        return Ok(());
    }
    let (lo, hi) = z.index_bounds().expect("non-empty");
    let a: Vec<i64> = (0..n).map(|i| rng.gen_range(lo[i] - 1..=hi[i])).collect();
    let b: Vec<i64> = (0..n).map(|i| rng.gen_range(a[i]..=hi[i] + 1)).collect();
    let window = CellSet::from_cells(n, z.resolution().clone(), {
        let mut cells = Vec::new();
        let ranges: Vec<Vec<i64>> = (0..n).map(|i| (a[i]..=b[i]).collect()).collect();
        crate::lattice::for_each_offset(&ranges, &mut |h| cells.push(h.to_vec()));
        cells
    })?;
    let cut = z.faces().intersection(&window.faces())?;
    let index_cut = z.restrict_to_index_box(&a, &b);
    c.property(
        "interval intersection",
        is_l1_convex_cubical(&cut).is_convex && is_l1_convex(&index_cut).is_convex,
        format!("window {a:?}..={b:?}"),
    );

    let mut proj_ok = true;
    for k in 1..n {
        for p in enumerate_coordinate_subspaces(n, k)? {
            proj_ok &= is_l1_convex(&z.project(&p)?).is_convex;
        }
    }
    c.property("projection", proj_ok, "all proper coordinate subspaces");
    c.property("orthogonal convexity", is_orthogonally_convex(z), "");

    let extents: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
    let grown = z.dilate(&extents, &vec![0; n])?;
    let fine = z.subdivide(2)?.dilate(&extents, &vec![0; n])?;
    c.property(
        "minkowski",
        is_l1_convex(&grown).is_convex && is_l1_convex(&fine).is_convex,
        format!("extents {extents:?} at λ and λ/2"),
    );

    let other = if x_ok { &y } else { &x };
    let lhs = z.union(other)?.dilate(&extents, &vec![0; n])?;
    let rhs = grown.union(&other.dilate(&extents, &vec![0; n])?)?;
    c.property("minkowski over union", lhs == rhs, format!("extents {extents:?}"));

    let axis = rng.gen_range(0..n);
    let t = rng.gen_range(lo[axis]..=hi[axis] + 1);
    let (plus, minus) = split_halves(z, axis, t)?;
    let seam = plus.faces().intersection(&minus.faces())?;
    c.property(
        "split halves",
        is_l1_convex(&plus).is_convex && is_l1_convex(&minus).is_convex && is_l1_convex_cubical(&seam).is_convex,
        format!("axis {axis}, threshold {t}"),
    );

    let unreachable = first_unreachable_pair(z);
    c.property(
        "monotone reachability",
        unreachable.is_none(),
        unreachable.map_or_else(String::new, |(p, q)| format!("{p:?} -> {q:?}")),
    );
    Ok(())
}

fn valuation_suite(c: &mut Checks, rng: &mut impl Rng, config: &VerifyConfig) -> Result<()> {
    let n = c.dimension;
    let (x, y) = random_pair(c.index, n, config.bound, rng)?;
    let x_ok = is_l1_convex(&x).is_convex;
    let y_ok = is_l1_convex(&y).is_convex;
    let union = x.union(&y)?;
    let meet = x.faces().intersection(&y.faces())?;
    let union_ok = is_l1_convex(&union).is_convex;
    let meet_ok = is_l1_convex_cubical(&meet).is_convex;
    let vx = intrinsic_volumes_cellset(&x);
    if x_ok && y_ok && union_ok && meet_ok {
        let lhs = add(&intrinsic_volumes_cellset(&union), &intrinsic_volumes_cubical(&meet));
        let rhs = add(&vx, &intrinsic_volumes_cellset(&y));
        c.property("additivity", lhs == rhs, "");
    } else {
        c.skip("additivity", format!("precondition: X {x_ok}, Y {y_ok}, X∪Y {union_ok}, X∩Y {meet_ok}"));
    }
    if !x_ok {
        return Ok(());
    }

    let group = enumerate_hyperoctahedral(n);
    let g = &group[rng.gen_range(0..group.len())];
    let offset: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
    let moved = x.transform_cells(g, &offset)?;
    c.property("isometry invariance", intrinsic_volumes_cellset(&moved) == vx, format!("g = {g}"));

    let m = rng.gen_range(2..=3u32);
    let scaled = intrinsic_volumes_cellset(&x.scale(m)?);
    let homogeneous = (0..=n).all(|i| scaled[i] == &vx[i] * pow(&rat(i64::from(m)), i));
    c.property("homogeneity", homogeneous, format!("scale by {m}"));
    c.property("subdivision invariance", intrinsic_volumes_cellset(&x.subdivide(m)?) == vx, format!("m = {m}"));
    c.property("top degree", vx[n] == union_volume(&x.to_box_union()), format_rational(&vx[n]));

    let position = rng.gen_range(0..=n);
    let embedded = intrinsic_volumes_boxunion(&x.embed(position)?);
    let mut padded = vx.values().to_vec();
    padded.push(Rational::from_integer(0.into()));
    c.property("embedding invariance", embedded.values() == padded.as_slice(), format!("new axis {position}"));

    let extents: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
    let bigger = intrinsic_volumes_cellset(&x.dilate(&extents, &vec![0; n])?);
    let (lo, hi) = x.index_bounds().expect("non-empty");
    let axis = rng.gen_range(0..n);
    let (plus, _) = split_halves(&x, axis, rng.gen_range(lo[axis]..=hi[axis]))?;
    c.property(
        "monotonicity",
        ivs_leq(&vx, &bigger) && ivs_leq(&intrinsic_volumes_cellset(&plus), &vx),
        "X ⊆ X + I and X⁺ ⊆ X",
    );

    let m_dim = rng.gen_range(1..=2);
    let other = random_instance_at(m_dim, config.bound, x.resolution(), rng)?;
    let prod = x.product(&other)?;
    c.property(
        "product formula",
        intrinsic_volumes_cellset(&prod) == vx.convolve(&intrinsic_volumes_cellset(&other)) && is_l1_convex(&prod).is_convex,
        format!("factor dimension {m_dim}"),
    );

    c.property(
        "cubical route",
        intrinsic_volumes_cubical(&x.faces()) == vx && intrinsic_volumes_boxunion(&x.to_box_union()) == vx,
        "",
    );
    Ok(())
}

/// Base resolution of the pixellation suite; refined by 3 and 9.
pub fn pixellation_base(n: usize) -> Rational {
    if n <= 2 {
        ratio(1, 2)
    } else {
        rat(1)
    }
}

fn pixellation_suite(c: &mut Checks, rng: &mut impl Rng) -> Result<()> {
    let n = c.dimension;
    let shape = random_convex_shape(n, rng)?;
    let kind = match shape {
        Shape::Ball { .. } => "ball",
        Shape::Boxes(_) => "boxes",
    };
    let base = pixellation_base(n);
    let lambdas = [base.clone(), &base / rat(3), &base / rat(9)];
    let factor = rat(1) - pow(&ratio(1, 3), n);
    let mut coarse_boundary: Option<Rational> = None;
    for lambda in &lambdas {
        let x = outer_pixellate(&shape, lambda)?;
        let tag = format!("{kind} λ={}", format_rational(lambda));
        if x.len() <= PAIRWISE_LIMIT {
            c.property("pixellation convex", is_l1_convex(&x).is_convex, format!("{tag}, {} cells", x.len()));
        } else {
            c.skip("pixellation convex", format!("{tag}: {} cells exceeds the pairwise limit", x.len()));
        }
        let bound = lambda * rat(n as i64);
        let (lo, hi) = shape_hausdorff(&shape, lambda, &(lambda / rat(64)))?;
        c.property(
            "hausdorff ≤ nλ",
            lo <= hi && hi <= bound,
            format!("{tag}: [{}, {}]", format_rational(&lo), format_rational(&hi)),
        );
        let points: Vec<Vec<Rational>> = (0..64)
            .map(|_| (0..n).map(|_| ratio(rng.gen_range(-60..=60), 17)).collect())
            .collect();
        c.property("containment", covers_points(&shape, &x, &points)?, tag.clone());
        let vol = boundary_volume(&shape, lambda)?;
        if let Some(prev) = &coarse_boundary {
            let limit = prev * &factor;
            c.property(
                "boundary shrinking",
                vol <= limit,
                format!("{tag}: {} ≤ {}", format_rational(&vol), format_rational(&limit)),
            );
        }
        coarse_boundary = Some(vol);
    }
    Ok(())
}

fn run_instance(config: &VerifyConfig, index: usize) -> Result<Vec<Record>> {
    let n = config.dimensions[index % config.dimensions.len()];
    let mut rng = instance_rng(config.seed, index);
    let mut c = Checks::new(index, n);
    match config.suite {
        Suite::Steiner => steiner_suite(&mut c, &random_instance(n, config.bound, &mut rng)?)?,
        Suite::Crofton => crofton_suite(&mut c, &random_instance(n, config.bound, &mut rng)?)?,
        Suite::Kubota => kubota_suite(&mut c, &random_instance(n, config.bound, &mut rng)?)?,
        Suite::Kinematic => {
            let x = random_instance(n, config.bound, &mut rng)?;
            kinematic_suite(&mut c, &x, &mut rng, config)?
        }
        Suite::Algebra => algebra_suite(&mut c, &mut rng, config)?,
        Suite::Valuation => valuation_suite(&mut c, &mut rng, config)?,
        Suite::Pixellation => pixellation_suite(&mut c, &mut rng)?,
    }
    Ok(c.records)
}

/// Runs a suite. Instances run in parallel; records keep instance order.
pub fn verify(config: &VerifyConfig) -> Result<Report> {
    config.validate()?;
    let start = Instant::now();
    let per_instance: Vec<Result<Vec<Record>>> =
        with_thread_cap(|| (0..config.instances).into_par_iter().map(|i| run_instance(config, i)).collect());
    let mut records = Vec::new();
    for r in per_instance {
        records.extend(r?);
    }
    Ok(Report::new(
        &format!("verify {}", config.suite),
        config,
        config.seed,
        records,
        start.elapsed().as_millis(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suite: Suite) -> VerifyConfig {
        VerifyConfig {
            instances: 6,
            samples: 200,
            ..VerifyConfig::new(suite)
        }
    }

    #[test]
    fn suites_pass_on_small_runs() {
        for suite in Suite::ALL {
            let mut config = small(suite);
            if suite == Suite::Kinematic {
                config.dimensions = vec![2];
            }
            let report = verify(&config).unwrap();
            let failures: Vec<String> = report.failures().map(|r| format!("{r:?}")).collect();
            assert!(report.pass, "{suite}: {failures:#?}");
            assert!(report.summary.checks > 0, "{suite}");
        }
    }

    #[test]
    fn algebra_skips_non_convex_inputs() {
        let report = verify(&small(Suite::Algebra)).unwrap();
        let skipped: Vec<&Record> = report
            .records
            .iter()
            .filter(|r| r.instance == 0 && r.name == "cup-cap")
            .collect();
        assert_eq!(skipped.len(), 1);
        assert!(matches!(skipped[0].outcome, Outcome::Skipped { .. }));
        assert!(report.pass);
    }

    #[test]
    fn deterministic_modulo_runtime() {
        let config = small(Suite::Steiner);
        let mut a = verify(&config).unwrap();
        let mut b = verify(&config).unwrap();
        a.runtime_ms = 0;
        b.runtime_ms = 0;
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut config = small(Suite::Kinematic);
        config.samples = 1;
        assert!(verify(&config).is_err());
        let mut config = small(Suite::Steiner);
        config.dimensions.clear();
        assert!(verify(&config).is_err());
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!("kubota".parse::<Suite>().unwrap(), Suite::Kubota);
    }
}
