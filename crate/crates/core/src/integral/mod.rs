//! Steiner, Crofton, Kubota and kinematic formulas: exact evaluation of both
//! sides where the left side is a finite computation, Monte-Carlo otherwise.

mod mc;

pub(crate) use mc::with_thread_cap;
pub use mc::{kinematic_higher_mc, sample_valuation_exact, MCEstimate, SAMPLE_BITS};

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::lattice::{enumerate_coordinate_subspaces, enumerate_hyperoctahedral, union_volume, BoxUnion, CellSet, RatBox, SignedPerm};
use crate::rational::{binomial_rat, pow, rat, Rational};
use crate::valuations::{box_intrinsic_volumes, intrinsic_volumes_cellset};

/// Both sides of an identity, evaluated independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaCheck {
    pub lhs: Rational,
    pub rhs: Rational,
}

impl FormulaCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn check_index(index: usize, max: usize) -> Result<()> {
    if index > max {
        return Err(Error::IndexOutOfRange { index, max });
    }
    Ok(())
}

/// `V′_k(X + mλ·[0,1]ⁿ)` against `Σ_{i≤k} C(n−i, n−k)·V′ᵢ(X)·(mλ)^{k−i}`.
pub fn steiner_check(x: &CellSet, k: usize, m: u64) -> Result<FormulaCheck> {
    let n = x.dimension();
    check_index(k, n)?;
    if m == 0 {
        return Err(Error::InvalidArgument("dilation factor m must be positive".into()));
    }
    let grown = x.dilate(&vec![m; n], &vec![0; n])?;
    let lhs = intrinsic_volumes_cellset(&grown)[k].clone();
    let v = intrinsic_volumes_cellset(x);
    let r = x.resolution() * rat(m as i64);
    let rhs = (0..=k)
        .map(|i| binomial_rat(n - i, n - k) * &v[i] * pow(&r, k - i))
        .sum();
    Ok(FormulaCheck { lhs, rhs })
}

/// Slices of `x` by the flats parallel to `P` through the open cells of the
/// complementary grid, keyed by the complementary index.
pub fn crofton_slices(x: &CellSet, p: &crate::lattice::CoordSubspace) -> Result<Vec<(Vec<i64>, CellSet)>> {
    check_dim(x.dimension(), p.ambient())?;
    let q = p.complement();
    let mut groups: BTreeMap<Vec<i64>, Vec<Vec<i64>>> = BTreeMap::new();
    for h in x.iter() {
        groups.entry(q.project_point(h)).or_default().push(p.project_point(h));
    }
    groups
        .into_iter()
        .map(|(key, cells)| Ok((key, CellSet::from_cells(p.dim(), x.resolution().clone(), cells)?)))
        .collect()
}

/// `∫_{Graff(n,k)} V′ⱼ(X ∩ A) dA` against `C(n+j−k, j)·V′_{n+j−k}(X)`.
///
/// Flats lying in grid hyperplanes form a null set and are skipped; every
/// other flat parallel to `P` sees the slice of its open complementary cell.
pub fn crofton_integral(x: &CellSet, k: usize, j: usize) -> Result<FormulaCheck> {
    let n = x.dimension();
    check_index(k, n)?;
    check_index(j, k)?;
    let weight = pow(x.resolution(), n - k);
    let mut lhs = Rational::zero();
    for p in enumerate_coordinate_subspaces(n, k)? {
        for (_, slice) in crofton_slices(x, &p)? {
            lhs += &weight * &intrinsic_volumes_cellset(&slice)[j];
        }
    }
    let rhs = binomial_rat(n + j - k, j) * &intrinsic_volumes_cellset(x)[n + j - k];
    Ok(FormulaCheck { lhs, rhs })
}

/// `Σ_{P ∈ Gr(n,k)} V′ⱼ(π_P X)` against `C(n−j, n−k)·V′ⱼ(X)`.
pub fn kubota_sum(x: &CellSet, k: usize, j: usize) -> Result<FormulaCheck> {
    let n = x.dimension();
    check_index(k, n)?;
    check_index(j, k)?;
    let mut lhs = Rational::zero();
    for p in enumerate_coordinate_subspaces(n, k)? {
        lhs += &intrinsic_volumes_cellset(&x.project(&p)?)[j];
    }
    let rhs = binomial_rat(n - j, n - k) * &intrinsic_volumes_cellset(x)[j];
    Ok(FormulaCheck { lhs, rhs })
}

/// `{q : (gX + q) ∩ I ≠ ∅} = ⋃_{cells b of gX} (I − b)`.
pub fn hit_set(x: &CellSet, g: &SignedPerm, i: &RatBox) -> Result<BoxUnion> {
    check_dim(x.dimension(), i.dimension())?;
    let gx = x.transform_cells(g, &vec![0; x.dimension()])?;
    BoxUnion::new(
        x.dimension(),
        gx.iter().map(|h| i.difference_set(&gx.cell_box(h))).collect(),
    )
}

/// Measure of `{g : gX ∩ I ≠ ∅}` (probability on Bₙ times Lebesgue) against
/// `Σ_{i+j=n} C(n,i)⁻¹·V′ᵢ(X)·V′ⱼ(I)`.
pub fn kinematic_principal(x: &CellSet, i: &RatBox) -> Result<FormulaCheck> {
    let n = x.dimension();
    check_dim(n, i.dimension())?;
    let group = enumerate_hyperoctahedral(n);
    let mut total = Rational::zero();
    for g in &group {
        total += union_volume(&hit_set(x, g, i)?);
    }
    let lhs = total / rat(group.len() as i64);
    Ok(FormulaCheck {
        lhs,
        rhs: kinematic_rhs(x, i, 0),
    })
}

/// `Σ_{i+j=n+k} C(n,i)⁻¹·C(j,k)·V′ᵢ(X)·V′ⱼ(I)`.
pub fn kinematic_rhs(x: &CellSet, i: &RatBox, k: usize) -> Rational {
    let n = x.dimension();
    let vx = intrinsic_volumes_cellset(x);
    let vi = box_intrinsic_volumes(i);
    let mut acc = Rational::zero();
    for a in k..=n {
        let b = n + k - a;
        if b > n {
            continue;
        }
        acc += &vx[a] * &vi[b] * binomial_rat(b, k) / binomial_rat(n, a);
    }
    acc
}

/// `(g·Y + q) ∩ I`, one box per cube that meets `I`.
pub fn clip_translate(y: &CellSet, g: &SignedPerm, q: &[Rational], i: &RatBox) -> Result<BoxUnion> {
    let n = y.dimension();
    check_dim(n, g.dimension())?;
    check_dim(n, q.len())?;
    check_dim(n, i.dimension())?;
    BoxUnion::new(
        n,
        y.iter()
            .filter_map(|h| y.cell_box(h).transform(g, q).intersection(i))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::CoordSubspace;
    use crate::rational::ratio;
    use crate::valuations::intrinsic_volumes_boxunion;

    fn cs(cells: &[&[i64]]) -> CellSet {
        CellSet::from_cells(cells[0].len(), rat(1), cells.iter().map(|c| c.to_vec())).unwrap()
    }

    fn tromino() -> CellSet {
        cs(&[&[0, 0], &[1, 0], &[0, 1]])
    }

    fn unit_box(n: usize) -> RatBox {
        RatBox::from_sides(&vec![rat(1); n]).unwrap()
    }

    #[test]
    fn steiner_examples() {
        let c = steiner_check(&tromino(), 2, 1).unwrap();
        assert_eq!(c.lhs, rat(8));
        assert_eq!(c.rhs, rat(8));
        for n in 1..=3 {
            let cell = CellSet::from_cells(n, ratio(1, 2), vec![vec![0; n]]).unwrap();
            for m in 1..=3u64 {
                let c = steiner_check(&cell, n, m).unwrap();
                let expected = pow(&(ratio(1, 2) * rat(1 + m as i64)), n);
                assert_eq!(c.lhs, expected);
                assert_eq!(c.rhs, expected);
            }
        }
        let empty = CellSet::new(2, rat(1)).unwrap();
        assert_eq!(steiner_check(&empty, 1, 2).unwrap(), FormulaCheck { lhs: rat(0), rhs: rat(0) });
        assert!(steiner_check(&tromino(), 1, 0).is_err());
        assert!(steiner_check(&tromino(), 3, 1).is_err());
    }

    #[test]
    fn crofton_examples() {
        let c = crofton_integral(&tromino(), 1, 0).unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (rat(4), rat(4)));
        for j in 0..=2 {
            let c = crofton_integral(&tromino(), 2, j).unwrap();
            assert_eq!(c.lhs, intrinsic_volumes_cellset(&tromino())[j]);
            assert!(c.holds());
        }
        let empty = CellSet::new(3, rat(1)).unwrap();
        assert_eq!(crofton_integral(&empty, 2, 1).unwrap().lhs, rat(0));
        assert!(crofton_integral(&tromino(), 1, 2).is_err());
    }

    #[test]
    fn crofton_slices_of_tromino() {
        let x_axis = CoordSubspace::new(2, vec![0]).unwrap();
        let slices = crofton_slices(&tromino(), &x_axis).unwrap();
        let sizes: Vec<(Vec<i64>, usize)> = slices.iter().map(|(k, s)| (k.clone(), s.len())).collect();
        assert_eq!(sizes, vec![(vec![0], 2), (vec![1], 1)]);
    }

    #[test]
    fn kubota_examples() {
        let c = kubota_sum(&tromino(), 1, 1).unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (rat(4), rat(4)));
        let x = CellSet::from_cells(3, rat(1), vec![vec![0, 0, 0], vec![1, 0, 0]]).unwrap();
        for k in 0..=3 {
            let c = kubota_sum(&x, k, 0).unwrap();
            assert_eq!(c.lhs, binomial_rat(3, k));
            assert!(c.holds());
        }
    }

    #[test]
    fn kinematic_examples() {
        let cell = cs(&[&[0, 0]]);
        let c = kinematic_principal(&cell, &unit_box(2)).unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (rat(4), rat(4)));
        let empty = CellSet::new(2, rat(1)).unwrap();
        assert_eq!(kinematic_principal(&empty, &unit_box(2)).unwrap().lhs, rat(0));
        let point = RatBox::point(vec![ratio(1, 3), rat(2)]);
        let c = kinematic_principal(&tromino(), &point).unwrap();
        assert_eq!(c.lhs, rat(3));
        assert_eq!(c.rhs, rat(3));
    }

    #[test]
    fn higher_rhs_for_unit_cells() {
        let cell = cs(&[&[0, 0]]);
        assert_eq!(kinematic_rhs(&cell, &unit_box(2), 2), rat(1));
        assert_eq!(kinematic_rhs(&cell, &unit_box(2), 0), rat(4));
    }

    #[test]
    fn clip_translate_examples() {
        let g = SignedPerm::identity(2);
        let x = tromino();
        let big = RatBox::new(vec![rat(-1); 2], vec![rat(5); 2]).unwrap();
        let zero = vec![rat(0); 2];
        assert_eq!(clip_translate(&x, &g, &zero, &big).unwrap(), x.to_box_union());
        let far = vec![rat(10), rat(0)];
        assert!(clip_translate(&x, &g, &far, &unit_box(2)).unwrap().is_empty());
        let cell = cs(&[&[0, 0]]);
        let u = clip_translate(&cell, &g, &[ratio(1, 2), rat(0)], &unit_box(2)).unwrap();
        assert_eq!(u.boxes(), &[RatBox::new(vec![ratio(1, 2), rat(0)], vec![rat(1), rat(1)]).unwrap()]);
        assert_eq!(union_volume(&u), ratio(1, 2));
    }

    #[test]
    fn intersection_with_box_is_valuation_input() {
        let g = enumerate_hyperoctahedral(2)[5].clone();
        let i = RatBox::new(vec![rat(0), ratio(-1, 2)], vec![ratio(3, 2), ratio(1, 3)]).unwrap();
        let u = clip_translate(&tromino(), &g, &[ratio(1, 3), ratio(1, 5)], &i).unwrap();
        let v = intrinsic_volumes_boxunion(&u);
        assert_eq!(v[0], rat(1));
    }
}
