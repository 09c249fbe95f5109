//! ℓ1-intrinsic volumes `V′ᵢ(X) = Σ_{P ∈ Gr(n,i)} Volᵢ(π_P X)` and the
//! elementary valuations around them.

use std::fmt;
use std::ops::Index;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{enumerate_coordinate_subspaces, union_volume, BoxUnion, CellSet, CubicalSet, RatBox, Region};
use crate::rational::{format_rational, pow, rat, Rational};

/// `(V′₀, …, V′ₙ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IVVector {
    values: Vec<Rational>,
}

impl IVVector {
    pub fn new(values: Vec<Rational>) -> Self {
        assert!(!values.is_empty(), "an intrinsic volume vector has at least V′₀");
        Self { values }
    }

    pub fn zeros(dimension: usize) -> Self {
        Self {
            values: vec![Rational::zero(); dimension + 1],
        }
    }

    pub fn dimension(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, i: usize) -> Rational {
        self.values.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `V′_k(X × Y) = Σ_{i+j=k} V′ᵢ(X)·V′ⱼ(Y)`.
    pub fn convolve(&self, other: &IVVector) -> IVVector {
        let mut out = vec![Rational::zero(); self.values.len() + other.values.len() - 1];
        for (i, a) in self.values.iter().enumerate() {
            for (j, b) in other.values.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IVVector { values: out }
    }
}

impl Index<usize> for IVVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.values[i]
    }
}

impl fmt::Display for IVVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn indicator(nonempty: bool) -> Rational {
    if nonempty {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// The projected i-volume of a cell set is `λⁱ` times its number of distinct
/// projected cells.
pub fn intrinsic_volumes_cellset(x: &CellSet) -> IVVector {
    let n = x.dimension();
    let mut values = Vec::with_capacity(n + 1);
    values.push(indicator(!x.is_empty()));
    for i in 1..=n {
        if x.is_empty() {
            values.push(Rational::zero());
            continue;
        }
        let count: usize = enumerate_coordinate_subspaces(n, i)
            .expect("i ≤ n")
            .iter()
            .map(|p| x.projected_count(p))
            .sum();
        values.push(pow(x.resolution(), i) * rat(count as i64));
    }
    IVVector { values }
}

/// Projections re-measured with [`union_volume`].
pub fn intrinsic_volumes_boxunion(u: &BoxUnion) -> IVVector {
    let n = u.dimension();
    let mut values = Vec::with_capacity(n + 1);
    values.push(indicator(!u.is_empty()));
    for i in 1..=n {
        let mut acc = Rational::zero();
        if !u.is_empty() {
            for p in enumerate_coordinate_subspaces(n, i).expect("i ≤ n") {
                acc += union_volume(&u.project(&p).expect("same dimension"));
            }
        }
        values.push(acc);
    }
    IVVector { values }
}

/// Intrinsic volumes of a closed cubical set: the i-volume of a projection
/// is `λⁱ` times its number of i-dimensional faces.
pub fn intrinsic_volumes_cubical(c: &CubicalSet) -> IVVector {
    let n = c.dimension();
    let mut values = Vec::with_capacity(n + 1);
    values.push(indicator(!c.is_empty()));
    for i in 1..=n {
        let count: usize = enumerate_coordinate_subspaces(n, i)
            .expect("i ≤ n")
            .iter()
            .map(|p| c.projected_top_count(p))
            .sum();
        values.push(pow(c.resolution(), i) * rat(count as i64));
    }
    IVVector { values }
}

pub fn intrinsic_volumes(r: &Region) -> IVVector {
    match r {
        Region::Cells(c) => intrinsic_volumes_cellset(c),
        Region::Boxes(b) => intrinsic_volumes_boxunion(b),
    }
}

/// χ on ℓ1-convex sets: 1 when non-empty.
pub fn euler_characteristic(r: &Region) -> u8 {
    u8::from(!r.is_empty())
}

/// `(e₀, …, e_k)` of the lengths: coefficients of `∏(1 + uᵢt)`.
pub fn elementary_symmetric(lengths: &[Rational]) -> Result<Vec<Rational>> {
    if let Some(l) = lengths.iter().find(|l| **l < Rational::zero()) {
        return Err(Error::NegativeLength(format_rational(l)));
    }
    let mut e = vec![Rational::one()];
    for u in lengths {
        let mut next = e.clone();
        next.push(Rational::zero());
        for j in 1..next.len() {
            next[j] += u * &e[j - 1];
        }
        e = next;
    }
    Ok(e)
}

/// Intrinsic volumes of a box in closed form.
pub fn box_intrinsic_volumes(b: &RatBox) -> IVVector {
    IVVector {
        values: elementary_symmetric(&b.lengths()).expect("box lengths are non-negative"),
    }
}

/// `X × Y` for cell sets at a common resolution.
pub fn product(x: &CellSet, y: &CellSet) -> Result<CellSet> {
    x.product(y)
}
