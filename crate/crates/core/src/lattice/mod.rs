//! Exact representations of pixellated sets, boxes and box unions, and the
//! measure, projection, isometry and enumeration primitives built on them.

mod boxes;
mod cells;
mod cubical;
mod signed_perm;
mod subspace;

pub use boxes::{hausdorff_distance, point_box_distance, union_volume, BoxUnion, RatBox};
pub use cells::{cellset_boolean, BooleanOp, Cell, CellSet};
pub(crate) use cells::for_each_offset;
pub use cubical::CubicalSet;
pub use signed_perm::{enumerate_hyperoctahedral, SignedPerm};
pub use subspace::{enumerate_coordinate_subspaces, CoordSubspace};

use crate::rational::Rational;

/// Result of an operation that stays on the lattice only for aligned inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    Cells(CellSet),
    Boxes(BoxUnion),
}

impl Region {
    pub fn dimension(&self) -> usize {
        match self {
            Region::Cells(c) => c.dimension(),
            Region::Boxes(b) => b.dimension(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Region::Cells(c) => c.is_empty(),
            Region::Boxes(b) => b.is_empty(),
        }
    }

    pub fn to_box_union(&self) -> BoxUnion {
        match self {
            Region::Cells(c) => c.to_box_union(),
            Region::Boxes(b) => b.clone(),
        }
    }

    pub fn volume(&self) -> Rational {
        match self {
            Region::Cells(c) => c.volume(),
            Region::Boxes(b) => union_volume(b),
        }
    }

    pub fn into_cells(self) -> Option<CellSet> {
        match self {
            Region::Cells(c) => Some(c),
            Region::Boxes(_) => None,
        }
    }
}
