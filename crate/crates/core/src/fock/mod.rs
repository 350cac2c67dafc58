//! The level-two Fock module: bosons `a_n`, Neveu–Schwarz fermions `b_r`
//! and the zero modes `Q`, `P`, graded by degree.

mod basis;
mod ops;
mod state;
mod vector;

pub use basis::{enumerate_basis, fermion_sets, partitions, sector_basis, sectors, Sector, Truncation};
pub use ops::{MomentumOp, Oscillators};
pub use state::{FockState, Half, StateError};
pub use vector::FockVector;
