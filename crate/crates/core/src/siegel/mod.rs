//! Siegel spaces: the disk model, the upper half space model, and the
//! Cayley transform joining them.

pub mod cayley;
pub mod disk;
pub mod upper;

pub use cayley::{cayley, cayley_inv};
pub use disk::{DiskAutomorphism, SiegelDiskPoint};
pub use upper::{SymplecticMatrix, UpperHalfPoint};
