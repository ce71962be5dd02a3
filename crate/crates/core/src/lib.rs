//! Branched-cover towers over closed orientable 2-orbifolds, verified
//! exactly.
//!
//! The crate builds, for integers n > m >= 2, a tower of branched covers
//! over the four-cone torus `T(2,2,2m,2n)` and machine-checks its
//! combinatorial invariants: genus formulas, Riemann–Hurwitz
//! multiplicativity, regularity and deck groups, and non-equivalence of the
//! two 2mn-sheeted composites. An independent construction assembles the
//! same surfaces from equivariant piece decompositions and compares the
//! quotient signatures. On top of the tower, linear torus dynamics and a
//! word-level lifting pipeline verify that a power of any Anosov map lifts
//! through every arrow with pointwise-fixed cone fibers, and compute first
//! homology of the associated mapping tori.

pub mod abelian;
pub mod covers;
pub mod dynamics;
pub mod intmat;
pub mod lifting;
pub mod orbifold;
pub mod perm;
pub mod pieces;
pub mod schreier;
pub mod words;

pub use abelian::{AbElem, FiniteAbelianType};
pub use covers::{build_tower, CoverTower, MonodromyCover};
pub use orbifold::{OrbifoldSignature, Rational};
pub use perm::{PermGroup, Permutation};
