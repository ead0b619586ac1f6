//! Exact lattice-theoretic computations for moduli spaces of OG10 type.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: integral Gram lattices, kernels, orthogonal complements.
//! * [`mukai`]: the rank-3 algebraic Mukai lattice of a Picard-rank-1 K3
//!   surface and metadata for moduli spaces with Mukai vector `m·v0`.
//! * [`walls`]: spherical-class enumeration and the nef/movable chamber
//!   structure of the Néron–Severi lattice.
//! * [`fujiki`]: exact expansion of the Fujiki relation.
//! * [`mordell_weil`]: Shioda–Tate rank arithmetic.
//! * [`golden`]: the reproduction suite for the reference values.
//!
//! All arithmetic is done with arbitrary-precision integers and rationals.

#![allow(clippy::needless_range_loop)]

pub mod conic;
pub mod error;
pub mod fujiki;
pub mod golden;
pub mod lattice;
pub mod mordell_weil;
pub mod mukai;
pub mod num;
pub mod poly;
pub mod walls;

pub use error::{Error, Result};
pub use fujiki::{
    full_table, solve_gram, top_intersection, BBForm, GramSolution, GramTemplate,
    IntersectionConstraint, IntersectionTable,
};
pub use lattice::{GramLattice, LatticeVector};
pub use mordell_weil::{
    jx_rank_report, mw_rank_of_jx, rho_of_j, shioda_tate_rank, CubicFourfoldHodgeData,
    FibrationData, JxRankReport,
};
pub use mukai::{
    moduli_report, mukai_pair, tensor_by_polarization, K3Context, ModuliReport, MukaiVector,
};
pub use walls::{chamber_report, enumerate_constrained_spherical, ChamberReport, WallClass};
