//! Planted weighted MAX-2-SAT instances built from frustrated loops.
//!
//! The canonical problem form is a bipartite Ising model (an "RBM instance"):
//!
//! ```text
//! E(v, h) = -( Σᵢⱼ Wᵢⱼ vᵢ hⱼ + Σᵢ aᵢ vᵢ + Σⱼ bⱼ hⱼ ),   v ∈ {±1}ⁿ, h ∈ {±1}ᵐ
//! ```
//!
//! Instances are generated in the gauged frame (ground state all `+1`) by summing
//! length-4 frustrated cycles ("loop atoms") and are then moved onto a random
//! planted state with a gauge transformation, so the optimum is known exactly.
//!
//! Modules:
//!
//! - [`rbm`]: instance and spin types, energies, gauge transformations, the
//!   switching-subset metric, the frustration index and an exact brute-force oracle.
//! - [`convert`]: MAX-2-SAT ↔ QUBO ↔ bipartite QUBO ↔ Ising conversions, ghost
//!   spins, DIMACS `wcnf` and the JSON instance format.
//! - [`generate`]: the random and structured frustrated-loop generators and the
//!   uniform-weight MAX-2-SAT mode.
//! - [`solve`]: the simulated-annealing reference solver with restarts.
//! - [`bench`]: time-to-solution statistics, sweep-schedule fits, density scans
//!   and scaling fits.
//! - [`analyze`]: closed-form predictors (intersections, local minima, gap
//!   variance, local-field dispersion).
//! - [`cli`]: the `loopgen` command line.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod analyze;
pub mod bench;
pub mod cli;
pub mod convert;
mod error;
pub mod generate;
pub mod rbm;
pub mod rng;
pub mod solve;

pub use error::{Error, Result};
pub use generate::{GenMode, GenParams, LoopAtom};
pub use rbm::{InstanceMeta, RbmInstance, SpinState, SwitchingSubset, WeightMatrix};
pub use solve::{AnnealSchedule, TtsRecord};
