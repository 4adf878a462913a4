//! Ergodicity of step skew products driven by finite Markov chains.
//!
//! The crate decides irreducibility and strict irreducibility of finite
//! Markov kernels, decides ergodicity of the skew product
//! `T(w, x) = (S w, T_{w_0} x)` built from a kernel and a family of
//! measure-preserving permutations, constructs the standard non-ergodic
//! examples, and evaluates the limits of the random ergodic theorems both in
//! closed form and by simulation.
//!
//! Module map:
//!
//! * [`kernels`]: stochastic matrices, stationary distributions, reach sets,
//!   reverse kernels, deterministic sets, strict irreducibility.
//! * [`dynamics`]: finite measure spaces, measure-preserving maps, the
//!   family-invariant partition and conditional expectation.
//! * [`skew`]: the pair chain, skew-product ergodicity, invariant-function
//!   structure and the counterexample constructions.
//! * [`ergodic`]: path sampling, Birkhoff averages, expectation operators
//!   and convergence traces.
//! * [`oracles`]: brute-force and statistical oracles, instance generators.

pub mod dynamics;
pub mod ergodic;
pub mod graph;
pub mod kernels;
pub mod oracles;
pub mod partition;
pub mod skew;

pub use dynamics::{FiniteMeasureSpace, MeasurePreservingMap, TransformationFamily};
pub use kernels::{MarkovSpec, ProbVector, StochasticMatrix};
pub use partition::{Partition, StateSet};
pub use skew::{PairChain, SkewSystem};
