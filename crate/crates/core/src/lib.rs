//! Noisy QAOA simulation for weighted Max-Cut.
//!
//! State-vector and density-matrix kernels, single-qubit Kraus channels, the
//! alternating-operator circuit, parameter-shift and adjoint gradients, and
//! batch studies of how noise degrades fidelity, cost and gradients.

pub mod error;
pub mod experiments;
pub mod gradopt;
pub mod io;
pub mod maxcut;
pub mod noise;
pub mod qaoa;
pub mod rng;
pub mod statevector;

pub use error::{Error, Result};
pub use gradopt::{
    adjoint_gradient, finite_difference_gradient, gradient_descent, param_distance, random_init,
    shift_rule_gradient, DescentOptions, Evaluator, Gradient, GradientMethod, OptimizationTrace,
};
pub use maxcut::{brute_force_ground, problem_hamiltonian, GroundState, ProblemHamiltonian, WeightedGraph};
pub use noise::{make_channel, noise_grid, validate_cptp, ChannelKind, NoiseChannel};
pub use qaoa::{build_circuit, cost_exact, cost_sampled, output_fidelity, GateSequence, QaoaParams};
pub use statevector::{DensityMatrix, GateOp, StateVector};
