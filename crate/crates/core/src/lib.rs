//! Spectral modularity community detection on two-community stochastic
//! block models, and the tools to observe its detectability phase
//! transition at `p* = √(p1·p2)`.
//!
//! The numeric modules are generic over [`Real`] (`f32` or `f64`); the
//! aliases at the bottom of this file fix the working precision used by the
//! sweep harness and the command-line tool.
//!
//! ```
//! use sbm_phase::{generate, leading_eigenpair, partition_by_sign, detectability};
//! use sbm_phase::{ModularityOperator64, SbmParams, SolverConfig64};
//!
//! let params = SbmParams::new(60, 60, 0.5, 0.5, 0.05).unwrap();
//! let sample = generate(&params, 1).unwrap();
//! let op = ModularityOperator64::new(&sample.graph).unwrap();
//! let eig = leading_eigenpair(&op, &SolverConfig64::default()).unwrap();
//! let pred = partition_by_sign(&eig.y).unwrap();
//! assert!(detectability(&pred.labels, &sample.truth).unwrap() > 0.9);
//! ```

pub mod detect;
pub mod eigen;
pub mod error;
pub mod estimator;
pub mod graph;
pub mod ingest;
pub mod modularity;
pub mod report;
pub mod rng;
pub mod sbm;
pub mod scalar;
pub mod transition;

pub use detect::{
    detectability, partition, partition_by_kmeans2, partition_by_sign, Partition, PartitionMethod,
};
pub use eigen::{
    dense_eigen_oracle, dense_spectrum_on_ones_complement, leading_eigenpair,
    leading_singular_value, DenseSpectrum, EigenMethod, EigenResult, SingularValue, SolverConfig,
};
pub use error::{Error, Result};
pub use estimator::{estimate, estimate_with, EdgeCounting, EmpiricalEstimates};
pub use graph::{swap_labels, Community, CutCounts, DegreeData, Graph};
pub use modularity::{
    dense_modularity, restricted_quadform, CommunityView, ModularityOperator, SymmetricOperator,
    DENSE_CAP,
};
pub use sbm::{generate, generate_cross_block, BinaryMatrix, SbmParams, SbmSample};
pub use scalar::Real;
pub use transition::{
    crossing_bracket, eigvec_entry_limits, intermediate_width, linear_grid,
    predicted_lambda_over_n, run_sweep, run_sweep_detailed, run_trial, subcritical_lambda_over_n,
    theoretical_threshold, theory_point, Crossing, DetailedSweep, SbmBase, SweepConfig,
    SweepRecord, TheoryPoint, TrialOutcome,
};

pub type DegreeData64 = DegreeData<f64>;
pub type ModularityOperator64<'g> = ModularityOperator<'g, f64>;
pub type CommunityView64 = CommunityView<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type EigenResult64 = EigenResult<f64>;
pub type SingularValue64 = SingularValue<f64>;
pub type TheoryPoint64 = TheoryPoint<f64>;
pub type SweepConfig64 = SweepConfig<f64>;
pub type SweepRecord64 = SweepRecord<f64>;
pub type TrialOutcome64 = TrialOutcome<f64>;
pub type EmpiricalEstimates64 = EmpiricalEstimates<f64>;
