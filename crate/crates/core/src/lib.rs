//! Fully Eulerian fluid–structure interaction for hyperelastic membranes.

pub mod bench;
pub mod elasticity;
pub mod error;
pub mod grid;
pub mod kinematics;
pub mod ns_solver;
pub mod scalar;
pub mod stability1d;
pub mod verification;

pub use error::{FsiError, Result};
pub use scalar::Real;

/// Double-precision instantiations of the generic solver types.
pub type Grid = grid::GridSpec<f64>;
pub type CellField = grid::CellField<f64>;
pub type FaceVectorField = grid::FaceVectorField<f64>;
pub type LevelSet = kinematics::LevelSet<f64>;
pub type BackwardMap = kinematics::BackwardMap<f64>;
pub type Normals = kinematics::Normals<f64>;
pub type SymTensorField = elasticity::SymTensorField<f64>;
pub type EvanSkalak = elasticity::EvanSkalak<f64>;
pub type Simulation = ns_solver::Simulation<f64>;
pub type StepConfig = ns_solver::StepConfig<f64>;
pub type Model1DParams = stability1d::Model1DParams<f64>;

/// Single-precision instantiations.
pub type Grid32 = grid::GridSpec<f32>;
pub type Simulation32 = ns_solver::Simulation<f32>;
pub type Model1DParams32 = stability1d::Model1DParams<f32>;
