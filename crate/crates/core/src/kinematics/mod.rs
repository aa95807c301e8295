//! Level-set and backward-characteristics transport and maintenance.

mod advect;
mod extrapolate;
mod ghosts;
mod normals;
mod reinit;
mod shapes;
mod smoothing;
mod weno;

pub(crate) use ghosts::fill_linear_ghosts;
pub use advect::{advect_rk3, substep_count, transport, CellVelocity};
pub use extrapolate::{extrapolate_backward_map, BackwardMap};
pub use normals::{compute_normals, Normals, NORMAL_FLOOR};
pub use reinit::{reinitialize, LevelSet};
pub use shapes::{AnalyticLevelSet, Circle};
pub use smoothing::{cutoff, smooth_delta, smooth_heaviside};
pub use weno::weno5_flux_derivative;
