//! Shear-flow experiment driver: case setup, runs, contours and time-step
//! searches.

pub mod config;
pub mod contour;
pub mod report;
pub mod search;
pub mod shear;

pub use config::{fmt17, CaseConfig, MomentumSolver};
pub use contour::{extract_contour, extract_level, hausdorff_distance, shoelace_area, ContourPolyline};
pub use report::{
    read_contour_csv, read_contour_file, reference_max_dt, write_area_series, write_contour_csv, write_dt_table, write_file,
    DtTableRow, REFERENCE_MAX_DT,
};
pub use search::{halving_monotone, max_stable_dt_search, probe, DtSearch, Probe};
pub use shear::{init_shear_case, run, run_with, shear_boundaries, step_config, tangential_speed, RunReport};
