//! Parameter-plane scans, zero contours, figure presets and their output.

mod contour;
mod figures;
mod grid;
mod output;
mod region;

pub use contour::{zero_contours, Polyline};
pub use figures::{figure, figure_preset, FigureData, FigurePreset, Profile, ANALYTIC_STEPS, ORACLE_STEPS};
pub use grid::{Axis, AxisName, Family, FixedParams, GridSpec, TimeUnit};
pub use output::{profile_json, region_json, write_profile_csv, write_region_csv, OutputFormat, SCHEMA_VERSION};
pub use region::{
    evaluate_point, evaluate_points, scan_plane, Mask, RegionMap, Scanner, BOUNDARY_TOL,
    ORACLE_POINT_LIMIT,
};
