//! Exact-arithmetic engine for periodic billiards on obtuse
//! edge-tessellating polygons. (Module skeleton under construction.)

pub mod atlas;
pub mod cli;
pub mod error;
pub mod fence;
pub mod geometry;
pub mod hexlab;
pub mod orbit;
pub mod rat;
pub mod render;
pub mod sweep;
pub mod tessellation;

pub use atlas::{build_atlas, dataset_from_rows, read_atlas, write_csv, write_json, AtlasRow};
pub use error::{BilliardError, Result};
pub use fence::{
    barrier_count_at, barrier_count_range, contact_points, edge_count_options,
    multiplicity_and_spacing, period_formula, ContactProfile, ParityRel, PeriodPrediction,
};
pub use geometry::{
    angle_of, reflect_direction, reflect_point, InclineClass, InclineLine, ScaledDirection,
    ScaledPoint,
};
pub use hexlab::{
    build_dataset, closure_map_check, hexagon_pairs, hexagon_period, modulus_grid_search,
    BranchRecord, BranchSide, ClosureReport, ModulusCondition,
};
pub use orbit::{
    default_max_bounces, detect_period_unfolding, first_alignment, fold, launch, reduce_angle,
    unfold_trace, DirectionPair, FrameMap, Offset, OrbitResult, OrbitStatus, UnfoldTrace,
};
pub use rat::Rat;
pub use render::{render, write_svg, RenderMode, RenderSpec};
pub use sweep::{run_sweep, PairReport, SweepConfig, SweepReport};
pub use tessellation::{CrossingKind, EdgeCrossing, ShapeId, Tessellation};
