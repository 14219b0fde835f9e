//! Scenario configuration, end-to-end pipeline, oracle verification and plotting.

mod config;
mod plot;
mod run;
mod verify;

pub use config::{
    load_config, CutConfig, FootprintConfig, GeoConfig, PlotConfig, ScenarioConfig, SteeringConfig,
    SteeringMode, SubarrayConfig, SwarmConfig,
};
pub use plot::render_cut_svg;
pub use run::{
    build_array, build_lattice, build_swarm, compute_footprint, compute_metrics, cut_metadata,
    evaluate_pattern, failed_stage, run_scenario, steering_target, write_pattern_file, RunReport,
    StageTimings, FOOTPRINT_FILE, LATTICE_FILE, LAYOUT_FILE, METRICS_FILE, PATTERN_FILE, PLOT_FILE,
};
pub use verify::{
    cost_ceiling, random_scales, verify_oracle, verify_random_cases, verify_with_ceiling,
    OracleReport, ReducedScale, CEILING_ENV, ORACLE_TOLERANCE,
};
