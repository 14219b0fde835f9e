use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use swarmbeam::geolink::cone_footprint;
use swarmbeam::geometry::{LatticeDocument, LayoutDocument, SwarmLayout};
use swarmbeam::metrics::MetricsDocument;
use swarmbeam::radiation::read_field_cut;
use swarmbeam::scenario::{
    build_array, build_lattice, build_swarm, compute_footprint, compute_metrics, cut_metadata,
    evaluate_pattern, load_config, render_cut_svg, run_scenario, verify_oracle,
    verify_random_cases, write_pattern_file, OracleReport, ReducedScale, ScenarioConfig,
    FOOTPRINT_FILE, LATTICE_FILE, LAYOUT_FILE, METRICS_FILE, PATTERN_FILE, PLOT_FILE,
};
use swarmbeam::Result;

/// Swarm-of-satellites phased-array beam simulator.
#[derive(Parser, Debug)]
#[command(name = "swarmbeam", version, about)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// TOML scenario file; omitted fields take their defaults.
    #[arg(long, global = true, env = "SWARMBEAM_CONFIG")]
    config: Option<PathBuf>,
    /// Placement seed, overriding `swarm.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory receiving the output artifacts.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Pattern cut sample count, overriding `cut.samples`.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Suppress the summary on stdout.
    #[arg(long, global = true)]
    quiet: bool,
    /// Skip the SVG chart and write data files only.
    #[arg(long, global = true)]
    data_only: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the subarray element lattice.
    Lattice,
    /// Place the swarm and write its layout.
    Swarm,
    /// Evaluate the composite pattern on the configured cut.
    Pattern {
        /// Reuse a layout written by `swarm` instead of placing a new one.
        #[arg(long)]
        layout: Option<PathBuf>,
    },
    /// Extract beamwidth and lobe levels from a pattern file.
    Metrics {
        /// Pattern file written by `pattern` or `run`.
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Trace the half-power footprint on the ground.
    Footprint {
        #[arg(long)]
        layout: Option<PathBuf>,
        /// Contour from the full pattern, or a circular cone of half the
        /// principal-cut beamwidth.
        #[arg(long, value_enum, default_value_t = FootprintModel::Contour)]
        model: FootprintModel,
    },
    /// Run every stage end to end.
    Run,
    /// Compare the factorized and brute-force patterns on small geometries.
    Verify {
        #[arg(long, default_value_t = 4)]
        satellites: usize,
        #[arg(long, default_value_t = 19)]
        elements: usize,
        /// Run this many random geometries instead of one fixed scale.
        #[arg(long)]
        random: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FootprintModel {
    Contour,
    Cone,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn scenario_config(global: &Global) -> Result<ScenarioConfig> {
    let mut config = match &global.config {
        Some(path) => load_config(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = global.seed {
        config.swarm.seed = seed;
    }
    if let Some(samples) = global.samples {
        config.cut.samples = samples;
    }
    if global.data_only {
        config.plot.enabled = false;
    }
    config.validate()?;
    Ok(config)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

fn layout_or_place(config: &ScenarioConfig, layout: Option<&Path>) -> Result<SwarmLayout> {
    match layout {
        Some(path) => LayoutDocument::from_json(&fs::read_to_string(path)?)?.into_layout(),
        None => build_swarm(config),
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    let config = scenario_config(g)?;
    let out = &g.out_dir;
    let say = |msg: String| {
        if !g.quiet {
            println!("{msg}");
        }
    };
    match &cli.command {
        Command::Lattice => {
            let lattice = build_lattice(&config)?;
            let path = out.join(LATTICE_FILE);
            write(&path, &LatticeDocument::from_lattice(&lattice).to_json())?;
            say(format!(
                "{} elements at {} λ spacing, radius {:.4} λ -> {}",
                lattice.len(),
                lattice.spacing_lambda,
                lattice.radius_lambda,
                path.display()
            ));
        }
        Command::Swarm => {
            let swarm = build_swarm(&config)?;
            let path = out.join(LAYOUT_FILE);
            write(&path, &LayoutDocument::from_layout(&swarm).to_json())?;
            say(format!(
                "{} satellites, seed {} -> {}",
                swarm.centers.len(),
                swarm.seed,
                path.display()
            ));
        }
        Command::Pattern { layout } => {
            let swarm = layout_or_place(&config, layout.as_deref())?;
            let lattice = build_lattice(&config)?;
            let array = build_array(&config, &lattice, &swarm)?;
            let cut = evaluate_pattern(&config, &array)?;
            fs::create_dir_all(out)?;
            let path = out.join(PATTERN_FILE);
            write_pattern_file(&path, &cut, &cut_metadata(&config, Some(swarm.seed)))?;
            say(format!(
                "{} samples -> {}",
                cut.values.len(),
                path.display()
            ));
            if config.plot.enabled {
                let title = format!(
                    "{} satellites × {} elements, seed {}",
                    swarm.centers.len(),
                    lattice.len(),
                    swarm.seed
                );
                let svg_path = out.join(PLOT_FILE);
                write(&svg_path, &render_cut_svg(&cut, &config.plot, &title))?;
                say(format!("chart -> {}", svg_path.display()));
            }
        }
        Command::Metrics { pattern } => {
            let (cut, meta) = read_field_cut(&fs::read_to_string(pattern)?)?;
            let doc = compute_metrics(&config, &cut, meta.seed)?;
            let path = out.join(METRICS_FILE);
            write(&path, &doc.to_json())?;
            say(summary(&doc));
        }
        Command::Footprint { layout, model } => {
            let swarm = layout_or_place(&config, layout.as_deref())?;
            let lattice = build_lattice(&config)?;
            let array = build_array(&config, &lattice, &swarm)?;
            let cut = evaluate_pattern(&config, &array)?;
            let hpbw = compute_metrics(&config, &cut, Some(swarm.seed))?
                .metrics
                .hpbw_deg;
            let contour = match model {
                FootprintModel::Contour => compute_footprint(&config, &array, hpbw)?,
                FootprintModel::Cone => cone_footprint(
                    &config.geo.slot(),
                    config.geo.target()?,
                    hpbw / 2.0,
                    config.footprint.azimuth_samples,
                )?,
            };
            let path = out.join(FOOTPRINT_FILE);
            write(&path, &contour.to_geojson(hpbw, Some(swarm.seed)))?;
            say(format!(
                "area {:.4} km², slant range {:.1} km, incidence {:.2}° -> {}",
                contour.area_km2,
                contour.slant_range_km,
                contour.incidence_angle_deg,
                path.display()
            ));
        }
        Command::Run => {
            let report = run_scenario(&config, out)?;
            say(summary(&report.metrics));
            if let Some(area) = report.footprint_area_km2 {
                say(format!("footprint area {area:.4} km²"));
            }
            say(format!(
                "timings: geometry {:.3} s, pattern {:.3} s, metrics {:.3} s{}",
                report.timings.geometry_s,
                report.timings.pattern_s,
                report.timings.metrics_s,
                report
                    .timings
                    .footprint_s
                    .map(|t| format!(", footprint {t:.3} s"))
                    .unwrap_or_default()
            ));
            say(format!("artifacts in {}", out.display()));
        }
        Command::Verify {
            satellites,
            elements,
            random,
        } => {
            let reports = match random {
                Some(cases) => verify_random_cases(&config, *cases, config.swarm.seed)?,
                None => vec![verify_oracle(
                    &config,
                    ReducedScale {
                        satellites: *satellites,
                        elements: *elements,
                        samples: g.samples.unwrap_or(501),
                        seed: config.swarm.seed,
                    },
                )?],
            };
            for r in &reports {
                say(oracle_line(r));
            }
            let worst = reports
                .iter()
                .max_by(|a, b| {
                    a.max_relative_deviation
                        .total_cmp(&b.max_relative_deviation)
                })
                .expect("at least one case");
            worst.check()?;
        }
    }
    Ok(())
}

fn summary(doc: &MetricsDocument) -> String {
    let m = &doc.metrics;
    let lobe = |level: Option<f64>, theta: Option<f64>| match (level, theta) {
        (Some(l), Some(t)) => format!("{l:.2} dB below peak at {t:.5}°"),
        _ => "none".to_owned(),
    };
    format!(
        "hpbw {:.6}°, sll {}, gll {}",
        m.hpbw_deg,
        lobe(m.sll_db, m.sll_theta_deg),
        lobe(m.gll_db, m.gll_theta_deg)
    )
}

fn oracle_line(r: &OracleReport) -> String {
    format!(
        "{} {} sats × {} elems × {} samples (seed {}): max relative deviation {:.3e}",
        if r.passed { "PASS" } else { "FAIL" },
        r.scale.satellites,
        r.scale.elements,
        r.scale.samples,
        r.scale.seed,
        r.max_relative_deviation
    )
}
