//! `ql`: build, analyze, render, and verify self-similar cut-and-project
//! point sets from the command line.

mod config;
mod errors;
mod expr;
mod presets;

use std::collections::HashSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quasilattice::analysis::{check_neighbor_law, decoration_stats};
use quasilattice::ifs::compute_bounds;
use quasilattice::pipeline::{
    build_model_set, determine_n, extend, membership_oracle, BuildReport,
};
use quasilattice::render::{export_points, render_svg, ExportFormat, Layers, RenderSpec};
use quasilattice::ring::FieldDescriptor;

use config::{parse_config, JobConfig, WindowKind};
use errors::{CliError, Result};

#[derive(Parser)]
#[command(name = "ql", version, about = "self-similar cut-and-project point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the construction and report (optionally export) the point set.
    Build(SystemArgs),
    /// Build, then report cycle structure and decoration statistics.
    Analyze(SystemArgs),
    /// Build, then write SVG pictures of the pattern and its window.
    Render(SystemArgs),
    /// List the built-in systems, or print one as a config document.
    Presets {
        /// Print the named preset's config text instead of the list.
        #[arg(long)]
        emit: Option<String>,
    },
    /// Cross-check the constructed set against the membership oracle.
    Verify(SystemArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WindowArg {
    Compact,
    Seeds,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// System selection plus overrides. Exactly one of `--preset`/`--config`
/// names the base configuration; the remaining flags override single keys.
#[derive(Args)]
struct SystemArgs {
    /// Built-in system name (see `ql presets`).
    #[arg(long, required_unless_present = "config", conflicts_with = "config")]
    preset: Option<String>,
    /// Path to a config file (see `ql presets --emit NAME` for the syntax).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the cut radius.
    #[arg(long)]
    rho: Option<f64>,
    /// Override the core enumeration box half-width (skips stabilization).
    #[arg(long = "N", value_name = "N")]
    n: Option<u32>,
    /// Override the window variant.
    #[arg(long, value_enum)]
    window: Option<WindowArg>,
    /// Override the seed set expression (implies --window seeds).
    #[arg(long)]
    seeds: Option<String>,
    /// Output stem: build writes STEM.csv/.json, render STEM.svg and
    /// STEM-window.svg. A trailing extension matching the file being
    /// written is accepted and stripped, so `--out pts.json` names pts.json.
    #[arg(long, value_name = "STEM")]
    out: Option<String>,
    /// Override the export format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Cap both the lattice and point budgets at this many entries.
    #[arg(long)]
    budget: Option<u64>,
    /// Print the effective config document (after overrides) before running.
    #[arg(long)]
    show_config: bool,
}

impl SystemArgs {
    fn load(&self) -> Result<JobConfig> {
        let mut cfg = if let Some(name) = &self.preset {
            let text = presets::get(name).ok_or_else(|| {
                let names: Vec<&str> = presets::PRESETS.iter().map(|(n, _, _)| *n).collect();
                CliError::Usage(format!(
                    "unknown preset {name:?} (available: {})",
                    names.join(", ")
                ))
            })?;
            parse_config(text)?
        } else {
            let path = self.config.as_ref().expect("clap enforces one source");
            parse_config(&fs::read_to_string(path)?)?
        };
        if let Some(rho) = self.rho {
            if !(rho > 0.0 && rho.is_finite()) {
                return Err(CliError::Usage(format!(
                    "--rho must be a positive number, got {rho}"
                )));
            }
            cfg.rho = rho;
        }
        if let Some(n) = self.n {
            cfg.n_override = Some(n);
        }
        if let Some(window) = self.window {
            cfg.window = match window {
                WindowArg::Compact => WindowKind::Compact,
                WindowArg::Seeds => WindowKind::Seeds,
            };
        }
        if let Some(seeds) = &self.seeds {
            cfg.seeds = Some(seeds.clone());
            cfg.window = WindowKind::Seeds;
        }
        if cfg.window == WindowKind::Seeds && cfg.seeds.is_none() {
            return Err(CliError::Usage(
                "--window seeds needs a seed set (--seeds EXPR)".into(),
            ));
        }
        if cfg.window == WindowKind::Compact {
            cfg.seeds = None;
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        if let Some(format) = self.format {
            cfg.format = match format {
                FormatArg::Csv => ExportFormat::Csv,
                FormatArg::Json => ExportFormat::Json,
            };
        }
        if let Some(budget) = self.budget {
            cfg.lattice_budget = budget;
            cfg.point_budget = budget;
        }
        if self.show_config {
            print!("{}", cfg.emit());
        }
        Ok(cfg)
    }
}

fn describe_field(desc: &FieldDescriptor) -> String {
    match desc {
        FieldDescriptor::Cyclotomic { n } => format!("cyclotomic({n})"),
        FieldDescriptor::ComplexPisot { min_poly } => {
            let coeffs: Vec<String> = min_poly.iter().map(i64::to_string).collect();
            format!("complex_pisot({})", coeffs.join(", "))
        }
    }
}

fn print_summary(cfg: &JobConfig, report: &BuildReport) {
    println!("field: {}", describe_field(&cfg.field));
    println!(
        "beta: {} (|beta| = {:.6})",
        cfg.beta,
        report.pattern.ifs().beta().physical().norm()
    );
    println!("maps: {}", report.pattern.ifs().map_count());
    let internals: Vec<String> = report
        .bounds
        .c_internal
        .iter()
        .map(|c| format!("{c:.6}"))
        .collect();
    println!(
        "bounds: c = {:.6}, c' = [{}]",
        report.bounds.c,
        internals.join(", ")
    );
    println!("N: {}", report.n);
    println!("|F0|: {}", report.f0.len());
    println!("|F1|: {}", report.f1.len());
    println!("cyclic points: {}", report.cycles.cyclic_count);
    println!(
        "pattern size: {} (rho = {})",
        report.pattern.len(),
        report.pattern.rho()
    );
}

fn run_build(cfg: &JobConfig) -> Result<BuildReport> {
    let job = cfg.instantiate()?;
    Ok(build_model_set(&job.ifs, job.rho, job.variant, &job.options)?)
}

/// `--out` names a stem, but a stem that already ends in the extension
/// about to be written would otherwise yield names like `pts.json.json`.
fn strip_matching_extension<'a>(stem: &'a str, ext: &str) -> &'a str {
    stem.strip_suffix(ext)
        .and_then(|head| head.strip_suffix('.'))
        .filter(|head| !head.is_empty())
        .unwrap_or(stem)
}

fn cmd_build(args: &SystemArgs) -> Result<()> {
    let cfg = args.load()?;
    let report = run_build(&cfg)?;
    print_summary(&cfg, &report);
    if let Some(stem) = &cfg.out {
        let (ext, text) = match cfg.format {
            ExportFormat::Csv => ("csv", export_points(&report.pattern, ExportFormat::Csv)?),
            ExportFormat::Json => ("json", export_points(&report.pattern, ExportFormat::Json)?),
        };
        let path = format!("{}.{ext}", strip_matching_extension(stem, ext));
        fs::write(&path, text)?;
        println!("wrote {path}");
    }
    Ok(())
}

fn cmd_analyze(args: &SystemArgs) -> Result<()> {
    let cfg = args.load()?;
    let report = run_build(&cfg)?;
    print_summary(&cfg, &report);
    println!("component sizes: {:?}", report.cycles.component_sizes);
    println!("network sizes: {:?}", report.cycles.network_sizes);
    println!("fixed points: {}", report.cycles.fixed_points.len());
    let stats = decoration_stats(&report.pattern);
    println!("decoration histogram:");
    for (pred, count) in &stats.histogram {
        println!("  {pred}: {count}");
    }
    println!("min distance: {:.6}", stats.min_distance);
    let violations = check_neighbor_law(&report.pattern);
    if violations.is_empty() {
        println!("neighbor law: ok (0 violations)");
    } else {
        let worst = violations
            .iter()
            .max_by_key(|v| v.found - v.allowed)
            .expect("nonempty");
        println!(
            "neighbor law: {} violations (worst: {} with {} neighbors, {} allowed)",
            violations.len(),
            worst.elem,
            worst.found,
            worst.allowed
        );
    }
    Ok(())
}

fn cmd_render(args: &SystemArgs) -> Result<()> {
    let cfg = args.load()?;
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| CliError::Usage("render needs an output stem (--out STEM)".into()))?;
    let stem = strip_matching_extension(&out, "svg");
    let report = run_build(&cfg)?;
    print_summary(&cfg, &report);

    let spec = RenderSpec::for_pattern(&report.pattern);
    let path = format!("{stem}.svg");
    fs::write(&path, render_svg(&report.pattern, &spec)?)?;
    println!("wrote {path}");

    let window_spec = RenderSpec {
        layers: Layers {
            core_highlight: true,
            cyclic_highlight: true,
            window_points: true,
            attractor: true,
            ..Layers::default()
        },
        ..RenderSpec::for_pattern(&report.pattern)
    };
    let window_path = format!("{stem}-window.svg");
    fs::write(&window_path, render_svg(&report.pattern, &window_spec)?)?;
    println!("wrote {window_path}");
    Ok(())
}

fn cmd_presets(emit: Option<&str>) -> Result<()> {
    match emit {
        None => {
            for (name, _, blurb) in presets::PRESETS {
                println!("{name}  -  {blurb}");
            }
        }
        Some(name) => {
            let text = presets::get(name).ok_or_else(|| {
                CliError::Usage(format!("unknown preset {name:?} (run `ql presets`)"))
            })?;
            print!("{text}");
        }
    }
    Ok(())
}

/// Rebuild the core, then compare the membership oracle against the
/// extended set on every lattice point of the search box whose physical
/// image lies within radius 8.
fn cmd_verify(args: &SystemArgs) -> Result<()> {
    const VERIFY_RADIUS: f64 = 8.0;
    let cfg = args.load()?;
    let job = cfg.instantiate()?;
    let ifs = &job.ifs;
    let bounds = compute_bounds(ifs);
    let n = match job.options.n_override {
        Some(n) => n.max(1),
        None => determine_n(ifs, &bounds, &job.options)?,
    };
    let report = build_model_set(ifs, cfg.rho, job.variant, &job.options)?;
    let cyclic_coords: HashSet<Vec<i64>> = report
        .cycles
        .components
        .iter()
        .flatten()
        .map(|x| x.coords().to_vec())
        .collect();

    // A radius that safely contains every inverse-orbit excursion of the
    // candidates, so set membership below radius 8 is decided exactly.
    let max_z = ifs
        .translations()
        .iter()
        .map(|z| z.physical().norm())
        .fold(0.0_f64, f64::max);
    let extend_radius = VERIFY_RADIUS * ifs.beta().physical().norm() + max_z;
    let pattern = extend(&report.f1, ifs, extend_radius, job.options.point_budget)?;

    let degree = ifs.field().degree();
    let side = 2 * i64::from(n) + 1;
    let total = (side as u128).pow(degree as u32);
    if total > u128::from(job.options.lattice_budget) {
        return Err(CliError::Lib(quasilattice::Error::Intractable {
            lattice: total,
            budget: job.options.lattice_budget,
        }));
    }

    let mut agree = 0u64;
    let mut checked = 0u64;
    let mut coords = vec![-i64::from(n); degree];
    loop {
        let x = ifs.field().from_coords(&coords)?;
        if x.physical().norm() <= VERIFY_RADIUS {
            checked += 1;
            let by_oracle = membership_oracle(&x, ifs, &cyclic_coords);
            let by_pattern = pattern.contains(&x);
            if by_oracle == by_pattern {
                agree += 1;
            } else {
                println!(
                    "disagreement at {x}: oracle says {by_oracle}, extension says {by_pattern}"
                );
            }
        }
        let mut i = degree;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] <= i64::from(n) {
                break;
            }
            coords[i] = -i64::from(n);
        }
        if coords.iter().all(|&c| c == -i64::from(n)) {
            break;
        }
    }
    println!("oracle agreement: {agree}/{checked}");
    if agree == checked {
        Ok(())
    } else {
        Err(CliError::Lib(quasilattice::Error::InvalidIfs(format!(
            "membership oracle and extension disagree on {} of {} candidates",
            checked - agree,
            checked
        ))))
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Render(args) => cmd_render(args),
        Command::Presets { emit } => cmd_presets(emit.as_deref()),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn main() -> ExitCode {
    // Die quietly when the reading end of a pipe closes (`ql ... | head`),
    // as line-oriented tools do; the Rust runtime masks SIGPIPE, which would
    // otherwise turn the closed pipe into a printing panic.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    if let Ok(threads) = std::env::var("QL_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            if t >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
            }
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::strip_matching_extension;

    #[test]
    fn matching_extension_is_stripped_once() {
        assert_eq!(strip_matching_extension("pts.json", "json"), "pts");
        assert_eq!(strip_matching_extension("dir/pic.svg", "svg"), "dir/pic");
        assert_eq!(strip_matching_extension("a.json.json", "json"), "a.json");
    }

    #[test]
    fn other_names_pass_through() {
        assert_eq!(strip_matching_extension("pts", "json"), "pts");
        assert_eq!(strip_matching_extension("pts.csv", "json"), "pts.csv");
        assert_eq!(strip_matching_extension("ptsjson", "json"), "ptsjson");
        assert_eq!(strip_matching_extension(".json", "json"), ".json");
    }
}
