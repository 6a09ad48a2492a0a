use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use susyqm::config::{FileConfig, Overrides, RunConfig};
use susyqm::harness::{
    build_figure, build_table, emit_report, figure_files, validate_all, FigureKind, ReportFormat, TableOptions,
    ValidateOptions,
};
use susyqm::ModelParams;

#[derive(Parser, Debug)]
#[command(name = "susyqm", version, about = "Exact and numerical spectra of shape-invariant potentials")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Model family: tanh6, scarf2 or oscillator [default: tanh6]
    #[arg(long, global = true)]
    family: Option<String>,
    /// Tanh6 coupling B0 [default: 24]
    #[arg(long = "B0", global = true)]
    b0: Option<f64>,
    /// Frequency scale p [default: 0.35 for tanh6, 1 for scarf2]
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Scarf II coefficient A [default: 7]
    #[arg(long = "A", global = true)]
    a: Option<f64>,
    /// Scarf II coefficient B [default: 4]
    #[arg(long = "B", global = true)]
    b: Option<f64>,
    /// Oscillator frequency [default: 1]
    #[arg(long, global = true)]
    omega: Option<f64>,
    /// Half-width c of the solver box [-c, c] [default: chosen from the decay rates]
    #[arg(long, global = true)]
    half_width: Option<f64>,
    /// Interior grid points of the finite-difference and shooting solvers [default: 32000]
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Output format on stdout: pretty, csv or json [default: pretty]
    #[arg(long, global = true)]
    format: Option<String>,
    /// Directory for report and figure files [default: .]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also report the first state the box solvers find at or above the asymptote
    #[arg(long, global = true)]
    replicate_above_asymptote: bool,
    /// TOML configuration file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the exact spectrum, n_max, asymptote and shift
    Spectrum,
    /// Compare the exact spectrum with the numerical methods; writes report.csv and report.json
    Table {
        /// Comma-separated subset of nde, wkb, swkb, shooting [default: all]
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,
        /// Use the harmonic-oscillator fixture instead of the configured model
        #[arg(long)]
        oracle: bool,
    },
    /// Write potential, level and eigenfunction data for a figure
    Figure {
        /// fig1 (tanh6) or fig2 (scarf2, default A = 7, B = 4, p = 1)
        #[arg(long, default_value = "fig1")]
        which: String,
    },
    /// Run the invariant suite; exits 1 if any check fails
    Validate {
        /// Perturb E_1 by 0.1 in the residual check
        #[arg(long)]
        inject_fault: bool,
    },
}

enum Failure {
    Validation,
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn resolve(global: &Global, methods: Option<Vec<String>>, default_params: ModelParams, family: Option<&str>) -> Result<RunConfig, Failure> {
    let file = match &global.config {
        Some(path) => FileConfig::load(path).map_err(|e| io_error(path, e))?.map_err(usage)?,
        None => FileConfig::default(),
    };
    let flags = Overrides {
        family: family.map(str::to_owned).or_else(|| global.family.clone()),
        b0: global.b0,
        p: global.p,
        a: global.a,
        b: global.b,
        omega: global.omega,
        half_width: global.half_width,
        grid_points: global.grid,
        format: global.format.clone(),
        out: global.out.clone(),
        methods,
        replicate_above_asymptote: global.replicate_above_asymptote,
    };
    RunConfig::resolve(&file, &flags, default_params).map_err(usage)
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> CmdResult {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| io_error(&path, e))
}

fn print(bytes: &[u8]) -> CmdResult {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| Failure::Io(format!("stdout: {e}")))
}

#[derive(Serialize)]
struct ListedLevel {
    n: usize,
    energy: f64,
    energy_unshifted: f64,
}

#[derive(Serialize)]
struct Listing {
    family: String,
    n_max: usize,
    asymptote: Option<f64>,
    shift: f64,
    levels: Vec<ListedLevel>,
}

fn cmd_spectrum(rc: &RunConfig) -> CmdResult {
    let m = &rc.params;
    let spectrum = m.exact_spectrum();
    let levels = spectrum
        .levels
        .iter()
        .map(|&(n, e)| ListedLevel { n, energy: e, energy_unshifted: e - spectrum.shift })
        .collect();
    let listing = Listing {
        family: m.family().to_string(),
        n_max: spectrum.n_max,
        asymptote: spectrum.asymptote,
        shift: spectrum.shift,
        levels,
    };
    let mut out = String::new();
    match rc.format {
        ReportFormat::Json => {
            out = serde_json::to_string_pretty(&listing).expect("listing serializes");
            out.push('\n');
        }
        ReportFormat::Csv => {
            let _ = writeln!(out, "# config {}", rc.provenance());
            out.push_str("n,energy,energy_unshifted\n");
            for l in &listing.levels {
                let _ = writeln!(out, "{},{:.6},{:.6}", l.n, l.energy, l.energy_unshifted);
            }
        }
        ReportFormat::Pretty => {
            let _ = writeln!(out, "# config {}", rc.provenance());
            let _ = writeln!(out, "{:>3}  {:>14}  {:>14}", "n", "E_n", "E_n(unshifted)");
            for l in &listing.levels {
                let _ = writeln!(out, "{:>3}  {:>14.6}  {:>14.6}", l.n, l.energy, l.energy_unshifted);
            }
            let _ = writeln!(out, "n_max = {}", listing.n_max);
            match listing.asymptote {
                Some(a) => {
                    let _ = writeln!(out, "asymptote = {a:.6}");
                }
                None => out.push_str("asymptote = none\n"),
            }
            let _ = writeln!(out, "shift = {:.6}", listing.shift);
        }
    }
    print(out.as_bytes())
}

fn cmd_table(rc: &RunConfig) -> CmdResult {
    let opts = TableOptions { methods: rc.methods.clone(), replicate_above_asymptote: rc.replicate_above_asymptote };
    let rows = build_table(&rc.params, &rc.solver, &opts).map_err(usage)?;
    let prov = rc.provenance();
    write_file(&rc.out_dir, "report.csv", &emit_report(&rows, ReportFormat::Csv, Some(&prov)))?;
    write_file(&rc.out_dir, "report.json", &emit_report(&rows, ReportFormat::Json, Some(&prov)))?;
    print(&emit_report(&rows, rc.format, Some(&prov)))
}

fn cmd_figure(rc: &RunConfig, which: FigureKind) -> CmdResult {
    let bundle = build_figure(&rc.params, &rc.solver, which).map_err(usage)?;
    let files = figure_files(&bundle, Some(&rc.provenance()));
    let mut summary = String::new();
    for (name, contents) in &files {
        write_file(&rc.out_dir, name, contents.as_bytes())?;
        let _ = writeln!(summary, "wrote {}", rc.out_dir.join(name).display());
    }
    for (l, s) in bundle.levels.iter().zip(&bundle.states) {
        let _ = writeln!(
            summary,
            "n = {}  exact {:.4}  numeric {:.4}{}  nodes {}/{}",
            l.n,
            l.exact,
            l.numeric,
            if l.substituted { " (substituted)" } else { "" },
            s.exact_nodes,
            s.numeric_nodes
        );
    }
    print(summary.as_bytes())
}

fn cmd_validate(rc: &RunConfig, inject_fault: bool) -> CmdResult {
    let report = validate_all(&rc.params, &rc.solver, ValidateOptions { inject_fault });
    let mut out = String::new();
    if let Some(n_max) = report.n_max {
        let _ = writeln!(out, "n_max = {n_max}");
    }
    for c in &report.checks {
        let _ = writeln!(
            out,
            "{} {:<34} measured {:<12.4e} threshold {:<10.3e} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            c.threshold,
            c.detail
        );
    }
    let failed = report.failures().count();
    let _ = writeln!(out, "{} checks, {} failed", report.checks.len(), failed);
    print(out.as_bytes())?;
    eprintln!("{}", serde_json::to_string(&report).expect("report serializes"));
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Validation)
    }
}

fn run(cli: Cli) -> CmdResult {
    let g = &cli.global;
    match cli.command {
        Command::Spectrum => cmd_spectrum(&resolve(g, None, ModelParams::default(), None)?),
        Command::Table { methods, oracle } => {
            let rc = resolve(g, methods, ModelParams::default(), oracle.then_some("oscillator"))?;
            cmd_table(&rc)
        }
        Command::Figure { which } => {
            let which: FigureKind = which.parse().map_err(usage)?;
            let rc = resolve(g, None, which.default_params(), None)?;
            cmd_figure(&rc, which)
        }
        Command::Validate { inject_fault } => {
            // parameter violations are reported as failed checks, not usage errors
            let rc = match resolve(g, None, ModelParams::default(), None) {
                Ok(rc) => rc,
                Err(Failure::Usage(msg)) if msg.starts_with("invalid parameters") => {
                    println!("FAIL parameters {msg}");
                    return Err(Failure::Validation);
                }
                Err(e) => return Err(e),
            };
            cmd_validate(&rc, inject_fault)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) | Failure::Io(msg) => eprintln!("error: {msg}"),
                Failure::Validation => {}
            }
            ExitCode::from(f.code())
        }
    }
}
