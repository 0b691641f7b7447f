mod report;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zeromode::laurent::{laurent, LaurentMethod};
use zeromode::resolvent::resolvent_kernel;
use zeromode::search::{maximize_zero_multiplicity, scan_real_axis};
use zeromode::spectrum::{default_lambda_max, find_negative_eigenvalues};
use zeromode::zero_modes::classify_zero_energy;
use zeromode::{registry, CMatrix, Configuration, Point, C64};

use report::Report;

#[derive(Parser)]
#[command(name = "zeromode", version, about = "Low-energy spectral analysis of point interactions in R³")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound states, zero-energy multiplicities and the Laurent expansion
    Analyze {
        /// JSON file or registry expression such as `tetrahedron(1)`
        config: String,
        #[arg(long)]
        lambda_max: Option<f64>,
        #[arg(long, default_value = "both")]
        method: LaurentMethod,
        #[arg(long, default_value_t = zeromode::DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Negative eigenvalues
    Spectrum {
        config: String,
        #[arg(long)]
        lambda_max: Option<f64>,
        #[arg(long, default_value_t = zeromode::DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Singular coefficients of Γ(z)⁻¹ at z = 0
    Laurent {
        config: String,
        /// closed, contour or both
        #[arg(long, default_value = "both")]
        method: LaurentMethod,
        #[arg(long, default_value_t = zeromode::DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Resolvent kernel value, or samples along a segment with --grid
    Kernel {
        config: String,
        /// Spectral parameter as `re,im`
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: C64,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x: Point,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        xp: Point,
        /// Write samples for x on the segment from --x to --x-end to this CSV file
        #[arg(long, requires = "x_end")]
        grid: Option<PathBuf>,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x_end: Option<Point>,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Search for configurations with a large zero-eigenvalue multiplicity
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Benchmark configurations
    Registry {
        #[command(subcommand)]
        action: RegistryAction,
    },
    /// Smallest singular value of Γ(z) on a real grid
    Scan {
        config: String,
        /// Interval as `a,b`
        #[arg(long, value_parser = parse_range, default_value = "0.01,10")]
        range: (f64, f64),
        #[arg(long, default_value_t = 1000)]
        points: usize,
        /// Write the samples to this CSV file
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RegistryAction {
    List,
    /// Print the configuration as JSON
    Show { expression: String },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] zeromode::Error),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn parse_numbers<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let [re, im] = parse_numbers::<2>(s)?;
    Ok(C64::new(re, im))
}

fn parse_point(s: &str) -> Result<Point, String> {
    parse_numbers::<3>(s)
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let [a, b] = parse_numbers::<2>(s)?;
    Ok((a, b))
}

/// A file path if one exists, otherwise a registry expression.
fn load_config(arg: &str) -> CliResult<Configuration> {
    let result = if Path::new(arg).is_file() {
        Configuration::load(arg)
    } else {
        registry::parse_expression(arg)
    };
    result.map_err(|e| CliError::Usage(format!("cannot load configuration `{arg}`: {e}")))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    write_file(path, &text)
}

fn format_complex(c: C64) -> String {
    // adding 0.0 turns −0 into +0
    format!("{:+.9e}{:+.9e}i", c.re + 0.0, c.im + 0.0)
}

fn format_matrix(m: &CMatrix) -> String {
    let mut s = String::new();
    for j in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|k| format_complex(m[(j, k)])).collect();
        let _ = writeln!(s, "  [{}]", row.join(", "));
    }
    s
}

fn spectrum_table(spectrum: &zeromode::spectrum::Spectrum) -> String {
    let mut s = format!("{:>4}  {:>20}  {:>20}  {:>12}\n", "#", "lambda", "energy", "multiplicity");
    for (i, st) in spectrum.states.iter().enumerate() {
        let _ = writeln!(s, "{:>4}  {:>20.12}  {:>20.10}  {:>12}", i + 1, st.lambda, st.energy, st.multiplicity);
    }
    if spectrum.states.is_empty() {
        s.push_str("  (no negative eigenvalues)\n");
    }
    s
}

fn laurent_text(l: &zeromode::laurent::LaurentExpansion) -> String {
    let mut s = format!("case: {:?}\nmethod: {:?}\n", l.case, l.method);
    if let Some(r) = l.radius {
        let _ = writeln!(s, "contour radius: {r}");
    }
    let _ = write!(s, "A_-2 =\n{}", format_matrix(&l.a_minus2));
    match &l.a_minus1 {
        Some(a) => {
            let _ = write!(s, "A_-1 =\n{}", format_matrix(a));
        }
        None => s.push_str("A_-1: not available from the closed form\n"),
    }
    if let Some(d) = &l.discrepancy {
        let _ = writeln!(
            s,
            "max discrepancy closed vs contour: {:.3e} (A_-2 {:.3e}, A_-1 {})",
            d.max(),
            d.a_minus2,
            d.a_minus1.map_or("n/a".to_string(), |x| format!("{x:.3e}"))
        );
    }
    s
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analyze { config, lambda_max, method, tol, out } => {
            let c = load_config(&config)?;
            let spectrum = find_negative_eigenvalues(&c, lambda_max.unwrap_or_else(|| default_lambda_max(&c)), tol)?;
            let zero = classify_zero_energy(&c, tol);
            let expansion = laurent(&c, method, tol)?;
            print!("bound states\n{}", spectrum_table(&spectrum));
            println!("zero energy: e = {}, r = {} ({:?})", zero.e, zero.r, zero.kind);
            if zero.borderline {
                println!("warning: classification is borderline at tol = {tol:e}");
            }
            print!("{}", laurent_text(&expansion));
            if let Some(path) = out {
                let mut report = Report::new(&c);
                report.bound_states = Some(report::bound_states(&spectrum));
                report.zero_modes = Some((&zero).into());
                report.laurent = Some((&expansion).into());
                report.diagnostics = spectrum.diagnostics.clone();
                if zero.borderline {
                    report.diagnostics.push(format!("zero-energy classification is borderline at tol = {tol:e}"));
                }
                write_json(&path, &report)?;
            }
        }
        Command::Spectrum { config, lambda_max, tol, out } => {
            let c = load_config(&config)?;
            let spectrum = find_negative_eigenvalues(&c, lambda_max.unwrap_or_else(|| default_lambda_max(&c)), tol)?;
            print!("{}", spectrum_table(&spectrum));
            for d in &spectrum.diagnostics {
                println!("note: {d}");
            }
            if let Some(path) = out {
                let mut report = Report::new(&c);
                report.bound_states = Some(report::bound_states(&spectrum));
                report.diagnostics = spectrum.diagnostics.clone();
                write_json(&path, &report)?;
            }
        }
        Command::Laurent { config, method, tol, out } => {
            let c = load_config(&config)?;
            let expansion = laurent(&c, method, tol)?;
            print!("{}", laurent_text(&expansion));
            if let Some(path) = out {
                let mut report = Report::new(&c);
                report.laurent = Some((&expansion).into());
                write_json(&path, &report)?;
            }
        }
        Command::Kernel { config, z, x, xp, grid, x_end, points } => {
            let c = load_config(&config)?;
            match (grid, x_end) {
                (Some(path), Some(end)) => {
                    if points < 2 {
                        return Err(CliError::Usage("--points must be at least 2".into()));
                    }
                    let mut csv = String::from("t,x1,x2,x3,re,im\n");
                    for i in 0..points {
                        let t = i as f64 / (points - 1) as f64;
                        let p: Point = std::array::from_fn(|k| x[k] + t * (end[k] - x[k]));
                        let (re, im) = match resolvent_kernel(&c, z, &p, &xp) {
                            Ok(v) => (v.re, v.im),
                            Err(zeromode::Error::CoincidentWithCenter(_) | zeromode::Error::CoincidentPoints) => (f64::NAN, f64::NAN),
                            Err(e) => return Err(e.into()),
                        };
                        let _ = writeln!(csv, "{t},{},{},{},{re},{im}", p[0], p[1], p[2]);
                    }
                    write_file(&path, &csv)?;
                    println!("wrote {points} samples to {}", path.display());
                }
                _ => {
                    let v = resolvent_kernel(&c, z, &x, &xp)?;
                    println!("{}", format_complex(v));
                }
            }
        }
        Command::Search { n, budget, seed, out } => {
            let outcome = maximize_zero_multiplicity(n, budget, seed)?;
            println!("best: e = {}, r = {}", outcome.e, outcome.r);
            for stage in &outcome.stages {
                println!("  target {}: energy {:.3e}, e = {}, r = {}", stage.target, stage.energy, stage.e, stage.r);
            }
            println!("{}", outcome.config.to_json());
            if let Some(path) = out {
                write_json(&path, &outcome)?;
            }
        }
        Command::Registry { action } => match action {
            RegistryAction::List => {
                for e in registry::entries() {
                    println!("{:<22} {}", e.name, e.description);
                }
            }
            RegistryAction::Show { expression } => {
                let c = registry::parse_expression(&expression)
                    .map_err(|e| CliError::Usage(format!("`{expression}`: {e}")))?;
                println!("{}", c.to_json());
            }
        },
        Command::Scan { config, range, points, csv } => {
            let c = load_config(&config)?;
            let scan = scan_real_axis(&c, range.0, range.1, points).map_err(|e| CliError::Usage(e.to_string()))?;
            println!(
                "min smallest singular value {:.6e} at z = {}",
                scan.min_singular_value, scan.location
            );
            if let Some(path) = csv {
                let mut text = String::from("z,sigma_min\n");
                for (z, s) in &scan.samples {
                    let _ = writeln!(text, "{z},{s}");
                }
                write_file(&path, &text)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
