//! `padelab` command-line front end.

use crate::diagnostics::{self, DiagnoseOptions};
use crate::hem::{self, NetworkCase};
use crate::io::{self, CapacityRow, PlotSpec};
use crate::pade::{self, RootKind};
use crate::potential::{self, ChargeConfiguration, PlanarCurve, PotentialError};
use crate::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Orders above this need `--allow-heavy`.
pub const HEAVY_M: usize = 60;
/// Point counts above this need `--allow-heavy`.
pub const HEAVY_N: usize = 256;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INGEST: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "padelab", version, about = "Holomorphic-embedding series, Padé root distributions and discrete potential theory")]
pub struct Cli {
    /// Permit M > 60 or N > 256; double precision degrades there [default: off]
    #[arg(long, global = true)]
    pub allow_heavy: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    /// Two-bus case with voltage branch points at alpha = -1/3 and +1
    TwobusAsym,
    /// Two-bus case with voltage branch points at alpha = -1 and +1
    TwobusSym,
}

#[derive(Debug, Clone, Args)]
pub struct CaseArgs {
    /// Built-in fixture (used when neither --case nor --matpower is given)
    #[arg(long, value_enum, default_value = "twobus-asym", conflicts_with_all = ["case", "matpower"])]
    pub fixture: Fixture,
    /// Native TOML case file [default: none, use --fixture]
    #[arg(long, conflicts_with = "matpower")]
    pub case: Option<PathBuf>,
    /// MATPOWER case file, numeric subset [default: none, use --fixture]
    #[arg(long)]
    pub matpower: Option<PathBuf>,
    /// Multiply every non-slack P/Q injection by this factor
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Bus whose voltage series is analysed [default: largest first-order term]
    #[arg(long)]
    pub bus: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct SegmentArgs {
    /// Real-axis segment endpoints a b
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true, default_values_t = [-1.0, 1.0])]
    pub segment: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maclaurin coefficients of the embedded voltage (CSV: bus,k,re,im)
    Series {
        #[command(flatten)]
        input: CaseArgs,
        /// Highest coefficient index
        #[arg(long, default_value_t = 20)]
        order: usize,
        /// Emit every bus instead of the analysed one [default: off]
        #[arg(long)]
        all: bool,
        /// Output file [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// [L/M] approximant coefficients (CSV: part,k,re,im)
    Pade {
        #[command(flatten)]
        input: CaseArgs,
        /// Denominator degree
        #[arg(long = "M", default_value_t = 10)]
        m: usize,
        /// Numerator degree [default: M]
        #[arg(long = "L")]
        l: Option<usize>,
        /// Output file [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Poles and zeros of [M/M]: roots CSV plus alpha-plane and inverse-plane SVG
    Roots {
        #[command(flatten)]
        input: CaseArgs,
        /// Approximant order
        #[arg(long = "M", default_value_t = 10)]
        m: usize,
        /// Output directory
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Use the narrow ±1.3 ± 0.2j inverse-plane window [default: off]
        #[arg(long)]
        narrow: bool,
        /// Half-width of the real-axis band used for the printed extent
        #[arg(long, default_value_t = 0.05)]
        band: f64,
    },
    /// Convergence profiles of [M/M] along real alpha (CSV: alpha,M,error,cf_hat)
    Cf {
        #[command(flatten)]
        input: CaseArgs,
        /// Alpha grid
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0.05,0.1,0.2,0.3,0.4,0.5,0.6")]
        alphas: Vec<f64>,
        /// Approximant orders
        #[arg(long = "M-list", value_delimiter = ',', default_value = "2,3,4,5,6,7,8,9,10,11,12,13,14,15,16")]
        m_list: Vec<usize>,
        /// Output file [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical branch-cut capacity: slope of the convergence factor at the origin
    Slope {
        #[command(flatten)]
        input: CaseArgs,
        /// Alpha grid as fractions of the positive branch point
        #[arg(long, value_delimiter = ',', default_value = "0.03,0.05,0.08,0.1,0.15,0.2")]
        fractions: Vec<f64>,
        /// Approximant orders
        #[arg(long = "M-list", value_delimiter = ',', default_value = "3,4,5,6,7,8,9,10,11,12")]
        m_list: Vec<usize>,
    },
    /// Fekete (minimum-energy) points on a segment (CSV: x,y,weight)
    Fekete {
        #[command(flatten)]
        seg: SegmentArgs,
        /// Number of points
        #[arg(long = "N", default_value_t = 64)]
        n: usize,
        /// Iteration cap of the optimizer
        #[arg(long, default_value_t = potential::FEKETE_MAX_ITER)]
        max_iter: usize,
        /// Output file [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Capacity table from Fekete points (CSV: N,energy,cap_est)
    Capacity {
        #[command(flatten)]
        seg: SegmentArgs,
        /// Point counts
        #[arg(long = "N", value_delimiter = ',', default_value = "8,16,32,64")]
        n: Vec<usize>,
        /// Output file [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tangential field residual of a charge set along a segment
    Field {
        #[command(flatten)]
        seg: SegmentArgs,
        /// Charges: Fekete points, or the poles/zeros of the case's [M/M] in the inverse plane
        #[arg(long, value_enum, default_value = "fekete")]
        source: FieldSource,
        #[command(flatten)]
        input: CaseArgs,
        /// Number of Fekete points
        #[arg(long = "N", default_value_t = 64)]
        n: usize,
        /// Approximant order for --source poles/zeros
        #[arg(long = "M", default_value_t = 20)]
        m: usize,
        /// Number of probe points
        #[arg(long, default_value_t = 200)]
        probes: usize,
        /// Fraction of the segment left unprobed at each end
        #[arg(long, default_value_t = 0.1)]
        trim: f64,
    },
    /// One-shot summary: BCC estimate, KS trend, pairing and symmetry
    Diagnose {
        #[command(flatten)]
        input: CaseArgs,
        /// Orders for the root-distribution trend
        #[arg(long = "M-list", value_delimiter = ',', default_value = "5,10,20")]
        m_list: Vec<usize>,
        /// Inverse-plane band half-width [default: 0.1 × cut half-length]
        #[arg(long)]
        band: Option<f64>,
        /// Fekete points for the hull capacity
        #[arg(long = "N", default_value_t = 64)]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldSource {
    Fekete,
    Poles,
    Zeros,
}

/// Failure of a subcommand, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Ingest(Error),
    #[error("{op}: {source}")]
    Numeric { op: String, source: Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Ingest(_) => EXIT_INGEST,
            CliError::Numeric { .. } => EXIT_NUMERIC,
        }
    }
}

fn numeric<E: Into<Error>>(op: impl Into<String>) -> impl FnOnce(E) -> CliError {
    let op = op.into();
    move |e| CliError::Numeric { op, source: e.into() }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code. Normal output goes to `out`, diagnostics to
/// `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{}", e.render());
                    return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { EXIT_USAGE } else { EXIT_OK };
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "padelab: {e}");
            e.exit_code()
        }
    }
}

fn check_heavy(allow: bool, m: usize, n: usize) -> Result<(), CliError> {
    if m > HEAVY_M || n > HEAVY_N {
        if !allow {
            return Err(usage(format!(
                "M = {m} / N = {n} exceeds the desk-scale limits (M ≤ {HEAVY_M}, N ≤ {HEAVY_N}); pass --allow-heavy"
            )));
        }
        log::warn!("M = {m} / N = {n}: double-precision results degrade at this size");
    }
    Ok(())
}

fn check_segment(seg: &SegmentArgs) -> Result<(f64, f64), CliError> {
    let (a, b) = (seg.segment[0], seg.segment[1]);
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(usage(format!("--segment needs finite a < b, got {a} {b}")));
    }
    Ok((a, b))
}

fn check_case_args(c: &CaseArgs) -> Result<(), CliError> {
    if !(c.scale.is_finite()) {
        return Err(usage(format!("--scale must be finite, got {}", c.scale)));
    }
    Ok(())
}

fn validate(cli: &Cli) -> Result<(), CliError> {
    let heavy = cli.allow_heavy;
    let nonempty = |v: &[usize], what: &str| -> Result<(), CliError> {
        if v.is_empty() || v.contains(&0) {
            return Err(usage(format!("{what} must be a non-empty list of positive integers")));
        }
        Ok(())
    };
    match &cli.command {
        Command::Series { input, order, .. } => {
            check_case_args(input)?;
            check_heavy(heavy, order / 2, 0)?;
        }
        Command::Pade { input, m, l, .. } => {
            check_case_args(input)?;
            check_heavy(heavy, (*m).max(l.unwrap_or(0)), 0)?;
        }
        Command::Roots { input, m, band, .. } => {
            check_case_args(input)?;
            if *m == 0 {
                return Err(usage("--M must be positive"));
            }
            if !(*band > 0.0) {
                return Err(usage("--band must be positive"));
            }
            check_heavy(heavy, *m, 0)?;
        }
        Command::Cf { input, alphas, m_list, .. } => {
            check_case_args(input)?;
            nonempty(m_list, "--M-list")?;
            if alphas.is_empty() || alphas.iter().any(|a| !a.is_finite()) {
                return Err(usage("--alphas must be a non-empty list of finite numbers"));
            }
            check_heavy(heavy, *m_list.iter().max().unwrap(), 0)?;
        }
        Command::Slope { input, fractions, m_list } => {
            check_case_args(input)?;
            nonempty(m_list, "--M-list")?;
            if fractions.len() < 3 || fractions.iter().any(|f| !(*f > 0.0 && *f < 1.0)) {
                return Err(usage("--fractions needs at least three values in (0, 1)"));
            }
            check_heavy(heavy, *m_list.iter().max().unwrap(), 0)?;
        }
        Command::Fekete { seg, n, .. } => {
            check_segment(seg)?;
            if *n < 2 {
                return Err(usage("--N must be at least 2"));
            }
            check_heavy(heavy, 0, *n)?;
        }
        Command::Capacity { seg, n, .. } => {
            check_segment(seg)?;
            if n.is_empty() || n.iter().any(|&k| k < 2) {
                return Err(usage("--N must list counts of at least 2"));
            }
            check_heavy(heavy, 0, *n.iter().max().unwrap())?;
        }
        Command::Field { seg, input, n, m, probes, trim, .. } => {
            check_segment(seg)?;
            check_case_args(input)?;
            if !(0.0..0.5).contains(trim) {
                return Err(usage("--trim must lie in [0, 0.5)"));
            }
            if *probes < 3 || *n < 2 || *m == 0 {
                return Err(usage("--probes ≥ 3, --N ≥ 2 and --M ≥ 1 required"));
            }
            check_heavy(heavy, *m, *n)?;
        }
        Command::Diagnose { input, m_list, band, n } => {
            check_case_args(input)?;
            nonempty(m_list, "--M-list")?;
            if band.is_some_and(|b| !(b > 0.0)) {
                return Err(usage("--band must be positive"));
            }
            check_heavy(heavy, *m_list.iter().max().unwrap(), *n)?;
        }
    }
    Ok(())
}

/// Built-in fixture cases.
pub fn fixture_case(f: Fixture) -> Result<NetworkCase, hem::HemError> {
    match f {
        Fixture::TwobusAsym => hem::calibrate_two_bus(-1.0 / 3.0, 1.0),
        Fixture::TwobusSym => hem::calibrate_two_bus(-1.0, 1.0),
    }
}

fn load_case(c: &CaseArgs) -> Result<NetworkCase, CliError> {
    let mut case = if let Some(p) = &c.case {
        io::parse_case_native(&io::read_file(p).map_err(|e| CliError::Ingest(e.into()))?)
            .map_err(|e| CliError::Ingest(e.into()))?
    } else if let Some(p) = &c.matpower {
        io::parse_matpower(&io::read_file(p).map_err(|e| CliError::Ingest(e.into()))?)
            .map_err(|e| CliError::Ingest(e.into()))?
    } else {
        fixture_case(c.fixture).map_err(numeric("fixture"))?
    };
    if c.scale != 1.0 {
        case.scale_injections(c.scale);
    }
    Ok(case)
}

fn series_for(case: &NetworkCase, bus: Option<u32>, order: usize) -> Result<(hem::EmbeddedSolution, u32), CliError> {
    let sol = hem::hem_series(case, order).map_err(numeric(format!("hem_series order={order}")))?;
    let bus = bus.unwrap_or_else(|| diagnostics::default_bus(&sol));
    if sol.voltage(bus).is_none() {
        return Err(usage(format!("unknown bus {bus}")));
    }
    Ok((sol, bus))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => crate::io::write_text(p, text).map_err(|e| CliError::Ingest(e.into())),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Ingest(io_err(e))),
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(io::IoError::File { path: "<stdout>".into(), source: e })
}

fn say(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    emit(out, None, text)
}

fn fekete(a: f64, b: f64, n: usize, max_iter: usize) -> Result<potential::FeketeSolution, CliError> {
    let curve = PlanarCurve::segment(a, b).map_err(numeric(format!("segment [{a}, {b}]")))?;
    match potential::fekete_points(&curve, n, max_iter) {
        Ok(s) => Ok(s),
        Err(PotentialError::MaxIterReached { iterations, stationarity, best }) => {
            log::warn!("fekete N={n}: stopped after {iterations} iterations (stationarity {stationarity:.2e})");
            Ok(*best)
        }
        Err(e) => Err(numeric(format!("fekete_points N={n} on [{a}, {b}]"))(e)),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    validate(cli)?;
    match &cli.command {
        Command::Series { input, order, all, out: path } => {
            let case = load_case(input)?;
            let (sol, bus) = series_for(&case, input.bus, *order)?;
            let mut s = String::from("bus,k,re,im\n");
            for (id, v) in sol.bus_ids.iter().zip(&sol.voltages) {
                if *all || *id == bus {
                    for (k, c) in v.coeffs().iter().enumerate() {
                        let _ = writeln!(s, "{id},{k},{},{}", io::fmt_num(c.re), io::fmt_num(c.im));
                    }
                }
            }
            emit(out, path.as_deref(), &s)
        }
        Command::Pade { input, m, l, out: path } => {
            let l = l.unwrap_or(*m);
            let case = load_case(input)?;
            let (sol, bus) = series_for(&case, input.bus, l + m)?;
            let pa = pade::build_pade(sol.voltage(bus).unwrap(), l, *m)
                .map_err(numeric(format!("build_pade L={l} M={m} bus={bus}")))?;
            let mut s = String::from("part,k,re,im\n");
            for (part, p) in [("num", &pa.numerator), ("den", &pa.denominator)] {
                for (k, c) in p.coeffs().iter().enumerate() {
                    let _ = writeln!(s, "{part},{k},{},{}", io::fmt_num(c.re), io::fmt_num(c.im));
                }
            }
            log::info!("[{l}/{m}] condition {:.3e}", pa.condition);
            emit(out, path.as_deref(), &s)
        }
        Command::Roots { input, m, out_dir, narrow, band } => {
            let case = load_case(input)?;
            let (sol, bus) = series_for(&case, input.bus, 2 * m)?;
            let (_, rs) = pade::diagonal_roots(sol.voltage(bus).unwrap(), *m)
                .map_err(numeric(format!("roots M={m} bus={bus}")))?;
            let ingest = |e: io::IoError| CliError::Ingest(e.into());
            let stem = format!("roots_M{m}");
            let csv = out_dir.join(format!("{stem}.csv"));
            io::write_roots_csv(&rs, &csv).map_err(ingest)?;
            let title = format!("[{m}/{m}] bus {bus}");
            let alpha_svg = out_dir.join(format!("{stem}_alpha.svg"));
            io::write_svg_scatter(&rs, &PlotSpec::table_alpha(format!("{title}, alpha plane")), &alpha_svg).map_err(ingest)?;
            let inv_spec = if *narrow {
                PlotSpec::narrow_inverse(format!("{title}, inverse plane"))
            } else {
                PlotSpec::table_inverse(format!("{title}, inverse plane"))
            };
            let inv_svg = out_dir.join(format!("{stem}_inv.svg"));
            io::write_svg_scatter(&rs, &inv_spec, &inv_svg).map_err(ingest)?;
            let real: Vec<f64> = rs.inv(RootKind::Both).iter().filter(|z| z.im.abs() <= *band).map(|z| z.re).collect();
            let mut s = format!(
                "bus {bus}: {} poles, {} zeros\n",
                rs.poles_alpha.len(),
                rs.zeros_alpha.len()
            );
            if !real.is_empty() {
                let lo = real.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = real.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let _ = writeln!(s, "inverse-plane real-axis roots (|Im| <= {band}): {} spanning [{lo:.4}, {hi:.4}]", real.len());
            }
            for p in [&csv, &alpha_svg, &inv_svg] {
                let _ = writeln!(s, "wrote {}", p.display());
            }
            say(out, &s)
        }
        Command::Cf { input, alphas, m_list, out: path } => {
            let case = load_case(input)?;
            let m_max = *m_list.iter().max().unwrap();
            let (_, bus) = series_for(&case, input.bus, 2 * m_max)?;
            let profiles = diagnostics::cf_curve(&case, bus, alphas, m_list)
                .map_err(numeric(format!("cf_curve bus={bus} M<={m_max}")))?;
            emit(out, path.as_deref(), &io::cf_csv(&profiles))
        }
        Command::Slope { input, fractions, m_list } => {
            let case = load_case(input)?;
            let m_max = *m_list.iter().max().unwrap();
            let (_, bus) = series_for(&case, input.bus, 2 * m_max)?;
            let bp = match hem::two_bus_branch_points(&case) {
                Ok((_, pos)) if pos.is_finite() => pos,
                _ => hem::locate_positive_branch_point(&case, 1e-8).map_err(numeric("locate_positive_branch_point"))?,
            };
            let alphas: Vec<f64> = fractions.iter().map(|f| f * bp).collect();
            let profiles = diagnostics::cf_curve(&case, bus, &alphas, m_list)
                .map_err(numeric(format!("cf_curve bus={bus}")))?;
            let mut s = String::new();
            for p in &profiles {
                let cf = p.cf_hat.map_or("-".to_string(), |c| format!("{c:.6}"));
                let _ = writeln!(s, "alpha {:.6}  cf {cf}", p.alpha.re);
            }
            let bcc = diagnostics::slope_at_origin(&profiles).map_err(numeric(format!("slope_at_origin bus={bus}")))?;
            let _ = writeln!(s, "positive branch point {bp:.6}");
            let _ = writeln!(s, "empirical BCC {bcc:.4}");
            say(out, &s)
        }
        Command::Fekete { seg, n, max_iter, out: path } => {
            let (a, b) = check_segment(seg)?;
            let sol = fekete(a, b, *n, *max_iter)?;
            let mut s = String::from("x,y,weight\n");
            for (p, w) in sol.config.points().iter().zip(sol.config.weights()) {
                let _ = writeln!(s, "{},{},{}", io::fmt_num(p[0]), io::fmt_num(p[1]), io::fmt_num(*w));
            }
            let cap = potential::capacity_estimate(&sol.config).map_err(numeric("capacity_estimate"))?;
            log::info!("N={n}: energy {:.10}, cap_est {cap:.6}, {} iterations", sol.energy, sol.iterations);
            emit(out, path.as_deref(), &s)
        }
        Command::Capacity { seg, n, out: path } => {
            let (a, b) = check_segment(seg)?;
            let mut rows = Vec::new();
            for &k in n {
                let sol = fekete(a, b, k, potential::FEKETE_MAX_ITER)?;
                let cap = potential::capacity_estimate(&sol.config).map_err(numeric(format!("capacity_estimate N={k}")))?;
                rows.push(CapacityRow { n: k, energy: sol.energy, cap_est: cap });
            }
            emit(out, path.as_deref(), &io::capacity_csv(&rows))
        }
        Command::Field { seg, source, input, n, m, probes, trim } => {
            let (a, b) = check_segment(seg)?;
            let cfg: ChargeConfiguration = match source {
                FieldSource::Fekete => fekete(a, b, *n, potential::FEKETE_MAX_ITER)?.config,
                FieldSource::Poles | FieldSource::Zeros => {
                    let case = load_case(input)?;
                    let (sol, bus) = series_for(&case, input.bus, 2 * m)?;
                    let (_, rs) = pade::diagonal_roots(sol.voltage(bus).unwrap(), *m)
                        .map_err(numeric(format!("roots M={m} bus={bus}")))?;
                    let which = if *source == FieldSource::Poles { RootKind::Poles } else { RootKind::Zeros };
                    diagnostics::roots_as_charges(&rs, which).map_err(numeric(format!("roots_as_charges M={m}")))?
                }
            };
            let r = diagnostics::field_residual_report(&cfg, (a, b), *probes, *trim);
            let s = format!(
                "charges {}\nprobe offset {:.6}\ntangential max {:.6e}\nnormal mean {:.6e}\nratio {:.6e}\n",
                cfg.len(),
                r.offset,
                r.tangential_max,
                r.normal_mean,
                r.tangential_max / r.normal_mean
            );
            say(out, &s)
        }
        Command::Diagnose { input, m_list, band, n } => {
            let case = load_case(input)?;
            let opts = DiagnoseOptions {
                bus: input.bus,
                m_trend: m_list.clone(),
                band: *band,
                fekete_n: *n,
                ..Default::default()
            };
            let d = diagnostics::diagnose(&case, &opts).map_err(numeric("diagnose"))?;
            say(out, &d.to_string())
        }
    }
}
