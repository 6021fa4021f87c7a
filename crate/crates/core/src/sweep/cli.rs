//! Command-line front end.
//!
//! Values resolve as command line, then `--config` file, then built-in
//! defaults. Exit codes: 0 success, 1 usage error, 2 numerical failure,
//! 3 I/O failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use super::config::{Config, ConfigError};
use super::csv::{self, format_sig9};
use super::heatmap::{self, Metric};
use super::{find_extrema, run_sweep, run_sweep_with_threads, MinTime, SweepError, SweepGrid};
use crate::dynamics::{self, DynamicsError, InitTimeResult};
use crate::model::{self, DensityMatrix, Level, RateSet, DIM};
use crate::rabi::{self, CavityParams, DotParams, OverlapFactors, PathOverlaps, RabiError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Every key a config file may set.
pub const CONFIG_KEYS: &[&str] = &[
    "omega-ghz",
    "gamma-ghz",
    "gamma12-khz",
    "gamma25-khz",
    "gamma-p-ghz",
    "grid",
    "out",
    "svg",
    "metric",
    "threads",
    "threshold",
    "t-max-ns",
    "steps",
    "eta",
    "power-uw",
    "q",
    "n-index",
    "mode-volume-m3",
    "lambda-cavity-nm",
    "r-cv-nm",
    "me-eff",
    "mh-eff",
    "hbar-omega-e-mev",
    "hbar-omega-h-mev",
    "lambda-ss-nm",
    "lambda-laser-nm",
    "field-ratio",
    "alignment",
];

#[derive(Debug)]
enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(format!("config: {e}"))
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Model(model::ModelError::InvalidRate { .. }) | DynamicsError::InvalidThreshold(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<model::ModelError> for CliError {
    fn from(e: model::ModelError) -> Self {
        DynamicsError::Model(e).into()
    }
}

impl From<RabiError> for CliError {
    fn from(e: RabiError) -> Self {
        match e {
            RabiError::InvalidParameter { .. } => CliError::Usage(e.to_string()),
            RabiError::ResonantIntermediate { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::InvalidGrid(_) => CliError::Usage(e.to_string()),
            SweepError::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

fn io_error(context: &str, path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{context} {}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(name = "spin-init", version, about = "Electron-spin initialization in a charged quantum dot: master-equation fidelity, speed and two-photon Rabi rate")]
struct Cli {
    /// key = value file supplying defaults for any long flag
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Default)]
struct RateArgs {
    /// Two-photon Rabi rate Ω/2π in GHz [default: 0.5]
    #[arg(long, allow_negative_numbers = true)]
    omega_ghz: Option<f64>,
    /// Purcell-enhanced emission rate Γ/2π in GHz [default: 10]
    #[arg(long, allow_negative_numbers = true)]
    gamma_ghz: Option<f64>,
    /// Spin-flip rate γ₁₂/2π in kHz [default: 10]
    #[arg(long, allow_negative_numbers = true)]
    gamma12_khz: Option<f64>,
    /// Trion decay into spin down γ₂₅/2π in kHz [default: 100]
    #[arg(long, allow_negative_numbers = true)]
    gamma25_khz: Option<f64>,
    /// p-shell relaxation γ₃₅/2π = γ₄₅/2π in GHz [default: 8]
    #[arg(long, allow_negative_numbers = true)]
    gamma_p_ghz: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stationary density matrix and fidelity
    Steady {
        #[command(flatten)]
        rates: RateArgs,
    },
    /// Populations ρ₁₁..ρ₅₅ over time from the unpolarized state, as CSV
    Evolve {
        #[command(flatten)]
        rates: RateArgs,
        /// Final time in ns [default: 5]
        #[arg(long, allow_negative_numbers = true)]
        t_max_ns: Option<f64>,
        /// Number of time steps [default: 50]
        #[arg(long, allow_negative_numbers = true)]
        steps: Option<usize>,
        /// Write the table here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Initialization time and speed, or UNREACHABLE
    InitTime {
        #[command(flatten)]
        rates: RateArgs,
        /// Target ρ₁₁ [default: 1 - 1/e]
        #[arg(long, allow_negative_numbers = true)]
        threshold: Option<f64>,
    },
    /// Sweep the (Ω, Γ) plane into CSV and optionally SVG
    Sweep {
        #[command(flatten)]
        rates: RateArgs,
        /// omega:min:max:count:lin|log,gamma:min:max:count:lin|log
        #[arg(long)]
        grid: Option<String>,
        /// CSV destination [default: stdout]
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// SVG heat-map destination
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// Heat-map metric: fidelity|t_init|speed [default: fidelity]
        #[arg(long)]
        metric: Option<String>,
        /// Worker threads [default: all cores]
        #[arg(long, allow_negative_numbers = true)]
        threads: Option<usize>,
    },
    /// Effective two-photon Rabi rate Ω/2π from cavity and dot parameters
    Rabi(RabiArgs),
}

#[derive(Debug, Args)]
struct RabiArgs {
    /// In-coupling efficiency [default: 0.02]
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Excitation power outside the cavity in μW [default: 50]
    #[arg(long, allow_negative_numbers = true)]
    power_uw: Option<f64>,
    /// Cavity quality factor [default: 5000]
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Refractive index [default: 3.4]
    #[arg(long, allow_negative_numbers = true)]
    n_index: Option<f64>,
    /// Mode volume in m³ [default: (λ_cavity/n)³]
    #[arg(long, allow_negative_numbers = true)]
    mode_volume_m3: Option<f64>,
    /// Cavity resonance in nm [default: 1800]
    #[arg(long, allow_negative_numbers = true)]
    lambda_cavity_nm: Option<f64>,
    /// Interband dipole length in nm [default: 0.6]
    #[arg(long, allow_negative_numbers = true)]
    r_cv_nm: Option<f64>,
    /// Electron effective mass in units of m₀ [default: 0.07]
    #[arg(long, allow_negative_numbers = true)]
    me_eff: Option<f64>,
    /// Hole effective mass in units of m₀ [default: 0.34]
    #[arg(long, allow_negative_numbers = true)]
    mh_eff: Option<f64>,
    /// Conduction-band confinement quantum in meV [default: 50]
    #[arg(long, allow_negative_numbers = true)]
    hbar_omega_e_mev: Option<f64>,
    /// Valence-band confinement quantum in meV [default: 25]
    #[arg(long, allow_negative_numbers = true)]
    hbar_omega_h_mev: Option<f64>,
    /// s–s transition wavelength in nm [default: 930]
    #[arg(long, allow_negative_numbers = true)]
    lambda_ss_nm: Option<f64>,
    /// Laser wavelength in nm [default: 1800]
    #[arg(long, allow_negative_numbers = true)]
    lambda_laser_nm: Option<f64>,
    /// |E(r)|/|E(r_M)| applied to every leg [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    field_ratio: Option<f64>,
    /// Dipole/polarization projection applied to every leg [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    alignment: Option<f64>,
}

/// Command line first, then config, then default.
struct Resolver {
    config: Config,
}

impl Resolver {
    fn pick<T: FromStr>(&self, cli: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.pick_opt(cli, key)?.unwrap_or(default))
    }

    fn pick_opt<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => Ok(self.config.get(key)?),
        }
    }

    fn rates(&self, args: &RateArgs) -> Result<RateSet, CliError> {
        let gamma_p = self.pick(args.gamma_p_ghz, "gamma-p-ghz", RateSet::DEFAULT_GAMMA_P)?;
        let rates = RateSet {
            omega: self.pick(args.omega_ghz, "omega-ghz", 0.5)?,
            gamma15: self.pick(args.gamma_ghz, "gamma-ghz", 10.0)?,
            gamma25: self.pick(args.gamma25_khz, "gamma25-khz", RateSet::DEFAULT_GAMMA25 * 1e6)? * 1e-6,
            gamma35: gamma_p,
            gamma45: gamma_p,
            gamma12: self.pick(args.gamma12_khz, "gamma12-khz", RateSet::DEFAULT_GAMMA12 * 1e6)? * 1e-6,
        };
        rates.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(rates)
    }
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn cli_main<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match run(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<Config, CliError> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = fs::read_to_string(path).map_err(|e| io_error("cannot read config", path, e))?;
    let config = Config::parse(&text)?;
    config.check_keys(CONFIG_KEYS)?;
    Ok(config)
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let resolver = Resolver { config: load_config(cli.config.as_deref())? };
    let stdout_err = |e: std::io::Error| CliError::Io(format!("cannot write output: {e}"));

    match cli.command {
        Command::Steady { rates } => {
            let rates = resolver.rates(&rates)?;
            let l = model::build_liouvillian(&rates)?;
            let rho = dynamics::steady_state(&l)?;
            write_steady(out, &rates, &rho).map_err(stdout_err)?;
        }
        Command::Evolve { rates, t_max_ns, steps, out: path } => {
            let rates = resolver.rates(&rates)?;
            let t_max = resolver.pick(t_max_ns, "t-max-ns", 5.0)?;
            let steps = resolver.pick(steps, "steps", 50usize)?;
            let path = resolver.pick_opt(path, "out")?;
            if t_max.is_nan() || t_max <= 0.0 || steps == 0 {
                return Err(CliError::Usage("t-max-ns must be positive and steps at least 1".into()));
            }
            let l = model::build_liouvillian(&rates)?;
            let rho0 = DensityMatrix::unpolarized();
            let mut table = String::from("t_ns,rho11,rho22,rho33,rho44,rho55\n");
            for k in 0..=steps {
                let t = t_max * k as f64 / steps as f64;
                let rho = dynamics::evolve(&l, &rho0, t)?;
                let pops: Vec<String> = rho.populations().iter().map(|&p| format_sig9(p)).collect();
                table.push_str(&format!("{},{}\n", format_sig9(t), pops.join(",")));
            }
            emit(out, path.as_deref(), &table)?;
        }
        Command::InitTime { rates, threshold } => {
            let rates = resolver.rates(&rates)?;
            let threshold = resolver.pick(threshold, "threshold", dynamics::DEFAULT_THRESHOLD)?;
            let result = dynamics::init_time(&rates, threshold)?;
            match result {
                InitTimeResult::Reached { t_init } => {
                    let speed = result.speed_ghz().map_or("inf".to_string(), format_sig9);
                    writeln!(out, "t_init_ns = {}", format_sig9(t_init)).map_err(stdout_err)?;
                    writeln!(out, "speed_ghz = {speed}").map_err(stdout_err)?;
                }
                InitTimeResult::Unreachable { steady_fidelity } => {
                    writeln!(
                        out,
                        "UNREACHABLE (steady-state fidelity {} < threshold {})",
                        format_sig9(steady_fidelity),
                        format_sig9(threshold)
                    )
                    .map_err(stdout_err)?;
                }
            }
        }
        Command::Sweep { rates, grid, out: path, svg, metric, threads } => {
            let fixed = resolver.rates(&rates)?;
            let mut sweep_grid = SweepGrid::standard().with_fixed_rates(fixed);
            if let Some(spec) = resolver.pick_opt(grid, "grid")? {
                sweep_grid.apply_axes(&spec)?;
            }
            let metric: Metric = resolver
                .pick_opt(metric, "metric")?
                .map_or(Ok(Metric::Fidelity), |m: String| m.parse().map_err(CliError::Usage))?;
            let path: Option<PathBuf> = resolver.pick_opt(path, "out")?;
            let svg: Option<PathBuf> = resolver.pick_opt(svg, "svg")?;
            let threads: Option<usize> = resolver.pick_opt(threads, "threads")?;

            let records = match threads {
                Some(0) => return Err(CliError::Usage("threads must be at least 1".into())),
                Some(n) => run_sweep_with_threads(&sweep_grid, n)?,
                None => run_sweep(&sweep_grid)?,
            };
            emit(out, path.as_deref(), &csv::to_csv_string(&records))?;
            if let Some(svg) = svg {
                let doc = heatmap::render_heatmap(&records, metric)?;
                fs::write(&svg, doc).map_err(|e| io_error("cannot write", &svg, e))?;
            }
            // keep stdout pure CSV when no file was given
            let summary: &mut dyn Write = if path.is_some() { out } else { err };
            write_extrema(summary, &records).map_err(stdout_err)?;
        }
        Command::Rabi(args) => {
            let (cavity, dot, overlaps) = rabi_inputs(&resolver, &args)?;
            let eval = rabi::evaluate_two_photon_rabi(&cavity, &dot, &overlaps)?;
            write_rabi(out, &eval).map_err(stdout_err)?;
        }
    }
    Ok(())
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_error("cannot write", p, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
    }
}

fn write_steady(out: &mut dyn Write, rates: &RateSet, rho: &DensityMatrix) -> std::io::Result<()> {
    writeln!(
        out,
        "rates (GHz, /2pi): omega = {}, gamma15 = {}, gamma25 = {}, gamma35 = {}, gamma45 = {}, gamma12 = {}",
        format_sig9(rates.omega),
        format_sig9(rates.gamma15),
        format_sig9(rates.gamma25),
        format_sig9(rates.gamma35),
        format_sig9(rates.gamma45),
        format_sig9(rates.gamma12)
    )?;
    writeln!(out, "steady-state density matrix (re, im):")?;
    let m = rho.matrix();
    for i in 0..DIM {
        let row: Vec<String> = (0..DIM).map(|j| format!("{:+.6e}{:+.6e}i", m[(i, j)].re, m[(i, j)].im)).collect();
        writeln!(out, "  {}", row.join("  "))?;
    }
    let pops: Vec<String> =
        Level::ALL.iter().map(|l| format!("rho{0}{0} = {1}", l.label(), format_sig9(rho.population(*l)))).collect();
    writeln!(out, "populations: {}", pops.join(", "))?;
    writeln!(out, "fidelity = {}", format_sig9(rho.population(Level::SpinUp)))
}

fn write_extrema(out: &mut dyn Write, records: &[super::SweepRecord]) -> std::io::Result<()> {
    let Ok(ex) = find_extrema(records) else {
        return Ok(());
    };
    let best = ex.max_fidelity;
    writeln!(
        out,
        "max fidelity {} at omega = {} GHz, gamma = {} GHz",
        format_sig9(best.fidelity),
        format_sig9(best.omega_ghz),
        format_sig9(best.gamma_ghz)
    )?;
    match ex.min_time {
        MinTime::Found(r) => writeln!(
            out,
            "min t_init {} ns (speed {} GHz) at omega = {} GHz, gamma = {} GHz",
            format_sig9(r.t_init_ns.unwrap_or(f64::NAN)),
            r.speed_ghz.map_or("inf".to_string(), format_sig9),
            format_sig9(r.omega_ghz),
            format_sig9(r.gamma_ghz)
        ),
        MinTime::NoReachablePoint => writeln!(out, "min t_init: no reachable point"),
    }
}

fn rabi_inputs(r: &Resolver, a: &RabiArgs) -> Result<(CavityParams, DotParams, [PathOverlaps; 2]), CliError> {
    let reference = CavityParams::reference();
    let dot_default = DotParams::default();
    let n = r.pick(a.n_index, "n-index", reference.n)?;
    let lambda_cavity = r.pick(a.lambda_cavity_nm, "lambda-cavity-nm", reference.lambda_cavity * 1e9)? * 1e-9;
    let cavity = CavityParams {
        eta: r.pick(a.eta, "eta", reference.eta)?,
        power: r.pick(a.power_uw, "power-uw", reference.power * 1e6)? * 1e-6,
        q: r.pick(a.q, "q", reference.q)?,
        n,
        mode_volume: r.pick(a.mode_volume_m3, "mode-volume-m3", rabi::cubic_mode_volume(lambda_cavity, n))?,
        lambda_cavity,
    };
    let m0 = rabi::constants::ELECTRON_MASS;
    let mev = 1e-3 * rabi::constants::ELECTRON_VOLT;
    let dot = DotParams {
        r_cv: r.pick(a.r_cv_nm, "r-cv-nm", dot_default.r_cv * 1e9)? * 1e-9,
        m_e_eff: r.pick(a.me_eff, "me-eff", dot_default.m_e_eff / m0)? * m0,
        m_h_eff: r.pick(a.mh_eff, "mh-eff", dot_default.m_h_eff / m0)? * m0,
        hbar_omega_e: r.pick(a.hbar_omega_e_mev, "hbar-omega-e-mev", dot_default.hbar_omega_e / mev)? * mev,
        hbar_omega_h: r.pick(a.hbar_omega_h_mev, "hbar-omega-h-mev", dot_default.hbar_omega_h / mev)? * mev,
        lambda_ss: r.pick(a.lambda_ss_nm, "lambda-ss-nm", dot_default.lambda_ss * 1e9)? * 1e-9,
        lambda_laser: r.pick(a.lambda_laser_nm, "lambda-laser-nm", dot_default.lambda_laser * 1e9)? * 1e-9,
    };
    let leg = OverlapFactors::new(r.pick(a.field_ratio, "field-ratio", 1.0)?, r.pick(a.alignment, "alignment", 1.0)?)?;
    let path = PathOverlaps { ground_leg: leg, excited_leg: leg };
    Ok((cavity, dot, [path; 2]))
}

fn write_rabi(out: &mut dyn Write, eval: &rabi::RabiEvaluation) -> std::io::Result<()> {
    writeln!(out, "omega_over_2pi_ghz = {}", format_sig9(eval.omega_ghz))?;
    writeln!(out, "spectral_factor = {}", format_sig9(eval.spectral_factor))?;
    for (i, p) in eval.paths.iter().enumerate() {
        writeln!(
            out,
            "path {}: detuning/2pi = {} Hz, contribution = {} GHz",
            i + 1,
            format_sig9(p.detuning / std::f64::consts::TAU),
            format_sig9(eval.prefactor * p.contribution() / std::f64::consts::TAU / 1e9)
        )?;
    }
    writeln!(out, "quoted reference value = {} GHz", format_sig9(rabi::QUOTED_REFERENCE_OMEGA_GHZ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("spin-init").chain(args.iter().copied());
        let code = cli_main(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, out, err) = run_cli(&["steady", "--omega", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, out, _) = run_cli(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("init-time"));
    }

    #[test]
    fn negative_rate_is_usage_error() {
        let (code, _, err) = run_cli(&["steady", "--gamma-ghz", "-3"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("gamma15"));
    }

    #[test]
    fn degenerate_steady_state_is_numerical_failure() {
        let (code, _, _) = run_cli(&["steady", "--omega-ghz", "0", "--gamma12-khz", "0"]);
        assert_eq!(code, EXIT_NUMERICAL);
    }

    #[test]
    fn missing_config_is_io_failure() {
        let (code, _, _) = run_cli(&["steady", "--config", "/nonexistent/spin-init.conf"]);
        assert_eq!(code, EXIT_IO);
    }

    #[test]
    fn bad_metric_is_usage_error() {
        let (code, _, _) = run_cli(&["sweep", "--grid", "omega:0.5:0.5:1:lin,gamma:10:10:1:lin", "--metric", "purity"]);
        assert_eq!(code, EXIT_USAGE);
    }
}
