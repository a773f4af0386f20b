//! Command-line front end: every derived quantity as a deterministic CSV
//! table, plus the regression runner.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use graphene_cs::dynamics;
use graphene_cs::observables;
use graphene_cs::profile::{self, ProfileMode};
use graphene_cs::regress;
use graphene_cs::spectrum;
use graphene_cs::table::Table;
use graphene_cs::{
    build_coherent_polar, Branch, CoherentExpansion, Family, GridSpec, LadderFunction,
    PhysicalParams, System,
};

#[derive(Parser)]
#[command(
    name = "graphene-cs",
    version,
    about = "Coherent states of electrons in mono- and bilayer graphene in a magnetic field",
    after_help = "Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 regression failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Landau levels: columns (n, energy, gap)
    Spectrum(CommonArgs),
    /// Coherent-state coefficients: columns (n, re, im, weight)
    Coherent(CommonArgs),
    /// Uncertainty products over an (r, theta) sweep
    Uncertainty(CommonArgs),
    /// Density and currents along x: columns (theta, x, rho, jx, jy), currents in units of hbar/m*
    Profile(CommonArgs),
    /// Evolved density table: columns (x, t, rho)
    Evolve(CommonArgs),
    /// Mean energy versus r per field strength: columns (b_field, r, energy)
    Energy(CommonArgs),
    /// Quasi-period report: one row (mean_energy, level_below, level_above, tau, tau_rounded_pi, revival_l2)
    Period(CommonArgs),
    /// Run all golden-value and property checks
    Regress(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Spectrum(a)
            | Command::Coherent(a)
            | Command::Uncertainty(a)
            | Command::Profile(a)
            | Command::Evolve(a)
            | Command::Energy(a)
            | Command::Period(a)
            | Command::Regress(a) => a,
        }
    }
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// bilayer | monolayer
    #[arg(long)]
    system: Option<String>,
    /// Coherent-state family: A | B | C
    #[arg(long)]
    family: Option<String>,
    /// Weight function: unit | shift1 | shift2 (default: the family's standard choice)
    #[arg(long)]
    f: Option<String>,
    /// Eigenvalue modulus; sweeps accept "a:b:step" or comma lists
    #[arg(long)]
    r: Option<String>,
    /// Eigenvalue phase in radians; sweeps accept "a:b:step" or comma lists
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Cyclotron frequency
    #[arg(long = "omega-c")]
    omega_c: Option<f64>,
    /// Oscillator parameter (1/length^2)
    #[arg(long)]
    omega: Option<f64>,
    /// Transverse wavenumber
    #[arg(long, allow_hyphen_values = true)]
    k: Option<f64>,
    /// Fermi velocity (monolayer spectrum)
    #[arg(long)]
    vf: Option<f64>,
    /// Field proxy; omega_c tracks it. The energy command accepts a comma list
    #[arg(long = "b-field")]
    b_field: Option<String>,
    #[arg(long = "grid-min", allow_hyphen_values = true)]
    grid_min: Option<f64>,
    #[arg(long = "grid-max", allow_hyphen_values = true)]
    grid_max: Option<f64>,
    #[arg(long = "grid-points")]
    grid_points: Option<usize>,
    /// Sample times; "a:b:step" or comma list
    #[arg(long)]
    times: Option<String>,
    /// Relative truncation tolerance of coefficient expansions
    #[arg(long)]
    tol: Option<f64>,
    /// Highest level listed by the spectrum command
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    /// Write the table here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value file with the same keys as the long flags; flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

enum AppError {
    Usage(String),
    Lib(graphene_cs::Error),
    Io(std::io::Error),
    Regression(usize),
}

impl From<graphene_cs::Error> for AppError {
    fn from(e: graphene_cs::Error) -> Self {
        AppError::Lib(e)
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

/// Flag values merged over the config file (flags win), before defaulting.
struct RawSettings {
    values: HashMap<&'static str, String>,
    out: Option<PathBuf>,
}

const KEYS: [&str; 16] = [
    "system", "family", "f", "r", "theta", "omega-c", "omega", "k", "vf", "b-field", "grid-min",
    "grid-max", "grid-points", "times", "tol", "n-max",
];

fn merge_settings(args: &CommonArgs) -> Result<RawSettings, AppError> {
    let mut values: HashMap<&'static str, String> = HashMap::new();
    if let Some(path) = &args.config {
        for (lineno, line) in read_text(path)?.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(AppError::Usage(format!(
                    "{}:{}: expected key=value",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim();
            let Some(canon) = KEYS.iter().find(|k| **k == key) else {
                return Err(AppError::Usage(format!(
                    "{}:{}: unknown key '{key}'",
                    path.display(),
                    lineno + 1
                )));
            };
            values.insert(canon, value.trim().to_string());
        }
    }
    let flag_pairs: [(&'static str, Option<String>); 16] = [
        ("system", args.system.clone()),
        ("family", args.family.clone()),
        ("f", args.f.clone()),
        ("r", args.r.clone()),
        ("theta", args.theta.clone()),
        ("omega-c", args.omega_c.map(|v| v.to_string())),
        ("omega", args.omega.map(|v| v.to_string())),
        ("k", args.k.map(|v| v.to_string())),
        ("vf", args.vf.map(|v| v.to_string())),
        ("b-field", args.b_field.clone()),
        ("grid-min", args.grid_min.map(|v| v.to_string())),
        ("grid-max", args.grid_max.map(|v| v.to_string())),
        ("grid-points", args.grid_points.map(|v| v.to_string())),
        ("times", args.times.clone()),
        ("tol", args.tol.map(|v| v.to_string())),
        ("n-max", args.n_max.map(|v| v.to_string())),
    ];
    for (key, value) in flag_pairs {
        if let Some(v) = value {
            values.insert(key, v);
        }
    }
    Ok(RawSettings { values, out: args.out.clone() })
}

fn read_text(path: &Path) -> Result<String, AppError> {
    fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read {}: {e}", path.display())))
}

impl RawSettings {
    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, AppError>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|e| AppError::Usage(format!("invalid {key} '{s}': {e}"))),
        }
    }

    fn system(&self) -> Result<System, AppError> {
        match self.get("system").unwrap_or("bilayer") {
            "bilayer" => Ok(System::Bilayer),
            "monolayer" => Ok(System::Monolayer),
            other => Err(AppError::Usage(format!(
                "invalid system '{other}' (expected bilayer | monolayer)"
            ))),
        }
    }

    fn family(&self) -> Result<Family, AppError> {
        match self.get("family").unwrap_or("A") {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            other => Err(AppError::Usage(format!(
                "invalid family '{other}' (expected A | B | C)"
            ))),
        }
    }

    fn ladder(&self, family: Family) -> Result<LadderFunction, AppError> {
        match self.get("f") {
            None => Ok(family.standard_ladder()),
            Some("unit") => Ok(LadderFunction::Unit),
            Some("shift1") => Ok(LadderFunction::Shift1),
            Some("shift2") => Ok(LadderFunction::Shift2),
            Some(other) => Err(AppError::Usage(format!(
                "invalid f '{other}' (expected unit | shift1 | shift2)"
            ))),
        }
    }

    /// Parameters from the frequency/wavenumber keys, before any field proxy.
    fn params_base(&self) -> Result<PhysicalParams, AppError> {
        let omega = self.parse("omega", 1.0)?;
        let omega_c = self.parse("omega-c", 1.0)?;
        let k = self.parse("k", 1.0)?;
        let vf = self.parse("vf", 1.0)?;
        Ok(PhysicalParams::from_frequencies(omega, omega_c)?
            .with_wavenumber(k)?
            .with_fermi_velocity(vf)?)
    }

    fn params(&self) -> Result<PhysicalParams, AppError> {
        let mut p = self.params_base()?;
        if let Some(b) = self.get("b-field") {
            let b: f64 = b
                .parse()
                .map_err(|e| AppError::Usage(format!("invalid b-field '{b}': {e}")))?;
            p = p.with_b_field(b)?;
        }
        Ok(p)
    }

    fn grid(&self, params: &PhysicalParams) -> Result<GridSpec, AppError> {
        let width = 10.0 / params.omega().sqrt();
        let min = self.parse("grid-min", params.center() - width)?;
        let max = self.parse("grid-max", params.center() + width)?;
        let points = self.parse("grid-points", 2001usize)?;
        Ok(GridSpec::new(min, max, points)?)
    }

    fn tol(&self) -> Result<f64, AppError> {
        self.parse("tol", 1e-12)
    }

    fn sweep(&self, key: &str, default: &str) -> Result<Vec<f64>, AppError> {
        parse_sweep(self.get(key).unwrap_or(default))
            .map_err(|e| AppError::Usage(format!("invalid {key}: {e}")))
    }

    fn scalar(&self, key: &str, default: f64) -> Result<f64, AppError> {
        let v = self.sweep(key, &default.to_string())?;
        if v.len() != 1 {
            return Err(AppError::Usage(format!(
                "{key} must be a single value for this command"
            )));
        }
        Ok(v[0])
    }
}

/// "a:b:step" (inclusive within half a step), comma list, or single value.
fn parse_sweep(text: &str) -> Result<Vec<f64>, String> {
    let parse_one = |s: &str| -> Result<f64, String> {
        s.trim()
            .parse::<f64>()
            .map_err(|e| format!("'{}': {e}", s.trim()))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err("range syntax is start:stop:step".into());
        }
        let (start, stop, step) = (parse_one(parts[0])?, parse_one(parts[1])?, parse_one(parts[2])?);
        if step <= 0.0 || !step.is_finite() || stop < start {
            return Err("range needs stop >= start and step > 0".into());
        }
        let count = ((stop - start) / step + 0.5).floor() as usize;
        return Ok((0..=count).map(|i| start + step * i as f64).collect());
    }
    text.split(',').map(parse_one).collect()
}

fn build_expansion(
    system: System,
    family: Family,
    ladder: &LadderFunction,
    r: f64,
    theta: f64,
    tol: f64,
) -> Result<CoherentExpansion, AppError> {
    Ok(build_coherent_polar(system, family, ladder, r, theta, tol)?)
}

fn cmd_spectrum(s: &RawSettings) -> Result<Table, AppError> {
    let system = s.system()?;
    let params = s.params()?;
    let n_max = s.parse("n-max", 20usize)?;
    let mut t = Table::new(vec!["n", "energy", "gap"]);
    for n in 0..=n_max {
        let e = spectrum::landau_level(system, n, Branch::Electron, &params);
        let e_next = spectrum::landau_level(system, n + 1, Branch::Electron, &params);
        t.push(vec![n as f64, e, e_next - e])?;
    }
    Ok(t)
}

fn cmd_coherent(s: &RawSettings) -> Result<Table, AppError> {
    let system = s.system()?;
    let family = s.family()?;
    let ladder = s.ladder(family)?;
    let e = build_expansion(
        system,
        family,
        &ladder,
        s.scalar("r", 1.0)?,
        s.scalar("theta", 0.0)?,
        s.tol()?,
    )?;
    let mut t = Table::new(vec!["n", "re", "im", "weight"]);
    for (n, c) in e.coefficients().iter().enumerate() {
        t.push(vec![n as f64, c.re, c.im, c.norm_sqr()])?;
    }
    Ok(t)
}

fn cmd_uncertainty(s: &RawSettings) -> Result<Table, AppError> {
    let system = s.system()?;
    let family = s.family()?;
    let ladder = s.ladder(family)?;
    let params = s.params()?;
    let tol = s.tol()?;
    let radii = s.sweep("r", "0:3:0.25")?;
    let angles = s.sweep("theta", "0:6.283185307179586:0.39269908169872414")?;
    let mut t = Table::new(vec!["r", "theta", "mean_q", "mean_p", "mean_q2", "mean_p2", "product"]);
    for &r in &radii {
        for &theta in &angles {
            let e = build_expansion(system, family, &ladder, r, theta, tol)?;
            let rep = observables::moments_spectral(&e, &params)?;
            t.push(vec![r, theta, rep.mean_q, rep.mean_p, rep.mean_q2, rep.mean_p2, rep.product])?;
        }
    }
    Ok(t)
}

fn cmd_profile(s: &RawSettings) -> Result<Table, AppError> {
    let system = s.system()?;
    let family = s.family()?;
    let ladder = s.ladder(family)?;
    let params = s.params()?;
    let grid = s.grid(&params)?;
    let r = s.scalar("r", 1.0)?;
    let angles = s.sweep("theta", "0,0.7853981633974483,1.5707963267948966")?;
    // Currents are reported in units of hbar/m*.
    let current_unit = params.m_star() / params.hbar();
    let mut t = Table::new(vec!["theta", "x", "rho", "jx", "jy"]);
    for &theta in &angles {
        let e = build_expansion(system, family, &ladder, r, theta, s.tol()?)?;
        let prof = profile::field_profile(&e, &grid, 0.0, ProfileMode::Generic, &params)?;
        for i in 0..prof.x.len() {
            t.push(vec![
                theta,
                prof.x[i],
                prof.rho[i],
                prof.jx[i] * current_unit,
                prof.jy[i] * current_unit,
            ])?;
        }
    }
    Ok(t)
}

fn default_times(
    e: &CoherentExpansion,
    params: &PhysicalParams,
) -> Result<Vec<f64>, AppError> {
    let tau = dynamics::quasi_period(e, params)?.tau;
    Ok((0..=4).map(|i| 0.25 * i as f64 * 2.0 * tau).collect())
}

fn cmd_evolve(s: &RawSettings) -> Result<Table, AppError> {
    let system = s.system()?;
    let family = s.family()?;
    let ladder = s.ladder(family)?;
    let params = s.params()?;
    let grid = s.grid(&params)?;
    let e = build_expansion(
        system,
        family,
        &ladder,
        s.scalar("r", 1.0)?,
        s.scalar("theta", 0.0)?,
        s.tol()?,
    )?;
    let times = match s.get("times") {
        Some(text) => parse_sweep(text).map_err(|e| AppError::Usage(format!("invalid times: {e}")))?,
        None => default_times(&e, &params)?,
    };
    let frames = dynamics::density_movie(&e, &grid, &times, &params)?;
    let mut t = Table::new(vec!["x", "t", "rho"]);
    for frame in &frames {
        for i in 0..frame.x.len() {
            t.push(vec![frame.x[i], frame.meta.t, frame.rho[i]])?;
        }
    }
    Ok(t)
}

fn cmd_energy(s: &RawSettings) -> Result<Table, AppError> {
    let system = s.system()?;
    let family = s.family()?;
    let base = s.params_base()?;
    let radii = s.sweep("r", "0:3:0.05")?;
    let fields = match s.get("b-field") {
        Some(text) => parse_sweep(text).map_err(|e| AppError::Usage(format!("invalid b-field: {e}")))?,
        None => vec![0.25, 1.0 / 6.0, 0.125],
    };
    let mut t = Table::new(vec!["b_field", "r", "energy"]);
    for &b in &fields {
        let params = base.with_b_field(b)?;
        for &r in &radii {
            let e = observables::mean_energy_series(system, family, r, &params)?;
            t.push(vec![b, r, e])?;
        }
    }
    Ok(t)
}

fn cmd_period(s: &RawSettings) -> Result<Table, AppError> {
    let system = s.system()?;
    let family = s.family()?;
    let ladder = s.ladder(family)?;
    let params = s.params()?;
    let grid = s.grid(&params)?;
    let e = build_expansion(
        system,
        family,
        &ladder,
        s.scalar("r", 1.0)?,
        s.scalar("theta", 0.0)?,
        s.tol()?,
    )?;
    let est = dynamics::quasi_period(&e, &params)?;
    let frames = dynamics::density_movie(&e, &grid, &[0.0, est.tau], &params)?;
    let revival = dynamics::revival_distance(&frames[0], &frames[1])?;
    let rounded = (est.tau / std::f64::consts::PI).round() * std::f64::consts::PI;
    let mut t = Table::new(vec![
        "mean_energy",
        "level_below",
        "level_above",
        "tau",
        "tau_rounded_pi",
        "revival_l2",
    ]);
    t.push(vec![est.mean_energy, est.level_below, est.level_above, est.tau, rounded, revival])?;
    Ok(t)
}

fn cmd_regress(out: Option<&Path>) -> Result<(), AppError> {
    let mut failed = 0usize;
    let mut total = 0usize;
    let mut report = String::new();
    for (criterion, checks) in regress::run_all() {
        report.push_str(&format!("criterion {criterion}\n"));
        for check in checks {
            total += 1;
            if !check.pass {
                failed += 1;
            }
            report.push_str(&format!("  {}\n", check.summary_line()));
        }
    }
    report.push_str(&format!("{} checks, {failed} failed\n", total));
    match out {
        Some(path) => fs::write(path, &report)?,
        None => print!("{report}"),
    }
    if failed > 0 {
        Err(AppError::Regression(failed))
    } else {
        Ok(())
    }
}

fn write_output(table: &Table, out: Option<&Path>) -> Result<(), AppError> {
    match out {
        Some(path) => {
            let mut file = fs::File::create(path)?;
            table.write_csv(&mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write_csv(&mut lock)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), AppError> {
    let raw = merge_settings(cli.command.args())?;
    let table = match &cli.command {
        Command::Spectrum(_) => cmd_spectrum(&raw)?,
        Command::Coherent(_) => cmd_coherent(&raw)?,
        Command::Uncertainty(_) => cmd_uncertainty(&raw)?,
        Command::Profile(_) => cmd_profile(&raw)?,
        Command::Evolve(_) => cmd_evolve(&raw)?,
        Command::Energy(_) => cmd_energy(&raw)?,
        Command::Period(_) => cmd_period(&raw)?,
        Command::Regress(_) => return cmd_regress(raw.out.as_deref()),
    };
    write_output(&table, raw.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own help/version output on stdout with exit 0.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
        Err(AppError::Io(e)) => {
            // A reader closing the pipe early (e.g. `... | head`) is not an error.
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                return ExitCode::SUCCESS;
            }
            eprintln!("io error: {e}");
            ExitCode::from(1)
        }
        Err(AppError::Regression(failed)) => {
            eprintln!("error: {failed} regression check(s) failed");
            ExitCode::from(3)
        }
    }
}
