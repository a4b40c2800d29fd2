//! Command-line front end: plot-ready CSV export for the distinguishability,
//! period/amplitude, and purity datasets, circuit text export, and a
//! symmetry report, driven by a flat key=value config file with manifest
//! replay and atomic output writes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::apt::{AptHamiltonian, ExperimentalFamily};
use crate::circuit::{export_circuit, parse_circuit, post_select, simulate};
use crate::error::{Error, Result};
use crate::lcu::{build_circuit, environment_view, DilationScheme};
use crate::nmr::{noise_monte_carlo, run_experiment, ExperimentConfig};
use crate::numerics::C64;
use crate::observables::{distinguishability_series, oscillation_metrics};

/// Environment variable consulted for the default output directory.
pub const ENV_OUT: &str = "APT_FLOW_OUT";
/// Sample count of the dense theory curves.
const CURVE_POINTS: usize = 1000;

#[derive(Parser, Debug)]
#[command(name = "apt-flow", version, about = "Anti-PT-symmetric qubit dynamics toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Distinguishability grid with Monte Carlo noise bands plus dense theory curves, one CSV pair per lambda.
    Fig3(CommonArgs),
    /// Oscillation period and amplitude swept over lambda.
    Fig4a(Fig4aArgs),
    /// Work-qubit purity curves over time, one CSV per lambda.
    Fig4b(CommonArgs),
    /// Write one dilation circuit in the text format and echo its size and success probability.
    ExportCircuit(CommonArgs),
    /// Print eigenvalues, regime, and symmetry verdicts for one Hamiltonian as JSON.
    Symmetry(SymmetryArgs),
}

/// Flags shared by the data-producing commands. Every value is optional;
/// unset flags fall back to the config file, then to the defaults that
/// reproduce the reference setup.
#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Flat key=value config file, or a manifest JSON to replay.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (fallback: config `out`, then $APT_FLOW_OUT, then `.`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Monte Carlo seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Coupling strength s.
    #[arg(long)]
    pub s: Option<f64>,
    /// Comma-separated lambda values.
    #[arg(long, value_delimiter = ',')]
    pub lambda: Option<Vec<f64>>,
    /// Final evolution time.
    #[arg(long)]
    pub t_final: Option<f64>,
    /// Sample count (fig3: grid points per lambda; fig4b: curve density).
    #[arg(long)]
    pub points: Option<usize>,
    /// Fractional noise level delta.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Monte Carlo trial count.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Dilation scheme: three[-qubit] or four[-qubit].
    #[arg(long)]
    pub scheme: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Fig4aArgs {
    /// Flat key=value config file, or a manifest JSON to replay.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (fallback: config `out`, then $APT_FLOW_OUT, then `.`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Coupling strength s.
    #[arg(long)]
    pub s: Option<f64>,
    /// First lambda of the sweep.
    #[arg(long)]
    pub lambda_min: Option<f64>,
    /// Last lambda of the sweep.
    #[arg(long)]
    pub lambda_max: Option<f64>,
    /// Number of sweep rows.
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct SymmetryArgs {
    /// Diagonal magnitude r.
    #[arg(long, default_value_t = 6.0)]
    pub r: f64,
    /// Diagonal phase theta.
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    /// Upper coupling s.
    #[arg(long, default_value_t = 3.0)]
    pub s: f64,
    /// Lower coupling mu.
    #[arg(long, default_value_t = 3.0)]
    pub mu: f64,
}

/// Record written next to every file-producing run; replaying it as
/// `--config` reproduces the outputs bitwise (duration aside).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub duration_ms: u64,
}

/// What `export-circuit` produced, for echoing.
#[derive(Debug, Clone)]
pub struct ExportReport {
    pub gate_count: usize,
    pub success_probability: f64,
    pub manifest: RunManifest,
}

/// Parses a config source: a flat key=value file (one pair per line, `#`
/// comments), or a previously written manifest detected by a leading `{`,
/// whose resolved config map is reused for replay.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    if text.trim_start().starts_with('{') {
        let manifest: RunManifest = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("malformed manifest: {e}")))?;
        return Ok(manifest.config);
    }
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "config line {}: expected key=value, got '{line}'",
                idx + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Merges flag > config file > default, recording every resolved value so
/// the manifest carries the complete effective config.
struct Resolver {
    map: BTreeMap<String, String>,
}

impl Resolver {
    fn new(config: Option<&Path>) -> Result<Self> {
        let map = match config {
            Some(path) => parse_config_text(&std::fs::read_to_string(path)?)?,
            None => BTreeMap::new(),
        };
        Ok(Self { map })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    fn parse_key<T: FromStr>(&self, key: &str, kind: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| {
                Error::Config(format!("config key {key}: expected {kind}, got '{raw}'"))
            }),
        }
    }

    fn f64(&mut self, key: &str, flag: Option<f64>, default: f64) -> Result<f64> {
        let value = match flag {
            Some(v) => v,
            None => self.parse_key(key, "a number")?.unwrap_or(default),
        };
        self.map.insert(key.into(), format!("{value}"));
        Ok(value)
    }

    fn usize(&mut self, key: &str, flag: Option<usize>, default: usize) -> Result<usize> {
        let value = match flag {
            Some(v) => v,
            None => self.parse_key(key, "a non-negative integer")?.unwrap_or(default),
        };
        self.map.insert(key.into(), format!("{value}"));
        Ok(value)
    }

    fn u64(&mut self, key: &str, flag: Option<u64>, default: u64) -> Result<u64> {
        let value = match flag {
            Some(v) => v,
            None => self.parse_key(key, "a non-negative integer")?.unwrap_or(default),
        };
        self.map.insert(key.into(), format!("{value}"));
        Ok(value)
    }

    fn lambdas(&mut self, flag: Option<Vec<f64>>, default: Vec<f64>) -> Result<Vec<f64>> {
        let value = match flag {
            Some(v) => v,
            None => match self.raw("lambdas") {
                Some(raw) => raw
                    .split(',')
                    .map(|item| {
                        item.trim().parse().map_err(|_| {
                            Error::Config(format!(
                                "config key lambdas: expected comma-separated numbers, got '{raw}'"
                            ))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?,
                None => default,
            },
        };
        let canonical: Vec<String> = value.iter().map(|v| format!("{v}")).collect();
        self.map.insert("lambdas".into(), canonical.join(","));
        Ok(value)
    }

    fn scheme(&mut self, flag: Option<&str>, default: DilationScheme) -> Result<DilationScheme> {
        let value = match flag {
            Some(raw) => raw.parse()?,
            None => match self.raw("scheme") {
                Some(raw) => raw.parse()?,
                None => default,
            },
        };
        self.map.insert("scheme".into(), value.to_string());
        Ok(value)
    }

    fn out_dir(&mut self, flag: Option<&Path>) -> PathBuf {
        let dir = flag
            .map(Path::to_path_buf)
            .or_else(|| self.raw("out").map(PathBuf::from))
            .or_else(|| std::env::var(ENV_OUT).ok().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        self.map.insert("out".into(), dir.display().to_string());
        dir
    }

    fn into_map(self) -> BTreeMap<String, String> {
        self.map
    }
}

fn resolve_experiment(resolver: &mut Resolver, args: &CommonArgs) -> Result<ExperimentConfig> {
    let d = ExperimentConfig::default();
    let config = ExperimentConfig {
        s: resolver.f64("s", args.s, d.s)?,
        lambdas: resolver.lambdas(args.lambda.clone(), d.lambdas.clone())?,
        t_final: resolver.f64("t_final", args.t_final, d.t_final)?,
        n_points: resolver.usize("n_points", args.points, d.n_points)?,
        noise_fraction: resolver.f64("noise_fraction", args.noise, d.noise_fraction)?,
        n_trials: resolver.usize("n_trials", args.trials, d.n_trials)?,
        seed: resolver.u64("seed", args.seed, d.seed)?,
    };
    config.validate()?;
    Ok(config)
}

/// 17 significant digits, locale-independent.
fn fmt_sci(v: f64) -> String {
    format!("{v:.16e}")
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|k| a + k as f64 * (b - a) / (n - 1) as f64).collect()
}

/// Writes through a temp file in the destination directory plus a rename,
/// so readers and concurrent invocations never observe partial files.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<()> {
    let name = format!("{}_manifest.json", manifest.command.replace('-', "_"));
    let text = serde_json::to_string_pretty(manifest)
        .map_err(|e| Error::Config(format!("manifest serialization failed: {e}")))?;
    atomic_write(&dir.join(name), format!("{text}\n").as_bytes())
}

/// Nine-point grid CSVs (noise bands, success probability, reference-row
/// flag) plus 1000-point theory curves, one pair per lambda.
pub fn cmd_fig3(args: &CommonArgs) -> Result<RunManifest> {
    let started = Instant::now();
    let mut resolver = Resolver::new(args.config.as_deref())?;
    let config = resolve_experiment(&mut resolver, args)?;
    let out_dir = resolver.out_dir(args.out.as_deref());
    std::fs::create_dir_all(&out_dir)?;

    let runs = run_experiment(&config)?;
    let bands = noise_monte_carlo(&config)?;
    let mut outputs = Vec::new();
    for (run, band) in runs.iter().zip(&bands) {
        let success = run
            .trace
            .success_probability
            .as_deref()
            .ok_or_else(|| Error::Domain("experiment trace lacks success probabilities".into()))?;
        let mut grid = String::from("time,d_nominal,d_lower,d_upper,success_prob,reference\n");
        for k in 0..band.times.len() {
            let _ = writeln!(
                grid,
                "{},{},{},{},{},{}",
                fmt_sci(band.times[k]),
                fmt_sci(band.nominal[k]),
                fmt_sci(band.lower[k]),
                fmt_sci(band.upper[k]),
                fmt_sci(success[k]),
                usize::from(k == 0)
            );
        }
        let name = format!("fig3_lambda_{}_grid.csv", run.lambda);
        atomic_write(&out_dir.join(&name), grid.as_bytes())?;
        outputs.push(name);

        let h = AptHamiltonian::from_lambda(config.s, run.lambda)?;
        let times = linspace(0.0, config.t_final, CURVE_POINTS);
        let theory = distinguishability_series(&h, &times)?;
        let mut curve = String::from("time,d_theory\n");
        for (t, d) in times.iter().zip(&theory.distinguishability) {
            let _ = writeln!(curve, "{},{}", fmt_sci(*t), fmt_sci(*d));
        }
        let name = format!("fig3_lambda_{}_curve.csv", run.lambda);
        atomic_write(&out_dir.join(&name), curve.as_bytes())?;
        outputs.push(name);
    }

    let manifest = RunManifest {
        command: "fig3".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: config.seed,
        config: resolver.into_map(),
        outputs,
        duration_ms: started.elapsed().as_millis() as u64,
    };
    write_manifest(&out_dir, &manifest)?;
    Ok(manifest)
}

/// Lambda sweep CSV: numeric period vs closed form (checked to 1e-6
/// relative), amplitude, and regime; rows without oscillation leave the
/// period and amplitude cells empty.
pub fn cmd_fig4a(args: &Fig4aArgs) -> Result<RunManifest> {
    let started = Instant::now();
    let mut resolver = Resolver::new(args.config.as_deref())?;
    let s = resolver.f64("s", args.s, 3.0)?;
    let lambda_min = resolver.f64("lambda_min", args.lambda_min, 1.1)?;
    let lambda_max = resolver.f64("lambda_max", args.lambda_max, 5.0)?;
    let steps = resolver.usize("steps", args.steps, 40)?;
    let out_dir = resolver.out_dir(args.out.as_deref());
    if steps == 0 {
        return Err(Error::Config("steps must be at least 1".into()));
    }
    if !(lambda_max >= lambda_min) {
        return Err(Error::Config(format!(
            "lambda_max ({lambda_max}) must not be below lambda_min ({lambda_min})"
        )));
    }
    std::fs::create_dir_all(&out_dir)?;

    let mut csv = String::from("lambda,period_numeric,period_formula,amplitude,regime\n");
    for &lambda in &linspace(lambda_min, lambda_max, steps) {
        let metrics = oscillation_metrics(s, lambda)?;
        let formula = ExperimentalFamily::new(s, lambda)?.period_formula();
        let (period_numeric, period_formula) = match (metrics.period, formula) {
            (Some(numeric), Some(formula)) => {
                if ((numeric - formula) / formula).abs() > 1e-6 {
                    return Err(Error::Domain(format!(
                        "period detection drifted from the closed form at lambda {lambda}: \
                         {numeric} vs {formula}"
                    )));
                }
                (fmt_sci(numeric), fmt_sci(formula))
            }
            _ => (String::new(), String::new()),
        };
        let amplitude = metrics.amplitude.map(fmt_sci).unwrap_or_default();
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            fmt_sci(lambda),
            period_numeric,
            period_formula,
            amplitude,
            metrics.regime
        );
    }
    let name = "fig4a_sweep.csv".to_string();
    atomic_write(&out_dir.join(&name), csv.as_bytes())?;

    let manifest = RunManifest {
        command: "fig4a".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: 0,
        config: resolver.into_map(),
        outputs: vec![name],
        duration_ms: started.elapsed().as_millis() as u64,
    };
    write_manifest(&out_dir, &manifest)?;
    Ok(manifest)
}

/// Per-lambda purity curves of the dilated work qubit. The time grid is
/// dense and, in the broken regime, additionally contains the exact period
/// multiples so the purity-1 revivals appear as rows.
pub fn cmd_fig4b(args: &CommonArgs) -> Result<RunManifest> {
    let started = Instant::now();
    let mut resolver = Resolver::new(args.config.as_deref())?;
    let d = ExperimentConfig::default();
    let s = resolver.f64("s", args.s, d.s)?;
    let lambdas = resolver.lambdas(args.lambda.clone(), d.lambdas.clone())?;
    let t_final = resolver.f64("t_final", args.t_final, 3.0)?;
    let points = resolver.usize("n_points", args.points, CURVE_POINTS)?;
    let out_dir = resolver.out_dir(args.out.as_deref());
    if !(t_final > 0.0) || !t_final.is_finite() {
        return Err(Error::Config(format!("t_final must be positive, got {t_final}")));
    }
    if points < 2 {
        return Err(Error::Config(format!("n_points must be at least 2, got {points}")));
    }
    std::fs::create_dir_all(&out_dir)?;

    let mut outputs = Vec::new();
    for &lambda in &lambdas {
        let h = AptHamiltonian::from_lambda(s, lambda)?;
        let mut times = linspace(0.0, t_final, points);
        if let Some(period) = ExperimentalFamily::new(s, lambda)?.period_formula() {
            let mut k = 1.0;
            while k * period <= t_final * (1.0 + 1e-12) {
                times.push(k * period);
                k += 1.0;
            }
            times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
            times.dedup();
        }
        let mut csv = String::from("time,purity\n");
        for &t in &times {
            let circuit = build_circuit(&h, t, DilationScheme::ThreeQubit)?;
            let mut input = vec![C64::new(0.0, 0.0); circuit.dim()];
            input[0] = C64::new(1.0, 0.0);
            let out = simulate(&circuit, &input)?;
            let purity = environment_view(&out, &[0, 1])?.purity();
            let _ = writeln!(csv, "{},{}", fmt_sci(t), fmt_sci(purity));
        }
        let name = format!("fig4b_lambda_{lambda}_purity.csv");
        atomic_write(&out_dir.join(&name), csv.as_bytes())?;
        outputs.push(name);
    }

    let manifest = RunManifest {
        command: "fig4b".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: 0,
        config: resolver.into_map(),
        outputs,
        duration_ms: started.elapsed().as_millis() as u64,
    };
    write_manifest(&out_dir, &manifest)?;
    Ok(manifest)
}

/// Writes one dilation circuit in the text format, after checking that
/// parsing the text reproduces the circuit exactly.
pub fn cmd_export_circuit(args: &CommonArgs) -> Result<ExportReport> {
    let started = Instant::now();
    let mut resolver = Resolver::new(args.config.as_deref())?;
    let s = resolver.f64("s", args.s, 3.0)?;
    let lambdas = resolver.lambdas(args.lambda.clone(), vec![2.0])?;
    let t = resolver.f64("t_final", args.t_final, 1.0)?;
    let scheme = resolver.scheme(args.scheme.as_deref(), DilationScheme::ThreeQubit)?;
    let out_dir = resolver.out_dir(args.out.as_deref());
    let [lambda] = lambdas[..] else {
        return Err(Error::Config(format!(
            "export-circuit takes exactly one lambda, got {}",
            lambdas.len()
        )));
    };
    std::fs::create_dir_all(&out_dir)?;

    let h = AptHamiltonian::from_lambda(s, lambda)?;
    let circuit = build_circuit(&h, t, scheme)?;
    let text = export_circuit(&circuit);
    let parsed = parse_circuit(&text)?;
    if !circuit.approx_eq(&parsed, 0.0) {
        return Err(Error::InvalidCircuit("export/parse round trip altered the circuit".into()));
    }
    let mut input = vec![C64::new(0.0, 0.0); circuit.dim()];
    input[0] = C64::new(1.0, 0.0);
    let output = simulate(&circuit, &input)?;
    let (_, success_probability) = post_select(&output, &[0, 1], "00")?;

    let name = format!("circuit_lambda_{lambda}_{scheme}.txt");
    atomic_write(&out_dir.join(&name), text.as_bytes())?;
    let manifest = RunManifest {
        command: "export-circuit".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: 0,
        config: resolver.into_map(),
        outputs: vec![name],
        duration_ms: started.elapsed().as_millis() as u64,
    };
    write_manifest(&out_dir, &manifest)?;
    Ok(ExportReport { gate_count: circuit.len(), success_probability, manifest })
}

/// Eigenvalues, gap, regime, and the two symmetry verdicts as JSON.
pub fn cmd_symmetry(r: f64, theta: f64, s: f64, mu: f64) -> Result<serde_json::Value> {
    let h = AptHamiltonian::new(r, theta, s, mu)?;
    let spectrum = h.spectrum();
    let symmetry = h.symmetry_check();
    Ok(serde_json::json!({
        "r": r,
        "theta": theta,
        "s": s,
        "mu": mu,
        "eigenvalue_plus": [spectrum.eps_plus.re, spectrum.eps_plus.im],
        "eigenvalue_minus": [spectrum.eps_minus.re, spectrum.eps_minus.im],
        "w": [spectrum.w.re, spectrum.w.im],
        "w_squared": spectrum.w_squared,
        "regime": spectrum.regime.to_string(),
        "negative_transpose": symmetry.negative_transpose,
        "anti_commutes": symmetry.anti_commutes,
    }))
}

fn summary_line(manifest: &RunManifest) -> String {
    let out = manifest.config.get("out").cloned().unwrap_or_else(|| ".".into());
    format!(
        "{}: wrote {} data file(s) and a manifest to {}",
        manifest.command,
        manifest.outputs.len(),
        out
    )
}

/// Dispatches one parsed invocation; returns the lines to print on stdout.
pub fn run(cli: &Cli) -> Result<Vec<String>> {
    match &cli.command {
        Command::Fig3(args) => Ok(vec![summary_line(&cmd_fig3(args)?)]),
        Command::Fig4a(args) => Ok(vec![summary_line(&cmd_fig4a(args)?)]),
        Command::Fig4b(args) => Ok(vec![summary_line(&cmd_fig4b(args)?)]),
        Command::ExportCircuit(args) => {
            let report = cmd_export_circuit(args)?;
            Ok(vec![
                format!("gates: {}", report.gate_count),
                format!("success_probability: {}", report.success_probability),
                summary_line(&report.manifest),
            ])
        }
        Command::Symmetry(args) => {
            let report = cmd_symmetry(args.r, args.theta, args.s, args.mu)?;
            serde_json::to_string_pretty(&report)
                .map(|text| vec![text])
                .map_err(|e| Error::Config(format!("report serialization failed: {e}")))
        }
    }
}

/// Full binary entry point. Exit codes: 0 success (including --help and
/// --version), 1 domain/config errors, 2 I/O errors.
pub fn main_entry() -> std::process::ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code: u8 = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return std::process::ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            std::process::ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::ExitCode::from(err.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn parse(argv: &[&str]) -> Cli {
        Cli::try_parse_from(argv).expect("argv parses")
    }

    fn read_csv(path: &Path) -> Vec<Vec<String>> {
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .skip(1)
            .map(|line| line.split(',').map(str::to_string).collect())
            .collect()
    }

    #[test]
    fn test_fmt_sci_has_17_significant_digits() {
        assert_eq!(fmt_sci(0.25), "2.5000000000000000e-1");
        assert_eq!(fmt_sci(1.0), "1.0000000000000000e0");
        let round_trip: f64 = fmt_sci(std::f64::consts::PI).parse().unwrap();
        assert_eq!(round_trip, std::f64::consts::PI);
    }

    #[test]
    fn test_parse_config_text_flat_and_manifest() {
        let map = parse_config_text("# comment\n s = 3 \nlambdas=2,1.5\n\nseed=7 # tail\n")
            .unwrap();
        assert_eq!(map.get("s").map(String::as_str), Some("3"));
        assert_eq!(map.get("lambdas").map(String::as_str), Some("2,1.5"));
        assert_eq!(map.get("seed").map(String::as_str), Some("7"));
        assert!(parse_config_text("no equals sign").is_err());

        let manifest = RunManifest {
            command: "fig3".into(),
            version: "0".into(),
            seed: 9,
            config: BTreeMap::from([("s".to_string(), "4".to_string())]),
            outputs: vec![],
            duration_ms: 1,
        };
        let text = serde_json::to_string(&manifest).unwrap();
        let replayed = parse_config_text(&text).unwrap();
        assert_eq!(replayed.get("s").map(String::as_str), Some("4"));
    }

    #[test]
    fn test_flag_overrides_config_file() {
        let dir = tempdir().unwrap();
        let config_path = dir.path().join("run.conf");
        std::fs::write(
            &config_path,
            "lambdas=9\nn_points=2\nn_trials=2\nnoise_fraction=0\nseed=7\n",
        )
        .unwrap();
        let out = dir.path().join("data");
        let cli = parse(&[
            "apt-flow",
            "fig3",
            "--config",
            config_path.to_str().unwrap(),
            "--lambda",
            "2",
            "--out",
            out.to_str().unwrap(),
        ]);
        let Command::Fig3(args) = &cli.command else { panic!("wrong subcommand") };
        let manifest = cmd_fig3(args).unwrap();
        assert_eq!(manifest.config.get("lambdas").map(String::as_str), Some("2"));
        assert_eq!(manifest.config.get("seed").map(String::as_str), Some("7"));
        assert_eq!(manifest.seed, 7);
        assert_eq!(manifest.outputs.len(), 2);

        let grid = read_csv(&out.join("fig3_lambda_2_grid.csv"));
        assert_eq!(grid.len(), 3);
        assert_eq!(grid[0][5], "1");
        assert_eq!(grid[1][5], "0");
        // Zero noise collapses the band columns onto the nominal value.
        for row in &grid {
            assert_eq!(row[1], row[2]);
            assert_eq!(row[1], row[3]);
        }
        let d0: f64 = grid[0][1].parse().unwrap();
        assert!((d0 - 1.0).abs() < 1e-12);

        let curve = read_csv(&out.join("fig3_lambda_2_curve.csv"));
        assert_eq!(curve.len(), 1000);
    }

    #[test]
    fn test_manifest_replay_reproduces_outputs_bitwise() {
        let dir = tempdir().unwrap();
        let first = dir.path().join("a");
        let cli = parse(&[
            "apt-flow",
            "fig4a",
            "--lambda-min",
            "1.5",
            "--lambda-max",
            "2.5",
            "--steps",
            "3",
            "--out",
            first.to_str().unwrap(),
        ]);
        let Command::Fig4a(args) = &cli.command else { panic!("wrong subcommand") };
        cmd_fig4a(args).unwrap();
        let original = std::fs::read(first.join("fig4a_sweep.csv")).unwrap();

        let second = dir.path().join("b");
        let manifest_path = first.join("fig4a_manifest.json");
        let cli = parse(&[
            "apt-flow",
            "fig4a",
            "--config",
            manifest_path.to_str().unwrap(),
            "--out",
            second.to_str().unwrap(),
        ]);
        let Command::Fig4a(args) = &cli.command else { panic!("wrong subcommand") };
        let replayed = cmd_fig4a(args).unwrap();
        assert_eq!(replayed.config.get("steps").map(String::as_str), Some("3"));
        let replay = std::fs::read(second.join("fig4a_sweep.csv")).unwrap();
        assert_eq!(original, replay);
    }

    #[test]
    fn test_fig4a_rows_and_empty_cells() {
        let dir = tempdir().unwrap();
        let cli = parse(&[
            "apt-flow",
            "fig4a",
            "--lambda-min",
            "0.5",
            "--lambda-max",
            "2",
            "--steps",
            "4",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        let Command::Fig4a(args) = &cli.command else { panic!("wrong subcommand") };
        cmd_fig4a(args).unwrap();
        let rows = read_csv(&dir.path().join("fig4a_sweep.csv"));
        assert_eq!(rows.len(), 4);
        // lambda = 0.5 and 1.0 rows carry no period or amplitude.
        assert_eq!(rows[0][4], "Unbroken");
        assert!(rows[0][1].is_empty() && rows[0][3].is_empty());
        assert_eq!(rows[1][4], "ExceptionalPoint");
        assert!(rows[1][1].is_empty());
        // lambda = 2 row reproduces the closed forms.
        assert_eq!(rows[3][4], "Broken");
        let period: f64 = rows[3][2].parse().unwrap();
        assert!((period - 0.604_599_788_078_072_6).abs() < 1e-12);
        let amplitude: f64 = rows[3][3].parse().unwrap();
        assert!((amplitude - 0.4).abs() < 1e-9);
    }

    #[test]
    fn test_fig4b_contains_period_multiples() {
        let dir = tempdir().unwrap();
        let cli = parse(&[
            "apt-flow",
            "fig4b",
            "--lambda",
            "2,0.5",
            "--t-final",
            "3",
            "--points",
            "40",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        let Command::Fig4b(args) = &cli.command else { panic!("wrong subcommand") };
        let manifest = cmd_fig4b(args).unwrap();
        assert_eq!(manifest.outputs.len(), 2);

        let period = std::f64::consts::PI / (3.0 * 3.0f64.sqrt());
        let rows = read_csv(&dir.path().join("fig4b_lambda_2_purity.csv"));
        for k in 1..=4 {
            let target = k as f64 * period;
            let row = rows
                .iter()
                .find(|row| {
                    let t: f64 = row[0].parse().unwrap();
                    (t - target).abs() < 1e-12
                })
                .expect("period multiple row present");
            let purity: f64 = row[1].parse().unwrap();
            assert!((purity - 1.0).abs() < 1e-9, "k = {k}: purity {purity}");
        }

        let rows = read_csv(&dir.path().join("fig4b_lambda_0.5_purity.csv"));
        let last: f64 = rows.last().unwrap()[1].parse().unwrap();
        assert!((last - 0.5).abs() < 0.01);
        let first: f64 = rows[0][1].parse().unwrap();
        assert!((first - 1.0).abs() < 1e-12);
    }

    #[test]
    fn test_export_circuit_roundtrip_and_probability() {
        let dir = tempdir().unwrap();
        let cli = parse(&[
            "apt-flow",
            "export-circuit",
            "--lambda",
            "2",
            "--t-final",
            "0",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        let Command::ExportCircuit(args) = &cli.command else { panic!("wrong subcommand") };
        let report = cmd_export_circuit(args).unwrap();
        assert_eq!(report.gate_count, 8);
        assert!((report.success_probability - 0.25).abs() < 1e-14);
        let text =
            std::fs::read_to_string(dir.path().join("circuit_lambda_2_three-qubit.txt")).unwrap();
        assert!(text.starts_with("qubits 3\n"));
        parse_circuit(&text).unwrap();

        let cli = parse(&[
            "apt-flow",
            "export-circuit",
            "--lambda",
            "2",
            "--scheme",
            "four",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        let Command::ExportCircuit(args) = &cli.command else { panic!("wrong subcommand") };
        let report = cmd_export_circuit(args).unwrap();
        assert_eq!(report.gate_count, 12);
        let text =
            std::fs::read_to_string(dir.path().join("circuit_lambda_2_four-qubit.txt")).unwrap();
        assert!(text.lines().nth(1) == Some("x q3"));

        let cli = parse(&["apt-flow", "export-circuit", "--lambda", "2,1.5"]);
        let Command::ExportCircuit(args) = &cli.command else { panic!("wrong subcommand") };
        assert!(cmd_export_circuit(args).is_err());
    }

    #[test]
    fn test_export_circuit_deterministic_bytes() {
        let dir = tempdir().unwrap();
        let mut outputs = Vec::new();
        for sub in ["a", "b"] {
            let out = dir.path().join(sub);
            let cli = parse(&[
                "apt-flow",
                "export-circuit",
                "--lambda",
                "1.5",
                "--t-final",
                "0.7",
                "--out",
                out.to_str().unwrap(),
            ]);
            let Command::ExportCircuit(args) = &cli.command else { panic!("wrong subcommand") };
            cmd_export_circuit(args).unwrap();
            outputs.push(std::fs::read(out.join("circuit_lambda_1.5_three-qubit.txt")).unwrap());
        }
        assert_eq!(outputs[0], outputs[1]);
    }

    #[test]
    fn test_symmetry_fixtures() {
        let broken = cmd_symmetry(6.0, 0.0, 3.0, 3.0).unwrap();
        assert_eq!(broken["regime"], "Broken");
        assert_eq!(broken["anti_commutes"], true);
        assert_eq!(broken["negative_transpose"], true);
        let w = broken["w"].as_array().unwrap();
        assert!((w[0].as_f64().unwrap() - 6.0 * 3.0f64.sqrt()).abs() < 1e-12);

        let unbroken = cmd_symmetry(1.0, 0.0, 2.0, 2.0).unwrap();
        assert_eq!(unbroken["regime"], "Unbroken");

        let ep = cmd_symmetry(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(ep["regime"], "ExceptionalPoint");
        assert_eq!(ep["w_squared"], 0.0);
    }

    #[test]
    fn test_out_dir_env_fallback() {
        let dir = tempdir().unwrap();
        std::env::set_var(ENV_OUT, dir.path());
        let cli = parse(&["apt-flow", "export-circuit", "--lambda", "2", "--t-final", "0.3"]);
        let Command::ExportCircuit(args) = &cli.command else { panic!("wrong subcommand") };
        let report = cmd_export_circuit(args).unwrap();
        std::env::remove_var(ENV_OUT);
        assert_eq!(
            report.manifest.config.get("out").map(String::as_str),
            dir.path().to_str()
        );
        assert!(dir.path().join("circuit_lambda_2_three-qubit.txt").exists());
    }

    #[test]
    fn test_cli_rejects_unknown_subcommand() {
        let err = Cli::try_parse_from(["apt-flow", "fig5"]).unwrap_err();
        assert_ne!(err.kind(), clap::error::ErrorKind::DisplayHelp);
        let err = Cli::try_parse_from(["apt-flow", "--help"]).unwrap_err();
        assert_eq!(err.kind(), clap::error::ErrorKind::DisplayHelp);
    }

    #[test]
    fn test_run_dispatch_symmetry_prints_json() {
        let cli = parse(&["apt-flow", "symmetry", "--r", "6", "--mu", "3"]);
        let lines = run(&cli).unwrap();
        assert_eq!(lines.len(), 1);
        let value: serde_json::Value = serde_json::from_str(&lines[0]).unwrap();
        assert_eq!(value["regime"], "Broken");
    }
}
