//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::channels::ChannelParams;
use crate::codes::{
    css_to_stabilizer, ds_extend, ds_min_distance_bounded, fix_column_weights, hp_129_28,
    min_column_weight, theorem2_preconditions, CssPair, DsCheckMatrix, StabilizerCode,
};
use crate::decoder::{decode, init_priors, Schedule, TraceRecord, DEFAULT_MAX_ITER};
use crate::error::{Error, Result};
use crate::eval::{
    bdd_curve, read_rows, rescale_by_fidelity, run_campaign, BddParams, CampaignSpec, CsvRow,
    CsvSink, DecoderMode, StopRule,
};
use crate::gf2::{BitMatrix, BitVec};
use crate::pauli::{noisy_syndrome, Pauli, PauliString};
use crate::tanner::TannerGraph;

/// Environment variable holding the worker thread count.
pub const WORKERS_ENV: &str = "DSBP_WORKERS";

#[derive(Parser, Debug)]
#[command(
    name = "dsbp",
    version,
    about = "Data-syndrome BP decoding of quantum stabilizer codes"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a code, print its parameters and optionally write its files.
    BuildCode {
        #[command(flatten)]
        code: CodeArgs,
        /// Directory for hx.txt, hz.txt, code.txt, ds.txt and tanner.dot.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Check the distance preconditions and search for light logical errors.
    Validate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 2)]
        wmax: usize,
        /// Upper bound on partial supports visited by the search.
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Decode one error and print the per-iteration trace.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        /// Data error as `qubit:Pauli` pairs, e.g. `5:Y,17:X`.
        #[arg(long, default_value = "")]
        error: String,
        /// Flipped syndrome bits, e.g. `3,40`.
        #[arg(long, default_value = "")]
        flips: String,
        #[arg(long, default_value = "serial")]
        schedule: Schedule,
        #[arg(long, default_value_t = 1e-3)]
        eps_d: f64,
        #[arg(long, default_value_t = 1e-3)]
        eps_s: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        /// Print one CSV record per iteration.
        #[arg(long)]
        trace: bool,
    },
    /// Monte Carlo logical error rates over a grid of data error rates.
    Campaign(CampaignArgs),
    /// Bounded-distance benchmark curve.
    Bdd {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        /// Comma-separated `γ_0..γ_t`; defaults to all ones.
        #[arg(long, value_delimiter = ',')]
        gamma: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Add the fidelity decay rate to a result file.
    Rescale {
        #[arg(long)]
        input: PathBuf,
        /// Rounds for rows that do not record `r`.
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeArgs {
    /// Built-in code name.
    #[arg(long)]
    code: Option<String>,
    /// X-check matrix file (rows of 0/1).
    #[arg(long, requires = "hz")]
    hx: Option<PathBuf>,
    /// Z-check matrix file (rows of 0/1).
    #[arg(long, requires = "hx")]
    hz: Option<PathBuf>,
    /// Repair weight-one columns of a CSS code loaded from files.
    #[arg(long)]
    #[serde(default)]
    repair: bool,
    /// Stabilizer code file: header `N K M`, then Pauli rows.
    #[arg(long, conflicts_with_all = ["hx", "hz", "code"])]
    stabilizers: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CampaignArgs {
    /// TOML file with the same keys as the flags (snake_case); flags win.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    code: CodeArgs,
    #[arg(long)]
    schedule: Option<Schedule>,
    /// `ds-bp4` or `bp4` (syndrome assumed perfect by the decoder).
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    eps_d: Vec<f64>,
    /// `zero`, `equal` or `fixed:<value>`.
    #[arg(long)]
    eps_s: Option<String>,
    /// Readout rounds per syndrome bit (odd).
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    stop_errors: Option<u64>,
    #[arg(long)]
    max_trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum EpsSPolicy {
    Zero,
    Equal,
    Fixed(f64),
}

impl EpsSPolicy {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(Self::Zero),
            "equal" => Ok(Self::Equal),
            _ => {
                let v = s
                    .strip_prefix("fixed:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "eps-s must be zero, equal or fixed:<value>, got {s:?}"
                        ))
                    })?;
                Ok(Self::Fixed(v))
            }
        }
    }

    fn value(self, eps_d: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Equal => eps_d,
            Self::Fixed(v) => v,
        }
    }
}

/// Fully resolved campaign configuration.
#[derive(Clone, Debug)]
struct RunConfig {
    code: CodeArgs,
    schedule: Schedule,
    mode: DecoderMode,
    eps_d: Vec<f64>,
    eps_s: EpsSPolicy,
    r: usize,
    max_iter: usize,
    stop: StopRule,
    seed: u64,
    out: Option<PathBuf>,
}

impl RunConfig {
    fn resolve(flags: CampaignArgs) -> Result<Self> {
        let file = match &flags.config {
            Some(p) => {
                let text = fs::read_to_string(p)?;
                toml::from_str::<CampaignArgs>(&text)
                    .map_err(|e| Error::InvalidParameter(format!("{}: {e}", p.display())))?
            }
            None => CampaignArgs::default(),
        };
        let code = if flags.code.code.is_some()
            || flags.code.hx.is_some()
            || flags.code.stabilizers.is_some()
        {
            flags.code
        } else {
            file.code
        };
        let stop_default = StopRule::default();
        let cfg = Self {
            code,
            schedule: flags.schedule.or(file.schedule).unwrap_or(Schedule::Serial),
            mode: flags
                .mode
                .or(file.mode)
                .map(|m| m.parse())
                .transpose()?
                .unwrap_or(DecoderMode::DataSyndrome),
            eps_d: if flags.eps_d.is_empty() {
                file.eps_d
            } else {
                flags.eps_d
            },
            eps_s: EpsSPolicy::parse(flags.eps_s.or(file.eps_s).as_deref().unwrap_or("equal"))?,
            r: flags.r.or(file.r).unwrap_or(1),
            max_iter: flags.max_iter.or(file.max_iter).unwrap_or(DEFAULT_MAX_ITER),
            stop: StopRule {
                min_errors: flags
                    .stop_errors
                    .or(file.stop_errors)
                    .unwrap_or(stop_default.min_errors),
                max_trials: flags
                    .max_trials
                    .or(file.max_trials)
                    .unwrap_or(stop_default.max_trials),
            },
            seed: flags.seed.or(file.seed).unwrap_or(0),
            out: flags.out.or(file.out),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.eps_d.is_empty() {
            return Err(Error::InvalidParameter("no eps-d values given".into()));
        }
        for &e in &self.eps_d {
            ChannelParams::new(e, self.eps_s.value(e), self.r)?;
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "max-iter must be at least 1".into(),
            ));
        }
        if self.stop.max_trials == 0 {
            return Err(Error::InvalidParameter(
                "max-trials must be positive".into(),
            ));
        }
        Ok(())
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::InvalidProbability { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn read_matrix(p: &Path) -> Result<BitMatrix> {
    fs::read_to_string(p)?.parse()
}

/// Resolves the code source and a label for output rows.
fn load_code(a: &CodeArgs) -> Result<(String, Option<CssPair>, DsCheckMatrix)> {
    if let Some(p) = &a.stabilizers {
        let code: StabilizerCode = fs::read_to_string(p)?.parse()?;
        return Ok((p.display().to_string(), None, ds_extend(code)));
    }
    if let (Some(hx), Some(hz)) = (&a.hx, &a.hz) {
        let mut css = CssPair::new(read_matrix(hx)?, read_matrix(hz)?)?;
        if a.repair {
            css = fix_column_weights(&css)?;
        }
        let code = ds_extend(css_to_stabilizer(&css)?);
        return Ok((format!("css-{}-{}", code.n(), code.k()), Some(css), code));
    }
    match a.code.as_deref().unwrap_or("hp-129-28") {
        "hp-129-28" => {
            let hp = hp_129_28()?;
            Ok(("hp-129-28".into(), Some(hp.repaired), hp.code))
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown built-in code {other:?}"
        ))),
    }
}

fn parse_error_spec(n: usize, spec: &str) -> Result<PauliString> {
    let mut e = PauliString::identity(n);
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || Error::InvalidParameter(format!("bad error entry {item:?}, want qubit:P"));
        let (q, p) = item.split_once(':').ok_or_else(bad)?;
        let q: usize = q.parse().map_err(|_| bad())?;
        let mut chars = p.chars();
        let p = match (chars.next().and_then(Pauli::from_char), chars.next()) {
            (Some(p), None) => p,
            _ => return Err(bad()),
        };
        if q >= n {
            return Err(Error::InvalidParameter(format!(
                "qubit {q} out of range 0..{n}"
            )));
        }
        e.set(q, p);
    }
    Ok(e)
}

fn parse_flips(m: usize, spec: &str) -> Result<BitVec> {
    let mut f = BitVec::zeros(m);
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let j: usize = item
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad syndrome index {item:?}")))?;
        if j >= m {
            return Err(Error::InvalidParameter(format!(
                "syndrome bit {j} out of range 0..{m}"
            )));
        }
        f.flip(j);
    }
    Ok(f)
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn stamp(what: &str) -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("dsbp {} {what} unix_time={secs}", env!("CARGO_PKG_VERSION"))
}

fn build_code(code: CodeArgs, out_dir: Option<PathBuf>) -> Result<()> {
    let (label, css, ds) = load_code(&code)?;
    let (n, k, m) = ds.params();
    println!("code {label}");
    println!("N = {n}, K = {k}, M = {m}");
    if let Some(css) = &css {
        println!(
            "min column weight: h_x {}, h_z {}",
            min_column_weight(css.h_x()),
            min_column_weight(css.h_z())
        );
    }
    if let Some(dir) = out_dir {
        fs::create_dir_all(&dir)?;
        if let Some(css) = &css {
            fs::write(dir.join("hx.txt"), css.h_x().to_string())?;
            fs::write(dir.join("hz.txt"), css.h_z().to_string())?;
        }
        fs::write(dir.join("code.txt"), ds.base().to_string())?;
        fs::write(dir.join("ds.txt"), ds.to_text())?;
        fs::write(dir.join("tanner.dot"), TannerGraph::build(&ds).to_dot())?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}

fn validate(code: CodeArgs, wmax: usize, budget: u64) -> Result<()> {
    let (label, css, ds) = load_code(&code)?;
    println!("code {label}: [[{}, {} | {}]]", ds.n(), ds.k(), ds.m());
    if let Some(css) = &css {
        let rep = theorem2_preconditions(css);
        if rep.ok {
            println!("preconditions: ok");
        } else {
            for r in &rep.reasons {
                println!("preconditions: {r}");
            }
        }
    }
    let res = ds_min_distance_bounded(&ds, wmax, budget)?;
    match res.witness {
        Some(w) => {
            let flips = w.synd.support();
            println!(
                "found element of C̃∖S̃ at weight {}: data {} flips {:?}",
                w.weight(),
                w.data,
                flips
            );
        }
        None => println!("no element of C̃∖S̃ at weight ≤ {wmax}"),
    }
    println!("candidates visited: {}", res.candidates);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn decode_one(
    code: CodeArgs,
    error: &str,
    flips: &str,
    schedule: Schedule,
    eps_d: f64,
    eps_s: f64,
    max_iter: usize,
    trace: bool,
) -> Result<()> {
    let (_, _, ds) = load_code(&code)?;
    let e = parse_error_spec(ds.n(), error)?;
    let f = parse_flips(ds.m(), flips)?;
    let z = noisy_syndrome(&e, &f, ds.check())?;
    let priors = init_priors(ds.n(), ds.m(), eps_d, eps_s)?;
    let graph = TannerGraph::build(&ds);
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    let mut sink = |r: &TraceRecord| {
        let _ = w.serialize(r);
    };
    let res = decode(
        schedule,
        &graph,
        ds.check(),
        &z,
        &priors,
        max_iter,
        if trace { Some(&mut sink) } else { None },
    )?;
    drop(w);
    let adj = crate::eval::Adjudicator::new(ds.check());
    let logical = !res.converged || adj.is_logical_error(&res.data_est, &e)?;
    println!(
        "converged {} after {} iterations; syndrome estimate {:?}; logical error {}",
        res.converged,
        res.iterations,
        res.synd_est.support(),
        logical
    );
    let est: Vec<String> = res
        .data_est
        .support()
        .into_iter()
        .map(|q| format!("{q}:{}", res.data_est.get(q).as_char()))
        .collect();
    println!("data estimate {}", est.join(","));
    Ok(())
}

fn campaign(args: CampaignArgs) -> Result<()> {
    let cfg = RunConfig::resolve(args)?;
    let (label, _, ds) = load_code(&cfg.code)?;
    let mut sink = CsvSink::new(output(&cfg.out)?, &stamp("campaign"), false)?;
    for &eps_d in &cfg.eps_d {
        let spec = CampaignSpec {
            schedule: cfg.schedule,
            mode: cfg.mode,
            channel: ChannelParams::new(eps_d, cfg.eps_s.value(eps_d), cfg.r)?,
            stop: cfg.stop,
            seed: cfg.seed,
            max_iter: cfg.max_iter,
        };
        let stats = run_campaign(&ds, &spec)?;
        eprintln!(
            "eps_d {eps_d}: {} logical errors in {} trials",
            stats.logical_errors, stats.trials
        );
        sink.write(&CsvRow::from_campaign(&label, &spec, &stats))?;
    }
    Ok(())
}

fn bdd(n: usize, t: usize, gamma: Vec<f64>, eps: Vec<f64>, out: Option<PathBuf>) -> Result<()> {
    let gamma = if gamma.is_empty() {
        vec![1.0; t + 1]
    } else {
        gamma
    };
    if gamma.len() != t + 1 {
        return Err(Error::InvalidParameter(format!(
            "--gamma needs t + 1 = {} values, got {}",
            t + 1,
            gamma.len()
        )));
    }
    let p = BddParams::new(n, gamma)?;
    let mut sink = CsvSink::new(output(&out)?, &stamp("bdd"), false)?;
    for e in eps {
        sink.write(&CsvRow::from_bdd(&p, e, bdd_curve(&p, e)?))?;
    }
    Ok(())
}

fn rescale(input: &Path, r: usize, out: Option<PathBuf>) -> Result<()> {
    let rows = read_rows(fs::File::open(input)?)?;
    let mut sink = CsvSink::new(output(&out)?, &stamp("rescale"), true)?;
    for mut row in rows {
        let rounds = row.r.unwrap_or(r);
        let mapped = rescale_by_fidelity(&[(row.eps_d, row.rate)], rounds)?;
        row.lambda_per_ns = Some(mapped[0].0);
        sink.write(&row)?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> std::result::Result<(), Failure> {
    match cli.command {
        Command::BuildCode { code, out_dir } => build_code(code, out_dir)?,
        Command::Validate { code, wmax, budget } => validate(code, wmax, budget)?,
        Command::Decode {
            code,
            error,
            flips,
            schedule,
            eps_d,
            eps_s,
            max_iter,
            trace,
        } => decode_one(
            code, &error, &flips, schedule, eps_d, eps_s, max_iter, trace,
        )?,
        Command::Campaign(args) => campaign(args)?,
        Command::Bdd {
            n,
            t,
            gamma,
            eps,
            out,
        } => bdd(n, t, gamma, eps, out)?,
        Command::Rescale { input, r, out } => rescale(&input, r, out)?,
    }
    Ok(())
}

fn configure_workers() -> std::result::Result<(), Failure> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("{WORKERS_ENV} must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

/// Parses `args` and runs the command. Returns the process exit code: 0 on
/// success, 2 for invalid arguments or configuration, 1 for runtime errors.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match configure_workers().and_then(|_| dispatch(cli)) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_s_policy() {
        assert_eq!(EpsSPolicy::parse("zero").unwrap().value(0.3), 0.0);
        assert_eq!(EpsSPolicy::parse("equal").unwrap().value(0.3), 0.3);
        assert_eq!(EpsSPolicy::parse("fixed:0.02").unwrap().value(0.3), 0.02);
        assert!(EpsSPolicy::parse("fixed:").is_err());
        assert!(EpsSPolicy::parse("half").is_err());
    }

    #[test]
    fn error_spec() {
        let e = parse_error_spec(4, "0:X, 3:Z").unwrap();
        assert_eq!(e.to_string(), "XIIZ");
        assert!(parse_error_spec(4, "4:X").is_err());
        assert!(parse_error_spec(4, "1:Q").is_err());
        assert!(parse_error_spec(4, "1").is_err());
        assert_eq!(parse_flips(3, "0,2,0").unwrap().support(), vec![2]);
    }

    #[test]
    fn config_merging() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.toml");
        fs::write(
            &p,
            "code = \"hp-129-28\"\nschedule = \"parallel\"\neps_d = [0.01, 0.003]\neps_s = \"zero\"\nseed = 9\n",
        )
        .unwrap();
        let flags = CampaignArgs {
            config: Some(p.clone()),
            seed: Some(11),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(flags).unwrap();
        assert_eq!(cfg.schedule, Schedule::Parallel);
        assert_eq!(cfg.eps_d, vec![0.01, 0.003]);
        assert_eq!(cfg.eps_s, EpsSPolicy::Zero);
        assert_eq!(cfg.seed, 11);
        assert_eq!(cfg.code.code.as_deref(), Some("hp-129-28"));

        fs::write(&p, "bogus = 1\n").unwrap();
        let flags = CampaignArgs {
            config: Some(p),
            ..Default::default()
        };
        assert!(RunConfig::resolve(flags).is_err());
    }

    #[test]
    fn invalid_configs() {
        let base = CampaignArgs {
            eps_d: vec![0.01],
            ..Default::default()
        };
        assert!(RunConfig::resolve(base.clone()).is_ok());
        let even = CampaignArgs {
            r: Some(2),
            ..base.clone()
        };
        assert!(RunConfig::resolve(even).is_err());
        let bad_p = CampaignArgs {
            eps_d: vec![1.5],
            ..base.clone()
        };
        assert!(RunConfig::resolve(bad_p).is_err());
        let zero_iter = CampaignArgs {
            max_iter: Some(0),
            ..base
        };
        assert!(RunConfig::resolve(zero_iter).is_err());
    }
}
