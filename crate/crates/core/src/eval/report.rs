use std::io::{Read, Write};

use super::{BddParams, CampaignSpec, TrialStats};
use crate::error::{Error, Result};

const HEADER: [&str; 13] = [
    "code",
    "schedule",
    "mode",
    "eps_d",
    "eps_s",
    "r",
    "trials",
    "converged",
    "logical_errors",
    "rate",
    "ci_lo",
    "ci_hi",
    "seed",
];

/// One result line. Analytic rows leave the Monte Carlo fields empty.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub code: String,
    pub schedule: String,
    pub mode: String,
    pub eps_d: f64,
    pub eps_s: Option<f64>,
    pub r: Option<usize>,
    pub trials: Option<u64>,
    pub converged: Option<u64>,
    pub logical_errors: Option<u64>,
    pub rate: f64,
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub seed: Option<u64>,
    pub lambda_per_ns: Option<f64>,
}

impl CsvRow {
    pub fn from_campaign(code: &str, spec: &CampaignSpec, stats: &TrialStats) -> Self {
        let (lo, hi) = stats.wilson();
        Self {
            code: code.to_string(),
            schedule: spec.schedule.to_string(),
            mode: spec.mode.to_string(),
            eps_d: stats.params.eps_d,
            eps_s: Some(stats.params.eps_s),
            r: Some(stats.params.repeats),
            trials: Some(stats.trials),
            converged: Some(stats.converged),
            logical_errors: Some(stats.logical_errors),
            rate: stats.rate(),
            ci_lo: Some(lo),
            ci_hi: Some(hi),
            seed: Some(stats.seed),
            lambda_per_ns: None,
        }
    }

    pub fn from_bdd(p: &BddParams, eps: f64, rate: f64) -> Self {
        Self {
            code: format!("bdd-n{}-t{}", p.n, p.t()),
            schedule: String::new(),
            mode: "bdd".into(),
            eps_d: eps,
            eps_s: None,
            r: None,
            trials: None,
            converged: None,
            logical_errors: None,
            rate,
            ci_lo: None,
            ci_hi: None,
            seed: None,
            lambda_per_ns: None,
        }
    }

    fn fields(&self, with_lambda: bool) -> Vec<String> {
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        let mut out = vec![
            self.code.clone(),
            self.schedule.clone(),
            self.mode.clone(),
            self.eps_d.to_string(),
            opt(self.eps_s),
            opt(self.r),
            opt(self.trials),
            opt(self.converged),
            opt(self.logical_errors),
            self.rate.to_string(),
            opt(self.ci_lo),
            opt(self.ci_hi),
            opt(self.seed),
        ];
        if with_lambda {
            out.push(opt(self.lambda_per_ns));
        }
        out
    }

    fn parse(rec: &csv::StringRecord, line: usize) -> Result<Self> {
        let err = |msg: String| Error::Parse { line, msg };
        let get = |i: usize| rec.get(i).unwrap_or("").trim();
        fn opt<T: std::str::FromStr>(s: &str) -> std::result::Result<Option<T>, String> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| format!("bad number {s:?}"))
            }
        }
        if rec.len() < HEADER.len() {
            return Err(err(format!(
                "expected {} fields, got {}",
                HEADER.len(),
                rec.len()
            )));
        }
        let req = |i: usize| -> Result<f64> {
            get(i)
                .parse()
                .map_err(|_| err(format!("bad number {:?} in {}", get(i), HEADER[i])))
        };
        Ok(Self {
            code: get(0).to_string(),
            schedule: get(1).to_string(),
            mode: get(2).to_string(),
            eps_d: req(3)?,
            eps_s: opt(get(4)).map_err(err)?,
            r: opt(get(5)).map_err(err)?,
            trials: opt(get(6)).map_err(err)?,
            converged: opt(get(7)).map_err(err)?,
            logical_errors: opt(get(8)).map_err(err)?,
            rate: req(9)?,
            ci_lo: opt(get(10)).map_err(err)?,
            ci_hi: opt(get(11)).map_err(err)?,
            seed: opt(get(12)).map_err(err)?,
            lambda_per_ns: opt(get(13)).map_err(err)?,
        })
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// CSV writer for result rows. The first line is a `#` comment, so only that
/// line varies between identical runs.
pub struct CsvSink<W: Write> {
    inner: csv::Writer<W>,
    with_lambda: bool,
}

impl<W: Write> CsvSink<W> {
    pub fn new(mut out: W, comment: &str, with_lambda: bool) -> Result<Self> {
        writeln!(out, "# {comment}")?;
        let mut inner = csv::Writer::from_writer(out);
        let mut header: Vec<&str> = HEADER.to_vec();
        if with_lambda {
            header.push("lambda_per_ns");
        }
        inner.write_record(&header).map_err(csv_err)?;
        Ok(Self { inner, with_lambda })
    }

    pub fn write(&mut self, row: &CsvRow) -> Result<()> {
        self.inner
            .write_record(row.fields(self.with_lambda))
            .map_err(csv_err)?;
        self.inner.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> Result<W> {
        self.inner
            .into_inner()
            .map_err(|e| Error::Io(e.error().to_string()))
    }
}

/// Reads rows written by [`CsvSink`], skipping `#` comment lines.
pub fn read_rows<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(input);
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        rows.push(CsvRow::parse(&rec, i + 2)?);
    }
    Ok(rows)
}
