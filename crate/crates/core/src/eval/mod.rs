//! Logical-error adjudication, analytic benchmark curves and Monte Carlo
//! campaigns.

mod campaign;
mod report;

pub use campaign::{
    decoder_priors, run_campaign, run_trial, weight_one_errors, CampaignSpec, DecoderMode,
    StopRule, TrialOutcome, TrialRunner, TrialStats,
};
pub use report::{read_rows, CsvRow, CsvSink};

use crate::error::{Error, Result};
use crate::gf2::RowSpan;
use crate::pauli::{pauli_mul, CheckMatrix, PauliString};

/// Duration of one syndrome-measurement round, in nanoseconds.
pub const ROUND_TIME_NS: f64 = 740.0;

/// Coset test against a precomputed stabilizer span. Kept separate from
/// [`is_logical_error`] so campaigns reduce against one echelon basis.
#[derive(Clone, Debug)]
pub struct Adjudicator {
    span: RowSpan,
}

impl Adjudicator {
    pub fn new(s: &CheckMatrix) -> Self {
        Self {
            span: s.stabilizer_span(),
        }
    }

    /// True unless `e_hat · e` is a stabilizer.
    pub fn is_logical_error(&self, e_hat: &PauliString, e: &PauliString) -> Result<bool> {
        let residual = pauli_mul(e_hat, e)?;
        if 2 * residual.len() != self.span.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.span.cols() / 2,
                found: residual.len(),
            });
        }
        Ok(!self.span.contains(&residual.symplectic()))
    }
}

/// True unless the estimate lies in the coset `e·𝒮`.
pub fn is_logical_error(e_hat: &PauliString, e: &PauliString, s: &CheckMatrix) -> Result<bool> {
    Adjudicator::new(s).is_logical_error(e_hat, e)
}

/// Generalized bounded-distance decoder: a fraction `gamma[j]` of the
/// weight-`j` errors, `j ≤ t`, is assumed corrected.
#[derive(Clone, Debug, PartialEq)]
pub struct BddParams {
    pub n: usize,
    pub gamma: Vec<f64>,
}

impl BddParams {
    pub fn new(n: usize, gamma: Vec<f64>) -> Result<Self> {
        if gamma.is_empty() || gamma.len() > n + 1 {
            return Err(Error::InvalidParameter(format!(
                "need 1..={} gamma values, got {}",
                n + 1,
                gamma.len()
            )));
        }
        if let Some(&g) = gamma.iter().find(|g| !(0.0..=1.0).contains(*g)) {
            return Err(Error::InvalidProbability {
                name: "gamma",
                value: g,
            });
        }
        Ok(Self { n, gamma })
    }

    /// Radius `t`.
    pub fn t(&self) -> usize {
        self.gamma.len() - 1
    }
}

fn binomial_pmf(n: usize, j: usize, eps: f64) -> f64 {
    // C(n, j) by the multiplicative formula; exact in f64 for n ≤ ~1000 and
    // small j, and within a few ulps otherwise
    let k = j.min(n - j);
    let mut c = 1.0f64;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c * eps.powi(j as i32) * (1.0 - eps).powi((n - j) as i32)
}

/// Block error rate `1 − Σ_{j≤t} γ_j C(N,j) ε^j (1−ε)^{N−j}`.
///
/// Evaluated as `Σ_{j≤t} (1−γ_j)·b_j + Σ_{j>t} b_j` with `b_j` the binomial
/// terms, which has no cancellation at small `ε`.
pub fn bdd_curve(p: &BddParams, eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidProbability {
            name: "eps",
            value: eps,
        });
    }
    let t = p.t();
    let mut total = 0.0;
    for (j, &g) in p.gamma.iter().enumerate() {
        if g < 1.0 {
            total += (1.0 - g) * binomial_pmf(p.n, j, eps);
        }
    }
    // tail, smallest terms last is irrelevant here: terms decay fast for
    // small eps and are all positive
    for j in t + 1..=p.n {
        total += binomial_pmf(p.n, j, eps);
    }
    Ok(total)
}

/// Decay rate `λ = −ln(1−ε)/τ` from `1 − ε = e^{−λτ}`.
pub fn fidelity_lambda(eps: f64, tau: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidProbability {
            name: "eps",
            value: eps,
        });
    }
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tau must be positive, got {tau}"
        )));
    }
    Ok(-(-eps).ln_1p() / tau)
}

/// Maps `(ε, rate)` points to `(λ, rate)` with `τ = rounds · 740 ns`.
pub fn rescale_by_fidelity(points: &[(f64, f64)], rounds: usize) -> Result<Vec<(f64, f64)>> {
    if rounds == 0 {
        return Err(Error::InvalidParameter("rounds must be positive".into()));
    }
    let tau = rounds as f64 * ROUND_TIME_NS;
    points
        .iter()
        .map(|&(eps, rate)| Ok((fidelity_lambda(eps, tau)?, rate)))
        .collect()
}

/// Piecewise-linear interpolation of `log y` against `log x` on a curve
/// sorted by `x`. `None` outside the sampled range or on non-positive values.
pub fn log_log_interpolate(curve: &[(f64, f64)], x: f64) -> Option<f64> {
    if x <= 0.0 {
        return None;
    }
    curve.windows(2).find_map(|w| {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if x0 <= 0.0 || x1 <= 0.0 || y0 <= 0.0 || y1 <= 0.0 || x < x0 || x > x1 {
            return None;
        }
        if x1 == x0 {
            return Some(y0);
        }
        let t = (x.ln() - x0.ln()) / (x1.ln() - x0.ln());
        Some((y0.ln() + t * (y1.ln() - y0.ln())).exp())
    })
}

/// Wilson score interval for `successes` out of `trials` at ~95% coverage.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::hp_129_28;
    use crate::pauli::Pauli;

    #[test]
    fn adjudication_examples() {
        let hp = hp_129_28().unwrap();
        let s = hp.code.check();
        let adj = Adjudicator::new(s);
        let e = PauliString::single(129, 5, Pauli::Y);
        assert!(!adj.is_logical_error(&e, &e).unwrap());
        let shifted = pauli_mul(&e, s.row(17)).unwrap();
        assert!(!adj.is_logical_error(&shifted, &e).unwrap());
        assert!(!is_logical_error(&e, &shifted, s).unwrap());
        // a single-qubit discrepancy is never a stabilizer here
        let other = PauliString::single(129, 6, Pauli::Y);
        assert!(adj.is_logical_error(&other, &e).unwrap());
        assert!(adj
            .is_logical_error(&PauliString::identity(3), &PauliString::identity(3))
            .is_err());
    }

    #[test]
    fn bdd_closed_forms() {
        let p = BddParams::new(129, vec![1.0]).unwrap();
        assert_eq!(bdd_curve(&p, 0.0).unwrap(), 0.0);
        for eps in [1e-4, 1e-3, 0.05] {
            let expected = 1.0 - (1.0f64 - eps).powi(129);
            let got = bdd_curve(&p, eps).unwrap();
            assert!((got - expected).abs() <= 1e-12 * expected.max(1e-300) + 1e-15);
        }
        assert!(BddParams::new(5, vec![]).is_err());
        assert!(BddParams::new(5, vec![1.0, 1.2]).is_err());
    }

    #[test]
    fn bdd_monotone_for_full_gamma() {
        let p = BddParams::new(129, vec![1.0, 1.0, 1.0]).unwrap();
        let mut last = 0.0;
        for i in 0..=500 {
            let eps = 0.5 * i as f64 / 500.0;
            let v = bdd_curve(&p, eps).unwrap();
            assert!(v >= last - 1e-12, "eps {eps}");
            last = v;
        }
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(fidelity_lambda(0.0, 740.0).unwrap(), 0.0);
        let eps = 1.0 - (-1.0f64).exp();
        assert!((fidelity_lambda(eps, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let l = fidelity_lambda(0.01, 740.0).unwrap();
        assert!((l - (-(0.99f64).ln() / 740.0)).abs() < 1e-18);
        assert!(fidelity_lambda(1.0, 740.0).is_err());
        assert!(fidelity_lambda(0.1, 0.0).is_err());
    }

    #[test]
    fn rescaling() {
        assert!(rescale_by_fidelity(&[], 1).unwrap().is_empty());
        let one = rescale_by_fidelity(&[(0.01, 0.2)], 1).unwrap();
        let three = rescale_by_fidelity(&[(0.01, 0.2)], 3).unwrap();
        assert_eq!(one[0].1, 0.2);
        assert!((one[0].0 / three[0].0 - 3.0).abs() < 1e-12);
        let pts: Vec<_> = [1e-4, 1e-3, 3e-3, 1e-2, 0.1]
            .iter()
            .map(|&e| (e, 0.5))
            .collect();
        let out = rescale_by_fidelity(&pts, 1).unwrap();
        assert!(out.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn interpolation() {
        let curve = [(1e-3, 1e-4), (1e-2, 1e-2)];
        let mid = log_log_interpolate(&curve, 10f64.powf(-2.5)).unwrap();
        assert!((mid - 1e-3).abs() < 1e-15);
        assert!(log_log_interpolate(&curve, 0.1).is_none());
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(100, 1000);
        assert!(lo < 0.1 && 0.1 < hi);
        assert!((lo - 0.0829).abs() < 1e-3 && (hi - 0.1203).abs() < 1e-3);
        assert_eq!(wilson_interval(0, 0), (0.0, 1.0));
        let (lo, _) = wilson_interval(0, 10);
        assert_eq!(lo, 0.0);
    }
}
