//! Quaternary belief propagation with scalar messages on the DS Tanner graph.
//!
//! Each edge carries two scalars: `d` from variable to check, the difference
//! `q⁽⁰⁾ − q⁽¹⁾` of the probabilities that the variable's error commutes or
//! anticommutes with the edge's Pauli label, and `δ` from check to variable,
//! `(−1)^{z_m}` times the product of the other incoming `d`. A check message
//! becomes the pair `r⁽⁰⁾ = (1+δ)/2`, `r⁽¹⁾ = (1−δ)/2` on the variable side.
//!
//! Two schedules share the update rules: the parallel (flooding) schedule
//! updates all checks then all variables each iteration; the serial schedule
//! visits checks in index order, refreshing the incoming variable messages of
//! a check from the latest `δ` before recomputing its outgoing `δ`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::pauli::{commute_scalar, noisy_syndrome, CheckMatrix, Pauli, PauliString};
use crate::tanner::TannerGraph;

/// Smallest prior probability used inside the decoder. Exact zeros would let
/// every belief of a node vanish on an inconsistent syndrome.
pub const PRIOR_FLOOR: f64 = 1e-30;

/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 12;

/// Channel priors for every variable node.
#[derive(Clone, Debug, PartialEq)]
pub struct Priors {
    /// `(p^I, p^X, p^Y, p^Z)` per data qubit.
    pub data: Vec<[f64; 4]>,
    /// `(p⁽⁰⁾, p⁽¹⁾)` per syndrome bit.
    pub synd: Vec<[f64; 2]>,
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..1.0).contains(&value) {
        return Err(Error::InvalidProbability { name, value });
    }
    Ok(())
}

/// Depolarizing priors `(1−ε_D, ε_D/3, ε_D/3, ε_D/3)` on data qubits and
/// BSC priors `(1−ε_S, ε_S)` on syndrome bits.
pub fn init_priors(n: usize, m: usize, eps_d: f64, eps_s: f64) -> Result<Priors> {
    check_probability("eps_d", eps_d)?;
    check_probability("eps_s", eps_s)?;
    let third = eps_d / 3.0;
    Ok(Priors {
        data: vec![[1.0 - eps_d, third, third, third]; n],
        synd: vec![[1.0 - eps_s, eps_s]; m],
    })
}

impl Priors {
    /// Validates normalization and non-negativity to within `1e-12`.
    pub fn validate(&self) -> Result<()> {
        let ok =
            |p: &[f64]| p.iter().all(|&x| x >= 0.0) && (p.iter().sum::<f64>() - 1.0).abs() <= 1e-12;
        if let Some(i) = self.data.iter().position(|p| !ok(p)) {
            return Err(Error::InvalidParameter(format!(
                "data prior {i} is not a distribution"
            )));
        }
        if let Some(i) = self.synd.iter().position(|p| !ok(p)) {
            return Err(Error::InvalidParameter(format!(
                "syndrome prior {i} is not a distribution"
            )));
        }
        Ok(())
    }

    fn floored(&self) -> Priors {
        fn floor<const K: usize>(p: &[f64; K]) -> [f64; K] {
            let mut out = p.map(|x| x.max(PRIOR_FLOOR));
            let s: f64 = out.iter().sum();
            out.iter_mut().for_each(|x| *x /= s);
            out
        }
        Priors {
            data: self.data.iter().map(floor).collect(),
            synd: self.synd.iter().map(floor).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    Parallel,
    Serial,
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schedule::Parallel => "parallel",
            Schedule::Serial => "serial",
        })
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parallel" => Ok(Schedule::Parallel),
            "serial" => Ok(Schedule::Serial),
            other => Err(Error::InvalidParameter(format!(
                "unknown schedule {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub data_est: PauliString,
    pub synd_est: BitVec,
    pub converged: bool,
    pub iterations: usize,
}

/// Unnormalized per-node beliefs from the hard-decision step.
#[derive(Clone, Debug, PartialEq)]
pub struct Beliefs {
    pub data: Vec<[f64; 4]>,
    pub synd: Vec<[f64; 2]>,
}

impl Beliefs {
    /// Each node's beliefs scaled to sum to one.
    pub fn normalized(&self) -> Beliefs {
        fn norm<const K: usize>(p: &[f64; K]) -> [f64; K] {
            let s: f64 = p.iter().sum();
            p.map(|x| x / s)
        }
        Beliefs {
            data: self.data.iter().map(norm).collect(),
            synd: self.synd.iter().map(norm).collect(),
        }
    }
}

/// One line of per-iteration trace output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub data_est: String,
    pub synd_est: String,
    pub mismatches: usize,
}

/// Message state of one decoding instance.
#[derive(Clone, Debug)]
pub struct BpState<'a> {
    graph: &'a TannerGraph,
    check: &'a CheckMatrix,
    z: &'a BitVec,
    priors: Priors,
    /// `d_{n→m}` per edge.
    d_msg: Vec<f64>,
    /// `δ_{m→n}` per edge.
    delta_msg: Vec<f64>,
    iteration: usize,
}

impl<'a> BpState<'a> {
    pub fn new(
        graph: &'a TannerGraph,
        check: &'a CheckMatrix,
        z: &'a BitVec,
        priors: &Priors,
    ) -> Result<Self> {
        if check.n() != graph.n_data() || check.m() != graph.n_checks() {
            return Err(Error::DimensionMismatch {
                expected: graph.n_data(),
                found: check.n(),
            });
        }
        if z.len() != graph.n_checks() {
            return Err(Error::DimensionMismatch {
                expected: graph.n_checks(),
                found: z.len(),
            });
        }
        if priors.data.len() != graph.n_data() || priors.synd.len() != graph.n_synd() {
            return Err(Error::DimensionMismatch {
                expected: graph.n_vars(),
                found: priors.data.len() + priors.synd.len(),
            });
        }
        priors.validate()?;
        Ok(Self {
            graph,
            check,
            z,
            priors: priors.floored(),
            d_msg: vec![0.0; graph.n_edges()],
            delta_msg: vec![0.0; graph.n_edges()],
            iteration: 0,
        })
    }

    pub fn d_messages(&self) -> &[f64] {
        &self.d_msg
    }

    pub fn delta_messages(&self) -> &[f64] {
        &self.delta_msg
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Parallel initialization: every `d_{n→m}` from the priors alone.
    pub fn init_from_priors(&mut self) {
        let g = self.graph;
        for v in 0..g.n_vars() {
            for &e in g.var_edges(v) {
                self.d_msg[e] = match g.edge_label(e) {
                    Some(label) => {
                        let p = &self.priors.data[v];
                        let q0 = p[Pauli::I.index()] + p[label.index()];
                        q0 - (1.0 - q0)
                    }
                    None => {
                        let p = &self.priors.synd[v - g.n_data()];
                        p[0] - p[1]
                    }
                };
            }
        }
    }

    /// Recomputes `δ_{m→n}` for every edge of check `m` from the current `d`.
    fn update_check(&mut self, m: usize) {
        let edges = self.graph.check_edges(m);
        let sign = if self.z.get(m) { -1.0 } else { 1.0 };
        // leave-one-out products via a forward pass and a backward pass
        let mut prefix = sign;
        for e in edges.clone() {
            self.delta_msg[e] = prefix;
            prefix *= self.d_msg[e];
        }
        let mut suffix = 1.0;
        for e in edges.rev() {
            self.delta_msg[e] *= suffix;
            suffix *= self.d_msg[e];
        }
    }

    /// `r^{(⟨W, label⟩)}` for all four `W` given one incoming `δ`.
    #[inline]
    fn factors(label: Pauli, delta: f64) -> [f64; 4] {
        let r = [(1.0 + delta) / 2.0, (1.0 - delta) / 2.0];
        Pauli::ALL.map(|w| r[commute_scalar(w, label) as usize])
    }

    /// One parallel iteration: horizontal step over all checks, then the
    /// vertical step over all variables.
    pub fn parallel_iteration(&mut self) -> Result<()> {
        for m in 0..self.graph.n_checks() {
            self.update_check(m);
        }
        for e in 0..self.graph.n_edges() {
            self.update_edge_to_check(e)?;
        }
        self.iteration += 1;
        Ok(())
    }

    /// One serial sweep over checks `0..M`.
    pub fn serial_sweep(&mut self) -> Result<()> {
        let g = self.graph;
        for m in 0..g.n_checks() {
            for e in g.check_edges(m) {
                self.update_edge_to_check(e)?;
            }
            self.update_check(m);
        }
        self.iteration += 1;
        Ok(())
    }

    /// Vertical-step update of the single message `d_{n→m}` on edge `e`.
    fn update_edge_to_check(&mut self, e: usize) -> Result<()> {
        let g = self.graph;
        let v = g.edge_var(e);
        let edges = g.var_edges(v);
        if v < g.n_data() {
            let mut q = self.priors.data[v];
            for &other in edges {
                if other != e {
                    let f = Self::factors(
                        g.edge_label(other).expect("data edge"),
                        self.delta_msg[other],
                    );
                    for w in 0..4 {
                        q[w] *= f[w];
                    }
                }
            }
            let label = g.edge_label(e).expect("data edge");
            let q0 = q[Pauli::I.index()] + q[label.index()];
            let total: f64 = q.iter().sum();
            if total <= 0.0 || !total.is_finite() {
                return Err(Error::DegenerateNode(v));
            }
            self.d_msg[e] = (2.0 * q0 - total) / total;
        } else {
            let mut q = self.priors.synd[v - g.n_data()];
            for &other in edges {
                if other != e {
                    let delta = self.delta_msg[other];
                    q[0] *= (1.0 + delta) / 2.0;
                    q[1] *= (1.0 - delta) / 2.0;
                }
            }
            let total = q[0] + q[1];
            if total <= 0.0 || !total.is_finite() {
                return Err(Error::DegenerateNode(v));
            }
            self.d_msg[e] = (q[0] - q[1]) / total;
        }
        Ok(())
    }

    /// Hard-decision beliefs `q_n^W = p_n^W ∏_{m∈𝓜(n)} r_{mn}^{(⟨W,S_mn⟩)}`.
    pub fn marginals(&self) -> Beliefs {
        let g = self.graph;
        let data = (0..g.n_data())
            .map(|v| {
                let mut q = self.priors.data[v];
                for &e in g.var_edges(v) {
                    let f = Self::factors(g.edge_label(e).expect("data edge"), self.delta_msg[e]);
                    for w in 0..4 {
                        q[w] *= f[w];
                    }
                }
                q
            })
            .collect();
        let synd = (0..g.n_synd())
            .map(|j| {
                let mut q = self.priors.synd[j];
                for &e in g.var_edges(g.n_data() + j) {
                    let delta = self.delta_msg[e];
                    q[0] *= (1.0 + delta) / 2.0;
                    q[1] *= (1.0 - delta) / 2.0;
                }
                q
            })
            .collect();
        Beliefs { data, synd }
    }

    /// Argmax per data node (ties prefer I, X, Y, Z in that order) and
    /// `ê = 0` iff `q⁽⁰⁾ > q⁽¹⁾`.
    pub fn hard_decision(&self) -> (PauliString, BitVec) {
        let b = self.marginals();
        let mut data_est = PauliString::identity(b.data.len());
        for (n, q) in b.data.iter().enumerate() {
            let mut best = Pauli::I;
            for w in Pauli::NON_IDENTITY {
                if q[w.index()] > q[best.index()] {
                    best = w;
                }
            }
            data_est.set(n, best);
        }
        let mut synd_est = BitVec::zeros(b.synd.len());
        for (j, q) in b.synd.iter().enumerate() {
            if q[0] <= q[1] {
                synd_est.set(j, true);
            }
        }
        (data_est, synd_est)
    }

    /// Number of checks where the hard decision disagrees with `z`.
    pub fn mismatches(&self, data_est: &PauliString, synd_est: &BitVec) -> usize {
        let observed = noisy_syndrome(data_est, synd_est, self.check).expect("dimensions checked");
        observed.xor(self.z).weight()
    }
}

/// Runs `max_iter` rounds of the given schedule, stopping early once the
/// hard decision reproduces `z`. `trace` receives one record per round.
pub fn decode(
    schedule: Schedule,
    graph: &TannerGraph,
    check: &CheckMatrix,
    z: &BitVec,
    priors: &Priors,
    max_iter: usize,
    mut trace: Option<&mut dyn FnMut(&TraceRecord)>,
) -> Result<DecodeResult> {
    if max_iter == 0 {
        return Err(Error::InvalidParameter(
            "max_iter must be at least 1".into(),
        ));
    }
    let mut state = BpState::new(graph, check, z, priors)?;
    if schedule == Schedule::Parallel {
        state.init_from_priors();
    }
    loop {
        match schedule {
            Schedule::Parallel => state.parallel_iteration()?,
            Schedule::Serial => state.serial_sweep()?,
        }
        let (data_est, synd_est) = state.hard_decision();
        let mismatches = state.mismatches(&data_est, &synd_est);
        if let Some(t) = trace.as_deref_mut() {
            t(&TraceRecord {
                iteration: state.iteration,
                data_est: data_est.to_string(),
                synd_est: synd_est.to_string(),
                mismatches,
            });
        }
        let converged = mismatches == 0;
        if converged || state.iteration >= max_iter {
            return Ok(DecodeResult {
                data_est,
                synd_est,
                converged,
                iterations: state.iteration,
            });
        }
    }
}

/// Parallel (flooding) schedule.
pub fn decode_parallel(
    graph: &TannerGraph,
    check: &CheckMatrix,
    z: &BitVec,
    priors: &Priors,
    max_iter: usize,
) -> Result<DecodeResult> {
    decode(Schedule::Parallel, graph, check, z, priors, max_iter, None)
}

/// Serial schedule along check nodes.
pub fn decode_serial(
    graph: &TannerGraph,
    check: &CheckMatrix,
    z: &BitVec,
    priors: &Priors,
    max_iter: usize,
) -> Result<DecodeResult> {
    decode(Schedule::Serial, graph, check, z, priors, max_iter, None)
}
