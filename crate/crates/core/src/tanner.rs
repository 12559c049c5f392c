//! Tanner graph of a DS check matrix `[S | I_M]`.
//!
//! Variable nodes `0..N` are data qubits and `N..N+M` are syndrome bits;
//! check node `m` touches data node `n` when `S_mn ≠ I` and always touches
//! syndrome node `N + m`. Edges are stored check-major: the edges of check
//! `m` are the contiguous range `check_ptr[m]..check_ptr[m + 1]`, data
//! neighbours in ascending order followed by the syndrome neighbour.

use std::fmt::Write as _;

use crate::codes::DsCheckMatrix;
use crate::pauli::Pauli;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannerGraph {
    n_data: usize,
    n_synd: usize,
    check_ptr: Vec<usize>,
    edge_var: Vec<usize>,
    /// Pauli label for data edges, `None` for the syndrome edge.
    edge_label: Vec<Option<Pauli>>,
    /// For each variable, the edge ids incident to it, ordered by check.
    var_edges: Vec<Vec<usize>>,
}

impl TannerGraph {
    pub fn build(d: &DsCheckMatrix) -> Self {
        let (n, m) = (d.n(), d.m());
        let mut check_ptr = Vec::with_capacity(m + 1);
        let mut edge_var = Vec::new();
        let mut edge_label = Vec::new();
        let mut var_edges = vec![Vec::new(); n + m];
        check_ptr.push(0);
        for c in 0..m {
            let row = d.check().row(c);
            for v in row.support() {
                var_edges[v].push(edge_var.len());
                edge_var.push(v);
                edge_label.push(Some(row.get(v)));
            }
            var_edges[n + c].push(edge_var.len());
            edge_var.push(n + c);
            edge_label.push(None);
            check_ptr.push(edge_var.len());
        }
        Self {
            n_data: n,
            n_synd: m,
            check_ptr,
            edge_var,
            edge_label,
            var_edges,
        }
    }

    #[inline]
    pub fn n_data(&self) -> usize {
        self.n_data
    }

    #[inline]
    pub fn n_synd(&self) -> usize {
        self.n_synd
    }

    #[inline]
    pub fn n_checks(&self) -> usize {
        self.n_synd
    }

    #[inline]
    pub fn n_vars(&self) -> usize {
        self.n_data + self.n_synd
    }

    #[inline]
    pub fn n_edges(&self) -> usize {
        self.edge_var.len()
    }

    /// Edge ids of check `m`.
    #[inline]
    pub fn check_edges(&self, m: usize) -> std::ops::Range<usize> {
        self.check_ptr[m]..self.check_ptr[m + 1]
    }

    /// Edge ids incident to variable `v`.
    #[inline]
    pub fn var_edges(&self, v: usize) -> &[usize] {
        &self.var_edges[v]
    }

    #[inline]
    pub fn edge_var(&self, e: usize) -> usize {
        self.edge_var[e]
    }

    #[inline]
    pub fn edge_label(&self, e: usize) -> Option<Pauli> {
        self.edge_label[e]
    }

    /// Check node owning edge `e`.
    pub fn edge_check(&self, e: usize) -> usize {
        self.check_ptr.partition_point(|&p| p <= e) - 1
    }

    /// `𝒩(m)`: variable indices adjacent to check `m`, syndrome node last.
    pub fn check_neighbors(&self, m: usize) -> Vec<usize> {
        self.check_edges(m).map(|e| self.edge_var[e]).collect()
    }

    /// `𝓜(v)`: checks adjacent to variable `v`.
    pub fn var_neighbors(&self, v: usize) -> Vec<usize> {
        self.var_edges[v]
            .iter()
            .map(|&e| self.edge_check(e))
            .collect()
    }

    /// Graphviz rendering: data nodes as circles, syndrome nodes as filled
    /// circles, checks as boxes; X/Y/Z edges solid/dashed/dotted and the
    /// syndrome edge bold.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph tanner {\n");
        for v in 0..self.n_data {
            let _ = writeln!(s, "  v{v} [label=\"{}\", shape=circle];", v + 1);
        }
        for v in self.n_data..self.n_vars() {
            let _ = writeln!(
                s,
                "  v{v} [label=\"{}\", shape=circle, style=filled, fillcolor=lightblue];",
                v + 1
            );
        }
        for m in 0..self.n_synd {
            let _ = writeln!(s, "  c{m} [label=\"c{}\", shape=box];", m + 1);
        }
        for m in 0..self.n_synd {
            for e in self.check_edges(m) {
                let style = match self.edge_label[e] {
                    Some(Pauli::X) => "solid",
                    Some(Pauli::Y) => "dashed",
                    Some(Pauli::Z) => "dotted",
                    Some(Pauli::I) => unreachable!("identity entries have no edge"),
                    None => "bold",
                };
                let _ = writeln!(s, "  c{m} -- v{} [style={style}];", self.edge_var[e]);
            }
        }
        s.push_str("}\n");
        s
    }
}
