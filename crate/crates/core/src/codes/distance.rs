use std::collections::HashMap;

use super::{min_column_weight, CssPair, DsCheckMatrix};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::pauli::{syndrome, DsError, Pauli, PauliString};

/// Outcome of the column-weight and classical-distance conditions that
/// guarantee DS distance at least three for a CSS code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreconditionReport {
    pub ok: bool,
    pub reasons: Vec<String>,
}

/// The kernel of `h` has distance at least 3 iff no column is zero and no two
/// columns coincide (a weight-1 or weight-2 kernel vector is exactly that).
fn classical_distance_at_least_3(h: &BitMatrix) -> std::result::Result<(), String> {
    let mut seen: HashMap<BitVec, usize> = HashMap::new();
    for c in 0..h.cols() {
        let col = h.column(c);
        if col.is_zero() {
            return Err(format!("column {c} is zero (weight-1 codeword)"));
        }
        if let Some(prev) = seen.insert(col, c) {
            return Err(format!(
                "columns {prev} and {c} coincide (weight-2 codeword)"
            ));
        }
    }
    Ok(())
}

pub fn theorem2_preconditions(c: &CssPair) -> PreconditionReport {
    let mut reasons = Vec::new();
    for (label, h) in [("h_x", c.h_x()), ("h_z", c.h_z())] {
        let w = min_column_weight(h);
        if w < 2 {
            reasons.push(format!("{label} has a column of weight {w}"));
        }
        if let Err(why) = classical_distance_at_least_3(h) {
            reasons.push(format!("{label}: {why}"));
        }
    }
    PreconditionReport {
        ok: reasons.is_empty(),
        reasons,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceSearch {
    /// Whether some element of the DS normalizer outside the stabilizer set
    /// has weight at most `w_max`.
    pub found: bool,
    /// A minimum-weight witness when `found`.
    pub witness: Option<DsError>,
    /// Number of partial supports visited.
    pub candidates: u64,
}

/// One weight-one component of a DS error: a Pauli on a data qubit or a flip
/// of one syndrome bit. `position` orders supports for deduplication.
#[derive(Clone, Debug)]
struct Atom {
    position: usize,
    kind: AtomKind,
    residue: BitVec,
}

#[derive(Clone, Copy, Debug)]
enum AtomKind {
    Data(usize, Pauli),
    Synd(usize),
}

fn atoms(d: &DsCheckMatrix) -> Result<Vec<Atom>> {
    let (n, m) = (d.n(), d.m());
    let mut out = Vec::with_capacity(3 * n + m);
    for q in 0..n {
        for p in Pauli::NON_IDENTITY {
            out.push(Atom {
                position: q,
                kind: AtomKind::Data(q, p),
                residue: syndrome(&PauliString::single(n, q, p), d.check())?,
            });
        }
    }
    for j in 0..m {
        out.push(Atom {
            position: n + j,
            kind: AtomKind::Synd(j),
            residue: BitVec::unit(m, j),
        });
    }
    Ok(out)
}

fn assemble(d: &DsCheckMatrix, parts: &[&Atom]) -> DsError {
    let mut e = DsError::identity(d.n(), d.m());
    for a in parts {
        match a.kind {
            AtomKind::Data(q, p) => e.data.set(q, p),
            AtomKind::Synd(j) => e.synd.set(j, true),
        }
    }
    e
}

/// Exhaustive search for the lightest `(F, f)` with `⟨(F,f), S̃_m⟩ = 0` for all
/// `m` that is not of the form `(stabilizer, 0)`, over weights `1..=w_max`.
///
/// Supports of size `w - 1` are enumerated in increasing position order and
/// the last component is looked up by residue, so a weight-`w` pass visits
/// `C(3N + M, w - 1)` partial supports. More than `budget` visits is an error.
pub fn ds_min_distance_bounded(
    d: &DsCheckMatrix,
    w_max: usize,
    budget: u64,
) -> Result<DistanceSearch> {
    let atoms = atoms(d)?;
    let mut by_residue: HashMap<&BitVec, Vec<usize>> = HashMap::new();
    for (i, a) in atoms.iter().enumerate() {
        by_residue.entry(&a.residue).or_default().push(i);
    }
    let span = d.stabilizer_span();
    let mut search = Search {
        d,
        atoms: &atoms,
        by_residue: &by_residue,
        span: &span,
        visited: 0,
        budget,
        stack: Vec::new(),
    };
    for w in 1..=w_max {
        let acc = BitVec::zeros(d.m());
        if let Some(witness) = search.extend(w - 1, 0, &acc)? {
            return Ok(DistanceSearch {
                found: true,
                witness: Some(witness),
                candidates: search.visited,
            });
        }
    }
    Ok(DistanceSearch {
        found: false,
        witness: None,
        candidates: search.visited,
    })
}

struct Search<'a> {
    d: &'a DsCheckMatrix,
    atoms: &'a [Atom],
    by_residue: &'a HashMap<&'a BitVec, Vec<usize>>,
    span: &'a crate::gf2::RowSpan,
    visited: u64,
    budget: u64,
    stack: Vec<usize>,
}

impl Search<'_> {
    /// Chooses `remaining` more atoms from index `from` onwards, then closes
    /// the support with a lookup.
    fn extend(&mut self, remaining: usize, from: usize, acc: &BitVec) -> Result<Option<DsError>> {
        if remaining == 0 {
            self.visited += 1;
            if self.visited > self.budget {
                return Err(Error::SearchBudget(self.budget));
            }
            return Ok(self.close(acc));
        }
        let min_pos = self.stack.last().map(|&i| self.atoms[i].position + 1);
        for i in from..self.atoms.len() {
            if min_pos.is_some_and(|p| self.atoms[i].position < p) {
                continue;
            }
            self.stack.push(i);
            let next = acc.xor(&self.atoms[i].residue);
            let found = self.extend(remaining - 1, i + 1, &next)?;
            self.stack.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn close(&self, acc: &BitVec) -> Option<DsError> {
        let last_pos = self.stack.last().map(|&i| self.atoms[i].position);
        let candidates = self.by_residue.get(acc)?;
        for &c in candidates {
            if last_pos.is_some_and(|p| self.atoms[c].position <= p) {
                continue;
            }
            let mut parts: Vec<&Atom> = self.stack.iter().map(|&i| &self.atoms[i]).collect();
            parts.push(&self.atoms[c]);
            let e = assemble(self.d, &parts);
            let trivial = e.synd.is_zero() && self.span.contains(&e.data.symplectic());
            if !trivial {
                return Some(e);
            }
        }
        None
    }
}
