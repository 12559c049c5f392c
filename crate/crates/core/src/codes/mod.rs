//! Stabilizer, CSS, hypergraph-product and data-syndrome codes.

mod bch;
mod distance;
mod hypergraph;
mod repair;

use std::fmt;
use std::str::FromStr;

pub use bch::{bch_parity_matrix, generator_poly};
pub use distance::{
    ds_min_distance_bounded, theorem2_preconditions, DistanceSearch, PreconditionReport,
};
pub use hypergraph::hypergraph_product;
pub use repair::fix_column_weights;

use crate::error::{Error, Result};
use crate::gf2::{multiply_transpose, rank, BitMatrix, BitVec, RowSpan};
use crate::pauli::{CheckMatrix, DsError, PauliString};

/// A stabilizer code given by a check matrix with pairwise commuting rows.
#[derive(Clone, Debug)]
pub struct StabilizerCode {
    check: CheckMatrix,
    k: usize,
}

impl StabilizerCode {
    /// Validates commutation and derives `K = N - rank`.
    pub fn new(check: CheckMatrix) -> Result<Self> {
        let rows = check.rows();
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                if crate::pauli::commute(&rows[i], &rows[j])? == 1 {
                    return Err(Error::Anticommuting(i, j));
                }
            }
        }
        let r = rank(&check.symplectic());
        Ok(Self {
            k: check.n() - r,
            check,
        })
    }

    pub fn check(&self) -> &CheckMatrix {
        &self.check
    }

    pub fn n(&self) -> usize {
        self.check.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.check.m()
    }

    pub fn symplectic_rank(&self) -> usize {
        self.n() - self.k
    }
}

/// Header line `N K M` followed by `M` rows over `{I,X,Y,Z}`.
impl fmt::Display for StabilizerCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.n(), self.k, self.m())?;
        for row in self.check.rows() {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl FromStr for StabilizerCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let nums = header
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|e| Error::Parse {
                    line: hline,
                    msg: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let [n, k, m] = nums[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `N K M`".into(),
            });
        };
        let mut rows = Vec::with_capacity(m);
        for (line, text) in lines {
            let row: PauliString = text.parse().map_err(|_| Error::Parse {
                line,
                msg: "invalid Pauli row".into(),
            })?;
            if row.len() != n {
                return Err(Error::Parse {
                    line,
                    msg: format!("row has length {}, expected {n}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != m {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header declares {m} rows, found {}", rows.len()),
            });
        }
        let code = StabilizerCode::new(CheckMatrix::new(n, rows)?)?;
        if code.k != k {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header declares K = {k}, matrix gives {}", code.k),
            });
        }
        Ok(code)
    }
}

/// Binary X- and Z-check matrices of a CSS code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssPair {
    h_x: BitMatrix,
    h_z: BitMatrix,
}

impl CssPair {
    /// Fails unless both blocks share a column count and `h_x · h_zᵀ = 0`.
    pub fn new(h_x: BitMatrix, h_z: BitMatrix) -> Result<Self> {
        let prod = multiply_transpose(&h_x, &h_z)?;
        for i in 0..prod.rows() {
            if let Some(j) = (0..prod.cols()).find(|&j| prod.get(i, j)) {
                return Err(Error::NotOrthogonal { x_row: i, z_row: j });
            }
        }
        Ok(Self { h_x, h_z })
    }

    pub fn h_x(&self) -> &BitMatrix {
        &self.h_x
    }

    pub fn h_z(&self) -> &BitMatrix {
        &self.h_z
    }

    pub fn n(&self) -> usize {
        self.h_x.cols()
    }

    pub fn k(&self) -> usize {
        self.n() - rank(&self.h_x) - rank(&self.h_z)
    }
}

/// X-type rows from `h_x` followed by Z-type rows from `h_z`. Orthogonality
/// is enforced when the `CssPair` is built, so the rows always commute.
pub fn css_to_stabilizer(c: &CssPair) -> Result<StabilizerCode> {
    let n = c.n();
    let mut rows = Vec::with_capacity(c.h_x.rows() + c.h_z.rows());
    for r in 0..c.h_x.rows() {
        rows.push(PauliString::from_bits(c.h_x.row(r), BitVec::zeros(n))?);
    }
    for r in 0..c.h_z.rows() {
        rows.push(PauliString::from_bits(BitVec::zeros(n), c.h_z.row(r))?);
    }
    let check = CheckMatrix::new(n, rows)?;
    let r = rank(&c.h_x) + rank(&c.h_z);
    Ok(StabilizerCode { check, k: n - r })
}

/// The data-syndrome extension `[S | I_M]`. The identity block is implicit:
/// DS row `m` is `(S_m, unit vector e_m)`.
#[derive(Clone, Debug)]
pub struct DsCheckMatrix {
    base: StabilizerCode,
}

impl DsCheckMatrix {
    pub fn base(&self) -> &StabilizerCode {
        &self.base
    }

    pub fn check(&self) -> &CheckMatrix {
        self.base.check()
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn k(&self) -> usize {
        self.base.k()
    }

    pub fn m(&self) -> usize {
        self.base.m()
    }

    /// Materializes row `m` of `[S | I_M]`.
    pub fn ds_row(&self, m: usize) -> DsError {
        DsError::new(self.check().row(m).clone(), BitVec::unit(self.m(), m))
    }

    /// `[[N,K|M]]`.
    pub fn params(&self) -> (usize, usize, usize) {
        (self.n(), self.k(), self.m())
    }

    pub fn stabilizer_span(&self) -> RowSpan {
        self.check().stabilizer_span()
    }

    /// Renders `S | I_M` row by row, e.g. `XYI|10`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in 0..self.m() {
            out.push_str(&self.check().row(m).to_string());
            out.push('|');
            out.push_str(&BitVec::unit(self.m(), m).to_string());
            out.push('\n');
        }
        out
    }
}

pub fn ds_extend(s: StabilizerCode) -> DsCheckMatrix {
    DsCheckMatrix { base: s }
}

/// Every stage of the built-in `[[129,28|101]]` construction.
#[derive(Clone, Debug)]
pub struct HpConstruction {
    pub h1: BitMatrix,
    pub h2: BitMatrix,
    pub raw: CssPair,
    pub repaired: CssPair,
    pub code: DsCheckMatrix,
}

/// Hypergraph product of the `[7,4,3]` and `[15,7,5]` BCH codes, with
/// weight-one columns repaired by adjacent row additions.
pub fn hp_129_28() -> Result<HpConstruction> {
    let h1 = bch_parity_matrix(7, 4)?;
    let h2 = bch_parity_matrix(15, 7)?;
    let raw = hypergraph_product(&h1, &h2)?;
    let repaired = fix_column_weights(&raw)?;
    let code = ds_extend(css_to_stabilizer(&repaired)?);
    Ok(HpConstruction {
        h1,
        h2,
        raw,
        repaired,
        code,
    })
}

/// Minimum column weight of a binary matrix (0 for an empty matrix).
pub fn min_column_weight(m: &BitMatrix) -> usize {
    m.column_weights().into_iter().min().unwrap_or(0)
}
