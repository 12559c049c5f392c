//! Raising every column weight of a CSS check block to at least two using
//! additions between adjacent rows.
//!
//! A weight-one column can only gain weight if the row holding its lone 1 is
//! added into another row, so every move starts from that row. Two kinds of
//! move are considered:
//!
//! * a single addition of the lone row into the row directly above or below;
//! * a three-row window `(a, b, c) → (a+b, a+b+c, b+c)`, reachable by the
//!   adjacent additions `a+=b, c+=b, b+=a, b+=c`. This covers runs of rows that
//!   each carry one weight-one column, where single additions alone would only
//!   shift the problem to the next row.
//!
//! The move that leaves the fewest weight-one columns wins, ties going to
//! the lighter result. Near the edge of a block no adjacent move may help
//! (the lone row's neighbour shares a weight-two column with it); then the
//! lone row is added into the nearest row that does help. Such an addition
//! is itself a product of adjacent additions. Row operations are invertible so row spans and
//! orthogonality with the other block are preserved.

use super::CssPair;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    Single { src: usize, dst: usize },
    Window { top: usize },
}

impl Move {
    fn apply(self, m: &mut BitMatrix) {
        match self {
            Move::Single { src, dst } => m.add_row(src, dst),
            Move::Window { top } => {
                let (a, b, c) = (top, top + 1, top + 2);
                m.add_row(b, a);
                m.add_row(b, c);
                m.add_row(a, b);
                m.add_row(c, b);
            }
        }
    }

    fn touched(self) -> Vec<usize> {
        match self {
            Move::Single { dst, .. } => vec![dst],
            Move::Window { top } => vec![top, top + 1, top + 2],
        }
    }
}

fn count_light(m: &BitMatrix) -> usize {
    m.column_weights().iter().filter(|&&w| w < 2).count()
}

fn candidate_moves(lone_row: usize, rows: usize) -> Vec<Move> {
    let mut out = Vec::with_capacity(5);
    if lone_row > 0 {
        out.push(Move::Single {
            src: lone_row,
            dst: lone_row - 1,
        });
    }
    if lone_row + 1 < rows {
        out.push(Move::Single {
            src: lone_row,
            dst: lone_row + 1,
        });
    }
    for top in lone_row.saturating_sub(2)..=lone_row {
        if top + 2 < rows {
            out.push(Move::Window { top });
        }
    }
    out
}

/// Single additions of `lone_row` into rows further away, nearest first.
fn distant_moves(lone_row: usize, rows: usize) -> Vec<Move> {
    let mut dst: Vec<usize> = (0..rows).filter(|&r| r.abs_diff(lone_row) > 1).collect();
    dst.sort_by_key(|&r| (r.abs_diff(lone_row), r));
    dst.into_iter()
        .map(|dst| Move::Single { src: lone_row, dst })
        .collect()
}

/// Lowest `(light columns, touched-row weight)` among moves that strictly
/// reduce the number of light columns.
fn best_move(m: &BitMatrix, light: usize, moves: Vec<Move>) -> Option<Move> {
    let mut best: Option<(usize, usize, Move)> = None;
    for mv in moves {
        let mut trial = m.clone();
        mv.apply(&mut trial);
        let score = count_light(&trial);
        let added: usize = mv.touched().iter().map(|&r| trial.row_weight(r)).sum();
        if score < light && best.is_none_or(|(s, w, _)| (score, added) < (s, w)) {
            best = Some((score, added, mv));
        }
    }
    best.map(|(_, _, mv)| mv)
}

/// Repairs one block in place. Fails on zero columns, when no move makes
/// progress, or after `4 · rows` moves.
fn repair_block(h: &BitMatrix, label: &str) -> Result<BitMatrix> {
    let weights = h.column_weights();
    if let Some(c) = weights.iter().position(|&w| w == 0) {
        return Err(Error::RepairFailed(format!(
            "{label}: column {c} is all zero"
        )));
    }
    let mut m = h.clone();
    let cap = 4 * m.rows();
    let mut moves = 0;
    loop {
        let weights = m.column_weights();
        let light = weights.iter().filter(|&&w| w < 2).count();
        if light == 0 {
            return Ok(m);
        }
        if moves == cap {
            return Err(Error::RepairFailed(format!(
                "{label}: {light} weight-one columns left after {cap} moves"
            )));
        }
        let lone_rows: Vec<usize> = (0..m.cols())
            .filter(|&c| weights[c] == 1)
            .map(|c| (0..m.rows()).find(|&r| m.get(r, c)).expect("weight one"))
            .collect();
        let mv = lone_rows
            .iter()
            .find_map(|&r| best_move(&m, light, candidate_moves(r, m.rows())))
            .or_else(|| {
                lone_rows
                    .iter()
                    .find_map(|&r| best_move(&m, light, distant_moves(r, m.rows())))
            });
        let Some(mv) = mv else {
            return Err(Error::RepairFailed(format!(
                "{label}: no row addition reduces the {light} weight-one columns"
            )));
        };
        mv.apply(&mut m);
        moves += 1;
    }
}

/// Returns an equivalent pair where every column of both blocks has weight
/// at least two. Already-valid blocks are returned unchanged.
pub fn fix_column_weights(c: &CssPair) -> Result<CssPair> {
    let h_x = if c.h_x().rows() == 0 {
        c.h_x().clone()
    } else {
        repair_block(c.h_x(), "h_x")?
    };
    let h_z = if c.h_z().rows() == 0 {
        c.h_z().clone()
    } else {
        repair_block(c.h_z(), "h_z")?
    };
    CssPair::new(h_x, h_z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{hp_129_28, hypergraph_product, min_column_weight};
    use crate::gf2::{multiply_transpose, rank};
    use std::collections::HashSet;

    fn same_span(a: &BitMatrix, b: &BitMatrix) -> bool {
        let r = rank(a);
        r == rank(b) && r == rank(&a.vstack(b).unwrap())
    }

    #[test]
    fn valid_input_unchanged() {
        let hx = BitMatrix::from_dense(&[[1, 1, 0, 1], [0, 1, 1, 1], [1, 0, 1, 0]]).unwrap();
        let c = CssPair::new(hx, BitMatrix::zeros(0, 4)).unwrap();
        assert_eq!(fix_column_weights(&c).unwrap(), c);
    }

    #[test]
    fn identity_block_repaired_by_window() {
        let c = CssPair::new(BitMatrix::identity(3), BitMatrix::zeros(0, 3)).unwrap();
        let fixed = fix_column_weights(&c).unwrap();
        assert_eq!(
            *fixed.h_x(),
            BitMatrix::from_dense(&[[1, 1, 0], [1, 1, 1], [0, 1, 1]]).unwrap()
        );
        assert!(same_span(c.h_x(), fixed.h_x()));
    }

    /// Every matrix reachable from `start` by at most `depth` adjacent
    /// additions, by breadth-first enumeration.
    fn reachable(start: &BitMatrix, depth: usize) -> HashSet<BitMatrix> {
        let mut seen = HashSet::from([start.clone()]);
        let mut frontier = vec![start.clone()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for m in &frontier {
                for r in 0..m.rows() {
                    for t in [r.wrapping_sub(1), r + 1] {
                        if t < m.rows() {
                            let mut n = m.clone();
                            n.add_row(r, t);
                            if seen.insert(n.clone()) {
                                next.push(n);
                            }
                        }
                    }
                }
            }
            frontier = next;
        }
        seen
    }

    #[test]
    fn two_row_toy_is_unrepairable() {
        let hx = BitMatrix::from_dense(&[[1, 0], [1, 1]]).unwrap();
        let oracle = reachable(&hx, 8);
        assert!(oracle.iter().all(|m| min_column_weight(m) < 2));
        let c = CssPair::new(hx, BitMatrix::zeros(0, 2)).unwrap();
        assert!(matches!(
            fix_column_weights(&c),
            Err(Error::RepairFailed(_))
        ));
    }

    #[test]
    fn zero_column_rejected() {
        let hx = BitMatrix::from_dense(&[[1, 0, 1], [1, 0, 1]]).unwrap();
        let c = CssPair::new(hx, BitMatrix::zeros(0, 3)).unwrap();
        assert!(matches!(
            fix_column_weights(&c),
            Err(Error::RepairFailed(_))
        ));
    }

    #[test]
    fn repaired_hp_blocks_keep_spans() {
        let hp = hp_129_28().unwrap();
        assert!(min_column_weight(hp.raw.h_x()) < 2 || min_column_weight(hp.raw.h_z()) < 2);
        for (old, new) in [
            (hp.raw.h_x(), hp.repaired.h_x()),
            (hp.raw.h_z(), hp.repaired.h_z()),
        ] {
            assert!(same_span(old, new));
            assert!(min_column_weight(new) >= 2);
        }
        assert!(multiply_transpose(hp.repaired.h_x(), hp.repaired.h_z())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn repair_of_small_product_preserves_orthogonality() {
        let h = BitMatrix::from_dense(&[[1, 1, 0], [0, 1, 1]]).unwrap();
        let c = hypergraph_product(&h, &h).unwrap();
        if let Ok(fixed) = fix_column_weights(&c) {
            assert!(multiply_transpose(fixed.h_x(), fixed.h_z())
                .unwrap()
                .is_zero());
            assert!(same_span(c.h_x(), fixed.h_x()));
            assert!(same_span(c.h_z(), fixed.h_z()));
        }
    }
}
