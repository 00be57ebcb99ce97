//! Iterated elimination of strictly dominated pure strategies.

use num_traits::Zero;

use crate::game::{BimatrixGame, GameError, Matrix, MixedProfile, MixedStrategy, Player, Rational};

/// `dominated` is strictly worse than `dominator` against every opponent choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Domination {
    pub player: Player,
    pub dominated: usize,
    pub dominator: usize,
}

/// Which original strategies survive elimination, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReductionRecord {
    pub kept_rows: Vec<usize>,
    pub kept_cols: Vec<usize>,
    pub original_rows: usize,
    pub original_cols: usize,
}

impl ReductionRecord {
    pub fn identity(rows: usize, cols: usize) -> Self {
        ReductionRecord {
            kept_rows: (0..rows).collect(),
            kept_cols: (0..cols).collect(),
            original_rows: rows,
            original_cols: cols,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.kept_rows.len() == self.original_rows && self.kept_cols.len() == self.original_cols
    }

    pub fn reduced_dims(&self) -> (usize, usize) {
        (self.kept_rows.len(), self.kept_cols.len())
    }
}

/// Row `i` beats row `k` of `m` on every listed column.
fn row_beats(m: &Matrix, i: usize, k: usize, cols: &[usize]) -> bool {
    cols.iter().all(|&j| m.get(i, j) > m.get(k, j))
}

/// Column `j` beats column `l` of `m` on every listed row.
fn col_beats(m: &Matrix, j: usize, l: usize, rows: &[usize]) -> bool {
    rows.iter().all(|&i| m.get(i, j) > m.get(i, l))
}

/// First strictly dominated pure strategy, scanning the row player first,
/// then by dominated index, then by dominator index.
pub fn find_strictly_dominated(g: &BimatrixGame) -> Option<Domination> {
    let rows: Vec<usize> = (0..g.rows()).collect();
    let cols: Vec<usize> = (0..g.cols()).collect();
    for &i in &rows {
        if let Some(&k) = rows.iter().find(|&&k| k != i && row_beats(g.a(), k, i, &cols)) {
            return Some(Domination {
                player: Player::Row,
                dominated: i,
                dominator: k,
            });
        }
    }
    for &j in &cols {
        if let Some(&l) = cols.iter().find(|&&l| l != j && col_beats(g.b(), l, j, &rows)) {
            return Some(Domination {
                player: Player::Col,
                dominated: j,
                dominator: l,
            });
        }
    }
    None
}

/// Removes strictly dominated strategies until none are left.
///
/// Each pass drops every row dominated within the current game, then every
/// column. Strict dominance is transitive, so an undominated dominator always
/// survives the pass, and the fixpoint is the same as one-at-a-time removal.
pub fn eliminate_iterated(g: &BimatrixGame) -> (BimatrixGame, ReductionRecord) {
    let mut rows: Vec<usize> = (0..g.rows()).collect();
    let mut cols: Vec<usize> = (0..g.cols()).collect();
    loop {
        let keep_rows: Vec<usize> = rows
            .iter()
            .copied()
            .filter(|&i| !rows.iter().any(|&k| k != i && row_beats(g.a(), k, i, &cols)))
            .collect();
        let rows_changed = keep_rows.len() != rows.len();
        rows = keep_rows;
        let keep_cols: Vec<usize> = cols
            .iter()
            .copied()
            .filter(|&j| !cols.iter().any(|&l| l != j && col_beats(g.b(), l, j, &rows)))
            .collect();
        let cols_changed = keep_cols.len() != cols.len();
        cols = keep_cols;
        if !rows_changed && !cols_changed {
            break;
        }
    }
    let record = ReductionRecord {
        original_rows: g.rows(),
        original_cols: g.cols(),
        kept_rows: rows,
        kept_cols: cols,
    };
    let reduced = if record.is_identity() {
        g.clone()
    } else {
        g.select(&record.kept_rows, &record.kept_cols)
    };
    (reduced, record)
}

/// Embeds a reduced-game profile back into the original strategy space,
/// with eliminated strategies at probability zero.
pub fn lift_equilibrium(r: &ReductionRecord, e: &MixedProfile) -> Result<MixedProfile, GameError> {
    let lift = |s: &MixedStrategy, kept: &[usize], len: usize, what| {
        if s.len() != kept.len() {
            return Err(GameError::shape(what, kept.len(), s.len()));
        }
        let mut out = vec![Rational::zero(); len];
        for (p, &idx) in s.probs().iter().zip(kept) {
            out[idx] = p.clone();
        }
        Ok(MixedStrategy::from_parts(out))
    };
    Ok(MixedProfile::new(
        lift(&e.x, &r.kept_rows, r.original_rows, "row strategy")?,
        lift(&e.y, &r.kept_cols, r.original_cols, "column strategy")?,
    ))
}
