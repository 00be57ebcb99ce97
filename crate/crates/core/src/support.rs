//! Base solver for irreducible games: support enumeration over exact
//! rationals.
//!
//! Support pairs of equal size are tried in increasing size, rows and
//! columns in lexicographic order. For each pair the indifference systems are
//! solved exactly and the candidate is accepted once it passes the exact
//! equilibrium check. Degenerate games can have all their equilibria on
//! supports of unequal size; for those the solver falls back to pairing
//! vertices of the two best-response regions, which always contains an
//! equilibrium.

use num_traits::{One, Signed, Zero};
use thiserror::Error;
use web_time::Instant;

use crate::game::{verify_equilibrium, BimatrixGame, Matrix, MixedProfile, MixedStrategy, Rational};
use crate::linalg::solve_square;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("deadline passed before an equilibrium was found")]
pub struct Timeout;

/// Optional wall-clock limit, checked between candidate supports.
#[derive(Debug, Clone, Copy, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn at(instant: Instant) -> Self {
        Deadline(Some(instant))
    }

    pub fn after(d: std::time::Duration) -> Self {
        Deadline(Some(Instant::now() + d))
    }

    pub fn check(&self) -> Result<(), Timeout> {
        match self.0 {
            Some(t) if Instant::now() >= t => Err(Timeout),
            _ => Ok(()),
        }
    }
}

/// Lexicographic k-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for t in i + 1..k {
                    next[t] = next[t - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Mixed strategy on `support` (out of `len` strategies) that makes the
/// opponent indifferent among the strategies in `targets`.
///
/// `payoff(s, t)` is the opponent's payoff when we play `s` and they play
/// `t`. Solves `Σ_s p_s · payoff(s, t) = v` for `t ∈ targets`, `Σ p_s = 1`;
/// returns `None` if the system is singular or the solution has a negative
/// entry.
fn indifference_strategy(
    len: usize,
    support: &[usize],
    targets: &[usize],
    payoff: impl Fn(usize, usize) -> Rational,
) -> Option<MixedStrategy> {
    let k = support.len();
    debug_assert_eq!(k, targets.len());
    // unknowns: p_s for s in support, then v
    let mut rows = Vec::with_capacity(k + 1);
    let mut rhs = Vec::with_capacity(k + 1);
    for &t in targets {
        let mut row: Vec<Rational> = support.iter().map(|&s| payoff(s, t)).collect();
        row.push(-Rational::one());
        rows.push(row);
        rhs.push(Rational::zero());
    }
    let mut norm = vec![Rational::one(); k];
    norm.push(Rational::zero());
    rows.push(norm);
    rhs.push(Rational::one());
    let sol = solve_square(rows, rhs)?;
    if sol[..k].iter().any(Signed::is_negative) {
        return None;
    }
    let mut probs = vec![Rational::zero(); len];
    for (&s, p) in support.iter().zip(sol) {
        probs[s] = p;
    }
    Some(MixedStrategy::from_parts(probs))
}

fn row_strategy(g: &BimatrixGame, support: &[usize], targets: &[usize]) -> Option<MixedStrategy> {
    let b: &Matrix = g.b();
    indifference_strategy(g.rows(), support, targets, |i, j| b.get(i, j).clone())
}

fn col_strategy(g: &BimatrixGame, support: &[usize], targets: &[usize]) -> Option<MixedStrategy> {
    let a: &Matrix = g.a();
    indifference_strategy(g.cols(), support, targets, |j, i| a.get(i, j).clone())
}

fn pure_equilibrium(g: &BimatrixGame, deadline: &Deadline) -> Result<Option<MixedProfile>, Timeout> {
    let (n, m) = (g.rows(), g.cols());
    let col_max: Vec<Rational> = (0..m)
        .map(|j| (0..n).map(|i| g.a().get(i, j)).max().unwrap().clone())
        .collect();
    for i in 0..n {
        deadline.check()?;
        let row_max = g.b().row(i).iter().max().unwrap();
        for (j, max_a) in col_max.iter().enumerate() {
            if g.a().get(i, j) == max_a && g.b().get(i, j) == row_max {
                return Ok(Some(MixedProfile::pure(n, m, i, j)));
            }
        }
    }
    Ok(None)
}

fn equal_support_search(g: &BimatrixGame, deadline: &Deadline) -> Result<Option<MixedProfile>, Timeout> {
    let (n, m) = (g.rows(), g.cols());
    if let Some(p) = pure_equilibrium(g, deadline)? {
        return Ok(Some(p));
    }
    for k in 2..=n.min(m) {
        for rows in Combinations::new(n, k) {
            for cols in Combinations::new(m, k) {
                deadline.check()?;
                // y makes the row player indifferent on `rows`, x the column player on `cols`.
                let Some(y) = col_strategy(g, &cols, &rows) else {
                    continue;
                };
                let Some(x) = row_strategy(g, &rows, &cols) else {
                    continue;
                };
                let p = MixedProfile::new(x, y);
                if verify_equilibrium(g, &p).expect("shapes match") {
                    return Ok(Some(p));
                }
            }
        }
    }
    Ok(None)
}

/// Every strategy uniquely determined by a support and an equally sized set
/// of opponent strategies kept indifferent.
fn vertex_candidates(
    len: usize,
    other: usize,
    deadline: &Deadline,
    solve: impl Fn(&[usize], &[usize]) -> Option<MixedStrategy>,
) -> Result<Vec<MixedStrategy>, Timeout> {
    let mut out: Vec<MixedStrategy> = Vec::new();
    for k in 1..=len.min(other) {
        for support in Combinations::new(len, k) {
            for targets in Combinations::new(other, k) {
                deadline.check()?;
                if let Some(s) = solve(&support, &targets) {
                    if !out.contains(&s) {
                        out.push(s);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn vertex_pair_search(g: &BimatrixGame, deadline: &Deadline) -> Result<Option<MixedProfile>, Timeout> {
    let (n, m) = (g.rows(), g.cols());
    let xs = vertex_candidates(n, m, deadline, |s, t| row_strategy(g, s, t))?;
    let ys = vertex_candidates(m, n, deadline, |s, t| col_strategy(g, s, t))?;
    for x in &xs {
        for y in &ys {
            deadline.check()?;
            let p = MixedProfile::new(x.clone(), y.clone());
            if verify_equilibrium(g, &p).expect("shapes match") {
                return Ok(Some(p));
            }
        }
    }
    Ok(None)
}

/// Support enumeration with a deadline.
pub fn solve_leaf_until(g: &BimatrixGame, deadline: &Deadline) -> Result<MixedProfile, Timeout> {
    if let Some(p) = equal_support_search(g, deadline)? {
        return Ok(p);
    }
    if let Some(p) = vertex_pair_search(g, deadline)? {
        return Ok(p);
    }
    panic!(
        "support enumeration exhausted without an equilibrium on a {}x{} game: {g:?}",
        g.rows(),
        g.cols()
    );
}

/// Exact equilibrium of any game by support enumeration.
pub fn solve_leaf(g: &BimatrixGame) -> MixedProfile {
    solve_leaf_until(g, &Deadline::none()).expect("no deadline set")
}
