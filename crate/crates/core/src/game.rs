//! Exact-rational bimatrix games, mixed strategies and equilibrium checks.
//!
//! Everything here is exact: payoffs and probabilities are [`Rational`]s and
//! the equilibrium test compares expected payoffs with pure best-response
//! values without any tolerance.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Shorthand for `num / den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("shape mismatch for {what}: expected {expected}, got {got}")]
    Shape {
        what: &'static str,
        expected: String,
        got: String,
    },
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("ragged matrix: row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, got: usize },
    #[error("invalid mixed strategy: {0}")]
    InvalidStrategy(String),
}

impl GameError {
    pub(crate) fn shape(what: &'static str, expected: impl fmt::Display, got: impl fmt::Display) -> Self {
        GameError::Shape {
            what,
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}

/// The two players of a bimatrix game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Row,
    Col,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Row => f.write_str("row"),
            Player::Col => f.write_str("col"),
        }
    }
}

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, GameError> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(GameError::Empty);
        }
        let mut data = Vec::with_capacity(n * m);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != m {
                return Err(GameError::Ragged {
                    row: i,
                    expected: m,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: n, cols: m, data })
    }

    /// Builds a matrix from integer rows. Panics on ragged or empty input;
    /// meant for literals in tests and examples.
    pub fn from_integers<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| int(v)).collect())
            .collect();
        Matrix::from_rows(rows).expect("integer literal matrix must be rectangular and nonempty")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &Rational> {
        self.data.iter()
    }

    pub fn max_abs(&self) -> Rational {
        self.data.iter().map(Signed::abs).max().expect("matrix is nonempty")
    }

    /// Submatrix on the given (ordered) row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn map(&self, f: impl FnMut(&Rational) -> Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// `self * v` restricted to nonzero entries of `v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        debug_assert_eq!(v.len(), self.cols);
        let support: Vec<usize> = (0..self.cols).filter(|&j| !v[j].is_zero()).collect();
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                support.iter().fold(Rational::zero(), |acc, &j| acc + &row[j] * &v[j])
            })
            .collect()
    }

    /// `vᵀ * self` restricted to nonzero entries of `v`.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![Rational::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        self.get(i, j)
    }
}

/// A two-player normal-form game given by payoff matrices of equal shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BimatrixGame {
    a: Matrix,
    b: Matrix,
}

impl BimatrixGame {
    pub fn new(a: Matrix, b: Matrix) -> Result<Self, GameError> {
        if a.rows != b.rows || a.cols != b.cols {
            return Err(GameError::shape(
                "payoff matrix B",
                format!("{}x{}", a.rows, a.cols),
                format!("{}x{}", b.rows, b.cols),
            ));
        }
        Ok(BimatrixGame { a, b })
    }

    pub fn from_integers<R: AsRef<[i64]>>(a: &[R], b: &[R]) -> Self {
        BimatrixGame::new(Matrix::from_integers(a), Matrix::from_integers(b))
            .expect("integer literal game must have matching shapes")
    }

    /// The 2×2 zero-sum game A=[[1,-1],[-1,1]], B=-A.
    pub fn matching_pennies() -> Self {
        BimatrixGame::from_integers(&[[1, -1], [-1, 1]], &[[-1, 1], [1, -1]])
    }

    pub fn rows(&self) -> usize {
        self.a.rows
    }

    pub fn cols(&self) -> usize {
        self.a.cols
    }

    /// `n·m`, the number of pure strategy profiles.
    pub fn size(&self) -> usize {
        self.a.rows * self.a.cols
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn payoffs(&self, player: Player) -> &Matrix {
        match player {
            Player::Row => &self.a,
            Player::Col => &self.b,
        }
    }

    /// Largest absolute payoff over both matrices.
    pub fn max_abs(&self) -> Rational {
        self.a.max_abs().max(self.b.max_abs())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> BimatrixGame {
        BimatrixGame {
            a: self.a.select(rows, cols),
            b: self.b.select(rows, cols),
        }
    }

    pub fn strategy_count(&self, player: Player) -> usize {
        match player {
            Player::Row => self.rows(),
            Player::Col => self.cols(),
        }
    }
}

/// Probability vector over one player's pure strategies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedStrategy(Vec<Rational>);

impl MixedStrategy {
    pub fn new(probs: Vec<Rational>) -> Result<Self, GameError> {
        if probs.is_empty() {
            return Err(GameError::InvalidStrategy("empty probability vector".into()));
        }
        if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| p.is_negative()) {
            return Err(GameError::InvalidStrategy(format!("entry {} is negative ({p})", i + 1)));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(GameError::InvalidStrategy(format!("entries sum to {total}, not 1")));
        }
        Ok(MixedStrategy(probs))
    }

    /// Caller guarantees the invariants; checked in debug builds.
    pub(crate) fn from_parts(probs: Vec<Rational>) -> Self {
        debug_assert!(MixedStrategy::new(probs.clone()).is_ok(), "invalid strategy {probs:?}");
        MixedStrategy(probs)
    }

    pub fn pure(len: usize, index: usize) -> Self {
        assert!(index < len, "pure strategy {index} out of range 0..{len}");
        let mut probs = vec![Rational::zero(); len];
        probs[index] = Rational::one();
        MixedStrategy(probs)
    }

    pub fn uniform(len: usize) -> Self {
        assert!(len > 0);
        MixedStrategy(vec![ratio(1, len as i64); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn probs(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_probs(self) -> Vec<Rational> {
        self.0
    }

    /// Indices with strictly positive probability.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i].is_positive()).collect()
    }
}

impl Index<usize> for MixedStrategy {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

/// A strategy for each player: `x` over rows, `y` over columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedProfile {
    pub x: MixedStrategy,
    pub y: MixedStrategy,
}

impl MixedProfile {
    pub fn new(x: MixedStrategy, y: MixedStrategy) -> Self {
        MixedProfile { x, y }
    }

    pub fn pure(n: usize, m: usize, i: usize, j: usize) -> Self {
        MixedProfile::new(MixedStrategy::pure(n, i), MixedStrategy::pure(m, j))
    }

    pub fn check_shape(&self, g: &BimatrixGame) -> Result<(), GameError> {
        if self.x.len() != g.rows() {
            return Err(GameError::shape("row strategy", g.rows(), self.x.len()));
        }
        if self.y.len() != g.cols() {
            return Err(GameError::shape("column strategy", g.cols(), self.y.len()));
        }
        Ok(())
    }
}

/// Expected payoffs of both players under a profile.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PayoffPair {
    pub row: Rational,
    pub col: Rational,
}

fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter()
        .zip(v)
        .filter(|(a, _)| !a.is_zero())
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// `(xᵀAy, xᵀBy)`.
pub fn expected_payoffs(g: &BimatrixGame, p: &MixedProfile) -> Result<PayoffPair, GameError> {
    p.check_shape(g)?;
    let ay = g.a.mul_vec(p.y.probs());
    let xb = g.b.vec_mul(p.x.probs());
    Ok(PayoffPair {
        row: dot(p.x.probs(), &ay),
        col: dot(p.y.probs(), &xb),
    })
}

/// Payoff of every pure strategy of `player` against the opponent's mixed strategy.
pub fn pure_payoffs(g: &BimatrixGame, player: Player, opponent: &MixedStrategy) -> Result<Vec<Rational>, GameError> {
    match player {
        Player::Row => {
            if opponent.len() != g.cols() {
                return Err(GameError::shape("column strategy", g.cols(), opponent.len()));
            }
            Ok(g.a.mul_vec(opponent.probs()))
        }
        Player::Col => {
            if opponent.len() != g.rows() {
                return Err(GameError::shape("row strategy", g.rows(), opponent.len()));
            }
            Ok(g.b.vec_mul(opponent.probs()))
        }
    }
}

/// Best payoff `player` can reach with a pure strategy against `opponent`.
pub fn pure_best_response_value(
    g: &BimatrixGame,
    player: Player,
    opponent: &MixedStrategy,
) -> Result<Rational, GameError> {
    Ok(pure_payoffs(g, player, opponent)?
        .into_iter()
        .max()
        .expect("games have at least one strategy per player"))
}

/// Exact Nash test: each player's expected payoff equals their pure
/// best-response value against the other's strategy.
pub fn verify_equilibrium(g: &BimatrixGame, p: &MixedProfile) -> Result<bool, GameError> {
    p.check_shape(g)?;
    let ay = g.a.mul_vec(p.y.probs());
    let row_value = dot(p.x.probs(), &ay);
    if ay.iter().any(|v| *v > row_value) {
        return Ok(false);
    }
    let xb = g.b.vec_mul(p.x.probs());
    let col_value = dot(p.y.probs(), &xb);
    Ok(xb.iter().all(|v| *v <= col_value))
}
