//! Sums and products of bimatrix games, their inverse decompositions, and
//! the maps that carry equilibria between a composed game and its parts.
//!
//! A product plays both games at once and adds the payoffs. A sum lets the
//! players first play matching pennies over which game to enter: on a
//! mismatch the row player receives `K` and the column player `-K`.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::game::{BimatrixGame, GameError, Matrix, MixedProfile, MixedStrategy, PayoffPair, Player, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(
        "sum constant {k} does not exceed |{value}| ({player} payoff at row {row}, col {col} of component {component})"
    )]
    SumConstantTooSmall {
        k: Box<Rational>,
        value: Box<Rational>,
        player: Player,
        component: usize,
        row: usize,
        col: usize,
    },
    #[error("{player} block mass {mass} is not strictly between 0 and 1; profile is not an equilibrium of a sum game")]
    BlockMass { player: Player, mass: Rational },
    #[error("sum combination weight denominator {0} has the wrong sign")]
    NonPositiveWeight(Rational),
}

/// Row-major pairing of `0..outer` × `0..inner` onto `0..outer·inner`.
///
/// In 1-based terms this is `[i1, i2] = (i1 - 1)·inner + i2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexPairing {
    pub outer: usize,
    pub inner: usize,
}

impl IndexPairing {
    pub fn new(outer: usize, inner: usize) -> Self {
        IndexPairing { outer, inner }
    }

    pub fn len(&self) -> usize {
        self.outer * self.inner
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn pair(&self, i1: usize, i2: usize) -> usize {
        debug_assert!(i1 < self.outer && i2 < self.inner);
        i1 * self.inner + i2
    }

    #[inline]
    pub fn unpair(&self, k: usize) -> (usize, usize) {
        debug_assert!(k < self.len());
        (k / self.inner, k % self.inner)
    }
}

/// Factors of a product game. Neither factor is 1×1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductParts {
    pub first: BimatrixGame,
    pub second: BimatrixGame,
}

impl ProductParts {
    pub fn row_pairing(&self) -> IndexPairing {
        IndexPairing::new(self.first.rows(), self.second.rows())
    }

    pub fn col_pairing(&self) -> IndexPairing {
        IndexPairing::new(self.first.cols(), self.second.cols())
    }

    pub fn recompose(&self) -> BimatrixGame {
        compose_product(&self.first, &self.second)
    }
}

/// Components of a sum game and the off-block constant `K`.
///
/// `K` strictly exceeds every payoff magnitude of both components. A sum
/// found inside a larger game may be translated: the game is then the sum
/// plus `shift_row` on every row-player payoff and `shift_col` on every
/// column-player payoff. Translation does not change equilibria.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumParts {
    first: BimatrixGame,
    second: BimatrixGame,
    k: Rational,
    shift_row: Rational,
    shift_col: Rational,
}

impl SumParts {
    pub fn new(first: BimatrixGame, second: BimatrixGame, k: Rational) -> Result<Self, AlgebraError> {
        check_sum_constant(&first, &second, &k)?;
        Ok(SumParts {
            first,
            second,
            k,
            shift_row: Rational::zero(),
            shift_col: Rational::zero(),
        })
    }

    pub fn first(&self) -> &BimatrixGame {
        &self.first
    }

    pub fn second(&self) -> &BimatrixGame {
        &self.second
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }

    /// Constants added to `(A, B)` on top of the exact sum.
    pub fn shift(&self) -> (&Rational, &Rational) {
        (&self.shift_row, &self.shift_col)
    }

    pub fn is_exact(&self) -> bool {
        self.shift_row.is_zero() && self.shift_col.is_zero()
    }

    pub fn into_parts(self) -> (BimatrixGame, BimatrixGame, Rational) {
        (self.first, self.second, self.k)
    }

    pub fn recompose(&self) -> BimatrixGame {
        let g = compose_sum_unchecked(&self.first, &self.second, &self.k);
        if self.is_exact() {
            return g;
        }
        BimatrixGame::new(g.a().map(|v| v + &self.shift_row), g.b().map(|v| v + &self.shift_col)).expect("same shape")
    }
}

fn check_sum_constant(g1: &BimatrixGame, g2: &BimatrixGame, k: &Rational) -> Result<(), AlgebraError> {
    for (component, g) in [(1, g1), (2, g2)] {
        for player in [Player::Row, Player::Col] {
            let m = g.payoffs(player);
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let v = m.get(i, j);
                    if v.abs() >= *k {
                        return Err(AlgebraError::SumConstantTooSmall {
                            k: Box::new(k.clone()),
                            value: Box::new(v.clone()),
                            player,
                            component,
                            row: i + 1,
                            col: j + 1,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// `A[[i1,i2]][[j1,j2]] = A¹[i1][j1] + A²[i2][j2]`, likewise for `B`.
pub fn compose_product(g1: &BimatrixGame, g2: &BimatrixGame) -> BimatrixGame {
    let rows = IndexPairing::new(g1.rows(), g2.rows());
    let cols = IndexPairing::new(g1.cols(), g2.cols());
    let build = |m1: &Matrix, m2: &Matrix| {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| {
            let (i1, i2) = rows.unpair(r);
            let (j1, j2) = cols.unpair(c);
            m1.get(i1, j1) + m2.get(i2, j2)
        })
    };
    BimatrixGame::new(build(g1.a(), g2.a()), build(g1.b(), g2.b())).expect("factor shapes agree")
}

fn divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

/// Tries every nontrivial factor shape, first rows then columns by
/// increasing first-factor size, and returns the first that reproduces `g`.
pub fn decompose_product(g: &BimatrixGame) -> Option<ProductParts> {
    let (n, m) = (g.rows(), g.cols());
    for n1 in divisors(n) {
        for m1 in divisors(m) {
            let (n2, m2) = (n / n1, m / m1);
            if (n1 == 1 && m1 == 1) || (n2 == 1 && m2 == 1) {
                continue;
            }
            if let Some(parts) = try_product_split(g, n1, n2, m1, m2) {
                return Some(parts);
            }
        }
    }
    None
}

fn try_product_split(g: &BimatrixGame, n1: usize, n2: usize, m1: usize, m2: usize) -> Option<ProductParts> {
    let rows = IndexPairing::new(n1, n2);
    let cols = IndexPairing::new(m1, m2);
    let factor = |m: &Matrix| -> Option<(Matrix, Matrix)> {
        // Anchor: the second factor's (0,0) payoff is zero.
        let origin = m.get(0, 0);
        let first = Matrix::from_fn(n1, m1, |i1, j1| m.get(rows.pair(i1, 0), cols.pair(j1, 0)).clone());
        let second = Matrix::from_fn(n2, m2, |i2, j2| m.get(rows.pair(0, i2), cols.pair(0, j2)) - origin);
        for i1 in 0..n1 {
            for i2 in 0..n2 {
                let r = rows.pair(i1, i2);
                for j1 in 0..m1 {
                    for j2 in 0..m2 {
                        let c = cols.pair(j1, j2);
                        if *m.get(r, c) != first.get(i1, j1) + second.get(i2, j2) {
                            return None;
                        }
                    }
                }
            }
        }
        Some((first, second))
    };
    let (a1, a2) = factor(g.a())?;
    let (b1, b2) = factor(g.b())?;
    Some(ProductParts {
        first: BimatrixGame::new(a1, b1).ok()?,
        second: BimatrixGame::new(a2, b2).ok()?,
    })
}

fn compose_sum_unchecked(g1: &BimatrixGame, g2: &BimatrixGame, k: &Rational) -> BimatrixGame {
    let (n1, m1) = (g1.rows(), g1.cols());
    let n = n1 + g2.rows();
    let m = m1 + g2.cols();
    let neg_k = -k.clone();
    let build = |p1: &Matrix, p2: &Matrix, off: &Rational| {
        Matrix::from_fn(n, m, |i, j| match (i < n1, j < m1) {
            (true, true) => p1.get(i, j).clone(),
            (false, false) => p2.get(i - n1, j - m1).clone(),
            _ => off.clone(),
        })
    };
    BimatrixGame::new(build(g1.a(), g2.a(), k), build(g1.b(), g2.b(), &neg_k)).expect("block shapes agree")
}

/// Block game with `g1` top-left, `g2` bottom-right, and off-blocks paying
/// `K` to the row player and `-K` to the column player.
pub fn compose_sum(g1: &BimatrixGame, g2: &BimatrixGame, k: &Rational) -> Result<BimatrixGame, AlgebraError> {
    check_sum_constant(g1, g2, k)?;
    Ok(compose_sum_unchecked(g1, g2, k))
}

/// Detects a contiguous block split whose off-blocks are `(K, -K)`, up to a
/// constant added to each payoff matrix.
///
/// Off-block cells all carry the same pair `(c_A, c_B)`. Translating by
/// `(a, b)` gives an exact sum iff every diagonal-block row payoff is below
/// `c_A` and every diagonal-block column payoff is above `c_B`; then any
/// `K > max((c_A - A_d)/2, (B_d - c_B)/2)` works with `a = c_A - K`,
/// `b = c_B + K`. Exact sums are returned untranslated.
///
/// Diagonal cells can never look like off-block cells, so the split is
/// forced: `(c_A, c_B)` is read off the top-right corner, the column split
/// is just after the last other cell of row 1 and the row split just after
/// the last other cell of column 1. The whole check is linear in `n·m`.
pub fn decompose_sum(g: &BimatrixGame) -> Option<SumParts> {
    let (n, m) = (g.rows(), g.cols());
    if n < 2 || m < 2 {
        return None;
    }
    let off_a = g.a().get(0, m - 1);
    let off_b = g.b().get(0, m - 1);
    let is_off = |i: usize, j: usize| g.a().get(i, j) == off_a && g.b().get(i, j) == off_b;

    let m1 = (0..m).rev().find(|&j| !is_off(0, j))? + 1;
    let n1 = (0..n).rev().find(|&i| !is_off(i, 0))? + 1;
    if m1 >= m || n1 >= n {
        return None;
    }
    for i in 0..n {
        for j in 0..m {
            let off_block = (i < n1) != (j < m1);
            if off_block != is_off(i, j) {
                return None;
            }
            if !off_block && (g.a().get(i, j) >= off_a || g.b().get(i, j) <= off_b) {
                return None;
            }
        }
    }
    let top: Vec<usize> = (0..n1).collect();
    let left: Vec<usize> = (0..m1).collect();
    let bottom: Vec<usize> = (n1..n).collect();
    let right: Vec<usize> = (m1..m).collect();
    let g1 = g.select(&top, &left);
    let g2 = g.select(&bottom, &right);

    if (off_a + off_b).is_zero() {
        if let Ok(parts) = SumParts::new(g1.clone(), g2.clone(), off_a.clone()) {
            return Some(parts);
        }
    }
    let two = Rational::from_integer(2.into());
    let mut bound = Rational::zero();
    for blk in [&g1, &g2] {
        for v in blk.a().entries() {
            bound = bound.max((off_a - v) / &two);
        }
        for v in blk.b().entries() {
            bound = bound.max((v - off_b) / &two);
        }
    }
    let k = bound.floor() + Rational::one();
    let shift_row = off_a - &k;
    let shift_col = off_b + &k;
    let translate = |blk: &BimatrixGame| {
        BimatrixGame::new(blk.a().map(|v| v - &shift_row), blk.b().map(|v| v - &shift_col)).expect("same shape")
    };
    let (first, second) = (translate(&g1), translate(&g2));
    check_sum_constant(&first, &second, &k).ok()?;
    Some(SumParts {
        first,
        second,
        k,
        shift_row,
        shift_col,
    })
}

/// Product distribution of two factor equilibria.
pub fn combine_product_equilibria(e1: &MixedProfile, e2: &MixedProfile) -> MixedProfile {
    let outer = |s: &MixedStrategy, t: &MixedStrategy| {
        let mut out = Vec::with_capacity(s.len() * t.len());
        for p in s.probs() {
            for q in t.probs() {
                out.push(p * q);
            }
        }
        MixedStrategy::from_parts(out)
    };
    MixedProfile::new(outer(&e1.x, &e2.x), outer(&e1.y, &e2.y))
}

/// Marginals of a product-game profile on each factor's strategies.
pub fn project_product_equilibrium(
    n1: usize,
    n2: usize,
    m1: usize,
    m2: usize,
    e: &MixedProfile,
) -> Result<(MixedProfile, MixedProfile), GameError> {
    if e.x.len() != n1 * n2 {
        return Err(GameError::shape("row strategy", n1 * n2, e.x.len()));
    }
    if e.y.len() != m1 * m2 {
        return Err(GameError::shape("column strategy", m1 * m2, e.y.len()));
    }
    let marginals = |s: &MixedStrategy, pairing: IndexPairing| {
        let mut first = vec![Rational::zero(); pairing.outer];
        let mut second = vec![Rational::zero(); pairing.inner];
        for (k, p) in s.probs().iter().enumerate() {
            let (a, b) = pairing.unpair(k);
            first[a] += p;
            second[b] += p;
        }
        (MixedStrategy::from_parts(first), MixedStrategy::from_parts(second))
    };
    let (x1, x2) = marginals(&e.x, IndexPairing::new(n1, n2));
    let (y1, y2) = marginals(&e.y, IndexPairing::new(m1, m2));
    Ok((MixedProfile::new(x1, y1), MixedProfile::new(x2, y2)))
}

/// Block weights `((K - c2)/(2K - c1 - c2), (K - c1)/(2K - c1 - c2))` for an
/// off-block payoff of `+K`; with `off = -K` the signs of `K` flip.
fn block_weights(off: &Rational, c1: &Rational, c2: &Rational) -> Result<(Rational, Rational), AlgebraError> {
    // Indifference between the blocks: w·c1 + (1-w)·off = w·off + (1-w)·c2.
    let den = off + off - c1 - c2;
    if den.is_zero() || (den.is_positive() != off.is_positive()) {
        return Err(AlgebraError::NonPositiveWeight(den));
    }
    Ok(((off - c2) / &den, (off - c1) / den))
}

/// Equilibrium of the sum game from equilibria of its components.
///
/// The row player's block weights come from the column player's component
/// payoffs and vice versa, chosen so that each player is indifferent between
/// the two blocks of the other. The column player meets `-K` off the
/// diagonal, so the row weights are `(K + Q2)/(2K + Q1 + Q2)` and
/// `(K + Q1)/(2K + Q1 + Q2)`; the column weights are `(K - P2)/(2K - P1 - P2)`
/// and `(K - P1)/(2K - P1 - P2)`.
pub fn combine_sum_equilibria(
    parts: &SumParts,
    e1: &MixedProfile,
    e2: &MixedProfile,
    payoffs1: &PayoffPair,
    payoffs2: &PayoffPair,
) -> Result<MixedProfile, AlgebraError> {
    e1.check_shape(&parts.first)?;
    e2.check_shape(&parts.second)?;
    let k = &parts.k;
    let (x_w1, x_w2) = block_weights(&-k.clone(), &payoffs1.col, &payoffs2.col)?;
    let (y_w1, y_w2) = block_weights(k, &payoffs1.row, &payoffs2.row)?;
    let concat = |s1: &MixedStrategy, w1: &Rational, s2: &MixedStrategy, w2: &Rational| {
        let probs = s1
            .probs()
            .iter()
            .map(|p| p * w1)
            .chain(s2.probs().iter().map(|p| p * w2))
            .collect();
        MixedStrategy::new(probs)
    };
    Ok(MixedProfile::new(
        concat(&e1.x, &x_w1, &e2.x, &x_w2)?,
        concat(&e1.y, &y_w1, &e2.y, &y_w2)?,
    ))
}

/// Renormalized diagonal blocks of a sum-game equilibrium split at `(n1, m1)`.
pub fn project_sum_equilibrium(
    n1: usize,
    m1: usize,
    e: &MixedProfile,
) -> Result<(MixedProfile, MixedProfile), AlgebraError> {
    let split = |s: &MixedStrategy, at: usize, player: Player, what| -> Result<_, AlgebraError> {
        if at == 0 || at >= s.len() {
            return Err(GameError::shape(what, format!("split point in 1..{}", s.len()), at).into());
        }
        let (head, tail) = s.probs().split_at(at);
        let mass: Rational = head.iter().sum();
        if !mass.is_positive() || mass >= Rational::one() {
            return Err(AlgebraError::BlockMass { player, mass });
        }
        let rest = Rational::one() - &mass;
        let first = head.iter().map(|p| p / &mass).collect();
        let second = tail.iter().map(|p| p / &rest).collect();
        Ok((MixedStrategy::from_parts(first), MixedStrategy::from_parts(second)))
    };
    let (x1, x2) = split(&e.x, n1, Player::Row, "row split")?;
    let (y1, y2) = split(&e.y, m1, Player::Col, "column split")?;
    Ok((MixedProfile::new(x1, y1), MixedProfile::new(x2, y2)))
}
