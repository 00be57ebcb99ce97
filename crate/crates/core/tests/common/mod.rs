//! Independent oracles and random inputs shared by the integration tests.
//! Nothing here calls the library's own payoff, verification or linear
//! algebra code.
#![allow(dead_code)]

use bimatrix_core::game::{int, ratio};
use bimatrix_core::{BimatrixGame, Matrix, MixedProfile, MixedStrategy, Rational};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn game_from(a: Vec<Vec<Rational>>, b: Vec<Vec<Rational>>) -> BimatrixGame {
    BimatrixGame::new(Matrix::from_rows(a).unwrap(), Matrix::from_rows(b).unwrap()).unwrap()
}

fn rows_of(m: &Matrix) -> Vec<Vec<Rational>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

// ---- random inputs -------------------------------------------------------

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

pub fn game_upto(max_n: usize, max_m: usize) -> impl Strategy<Value = BimatrixGame> {
    (1..=max_n, 1..=max_m).prop_flat_map(|(n, m)| {
        let mat = || prop::collection::vec(prop::collection::vec(small_rational(), m), n);
        (mat(), mat()).prop_map(|(a, b)| game_from(a, b))
    })
}

pub fn strategy_of(len: usize) -> impl Strategy<Value = MixedStrategy> {
    prop::collection::vec(0u32..=5, len).prop_map(move |w| {
        let total: u32 = w.iter().sum();
        if total == 0 {
            return MixedStrategy::uniform(len);
        }
        MixedStrategy::new(w.iter().map(|&v| ratio(v as i64, total as i64)).collect()).unwrap()
    })
}

pub fn game_with_profile(max_n: usize, max_m: usize) -> impl Strategy<Value = (BimatrixGame, MixedProfile)> {
    game_upto(max_n, max_m).prop_flat_map(|g| {
        let (n, m) = (g.rows(), g.cols());
        (Just(g), strategy_of(n), strategy_of(m)).prop_map(|(g, x, y)| (g, MixedProfile::new(x, y)))
    })
}

/// Rational with numerator in `[-lim, lim]` and denominator in `[1, 7]`.
pub fn rand_rational(rng: &mut ChaCha8Rng, lim: i64) -> Rational {
    ratio(rng.gen_range(-lim..=lim), rng.gen_range(1..=7))
}

pub fn rand_game(rng: &mut ChaCha8Rng, n: usize, m: usize) -> BimatrixGame {
    let mut mat = || {
        (0..n)
            .map(|_| (0..m).map(|_| rand_rational(rng, 40)).collect())
            .collect()
    };
    let a = mat();
    let b = mat();
    game_from(a, b)
}

pub fn rand_game_upto(rng: &mut ChaCha8Rng, max: usize) -> BimatrixGame {
    let (n, m) = (rng.gen_range(1..=max), rng.gen_range(1..=max));
    rand_game(rng, n, m)
}

/// Random game up to `max`×`max` that no decomposition or elimination touches.
pub fn rand_irreducible(rng: &mut ChaCha8Rng, max: usize) -> BimatrixGame {
    loop {
        let g = rand_game_upto(rng, max);
        if bimatrix_core::decompose_fully(&g).is_leaf() {
            return g;
        }
    }
}

/// Builds a game that iterated strict dominance reduces to a single cell,
/// by repeatedly appending a row (or column) that is a strictly worse copy
/// of an existing one for its owner and arbitrary for the other player.
pub fn rand_dominance_solvable(rng: &mut ChaCha8Rng, steps: usize) -> BimatrixGame {
    let mut a = vec![vec![rand_rational(rng, 20)]];
    let mut b = vec![vec![rand_rational(rng, 20)]];
    for _ in 0..steps {
        let (n, m) = (a.len(), a[0].len());
        if rng.gen_bool(0.5) {
            let src = rng.gen_range(0..n);
            let ra: Vec<Rational> = a[src].iter().map(|v| v - ratio(rng.gen_range(1..=9), 3)).collect();
            let rb: Vec<Rational> = (0..m).map(|_| rand_rational(rng, 20)).collect();
            let at = rng.gen_range(0..=n);
            a.insert(at, ra);
            b.insert(at, rb);
        } else {
            let src = rng.gen_range(0..m);
            let at = rng.gen_range(0..=m);
            for i in 0..n {
                let vb = &b[i][src] - ratio(rng.gen_range(1..=9), 3);
                b[i].insert(at, vb);
                let va = rand_rational(rng, 20);
                a[i].insert(at, va);
            }
        }
    }
    game_from(a, b)
}

// ---- payoff and verification oracles ------------------------------------

/// `(xᵀAy, xᵀBy)` by a plain double loop.
pub fn naive_payoffs(g: &BimatrixGame, x: &[Rational], y: &[Rational]) -> (Rational, Rational) {
    let (a, b) = (rows_of(g.a()), rows_of(g.b()));
    let mut u = (Rational::zero(), Rational::zero());
    for i in 0..x.len() {
        for j in 0..y.len() {
            let w = &x[i] * &y[j];
            u.0 += &w * &a[i][j];
            u.1 += &w * &b[i][j];
        }
    }
    u
}

fn unit(len: usize, k: usize) -> Vec<Rational> {
    (0..len)
        .map(|i| if i == k { Rational::one() } else { Rational::zero() })
        .collect()
}

/// True iff no pure deviation strictly improves either player.
pub fn no_profitable_deviation(g: &BimatrixGame, x: &[Rational], y: &[Rational]) -> bool {
    let (u1, u2) = naive_payoffs(g, x, y);
    (0..g.rows()).all(|i| naive_payoffs(g, &unit(g.rows(), i), y).0 <= u1)
        && (0..g.cols()).all(|j| naive_payoffs(g, x, &unit(g.cols(), j)).1 <= u2)
}

pub fn is_distribution(p: &[Rational]) -> bool {
    p.iter().all(|v| !v.is_negative()) && p.iter().sum::<Rational>() == Rational::one()
}

pub fn profile_is_equilibrium(g: &BimatrixGame, p: &MixedProfile) -> bool {
    is_distribution(p.x.probs()) && is_distribution(p.y.probs()) && no_profitable_deviation(g, p.x.probs(), p.y.probs())
}

// ---- brute-force support enumeration ------------------------------------

/// Unique solution of a square system by Gaussian elimination, else `None`.
#[allow(clippy::needless_range_loop)]
fn gauss(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        rhs.swap(c, p);
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let d = &f * &m[c][k];
                    m[r][k] -= d;
                }
                let d = &f * &rhs[c];
                rhs[r] -= d;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Mix over `support` making the opponent indifferent on `against`, where
/// `pay(i, j)` is the opponent's payoff for own strategy `i`, opponent `j`.
fn indifferent_mix(
    len: usize,
    support: &[usize],
    against: &[usize],
    pay: impl Fn(usize, usize) -> Rational,
) -> Option<Vec<Rational>> {
    let k = support.len();
    // unknowns: weights on support, then the common value
    let mut m = Vec::new();
    let mut rhs = Vec::new();
    for &j in against {
        let mut row: Vec<Rational> = support.iter().map(|&i| pay(i, j)).collect();
        row.push(-int(1));
        m.push(row);
        rhs.push(Rational::zero());
    }
    let mut last = vec![Rational::one(); k];
    last.push(Rational::zero());
    m.push(last);
    rhs.push(Rational::one());
    let sol = gauss(m, rhs)?;
    let mut out = vec![Rational::zero(); len];
    for (w, &i) in sol.iter().zip(support) {
        out[i] = w.clone();
    }
    Some(out)
}

/// First equilibrium over equal-size support pairs, found by the oracle's
/// own elimination; `None` if every such system is singular or infeasible.
pub fn brute_force_equilibrium(g: &BimatrixGame) -> Option<MixedProfile> {
    let (a, b) = (rows_of(g.a()), rows_of(g.b()));
    let (n, m) = (g.rows(), g.cols());
    for k in 1..=n.min(m) {
        for s in subsets(n, k) {
            for t in subsets(m, k) {
                let Some(y) = indifferent_mix(m, &t, &s, |j, i| a[i][j].clone()) else {
                    continue;
                };
                let Some(x) = indifferent_mix(n, &s, &t, |i, j| b[i][j].clone()) else {
                    continue;
                };
                if is_distribution(&x) && is_distribution(&y) && no_profitable_deviation(g, &x, &y) {
                    return Some(MixedProfile::new(
                        MixedStrategy::new(x).unwrap(),
                        MixedStrategy::new(y).unwrap(),
                    ));
                }
            }
        }
    }
    None
}
