//! Nash equilibria of bimatrix games by decomposition.
//!
//! Games that are sums or products of smaller games are split recursively,
//! strictly dominated strategies are removed at every step, and only the
//! irreducible pieces are solved directly (by exact support enumeration).
//! Equilibria of the pieces are then combined back into an equilibrium of
//! the whole game. All arithmetic is exact.
//!
//! ```
//! use bimatrix_core::{algebra::compose_sum, game::{int, verify_equilibrium, BimatrixGame}, solver::solve};
//!
//! let g1 = BimatrixGame::from_integers(&[[1]], &[[2]]);
//! let g2 = BimatrixGame::from_integers(&[[3]], &[[4]]);
//! let g = compose_sum(&g1, &g2, &int(5)).unwrap();
//! let report = solve(&g);
//! assert!(verify_equilibrium(&g, &report.equilibrium).unwrap());
//! assert_eq!(report.tree.summary(), "sum(K=5)[leaf 1x1, leaf 1x1]");
//! ```

pub mod algebra;
pub mod bench;
pub mod dominance;
pub mod format;
pub mod game;
pub mod generator;
pub mod linalg;
pub mod solver;
pub mod support;

pub use algebra::{
    combine_product_equilibria, combine_sum_equilibria, compose_product, compose_sum, decompose_product, decompose_sum,
    project_product_equilibrium, project_sum_equilibrium, AlgebraError, IndexPairing, ProductParts, SumParts,
};
pub use dominance::{eliminate_iterated, find_strictly_dominated, lift_equilibrium, Domination, ReductionRecord};
pub use game::{
    expected_payoffs, pure_best_response_value, verify_equilibrium, BimatrixGame, GameError, Matrix, MixedProfile,
    MixedStrategy, PayoffPair, Player, Rational,
};
pub use generator::{generate, generate_blueprint, realize, GenBlueprint, GenError, GenSpec};
pub use solver::{decompose_fully, lambda_of, solve, solve_until, DecompositionTree, SolveReport};
pub use support::{solve_leaf, solve_leaf_until, Deadline, Timeout};
