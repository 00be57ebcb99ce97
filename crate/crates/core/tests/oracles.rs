mod common;

use bimatrix_core::game::{int, ratio};
use bimatrix_core::*;
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pd() -> BimatrixGame {
    BimatrixGame::from_integers(&[[3, 0], [5, 1]], &[[3, 5], [0, 1]])
}

#[test]
fn sum_example_matches_oracle() {
    let g = compose_sum(
        &BimatrixGame::from_integers(&[[1]], &[[2]]),
        &BimatrixGame::from_integers(&[[3]], &[[4]]),
        &int(5),
    )
    .unwrap();
    // the 2x2 game has no pure equilibrium, so the mixed one is unique
    let oracle = brute_force_equilibrium(&g).unwrap();
    assert_eq!(oracle.x.probs(), [ratio(9, 16), ratio(7, 16)]);
    assert_eq!(oracle.y.probs(), [ratio(1, 3), ratio(2, 3)]);
    assert_eq!(solve(&g).equilibrium, oracle);
}

#[test]
fn pennies_against_oracle() {
    let g = BimatrixGame::matching_pennies();
    assert_eq!(solve_leaf(&g), brute_force_equilibrium(&g).unwrap());
    assert_eq!(
        solve_leaf(&g),
        MixedProfile::new(MixedStrategy::uniform(2), MixedStrategy::uniform(2))
    );
    let x = MixedStrategy::pure(2, 0);
    assert_eq!(pure_best_response_value(&g, Player::Col, &x).unwrap(), int(1));
}

#[test]
fn pennies_squared_combines() {
    let mp = BimatrixGame::matching_pennies();
    let g = compose_product(&mp, &mp);
    let e = combine_product_equilibria(&solve_leaf(&mp), &solve_leaf(&mp));
    assert_eq!(e.x.probs(), vec![ratio(1, 4); 4]);
    assert!(profile_is_equilibrium(&g, &e));
}

#[test]
fn prisoners_dilemma_reduces_to_a_cell() {
    let report = solve(&pd());
    assert_eq!(report.tree.summary(), "reduced(2x2->1x1)[leaf 1x1]");
    assert_eq!(report.equilibrium, MixedProfile::pure(2, 2, 1, 1));
    assert_eq!(solve_leaf(&pd()), brute_force_equilibrium(&pd()).unwrap());
}

#[test]
fn nested_composition_tree_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 20 {
        let (ga, gb, gc) = (
            rand_irreducible(&mut rng, 3),
            rand_irreducible(&mut rng, 3),
            rand_irreducible(&mut rng, 3),
        );
        if ga.size() == 1 || gb.size() == 1 {
            continue;
        }
        let p = compose_product(&ga, &gb);
        let k = p.max_abs().max(gc.max_abs()) + int(1);
        let g = compose_sum(&p, &gc, &k).unwrap();
        match decompose_fully(&g) {
            DecompositionTree::Sum { left, right, .. } => {
                assert!(matches!(*left, DecompositionTree::Product { .. }), "{}", left.summary());
                assert!(right.is_leaf());
            }
            other => panic!("expected a sum, got {}", other.summary()),
        }
        checked += 1;
    }
}

#[test]
fn irreducible_games_are_leaves() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let g = rand_irreducible(&mut rng, 4);
        let report = solve(&g);
        assert_eq!(report.lambda, g.size());
        assert_eq!(report.leaf_count, 1);
        let oracle = brute_force_equilibrium(&g).expect("generic game");
        assert!(profile_is_equilibrium(&g, &oracle));
        assert!(profile_is_equilibrium(&g, &report.equilibrium));
    }
}

#[test]
fn lambda_examples() {
    let g34 = BimatrixGame::new(
        Matrix::from_fn(3, 4, |i, j| int((i * j) as i64)),
        Matrix::from_fn(3, 4, |_, _| int(0)),
    )
    .unwrap();
    assert_eq!(lambda_of(&DecompositionTree::Leaf(g34)), 12);
    let t = DecompositionTree::Sum {
        k: int(9),
        left: Box::new(DecompositionTree::Leaf(BimatrixGame::matching_pennies())),
        right: Box::new(DecompositionTree::Leaf(BimatrixGame::from_integers(
            &[[1, 2, 3]],
            &[[1, 2, 3]],
        ))),
    };
    assert_eq!(lambda_of(&t), 4);
}
