mod common;

use bimatrix_core::generator::{PlanKind, PlanKindTag, PlanNode};
use bimatrix_core::*;
use common::profile_is_equilibrium;

fn small_spec(seed: u64) -> GenSpec {
    GenSpec {
        seed,
        min_strategies: 12,
        max_strategies: 20,
        ..GenSpec::default()
    }
}

#[test]
fn free_kind_frequencies_follow_probabilities() {
    let mut counts = [0usize; 3];
    for seed in 0..1000 {
        let b = generate_blueprint(&GenSpec::with_seed(seed)).unwrap();
        b.root.walk(&mut |node: &PlanNode| {
            if node.free_choice {
                match node.tag().expect("free choices are internal nodes") {
                    PlanKindTag::Sum => counts[0] += 1,
                    PlanKindTag::Product => counts[1] += 1,
                    PlanKindTag::Elim => counts[2] += 1,
                }
            }
        });
    }
    let total: usize = counts.iter().sum();
    assert!(total > 1000, "only {total} free choices");
    for (count, p) in counts.iter().zip([0.4, 0.4, 0.2]) {
        let freq = *count as f64 / total as f64;
        assert!((freq - p).abs() <= 0.05, "frequencies {counts:?} of {total}");
    }
}

fn check_blueprint(node: &PlanNode, spec: &GenSpec) {
    match &node.kind {
        PlanKind::Leaf => assert!(node.rows * node.cols <= spec.leaf_size_threshold || node.budget < 2),
        PlanKind::Sum { left, right } => {
            assert_eq!((node.rows, node.cols), (left.rows + right.rows, left.cols + right.cols));
            assert_eq!((left.budget, right.budget), (node.budget - 1, node.budget - 1));
            check_blueprint(left, spec);
            check_blueprint(right, spec);
        }
        PlanKind::Product { left, right } => {
            assert_eq!((node.rows, node.cols), (left.rows * right.rows, left.cols * right.cols));
            assert_eq!(left.budget + right.budget, node.budget);
            assert!(left.budget.abs_diff(right.budget) <= 1);
            check_blueprint(left, spec);
            check_blueprint(right, spec);
        }
        PlanKind::Elim {
            extra_rows,
            extra_cols,
            child,
        } => {
            assert!(*extra_rows <= 3 && *extra_cols <= 3 && extra_rows + extra_cols >= 1);
            assert_eq!(child.budget, node.budget - 1);
            assert_eq!(
                (node.rows, node.cols),
                (child.rows + extra_rows, child.cols + extra_cols)
            );
            check_blueprint(child, spec);
        }
    }
}

#[test]
fn blueprints_respect_structure() {
    for seed in 0..50 {
        let spec = GenSpec::with_seed(seed);
        let b = generate_blueprint(&spec).unwrap();
        let root = &b.root;
        assert!((95..=105).contains(&root.rows) && (95..=105).contains(&root.cols));
        assert!(root.height() <= spec.max_height);
        assert_eq!(root.budget, 50);
        check_blueprint(root, &spec);
    }
}

#[test]
fn default_games_have_target_dimensions() {
    for seed in 0..5 {
        let (g, truth) = generate(&GenSpec::with_seed(seed)).unwrap();
        assert!((95..=105).contains(&g.rows()) && (95..=105).contains(&g.cols()));
        assert_eq!(truth.dims(), (g.rows(), g.cols()));
        for leaf in truth.leaves() {
            assert!(leaf.size() <= 6);
            assert!(leaf.a().entries().chain(leaf.b().entries()).all(|v| *v >= game::int(0)));
        }
    }
}

#[test]
fn generation_is_deterministic() {
    for seed in [0, 1, 42, u64::MAX] {
        let spec = small_spec(seed);
        let (g1, t1) = generate(&spec).unwrap();
        let (g2, t2) = generate(&spec).unwrap();
        assert_eq!(format::serialize_game(&g1), format::serialize_game(&g2));
        assert_eq!(t1, t2);
        assert_eq!(generate_blueprint(&spec).unwrap(), generate_blueprint(&spec).unwrap());
    }
    assert_ne!(generate(&small_spec(1)).unwrap().0, generate(&small_spec(2)).unwrap().0);
}

#[test]
fn generated_games_decompose_and_solve() {
    for seed in 0..40 {
        let spec = small_spec(seed);
        let (g, truth) = generate(&spec).unwrap();
        let tree = decompose_fully(&g);
        if !truth.is_leaf() {
            assert!(!tree.is_leaf(), "seed {seed}: {}", truth.summary());
        }
        assert!(
            lambda_of(&tree) <= spec.leaf_size_threshold,
            "seed {seed}: {}",
            tree.summary()
        );
        let report = solve(&g);
        assert!(profile_is_equilibrium(&g, &report.equilibrium), "seed {seed}");
    }
}

#[test]
fn realize_is_deterministic_per_seed() {
    let b = generate_blueprint(&small_spec(9)).unwrap();
    assert_eq!(realize(&b, 3).unwrap(), realize(&b, 3).unwrap());
}
