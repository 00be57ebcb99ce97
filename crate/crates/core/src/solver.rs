//! Divide-and-conquer equilibrium computation.
//!
//! At every node strictly dominated strategies are removed first, then the
//! reduced game is tested for a sum split, then for a product split. Games
//! that admit neither are leaves and go to the support-enumeration solver.
//! Leaf equilibria are combined back up the tree, so the cost is dominated
//! by the largest leaf rather than by the size of the whole game.

use std::fmt;
use std::time::Duration;

use web_time::Instant;

use crate::algebra::{
    combine_product_equilibria, combine_sum_equilibria, decompose_product, decompose_sum, ProductParts, SumParts,
};
use crate::dominance::{eliminate_iterated, lift_equilibrium, ReductionRecord};
use crate::game::{expected_payoffs, BimatrixGame, MixedProfile, Rational};
use crate::support::{solve_leaf_until, Deadline, Timeout};

/// How a game splits into smaller games.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionTree {
    Leaf(BimatrixGame),
    Sum {
        k: Rational,
        left: Box<DecompositionTree>,
        right: Box<DecompositionTree>,
    },
    Product {
        left: Box<DecompositionTree>,
        right: Box<DecompositionTree>,
    },
    Reduced {
        record: ReductionRecord,
        child: Box<DecompositionTree>,
    },
}

impl DecompositionTree {
    /// `(rows, cols)` of the game this node stands for.
    pub fn dims(&self) -> (usize, usize) {
        match self {
            DecompositionTree::Leaf(g) => (g.rows(), g.cols()),
            DecompositionTree::Sum { left, right, .. } => {
                let (a, b) = left.dims();
                let (c, d) = right.dims();
                (a + c, b + d)
            }
            DecompositionTree::Product { left, right } => {
                let (a, b) = left.dims();
                let (c, d) = right.dims();
                (a * c, b * d)
            }
            DecompositionTree::Reduced { record, .. } => (record.original_rows, record.original_cols),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            DecompositionTree::Leaf(_) => 1,
            DecompositionTree::Sum { left, right, .. } | DecompositionTree::Product { left, right } => {
                left.leaf_count() + right.leaf_count()
            }
            DecompositionTree::Reduced { child, .. } => child.leaf_count(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            DecompositionTree::Leaf(_) => 0,
            DecompositionTree::Sum { left, right, .. } | DecompositionTree::Product { left, right } => {
                1 + left.height().max(right.height())
            }
            DecompositionTree::Reduced { child, .. } => 1 + child.height(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, DecompositionTree::Leaf(_))
    }

    pub fn leaves(&self) -> Vec<&BimatrixGame> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a BimatrixGame>) {
        match self {
            DecompositionTree::Leaf(g) => out.push(g),
            DecompositionTree::Sum { left, right, .. } | DecompositionTree::Product { left, right } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
            DecompositionTree::Reduced { child, .. } => child.collect_leaves(out),
        }
    }

    /// One-line nested rendering, e.g. `sum(K=5)[leaf 1x1, leaf 1x1]`.
    pub fn summary(&self) -> String {
        match self {
            DecompositionTree::Leaf(g) => format!("leaf {}x{}", g.rows(), g.cols()),
            DecompositionTree::Sum { k, left, right } => {
                format!("sum(K={k})[{}, {}]", left.summary(), right.summary())
            }
            DecompositionTree::Product { left, right } => {
                format!("product[{}, {}]", left.summary(), right.summary())
            }
            DecompositionTree::Reduced { record, child } => {
                let (r, c) = record.reduced_dims();
                format!(
                    "reduced({}x{}->{r}x{c})[{}]",
                    record.original_rows,
                    record.original_cols,
                    child.summary()
                )
            }
        }
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        let (n, m) = self.dims();
        match self {
            DecompositionTree::Leaf(_) => writeln!(f, "{pad}leaf {n}x{m}"),
            DecompositionTree::Sum { k, left, right } => {
                writeln!(f, "{pad}sum {n}x{m} K={k}")?;
                left.write_indented(f, depth + 1)?;
                right.write_indented(f, depth + 1)
            }
            DecompositionTree::Product { left, right } => {
                writeln!(f, "{pad}product {n}x{m}")?;
                left.write_indented(f, depth + 1)?;
                right.write_indented(f, depth + 1)
            }
            DecompositionTree::Reduced { record, child } => {
                let one_based = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
                writeln!(
                    f,
                    "{pad}reduced {n}x{m} rows=[{}] cols=[{}]",
                    one_based(&record.kept_rows),
                    one_based(&record.kept_cols)
                )?;
                child.write_indented(f, depth + 1)
            }
        }
    }
}

/// Indented multi-line rendering, one node per line, indices 1-based.
impl fmt::Display for DecompositionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

/// Largest leaf size `n·m`: the parameter the running time is exponential in.
pub fn lambda_of(t: &DecompositionTree) -> usize {
    match t {
        DecompositionTree::Leaf(g) => g.size(),
        DecompositionTree::Sum { left, right, .. } | DecompositionTree::Product { left, right } => {
            lambda_of(left).max(lambda_of(right))
        }
        DecompositionTree::Reduced { child, .. } => lambda_of(child),
    }
}

enum Split {
    Sum(SumParts),
    Product(ProductParts),
    Irreducible,
}

fn split(g: &BimatrixGame) -> Split {
    if let Some(parts) = decompose_sum(g) {
        Split::Sum(parts)
    } else if let Some(parts) = decompose_product(g) {
        Split::Product(parts)
    } else {
        Split::Irreducible
    }
}

fn wrap_reduced(record: ReductionRecord, child: DecompositionTree) -> DecompositionTree {
    if record.is_identity() {
        child
    } else {
        DecompositionTree::Reduced {
            record,
            child: Box::new(child),
        }
    }
}

/// Splits `g` recursively until every leaf is irreducible.
pub fn decompose_fully(g: &BimatrixGame) -> DecompositionTree {
    let (reduced, record) = eliminate_iterated(g);
    let node = match split(&reduced) {
        Split::Sum(parts) => {
            let (g1, g2, k) = parts.into_parts();
            DecompositionTree::Sum {
                k,
                left: Box::new(decompose_fully(&g1)),
                right: Box::new(decompose_fully(&g2)),
            }
        }
        Split::Product(parts) => DecompositionTree::Product {
            left: Box::new(decompose_fully(&parts.first)),
            right: Box::new(decompose_fully(&parts.second)),
        },
        Split::Irreducible => DecompositionTree::Leaf(reduced),
    };
    wrap_reduced(record, node)
}

/// Result of [`solve`].
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub equilibrium: MixedProfile,
    pub tree: DecompositionTree,
    pub lambda: usize,
    pub leaf_count: usize,
    pub elapsed: Duration,
}

fn solve_node(g: &BimatrixGame, deadline: &Deadline) -> Result<(DecompositionTree, MixedProfile), Timeout> {
    deadline.check()?;
    let (reduced, record) = eliminate_iterated(g);
    let (node, eq) = match split(&reduced) {
        Split::Sum(parts) => {
            let (t1, e1) = solve_node(parts.first(), deadline)?;
            let (t2, e2) = solve_node(parts.second(), deadline)?;
            let p1 = expected_payoffs(parts.first(), &e1).expect("component equilibrium has component shape");
            let p2 = expected_payoffs(parts.second(), &e2).expect("component equilibrium has component shape");
            let eq =
                combine_sum_equilibria(&parts, &e1, &e2, &p1, &p2).expect("sum constant dominates component payoffs");
            let (_, _, k) = parts.into_parts();
            let node = DecompositionTree::Sum {
                k,
                left: Box::new(t1),
                right: Box::new(t2),
            };
            (node, eq)
        }
        Split::Product(parts) => {
            let (t1, e1) = solve_node(&parts.first, deadline)?;
            let (t2, e2) = solve_node(&parts.second, deadline)?;
            let eq = combine_product_equilibria(&e1, &e2);
            (
                DecompositionTree::Product {
                    left: Box::new(t1),
                    right: Box::new(t2),
                },
                eq,
            )
        }
        Split::Irreducible => {
            let eq = solve_leaf_until(&reduced, deadline)?;
            (DecompositionTree::Leaf(reduced), eq)
        }
    };
    let eq = if record.is_identity() {
        eq
    } else {
        lift_equilibrium(&record, &eq).expect("reduced equilibrium has reduced shape")
    };
    Ok((wrap_reduced(record, node), eq))
}

/// [`solve`] that gives up once `deadline` passes.
pub fn solve_until(g: &BimatrixGame, deadline: &Deadline) -> Result<SolveReport, Timeout> {
    let start = Instant::now();
    let (tree, equilibrium) = solve_node(g, deadline)?;
    Ok(SolveReport {
        equilibrium,
        lambda: lambda_of(&tree),
        leaf_count: tree.leaf_count(),
        tree,
        elapsed: start.elapsed(),
    })
}

/// Exact equilibrium of `g` by decomposition.
pub fn solve(g: &BimatrixGame) -> SolveReport {
    solve_until(g, &Deadline::none()).expect("no deadline set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{compose_product, compose_sum};
    use crate::game::{int, ratio, verify_equilibrium, MixedStrategy};

    fn leaf(n: usize, m: usize) -> DecompositionTree {
        DecompositionTree::Leaf(
            BimatrixGame::new(
                crate::game::Matrix::from_fn(n, m, |_, _| int(0)),
                crate::game::Matrix::from_fn(n, m, |_, _| int(0)),
            )
            .unwrap(),
        )
    }

    #[test]
    fn lambda_of_trees() {
        assert_eq!(lambda_of(&leaf(3, 4)), 12);
        let t = DecompositionTree::Sum {
            k: int(1),
            left: Box::new(leaf(2, 2)),
            right: Box::new(leaf(1, 3)),
        };
        assert_eq!(lambda_of(&t), 4);
        assert_eq!(t.dims(), (3, 5));
        assert_eq!(t.leaf_count(), 2);
    }

    #[test]
    fn pennies_is_a_leaf() {
        let g = BimatrixGame::matching_pennies();
        assert_eq!(decompose_fully(&g), DecompositionTree::Leaf(g.clone()));
        let r = solve(&g);
        assert!(r.tree.is_leaf());
        assert_eq!(r.lambda, 4);
    }

    #[test]
    fn prisoners_dilemma_is_reduced() {
        let g = BimatrixGame::from_integers(&[[3, 0], [5, 1]], &[[3, 5], [0, 1]]);
        match decompose_fully(&g) {
            DecompositionTree::Reduced { record, child } => {
                assert_eq!(record.kept_rows, vec![1]);
                assert_eq!(
                    *child,
                    DecompositionTree::Leaf(BimatrixGame::from_integers(&[[1]], &[[1]]))
                );
            }
            other => panic!("expected reduced node, got {other}"),
        }
        assert_eq!(solve(&g).equilibrium, MixedProfile::pure(2, 2, 1, 1));
    }

    #[test]
    fn nested_shape_is_recovered() {
        let ga = BimatrixGame::matching_pennies();
        let gb = BimatrixGame::from_integers(&[[0, 3], [2, 1]], &[[1, 0], [0, 2]]);
        let gc = BimatrixGame::from_integers(&[[2, 0], [0, 1]], &[[0, 1], [3, 0]]);
        let g = compose_sum(&compose_product(&ga, &gb), &gc, &int(10)).unwrap();
        let t = decompose_fully(&g);
        assert_eq!(t.summary(), "sum(K=10)[product[leaf 2x2, leaf 2x2], leaf 2x2]");
        let r = solve(&g);
        assert!(verify_equilibrium(&g, &r.equilibrium).unwrap());
        assert_eq!(r.lambda, 4);
        assert_eq!(r.leaf_count, 3);
    }

    #[test]
    fn sum_of_scalars_solution() {
        let g = BimatrixGame::from_integers(&[[1, 5], [5, 3]], &[[2, -5], [-5, 4]]);
        let r = solve(&g);
        assert_eq!(
            r.equilibrium.x,
            MixedStrategy::new(vec![ratio(9, 16), ratio(7, 16)]).unwrap()
        );
        assert_eq!(
            r.equilibrium.y,
            MixedStrategy::new(vec![ratio(1, 3), ratio(2, 3)]).unwrap()
        );
    }

    #[test]
    fn display_is_indented() {
        let g = BimatrixGame::from_integers(&[[1, 5], [5, 3]], &[[2, -5], [-5, 4]]);
        let text = decompose_fully(&g).to_string();
        assert_eq!(text, "sum 2x2 K=5\n  leaf 1x1\n  leaf 1x1\n");
    }
}
