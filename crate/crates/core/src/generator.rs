//! Random games with a known sum/product/elimination structure.
//!
//! Generation is two-staged. [`generate_blueprint`] samples the shape of the
//! decomposition tree top-down from target dimensions, and [`realize`] fills
//! it with payoffs bottom-up. Every node carries a payoff magnitude budget
//! `M`: a sum gives its children `M - 1` and uses `K = M`, a product splits
//! `M` between its factors, an elimination step gives its child `M - 1` and
//! floors the appended dominated strategies at `-M`, and leaves draw integers
//! from `[0, M]`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{compose_product, compose_sum};
use crate::dominance::ReductionRecord;
use crate::game::{int, BimatrixGame, Matrix, Rational};
use crate::solver::DecompositionTree;

/// Upper bound on blueprint sampling attempts before giving up.
pub const MAX_ATTEMPTS: u64 = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("no blueprint satisfying {constraint} after {attempts} attempts")]
    RetriesExhausted { constraint: String, attempts: u64 },
    #[error("payoff budget exhausted at a {rows}x{cols} leaf")]
    BudgetUnderflow { rows: usize, cols: usize },
    #[error("realization broke an invariant: {0}")]
    Invariant(String),
}

/// Generator parameters. Defaults reproduce the reference benchmark setup.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub seed: u64,
    pub p_sum: f64,
    pub p_product: f64,
    pub p_elim: f64,
    pub max_height: usize,
    /// Nodes with `rows·cols` at most this become leaves.
    pub leaf_size_threshold: usize,
    pub min_strategies: usize,
    pub max_strategies: usize,
    pub payoff_budget: u32,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            seed: 0,
            p_sum: 0.4,
            p_product: 0.4,
            p_elim: 0.2,
            max_height: 80,
            leaf_size_threshold: 6,
            min_strategies: 95,
            max_strategies: 105,
            payoff_budget: 50,
        }
    }
}

impl GenSpec {
    pub fn with_seed(seed: u64) -> Self {
        GenSpec {
            seed,
            ..GenSpec::default()
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let probs = [self.p_sum, self.p_product, self.p_elim];
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(GenError::InvalidSpec(format!(
                "probabilities {probs:?} must lie in [0, 1]"
            )));
        }
        if (probs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(GenError::InvalidSpec(format!("probabilities {probs:?} must sum to 1")));
        }
        if self.min_strategies == 0 || self.min_strategies > self.max_strategies {
            return Err(GenError::InvalidSpec(format!(
                "strategy range {}..={} is empty",
                self.min_strategies, self.max_strategies
            )));
        }
        if self.leaf_size_threshold == 0 || self.max_height == 0 {
            return Err(GenError::InvalidSpec(
                "leaf threshold and max height must be positive".into(),
            ));
        }
        if self.payoff_budget == 0 {
            return Err(GenError::InvalidSpec("payoff budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlanKindTag {
    Sum,
    Product,
    Elim,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanKind {
    Leaf,
    Sum {
        left: Box<PlanNode>,
        right: Box<PlanNode>,
    },
    Product {
        left: Box<PlanNode>,
        right: Box<PlanNode>,
    },
    Elim {
        extra_rows: usize,
        extra_cols: usize,
        child: Box<PlanNode>,
    },
}

/// One node of a blueprint: the game dimensions it will produce and the
/// payoff magnitude budget it must respect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanNode {
    pub rows: usize,
    pub cols: usize,
    pub budget: u32,
    /// `true` when the kind was drawn from the configured probabilities with
    /// all three kinds available; `false` for leaves and for draws restricted
    /// by dimensions or budget.
    pub free_choice: bool,
    pub kind: PlanKind,
}

impl PlanNode {
    pub fn height(&self) -> usize {
        match &self.kind {
            PlanKind::Leaf => 0,
            PlanKind::Sum { left, right } | PlanKind::Product { left, right } => 1 + left.height().max(right.height()),
            PlanKind::Elim { child, .. } => 1 + child.height(),
        }
    }

    pub fn tag(&self) -> Option<PlanKindTag> {
        match self.kind {
            PlanKind::Leaf => None,
            PlanKind::Sum { .. } => Some(PlanKindTag::Sum),
            PlanKind::Product { .. } => Some(PlanKindTag::Product),
            PlanKind::Elim { .. } => Some(PlanKindTag::Elim),
        }
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a PlanNode)) {
        visit(self);
        match &self.kind {
            PlanKind::Leaf => {}
            PlanKind::Sum { left, right } | PlanKind::Product { left, right } => {
                left.walk(visit);
                right.walk(visit);
            }
            PlanKind::Elim { child, .. } => child.walk(visit),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenBlueprint {
    pub root: PlanNode,
    /// Which sampling attempt produced this blueprint (0-based).
    pub attempt: u64,
}

/// SplitMix64 step, used to derive independent stream seeds.
fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Planner<'a> {
    spec: &'a GenSpec,
    rng: ChaCha8Rng,
}

impl Planner<'_> {
    fn product_shapes(rows: usize, cols: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for n1 in (1..=rows).filter(|d| rows.is_multiple_of(*d)) {
            for m1 in (1..=cols).filter(|d| cols.is_multiple_of(*d)) {
                let (n2, m2) = (rows / n1, cols / m1);
                if (n1, m1) != (1, 1) && (n2, m2) != (1, 1) {
                    out.push((n1, m1));
                }
            }
        }
        out
    }

    fn choose_kind(&mut self, available: [bool; 3]) -> (PlanKindTag, bool) {
        let weights = [self.spec.p_sum, self.spec.p_product, self.spec.p_elim];
        let tags = [PlanKindTag::Sum, PlanKindTag::Product, PlanKindTag::Elim];
        let free = available.iter().all(|&a| a);
        let total: f64 = (0..3).filter(|&i| available[i]).map(|i| weights[i]).sum();
        let draw: f64 = self.rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut last = None;
        for i in (0..3).filter(|&i| available[i]) {
            acc += weights[i];
            last = Some(i);
            if draw < acc {
                return (tags[i], free);
            }
        }
        (tags[last.expect("at least one kind available")], free)
    }

    fn plan(&mut self, rows: usize, cols: usize, budget: u32, height: usize) -> Option<PlanNode> {
        let leaf = |free_choice| PlanNode {
            rows,
            cols,
            budget,
            free_choice,
            kind: PlanKind::Leaf,
        };
        if rows * cols <= self.spec.leaf_size_threshold {
            return Some(leaf(false));
        }
        if height >= self.spec.max_height || budget < 2 {
            return None;
        }
        let shapes = Self::product_shapes(rows, cols);
        let weights = [self.spec.p_sum, self.spec.p_product, self.spec.p_elim];
        let available = [
            rows >= 2 && cols >= 2 && weights[0] > 0.0,
            !shapes.is_empty() && weights[1] > 0.0,
            weights[2] > 0.0,
        ];
        if !available.iter().any(|&a| a) {
            return None;
        }
        let (tag, free_choice) = self.choose_kind(available);
        let kind = match tag {
            PlanKindTag::Sum => {
                let n1 = self.rng.gen_range(1..rows);
                let m1 = self.rng.gen_range(1..cols);
                let left = self.plan(n1, m1, budget - 1, height + 1)?;
                let right = self.plan(rows - n1, cols - m1, budget - 1, height + 1)?;
                PlanKind::Sum {
                    left: Box::new(left),
                    right: Box::new(right),
                }
            }
            PlanKindTag::Product => {
                let (n1, m1) = shapes[self.rng.gen_range(0..shapes.len())];
                let b1 = budget / 2;
                let left = self.plan(n1, m1, b1, height + 1)?;
                let right = self.plan(rows / n1, cols / m1, budget - b1, height + 1)?;
                PlanKind::Product {
                    left: Box::new(left),
                    right: Box::new(right),
                }
            }
            PlanKindTag::Elim => {
                let extra_rows = if rows > 1 {
                    self.rng.gen_range(1..=3usize.min(rows - 1))
                } else {
                    0
                };
                let extra_cols = if cols > 1 {
                    self.rng.gen_range(1..=3usize.min(cols - 1))
                } else {
                    0
                };
                let child = self.plan(rows - extra_rows, cols - extra_cols, budget - 1, height + 1)?;
                PlanKind::Elim {
                    extra_rows,
                    extra_cols,
                    child: Box::new(child),
                }
            }
        };
        Some(PlanNode {
            rows,
            cols,
            budget,
            free_choice,
            kind,
        })
    }
}

/// Samples a decomposition blueprint. Deterministic in `spec.seed`.
pub fn generate_blueprint(spec: &GenSpec) -> Result<GenBlueprint, GenError> {
    spec.validate()?;
    for attempt in 0..MAX_ATTEMPTS {
        let mut planner = Planner {
            spec,
            rng: ChaCha8Rng::seed_from_u64(mix(spec.seed, attempt)),
        };
        let rows = planner.rng.gen_range(spec.min_strategies..=spec.max_strategies);
        let cols = planner.rng.gen_range(spec.min_strategies..=spec.max_strategies);
        if let Some(root) = planner.plan(rows, cols, spec.payoff_budget, 0) {
            return Ok(GenBlueprint { root, attempt });
        }
    }
    Err(GenError::RetriesExhausted {
        constraint: format!(
            "{}..={} strategies per player with leaves of size <= {}, height <= {} and payoff budget {}",
            spec.min_strategies, spec.max_strategies, spec.leaf_size_threshold, spec.max_height, spec.payoff_budget
        ),
        attempts: MAX_ATTEMPTS,
    })
}

struct Realizer {
    rng: ChaCha8Rng,
}

impl Realizer {
    fn leaf(&mut self, rows: usize, cols: usize, budget: u32) -> BimatrixGame {
        let bound = i64::from(budget);
        let mut draw = |_, _| int(self.rng.gen_range(0..=bound));
        let a = Matrix::from_fn(rows, cols, &mut draw);
        let b = Matrix::from_fn(rows, cols, &mut draw);
        BimatrixGame::new(a, b).expect("same shape")
    }

    /// Appends strictly dominated copies of existing rows and columns.
    fn augment(
        &mut self,
        g: &BimatrixGame,
        extra_rows: usize,
        extra_cols: usize,
        budget: u32,
    ) -> Result<BimatrixGame, GenError> {
        let (n, m) = (g.rows(), g.cols());
        let floor = int(-i64::from(budget));
        let mut a: Vec<Vec<Rational>> = (0..n).map(|i| g.a().row(i).to_vec()).collect();
        let mut b: Vec<Vec<Rational>> = (0..n).map(|i| g.b().row(i).to_vec()).collect();
        for _ in 0..extra_rows {
            let src = self.rng.gen_range(0..n);
            let row: Vec<Rational> = a[src]
                .iter()
                .map(|v| (v - int(self.rng.gen_range(1..=3))).max(floor.clone()))
                .collect();
            if row.iter().zip(&a[src]).any(|(new, old)| new >= old) {
                return Err(GenError::Invariant(format!(
                    "appended row copy of row {} is not strictly dominated",
                    src + 1
                )));
            }
            a.push(row);
            b.push(b[src].clone());
        }
        for _ in 0..extra_cols {
            let src = self.rng.gen_range(0..m);
            for i in 0..a.len() {
                let old = b[i][src].clone();
                let new = (&old - int(self.rng.gen_range(1..=3))).max(floor.clone());
                if new >= old {
                    return Err(GenError::Invariant(format!(
                        "appended column copy of column {} is not strictly dominated",
                        src + 1
                    )));
                }
                b[i].push(new);
                let copied = a[i][src].clone();
                a[i].push(copied);
            }
        }
        Ok(BimatrixGame::new(
            Matrix::from_rows(a).expect("rectangular"),
            Matrix::from_rows(b).expect("rectangular"),
        )
        .expect("same shape"))
    }

    fn realize(&mut self, node: &PlanNode) -> Result<(BimatrixGame, DecompositionTree), GenError> {
        let out = match &node.kind {
            PlanKind::Leaf => {
                if node.budget < 1 {
                    return Err(GenError::BudgetUnderflow {
                        rows: node.rows,
                        cols: node.cols,
                    });
                }
                let g = self.leaf(node.rows, node.cols, node.budget);
                (g.clone(), DecompositionTree::Leaf(g))
            }
            PlanKind::Sum { left, right } => {
                let (g1, t1) = self.realize(left)?;
                let (g2, t2) = self.realize(right)?;
                let k = int(i64::from(node.budget));
                let g = compose_sum(&g1, &g2, &k).map_err(|e| GenError::Invariant(e.to_string()))?;
                (
                    g,
                    DecompositionTree::Sum {
                        k,
                        left: Box::new(t1),
                        right: Box::new(t2),
                    },
                )
            }
            PlanKind::Product { left, right } => {
                let (g1, t1) = self.realize(left)?;
                let (g2, t2) = self.realize(right)?;
                (
                    compose_product(&g1, &g2),
                    DecompositionTree::Product {
                        left: Box::new(t1),
                        right: Box::new(t2),
                    },
                )
            }
            PlanKind::Elim {
                extra_rows,
                extra_cols,
                child,
            } => {
                let (g, t) = self.realize(child)?;
                let record = ReductionRecord {
                    kept_rows: (0..g.rows()).collect(),
                    kept_cols: (0..g.cols()).collect(),
                    original_rows: g.rows() + extra_rows,
                    original_cols: g.cols() + extra_cols,
                };
                let augmented = self.augment(&g, *extra_rows, *extra_cols, node.budget)?;
                (
                    augmented,
                    DecompositionTree::Reduced {
                        record,
                        child: Box::new(t),
                    },
                )
            }
        };
        debug_assert_eq!((out.0.rows(), out.0.cols()), (node.rows, node.cols));
        if out.0.max_abs() > int(i64::from(node.budget)) {
            return Err(GenError::Invariant(format!(
                "{}x{} node exceeds its payoff budget {}",
                node.rows, node.cols, node.budget
            )));
        }
        Ok(out)
    }
}

/// Fills a blueprint with payoffs. Returns the game and its ground-truth tree.
pub fn realize(b: &GenBlueprint, seed: u64) -> Result<(BimatrixGame, DecompositionTree), GenError> {
    Realizer {
        rng: ChaCha8Rng::seed_from_u64(seed),
    }
    .realize(&b.root)
}

/// Blueprint then realization, both derived from `spec.seed`.
pub fn generate(spec: &GenSpec) -> Result<(BimatrixGame, DecompositionTree), GenError> {
    let blueprint = generate_blueprint(spec)?;
    realize(&blueprint, mix(spec.seed, u64::MAX))
}
