//! Hierarchical node weights and the TreeSim similarity between radical trees.
//!
//! Every node is reached with a budget, starting at 1 for the root. A leaf
//! keeps its whole budget. A node with `n` children keeps `budget / (n + 1)`
//! and hands the same share to each child, so a node's weight depends only on
//! the arities along its root path and the weights of a tree sum to 1.
//!
//! TreeSim walks two trees top-down along identical child-index paths and
//! sums the weights of nodes whose symbols agree; a mismatch prunes the whole
//! subtree below it. Matched nodes carry equal symbols and so equal arities,
//! which makes the score the same whichever tree is walked.
//!
//! Weights are computed with exact rationals; `f64` is only produced at the
//! API surface.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::radical_tree::RadicalTree;
use crate::table::DecompositionTable;

/// Per-node weights in preorder, as floats.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Similarity in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SimScore(f64);

impl SimScore {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<SimScore> for f64 {
    fn from(s: SimScore) -> f64 {
        s.0
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("weights are finite")
}

fn share(budget: &BigRational, children: usize) -> BigRational {
    budget / BigRational::from_integer(BigInt::from(children + 1))
}

/// Exact node weights in preorder.
pub fn tree_weights_exact(tree: &RadicalTree) -> Vec<BigRational> {
    fn walk(node: &RadicalTree, budget: BigRational, out: &mut Vec<BigRational>) {
        let n = node.children().len();
        if n == 0 {
            out.push(budget);
            return;
        }
        let part = share(&budget, n);
        out.push(part.clone());
        for child in node.children() {
            walk(child, part.clone(), out);
        }
    }
    let mut out = Vec::with_capacity(tree.rssl());
    walk(tree, BigRational::one(), &mut out);
    out
}

pub fn tree_weights(tree: &RadicalTree) -> WeightVector {
    WeightVector(tree_weights_exact(tree).iter().map(ratio_to_f64).collect())
}

/// Exact TreeSim: the summed weight (in `a`) of the top-down matching nodes.
pub fn tree_sim_exact(a: &RadicalTree, b: &RadicalTree) -> BigRational {
    fn walk(a: &RadicalTree, b: &RadicalTree, budget: BigRational) -> BigRational {
        // Kind is part of the comparison: a fallback leaf never matches a
        // structure node with the same text.
        if a.symbol() != b.symbol() {
            return BigRational::zero();
        }
        let n = a.children().len();
        if n == 0 {
            return budget;
        }
        let part = share(&budget, n);
        let mut total = part.clone();
        for (ca, cb) in a.children().iter().zip(b.children()) {
            total += walk(ca, cb, part.clone());
        }
        total
    }
    walk(a, b, BigRational::one())
}

pub fn tree_sim(a: &RadicalTree, b: &RadicalTree) -> SimScore {
    SimScore(ratio_to_f64(&tree_sim_exact(a, b)))
}

/// TreeSim between two characters' trees; untabulated characters are
/// compared as single-leaf trees of themselves.
pub fn char_sim(c1: char, c2: char, table: &DecompositionTable) -> SimScore {
    if c1 == c2 {
        return SimScore(1.0);
    }
    tree_sim(&table.lookup(c1), &table.lookup(c2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radical_tree::ArityTable;

    fn t(s: &str) -> RadicalTree {
        RadicalTree::parse(s, &ArityTable::default()).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn leaf_weight() {
        assert_eq!(tree_weights_exact(&t("A")), vec![q(1, 1)]);
    }

    #[test]
    fn binary_weights() {
        assert_eq!(tree_weights_exact(&t("⿰ A B")), vec![q(1, 3); 3]);
    }

    #[test]
    fn nested_weights() {
        assert_eq!(
            tree_weights_exact(&t("⿰ A ⿱ B C")),
            vec![q(1, 3), q(1, 3), q(1, 9), q(1, 9), q(1, 9)]
        );
    }

    #[test]
    fn ternary_weights() {
        assert_eq!(tree_weights_exact(&t("⿳ A B C")), vec![q(1, 4); 4]);
        let w = tree_weights(&t("⿳ A B C"));
        assert_eq!(w.as_slice(), &[0.25; 4]);
    }

    #[test]
    fn sim_examples() {
        assert_eq!(tree_sim_exact(&t("⿰ A B"), &t("⿰ A C")), q(2, 3));
        assert_eq!(tree_sim_exact(&t("⿰ A B"), &t("⿱ A B")), q(0, 1));
        assert_eq!(
            tree_sim_exact(&t("⿰ A ⿱ B C"), &t("⿰ A ⿱ B D")),
            q(8, 9)
        );
        let x = t("⿳ A ⿰ B C ⿱ D ⿲ E F G");
        assert_eq!(tree_sim_exact(&x, &x), q(1, 1));
    }

    #[test]
    fn subtree_replaced_by_leaf() {
        // The A leaf matches at 1/3; ⿱ vs D mismatches and prunes B, C.
        let a = t("⿰ A ⿱ B C");
        let b = t("⿰ A D");
        assert_eq!(tree_sim_exact(&a, &b), q(2, 3));
        assert_eq!(tree_sim_exact(&b, &a), q(2, 3));
    }

    #[test]
    fn fallback_leaf_never_matches_structure() {
        let leaf = RadicalTree::fallback_leaf('⿰');
        let node = t("⿰ A B");
        assert_eq!(tree_sim_exact(&leaf, &node), q(0, 1));
        assert_eq!(tree_sim_exact(&node, &leaf), q(0, 1));
    }

    #[test]
    fn untabulated_chars() {
        let table = DecompositionTable::new(ArityTable::default());
        assert_eq!(char_sim('x', 'x', &table).value(), 1.0);
        assert_eq!(char_sim('x', 'y', &table).value(), 0.0);
    }
}
