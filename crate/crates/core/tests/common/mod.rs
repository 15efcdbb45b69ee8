//! Shared fixtures for the integration suites: random radical trees and
//! oracles that are deliberately independent of the library's code paths.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use radtree::{ArityTable, RadicalTree};
use rand::rngs::StdRng;
use rand::Rng;

pub const BINARY: [&str; 2] = ["⿰", "⿱"];
pub const TERNARY: [&str; 2] = ["⿲", "⿳"];
pub const RADICALS: [&str; 4] = ["A", "B", "C", "D"];

pub fn arities() -> ArityTable {
    ArityTable::default()
}

pub fn leaf(s: &str) -> RadicalTree {
    RadicalTree::leaf(s, &arities()).unwrap()
}

pub fn node(s: &str, children: Vec<RadicalTree>) -> RadicalTree {
    RadicalTree::node(s, children, &arities()).unwrap()
}

pub fn parse(s: &str) -> RadicalTree {
    RadicalTree::parse(s, &arities()).unwrap()
}

/// Random tree with mixed arity 2/3 and depth at most `max_depth` (a leaf has
/// depth 1).
pub fn random_tree(rng: &mut StdRng, max_depth: usize) -> RadicalTree {
    let leaf_p = if max_depth <= 1 { 1.0 } else { 0.35 };
    if rng.gen_bool(leaf_p) {
        return leaf(RADICALS[rng.gen_range(0..RADICALS.len())]);
    }
    let (sym, n) = if rng.gen_bool(0.5) {
        (BINARY[rng.gen_range(0..2)], 2)
    } else {
        (TERNARY[rng.gen_range(0..2)], 3)
    };
    let children = (0..n).map(|_| random_tree(rng, max_depth - 1)).collect();
    node(sym, children)
}

/// Random tree of exactly depth `depth`.
pub fn random_tree_exact_depth(rng: &mut StdRng, depth: usize) -> RadicalTree {
    if depth == 1 {
        return leaf(RADICALS[rng.gen_range(0..RADICALS.len())]);
    }
    let (sym, n) = if rng.gen_bool(0.5) {
        (BINARY[rng.gen_range(0..2)], 2)
    } else {
        (TERNARY[rng.gen_range(0..2)], 3)
    };
    let deep = rng.gen_range(0..n);
    let children = (0..n)
        .map(|i| {
            if i == deep {
                random_tree_exact_depth(rng, depth - 1)
            } else {
                random_tree(rng, depth - 1)
            }
        })
        .collect();
    node(sym, children)
}

/// Perturbs a tree: each node independently keeps its label, or with small
/// probability is relabelled within its kind or swapped for a fresh subtree.
pub fn mutate(rng: &mut StdRng, t: &RadicalTree, max_depth: usize) -> RadicalTree {
    let roll: f64 = rng.gen();
    if roll < 0.1 {
        return random_tree(rng, max_depth);
    }
    if t.is_leaf() {
        if roll < 0.3 {
            return leaf(RADICALS[rng.gen_range(0..RADICALS.len())]);
        }
        return t.clone();
    }
    let n = t.children().len();
    let sym = if roll < 0.2 {
        let pool = if n == 2 { BINARY } else { TERNARY };
        pool[rng.gen_range(0..2)]
    } else {
        t.symbol().text()
    };
    let children = t
        .children()
        .iter()
        .map(|c| mutate(rng, c, max_depth.saturating_sub(1).max(1)))
        .collect();
    node(sym, children)
}

pub fn tree_strategy() -> impl Strategy<Value = RadicalTree> {
    let leaf_s = prop::sample::select(RADICALS.to_vec()).prop_map(leaf);
    leaf_s.prop_recursive(5, 64, 3, |inner| {
        prop_oneof![
            (
                prop::sample::select(BINARY.to_vec()),
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(s, a, b)| node(s, vec![a, b])),
            (
                prop::sample::select(TERNARY.to_vec()),
                inner.clone(),
                inner.clone(),
                inner
            )
                .prop_map(|(s, a, b, c)| node(s, vec![a, b, c])),
        ]
    })
}

pub type Path = Vec<usize>;

/// Every node keyed by its child-index path: (symbol, kind is structure, child count).
pub fn paths(t: &RadicalTree) -> BTreeMap<Path, (String, bool, usize)> {
    fn walk(t: &RadicalTree, p: &mut Path, out: &mut BTreeMap<Path, (String, bool, usize)>) {
        out.insert(
            p.clone(),
            (
                t.symbol().text().to_owned(),
                t.symbol().is_structure(),
                t.children().len(),
            ),
        );
        for (i, c) in t.children().iter().enumerate() {
            p.push(i);
            walk(c, p, out);
            p.pop();
        }
    }
    let mut out = BTreeMap::new();
    walk(t, &mut Vec::new(), &mut out);
    out
}

/// Node weight from the closed form: the product of `1/(n+1)` over every
/// proper ancestor, times `1/(n+1)` for the node itself unless it is a leaf.
pub fn closed_form_weights(t: &RadicalTree) -> BTreeMap<Path, BigRational> {
    let nodes = paths(t);
    nodes
        .iter()
        .map(|(p, &(_, _, n))| {
            let mut w = BigRational::one();
            for k in 0..p.len() {
                let anc = &nodes[&p[..k].to_vec()];
                w /= BigRational::from_integer((anc.2 as i64 + 1).into());
            }
            if n > 0 {
                w /= BigRational::from_integer((n as i64 + 1).into());
            }
            (p.clone(), w)
        })
        .collect()
}

/// TreeSim by path enumeration: intersect the path sets and keep a path when
/// it and every prefix carry equal labels in both trees.
pub fn oracle_tree_sim(a: &RadicalTree, b: &RadicalTree) -> BigRational {
    let pa = paths(a);
    let pb = paths(b);
    let wa = closed_form_weights(a);
    let mut total = BigRational::zero();
    for (p, _) in pa.iter().filter(|(p, _)| pb.contains_key(*p)) {
        let all_match = (0..=p.len()).all(|k| {
            let q = p[..k].to_vec();
            match (pa.get(&q), pb.get(&q)) {
                (Some(x), Some(y)) => x.0 == y.0 && x.1 == y.1,
                _ => false,
            }
        });
        if all_match {
            total += &wa[p];
        }
    }
    total
}

/// Edit distance from its recursive definition, memoized on suffix pairs.
pub fn oracle_levenshtein(a: &str, b: &str) -> usize {
    fn go(
        a: &[char],
        b: &[char],
        i: usize,
        j: usize,
        memo: &mut BTreeMap<(usize, usize), usize>,
    ) -> usize {
        if i == a.len() {
            return b.len() - j;
        }
        if j == b.len() {
            return a.len() - i;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let v = if a[i] == b[j] {
            go(a, b, i + 1, j + 1, memo)
        } else {
            1 + go(a, b, i + 1, j, memo)
                .min(go(a, b, i, j + 1, memo))
                .min(go(a, b, i + 1, j + 1, memo))
        };
        memo.insert((i, j), v);
        v
    }
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    go(&a, &b, 0, 0, &mut BTreeMap::new())
}

pub fn random_string(rng: &mut StdRng, max_len: usize, alphabet: &[char]) -> String {
    let n = rng.gen_range(0..=max_len);
    (0..n)
        .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
        .collect()
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
