//! Constructions of concrete complexes: group balls, graph braid complexes,
//! products and small test shapes.

mod basic;
mod braid;
mod groups;

pub use basic::*;
pub use braid::{graph_braid_complex, BraidComplex, BraidOptions};
pub use groups::{raag_ball, racg_ball, GroupBall, GroupKind, DEFAULT_VERTEX_BUDGET};

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{CubexError, Result};

/// Convex closure of a connected vertex set inside a median graph given by a
/// neighbour oracle. A connected subgraph is convex once no outside vertex has
/// two neighbours inside, so the closure adds such vertices until none remain.
pub(crate) fn close_convex<K, F>(seed: Vec<K>, mut neighbours: F, budget: usize) -> Result<Vec<K>>
where
    K: Hash + Eq + Clone,
    F: FnMut(&K) -> Vec<K>,
{
    let mut inside: HashMap<K, ()> = HashMap::new();
    let mut order = Vec::new();
    for k in seed {
        if inside.insert(k.clone(), ()).is_none() {
            order.push(k);
        }
    }
    let mut count: HashMap<K, u32> = HashMap::new();
    let mut queue: Vec<K> = Vec::new();
    for k in &order {
        for w in neighbours(k) {
            if !inside.contains_key(&w) {
                let c = count.entry(w.clone()).or_insert(0);
                *c += 1;
                if *c == 2 {
                    queue.push(w);
                }
            }
        }
    }
    while let Some(w) = queue.pop() {
        if inside.contains_key(&w) {
            continue;
        }
        if inside.len() >= budget {
            return Err(CubexError::RadiusTooLarge { budget });
        }
        count.remove(&w);
        inside.insert(w.clone(), ());
        order.push(w.clone());
        for u in neighbours(&w) {
            if !inside.contains_key(&u) {
                let c = count.entry(u.clone()).or_insert(0);
                *c += 1;
                if *c == 2 {
                    queue.push(u);
                }
            }
        }
    }
    Ok(order)
}
