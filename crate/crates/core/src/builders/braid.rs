//! Discretized unordered configuration spaces of graphs.

use std::collections::HashMap;

use crate::complex::{cover_ball, CubeComplex};
use crate::error::{CubexError, Result};
use crate::graph::DefiningGraph;

use super::close_convex;

#[derive(Clone, Debug)]
pub struct BraidOptions {
    /// Subdivide edges uniformly until the discretization is faithful.
    pub auto_subdivide: bool,
    /// Radius of the universal-cover ball returned when the base is not simply connected.
    pub radius: usize,
    pub vertex_budget: usize,
}

impl Default for BraidOptions {
    fn default() -> Self {
        BraidOptions {
            auto_subdivide: false,
            radius: 3,
            vertex_budget: 200_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BraidComplex {
    pub complex: CubeComplex,
    /// Whether the discretized configuration space is itself CAT(0).
    pub simply_connected: bool,
    /// The topological graph actually used, after any subdivision.
    pub topological: DefiningGraph,
    pub subdivision: usize,
    /// Configurations of the base complex, as sorted vertex sets.
    pub configurations: Vec<Vec<usize>>,
    /// Configuration index under each vertex of `complex`.
    pub projection: Vec<usize>,
    /// Cover radius, when `complex` is a universal-cover piece.
    pub radius: Option<usize>,
    pub base_dimension: usize,
}

/// Checks the sufficient subdivision condition for `n` strands: paths between
/// distinct essential vertices have at least n-1 edges and every cycle has at
/// least n+1 edges.
pub fn subdivision_defect(g: &DefiningGraph, n: usize) -> Option<String> {
    if n <= 1 {
        return None;
    }
    if let Some(girth) = g.girth() {
        if girth < n + 1 {
            return Some(format!(
                "a cycle of length {girth} is shorter than {}",
                n + 1
            ));
        }
    }
    let essential = |v: usize| g.neighbors(v).len() != 2;
    for s in 0..g.num_vertices() {
        if !essential(s) {
            continue;
        }
        for &first in g.neighbors(s) {
            let (mut prev, mut cur, mut len) = (s, first, 1);
            while !essential(cur) {
                let next = g
                    .neighbors(cur)
                    .iter()
                    .copied()
                    .find(|&w| w != prev)
                    .expect("degree two");
                prev = cur;
                cur = next;
                len += 1;
                if cur == s {
                    break;
                }
            }
            if cur != s && len < n - 1 {
                return Some(format!(
                    "path of length {len} between essential vertices {} and {} is shorter than {}",
                    g.labels()[s],
                    g.labels()[cur],
                    n - 1
                ));
            }
        }
    }
    None
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// The cube complex of `n` unlabelled tokens on the graph: vertices are
/// n-subsets, an edge moves one token along a graph edge to a free vertex, and
/// cubes are sets of moves along edges with pairwise disjoint closures.
///
/// When the complex is not simply connected a convex ball of its universal
/// cover is returned instead.
pub fn graph_braid_complex(
    gamma: &DefiningGraph,
    n: usize,
    opts: &BraidOptions,
) -> Result<BraidComplex> {
    if n == 0 || n > gamma.num_vertices() {
        return Err(CubexError::Input(format!(
            "strand count {n} must lie in 1..={}",
            gamma.num_vertices()
        )));
    }
    if !gamma.is_connected() {
        return Err(CubexError::Disconnected);
    }
    let mut k = 1;
    let mut top = gamma.clone();
    while let Some(reason) = subdivision_defect(&top, n) {
        if !opts.auto_subdivide {
            return Err(CubexError::NotSubdivided { strands: n, reason });
        }
        k += 1;
        top = gamma.subdivide(k);
    }

    let configs = subsets(top.num_vertices(), n);
    let index: HashMap<Vec<usize>, u32> = configs
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i as u32))
        .collect();
    // move lists: (target configuration, from, to)
    let moves: Vec<Vec<(u32, usize, usize)>> = configs
        .iter()
        .map(|c| {
            let mut out = Vec::new();
            for &a in c {
                for &b in top.neighbors(a) {
                    if !c.contains(&b) {
                        let mut d: Vec<usize> =
                            c.iter().map(|&x| if x == a { b } else { x }).collect();
                        d.sort_unstable();
                        out.push((index[&d], a, b));
                    }
                }
            }
            out.sort_unstable();
            out
        })
        .collect();
    let adj: Vec<Vec<u32>> = moves
        .iter()
        .map(|m| m.iter().map(|t| t.0).collect())
        .collect();
    if adj.len() > 1 && adj.iter().any(Vec::is_empty) {
        return Err(CubexError::Disconnected);
    }
    let opposite = |z: u32, x1: u32, x2: u32| -> Option<u32> {
        let mz = &moves[z as usize];
        let find = |x: u32| mz.iter().find(|t| t.0 == x).map(|t| (t.1, t.2));
        let ((a, b), (c, d)) = (find(x1)?, find(x2)?);
        if a == c || a == d || b == c || b == d {
            return None;
        }
        let mut y: Vec<usize> = configs[z as usize]
            .iter()
            .map(|&t| {
                if t == a {
                    b
                } else if t == c {
                    d
                } else {
                    t
                }
            })
            .collect();
        y.sort_unstable();
        Some(index[&y])
    };
    let base_dimension = (0..configs.len())
        .map(|z| max_compatible_moves(&moves[z]))
        .max()
        .unwrap_or(0);

    let m = configs.len();
    let whole = cover_ball(&adj, 0, opposite, usize::MAX, m).ok_or_else(|| {
        CubexError::InvariantViolation("configuration complex is not locally CAT(0)".into())
    })?;
    if whole.exhausted && whole.base.len() == m {
        let mut edges = Vec::new();
        for (u, l) in adj.iter().enumerate() {
            for &w in l {
                if (u as u32) < w {
                    edges.push([u, w as usize]);
                }
            }
        }
        let complex = CubeComplex::from_graph(m, &edges)?;
        return Ok(BraidComplex {
            complex,
            simply_connected: true,
            topological: top,
            subdivision: k,
            configurations: configs,
            projection: (0..m).collect(),
            radius: None,
            base_dimension,
        });
    }

    let r = opts.radius;
    let far = base_dimension.max(1) * r;
    let cb = cover_ball(&adj, 0, opposite, far, opts.vertex_budget).ok_or_else(|| {
        CubexError::InvariantViolation("configuration complex is not locally CAT(0)".into())
    })?;
    if cb.base.len() > opts.vertex_budget {
        return Err(CubexError::RadiusTooLarge {
            budget: opts.vertex_budget,
        });
    }
    let nb = |v: &u32| -> Vec<u32> {
        let v = *v as usize;
        cb.down[v].iter().chain(cb.up[v].iter()).copied().collect()
    };
    let seed: Vec<u32> = (0..cb.base.len() as u32)
        .filter(|&v| cb.layer[v as usize] as usize <= r)
        .collect();
    let mut hull = close_convex(seed, nb, opts.vertex_budget)?;
    hull.sort_by_key(|&v| (cb.layer[v as usize], v));
    let pos: HashMap<u32, usize> = hull.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    for (i, &v) in hull.iter().enumerate() {
        for &w in &cb.up[v as usize] {
            if let Some(&j) = pos.get(&w) {
                edges.push([i, j]);
            }
        }
    }
    let complex = CubeComplex::from_graph(hull.len(), &edges)?;
    Ok(BraidComplex {
        complex,
        simply_connected: false,
        topological: top,
        subdivision: k,
        configurations: configs,
        projection: hull.iter().map(|&v| cb.base[v as usize] as usize).collect(),
        radius: Some(r),
        base_dimension,
    })
}

fn max_compatible_moves(moves: &[(u32, usize, usize)]) -> usize {
    fn go(moves: &[(u32, usize, usize)], start: usize, used: &mut Vec<usize>, best: &mut usize) {
        *best = (*best).max(used.len() / 2);
        for i in start..moves.len() {
            let (_, a, b) = moves[i];
            if used.contains(&a) || used.contains(&b) {
                continue;
            }
            used.push(a);
            used.push(b);
            go(moves, i + 1, used, best);
            used.truncate(used.len() - 2);
        }
    }
    let mut best = 0;
    go(moves, 0, &mut Vec::new(), &mut best);
    best
}
