//! Decision procedures for hyperbolicity: thinness of flat rectangles, joins,
//! grids and bicycles, the link condition, four-point δ, the ℓ∞ metric and
//! the graph-level criteria for right-angled groups and graph braid groups.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::complex::CubeComplex;
use crate::curve::DeltaTable;
use crate::error::{CubexError, Result};
use crate::graph::{AuxGraph, DefiningGraph};
use crate::hyperplanes::{max_grid, max_join, DEFAULT_SEARCH_NODES};
use crate::median::{rectangle_from_sequences, FlatRectangle};
use crate::search_budget;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Thickness {
    pub value: usize,
    pub witness: FlatRectangle,
}

/// Splits `sep` into two classes with every cross pair transverse, maximizing
/// the smaller class. Disjoint hyperplanes must share a class, so this is a
/// subset-sum over the components of the disjointness graph.
pub fn best_split(x: &CubeComplex, sep: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = sep.len();
    let mut comp: Vec<usize> = (0..k).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while c[r] != r {
            r = c[r];
        }
        let mut j = i;
        while c[j] != r {
            let n = c[j];
            c[j] = r;
            j = n;
        }
        r
    }
    for i in 0..k {
        for j in i + 1..k {
            if !x.transverse(sep[i], sep[j]) {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                comp[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; k];
    for i in 0..k {
        let r = find(&mut comp, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(sep[i]);
    }
    // reach[g][s]: some subset of the first g groups sums to s
    let mut reach = vec![vec![false; k + 1]; groups.len() + 1];
    reach[0][0] = true;
    for (g, grp) in groups.iter().enumerate() {
        for s in 0..=k {
            if reach[g][s] {
                reach[g + 1][s] = true;
                reach[g + 1][s + grp.len()] = true;
            }
        }
    }
    let target = (0..=k)
        .filter(|&s| reach[groups.len()][s])
        .max_by_key(|&s| (s.min(k - s), s))
        .unwrap_or(0);
    let (mut h, mut v) = (Vec::new(), Vec::new());
    let mut s = target;
    for g in (0..groups.len()).rev() {
        if s >= groups[g].len() && reach[g][s - groups[g].len()] {
            s -= groups[g].len();
            h.extend_from_slice(&groups[g]);
        } else {
            v.extend_from_slice(&groups[g]);
        }
    }
    h.sort_unstable();
    v.sort_unstable();
    (h, v)
}

/// Largest min(p, q) over flat rectangles [0,p]×[0,q] in X, with a witness.
///
/// A pair of opposite corners (a, c) spans a rectangle with sides p, q exactly
/// when the hyperplanes separating them split into classes of sizes p and q
/// with all cross pairs transverse, so it suffices to scan vertex pairs.
pub fn max_flat_rectangle_thickness(x: &CubeComplex) -> Thickness {
    let n = x.num_vertices();
    let best = AtomicUsize::new(0);
    (0..n).into_par_iter().for_each(|a| {
        for c in a + 1..n {
            if x.distance(a, c) / 2 <= best.load(Ordering::Relaxed) {
                continue;
            }
            let (h, v) = best_split(x, &x.separating_hyperplanes(a, c));
            best.fetch_max(h.len().min(v.len()), Ordering::Relaxed);
        }
    });
    let value = best.into_inner();
    if value == 0 {
        return Thickness {
            value,
            witness: FlatRectangle::degenerate(0),
        };
    }
    // first pair in lexicographic order, for a reproducible witness
    for a in 0..n {
        for c in a + 1..n {
            if x.distance(a, c) < 2 * value {
                continue;
            }
            let (mut h, mut v) = best_split(x, &x.separating_hyperplanes(a, c));
            if h.len().min(v.len()) == value {
                // the interval splits as a product, so any adjacent-first orders work
                order_along(x, a, &mut h);
                order_along(x, a, &mut v);
                let witness = rectangle_from_sequences(x, a, &h, &v).expect("product interval");
                return Thickness { value, witness };
            }
        }
    }
    unreachable!("the parallel scan found a pair")
}

/// Orders a set of hyperplanes separating `a` from some vertex so that
/// flipping them one by one from `a` stays inside the complex.
fn order_along(x: &CubeComplex, a: usize, hs: &mut Vec<usize>) {
    let mut left: Vec<usize> = std::mem::take(hs);
    let mut cur = x.signature(a).clone();
    while !left.is_empty() {
        let i = left
            .iter()
            .position(|&h| {
                let mut s = cur.clone();
                s.flip(h);
                x.vertex_with_signature(&s).is_some()
            })
            .expect("some hyperplane is adjacent");
        let h = left.remove(i);
        cur.flip(h);
        hs.push(h);
    }
}

pub fn join_thinness(x: &CubeComplex) -> Result<usize> {
    Ok(max_join(x)?.thinness())
}

pub fn grid_thinness(x: &CubeComplex) -> Result<usize> {
    Ok(max_grid(x)?.thinness())
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LinkWitness {
    pub vertex: usize,
    /// Four neighbours of `vertex` forming an induced 4-cycle in its link.
    pub cycle: [usize; 4],
}

/// Two edges at `v` span a square iff flipping both hyperplanes at `v` lands on a vertex.
fn link_adjacent(x: &CubeComplex, v: usize, h1: usize, h2: usize) -> bool {
    let mut s = x.signature(v).clone();
    s.flip(h1);
    s.flip(h2);
    x.vertex_with_signature(&s).is_some()
}

/// Link of a vertex as an adjacency matrix over its neighbours.
pub fn vertex_link(x: &CubeComplex, v: usize) -> (Vec<usize>, Vec<Vec<bool>>) {
    let nb: Vec<(usize, usize)> = x.neighbors(v).collect();
    let adj = nb
        .iter()
        .map(|&(_, h1)| {
            nb.iter()
                .map(|&(_, h2)| h1 != h2 && link_adjacent(x, v, h1, h2))
                .collect()
        })
        .collect();
    (nb.into_iter().map(|(w, _)| w).collect(), adj)
}

/// First vertex (by id) whose link contains an induced 4-cycle.
pub fn link_has_induced_4cycle(x: &CubeComplex) -> Option<LinkWitness> {
    for v in 0..x.num_vertices() {
        let (nb, adj) = vertex_link(x, v);
        let k = nb.len();
        for a in 0..k {
            for c in a + 1..k {
                if adj[a][c] {
                    continue;
                }
                let common: Vec<usize> = (0..k).filter(|&b| adj[a][b] && adj[c][b]).collect();
                for (i, &b) in common.iter().enumerate() {
                    if let Some(&d) = common[i + 1..].iter().find(|&&d| !adj[b][d]) {
                        return Some(LinkWitness {
                            vertex: v,
                            cycle: [nb[a], nb[b], nb[c], nb[d]],
                        });
                    }
                }
            }
        }
    }
    None
}

/// Link diameter of every vertex; None for disconnected links.
pub fn link_diameters(x: &CubeComplex) -> Vec<Option<usize>> {
    (0..x.num_vertices())
        .map(|v| {
            let (nb, adj) = vertex_link(x, v);
            let edges = (0..nb.len()).flat_map(|a| (a + 1..nb.len()).map(move |b| [a, b]));
            let g = AuxGraph::new(
                crate::graph::AuxKind::Defining,
                nb.iter().map(|w| w.to_string()).collect(),
                edges.filter(|&[a, b]| adj[a][b]).collect::<Vec<_>>(),
            );
            g.diameter()
        })
        .collect()
}

struct Biclique<'a> {
    g: &'a AuxGraph,
    nodes: u64,
    budget: u64,
    best: (usize, Vec<usize>, Vec<usize>),
    a: Vec<usize>,
}

impl Biclique<'_> {
    fn run(&mut self, rem: &[usize], common: &Bits) {
        if self.nodes >= self.budget {
            return;
        }
        self.nodes += 1;
        if !self.a.is_empty() {
            let b: Vec<usize> = common.ones().filter(|&v| v > self.a[0]).collect();
            let t = b.len().min(self.a.len());
            if t > self.best.0 {
                self.best = (t, self.a.clone(), b[..t].to_vec());
            }
        }
        for (i, &c) in rem.iter().enumerate() {
            if self.a.len() + rem.len() - i <= self.best.0 {
                return;
            }
            let nb = Bits::from_indices(self.g.num_nodes(), self.g.neighbors(c).iter().copied());
            let c2 = common.and(&nb);
            if c2.count_ones() <= self.best.0 {
                continue;
            }
            self.a.push(c);
            self.run(&rem[i + 1..], &c2);
            self.a.pop();
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BicliqueWitness {
    pub value: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Largest K such that the graph contains K_{K,K}, with the two sides.
pub fn max_balanced_biclique(g: &AuxGraph) -> Result<BicliqueWitness> {
    let n = g.num_nodes();
    let budget = search_budget(DEFAULT_SEARCH_NODES);
    let mut s = Biclique {
        g,
        nodes: 0,
        budget,
        best: (0, Vec::new(), Vec::new()),
        a: Vec::new(),
    };
    let all: Vec<usize> = (0..n).collect();
    s.run(&all, &Bits::from_indices(n, 0..n));
    if s.nodes >= budget {
        return Err(CubexError::Budget {
            lower_bound: s.best.0,
        });
    }
    let (value, mut left, mut right) = s.best;
    left.truncate(value);
    right.truncate(value);
    Ok(BicliqueWitness { value, left, right })
}

/// max over complete bipartite subgraphs K_{p,q} of min(p, q).
pub fn thin_bicycle_constant(crossing: &AuxGraph) -> Result<usize> {
    Ok(max_balanced_biclique(crossing)?.value)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricSpec {
    L1,
    Linf,
    DeltaL { l: usize },
}

/// Quadruple counts above this are sampled instead of scanned.
pub const EXHAUSTIVE_QUADRUPLES: u64 = 60_000_000;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FourPointDelta {
    /// 2δ, so that half-integers stay exact.
    pub twice_delta: usize,
    pub witness: Option<[usize; 4]>,
    /// False when quadruples were sampled.
    pub exhaustive: bool,
}

impl FourPointDelta {
    pub fn delta(&self) -> f64 {
        self.twice_delta as f64 / 2.0
    }
}

pub fn distance_matrix(x: &CubeComplex, metric: MetricSpec) -> Result<Vec<Vec<usize>>> {
    let n = x.num_vertices();
    Ok(match metric {
        MetricSpec::L1 => (0..n)
            .into_par_iter()
            .map(|a| (0..n).map(|b| x.distance(a, b)).collect())
            .collect(),
        MetricSpec::Linf => (0..n)
            .into_par_iter()
            .map(|a| (0..n).map(|b| linf_by_chains(x, a, b)).collect())
            .collect(),
        MetricSpec::DeltaL { l } => {
            let table = DeltaTable::new(x)?;
            (0..n)
                .into_par_iter()
                .map(|a| (0..n).map(|b| table.delta(x, a, b, l)).collect())
                .collect()
        }
    })
}

fn quad_gap(d: &[Vec<usize>], p: usize, q: usize, r: usize, s: usize) -> usize {
    let mut sums = [d[p][q] + d[r][s], d[p][r] + d[q][s], d[p][s] + d[q][r]];
    sums.sort_unstable();
    sums[2] - sums[1]
}

/// Smallest δ such that every quadruple satisfies the four-point condition.
pub fn four_point_delta_from_matrix(d: &[Vec<usize>], seed: u64) -> FourPointDelta {
    let n = d.len() as u64;
    let quads = if n < 4 {
        0
    } else {
        n * (n - 1) * (n - 2) * (n - 3) / 24
    };
    if quads <= EXHAUSTIVE_QUADRUPLES {
        let n = d.len();
        let best = (0..n)
            .into_par_iter()
            .map(|p| {
                let mut best = (0usize, None);
                for q in p + 1..n {
                    for r in q + 1..n {
                        for s in r + 1..n {
                            let g = quad_gap(d, p, q, r, s);
                            if g > best.0 {
                                best = (g, Some([p, q, r, s]));
                            }
                        }
                    }
                }
                best
            })
            .reduce(
                || (0, None),
                |a, b| {
                    if b.0 > a.0 || (b.0 == a.0 && a.1.is_none()) {
                        b
                    } else {
                        a
                    }
                },
            );
        FourPointDelta {
            twice_delta: best.0,
            witness: best.1,
            exhaustive: true,
        }
    } else {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = d.len();
        let mut best = (0usize, None);
        for _ in 0..EXHAUSTIVE_QUADRUPLES / 4 {
            let mut q = [0usize; 4];
            for v in &mut q {
                *v = rng.random_range(0..n);
            }
            let g = quad_gap(d, q[0], q[1], q[2], q[3]);
            if g > best.0 {
                best = (g, Some(q));
            }
        }
        FourPointDelta {
            twice_delta: best.0,
            witness: best.1,
            exhaustive: false,
        }
    }
}

pub fn four_point_delta(x: &CubeComplex, metric: MetricSpec) -> Result<FourPointDelta> {
    Ok(four_point_delta_from_matrix(
        &distance_matrix(x, metric)?,
        0,
    ))
}

/// Steps of the normal cube path from `a` to `b`: each step flips every
/// separating hyperplane adjacent to the current vertex at once.
pub fn linf_by_cube_path(x: &CubeComplex, a: usize, b: usize) -> usize {
    let mut cur = a;
    let mut steps = 0;
    while cur != b {
        let sep = x.separating_bits(cur, b);
        let mut s = x.signature(cur).clone();
        for (_, h) in x.neighbors(cur) {
            if sep.get(h) {
                s.flip(h);
            }
        }
        cur = x
            .vertex_with_signature(&s)
            .expect("adjacent separating hyperplanes span a cube");
        steps += 1;
    }
    steps
}

/// Longest chain of pairwise disjoint hyperplanes separating `a` from `b`.
pub fn linf_by_chains(x: &CubeComplex, a: usize, b: usize) -> usize {
    let sep = x.separating_hyperplanes(a, b);
    longest_nested_chain(x, a, &sep, |_, _| true)
}

/// Longest chain h_1, ..., h_r in `sep` (all separating `a` from some vertex)
/// with h_i, h_{i+1} disjoint, h_{i+1} beyond h_i as seen from `a`, and
/// `link(h_i, h_{i+1})`.
pub(crate) fn longest_nested_chain(
    x: &CubeComplex,
    a: usize,
    sep: &[usize],
    link: impl Fn(usize, usize) -> bool,
) -> usize {
    if sep.is_empty() {
        return 0;
    }
    let sa = x.signature(a);
    // beyond(i, j): j lies in the halfspace of i away from a
    let beyond =
        |i: usize, j: usize| !x.transverse(i, j) && x.side_of_hyperplane(i, j) != sa.get(i);
    // hyperplanes beyond i are also beyond everything i is beyond, so the
    // number of hyperplanes before i is a topological order
    let mut order: Vec<usize> = (0..sep.len()).collect();
    let depth: Vec<usize> = (0..sep.len())
        .map(|i| {
            (0..sep.len())
                .filter(|&j| j != i && beyond(sep[j], sep[i]))
                .count()
        })
        .collect();
    order.sort_by_key(|&i| depth[i]);
    let mut best = vec![1usize; sep.len()];
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[..pos] {
            if beyond(sep[j], sep[i]) && link(sep[j], sep[i]) {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

/// ℓ∞ distance, computed by normal cube paths and by disjoint chains.
pub fn distance_linf(x: &CubeComplex, a: usize, b: usize) -> Result<usize> {
    let p = linf_by_cube_path(x, a, b);
    let c = linf_by_chains(x, a, b);
    if p != c {
        return Err(CubexError::InvariantViolation(format!(
            "cube path length {p} differs from chain length {c} between {a} and {b}"
        )));
    }
    Ok(p)
}

/// Right-angled Coxeter groups: hyperbolic iff Γ has no induced square.
pub fn meier_racg_hyperbolic(gamma: &DefiningGraph) -> bool {
    gamma.is_square_free()
}

/// Some cycle of `g` avoiding the vertices in `avoid`, if any.
fn has_cycle_avoiding(g: &DefiningGraph, avoid: &[bool]) -> bool {
    let n = g.num_vertices();
    let verts = (0..n).filter(|&v| !avoid[v]).count();
    let edges = g
        .edges()
        .into_iter()
        .filter(|&[a, b]| !avoid[a] && !avoid[b])
        .count();
    let mut seen = avoid.to_vec();
    let mut comps = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        comps += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    edges + comps > verts
}

/// Two vertex-disjoint cycles of Γ, each as a vertex list, if they exist.
pub fn disjoint_cycle_pair(gamma: &DefiningGraph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = gamma.num_vertices();
    // simple cycles with smallest vertex `s`, each visited once per direction
    fn extend(
        g: &DefiningGraph,
        s: usize,
        path: &mut Vec<usize>,
        on: &mut Vec<bool>,
        out: &mut Option<(Vec<usize>, Vec<usize>)>,
    ) {
        if out.is_some() {
            return;
        }
        let u = *path.last().unwrap();
        for &w in g.neighbors(u) {
            if w == s && path.len() >= 3 && path[1] < u {
                if has_cycle_avoiding(g, on) {
                    let other = find_cycle_avoiding(g, on).expect("cycle exists");
                    *out = Some((path.clone(), other));
                    return;
                }
            } else if w > s && !on[w] {
                on[w] = true;
                path.push(w);
                extend(g, s, path, on, out);
                path.pop();
                on[w] = false;
            }
        }
    }
    let mut out = None;
    for s in 0..n {
        let mut on = vec![false; n];
        on[s] = true;
        extend(gamma, s, &mut vec![s], &mut on, &mut out);
        if out.is_some() {
            break;
        }
    }
    out
}

fn find_cycle_avoiding(g: &DefiningGraph, avoid: &[bool]) -> Option<Vec<usize>> {
    let n = g.num_vertices();
    let mut parent = vec![usize::MAX; n];
    let mut seen = avoid.to_vec();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if avoid[w] || w == parent[u] {
                    continue;
                }
                if seen[w] {
                    // tree paths from u and w up to their common ancestor
                    let up = |mut v: usize| {
                        let mut p = vec![v];
                        while parent[v] != usize::MAX {
                            v = parent[v];
                            p.push(v);
                        }
                        p
                    };
                    let (pu, pw) = (up(u), up(w));
                    let lca = *pu.iter().find(|v| pw.contains(v))?;
                    let mut cyc: Vec<usize> =
                        pu.iter().copied().take_while(|&v| v != lca).collect();
                    cyc.push(lca);
                    let back: Vec<usize> = pw.iter().copied().take_while(|&v| v != lca).collect();
                    cyc.extend(back.into_iter().rev());
                    return Some(cyc);
                }
                seen[w] = true;
                parent[w] = u;
                stack.push(w);
            }
        }
    }
    None
}

/// Two-strand graph braid groups: hyperbolic iff Γ has no two disjoint cycles.
pub fn braid2_hyperbolic(gamma: &DefiningGraph) -> Result<bool> {
    if !gamma.is_connected() {
        return Err(CubexError::Disconnected);
    }
    Ok(disjoint_cycle_pair(gamma).is_none())
}

/// Right-angled Artin groups: acylindrically hyperbolic iff Γ has at least two
/// vertices and is not a join.
pub fn raag_acyl_hyperbolic(gamma: &DefiningGraph) -> bool {
    gamma.num_vertices() >= 2 && gamma.complement().is_connected()
}
