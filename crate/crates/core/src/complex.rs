//! Finite CAT(0) cube complexes stored as median graphs with their hyperplanes.

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{CubexError, Result};

/// Triple budget for exhaustive median checks.
pub const EXHAUSTIVE_TRIPLES: u64 = 3_000_000;
/// Above this many vertices the ℓ¹ = BFS check runs from sampled sources only.
pub const FULL_BFS_VERTICES: usize = 2000;

/// Plain JSON graph format `{"vertices": N, "edges": [[i, j], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum CheckMethod {
    Exhaustive,
    LocalToGlobal,
    Sampled,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MedianReport {
    pub ok: bool,
    pub method: CheckMethod,
    pub triples_checked: u64,
    /// First violating triple and its number of medians.
    pub violation: Option<([usize; 3], usize)>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Hyperplane {
    pub id: usize,
    pub edges: Vec<[usize; 2]>,
    /// Vertices whose signature bit is set.
    pub halfspace_plus: Vec<usize>,
    pub halfspace_minus: Vec<usize>,
    pub carrier: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CubeComplex {
    adj: Vec<Vec<(u32, u32)>>,
    edges: Vec<[u32; 2]>,
    edge_hyp: Vec<u32>,
    hyp_edges: Vec<Vec<u32>>,
    sig: Vec<Bits>,
    index: HashMap<Bits, u32>,
    transverse: Vec<Bits>,
    rep: Vec<u32>,
    dim: usize,
    certificate: MedianReport,
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

pub(crate) fn adjacency(n: usize, edges: &[[usize; 2]]) -> Result<Vec<Vec<u32>>> {
    if n == 0 {
        return Err(CubexError::Input("graph has no vertices".into()));
    }
    let mut adj = vec![Vec::new(); n];
    for &[a, b] in edges {
        if a >= n || b >= n {
            return Err(CubexError::Input(format!("edge [{a}, {b}] out of range")));
        }
        if a == b {
            return Err(CubexError::Input(format!("loop at vertex {a}")));
        }
        adj[a].push(b as u32);
        adj[b].push(a as u32);
    }
    for (v, list) in adj.iter_mut().enumerate() {
        list.sort_unstable();
        if list.windows(2).any(|w| w[0] == w[1]) {
            return Err(CubexError::Input(format!("multiple edge at vertex {v}")));
        }
    }
    Ok(adj)
}

pub(crate) fn bfs_graph(adj: &[Vec<u32>], src: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; adj.len()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src as u32]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u as usize] + 1;
        for &w in &adj[u as usize] {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = d;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Counts medians of every triple through interval bitsets; O(n³) words.
fn exhaustive_graph_medians(adj: &[Vec<u32>]) -> MedianReport {
    let n = adj.len();
    let dist: Vec<Vec<u32>> = (0..n).map(|s| bfs_graph(adj, s)).collect();
    let mut intervals: Vec<Bits> = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let d = dist[x][y];
            intervals.push(Bits::from_indices(
                n,
                (0..n).filter(|&m| dist[x][m] + dist[m][y] == d),
            ));
        }
    }
    let mut checked = 0u64;
    for x in 0..n {
        for y in x + 1..n {
            let ixy = &intervals[x * n + y];
            for z in y + 1..n {
                checked += 1;
                let count = ixy
                    .and(&intervals[y * n + z])
                    .and(&intervals[x * n + z])
                    .count_ones();
                if count != 1 {
                    return MedianReport {
                        ok: false,
                        method: CheckMethod::Exhaustive,
                        triples_checked: checked,
                        violation: Some(([x, y, z], count)),
                        detail: None,
                    };
                }
            }
        }
    }
    MedianReport {
        ok: true,
        method: CheckMethod::Exhaustive,
        triples_checked: checked,
        violation: None,
        detail: None,
    }
}

fn triples(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) * n.saturating_sub(2) / 6
}

/// Median test for an arbitrary finite graph.
///
/// Small graphs are checked triple by triple. Larger ones go through the
/// local-to-global certificate: triangle-free, no induced K_{2,3}, the 3-cube
/// condition, and simple connectivity of the square complex.
pub fn verify_median_graph(n: usize, edges: &[[usize; 2]]) -> Result<MedianReport> {
    let adj = adjacency(n, edges)?;
    if bfs_graph(&adj, 0).contains(&u32::MAX) {
        return Err(CubexError::Disconnected);
    }
    if triples(n) <= EXHAUSTIVE_TRIPLES {
        return Ok(exhaustive_graph_medians(&adj));
    }
    Ok(match local_structure(&adj) {
        Ok(local) => match local_to_global(&adj, &local) {
            Ok(()) => MedianReport {
                ok: true,
                method: CheckMethod::LocalToGlobal,
                triples_checked: 0,
                violation: None,
                detail: None,
            },
            Err(e) => failed_local(e),
        },
        Err(e) => failed_local(e),
    })
}

fn failed_local(e: String) -> MedianReport {
    MedianReport {
        ok: false,
        method: CheckMethod::LocalToGlobal,
        triples_checked: 0,
        violation: None,
        detail: Some(e),
    }
}

/// Squares and links gathered from a bipartite, K_{2,3}-free graph.
struct LocalStructure {
    /// For each vertex: (a, b, opposite) for neighbour pairs a < b spanning a square.
    link_squares: Vec<Vec<(u32, u32, u32)>>,
}

fn local_structure(adj: &[Vec<u32>]) -> std::result::Result<LocalStructure, String> {
    let n = adj.len();
    let mut color = vec![u8::MAX; n];
    color[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            let w = w as usize;
            if color[w] == u8::MAX {
                color[w] = 1 - color[u];
                queue.push_back(w);
            } else if color[w] == color[u] {
                return Err(format!("odd cycle through edge ({u}, {w})"));
            }
        }
    }
    let mut link_squares = vec![Vec::new(); n];
    let mut middles: HashMap<u32, Vec<u32>> = HashMap::new();
    for v in 0..n {
        middles.clear();
        for &c in &adj[v] {
            for &w in &adj[c as usize] {
                if w as usize != v {
                    middles.entry(w).or_default().push(c);
                }
            }
        }
        for (&w, mids) in &middles {
            if mids.len() >= 3 {
                return Err(format!(
                    "induced K_{{2,3}} on {v}, {w} and {}, {}, {}",
                    mids[0], mids[1], mids[2]
                ));
            }
            if mids.len() == 2 {
                let (a, b) = (mids[0].min(mids[1]), mids[0].max(mids[1]));
                link_squares[v].push((a, b, w));
            }
        }
        link_squares[v].sort_unstable();
    }
    Ok(LocalStructure { link_squares })
}

fn local_to_global(adj: &[Vec<u32>], local: &LocalStructure) -> std::result::Result<(), String> {
    three_cube_condition(adj, local)?;
    if !square_complex_simply_connected(adj, local) {
        return Err("square complex is not simply connected".into());
    }
    Ok(())
}

fn opposite(local: &LocalStructure, v: usize, a: u32, b: u32) -> Option<u32> {
    let (a, b) = (a.min(b), a.max(b));
    let list = &local.link_squares[v];
    list.binary_search_by(|&(x, y, _)| (x, y).cmp(&(a, b)))
        .ok()
        .map(|i| list[i].2)
}

fn three_cube_condition(
    adj: &[Vec<u32>],
    local: &LocalStructure,
) -> std::result::Result<(), String> {
    for v in 0..adj.len() {
        let nb = &adj[v];
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                let Some(ab) = opposite(local, v, nb[i], nb[j]) else {
                    continue;
                };
                for k in j + 1..nb.len() {
                    let (Some(bc), Some(ac)) = (
                        opposite(local, v, nb[j], nb[k]),
                        opposite(local, v, nb[i], nb[k]),
                    ) else {
                        continue;
                    };
                    // the far corner must be a common neighbour of the three square tips
                    let found = adj[ab as usize].iter().any(|&w| {
                        w as usize != v
                            && adj[bc as usize].binary_search(&w).is_ok()
                            && adj[ac as usize].binary_search(&w).is_ok()
                    });
                    if !found {
                        return Err(format!(
                            "3-cube condition fails at vertex {v} for neighbours {}, {}, {}",
                            nb[i], nb[j], nb[k]
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Breadth-first ball in the universal cover of a nonpositively curved square
/// complex, given by its 1-skeleton and a square oracle `opposite(z, x1, x2)`
/// returning the fourth corner of the square spanned at `z` by its neighbours.
///
/// The cover is median, so two lifts in layer k+1 coincide exactly when they
/// close a square over layer k-1. Returns None if the lift fails to be a covering.
pub(crate) struct CoverBall {
    pub base: Vec<u32>,
    pub layer: Vec<u32>,
    pub down: Vec<Vec<u32>>,
    pub up: Vec<Vec<u32>>,
    /// True when the breadth-first search ran out of vertices on its own.
    pub exhausted: bool,
}

pub(crate) fn cover_ball(
    adj: &[Vec<u32>],
    root: u32,
    opposite: impl Fn(u32, u32, u32) -> Option<u32>,
    max_layers: usize,
    cap: usize,
) -> Option<CoverBall> {
    let mut cb = CoverBall {
        base: vec![root],
        layer: vec![0],
        down: vec![Vec::new()],
        up: vec![Vec::new()],
        exhausted: false,
    };
    let mut prev: Vec<u32> = Vec::new();
    let mut layer: Vec<u32> = vec![0];
    let mut k = 0;
    while !layer.is_empty() {
        if k == max_layers || cb.base.len() > cap {
            return Some(cb);
        }
        k += 1;
        // candidate up-lifts (cover vertex, base neighbour)
        let mut cand: Vec<(u32, u32)> = Vec::new();
        let mut cand_index: HashMap<(u32, u32), u32> = HashMap::new();
        for &x in &layer {
            let bx = cb.base[x as usize] as usize;
            let below: Vec<u32> = cb.down[x as usize]
                .iter()
                .map(|&d| cb.base[d as usize])
                .collect();
            for &y in &adj[bx] {
                if !below.contains(&y) {
                    cand_index.insert((x, y), cand.len() as u32);
                    cand.push((x, y));
                }
            }
        }
        let mut uf = UnionFind::new(cand.len());
        for &z in &prev {
            let ups = &cb.up[z as usize];
            let bz = cb.base[z as usize];
            for i in 0..ups.len() {
                for j in i + 1..ups.len() {
                    let (x1, x2) = (ups[i], ups[j]);
                    let Some(y) = opposite(bz, cb.base[x1 as usize], cb.base[x2 as usize]) else {
                        continue;
                    };
                    if let (Some(&c1), Some(&c2)) =
                        (cand_index.get(&(x1, y)), cand_index.get(&(x2, y)))
                    {
                        uf.union(c1, c2);
                    }
                }
            }
        }
        let mut class_vertex: HashMap<u32, u32> = HashMap::new();
        let mut next = Vec::new();
        for (ci, &(x, y)) in cand.iter().enumerate() {
            let root = uf.find(ci as u32);
            let id = *class_vertex.entry(root).or_insert_with(|| {
                let id = cb.base.len() as u32;
                cb.base.push(y);
                cb.layer.push(k as u32);
                cb.down.push(Vec::new());
                cb.up.push(Vec::new());
                next.push(id);
                id
            });
            let bx = cb.base[x as usize];
            if cb.down[id as usize]
                .iter()
                .any(|&d| cb.base[d as usize] == bx)
            {
                return None;
            }
            cb.down[id as usize].push(x);
            cb.up[x as usize].push(id);
        }
        prev = std::mem::replace(&mut layer, next);
    }
    cb.exhausted = true;
    Some(cb)
}

fn square_complex_simply_connected(adj: &[Vec<u32>], local: &LocalStructure) -> bool {
    let n = adj.len();
    let opp = |z: u32, a: u32, b: u32| opposite(local, z as usize, a, b);
    match cover_ball(adj, 0, opp, usize::MAX, n) {
        Some(cb) => cb.exhausted && cb.base.len() == n,
        None => false,
    }
}

impl CubeComplex {
    /// Builds the complex from a connected simple graph, extracting hyperplanes
    /// by square closure and certifying the median property.
    pub fn from_graph(n: usize, edges: &[[usize; 2]]) -> Result<CubeComplex> {
        let adj = adjacency(n, edges)?;
        if bfs_graph(&adj, 0).contains(&u32::MAX) {
            return Err(CubexError::Disconnected);
        }
        let exhaustive = triples(n) <= EXHAUSTIVE_TRIPLES;
        let mut certificate = if exhaustive {
            let report = exhaustive_graph_medians(&adj);
            if let Some((triple, medians)) = report.violation {
                return Err(CubexError::NotMedian { triple, medians });
            }
            report
        } else {
            MedianReport {
                ok: true,
                method: CheckMethod::LocalToGlobal,
                triples_checked: 0,
                violation: None,
                detail: None,
            }
        };
        let local = local_structure(&adj).map_err(CubexError::NotMedianLocal)?;
        if !exhaustive {
            local_to_global(&adj, &local).map_err(CubexError::NotMedianLocal)?;
        }

        let mut edge_list: Vec<[u32; 2]> = Vec::with_capacity(edges.len());
        for (v, list) in adj.iter().enumerate() {
            for &w in list {
                if (v as u32) < w {
                    edge_list.push([v as u32, w]);
                }
            }
        }
        let edge_id = |a: u32, b: u32| -> u32 {
            let (a, b) = (a.min(b), a.max(b));
            edge_list.binary_search(&[a, b]).expect("edge present") as u32
        };
        let mut uf = UnionFind::new(edge_list.len());
        for v in 0..n {
            for &(a, b, w) in &local.link_squares[v] {
                if (v as u32) < w {
                    uf.union(edge_id(v as u32, a), edge_id(b, w));
                    uf.union(edge_id(v as u32, b), edge_id(a, w));
                }
            }
        }
        // number hyperplanes in order of first edge
        let mut class_id: HashMap<u32, u32> = HashMap::new();
        let mut edge_hyp = Vec::with_capacity(edge_list.len());
        let mut hyp_edges: Vec<Vec<u32>> = Vec::new();
        for e in 0..edge_list.len() {
            let root = uf.find(e as u32);
            let h = *class_id.entry(root).or_insert_with(|| {
                hyp_edges.push(Vec::new());
                (hyp_edges.len() - 1) as u32
            });
            edge_hyp.push(h);
            hyp_edges[h as usize].push(e as u32);
        }
        let h = hyp_edges.len();
        let labelled: Vec<Vec<(u32, u32)>> = adj
            .iter()
            .enumerate()
            .map(|(v, list)| {
                list.iter()
                    .map(|&w| (w, edge_hyp[edge_id(v as u32, w) as usize]))
                    .collect()
            })
            .collect();

        // orientation sweep
        let mut sig: Vec<Option<Bits>> = vec![None; n];
        sig[0] = Some(Bits::new(h));
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &(w, hyp) in &labelled[u] {
                if sig[w as usize].is_none() {
                    let mut s = sig[u].clone().expect("visited");
                    s.flip(hyp as usize);
                    sig[w as usize] = Some(s);
                    queue.push_back(w as usize);
                }
            }
        }
        let sig: Vec<Bits> = sig.into_iter().map(|s| s.expect("connected")).collect();
        for (e, &[a, b]) in edge_list.iter().enumerate() {
            let diff = sig[a as usize].xor(&sig[b as usize]);
            let hyp = edge_hyp[e] as usize;
            if diff.count_ones() != 1 || !diff.get(hyp) {
                return Err(CubexError::InconsistentHalfspace { hyperplane: hyp });
            }
        }
        let mut index = HashMap::with_capacity(n);
        for (v, s) in sig.iter().enumerate() {
            if index.insert(s.clone(), v as u32).is_some() {
                return Err(CubexError::NotMedianLocal(
                    "two vertices share a halfspace signature".into(),
                ));
            }
        }
        let mut transverse = vec![Bits::new(h); h];
        for v in 0..n {
            for &(a, b, _) in &local.link_squares[v] {
                let ha = edge_hyp[edge_id(v as u32, a) as usize] as usize;
                let hb = edge_hyp[edge_id(v as u32, b) as usize] as usize;
                transverse[ha].set(hb, true);
                transverse[hb].set(ha, true);
            }
        }
        let rep = hyp_edges
            .iter()
            .map(|es| edge_list[es[0] as usize][0])
            .collect();
        let dim = (0..n)
            .map(|v| link_clique_number(&adj[v], &local.link_squares[v]))
            .max()
            .unwrap_or(0);

        if !exhaustive {
            let sampled = l1_matches_bfs(&adj, &sig, 16);
            if let Err(pair) = sampled {
                return Err(CubexError::NotMedianLocal(format!(
                    "signature distance differs from graph distance at {pair:?}"
                )));
            }
            certificate.detail = Some("local-to-global certificate".into());
        }

        Ok(CubeComplex {
            adj: labelled,
            edges: edge_list,
            edge_hyp,
            hyp_edges,
            sig,
            index,
            transverse,
            rep,
            dim,
            certificate,
        })
    }

    pub fn from_json_str(s: &str) -> Result<CubeComplex> {
        let g: GraphJson = serde_json::from_str(s)?;
        CubeComplex::from_graph(g.vertices, &g.edges)
    }

    pub fn to_graph_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.num_vertices(),
            edges: self
                .edges
                .iter()
                .map(|&[a, b]| [a as usize, b as usize])
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_graph_json()).expect("serializable")
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.sig.len()
    }

    #[inline]
    pub fn num_hyperplanes(&self) -> usize {
        self.hyp_edges.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = [usize; 2]> + '_ {
        self.edges.iter().map(|&[a, b]| [a as usize, b as usize])
    }

    pub fn edge_hyperplane(&self, e: usize) -> usize {
        self.edge_hyp[e] as usize
    }

    /// Neighbours of `v` with the hyperplane dual to each edge.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj[v].iter().map(|&(w, h)| (w as usize, h as usize))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u]
            .binary_search_by(|&(w, _)| w.cmp(&(v as u32)))
            .is_ok()
    }

    /// Hyperplane dual to the edge uv, if it is an edge.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u]
            .binary_search_by(|&(w, _)| w.cmp(&(v as u32)))
            .ok()
            .map(|i| self.adj[u][i].1 as usize)
    }

    pub fn signature(&self, v: usize) -> &Bits {
        &self.sig[v]
    }

    pub fn vertex_with_signature(&self, s: &Bits) -> Option<usize> {
        self.index.get(s).map(|&v| v as usize)
    }

    /// Side of hyperplane `h` containing `v`: true for the set-bit halfspace.
    #[inline]
    pub fn side(&self, h: usize, v: usize) -> bool {
        self.sig[v].get(h)
    }

    #[inline]
    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.sig[x].hamming(&self.sig[y])
    }

    pub fn separating_bits(&self, x: usize, y: usize) -> Bits {
        self.sig[x].xor(&self.sig[y])
    }

    pub fn separating_hyperplanes(&self, x: usize, y: usize) -> Vec<usize> {
        self.separating_bits(x, y).ones().collect()
    }

    #[inline]
    pub fn transverse(&self, a: usize, b: usize) -> bool {
        self.transverse[a].get(b)
    }

    pub fn transverse_set(&self, a: usize) -> &Bits {
        &self.transverse[a]
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// A vertex on the carrier of `h`.
    pub fn carrier_vertex(&self, h: usize) -> usize {
        self.rep[h] as usize
    }

    /// Side of `j` containing hyperplane `k`; meaningful when the two are disjoint.
    pub fn side_of_hyperplane(&self, j: usize, k: usize) -> bool {
        let e = self.edges[self.hyp_edges[k][0] as usize];
        // of the two endpoints, one lies on each side of k but both on the same side of j
        self.sig[e[0] as usize].get(j)
    }

    pub fn hyperplane_edges(&self, h: usize) -> impl Iterator<Item = [usize; 2]> + '_ {
        self.hyp_edges[h]
            .iter()
            .map(|&e| self.edges[e as usize])
            .map(|[a, b]| [a as usize, b as usize])
    }

    pub fn carrier(&self, h: usize) -> Vec<usize> {
        let mut c: Vec<usize> = self.hyperplane_edges(h).flatten().collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    pub fn carrier_bits(&self, h: usize) -> Bits {
        Bits::from_indices(self.num_vertices(), self.hyperplane_edges(h).flatten())
    }

    pub fn halfspace(&self, h: usize, plus: bool) -> Vec<usize> {
        (0..self.num_vertices())
            .filter(|&v| self.sig[v].get(h) == plus)
            .collect()
    }

    pub fn hyperplane(&self, h: usize) -> Hyperplane {
        Hyperplane {
            id: h,
            edges: self.hyperplane_edges(h).collect(),
            halfspace_plus: self.halfspace(h, true),
            halfspace_minus: self.halfspace(h, false),
            carrier: self.carrier(h),
        }
    }

    pub fn bfs(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.num_vertices()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u] + 1;
            for &(w, _) in &self.adj[u] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = d;
                    queue.push_back(w as usize);
                }
            }
        }
        dist
    }

    /// How the median property was certified at construction time.
    pub fn certificate(&self) -> &MedianReport {
        &self.certificate
    }

    /// Checks medians of vertex triples through signatures: the majority
    /// signature must be a vertex, and ℓ¹ must agree with graph distance.
    /// Exhaustive under the triple budget, sampled above it unless
    /// `allow_sampling` is false, in which case the construction certificate
    /// is returned.
    pub fn verify_median(&self, allow_sampling: bool) -> MedianReport {
        let n = self.num_vertices();
        let adj: Vec<Vec<u32>> = self
            .adj
            .iter()
            .map(|l| l.iter().map(|&(w, _)| w).collect())
            .collect();
        let samples = if n <= FULL_BFS_VERTICES { n } else { 16 };
        if let Err((x, y)) = l1_matches_bfs(&adj, &self.sig, samples) {
            return MedianReport {
                ok: false,
                method: CheckMethod::Sampled,
                triples_checked: 0,
                violation: None,
                detail: Some(format!("ℓ¹ differs from graph distance for ({x}, {y})")),
            };
        }
        let check = |x: usize, y: usize, z: usize| {
            let m = Bits::majority(&self.sig[x], &self.sig[y], &self.sig[z]);
            self.index.contains_key(&m)
        };
        let fail = |t: [usize; 3], checked: u64, method| MedianReport {
            ok: false,
            method,
            triples_checked: checked,
            violation: Some((t, 0)),
            detail: None,
        };
        if triples(n) <= EXHAUSTIVE_TRIPLES {
            let mut checked = 0;
            for x in 0..n {
                for y in x + 1..n {
                    for z in y + 1..n {
                        checked += 1;
                        if !check(x, y, z) {
                            return fail([x, y, z], checked, CheckMethod::Exhaustive);
                        }
                    }
                }
            }
            return MedianReport {
                ok: true,
                method: CheckMethod::Exhaustive,
                triples_checked: checked,
                violation: None,
                detail: None,
            };
        }
        if !allow_sampling {
            return self.certificate.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let budget = EXHAUSTIVE_TRIPLES;
        for checked in 1..=budget {
            let t = [
                rng.random_range(0..n),
                rng.random_range(0..n),
                rng.random_range(0..n),
            ];
            if !check(t[0], t[1], t[2]) {
                return fail(t, checked, CheckMethod::Sampled);
            }
        }
        MedianReport {
            ok: true,
            method: CheckMethod::Sampled,
            triples_checked: budget,
            violation: None,
            detail: None,
        }
    }

    /// Median of three vertices: the coordinatewise majority of signatures.
    pub fn median(&self, x: usize, y: usize, z: usize) -> usize {
        let m = Bits::majority(&self.sig[x], &self.sig[y], &self.sig[z]);
        self.index[&m] as usize
    }

    /// Hyperplanes dual to edges at `v`.
    pub fn hyperplanes_at(&self, v: usize) -> Vec<usize> {
        self.adj[v].iter().map(|&(_, h)| h as usize).collect()
    }
}

fn link_clique_number(nb: &[u32], squares: &[(u32, u32, u32)]) -> usize {
    let k = nb.len();
    if k == 0 {
        return 0;
    }
    let pos = |x: u32| nb.binary_search(&x).expect("neighbour");
    let mut link = vec![0u64; k];
    let mut big = k > 64;
    for &(a, b, _) in squares {
        let (i, j) = (pos(a), pos(b));
        if i < 64 && j < 64 {
            link[i] |= 1 << j;
            link[j] |= 1 << i;
        } else {
            big = true;
        }
    }
    if big {
        // degrees above 64 do not occur in desk-scale inputs; fall back to 1 + any square
        return if squares.is_empty() { 1 } else { 2 };
    }
    fn grow(link: &[u64], cand: u64, size: usize, best: &mut usize) {
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        if cand == 0 {
            *best = size;
            return;
        }
        let i = cand.trailing_zeros() as usize;
        grow(link, cand & link[i], size + 1, best);
        grow(link, cand & !(1 << i), size, best);
    }
    let mut best = 1;
    let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    grow(&link, all, 0, &mut best);
    best
}

/// Compares Hamming distance with BFS distance from `samples` sources.
fn l1_matches_bfs(
    adj: &[Vec<u32>],
    sig: &[Bits],
    samples: usize,
) -> std::result::Result<(), (usize, usize)> {
    let n = adj.len();
    let sources: Vec<usize> = if samples >= n {
        (0..n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        (0..samples).map(|_| rng.random_range(0..n)).collect()
    };
    for s in sources {
        let dist = bfs_graph(adj, s);
        for v in 0..n {
            if dist[v] as usize != sig[s].hamming(&sig[v]) {
                return Err((s, v));
            }
        }
    }
    Ok(())
}
