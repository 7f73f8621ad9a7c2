//! Plain finite graphs: defining graphs Γ and auxiliary graphs over hyperplanes.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{CubexError, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DefiningGraphJson {
    pub labels: Vec<String>,
    pub edges: Vec<[usize; 2]>,
}

/// A finite simple graph with labelled vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningGraph {
    labels: Vec<String>,
    adj: Vec<Vec<usize>>,
}

impl DefiningGraph {
    pub fn new(labels: Vec<String>, edges: &[[usize; 2]]) -> Result<Self> {
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        for &[a, b] in edges {
            if a >= n || b >= n {
                return Err(CubexError::Input(format!("edge [{a}, {b}] out of range")));
            }
            if a == b {
                return Err(CubexError::Input(format!("loop at vertex {a}")));
            }
            if adj[a].contains(&b) {
                return Err(CubexError::Input(format!("multiple edge [{a}, {b}]")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        Ok(DefiningGraph { labels, adj })
    }

    /// Vertices labelled `0..n`.
    pub fn unlabelled(n: usize, edges: &[[usize; 2]]) -> Result<Self> {
        DefiningGraph::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn empty(n: usize) -> Self {
        DefiningGraph::unlabelled(n, &[]).expect("valid")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<[usize; 2]> = (1..n).map(|i| [i - 1, i]).collect();
        DefiningGraph::unlabelled(n, &edges).expect("valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let edges: Vec<[usize; 2]> = (0..n).map(|i| [i, (i + 1) % n]).collect();
        DefiningGraph::unlabelled(n, &edges).expect("valid")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push([a, b]);
            }
        }
        DefiningGraph::unlabelled(n, &edges).expect("valid")
    }

    /// Star with `arms` arms of `len` edges each; the centre is vertex 0.
    pub fn star(arms: usize, len: usize) -> Self {
        let mut edges = Vec::new();
        let mut next = 1;
        for _ in 0..arms {
            let mut prev = 0;
            for _ in 0..len {
                edges.push([prev, next]);
                prev = next;
                next += 1;
            }
        }
        DefiningGraph::unlabelled(next, &edges).expect("valid")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let g: DefiningGraphJson = serde_json::from_str(s)?;
        DefiningGraph::new(g.labels, &g.edges)
    }

    pub fn to_json(&self) -> DefiningGraphJson {
        DefiningGraphJson {
            labels: self.labels.clone(),
            edges: self.edges(),
        }
    }

    /// Reads the undirected subset of DOT: `graph name { a; a -- b; b -- c -- d; }`.
    pub fn from_dot(s: &str) -> Result<Self> {
        let open = s
            .find('{')
            .ok_or_else(|| CubexError::Input("DOT: missing '{'".into()))?;
        let close = s
            .rfind('}')
            .ok_or_else(|| CubexError::Input("DOT: missing '}'".into()))?;
        let head = s[..open].trim();
        if !head.starts_with("graph") && !head.starts_with("strict graph") {
            return Err(CubexError::Input(
                "DOT: only undirected graphs are supported".into(),
            ));
        }
        let mut labels: Vec<String> = Vec::new();
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut id_of = |name: &str, labels: &mut Vec<String>| -> usize {
            *ids.entry(name.to_string()).or_insert_with(|| {
                labels.push(name.to_string());
                labels.len() - 1
            })
        };
        for stmt in s[open + 1..close].split([';', '\n']) {
            let stmt = match stmt.find('[') {
                Some(i) => &stmt[..i],
                None => stmt,
            };
            let stmt = stmt.trim();
            if stmt.is_empty() || stmt.starts_with("//") || stmt.contains('=') {
                continue;
            }
            let names: Vec<&str> = stmt
                .split("--")
                .map(|t| t.trim().trim_matches('"'))
                .collect();
            if names.iter().any(|t| t.is_empty()) {
                return Err(CubexError::Input(format!(
                    "DOT: malformed statement '{stmt}'"
                )));
            }
            let nodes: Vec<usize> = names.iter().map(|t| id_of(t, &mut labels)).collect();
            for w in nodes.windows(2) {
                let e = [w[0].min(w[1]), w[0].max(w[1])];
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
        DefiningGraph::new(labels, &edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut out = Vec::new();
        for (a, l) in self.adj.iter().enumerate() {
            for &b in l {
                if a < b {
                    out.push([a, b]);
                }
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        components(&self.adj)
    }

    pub fn complement(&self) -> DefiningGraph {
        let n = self.num_vertices();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !self.adjacent(a, b) {
                    edges.push([a, b]);
                }
            }
        }
        DefiningGraph::new(self.labels.clone(), &edges).expect("valid")
    }

    /// Induced subgraph on `verts` (in the given order).
    pub fn induced(&self, verts: &[usize]) -> DefiningGraph {
        let mut edges = Vec::new();
        for (i, &a) in verts.iter().enumerate() {
            for (j, &b) in verts.iter().enumerate().skip(i + 1) {
                if self.adjacent(a, b) {
                    edges.push([i, j]);
                }
            }
        }
        let labels = verts.iter().map(|&v| self.labels[v].clone()).collect();
        DefiningGraph::new(labels, &edges).expect("valid")
    }

    /// Induced 4-cycles as (a, b, c, d) in cyclic order, each listed once
    /// with `a` minimal and `b < d`.
    pub fn induced_squares(&self) -> Vec<[usize; 4]> {
        let n = self.num_vertices();
        let mut out = Vec::new();
        for a in 0..n {
            for c in a + 1..n {
                if self.adjacent(a, c) {
                    continue;
                }
                let common: Vec<usize> = self.adj[a]
                    .iter()
                    .copied()
                    .filter(|&x| x > a && self.adjacent(c, x))
                    .collect();
                for i in 0..common.len() {
                    for j in i + 1..common.len() {
                        let (b, d) = (common[i], common[j]);
                        if !self.adjacent(b, d) {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        // a square is found once per diagonal whose minimum is the global minimum
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_square_free(&self) -> bool {
        self.induced_squares().is_empty()
    }

    /// Length of the shortest cycle, if any.
    pub fn girth(&self) -> Option<usize> {
        let n = self.num_vertices();
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        q.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Replaces every edge by a path of `k` edges.
    pub fn subdivide(&self, k: usize) -> DefiningGraph {
        assert!(k >= 1);
        let mut labels = self.labels.clone();
        let mut edges = Vec::new();
        for [a, b] in self.edges() {
            let mut prev = a;
            for i in 1..k {
                labels.push(format!("{}-{}.{}", self.labels[a], self.labels[b], i));
                let v = labels.len() - 1;
                edges.push([prev, v]);
                prev = v;
            }
            edges.push([prev, b]);
        }
        DefiningGraph::new(labels, &edges).expect("valid")
    }

    /// Vertex permutation invariant: the lexicographically least edge list.
    pub fn canonical_form(&self) -> Vec<[usize; 2]> {
        let n = self.num_vertices();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Vec<[usize; 2]>> = None;
        loop {
            let mut e: Vec<[usize; 2]> = self
                .edges()
                .iter()
                .map(|&[a, b]| {
                    let (x, y) = (perm[a], perm[b]);
                    [x.min(y), x.max(y)]
                })
                .collect();
            e.sort_unstable();
            if best.as_ref().is_none_or(|b| e < *b) {
                best = Some(e);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        best.unwrap_or_default()
    }

    /// All graphs on exactly `n` vertices up to isomorphism (n ≤ 6).
    pub fn all_up_to_iso(n: usize) -> Vec<DefiningGraph> {
        assert!(n <= 6, "isomorphism enumeration is brute force");
        let pairs: Vec<[usize; 2]> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| [a, b]))
            .collect();
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<[usize; 2]> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = DefiningGraph::unlabelled(n, &edges).expect("valid");
            if seen.insert(g.canonical_form()) {
                out.push(g);
            }
        }
        out
    }
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum AuxKind {
    Crossing,
    Contact,
    Coneoff,
    Defining,
}

/// An auxiliary graph whose nodes map back to parent objects by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxGraph {
    pub kind: AuxKind,
    labels: Vec<String>,
    adj: Vec<Vec<usize>>,
}

impl AuxGraph {
    pub fn new(
        kind: AuxKind,
        labels: Vec<String>,
        edges: impl IntoIterator<Item = [usize; 2]>,
    ) -> Self {
        let mut adj = vec![Vec::new(); labels.len()];
        for [a, b] in edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        AuxGraph { kind, labels, adj }
    }

    pub fn from_defining(g: &DefiningGraph) -> Self {
        AuxGraph::new(AuxKind::Defining, g.labels().to_vec(), g.edges())
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut out = Vec::new();
        for (a, l) in self.adj.iter().enumerate() {
            for &b in l {
                if a < b {
                    out.push([a, b]);
                }
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn bfs(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_nodes()];
        dist[src] = 0;
        let mut q = VecDeque::from([src]);
        while let Some(u) = q.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        components(&self.adj)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Diameter, or None when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.num_nodes() {
            let d = self.bfs(s);
            if d.contains(&usize::MAX) {
                return None;
            }
            best = best.max(d.into_iter().max().unwrap_or(0));
        }
        Some(best)
    }

    /// DOT export with nodes in id order and edges sorted.
    pub fn to_dot(&self) -> String {
        let name = match self.kind {
            AuxKind::Crossing => "crossing",
            AuxKind::Contact => "contact",
            AuxKind::Coneoff => "coneoff",
            AuxKind::Defining => "defining",
        };
        let mut s = format!("graph {name} {{\n");
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(s, "  {i} [label=\"{l}\"];");
        }
        for [a, b] in self.edges() {
            let _ = writeln!(s, "  {a} -- {b};");
        }
        s.push_str("}\n");
        s
    }
}
