//! Cayley graphs of right-angled Coxeter and Artin groups, truncated to the
//! convex hull of a word-length ball.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::close_convex;
use crate::complex::CubeComplex;
use crate::error::{CubexError, Result};
use crate::graph::DefiningGraph;
use crate::isometry::PartialIsometry;

pub const DEFAULT_VERTEX_BUDGET: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Coxeter,
    Artin,
}

/// Letter arithmetic for the two families. Coxeter letters are generator
/// indices; Artin letters are `2i` for a_i and `2i + 1` for its inverse.
#[derive(Clone, Debug)]
struct Alphabet {
    kind: GroupKind,
    commute: Vec<Vec<bool>>,
}

impl Alphabet {
    fn new(kind: GroupKind, gamma: &DefiningGraph) -> Self {
        let n = gamma.num_vertices();
        let commute = (0..n)
            .map(|a| (0..n).map(|b| a == b || gamma.adjacent(a, b)).collect())
            .collect();
        Alphabet { kind, commute }
    }

    fn letters(&self) -> u32 {
        let n = self.commute.len() as u32;
        match self.kind {
            GroupKind::Coxeter => n,
            GroupKind::Artin => 2 * n,
        }
    }

    #[inline]
    fn generator(&self, l: u32) -> usize {
        match self.kind {
            GroupKind::Coxeter => l as usize,
            GroupKind::Artin => (l / 2) as usize,
        }
    }

    #[inline]
    fn inverse(&self, l: u32) -> u32 {
        match self.kind {
            GroupKind::Coxeter => l,
            GroupKind::Artin => l ^ 1,
        }
    }

    #[inline]
    fn commutes(&self, a: u32, b: u32) -> bool {
        self.commute[self.generator(a)][self.generator(b)]
    }

    /// Right multiplication of a normal form by one letter.
    fn right_mul(&self, w: &[u32], s: u32) -> Vec<u32> {
        let g = self.generator(s);
        let mut out = w.to_vec();
        if let Some(p) = w.iter().rposition(|&l| self.generator(l) == g) {
            let free = w[p + 1..].iter().all(|&l| self.commutes(l, s));
            if free && w[p] == self.inverse(s) {
                out.remove(p);
                return self.normalize(out);
            }
        }
        out.push(s);
        self.normalize(out)
    }

    /// Lexicographically least representative of a reduced word under
    /// commutation of adjacent commuting letters.
    fn normalize(&self, mut w: Vec<u32>) -> Vec<u32> {
        let mut out = Vec::with_capacity(w.len());
        while !w.is_empty() {
            let mut best: Option<usize> = None;
            for i in 0..w.len() {
                let movable = w[..i].iter().all(|&l| l != w[i] && self.commutes(l, w[i]));
                if movable && best.is_none_or(|b| w[i] < w[b]) {
                    best = Some(i);
                }
            }
            let i = best.expect("first letter is always movable");
            out.push(w.remove(i));
        }
        out
    }

    fn multiply(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut w = a.to_vec();
        for &s in b {
            w = self.right_mul(&w, s);
        }
        w
    }

    fn invert(&self, a: &[u32]) -> Vec<u32> {
        let rev: Vec<u32> = a.iter().rev().map(|&l| self.inverse(l)).collect();
        self.normalize(rev)
    }
}

/// A finite convex piece of the Cayley graph with group words on its vertices.
#[derive(Clone, Debug)]
pub struct GroupBall {
    pub kind: GroupKind,
    pub gamma: DefiningGraph,
    pub radius: usize,
    pub complex: CubeComplex,
    words: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    alphabet: Alphabet,
}

pub fn racg_ball(gamma: &DefiningGraph, r: usize) -> Result<GroupBall> {
    group_ball(GroupKind::Coxeter, gamma, r, DEFAULT_VERTEX_BUDGET)
}

pub fn raag_ball(gamma: &DefiningGraph, r: usize) -> Result<GroupBall> {
    group_ball(GroupKind::Artin, gamma, r, DEFAULT_VERTEX_BUDGET)
}

impl GroupBall {
    pub fn build(kind: GroupKind, gamma: &DefiningGraph, r: usize, budget: usize) -> Result<Self> {
        group_ball(kind, gamma, r, budget)
    }

    pub fn num_vertices(&self) -> usize {
        self.words.len()
    }

    /// Normal form of the element at vertex `v`.
    pub fn word(&self, v: usize) -> &[u32] {
        &self.words[v]
    }

    pub fn vertex_of(&self, word: &[u32]) -> Option<usize> {
        let nf = self.alphabet.multiply(&[], word);
        self.index.get(&nf).copied()
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Vertex reached from the identity by one generator letter.
    pub fn generator_vertex(&self, gen: usize) -> usize {
        let l = match self.kind {
            GroupKind::Coxeter => gen as u32,
            GroupKind::Artin => 2 * gen as u32,
        };
        self.index[&vec![l]]
    }

    /// Vertices at word length at most the build radius.
    pub fn ball_vertices(&self) -> Vec<usize> {
        (0..self.words.len())
            .filter(|&v| self.words[v].len() <= self.radius)
            .collect()
    }

    pub fn format_word(&self, w: &[u32]) -> String {
        if w.is_empty() {
            return "e".into();
        }
        let labels = self.gamma.labels();
        w.iter()
            .map(|&l| match self.kind {
                GroupKind::Coxeter => labels[l as usize].clone(),
                GroupKind::Artin if l % 2 == 0 => labels[(l / 2) as usize].clone(),
                GroupKind::Artin => format!("{}^-1", labels[(l / 2) as usize]),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses space- or `*`-separated generator labels, with `^-1` or a
    /// trailing `'` for Artin inverses.
    pub fn parse_word(&self, s: &str) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '*') {
            if tok.is_empty() || tok == "e" {
                continue;
            }
            let (name, inv) = if let Some(t) = tok.strip_suffix("^-1") {
                (t, true)
            } else if let Some(t) = tok.strip_suffix('\'') {
                (t, true)
            } else {
                (tok, false)
            };
            let g = self
                .gamma
                .label_index(name)
                .ok_or_else(|| CubexError::Input(format!("unknown generator '{name}'")))?
                as u32;
            out.push(match self.kind {
                GroupKind::Coxeter => g,
                GroupKind::Artin => 2 * g + inv as u32,
            });
        }
        Ok(out)
    }

    /// Left multiplication by `g`, restricted to vertices whose image stays in the piece.
    pub fn left_translation(&self, g: &[u32]) -> PartialIsometry {
        let g = self.alphabet.multiply(&[], g);
        let map = self
            .words
            .iter()
            .map(|w| {
                let img = self.alphabet.multiply(&g, w);
                self.index.get(&img).map(|&v| v as u32)
            })
            .collect();
        PartialIsometry::from_raw(map, Some(self.format_word(&g)))
    }

    pub fn multiply(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        self.alphabet.multiply(a, b)
    }

    pub fn inverse(&self, a: &[u32]) -> Vec<u32> {
        self.alphabet.invert(a)
    }

    /// Vertices of the piece lying in the special subgroup generated by `gens`.
    pub fn special_subgroup_vertices(&self, gens: &[usize]) -> Vec<usize> {
        (0..self.words.len())
            .filter(|&v| {
                self.words[v]
                    .iter()
                    .all(|&l| gens.contains(&self.alphabet.generator(l)))
            })
            .collect()
    }
}

fn group_ball(
    kind: GroupKind,
    gamma: &DefiningGraph,
    r: usize,
    budget: usize,
) -> Result<GroupBall> {
    if r == 0 {
        return Err(CubexError::Input("radius must be at least 1".into()));
    }
    let alphabet = Alphabet::new(kind, gamma);
    let letters = alphabet.letters();
    let mut ball: Vec<Vec<u32>> = vec![Vec::new()];
    let mut seen: HashMap<Vec<u32>, ()> = HashMap::from([(Vec::new(), ())]);
    let mut frontier = vec![Vec::new()];
    for _ in 0..r {
        let mut next = Vec::new();
        for w in &frontier {
            for s in 0..letters {
                let v = alphabet.right_mul(w, s);
                if v.len() > w.len() && seen.insert(v.clone(), ()).is_none() {
                    if seen.len() > budget {
                        return Err(CubexError::RadiusTooLarge { budget });
                    }
                    next.push(v);
                }
            }
        }
        ball.extend(next.iter().cloned());
        frontier = next;
    }
    let hull = close_convex(
        ball,
        |w: &Vec<u32>| (0..letters).map(|s| alphabet.right_mul(w, s)).collect(),
        budget,
    )?;
    let mut words = hull;
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index: HashMap<Vec<u32>, usize> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let mut edges = Vec::new();
    for (i, w) in words.iter().enumerate() {
        for s in 0..letters {
            if let Some(&j) = index.get(&alphabet.right_mul(w, s)) {
                if i < j {
                    edges.push([i, j]);
                }
            }
        }
    }
    let complex = CubeComplex::from_graph(words.len(), &edges)?;
    Ok(GroupBall {
        kind,
        gamma: gamma.clone(),
        radius: r,
        complex,
        words,
        index,
        alphabet,
    })
}
