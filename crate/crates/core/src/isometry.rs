//! Distance-preserving partial vertex maps, such as left multiplication on a
//! finite piece of a Cayley graph.

use crate::complex::CubeComplex;
use crate::error::{CubexError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialIsometry {
    map: Vec<Option<u32>>,
    pub label: Option<String>,
}

impl PartialIsometry {
    pub(crate) fn from_raw(map: Vec<Option<u32>>, label: Option<String>) -> Self {
        PartialIsometry { map, label }
    }

    pub fn identity(n: usize) -> Self {
        PartialIsometry {
            map: (0..n as u32).map(Some).collect(),
            label: Some("e".into()),
        }
    }

    /// Checks injectivity and distance preservation on the domain.
    pub fn new(x: &CubeComplex, map: Vec<Option<usize>>, label: Option<String>) -> Result<Self> {
        if map.len() != x.num_vertices() {
            return Err(CubexError::Input(
                "map length differs from vertex count".into(),
            ));
        }
        let p = PartialIsometry {
            map: map.into_iter().map(|m| m.map(|v| v as u32)).collect(),
            label,
        };
        p.validate(x)?;
        Ok(p)
    }

    pub fn validate(&self, x: &CubeComplex) -> Result<()> {
        let dom = self.domain();
        let mut images: Vec<usize> = dom.iter().map(|&v| self.map[v].unwrap() as usize).collect();
        if images.iter().any(|&v| v >= x.num_vertices()) {
            return Err(CubexError::Input("image outside the complex".into()));
        }
        images.sort_unstable();
        if images.windows(2).any(|w| w[0] == w[1]) {
            return Err(CubexError::InvariantViolation(
                "map is not injective".into(),
            ));
        }
        for (i, &u) in dom.iter().enumerate() {
            for &v in &dom[i + 1..] {
                let (gu, gv) = (self.map[u].unwrap() as usize, self.map[v].unwrap() as usize);
                if x.distance(u, v) != x.distance(gu, gv) {
                    return Err(CubexError::InvariantViolation(format!(
                        "distance between {u} and {v} not preserved"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn apply(&self, v: usize) -> Option<usize> {
        self.map[v].map(|w| w as usize)
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.map.len())
            .filter(|&v| self.map[v].is_some())
            .collect()
    }

    pub fn in_domain(&self, v: usize) -> bool {
        self.map[v].is_some()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PartialIsometry) -> PartialIsometry {
        let map = other
            .map
            .iter()
            .map(|m| m.and_then(|w| self.map[w as usize]))
            .collect();
        let label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => Some(format!("{a} * {b}")),
            _ => None,
        };
        PartialIsometry { map, label }
    }

    pub fn inverse(&self) -> PartialIsometry {
        let mut map = vec![None; self.map.len()];
        for (v, m) in self.map.iter().enumerate() {
            if let Some(w) = m {
                map[*w as usize] = Some(v as u32);
            }
        }
        PartialIsometry {
            map,
            label: self.label.as_ref().map(|l| format!("({l})^-1")),
        }
    }

    pub fn power(&self, k: i64) -> PartialIsometry {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = PartialIsometry::identity(self.map.len());
        for _ in 0..k.unsigned_abs() {
            out = base.compose(&out);
        }
        out.label = self.label.as_ref().map(|l| format!("({l})^{k}"));
        out
    }

    /// True when every vertex of the domain is fixed.
    pub fn is_identity_on_domain(&self) -> bool {
        self.map
            .iter()
            .enumerate()
            .all(|(v, m)| m.is_none_or(|w| w as usize == v))
    }

    /// Image of a halfspace `(h, side)`: the hyperplane dual to the image of a
    /// dual edge with both ends in the domain, and the side of the image of the
    /// endpoint on `side`. None when no dual edge lies in the domain or when
    /// the images disagree.
    pub fn halfspace_image(&self, x: &CubeComplex, h: usize, side: bool) -> Option<(usize, bool)> {
        let mut image: Option<(usize, bool)> = None;
        for [a, b] in x.hyperplane_edges(h) {
            let (Some(ga), Some(gb)) = (self.apply(a), self.apply(b)) else {
                continue;
            };
            let gh = x.edge_between(ga, gb)?;
            let on_side = if x.side(h, a) == side { ga } else { gb };
            let img = (gh, x.side(gh, on_side));
            match image {
                None => image = Some(img),
                Some(prev) if prev != img => return None,
                _ => {}
            }
        }
        image
    }

    pub fn hyperplane_image(&self, x: &CubeComplex, h: usize) -> Option<usize> {
        self.halfspace_image(x, h, true).map(|(g, _)| g)
    }
}

/// All automorphisms of a small complex, found by backtracking over vertex
/// images with distance checks. Intended for complexes with a few dozen vertices.
pub fn symmetry_group(x: &CubeComplex, limit: usize) -> Vec<PartialIsometry> {
    let n = x.num_vertices();
    let dist: Vec<Vec<usize>> = (0..n)
        .map(|u| (0..n).map(|v| x.distance(u, v)).collect())
        .collect();
    let deg: Vec<usize> = (0..n).map(|v| x.degree(v)).collect();
    let mut out = Vec::new();
    let mut img = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        v: usize,
        n: usize,
        dist: &[Vec<usize>],
        deg: &[usize],
        img: &mut [usize],
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if v == n {
            out.push(img.to_vec());
            return;
        }
        for w in 0..n {
            if used[w] || deg[w] != deg[v] {
                continue;
            }
            if (0..v).all(|u| dist[img[u]][w] == dist[u][v]) {
                img[v] = w;
                used[w] = true;
                go(v + 1, n, dist, deg, img, used, out, limit);
                used[w] = false;
            }
        }
    }
    let mut maps = Vec::new();
    go(0, n, &dist, &deg, &mut img, &mut used, &mut maps, limit);
    for (i, m) in maps.into_iter().enumerate() {
        out.push(PartialIsometry {
            map: m.into_iter().map(|w| Some(w as u32)).collect(),
            label: Some(format!("sym{i}")),
        });
    }
    out
}
