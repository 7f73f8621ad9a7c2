//! Contracting convex subcomplexes: rectangle, grid and join constants, the
//! ball definition, hull radii, Morse witnesses and the RACG graph criterion.

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::Bits;
use crate::complex::CubeComplex;
use crate::error::{CubexError, Result};
use crate::graph::DefiningGraph;
use crate::hyperplanes::{
    max_constrained_family, ramsey_bound, FamilyKind, HyperplanePairFamily, DEFAULT_SEARCH_NODES,
};
use crate::median::{
    convex_hull, cycle_rectangle, interval, rectangle_from_sequences, ConvexSubcomplex,
    FlatRectangle,
};
use crate::search_budget;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RectConstant {
    pub value: usize,
    /// A rectangle with bottom row in Y, meeting Y only there, of thickness `value`.
    pub witness: Option<FlatRectangle>,
}

/// Groups of `sep` closed under non-transversality, each tagged with whether
/// it holds a hyperplane not crossing Y.
fn disjointness_groups(x: &CubeComplex, sep: &[usize]) -> Vec<Vec<usize>> {
    let k = sep.len();
    let mut slot = vec![usize::MAX; k];
    let mut groups = Vec::new();
    for s in 0..k {
        if slot[s] != usize::MAX {
            continue;
        }
        slot[s] = groups.len();
        let mut g = vec![sep[s]];
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..k {
                if slot[j] == usize::MAX && !x.transverse(sep[i], sep[j]) {
                    slot[j] = groups.len();
                    g.push(sep[j]);
                    stack.push(j);
                }
            }
        }
        groups.push(g);
    }
    groups
}

/// Best split of the hyperplanes separating `a` ∈ Y from `c` into a bottom
/// side H ⊆ 𝓗(Y) and a vertical side V whose first hyperplane leaves Y.
fn split_for(
    x: &CubeComplex,
    y: &ConvexSubcomplex,
    a: usize,
    c: usize,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let sep = x.separating_hyperplanes(a, c);
    let groups = disjointness_groups(x, &sep);
    let forced: Vec<bool> = groups
        .iter()
        .map(|g| g.iter().any(|&h| !y.crosses(h)))
        .collect();
    let at_a = x.hyperplanes_at(a);
    // the first vertical step must leave Y
    let starts_out = groups
        .iter()
        .zip(&forced)
        .any(|(g, &f)| f && g.iter().any(|h| !y.crosses(*h) && at_a.contains(h)));
    if !starts_out {
        return None;
    }
    let base: usize = groups
        .iter()
        .zip(&forced)
        .filter(|(_, &f)| f)
        .map(|(g, _)| g.len())
        .sum();
    let optional: Vec<&Vec<usize>> = groups
        .iter()
        .zip(&forced)
        .filter(|(_, &f)| !f)
        .map(|(g, _)| g)
        .collect();
    let total: usize = optional.iter().map(|g| g.len()).sum();
    // choose[i][s]: some subset of the first i optional groups has size s
    let mut reach = vec![vec![false; total + 1]; optional.len() + 1];
    reach[0][0] = true;
    for (i, g) in optional.iter().enumerate() {
        for s in 0..=total {
            if reach[i][s] {
                reach[i + 1][s] = true;
                reach[i + 1][s + g.len()] = true;
            }
        }
    }
    let best_h = (0..=total)
        .filter(|&s| reach[optional.len()][s])
        .max_by_key(|&s| (s.min(base + total - s), s))?;
    let mut h = Vec::new();
    let mut v = Vec::new();
    let mut s = best_h;
    for i in (0..optional.len()).rev() {
        if s >= optional[i].len() && reach[i][s - optional[i].len()] {
            s -= optional[i].len();
            h.extend_from_slice(optional[i]);
        } else {
            v.extend_from_slice(optional[i]);
        }
    }
    for (g, &f) in groups.iter().zip(&forced) {
        if f {
            v.extend_from_slice(g);
        }
    }
    Some((h, v))
}

/// Hyperplanes of `hs` in an order realising a geodesic from `a`.
fn order_from(x: &CubeComplex, a: usize, hs: &[usize]) -> Vec<usize> {
    let mut rest: Vec<usize> = hs.to_vec();
    rest.sort_by_key(|&h| {
        // number of members of hs separating a from h
        hs.iter()
            .filter(|&&k| {
                k != h && !x.transverse(k, h) && x.side(k, a) != x.side_of_hyperplane(k, h)
            })
            .count()
    });
    rest
}

/// Largest thickness of a flat rectangle with bottom row in Y meeting Y only
/// in that row.
pub fn contraction_constant_rect(x: &CubeComplex, y: &ConvexSubcomplex) -> Result<RectConstant> {
    let n = x.num_vertices();
    let best = y
        .members()
        .par_iter()
        .filter_map(|&a| {
            (0..n)
                .filter(|&c| !y.contains(c))
                .filter_map(|c| split_for(x, y, a, c).map(|(h, v)| (h.len().min(v.len()), a, c)))
                .max_by_key(|&(t, a, c)| (t, std::cmp::Reverse((a, c))))
        })
        .max_by_key(|&(t, a, c)| (t, std::cmp::Reverse((a, c))));
    let Some((value, a, c)) = best else {
        return Ok(RectConstant {
            value: 0,
            witness: None,
        });
    };
    let (h, v) = split_for(x, y, a, c).expect("split found above");
    let h = order_from(x, a, &h);
    let mut v = order_from(x, a, &v);
    // lead with a vertical hyperplane leaving Y
    let at_a = x.hyperplanes_at(a);
    let lead = v
        .iter()
        .position(|k| !y.crosses(*k) && at_a.contains(k))
        .expect("split guarantees a leaving step");
    let first = v.remove(lead);
    v.insert(0, first);
    let rect = rectangle_from_sequences(x, a, &h, &v)
        .ok_or_else(|| CubexError::InvariantViolation("split does not span a rectangle".into()))?;
    Ok(RectConstant {
        value,
        witness: Some(rect),
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GridConstant {
    pub value: usize,
    pub family: HyperplanePairFamily,
}

fn constrained(x: &CubeComplex, y: &ConvexSubcomplex, kind: FamilyKind) -> Result<GridConstant> {
    let h_cands: Vec<usize> = (0..x.num_hyperplanes())
        .filter(|&h| !y.crosses(h))
        .collect();
    let pool: Bits = y.crossing_set().clone();
    let s = max_constrained_family(
        x,
        kind,
        &h_cands,
        &pool,
        search_budget(DEFAULT_SEARCH_NODES),
    );
    if !s.exact {
        return Err(CubexError::Budget {
            lower_bound: s.family.thinness(),
        });
    }
    Ok(GridConstant {
        value: s.family.thinness(),
        family: s.family,
    })
}

/// Thickest grid (𝓗, 𝓥) with 𝓗 ∩ 𝓗(Y) = ∅ and 𝓥 ⊆ 𝓗(Y).
pub fn contraction_constant_grid(x: &CubeComplex, y: &ConvexSubcomplex) -> Result<GridConstant> {
    constrained(x, y, FamilyKind::Grid)
}

/// As [`contraction_constant_grid`] with joins in place of grids.
pub fn contraction_constant_join(x: &CubeComplex, y: &ConvexSubcomplex) -> Result<GridConstant> {
    constrained(x, y, FamilyKind::Join)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Ball {
    pub center: usize,
    pub radius: usize,
    pub projection_diameter: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BallReport {
    pub holds: bool,
    /// Ball disjoint from Y with the largest projection diameter.
    pub worst: Option<Ball>,
}

/// Checks that every ball disjoint from Y projects to a set of diameter ≤ K.
/// Projections grow with the radius, so each center is tested at the largest
/// radius keeping the ball off Y.
pub fn contracting_ball_check(x: &CubeComplex, y: &ConvexSubcomplex, k: usize) -> BallReport {
    let n = x.num_vertices();
    let worst = (0..n)
        .into_par_iter()
        .filter(|&c| !y.contains(c))
        .map(|c| {
            let radius = y.distance_to(x, c) - 1;
            let dist = x.bfs(c);
            let mut proj: Vec<usize> = (0..n)
                .filter(|&v| (dist[v] as usize) <= radius)
                .map(|v| y.project(x, v))
                .collect();
            proj.sort_unstable();
            proj.dedup();
            let mut diam = 0;
            for (i, &p) in proj.iter().enumerate() {
                for &q in &proj[i + 1..] {
                    diam = diam.max(x.distance(p, q));
                }
            }
            Ball {
                center: c,
                radius,
                projection_diameter: diam,
            }
        })
        .max_by_key(|b| (b.projection_diameter, std::cmp::Reverse(b.center)));
    BallReport {
        holds: worst.as_ref().is_none_or(|b| b.projection_diameter <= k),
        worst,
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HullRadius {
    /// Least K such that every geodesic between points of S stays K-close to S.
    pub measured_k: usize,
    /// Ram(max(dim + 1, K)).
    pub bound: u64,
    /// Largest distance from a hull vertex to S.
    pub hull_radius: usize,
    pub holds: bool,
}

fn distance_to_set(dist_from_s: &[u32], v: usize) -> usize {
    dist_from_s[v] as usize
}

/// Multi-source BFS distances from a vertex set.
fn set_distances(x: &CubeComplex, s: &[usize]) -> Vec<u32> {
    let mut d = vec![u32::MAX; x.num_vertices()];
    let mut queue = std::collections::VecDeque::new();
    for &v in s {
        d[v] = 0;
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        for (w, _) in x.neighbors(u) {
            if d[w] == u32::MAX {
                d[w] = d[u] + 1;
                queue.push_back(w);
            }
        }
    }
    d
}

/// Measures the quasiconvexity constant of S, rejects a smaller requested K,
/// and compares the convex hull of S with the Ramsey bound.
pub fn hull_radius_check(x: &CubeComplex, s: &[usize], k: usize) -> Result<HullRadius> {
    if s.is_empty() {
        return Err(CubexError::EmptySubcomplex);
    }
    let ds = set_distances(x, s);
    let mut measured_k = 0;
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i + 1..] {
            for z in interval(x, a, b) {
                measured_k = measured_k.max(distance_to_set(&ds, z));
            }
        }
    }
    if k < measured_k {
        return Err(CubexError::NotQuasiconvex {
            requested: k,
            measured: measured_k,
        });
    }
    let bound = ramsey_bound((x.dimension() + 1).max(k));
    let hull = convex_hull(x, s)?;
    let hull_radius = hull
        .members()
        .iter()
        .map(|&v| distance_to_set(&ds, v))
        .max()
        .unwrap_or(0);
    Ok(HullRadius {
        measured_k,
        bound,
        hull_radius,
        holds: hull_radius as u64 <= bound,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SpecialMorse {
    pub morse: bool,
    /// An induced square (in Γ's indices) with an opposite pair in Λ but not contained in Λ.
    pub square: Option<[usize; 4]>,
}

/// Graph criterion for Λ to generate a Morse special subgroup of the
/// right-angled Coxeter group of Γ. `lambda` is a vertex subset of Γ.
pub fn racg_special_morse(gamma: &DefiningGraph, lambda: &[usize]) -> Result<SpecialMorse> {
    let n = gamma.num_vertices();
    if lambda.iter().any(|&v| v >= n) {
        return Err(CubexError::Input("vertex outside Γ".into()));
    }
    let mut inside = vec![false; n];
    for &v in lambda {
        inside[v] = true;
    }
    let square = gamma.induced_squares().into_iter().find(|sq| {
        let opposite = (inside[sq[0]] && inside[sq[2]]) || (inside[sq[1]] && inside[sq[3]]);
        opposite && !sq.iter().all(|&v| inside[v])
    });
    Ok(SpecialMorse {
        morse: square.is_none(),
        square,
    })
}

/// As [`racg_special_morse`] with Λ given as a graph on a subset of Γ's
/// labels; it must be the subgraph induced by those labels.
pub fn racg_special_morse_subgraph(
    gamma: &DefiningGraph,
    lambda: &DefiningGraph,
) -> Result<SpecialMorse> {
    let idx: Vec<usize> = lambda
        .labels()
        .iter()
        .map(|l| gamma.label_index(l).ok_or(CubexError::NotInduced))
        .collect::<Result<_>>()?;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if lambda.adjacent(a, b) != gamma.adjacent(idx[a], idx[b]) {
                return Err(CubexError::NotInduced);
            }
        }
    }
    racg_special_morse(gamma, &idx)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MorseWitness {
    /// Vertex path, endpoints in Y.
    pub path: Vec<usize>,
    /// Largest distance from a path vertex to Y.
    pub height: usize,
    /// Rectangle with bottom row in Y that the path runs around.
    pub rectangle: Option<FlatRectangle>,
}

/// Extreme member of a nested disjoint family: the one with all others on one side.
fn extreme(x: &CubeComplex, fam: &[usize], key: impl Fn(usize) -> usize) -> usize {
    fam.iter()
        .copied()
        .filter(|&h| {
            let mut sides = fam
                .iter()
                .filter(|&&k| k != h)
                .map(|&k| x.side_of_hyperplane(h, k));
            match sides.next() {
                None => true,
                Some(s) => sides.all(|t| t == s),
            }
        })
        .max_by_key(|&h| (key(h), std::cmp::Reverse(h)))
        .expect("nested family has extremes")
}

fn halfspace_sub(x: &CubeComplex, h: usize, side: bool) -> Result<ConvexSubcomplex> {
    let free = Bits::from_indices(
        x.num_hyperplanes(),
        (0..x.num_hyperplanes()).filter(|&k| k != h),
    );
    let mut s = Bits::new(x.num_hyperplanes());
    if side {
        s.set(h, true);
    }
    ConvexSubcomplex::from_constraints(x, &free, &s)
}

/// Checks d(γ(s), γ(t)) ≥ |s − t| / 3 along a vertex path.
fn is_third_quasigeodesic(x: &CubeComplex, path: &[usize]) -> bool {
    (0..path.len()).all(|s| (s + 1..path.len()).all(|t| 3 * x.distance(path[s], path[t]) >= t - s))
}

/// Cuts a rectangle with bottom row in Y to a square-or-wider one and walks
/// up its left side, across the top and down its right side.
fn pi_path(x: &CubeComplex, y: &ConvexSubcomplex, full: &FlatRectangle) -> MorseWitness {
    // a Π no taller than wide stays a (1/3, 0)-quasigeodesic
    let q = full.q.min(full.p);
    let rect = FlatRectangle {
        p: full.p,
        q,
        embedding: (0..=full.p)
            .flat_map(|i| (0..=q).map(move |j| full.at(i, j)))
            .collect(),
    };
    let mut path = rect.left();
    path.extend((1..=rect.p).map(|i| rect.at(i, rect.q)));
    path.extend((0..rect.q).rev().map(|j| rect.at(rect.p, j)));
    let height = path.iter().map(|&v| y.distance_to(x, v)).max().unwrap_or(0);
    MorseWitness {
        path,
        height,
        rectangle: Some(rect),
    }
}

fn certified(x: &CubeComplex, y: &ConvexSubcomplex, w: &MorseWitness, n: usize) -> bool {
    y.contains(w.path[0])
        && y.contains(*w.path.last().expect("nonempty"))
        && w.height >= n
        && is_third_quasigeodesic(x, &w.path)
}

/// Rectangle from the cycle Y, 𝓥-halfspace, far halfspace of `h_top`, 𝓥-halfspace.
fn grid_rectangle(
    x: &CubeComplex,
    y: &ConvexSubcomplex,
    fam: &HyperplanePairFamily,
    h_top: usize,
) -> Result<FlatRectangle> {
    let y_side = x.side(h_top, y.members()[0]);
    let top = halfspace_sub(x, h_top, !y_side)?;
    // 𝓥 ⊆ 𝓗(Y) is a chain; use both ends with their outer halfspaces
    let v_left = extreme(x, &fam.v_side, |h| usize::MAX - h);
    let v_right = fam
        .v_side
        .iter()
        .copied()
        .filter(|&v| v != v_left)
        .max_by_key(|&v| {
            fam.v_side
                .iter()
                .filter(|&&k| {
                    k != v
                        && k != v_left
                        && x.side_of_hyperplane(k, v) != x.side_of_hyperplane(k, v_left)
                })
                .count()
        })
        .unwrap_or(v_left);
    let (left, right) = if v_left == v_right {
        (
            halfspace_sub(x, v_left, false)?,
            halfspace_sub(x, v_left, true)?,
        )
    } else {
        (
            halfspace_sub(x, v_left, !x.side_of_hyperplane(v_left, v_right))?,
            halfspace_sub(x, v_right, !x.side_of_hyperplane(v_right, v_left))?,
        )
    };
    cycle_rectangle(x, y, &right, &top, &left)
}

/// Builds a Π-shaped path around a rectangle with bottom row in Y whose top
/// lies at distance ≥ n from Y, and certifies it is a (1/3, 0)-quasigeodesic.
///
/// The rectangle comes from the grid family when its 𝓗 side is nested far
/// enough away from Y, otherwise from the thickest rectangle on Y. A thick
/// grid alone does not force height n in a finite complex: n disjoint
/// hyperplanes next to Y on separate branches give a grid of thickness n
/// whose rectangles are one row tall.
pub fn morse_failure_witness(
    x: &CubeComplex,
    y: &ConvexSubcomplex,
    n: usize,
) -> Result<MorseWitness> {
    if n == 0 {
        let y0 = y.members()[0];
        let mut path = vec![y0];
        path.extend(
            x.neighbors(y0)
                .map(|(w, _)| w)
                .filter(|&w| y.contains(w))
                .min(),
        );
        return Ok(MorseWitness {
            path,
            height: 0,
            rectangle: None,
        });
    }
    let grid = contraction_constant_grid(x, y)?;
    if grid.value >= n {
        // 𝓗 avoids Y; members farther out give taller rectangles when 𝓗
        // is nested away from Y, but siblings may all sit next to it
        let dist_to_y = |h: usize| {
            x.carrier(h)
                .iter()
                .map(|&v| y.distance_to(x, v))
                .min()
                .unwrap_or(0)
        };
        let mut tops = grid.family.h_side.clone();
        tops.sort_by_key(|&h| (std::cmp::Reverse(dist_to_y(h)), h));
        for h_top in tops {
            let w = pi_path(x, y, &grid_rectangle(x, y, &grid.family, h_top)?);
            if certified(x, y, &w, n) {
                return Ok(w);
            }
        }
    }
    let rect = contraction_constant_rect(x, y)?;
    if let Some(full) = rect.witness.filter(|_| rect.value >= n) {
        let w = pi_path(x, y, &full);
        if certified(x, y, &w, n) {
            return Ok(w);
        }
    }
    Err(CubexError::NoThickGrid(n))
}
