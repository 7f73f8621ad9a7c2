//! Crossing and contact graphs, quasi-tree checks, the δ_L metrics and the
//! finite checks around them: stability, isometry classification,
//! acylindricity on hyperplanes, cone-offs, relative hyperbolicity and
//! projection axioms.

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::CubeComplex;
use crate::error::{CubexError, Result};
use crate::graph::{AuxGraph, AuxKind};
use crate::hyperbolicity::{
    four_point_delta_from_matrix, link_diameters, longest_nested_chain, FourPointDelta, MetricSpec,
};
use crate::hyperplanes::{max_facing_free, skewers, SkewerWitness, DEFAULT_SEARCH_NODES};
use crate::isometry::PartialIsometry;
use crate::median::ConvexSubcomplex;
use crate::morse::contraction_constant_join;
use crate::search_budget;

fn hyperplane_labels(x: &CubeComplex) -> Vec<String> {
    (0..x.num_hyperplanes()).map(|h| h.to_string()).collect()
}

/// Hyperplanes as nodes, transverse pairs as edges.
pub fn crossing_graph(x: &CubeComplex) -> AuxGraph {
    let m = x.num_hyperplanes();
    let edges: Vec<[usize; 2]> = (0..m)
        .flat_map(|a| {
            x.transverse_set(a)
                .ones()
                .filter(move |&b| a < b)
                .map(move |b| [a, b])
        })
        .collect();
    AuxGraph::new(AuxKind::Crossing, hyperplane_labels(x), edges)
}

/// Hyperplanes as nodes, edges between hyperplanes whose carriers meet.
pub fn contact_graph(x: &CubeComplex) -> AuxGraph {
    let mut edges = Vec::new();
    for v in 0..x.num_vertices() {
        let hs = x.hyperplanes_at(v);
        for (i, &a) in hs.iter().enumerate() {
            for &b in &hs[i + 1..] {
                edges.push([a.min(b), a.max(b)]);
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    AuxGraph::new(AuxKind::Contact, hyperplane_labels(x), edges)
}

/// Cut vertices of the 1-skeleton, in increasing order.
pub fn articulation_points(x: &CubeComplex) -> Vec<usize> {
    let n = x.num_vertices();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut cut = vec![false; n];
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // iterative DFS: (vertex, parent, next neighbour index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut root_children = 0;
        while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
            let nb: Vec<usize> = x.neighbors(u).map(|(w, _)| w).collect();
            if *idx < nb.len() {
                let w = nb[*idx];
                *idx += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push((w, u, 0));
                } else {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[u]);
                    if parent != root && low[u] >= disc[parent] {
                        cut[parent] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            cut[root] = true;
        }
    }
    (0..n).filter(|&v| cut[v]).collect()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CutVertexReport {
    pub crossing_disconnected: bool,
    pub cut_vertices: Vec<usize>,
}

/// Computes connectivity of the crossing graph and the cut vertices of X
/// separately, and fails unless ΔX is disconnected exactly when X has a cut vertex.
pub fn cutvertex_crossing_check(x: &CubeComplex) -> Result<CutVertexReport> {
    let crossing_disconnected = !crossing_graph(x).is_connected();
    let cut_vertices = articulation_points(x);
    if crossing_disconnected != !cut_vertices.is_empty() {
        return Err(CubexError::InvariantViolation(format!(
            "crossing graph disconnected = {crossing_disconnected} but {} cut vertices",
            cut_vertices.len()
        )));
    }
    Ok(CutVertexReport {
        crossing_disconnected,
        cut_vertices,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BottleneckReport {
    pub holds: bool,
    /// Node pair for which no geodesic midpoint works.
    pub witness: Option<[usize; 2]>,
    pub pairs_checked: usize,
}

/// Bottleneck property with constant δ = `twice_delta` / 2: for every pair of
/// nodes some geodesic midpoint m has every connecting path passing at
/// distance < δ from m. Midpoints are vertices at distance ⌊d/2⌋ from the
/// first node and ⌈d/2⌉ from the second; all of them are tried.
pub fn bottleneck_check(g: &AuxGraph, twice_delta: usize) -> Result<BottleneckReport> {
    let n = g.num_nodes();
    if !g.is_connected() {
        return Err(CubexError::Disconnected);
    }
    let dist: Vec<Vec<usize>> = (0..n).into_par_iter().map(|s| g.bfs(s)).collect();
    // component labels of G minus the open δ-ball around each node
    let near = |m: usize, v: usize| 2 * dist[m][v] < twice_delta;
    let outside: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|m| {
            let mut comp = vec![usize::MAX; n];
            let mut c = 0;
            for s in 0..n {
                if near(m, s) || comp[s] != usize::MAX {
                    continue;
                }
                comp[s] = c;
                let mut stack = vec![s];
                while let Some(u) = stack.pop() {
                    for &w in g.neighbors(u) {
                        if !near(m, w) && comp[w] == usize::MAX {
                            comp[w] = c;
                            stack.push(w);
                        }
                    }
                }
                c += 1;
            }
            comp
        })
        .collect();
    let failures: Vec<[usize; 2]> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let dist = &dist;
            let outside = &outside;
            (a + 1..n).filter_map(move |b| {
                let d = dist[a][b];
                let ok = (0..n)
                    .filter(|&m| dist[a][m] == d / 2 && dist[m][b] == d - d / 2)
                    .any(|m| {
                        let (ca, cb) = (outside[m][a], outside[m][b]);
                        ca == usize::MAX || cb == usize::MAX || ca != cb
                    });
                (!ok).then_some([a, b])
            })
        })
        .collect();
    Ok(BottleneckReport {
        holds: failures.is_empty(),
        witness: failures.into_iter().min(),
        pairs_checked: n * n.saturating_sub(1) / 2,
    })
}

/// Well-separation degrees of all hyperplane pairs, computed once.
#[derive(Clone, Debug)]
pub struct DeltaTable {
    m: usize,
    degree: Vec<u32>,
}

impl DeltaTable {
    pub fn new(x: &CubeComplex) -> Result<DeltaTable> {
        let m = x.num_hyperplanes();
        let budget = search_budget(DEFAULT_SEARCH_NODES);
        let rows: Vec<std::result::Result<Vec<u32>, usize>> = (0..m)
            .into_par_iter()
            .map(|j| {
                let mut row = vec![u32::MAX; m];
                for h in 0..m {
                    if h == j || x.transverse(j, h) {
                        continue;
                    }
                    if h < j {
                        continue;
                    }
                    let cands: Vec<usize> = x
                        .transverse_set(j)
                        .and(x.transverse_set(h))
                        .ones()
                        .collect();
                    let (fam, exact) = max_facing_free(x, &cands, false, usize::MAX, budget);
                    if !exact {
                        return Err(fam.len());
                    }
                    row[h] = fam.len() as u32;
                }
                Ok(row)
            })
            .collect();
        let mut degree = vec![u32::MAX; m * m];
        for (j, row) in rows.into_iter().enumerate() {
            let row = row.map_err(|lower_bound| CubexError::Budget { lower_bound })?;
            for h in j + 1..m {
                degree[j * m + h] = row[h];
                degree[h * m + j] = row[h];
            }
        }
        Ok(DeltaTable { m, degree })
    }

    /// Degree of a disjoint pair; None for transverse or equal hyperplanes.
    pub fn degree(&self, j: usize, h: usize) -> Option<usize> {
        let d = self.degree[j * self.m + h];
        (d != u32::MAX).then_some(d as usize)
    }

    pub fn well_separated(&self, j: usize, h: usize, l: usize) -> bool {
        self.degree(j, h).is_some_and(|d| d <= l)
    }

    /// Largest degree over disjoint pairs.
    pub fn max_degree(&self) -> usize {
        self.degree
            .iter()
            .filter(|&&d| d != u32::MAX)
            .max()
            .map_or(0, |&d| d as usize)
    }

    pub fn num_hyperplanes(&self) -> usize {
        self.m
    }

    /// δ_L(a, b): longest chain of separating hyperplanes with consecutive
    /// members L-well-separated. Members of a chain between two well-separated
    /// hyperplanes are crossed by everything crossing both ends, so consecutive
    /// well-separation gives pairwise well-separation.
    pub fn delta(&self, x: &CubeComplex, a: usize, b: usize, l: usize) -> usize {
        let sep = x.separating_hyperplanes(a, b);
        longest_nested_chain(x, a, &sep, |j, h| self.well_separated(j, h, l))
    }
}

pub fn delta_l(x: &CubeComplex, a: usize, b: usize, l: usize) -> Result<usize> {
    Ok(DeltaTable::new(x)?.delta(x, a, b, l))
}

/// Largest family of hyperplanes separating `a` and `b` that are pairwise
/// accepted by `ok`, by exhaustive subset search.
fn max_pairwise_family(sep: &[usize], ok: impl Fn(usize, usize) -> bool) -> usize {
    let k = sep.len();
    assert!(k <= 24, "brute force limited to 24 separating hyperplanes");
    let mut compat = vec![0u32; k];
    for i in 0..k {
        for j in 0..k {
            if i != j && ok(sep[i], sep[j]) {
                compat[i] |= 1 << j;
            }
        }
    }
    let mut best = 0;
    for mask in 0u32..(1 << k) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let mut good = true;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if mask & !(1 << i) & !compat[i] != 0 {
                good = false;
                break;
            }
        }
        if good {
            best = size;
        }
    }
    best
}

/// δ_L by exhaustive search over all families of pairwise L-well-separated
/// separating hyperplanes.
pub fn delta_l_bruteforce(
    x: &CubeComplex,
    table: &DeltaTable,
    a: usize,
    b: usize,
    l: usize,
) -> usize {
    max_pairwise_family(&x.separating_hyperplanes(a, b), |j, h| {
        table.well_separated(j, h, l)
    })
}

/// As [`delta_l_bruteforce`], but transverse pairs are admitted whenever
/// their common transversals contain no facing-triple-free family larger than L.
pub fn delta_l_unrestricted_bruteforce(x: &CubeComplex, a: usize, b: usize, l: usize) -> usize {
    let budget = search_budget(DEFAULT_SEARCH_NODES);
    max_pairwise_family(&x.separating_hyperplanes(a, b), |j, h| {
        let cands: Vec<usize> = x
            .transverse_set(j)
            .and(x.transverse_set(h))
            .ones()
            .collect();
        max_facing_free(x, &cands, false, l + 1, budget).0.len() <= l
    })
}

/// Hyperplanes disjoint from `j` and `h` with the two on different sides.
pub fn separating_between(x: &CubeComplex, j: usize, h: usize) -> Vec<usize> {
    if j == h || x.transverse(j, h) {
        return Vec::new();
    }
    (0..x.num_hyperplanes())
        .filter(|&k| {
            k != j
                && k != h
                && !x.transverse(k, j)
                && !x.transverse(k, h)
                && x.side_of_hyperplane(k, j) != x.side_of_hyperplane(k, h)
        })
        .collect()
}

/// S(J, H): the most pairwise strongly separated hyperplanes separating J and H.
pub fn strong_separation_count(x: &CubeComplex, table: &DeltaTable, j: usize, h: usize) -> usize {
    let sep = separating_between(x, j, h);
    longest_nested_chain(x, x.carrier_vertex(j), &sep, |a, b| {
        table.well_separated(a, b, 0)
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct QiReport {
    /// R: largest vertex-link diameter.
    pub link_diameter: usize,
    pub pairs: usize,
    /// Largest d_ΔX / d_ΓX over pairs at positive distance, as (d_Δ, d_Γ).
    pub worst_ratio: (usize, usize),
    pub max_crossing_distance: usize,
    pub max_strong_separation: usize,
}

/// Compares d_ΔX, d_ΓX and S(J, H) on all hyperplane pairs, checking
/// d_ΔX ≥ S and that d_ΔX ≥ 11Rn forces S ≥ n.
pub fn qi_crossing_contact(x: &CubeComplex) -> Result<QiReport> {
    let delta = crossing_graph(x);
    if !delta.is_connected() {
        return Err(CubexError::Disconnected);
    }
    let gamma = contact_graph(x);
    let table = DeltaTable::new(x)?;
    let r = link_diameters(x)
        .into_iter()
        .map(|d| d.ok_or(CubexError::Disconnected))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let m = x.num_hyperplanes();
    let mut report = QiReport {
        link_diameter: r,
        pairs: 0,
        worst_ratio: (0, 1),
        max_crossing_distance: 0,
        max_strong_separation: 0,
    };
    for j in 0..m {
        let dd = delta.bfs(j);
        let dg = gamma.bfs(j);
        for h in j + 1..m {
            let s = strong_separation_count(x, &table, j, h);
            if dd[h] < s {
                return Err(CubexError::InvariantViolation(format!(
                    "hyperplanes {j}, {h}: {s} strongly separated between them but crossing distance {}",
                    dd[h]
                )));
            }
            if r >= 1 && s < dd[h] / (11 * r) {
                return Err(CubexError::InvariantViolation(format!(
                    "hyperplanes {j}, {h}: crossing distance {} but only {s} strongly separated",
                    dd[h]
                )));
            }
            let (wa, wb) = report.worst_ratio;
            if dd[h] * wb > wa * dg[h] {
                report.worst_ratio = (dd[h], dg[h]);
            }
            report.pairs += 1;
            report.max_crossing_distance = report.max_crossing_distance.max(dd[h]);
            report.max_strong_separation = report.max_strong_separation.max(s);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Delta0Report {
    pub checks: usize,
    /// Largest δ_0(x,y) − S(J,H) seen.
    pub max_gap: usize,
    /// (x, y, J, H) breaking S ≤ δ_0 ≤ S + 4.
    pub violation: Option<[usize; 4]>,
}

/// Checks S(J,H) ≤ δ_0(x,y) ≤ S(J,H) + 4 for all vertex pairs and all
/// hyperplanes J, H whose carriers contain x and y.
pub fn delta0_vs_contact(x: &CubeComplex) -> Result<Delta0Report> {
    let table = DeltaTable::new(x)?;
    let m = x.num_hyperplanes();
    let s: Vec<Vec<usize>> = (0..m)
        .into_par_iter()
        .map(|j| {
            (0..m)
                .map(|h| strong_separation_count(x, &table, j, h))
                .collect()
        })
        .collect();
    let n = x.num_vertices();
    let rows: Vec<Delta0Report> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut r = Delta0Report {
                checks: 0,
                max_gap: 0,
                violation: None,
            };
            for b in 0..n {
                let d0 = table.delta(x, a, b, 0);
                for j in x.hyperplanes_at(a) {
                    for h in x.hyperplanes_at(b) {
                        let sj = s[j][h];
                        r.checks += 1;
                        if sj > d0 || d0 > sj + 4 {
                            r.violation.get_or_insert([a, b, j, h]);
                        } else {
                            r.max_gap = r.max_gap.max(d0 - sj);
                        }
                    }
                }
            }
            r
        })
        .collect();
    Ok(rows.into_iter().fold(
        Delta0Report {
            checks: 0,
            max_gap: 0,
            violation: None,
        },
        |acc, r| Delta0Report {
            checks: acc.checks + r.checks,
            max_gap: acc.max_gap.max(r.max_gap),
            violation: acc.violation.or(r.violation),
        },
    ))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Stability {
    pub l_star: usize,
    /// A disjoint pair attaining the largest degree.
    pub witness: Option<[usize; 2]>,
}

/// L*: the largest well-separation degree over disjoint pairs. Every
/// disjoint pair is then L*-well-separated, so δ_L is the same for all
/// L ≥ L*; checks δ_{L*} = δ_{L*+1} = δ_{L*+3} on all vertex pairs.
pub fn stability_l(x: &CubeComplex) -> Result<Stability> {
    let table = DeltaTable::new(x)?;
    stability_from_table(x, &table)
}

fn stability_from_table(x: &CubeComplex, table: &DeltaTable) -> Result<Stability> {
    let l_star = table.max_degree();
    let m = x.num_hyperplanes();
    let witness = (0..m)
        .flat_map(|j| (j + 1..m).map(move |h| [j, h]))
        .find(|&[j, h]| table.degree(j, h) == Some(l_star));
    let n = x.num_vertices();
    let bad = (0..n).into_par_iter().find_any(|&a| {
        (a + 1..n).any(|b| {
            let d = table.delta(x, a, b, l_star);
            d != table.delta(x, a, b, l_star + 1) || d != table.delta(x, a, b, l_star + 3)
        })
    });
    if let Some(a) = bad {
        return Err(CubexError::InvariantViolation(format!(
            "δ_L not stable at L* = {l_star} from vertex {a}"
        )));
    }
    Ok(Stability { l_star, witness })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HxModel {
    pub l_star: usize,
    pub metric: MetricSpec,
    pub delta: FourPointDelta,
    /// 9(L* + 2).
    pub bound: usize,
    pub pass: bool,
}

/// H(X): X with the metric δ_{L*}, and its measured four-point constant
/// against the bound 9(L* + 2).
pub fn hx_model(x: &CubeComplex) -> Result<HxModel> {
    let table = DeltaTable::new(x)?;
    let st = stability_from_table(x, &table)?;
    let n = x.num_vertices();
    let d: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|a| (0..n).map(|b| table.delta(x, a, b, st.l_star)).collect())
        .collect();
    let delta = four_point_delta_from_matrix(&d, 0);
    let bound = 9 * (st.l_star + 2);
    Ok(HxModel {
        l_star: st.l_star,
        metric: MetricSpec::DeltaL { l: st.l_star },
        pass: delta.twice_delta <= 2 * bound,
        delta,
        bound,
    })
}

/// Largest δ_L(x,z) + δ_L(z,y) − δ_L(x,y) over vertices z of an ℓ¹
/// geodesic from x to y.
pub fn quasigeodesic_defect(
    x: &CubeComplex,
    table: &DeltaTable,
    l: usize,
    path: &[usize],
) -> Result<usize> {
    let Some((&first, &last)) = path.first().zip(path.last()) else {
        return Err(CubexError::NotGeodesic);
    };
    if path.windows(2).any(|w| !x.adjacent(w[0], w[1])) || x.distance(first, last) + 1 != path.len()
    {
        return Err(CubexError::NotGeodesic);
    }
    let total = table.delta(x, first, last, l);
    let mut defect = 0;
    for &z in path {
        let sum = table.delta(x, first, z, l) + table.delta(x, z, last, l);
        if sum < total {
            return Err(CubexError::InvariantViolation(format!(
                "triangle inequality fails at {z}"
            )));
        }
        defect = defect.max(sum - total);
    }
    if defect > 2 * (l + 3) {
        return Err(CubexError::InvariantViolation(format!(
            "additivity defect {defect} exceeds 2(L+3)"
        )));
    }
    Ok(defect)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum IsometryClass {
    Elliptic,
    Loxodromic {
        pair: [usize; 2],
        skewer: SkewerWitness,
    },
    Inconclusive,
}

/// Classifies g on (X, δ_L) at this scale: loxodromic when it skewers a pair
/// of L-well-separated hyperplanes met by an orbit segment, elliptic when it
/// has finite order on its domain, inconclusive otherwise.
pub fn classify_isometry_hx(
    x: &CubeComplex,
    g: &PartialIsometry,
    l: usize,
    n_max: usize,
) -> Result<IsometryClass> {
    if g.len() != x.num_vertices() {
        return Err(CubexError::Input(
            "isometry acts on a different complex".into(),
        ));
    }
    let table = DeltaTable::new(x)?;
    let base = (0..x.num_vertices())
        .find(|&v| g.in_domain(v))
        .ok_or_else(|| CubexError::DomainTooSmall("empty domain".into()))?;
    // orbit of the base point in both directions
    let mut orbit = vec![base];
    for dir in [g.clone(), g.inverse()] {
        let mut v = base;
        for _ in 0..n_max {
            match dir.apply(v) {
                Some(w) if w != base => {
                    orbit.push(w);
                    v = w;
                }
                _ => break,
            }
        }
    }
    let mut crossed = crate::bits::Bits::new(x.num_hyperplanes());
    for &v in &orbit {
        crossed.union_with(&x.separating_bits(base, v));
    }
    let hs: Vec<usize> = crossed.ones().collect();
    for (i, &j1) in hs.iter().enumerate() {
        for &j2 in &hs[i + 1..] {
            if !table.well_separated(j1, j2, l) {
                continue;
            }
            for (a, b) in [(j1, j2), (j2, j1)] {
                if let Ok(Some(skewer)) = skewers(x, g, a, b, n_max) {
                    return Ok(IsometryClass::Loxodromic {
                        pair: [a, b],
                        skewer,
                    });
                }
            }
        }
    }
    let finite_order = (1..=n_max.max(1) as i64).any(|k| {
        let p = g.power(k);
        let dom = p.domain();
        !dom.is_empty() && dom.len() == g.domain().len() && p.is_identity_on_domain()
    });
    Ok(if g.is_identity_on_domain() || finite_order {
        IsometryClass::Elliptic
    } else {
        IsometryClass::Inconclusive
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AcylReport {
    pub holds: bool,
    /// (J1, J2, number of elements stabilizing both) with the largest count.
    pub worst: Option<(usize, usize, usize)>,
    /// Pairs where some element's image of a carrier left its domain; their
    /// counts are lower bounds.
    pub boundary_pairs: usize,
    pub pairs_checked: usize,
}

/// For all hyperplane pairs separated by at least R hyperplanes, counts the
/// elements of `action` stabilizing both, and checks the count is ≤ N.
pub fn acyl_on_hyperplanes_check(
    x: &CubeComplex,
    action: &[PartialIsometry],
    r: usize,
    n: usize,
) -> AcylReport {
    let m = x.num_hyperplanes();
    let images: Vec<Vec<Option<usize>>> = action
        .iter()
        .map(|g| (0..m).map(|h| g.hyperplane_image(x, h)).collect())
        .collect();
    let mut report = AcylReport {
        holds: true,
        worst: None,
        boundary_pairs: 0,
        pairs_checked: 0,
    };
    for j1 in 0..m {
        for j2 in j1 + 1..m {
            if separating_between(x, j1, j2).len() < r {
                continue;
            }
            report.pairs_checked += 1;
            let mut count = 0;
            let mut boundary = false;
            for img in &images {
                match (img[j1], img[j2]) {
                    (Some(a), Some(b)) if a == j1 && b == j2 => count += 1,
                    (Some(_), Some(_)) => {}
                    _ => boundary = true,
                }
            }
            if boundary {
                report.boundary_pairs += 1;
            }
            if count > n {
                report.holds = false;
            }
            if report.worst.is_none_or(|w| count > w.2) {
                report.worst = Some((j1, j2, count));
            }
        }
    }
    report
}

/// The 1-skeleton of X with one cone node per member, joined to all its vertices.
pub fn cone_off(x: &CubeComplex, family: &[ConvexSubcomplex]) -> AuxGraph {
    let n = x.num_vertices();
    let mut labels: Vec<String> = (0..n).map(|v| v.to_string()).collect();
    labels.extend((0..family.len()).map(|i| format!("cone{i}")));
    let mut edges: Vec<[usize; 2]> = x.edges().collect();
    for (i, y) in family.iter().enumerate() {
        edges.extend(y.members().iter().map(|&v| [v, n + i]));
    }
    AuxGraph::new(AuxKind::Coneoff, labels, edges)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RelHypReport {
    /// Largest number of hyperplanes crossing two distinct members.
    pub c1: usize,
    pub c1_witness: Option<[usize; 2]>,
    /// Least c such that every c-thick flat rectangle lies in the
    /// c-neighbourhood of some member.
    pub c2: usize,
    /// A (c2 − 1)-thick rectangle outside every (c2 − 1)-neighbourhood, as
    /// its vertex set.
    pub c2_witness: Option<Vec<usize>>,
    pub rectangles: usize,
}

/// Visits every flat rectangle, degenerate ones included, as (p, q, vertex
/// set). Rectangles are grown at each corner: first a geodesic row, then
/// lifts of the whole row across hyperplanes transverse to it. Returns false
/// if the budget ran out.
fn for_each_rectangle(
    x: &CubeComplex,
    budget: u64,
    mut f: impl FnMut(usize, usize, &[usize]),
) -> bool {
    let mut nodes = 0u64;
    for a in 0..x.num_vertices() {
        let mut rows: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), vec![a])];
        while let Some((hseq, row)) = rows.pop() {
            let end = *row.last().expect("nonempty row");
            for (w, h) in x.neighbors(end) {
                if !hseq.contains(&h) {
                    let mut hs = hseq.clone();
                    hs.push(h);
                    let mut r = row.clone();
                    r.push(w);
                    rows.push((hs, r));
                }
            }
            // (height, vertical hyperplanes so far, top row, all vertices)
            let mut cols: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> =
                vec![(Vec::new(), row.clone(), row.clone())];
            while let Some((vseq, top, verts)) = cols.pop() {
                nodes += 1;
                if nodes > budget {
                    return false;
                }
                f(hseq.len(), vseq.len(), &verts);
                for (_, v) in x.neighbors(top[0]) {
                    if vseq.contains(&v) || hseq.iter().any(|&h| !x.transverse(h, v)) {
                        continue;
                    }
                    let lifted: Option<Vec<usize>> = top
                        .iter()
                        .map(|&t| {
                            let mut s = x.signature(t).clone();
                            s.flip(v);
                            x.vertex_with_signature(&s)
                        })
                        .collect();
                    if let Some(l) = lifted {
                        let mut vs = vseq.clone();
                        vs.push(v);
                        let mut all = verts.clone();
                        all.extend_from_slice(&l);
                        cols.push((vs, l, all));
                    }
                }
            }
        }
    }
    true
}

/// Relative-hyperbolicity constants of a family of convex subcomplexes.
pub fn relhyp_conditions(x: &CubeComplex, family: &[ConvexSubcomplex]) -> Result<RelHypReport> {
    let mut c1 = 0;
    let mut c1_witness = None;
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            let k = family[i]
                .crossing_set()
                .and(family[j].crossing_set())
                .count_ones();
            if c1_witness.is_none() || k > c1 {
                c1 = k;
                c1_witness = Some([i, j]);
            }
        }
    }
    let dist: Vec<Vec<usize>> = family
        .iter()
        .map(|y| (0..x.num_vertices()).map(|v| y.distance_to(x, v)).collect())
        .collect();
    // worst[t]: the rectangle of thickness t farthest from fitting near a member
    let mut worst: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut rectangles = 0usize;
    let finished = for_each_rectangle(x, search_budget(DEFAULT_SEARCH_NODES), |p, q, verts| {
        rectangles += 1;
        let t = p.min(q);
        let fit = dist
            .iter()
            .map(|d| verts.iter().map(|&v| d[v]).max().unwrap_or(0))
            .min()
            .unwrap_or(usize::MAX);
        if worst.len() <= t {
            worst.resize(t + 1, (0, Vec::new()));
        }
        if fit > worst[t].0 {
            let mut vs = verts.to_vec();
            vs.sort_unstable();
            worst[t] = (fit, vs);
        }
    });
    if !finished {
        return Err(CubexError::Budget { lower_bound: c1 });
    }
    // c works iff every rectangle of thickness ≥ c fits within c of a member
    let mut c2 = 0;
    let mut c2_witness = None;
    while let Some(t) = (c2..worst.len()).find(|&t| worst[t].0 > c2) {
        c2_witness = Some(worst[t].1.clone());
        c2 += 1;
    }
    Ok(RelHypReport {
        c1,
        c1_witness,
        c2,
        c2_witness,
        rectangles,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ProjectionAxioms {
    /// Largest diameter of the projection of one member onto another.
    pub c1: usize,
    /// Largest join contraction constant of a member.
    pub k: usize,
    /// 2·C1 + K.
    pub c2: usize,
    /// A triple (A, B, C) with two of d_A(B,C), d_B(A,C), d_C(A,B) above C2.
    pub behrstock_violation: Option<[usize; 3]>,
    /// Largest number of members C with d_C(A,B) > 3·C1 over pairs (A, B).
    pub max_large_projections: usize,
}

fn diameter(x: &CubeComplex, vs: &[usize]) -> usize {
    let mut d = 0;
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            d = d.max(x.distance(a, b));
        }
    }
    d
}

/// Checks the projection axioms on a family of distinct convex subcomplexes.
pub fn projection_axioms(x: &CubeComplex, family: &[ConvexSubcomplex]) -> Result<ProjectionAxioms> {
    let f = family.len();
    for i in 0..f {
        for j in i + 1..f {
            if family[i].members() == family[j].members() {
                return Err(CubexError::NotDistinct);
            }
        }
    }
    // proj[c][a]: vertices of the projection of member a onto member c
    let proj: Vec<Vec<Vec<usize>>> = (0..f)
        .map(|c| {
            (0..f)
                .map(|a| {
                    let mut p: Vec<usize> = family[a]
                        .members()
                        .iter()
                        .map(|&v| family[c].project(x, v))
                        .collect();
                    p.sort_unstable();
                    p.dedup();
                    p
                })
                .collect()
        })
        .collect();
    let mut c1 = 0;
    for c in 0..f {
        for a in 0..f {
            if a != c {
                c1 = c1.max(diameter(x, &proj[c][a]));
            }
        }
    }
    let mut k = 0;
    for y in family {
        k = k.max(contraction_constant_join(x, y)?.value);
    }
    let c2 = 2 * c1 + k;
    let d_c = |c: usize, a: usize, b: usize| {
        let mut u = proj[c][a].clone();
        u.extend_from_slice(&proj[c][b]);
        diameter(x, &u)
    };
    let mut behrstock_violation = None;
    let mut max_large = 0;
    for a in 0..f {
        for b in a + 1..f {
            let mut large = 0;
            for c in 0..f {
                if c == a || c == b {
                    continue;
                }
                if d_c(c, a, b) > 3 * c1 {
                    large += 1;
                }
                if c > b && behrstock_violation.is_none() {
                    let over = [d_c(a, b, c), d_c(b, a, c), d_c(c, a, b)]
                        .iter()
                        .filter(|&&d| d > c2)
                        .count();
                    if over > 1 {
                        behrstock_violation = Some([a, b, c]);
                    }
                }
            }
            max_large = max_large.max(large);
        }
    }
    Ok(ProjectionAxioms {
        c1,
        k,
        c2,
        behrstock_violation,
        max_large_projections: max_large,
    })
}
