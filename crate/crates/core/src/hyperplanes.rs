//! Relations between hyperplanes: separation, facing triples, joins and grids,
//! well-separation and skewering.

use serde::Serialize;

use crate::bits::Bits;
use crate::complex::CubeComplex;
use crate::error::{CubexError, Result};
use crate::isometry::PartialIsometry;
use crate::search_budget;

/// Default node budget for the exact subset searches.
pub const DEFAULT_SEARCH_NODES: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Join,
    Grid,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HyperplanePairFamily {
    pub h_side: Vec<usize>,
    pub v_side: Vec<usize>,
    pub kind: FamilyKind,
}

impl HyperplanePairFamily {
    pub fn thinness(&self) -> usize {
        self.h_side.len().min(self.v_side.len())
    }

    /// Checks the join (or grid) conditions.
    pub fn validate(&self, x: &CubeComplex) -> Result<()> {
        for &h in &self.h_side {
            for &v in &self.v_side {
                if !x.transverse(h, v) {
                    return Err(CubexError::InvariantViolation(format!(
                        "{h} and {v} are not transverse"
                    )));
                }
            }
        }
        for side in [&self.h_side, &self.v_side] {
            if has_facing_triple(x, side) {
                return Err(CubexError::InvariantViolation(
                    "side contains a facing triple".into(),
                ));
            }
            if self.kind == FamilyKind::Grid && !pairwise_disjoint(x, side) {
                return Err(CubexError::InvariantViolation(
                    "grid side is not pairwise disjoint".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FamilySearch {
    pub family: HyperplanePairFamily,
    /// False when the node budget ran out; the family is then a lower bound.
    pub exact: bool,
}

fn separates_unchecked(x: &CubeComplex, j: usize, a: usize, b: usize) -> bool {
    !x.transverse(j, a)
        && !x.transverse(j, b)
        && x.side_of_hyperplane(j, a) != x.side_of_hyperplane(j, b)
}

/// Whether `h1` and `h2` lie in different halfspaces of `j`. A hyperplane
/// transverse to `j` lies in neither, so the answer is then false.
pub fn separates(x: &CubeComplex, j: usize, h1: usize, h2: usize) -> Result<bool> {
    if j == h1 || j == h2 || h1 == h2 {
        return Err(CubexError::NotDistinct);
    }
    Ok(separates_unchecked(x, j, h1, h2))
}

fn facing_unchecked(x: &CubeComplex, a: usize, b: usize, c: usize) -> bool {
    !x.transverse(a, b)
        && !x.transverse(a, c)
        && !x.transverse(b, c)
        && !separates_unchecked(x, a, b, c)
        && !separates_unchecked(x, b, a, c)
        && !separates_unchecked(x, c, a, b)
}

/// True iff each of the three hyperplanes has a halfspace containing the
/// other two, i.e. they are pairwise disjoint and none separates the others.
pub fn facing_triple(x: &CubeComplex, j1: usize, j2: usize, j3: usize) -> Result<bool> {
    if j1 == j2 || j1 == j3 || j2 == j3 {
        return Err(CubexError::NotDistinct);
    }
    Ok(facing_unchecked(x, j1, j2, j3))
}

pub fn has_facing_triple(x: &CubeComplex, family: &[usize]) -> bool {
    let k = family.len();
    (0..k).any(|i| {
        (i + 1..k).any(|j| (j + 1..k).any(|l| facing_unchecked(x, family[i], family[j], family[l])))
    })
}

pub fn pairwise_disjoint(x: &CubeComplex, family: &[usize]) -> bool {
    family
        .iter()
        .enumerate()
        .all(|(i, &a)| family[i + 1..].iter().all(|&b| !x.transverse(a, b)))
}

/// Hyperplanes transverse to every member of `family`.
pub fn common_transversals(x: &CubeComplex, family: &[usize]) -> Bits {
    let mut t = Bits::from_indices(x.num_hyperplanes(), 0..x.num_hyperplanes());
    for &h in family {
        t.intersect_with(x.transverse_set(h));
    }
    t
}

fn compatible(x: &CubeComplex, cur: &[usize], c: usize, disjoint_only: bool) -> bool {
    for (i, &a) in cur.iter().enumerate() {
        if x.transverse(a, c) {
            if disjoint_only {
                return false;
            }
            continue;
        }
        for &b in &cur[i + 1..] {
            if facing_unchecked(x, a, b, c) {
                return false;
            }
        }
    }
    true
}

struct SubsetSearch<'a> {
    x: &'a CubeComplex,
    disjoint_only: bool,
    target: usize,
    nodes: u64,
    budget: u64,
    best: Vec<usize>,
    cur: Vec<usize>,
}

impl SubsetSearch<'_> {
    fn run(&mut self, rem: &[usize]) {
        if self.best.len() >= self.target || self.nodes >= self.budget {
            return;
        }
        self.nodes += 1;
        if self.cur.len() > self.best.len() {
            self.best = self.cur.clone();
        }
        for (i, &c) in rem.iter().enumerate() {
            if self.cur.len() + rem.len() - i <= self.best.len() || self.best.len() >= self.target {
                return;
            }
            self.cur.push(c);
            let next: Vec<usize> = rem[i + 1..]
                .iter()
                .copied()
                .filter(|&d| compatible(self.x, &self.cur, d, self.disjoint_only))
                .collect();
            self.run(&next);
            self.cur.pop();
        }
    }
}

/// Largest subfamily of `cands` without facing triples (and pairwise disjoint
/// when `disjoint_only`), stopping early once `target` members are found.
/// Returns the family and whether the search finished within `budget` nodes.
pub fn max_facing_free(
    x: &CubeComplex,
    cands: &[usize],
    disjoint_only: bool,
    target: usize,
    budget: u64,
) -> (Vec<usize>, bool) {
    let mut s = SubsetSearch {
        x,
        disjoint_only,
        target,
        nodes: 0,
        budget,
        best: Vec::new(),
        cur: Vec::new(),
    };
    s.run(cands);
    let exact = s.nodes < budget || s.best.len() >= target;
    (s.best, exact)
}

struct PairSearch<'a> {
    x: &'a CubeComplex,
    kind: FamilyKind,
    // H and V are drawn from the same pool, so V may be kept above min H
    symmetric: bool,
    nodes: u64,
    budget: u64,
    best: HyperplanePairFamily,
    h: Vec<usize>,
}

impl PairSearch<'_> {
    fn best_value(&self) -> usize {
        self.best.thinness()
    }

    fn run(&mut self, rem: &[usize], t: &Bits) {
        if self.nodes >= self.budget {
            return;
        }
        self.nodes += 1;
        let disjoint_only = self.kind == FamilyKind::Grid;
        if self.h.len() > self.best_value() {
            // the smallest member of H ∪ V lies in H, so V stays above it
            let cands: Vec<usize> = t
                .ones()
                .filter(|&v| !self.symmetric || v > self.h[0])
                .collect();
            if cands.len() > self.best_value() {
                let left = self.budget - self.nodes;
                let (v, exact) = max_facing_free(self.x, &cands, disjoint_only, self.h.len(), left);
                self.nodes += if exact { 1 } else { left };
                if v.len().min(self.h.len()) > self.best_value() {
                    self.best = HyperplanePairFamily {
                        h_side: self.h.clone(),
                        v_side: v,
                        kind: self.kind,
                    };
                }
            }
        }
        for (i, &c) in rem.iter().enumerate() {
            let bound = self.h.len() + rem.len() - i;
            if bound <= self.best_value() {
                return;
            }
            let t2 = t.and(self.x.transverse_set(c));
            if t2.count_ones() <= self.best_value() {
                continue;
            }
            self.h.push(c);
            let next: Vec<usize> = rem[i + 1..]
                .iter()
                .copied()
                .filter(|&d| compatible(self.x, &self.h, d, disjoint_only))
                .collect();
            self.run(&next, &t2);
            self.h.pop();
        }
    }
}

fn max_pair_family(x: &CubeComplex, kind: FamilyKind, budget: u64) -> FamilySearch {
    let all: Vec<usize> = (0..x.num_hyperplanes()).collect();
    let t = Bits::from_indices(x.num_hyperplanes(), 0..x.num_hyperplanes());
    pair_search(x, kind, &all, &t, true, budget)
}

fn pair_search(
    x: &CubeComplex,
    kind: FamilyKind,
    h_cands: &[usize],
    v_pool: &Bits,
    symmetric: bool,
    budget: u64,
) -> FamilySearch {
    let mut s = PairSearch {
        x,
        kind,
        symmetric,
        nodes: 0,
        budget,
        best: HyperplanePairFamily {
            h_side: Vec::new(),
            v_side: Vec::new(),
            kind,
        },
        h: Vec::new(),
    };
    s.run(h_cands, v_pool);
    FamilySearch {
        exact: s.nodes < budget,
        family: s.best,
    }
}

/// Pair family maximizing min(#H, #V) with H drawn from `h_cands` and V from
/// `v_pool`.
pub fn max_constrained_family(
    x: &CubeComplex,
    kind: FamilyKind,
    h_cands: &[usize],
    v_pool: &Bits,
    budget: u64,
) -> FamilySearch {
    pair_search(x, kind, h_cands, v_pool, false, budget)
}

/// Join maximizing min(#H, #V), with an explicit node budget.
pub fn max_join_search(x: &CubeComplex, budget: u64) -> FamilySearch {
    max_pair_family(x, FamilyKind::Join, budget)
}

pub fn max_grid_search(x: &CubeComplex, budget: u64) -> FamilySearch {
    max_pair_family(x, FamilyKind::Grid, budget)
}

fn exact_or_budget(s: FamilySearch) -> Result<HyperplanePairFamily> {
    if s.exact {
        Ok(s.family)
    } else {
        Err(CubexError::Budget {
            lower_bound: s.family.thinness(),
        })
    }
}

/// Join maximizing min(#H, #V). The budget defaults to
/// [`DEFAULT_SEARCH_NODES`] and can be raised through `CUBEX_BUDGET`.
pub fn max_join(x: &CubeComplex) -> Result<HyperplanePairFamily> {
    exact_or_budget(max_join_search(x, search_budget(DEFAULT_SEARCH_NODES)))
}

pub fn max_grid(x: &CubeComplex) -> Result<HyperplanePairFamily> {
    exact_or_budget(max_grid_search(x, search_budget(DEFAULT_SEARCH_NODES)))
}

/// Upper bound for the diagonal Ramsey number: exact for n ≤ 3, the central
/// binomial bound C(2n-2, n-1) beyond.
pub fn ramsey_bound(n: usize) -> u64 {
    match n {
        0 => 0,
        1 => 1,
        2 => 2,
        3 => 6,
        _ => {
            let (m, k) = (2 * n as u64 - 2, n as u64 - 1);
            (0..k).fold(1u64, |acc, i| acc * (m - i) / (i + 1))
        }
    }
}

/// Pairwise disjoint subfamilies of size `k` on each side of a join.
pub fn extract_grid_from_join(
    x: &CubeComplex,
    join: &HyperplanePairFamily,
    k: usize,
) -> Result<HyperplanePairFamily> {
    let dim = x.dimension();
    if k <= dim {
        return Err(CubexError::TooSmall(format!(
            "k = {k} must exceed the dimension {dim}"
        )));
    }
    let need = ramsey_bound(k);
    if (join.h_side.len() as u64) < need || (join.v_side.len() as u64) < need {
        return Err(CubexError::TooSmall(format!(
            "both sides need at least {need} hyperplanes, found {} and {}",
            join.h_side.len(),
            join.v_side.len()
        )));
    }
    let mut sides = Vec::new();
    for side in [&join.h_side, &join.v_side] {
        let (mut s, _) = max_facing_free(x, side, true, k, u64::MAX);
        if s.len() < k {
            return Err(CubexError::InvariantViolation(
                "no independent set of the promised size".into(),
            ));
        }
        s.truncate(k);
        sides.push(s);
    }
    let v_side = sides.pop().unwrap();
    let h_side = sides.pop().unwrap();
    Ok(HyperplanePairFamily {
        h_side,
        v_side,
        kind: FamilyKind::Grid,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WellSeparation {
    /// Largest facing-triple-free family transverse to both hyperplanes.
    pub degree: usize,
    pub witness: Vec<usize>,
    /// Whether the pair itself is transverse.
    pub pair_transverse: bool,
    pub exact: bool,
}

/// Well-separation degree of a pair. Computed inside the given complex only:
/// on a finite piece of a larger complex it can undercount.
pub fn well_separation(x: &CubeComplex, j: usize, h: usize) -> Result<WellSeparation> {
    if j == h {
        return Err(CubexError::NotDistinct);
    }
    let cands: Vec<usize> = x
        .transverse_set(j)
        .and(x.transverse_set(h))
        .ones()
        .collect();
    let budget = search_budget(DEFAULT_SEARCH_NODES);
    let (witness, exact) = max_facing_free(x, &cands, false, usize::MAX, budget);
    Ok(WellSeparation {
        degree: witness.len(),
        witness,
        pair_transverse: x.transverse(j, h),
        exact,
    })
}

pub fn well_separation_degree(x: &CubeComplex, j: usize, h: usize) -> Result<usize> {
    let w = well_separation(x, j, h)?;
    if !w.exact {
        return Err(CubexError::Budget {
            lower_bound: w.degree,
        });
    }
    Ok(w.degree)
}

/// L-well-separated: disjoint, with degree at most `l`.
pub fn well_separated(x: &CubeComplex, j: usize, h: usize, l: usize) -> Result<bool> {
    Ok(!x.transverse(j, h) && well_separation_degree(x, j, h)? <= l)
}

/// Disjoint with no hyperplane transverse to both.
pub fn strongly_separated(x: &CubeComplex, j: usize, h: usize) -> Result<bool> {
    if j == h {
        return Err(CubexError::NotDistinct);
    }
    Ok(!x.transverse(j, h) && !x.transverse_set(j).intersects(x.transverse_set(h)))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Halfspace {
    pub hyperplane: usize,
    /// Which side: vertices whose signature bit equals this value.
    pub side: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SkewerWitness {
    pub n: i64,
    pub d1: Halfspace,
    pub d2: Halfspace,
}

fn halfspace_bits(x: &CubeComplex, h: usize, side: bool) -> Bits {
    Bits::from_indices(
        x.num_vertices(),
        (0..x.num_vertices()).filter(|&v| x.side(h, v) == side),
    )
}

fn strictly_inside(x: &CubeComplex, a: (usize, bool), b: (usize, bool)) -> bool {
    a.0 != b.0 && halfspace_bits(x, a.0, a.1).is_subset(&halfspace_bits(x, b.0, b.1))
}

/// Searches 0 < |n| ≤ n_max and the four orientations for
/// g^n·D1 ⊊ D2 ⊊ D1. Powers are tried in the order 1, -1, 2, -2, ...
pub fn skewers(
    x: &CubeComplex,
    g: &PartialIsometry,
    j1: usize,
    j2: usize,
    n_max: usize,
) -> Result<Option<SkewerWitness>> {
    if j1 == j2 {
        return Err(CubexError::NotDistinct);
    }
    if g.len() != x.num_vertices() {
        return Err(CubexError::Input(
            "isometry acts on a different complex".into(),
        ));
    }
    let nested: Vec<(bool, bool)> = [(false, false), (false, true), (true, false), (true, true)]
        .into_iter()
        .filter(|&(s1, s2)| strictly_inside(x, (j2, s2), (j1, s1)))
        .collect();
    for m in 1..=n_max as i64 {
        for n in [m, -m] {
            let gn = g.power(n);
            for &(s1, s2) in &nested {
                let Some(img) = gn.halfspace_image(x, j1, s1) else {
                    return Err(CubexError::DomainTooSmall(format!(
                        "carrier of hyperplane {j1} leaves the domain of the power {n}"
                    )));
                };
                if strictly_inside(x, img, (j2, s2)) {
                    return Ok(Some(SkewerWitness {
                        n,
                        d1: Halfspace {
                            hyperplane: j1,
                            side: s1,
                        },
                        d2: Halfspace {
                            hyperplane: j2,
                            side: s2,
                        },
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{cube, grid, path, staircase, star_tree};

    #[test]
    fn separation_and_facing() {
        let p = path(3);
        assert!(separates(&p, 1, 0, 2).unwrap());
        assert!(!facing_triple(&p, 0, 1, 2).unwrap());
        let t = star_tree(3, 1);
        assert!(facing_triple(&t, 0, 1, 2).unwrap());
        assert!(!facing_triple(&cube(3), 0, 1, 2).unwrap());
        assert_eq!(facing_triple(&p, 0, 0, 1), Err(CubexError::NotDistinct));
        let g = grid(1, 1);
        assert!(!separates(&g, 0, 1, 1).unwrap_or(false));
    }

    #[test]
    fn joins_of_small_complexes() {
        assert_eq!(max_join(&star_tree(3, 2)).unwrap().thinness(), 0);
        assert_eq!(max_join(&grid(1, 1)).unwrap().thinness(), 1);
        for n in 1..=4 {
            let g = grid(n, n);
            let j = max_join(&g).unwrap();
            j.validate(&g).unwrap();
            assert_eq!(j.thinness(), n);
            assert_eq!(max_grid(&g).unwrap().thinness(), n);
        }
    }

    #[test]
    fn ramsey_values() {
        assert_eq!(ramsey_bound(2), 2);
        assert_eq!(ramsey_bound(3), 6);
        assert_eq!(ramsey_bound(4), 20);
        assert_eq!(ramsey_bound(5), 70);
    }

    #[test]
    fn extraction_preconditions() {
        let g = grid(6, 6);
        let j = max_join(&g).unwrap();
        let e = extract_grid_from_join(&g, &j, 3).unwrap();
        e.validate(&g).unwrap();
        assert_eq!(e.thinness(), 3);
        assert!(matches!(
            extract_grid_from_join(&g, &j, 2),
            Err(CubexError::TooSmall(_))
        ));
    }

    #[test]
    fn well_separation_examples() {
        let t = star_tree(3, 2);
        assert_eq!(well_separation_degree(&t, 0, 1).unwrap(), 0);
        assert!(strongly_separated(&t, 0, 1).unwrap());
        let g = grid(3, 3);
        // rows are the hyperplanes crossing the second coordinate
        let rows: Vec<usize> = (0..g.num_hyperplanes())
            .filter(|&h| {
                g.separating_bits(0, 1).get(h)
                    || g.separating_bits(1, 2).get(h)
                    || g.separating_bits(2, 3).get(h)
            })
            .collect();
        assert_eq!(well_separation_degree(&g, rows[0], rows[1]).unwrap(), 3);
        assert!(!strongly_separated(&g, rows[0], rows[1]).unwrap());
        let s = staircase(5);
        assert!(strongly_separated(&s, 0, 2).unwrap() || strongly_separated(&s, 1, 3).unwrap());
    }

    #[test]
    fn skewering_a_line() {
        let p = path(8);
        let map: Vec<Option<usize>> = (0..=8)
            .map(|v| if v < 8 { Some(v + 1) } else { None })
            .collect();
        let g = PartialIsometry::new(&p, map, Some("t".into())).unwrap();
        let h = |a: usize| p.edge_between(a, a + 1).unwrap();
        let w = skewers(&p, &g, h(3), h(4), 3).unwrap().unwrap();
        assert_eq!(w.n, 2);
        let id = PartialIsometry::identity(p.num_vertices());
        assert_eq!(skewers(&p, &id, h(3), h(4), 3).unwrap(), None);
    }
}
