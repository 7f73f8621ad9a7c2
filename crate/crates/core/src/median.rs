//! Intervals, gates, convex hulls and the two rectangle constructions.

use serde::Serialize;

use crate::bits::Bits;
use crate::complex::CubeComplex;
use crate::error::{CubexError, Result};

/// A convex vertex set, stored with the hyperplanes crossing it and the common
/// side of every other hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexSubcomplex {
    members: Vec<usize>,
    member_bits: Bits,
    crossing: Bits,
    side: Bits,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SubcomplexCertificate {
    pub members: Vec<usize>,
    pub crossing_set: Vec<usize>,
}

impl ConvexSubcomplex {
    /// Vertices agreeing with `side` on every hyperplane outside `free`.
    pub fn from_constraints(x: &CubeComplex, free: &Bits, side: &Bits) -> Result<Self> {
        let fixed_side = side.and_not(free);
        let members: Vec<usize> = (0..x.num_vertices())
            .filter(|&v| x.signature(v).xor(&fixed_side).and_not(free).count_ones() == 0)
            .collect();
        ConvexSubcomplex::from_sorted_convex(x, members)
    }

    /// Wraps a vertex set known to be convex.
    fn from_sorted_convex(x: &CubeComplex, members: Vec<usize>) -> Result<Self> {
        let Some(&first) = members.first() else {
            return Err(CubexError::EmptySubcomplex);
        };
        let s0 = x.signature(first);
        let mut crossing = Bits::new(x.num_hyperplanes());
        for &m in &members[1..] {
            crossing.union_with(&x.signature(m).xor(s0));
        }
        let side = s0.and_not(&crossing);
        let member_bits = Bits::from_indices(x.num_vertices(), members.iter().copied());
        Ok(ConvexSubcomplex {
            members,
            member_bits,
            crossing,
            side,
        })
    }

    /// Requires `members` to be convex already.
    pub fn new(x: &CubeComplex, members: &[usize]) -> Result<Self> {
        let hull = convex_hull(x, members)?;
        if hull.len() != {
            let mut m = members.to_vec();
            m.sort_unstable();
            m.dedup();
            m.len()
        } {
            return Err(CubexError::Input("vertex set is not convex".into()));
        }
        Ok(hull)
    }

    pub fn whole(x: &CubeComplex) -> Self {
        ConvexSubcomplex::from_sorted_convex(x, (0..x.num_vertices()).collect()).expect("nonempty")
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.member_bits.get(v)
    }

    pub fn member_bits(&self) -> &Bits {
        &self.member_bits
    }

    /// Hyperplanes separating two of its vertices.
    pub fn crossing_set(&self) -> &Bits {
        &self.crossing
    }

    pub fn crosses(&self, h: usize) -> bool {
        self.crossing.get(h)
    }

    /// Side of a hyperplane not crossing the subcomplex.
    pub fn fixed_side(&self, h: usize) -> bool {
        self.side.get(h)
    }

    /// Gate of `v`.
    pub fn project(&self, x: &CubeComplex, v: usize) -> usize {
        let s = x.signature(v).and(&self.crossing).or(&self.side);
        x.vertex_with_signature(&s)
            .expect("convex subcomplexes are gated")
    }

    pub fn distance_to(&self, x: &CubeComplex, v: usize) -> usize {
        x.signature(v)
            .xor(&self.side)
            .and_not(&self.crossing)
            .count_ones()
    }

    /// Intersection, or None when empty.
    pub fn intersect(&self, x: &CubeComplex, other: &ConvexSubcomplex) -> Option<ConvexSubcomplex> {
        let both = self.member_bits.and(&other.member_bits);
        let members: Vec<usize> = both.ones().collect();
        ConvexSubcomplex::from_sorted_convex(x, members).ok()
    }

    pub fn intersects(&self, other: &ConvexSubcomplex) -> bool {
        self.member_bits.intersects(&other.member_bits)
    }

    /// Hyperplanes with the two subcomplexes on different sides.
    pub fn separating(&self, other: &ConvexSubcomplex) -> Bits {
        self.side
            .xor(&other.side)
            .and_not(&self.crossing)
            .and_not(&other.crossing)
    }

    /// Vertices within distance `r`.
    pub fn neighborhood(&self, x: &CubeComplex, r: usize) -> Bits {
        Bits::from_indices(
            x.num_vertices(),
            (0..x.num_vertices()).filter(|&v| self.distance_to(x, v) <= r),
        )
    }

    pub fn certificate(&self) -> SubcomplexCertificate {
        SubcomplexCertificate {
            members: self.members.clone(),
            crossing_set: self.crossing.ones().collect(),
        }
    }
}

pub fn median(x: &CubeComplex, a: usize, b: usize, c: usize) -> usize {
    x.median(a, b, c)
}

pub fn interval_bits(x: &CubeComplex, a: usize, b: usize) -> Bits {
    let sep = x.separating_bits(a, b);
    let sa = x.signature(a);
    Bits::from_indices(
        x.num_vertices(),
        (0..x.num_vertices()).filter(|&v| x.signature(v).xor(sa).is_subset(&sep)),
    )
}

/// All vertices on geodesics from `a` to `b`.
pub fn interval(x: &CubeComplex, a: usize, b: usize) -> Vec<usize> {
    interval_bits(x, a, b).ones().collect()
}

/// A geodesic from `a` to `b`, stepping to the smallest-id neighbour closer to `b`.
pub fn geodesic(x: &CubeComplex, a: usize, b: usize) -> Vec<usize> {
    let mut path = vec![a];
    let mut cur = a;
    while cur != b {
        let d = x.distance(cur, b);
        let next = x
            .neighbors(cur)
            .map(|(w, _)| w)
            .filter(|&w| x.distance(w, b) + 1 == d)
            .min()
            .expect("median graphs are geodesic");
        path.push(next);
        cur = next;
    }
    path
}

/// Hyperplanes crossed in order along [`geodesic`].
pub fn geodesic_hyperplanes(x: &CubeComplex, a: usize, b: usize) -> Vec<usize> {
    geodesic(x, a, b)
        .windows(2)
        .map(|w| x.edge_between(w[0], w[1]).expect("path edge"))
        .collect()
}

/// Convex hull as the intersection of the halfspaces containing `s`.
pub fn convex_hull(x: &CubeComplex, s: &[usize]) -> Result<ConvexSubcomplex> {
    let Some(&first) = s.first() else {
        return Err(CubexError::EmptySubcomplex);
    };
    let s0 = x.signature(first);
    let mut free = Bits::new(x.num_hyperplanes());
    for &v in s {
        free.union_with(&x.signature(v).xor(s0));
    }
    ConvexSubcomplex::from_constraints(x, &free, s0)
}

/// Convex hull by iterated interval closure.
pub fn convex_hull_by_intervals(x: &CubeComplex, s: &[usize]) -> Vec<usize> {
    let mut set = Bits::from_indices(x.num_vertices(), s.iter().copied());
    let mut list: Vec<usize> = set.ones().collect();
    let mut done = 0;
    while done < list.len() {
        let mut added = Vec::new();
        for i in done..list.len() {
            for j in 0..i {
                for v in interval_bits(x, list[i], list[j]).and_not(&set).ones() {
                    set.set(v, true);
                    added.push(v);
                }
            }
        }
        done = list.len();
        list.extend(added);
    }
    list.sort_unstable();
    list
}

/// Hull computed both ways; errors if the two disagree.
pub fn convex_hull_checked(x: &CubeComplex, s: &[usize]) -> Result<ConvexSubcomplex> {
    let hull = convex_hull(x, s)?;
    if hull.members() != convex_hull_by_intervals(x, s).as_slice() {
        return Err(CubexError::InvariantViolation(
            "halfspace hull differs from interval closure".into(),
        ));
    }
    Ok(hull)
}

pub fn gate_project(x: &CubeComplex, v: usize, c: &ConvexSubcomplex) -> Result<usize> {
    if c.is_empty() {
        return Err(CubexError::EmptySubcomplex);
    }
    Ok(c.project(x, v))
}

/// Image of `a` under the gate map onto `b`; it is convex with crossing set
/// the hyperplanes crossing both.
pub fn project_set(
    x: &CubeComplex,
    a: &ConvexSubcomplex,
    b: &ConvexSubcomplex,
) -> Result<ConvexSubcomplex> {
    let mut image: Vec<usize> = a.members().iter().map(|&v| b.project(x, v)).collect();
    image.sort_unstable();
    image.dedup();
    let hull = convex_hull(x, &image)?;
    if hull.members() != image.as_slice() {
        return Err(CubexError::InvariantViolation(
            "projection image is not convex".into(),
        ));
    }
    Ok(hull)
}

/// A pair of closest vertices between two subcomplexes, smallest ids first.
pub fn nearest_pair(x: &CubeComplex, a: &ConvexSubcomplex, b: &ConvexSubcomplex) -> (usize, usize) {
    a.members()
        .iter()
        .map(|&u| (b.distance_to(x, u), u, b.project(x, u)))
        .min()
        .map(|(_, u, v)| (u, v))
        .expect("nonempty")
}

/// Combinatorial isometric embedding of [0,p]×[0,q]; vertex (i, j) is stored
/// at `i * (q + 1) + j`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FlatRectangle {
    pub p: usize,
    pub q: usize,
    pub embedding: Vec<usize>,
}

impl FlatRectangle {
    pub fn at(&self, i: usize, j: usize) -> usize {
        self.embedding[i * (self.q + 1) + j]
    }

    pub fn thickness(&self) -> usize {
        self.p.min(self.q)
    }

    pub fn degenerate(v: usize) -> Self {
        FlatRectangle {
            p: 0,
            q: 0,
            embedding: vec![v],
        }
    }

    /// Bottom row `[0,p]×{0}`.
    pub fn bottom(&self) -> Vec<usize> {
        (0..=self.p).map(|i| self.at(i, 0)).collect()
    }

    pub fn top(&self) -> Vec<usize> {
        (0..=self.p).map(|i| self.at(i, self.q)).collect()
    }

    pub fn left(&self) -> Vec<usize> {
        (0..=self.q).map(|j| self.at(0, j)).collect()
    }

    pub fn right(&self) -> Vec<usize> {
        (0..=self.q).map(|j| self.at(self.p, j)).collect()
    }

    /// Checks d(img(i,j), img(i',j')) = |i-i'| + |j-j'| for all pairs.
    pub fn is_isometric(&self, x: &CubeComplex) -> bool {
        let (p, q) = (self.p, self.q);
        if self.embedding.len() != (p + 1) * (q + 1) {
            return false;
        }
        for i in 0..=p {
            for j in 0..=q {
                for i2 in 0..=p {
                    for j2 in 0..=q {
                        if x.distance(self.at(i, j), self.at(i2, j2))
                            != i.abs_diff(i2) + j.abs_diff(j2)
                        {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Swaps the two axes.
    pub fn transpose(&self) -> FlatRectangle {
        let mut embedding = Vec::with_capacity(self.embedding.len());
        for j in 0..=self.q {
            for i in 0..=self.p {
                embedding.push(self.at(i, j));
            }
        }
        FlatRectangle {
            p: self.q,
            q: self.p,
            embedding,
        }
    }
}

/// Rectangle whose sides flip the hyperplane sequences `h` (first coordinate)
/// and `v` (second) in order, starting at `a`. None if some corner is missing.
pub fn rectangle_from_sequences(
    x: &CubeComplex,
    a: usize,
    h: &[usize],
    v: &[usize],
) -> Option<FlatRectangle> {
    let (p, q) = (h.len(), v.len());
    let mut embedding = Vec::with_capacity((p + 1) * (q + 1));
    let mut row = x.signature(a).clone();
    for i in 0..=p {
        if i > 0 {
            row.flip(h[i - 1]);
        }
        let mut s = row.clone();
        for j in 0..=q {
            if j > 0 {
                s.flip(v[j - 1]);
            }
            embedding.push(x.vertex_with_signature(&s)?);
        }
    }
    Some(FlatRectangle { p, q, embedding })
}

/// The rectangle spanned at `a` by geodesics towards `b` and `d`, when all of
/// the first hyperplanes cross all of the second.
pub fn rectangle_at_corner(x: &CubeComplex, a: usize, b: usize, d: usize) -> Option<FlatRectangle> {
    let h = geodesic_hyperplanes(x, a, b);
    let v = geodesic_hyperplanes(x, a, d);
    if h.iter()
        .any(|&s| v.iter().any(|&t| s == t || !x.transverse(s, t)))
    {
        return None;
    }
    rectangle_from_sequences(x, a, &h, &v)
}

/// Flat rectangle for a cycle of four convex subcomplexes (A, B, C, D): bottom
/// in A, right side in B, top in C, left side in D.
pub fn cycle_rectangle(
    x: &CubeComplex,
    a_set: &ConvexSubcomplex,
    b_set: &ConvexSubcomplex,
    c_set: &ConvexSubcomplex,
    d_set: &ConvexSubcomplex,
) -> Result<FlatRectangle> {
    let meet = |s: &ConvexSubcomplex, t: &ConvexSubcomplex, name: &str| {
        s.intersect(x, t)
            .ok_or_else(|| CubexError::NotACycle(format!("{name} is empty")))
    };
    let ad = meet(a_set, d_set, "A ∩ D")?;
    let _ab = meet(a_set, b_set, "A ∩ B")?;
    let bc = meet(b_set, c_set, "B ∩ C")?;
    let _cd = meet(c_set, d_set, "C ∩ D")?;
    // base vertex: closest to B ∩ C, ties by smallest signature
    let a = ad
        .members()
        .iter()
        .copied()
        .min_by(|&u, &v| {
            bc.distance_to(x, u)
                .cmp(&bc.distance_to(x, v))
                .then_with(|| x.signature(u).cmp(x.signature(v)))
        })
        .expect("nonempty");
    let b = b_set.project(x, a);
    let d = c_set.project(x, a);
    let rect = rectangle_at_corner(x, a, b, d).ok_or_else(|| {
        CubexError::InvariantViolation("cycle sides do not span a rectangle".into())
    })?;
    let inside = |pts: Vec<usize>, s: &ConvexSubcomplex| pts.into_iter().all(|v| s.contains(v));
    if !(inside(rect.bottom(), a_set)
        && inside(rect.right(), b_set)
        && inside(rect.top(), c_set)
        && inside(rect.left(), d_set))
    {
        return Err(CubexError::InvariantViolation(
            "cycle rectangle sides leave their subcomplexes".into(),
        ));
    }
    Ok(rect)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct QuadrupleGrid {
    pub m: [usize; 4],
    /// m1 = (0,0), m2 = (a,0), m3 = (a,b), m4 = (0,b), so a = #v_family and
    /// b = #h_family.
    pub rectangle: FlatRectangle,
    /// Hyperplanes separating {x1,x2} from {x3,x4}.
    pub h_family: Vec<usize>,
    /// Hyperplanes separating {x1,x4} from {x2,x3}.
    pub v_family: Vec<usize>,
}

/// Realizes the quadruple construction: Q is cut out of the hull of the four
/// points by the halfspaces holding three of them and those holding exactly
/// x2 and x4; each m_i is the gate of x_i on Q.
pub fn quadruple_grid(x: &CubeComplex, xs: [usize; 4]) -> Result<QuadrupleGrid> {
    let h = x.num_hyperplanes();
    let mut free = Bits::new(h);
    let mut side = Bits::new(h);
    let mut h_family = Vec::new();
    let mut v_family = Vec::new();
    for j in 0..h {
        let s: [bool; 4] = xs.map(|v| x.side(j, v));
        let ones = s.iter().filter(|&&b| b).count();
        match ones {
            0 | 4 => side.set(j, s[0]),
            1 => side.set(j, false),
            3 => side.set(j, true),
            _ => {
                if s[0] == s[1] {
                    h_family.push(j);
                    free.set(j, true);
                } else if s[0] == s[3] {
                    v_family.push(j);
                    free.set(j, true);
                } else {
                    side.set(j, s[1]);
                }
            }
        }
    }
    let q = ConvexSubcomplex::from_constraints(x, &free, &side)
        .map_err(|_| CubexError::InvariantViolation("Helly intersection is empty".into()))?;
    let m = xs.map(|v| q.project(x, v));
    for i in 0..4 {
        let (xi, xj, mi, mj) = (xs[i], xs[(i + 1) % 4], m[i], m[(i + 1) % 4]);
        if x.distance(xi, mi) + x.distance(mi, mj) + x.distance(mj, xj) != x.distance(xi, xj) {
            return Err(CubexError::InvariantViolation(format!(
                "path through m{} and m{} is not geodesic",
                i + 1,
                (i + 1) % 4 + 1
            )));
        }
    }
    let rectangle = rectangle_at_corner(x, m[0], m[1], m[3])
        .ok_or_else(|| CubexError::InvariantViolation("m-points do not span a rectangle".into()))?;
    if rectangle.at(rectangle.p, rectangle.q) != m[2] {
        return Err(CubexError::InvariantViolation("rectangle misses m3".into()));
    }
    Ok(QuadrupleGrid {
        m,
        rectangle,
        h_family,
        v_family,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{grid, grid_vertex, path};

    #[test]
    fn grid_intervals_and_hulls() {
        let g = grid(3, 3);
        let v = |i, j| grid_vertex(3, i, j);
        assert_eq!(median(&g, v(0, 0), v(2, 0), v(0, 2)), v(0, 0));
        assert_eq!(interval(&g, v(0, 0), v(1, 2)).len(), 6);
        let hull = convex_hull_checked(&g, &[v(1, 0), v(0, 2), v(2, 1)]).unwrap();
        assert_eq!(hull.len(), 9);
        let bottom = convex_hull(&g, &[v(0, 0), v(3, 0)]).unwrap();
        assert_eq!(bottom.project(&g, v(2, 3)), v(2, 0));
    }

    #[test]
    fn cycle_of_sides() {
        let g = grid(3, 3);
        let v = |i, j| grid_vertex(3, i, j);
        let side = |a, b| convex_hull(&g, &[a, b]).unwrap();
        let r = cycle_rectangle(
            &g,
            &side(v(0, 0), v(3, 0)),
            &side(v(3, 0), v(3, 3)),
            &side(v(0, 3), v(3, 3)),
            &side(v(0, 0), v(0, 3)),
        )
        .unwrap();
        assert_eq!((r.p, r.q), (3, 3));
        assert!(r.is_isometric(&g));
        let pt = ConvexSubcomplex::new(&g, &[v(1, 1)]).unwrap();
        let r0 = cycle_rectangle(&g, &pt, &pt, &pt, &pt).unwrap();
        assert_eq!(r0, FlatRectangle::degenerate(v(1, 1)));
    }

    #[test]
    fn corners_are_their_own_witness() {
        let g = grid(2, 3);
        let v = |i, j| grid_vertex(3, i, j);
        let xs = [v(0, 0), v(2, 0), v(2, 3), v(0, 3)];
        let qg = quadruple_grid(&g, xs).unwrap();
        assert_eq!(qg.m, xs);
        assert_eq!((qg.rectangle.p, qg.rectangle.q), (2, 3));
        let p = path(4);
        let qp = quadruple_grid(&p, [0, 4, 1, 3]).unwrap();
        assert_eq!(qp.rectangle.thickness(), 0);
    }
}
