use std::collections::BTreeMap;

use rand::Rng;

use crate::complex::CubeComplex;

/// Path with `k` edges on vertices `0..=k`.
pub fn path(k: usize) -> CubeComplex {
    let edges: Vec<[usize; 2]> = (0..k).map(|i| [i, i + 1]).collect();
    CubeComplex::from_graph(k + 1, &edges).expect("paths are median")
}

/// Vertex id of `(i, j)` in [`grid`].
pub fn grid_vertex(q: usize, i: usize, j: usize) -> usize {
    i * (q + 1) + j
}

/// The square complex [0,p]×[0,q].
pub fn grid(p: usize, q: usize) -> CubeComplex {
    let mut edges = Vec::new();
    for i in 0..=p {
        for j in 0..=q {
            if i < p {
                edges.push([grid_vertex(q, i, j), grid_vertex(q, i + 1, j)]);
            }
            if j < q {
                edges.push([grid_vertex(q, i, j), grid_vertex(q, i, j + 1)]);
            }
        }
    }
    CubeComplex::from_graph((p + 1) * (q + 1), &edges).expect("grids are median")
}

/// The `d`-cube; vertex ids are bit masks.
pub fn cube(d: usize) -> CubeComplex {
    let n = 1usize << d;
    let mut edges = Vec::new();
    for v in 0..n {
        for b in 0..d {
            let w = v ^ (1 << b);
            if v < w {
                edges.push([v, w]);
            }
        }
    }
    CubeComplex::from_graph(n, &edges).expect("cubes are median")
}

/// Cartesian product; vertex `(a, b)` gets id `a * |X2| + b`.
pub fn product(x1: &CubeComplex, x2: &CubeComplex) -> CubeComplex {
    let n2 = x2.num_vertices();
    let mut edges = Vec::new();
    for a in 0..x1.num_vertices() {
        for [u, v] in x2.edges() {
            edges.push([a * n2 + u, a * n2 + v]);
        }
    }
    for [u, v] in x1.edges() {
        for b in 0..n2 {
            edges.push([u * n2 + b, v * n2 + b]);
        }
    }
    CubeComplex::from_graph(x1.num_vertices() * n2, &edges)
        .expect("products of median graphs are median")
}

/// Glues `x2` to `x1` by identifying `v2` with `v1`. Vertices of `x2` other
/// than `v2` are renumbered after those of `x1`, in order.
pub fn wedge(
    x1: &CubeComplex,
    v1: usize,
    x2: &CubeComplex,
    v2: usize,
) -> (CubeComplex, Vec<usize>) {
    let n1 = x1.num_vertices();
    let relabel: Vec<usize> = (0..x2.num_vertices())
        .map(|v| match v.cmp(&v2) {
            std::cmp::Ordering::Less => n1 + v,
            std::cmp::Ordering::Equal => v1,
            std::cmp::Ordering::Greater => n1 + v - 1,
        })
        .collect();
    let mut edges: Vec<[usize; 2]> = x1.edges().collect();
    edges.extend(x2.edges().map(|[a, b]| [relabel[a], relabel[b]]));
    let x = CubeComplex::from_graph(n1 + x2.num_vertices() - 1, &edges)
        .expect("wedges of median graphs are median");
    (x, relabel)
}

/// Complex from a finite union of unit squares and unit edges in Z².
fn planar(
    squares: &[(i64, i64)],
    extra_edges: &[((i64, i64), (i64, i64))],
) -> (CubeComplex, Vec<(i64, i64)>) {
    let mut ids: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut seg = Vec::new();
    for &(x, y) in squares {
        let c = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)];
        for i in 0..4 {
            seg.push((c[i], c[(i + 1) % 4]));
        }
    }
    seg.extend_from_slice(extra_edges);
    for &(a, b) in &seg {
        ids.insert(a, 0);
        ids.insert(b, 0);
    }
    let coords: Vec<(i64, i64)> = ids.keys().copied().collect();
    for (i, c) in coords.iter().enumerate() {
        ids.insert(*c, i);
    }
    let mut edges: Vec<[usize; 2]> = seg
        .iter()
        .map(|(a, b)| {
            let (u, v) = (ids[a], ids[b]);
            [u.min(v), u.max(v)]
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let x = CubeComplex::from_graph(coords.len(), &edges).expect("planar staircase is median");
    (x, coords)
}

/// A strip of `m` unit squares in Z², each sharing an edge with the next and
/// turning alternately right and up. Its crossing graph is a path on `m + 1`
/// hyperplanes, and hyperplanes three apart along it are strongly separated.
pub fn staircase(m: usize) -> CubeComplex {
    staircase_with_coords(m).0
}

/// [`staircase`] with the planar coordinates of each vertex.
pub fn staircase_with_coords(m: usize) -> (CubeComplex, Vec<(i64, i64)>) {
    assert!(m >= 1);
    let squares: Vec<(i64, i64)> = (0..m as i64).map(|k| ((k + 1) / 2, k / 2)).collect();
    planar(&squares, &[])
}

/// Boxes `[0,p]×[0,q]` glued in a chain, the far corner of each box to the
/// origin corner of the next. Returns the complex and the vertex set of each box.
pub fn tree_of_grids(boxes: &[(usize, usize)]) -> (CubeComplex, Vec<Vec<usize>>) {
    assert!(!boxes.is_empty());
    let (p0, q0) = boxes[0];
    let mut x = grid(p0, q0);
    let mut members = vec![(0..x.num_vertices()).collect::<Vec<_>>()];
    let mut far = grid_vertex(q0, p0, q0);
    for &(p, q) in &boxes[1..] {
        let g = grid(p, q);
        let (y, relabel) = wedge(&x, far, &g, 0);
        members.push(relabel.clone());
        far = relabel[grid_vertex(q, p, q)];
        x = y;
    }
    for m in &mut members {
        m.sort_unstable();
    }
    (x, members)
}

/// Tree from a parent array: vertex `i > 0` hangs from `parent[i - 1] < i`.
pub fn tree_from_parents(parents: &[usize]) -> CubeComplex {
    let edges: Vec<[usize; 2]> = parents
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            assert!(p <= i, "parent must precede child");
            [p, i + 1]
        })
        .collect();
    CubeComplex::from_graph(parents.len() + 1, &edges).expect("trees are median")
}

pub fn random_tree(n: usize, rng: &mut impl Rng) -> CubeComplex {
    assert!(n >= 1);
    let parents: Vec<usize> = (1..n).map(|i| rng.random_range(0..i)).collect();
    tree_from_parents(&parents)
}

/// Star tree: `arms` paths of `len` edges from the centre 0.
pub fn star_tree(arms: usize, len: usize) -> CubeComplex {
    let mut parents = Vec::new();
    for a in 0..arms {
        for k in 0..len {
            parents.push(if k == 0 { 0 } else { 1 + a * len + k - 1 });
        }
    }
    tree_from_parents(&parents)
}
