use proptest::prelude::*;

use cubex::builders::{product, raag_ball, racg_ball};
use cubex::curve::{contact_graph, crossing_graph, DeltaTable};
use cubex::hyperbolicity::{
    distance_linf, grid_thinness, join_thinness, max_flat_rectangle_thickness,
    thin_bicycle_constant,
};
use cubex::hyperplanes::{
    extract_grid_from_join, max_join, ramsey_bound, strongly_separated, well_separation_degree,
};
use cubex::median::{convex_hull, convex_hull_by_intervals, interval, median};
use cubex::morse::{
    contracting_ball_check, contraction_constant_grid, contraction_constant_join,
    contraction_constant_rect, morse_failure_witness,
};
use cubex::report::{run_pipeline, Analysis, PipelineConfig, Source};
use cubex::{CubeComplex, CubexError, DefiningGraph};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = DefiningGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<[usize; 2]> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| [a, b]))
            .collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let edges: Vec<[usize; 2]> = pairs
                .iter()
                .zip(keep)
                .filter(|(_, k)| *k)
                .map(|(e, _)| *e)
                .collect();
            DefiningGraph::unlabelled(n, &edges).unwrap()
        })
    })
}

fn source_strategy() -> impl Strategy<Value = Source> {
    let leaf = prop_oneof![
        (1..=4usize, 1..=4usize).prop_map(|(p, q)| Source::Grid { p, q }),
        (1..=3usize).prop_map(|dim| Source::Cube { dim }),
        (1..=6usize).prop_map(|steps| Source::Staircase { steps }),
        proptest::collection::vec(any::<prop::sample::Index>(), 1..12).prop_map(|ix| {
            Source::Tree {
                parents: ix.iter().enumerate().map(|(i, x)| x.index(i + 1)).collect(),
            }
        }),
        proptest::collection::vec((1..=2usize, 1..=3usize), 1..=3)
            .prop_map(|boxes| Source::TreeOfGrids { boxes }),
        (graph_strategy(4), 1..=2usize).prop_map(|(g, radius)| Source::Racg {
            graph: g.to_json(),
            radius
        }),
        (graph_strategy(3), 1..=2usize).prop_map(|(g, radius)| Source::Raag {
            graph: g.to_json(),
            radius
        }),
    ];
    prop_oneof![
        4 => leaf.clone(),
        1 => (1..=2usize, leaf).prop_map(|(length, right)| Source::Product {
            left: Box::new(Source::Path { length }),
            right: Box::new(right),
        }),
    ]
}

fn small_complex() -> impl Strategy<Value = CubeComplex> {
    source_strategy()
        .prop_map(|s| s.build().expect("builds").complex)
        .prop_filter("at most 80 vertices", |x| x.num_vertices() <= 80)
}

fn with_vertices<const K: usize>() -> impl Strategy<Value = (CubeComplex, [usize; K])> {
    (
        small_complex(),
        prop::array::uniform::<_, K>(any::<prop::sample::Index>()),
    )
        .prop_map(|(x, ix)| {
            let n = x.num_vertices();
            (x, ix.map(|i| i.index(n)))
        })
}

fn brute_interval(x: &CubeComplex, a: usize, b: usize) -> Vec<usize> {
    (0..x.num_vertices())
        .filter(|&z| x.distance(a, z) + x.distance(z, b) == x.distance(a, b))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn median_is_the_unique_point_of_three_intervals((x, [a, b, c]) in with_vertices::<3>()) {
        let common: Vec<usize> = brute_interval(&x, a, b)
            .into_iter()
            .filter(|&z| x.distance(b, z) + x.distance(z, c) == x.distance(b, c))
            .filter(|&z| x.distance(a, z) + x.distance(z, c) == x.distance(a, c))
            .collect();
        prop_assert_eq!(common, vec![median(&x, a, b, c)]);
    }

    #[test]
    fn halfspaces_are_convex((x, [a, b]) in with_vertices::<2>(), h in any::<prop::sample::Index>()) {
        let h = h.index(x.num_hyperplanes().max(1));
        prop_assume!(x.num_hyperplanes() > 0 && x.side(h, a) == x.side(h, b));
        for z in brute_interval(&x, a, b) {
            prop_assert_eq!(x.side(h, z), x.side(h, a));
        }
    }

    #[test]
    fn triangle_equality_exactly_on_intervals((x, [a, b, c]) in with_vertices::<3>()) {
        let (ab, bc, ac) = (x.distance(a, b), x.distance(b, c), x.distance(a, c));
        prop_assert!(ac <= ab + bc);
        prop_assert_eq!(ac == ab + bc, interval(&x, a, c).contains(&b));
    }

    #[test]
    fn product_distance_adds((x, [a, b]) in with_vertices::<2>(), (y, [c, d]) in with_vertices::<2>()) {
        prop_assume!(x.num_vertices() * y.num_vertices() <= 400);
        let p = product(&x, &y);
        let m = y.num_vertices();
        prop_assert_eq!(p.distance(a * m + c, b * m + d), x.distance(a, b) + y.distance(c, d));
    }

    #[test]
    fn hulls_by_halfspaces_and_by_intervals_agree((x, pts) in with_vertices::<3>(), k in 1..=3usize) {
        let s = &pts[..k];
        let hull = convex_hull(&x, s).unwrap();
        prop_assert_eq!(hull.members().to_vec(), convex_hull_by_intervals(&x, s));
    }

    #[test]
    fn separation_monotonicity(x in small_complex()) {
        let m = x.num_hyperplanes();
        prop_assume!(m <= 30);
        let t = DeltaTable::new(&x).unwrap();
        for j1 in 0..m {
            for j3 in 0..m {
                let Some(d13) = t.degree(j1, j3) else { continue };
                for j2 in 0..m {
                    if j2 == j1 || j2 == j3 || x.transverse(j2, j1) || x.transverse(j2, j3) {
                        continue;
                    }
                    if x.side_of_hyperplane(j2, j1) == x.side_of_hyperplane(j2, j3) {
                        continue;
                    }
                    let both = x.transverse_set(j1).and(x.transverse_set(j3));
                    prop_assert!(both.is_subset(x.transverse_set(j2)));
                    prop_assert!(d13 <= t.degree(j1, j2).unwrap().min(t.degree(j2, j3).unwrap()));
                }
            }
        }
    }

    #[test]
    fn strong_separation_is_degree_zero(x in small_complex(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let m = x.num_hyperplanes();
        prop_assume!(m >= 2);
        let (j, h) = (a.index(m), b.index(m));
        prop_assume!(j != h);
        let strong = strongly_separated(&x, j, h).unwrap();
        let disjoint = !x.transverse(j, h);
        prop_assert_eq!(strong, disjoint && well_separation_degree(&x, j, h).unwrap() == 0);
    }

    #[test]
    fn thinness_orders_and_ramsey(x in small_complex()) {
        let (grid, join) = (grid_thinness(&x).unwrap(), join_thinness(&x).unwrap());
        let bicycle = thin_bicycle_constant(&crossing_graph(&x)).unwrap();
        prop_assert!(grid <= join && join <= bicycle);
        let thick = max_flat_rectangle_thickness(&x);
        prop_assert!(thick.witness.is_isometric(&x));
        prop_assert!(grid <= thick.value && thick.value <= join);
        if x.dimension() <= 2 {
            prop_assert_eq!(thick.value, grid);
        }
        // a thick bicycle forces a grid past the dimension
        for k in x.dimension() + 1..=4 {
            if bicycle as u64 >= ramsey_bound(k) {
                prop_assert!(grid >= k);
            }
        }
        let j = max_join(&x).unwrap();
        j.validate(&x).unwrap();
        let k = x.dimension() + 1;
        match extract_grid_from_join(&x, &j, k) {
            Ok(g) => {
                g.validate(&x).unwrap();
                prop_assert!(g.h_side.len() >= k && g.v_side.len() >= k);
            }
            Err(CubexError::TooSmall(_)) => prop_assert!(j.thinness() < ramsey_bound(k) as usize),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn linf_between_l1_bounds((x, [a, b]) in with_vertices::<2>()) {
        let linf = distance_linf(&x, a, b).unwrap();
        let l1 = x.distance(a, b);
        prop_assert!(linf <= l1 && l1 <= x.dimension().max(1) * linf);
    }

    #[test]
    fn delta_l_is_a_monotone_metric((x, [a, b, c]) in with_vertices::<3>()) {
        let t = DeltaTable::new(&x).unwrap();
        let top = t.max_degree() + 2;
        for l in 0..=top {
            let d = |u, v| t.delta(&x, u, v, l);
            prop_assert_eq!(d(a, b), d(b, a));
            prop_assert_eq!(d(a, a), 0);
            prop_assert!(d(a, c) <= d(a, b) + d(b, c));
            prop_assert!(d(a, b) <= t.delta(&x, a, b, l + 1));
            prop_assert!(d(a, b) <= distance_linf(&x, a, b).unwrap());
            prop_assert_eq!(d(a, b) == 0, a == b);
        }
        prop_assert_eq!(t.delta(&x, a, b, top - 2), t.delta(&x, a, b, top + 3));
    }

    #[test]
    fn crossing_edges_are_contact_edges(x in small_complex()) {
        let (cross, contact) = (crossing_graph(&x), contact_graph(&x));
        for [a, b] in cross.edges() {
            prop_assert!(contact.has_edge(a, b));
        }
    }

    #[test]
    fn contraction_constants_compare((x, pts) in with_vertices::<3>(), k in 1..=3usize) {
        let y = convex_hull(&x, &pts[..k]).unwrap();
        let rect = contraction_constant_rect(&x, &y).unwrap();
        let grid = contraction_constant_grid(&x, &y).unwrap();
        let join = contraction_constant_join(&x, &y).unwrap();
        // one side of a thick rectangle holds either many disjoint or many
        // transverse hyperplanes, and transverse cliques stop at the dimension
        let dim = x.dimension();
        let ramsey_ok = if dim <= 2 {
            rect.value <= grid.value
        } else {
            (rect.value as u64) < ramsey_bound((grid.value + 1).max(dim + 1))
        };
        prop_assert!(
            ramsey_ok && grid.value <= 2 * rect.value && grid.value <= join.value,
            "rect {} grid {} join {} dim {}", rect.value, grid.value, join.value, dim
        );
        grid.family.validate(&x).unwrap();
        if let Some(w) = &rect.witness {
            prop_assert!(w.is_isometric(&x));
            prop_assert!(w.bottom().iter().all(|&v| y.contains(v)));
            prop_assert_eq!(w.thickness(), rect.value);
        }
        let balls = contracting_ball_check(&x, &y, 2 * rect.value);
        prop_assert!(balls.holds, "{:?}", balls.worst);
        // tallest certified detour; n = 0 always succeeds
        let mut tallest = 0;
        for n in 0..=rect.value {
            match morse_failure_witness(&x, &y, n) {
                Ok(w) => {
                    prop_assert_eq!(tallest + 1, n.max(1), "heights must succeed downward closed");
                    tallest = n;
                    prop_assert!(y.contains(w.path[0]) && y.contains(*w.path.last().unwrap()));
                    prop_assert!(w.height >= n);
                    for s in w.path.windows(2) {
                        prop_assert!(s[0] == s[1] || x.adjacent(s[0], s[1]));
                    }
                    for s in 0..w.path.len() {
                        for t in s + 1..w.path.len() {
                            prop_assert!(3 * x.distance(w.path[s], w.path[t]) >= t - s);
                        }
                    }
                }
                Err(CubexError::NoThickGrid(m)) => prop_assert_eq!(m, n),
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
        let far = (0..x.num_vertices()).map(|v| y.distance_to(&x, v)).max().unwrap();
        prop_assert!(tallest <= far);
        if grid.value >= 1 {
            prop_assert!(tallest >= 1);
        }
        if let Some(w) = &rect.witness {
            let rows_at_height = (0..=w.p).all(|i| (0..=w.q).all(|j| y.distance_to(&x, w.at(i, j)) == j));
            if rows_at_height {
                prop_assert_eq!(tallest, rect.value);
            }
        }
    }

    #[test]
    fn pipeline_is_deterministic(s in source_strategy()) {
        prop_assume!(s.build().unwrap().complex.num_vertices() <= 40);
        let cfg = PipelineConfig::new(s, vec![Analysis::Thickness, Analysis::Median, Analysis::CutVertex, Analysis::Hx]);
        let a = run_pipeline(&cfg).unwrap().to_json_pretty();
        let b = run_pipeline(&cfg).unwrap().to_json_pretty();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn racg_identity_hyperplanes_follow_the_graph() {
    for n in 1..=5 {
        for g in DefiningGraph::all_up_to_iso(n) {
            let b = racg_ball(&g, 2).unwrap();
            let x = &b.complex;
            let e = b.identity();
            let hyp: Vec<usize> = (0..n)
                .map(|u| x.edge_hyperplane(x.edge_between(e, b.generator_vertex(u)).unwrap()))
                .collect();
            for u in 0..n {
                for v in u + 1..n {
                    assert_eq!(
                        x.transverse(hyp[u], hyp[v]),
                        g.adjacent(u, v),
                        "{:?} {u} {v}",
                        g.edges()
                    );
                }
            }
        }
    }
}

/// In a RAAG ball, a disjoint pair near the identity either stays strongly
/// separated as the radius grows or its degree keeps growing.
#[test]
fn raag_pairs_are_strongly_separated_or_unbounded() {
    for n in 1..=3 {
        for g in DefiningGraph::all_up_to_iso(n) {
            let balls: Vec<_> = [2, 3, 4]
                .iter()
                .map(|&r| raag_ball(&g, r).unwrap())
                .collect();
            let tables: Vec<DeltaTable> = balls
                .iter()
                .map(|b| DeltaTable::new(&b.complex).unwrap())
                .collect();
            let b0 = &balls[0];
            let near: Vec<(Vec<u32>, Vec<u32>)> = b0
                .complex
                .edges()
                .filter(|&[u, v]| b0.word(u).len() <= 1 && b0.word(v).len() <= 1)
                .map(|[u, v]| (b0.word(u).to_vec(), b0.word(v).to_vec()))
                .collect();
            let hyp = |k: usize, e: &(Vec<u32>, Vec<u32>)| {
                let b = &balls[k];
                let (u, v) = (b.vertex_of(&e.0).unwrap(), b.vertex_of(&e.1).unwrap());
                b.complex
                    .edge_hyperplane(b.complex.edge_between(u, v).unwrap())
            };
            for e in &near {
                for f in &near {
                    let d: Vec<Option<usize>> = (0..3)
                        .map(|k| {
                            let (j, h) = (hyp(k, e), hyp(k, f));
                            if j == h {
                                None
                            } else {
                                tables[k].degree(j, h)
                            }
                        })
                        .collect();
                    let Some(d0) = d[0] else { continue };
                    let (d1, d2) = (d[1].unwrap(), d[2].unwrap());
                    if d0 == 0 {
                        assert_eq!((d1, d2), (0, 0), "{:?}", g.edges());
                    } else {
                        assert!(
                            d0 < d1 && d1 < d2,
                            "{:?}: degrees {d0}, {d1}, {d2}",
                            g.edges()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn racg_thickness_grows_with_induced_squares() {
    for n in 4..=5 {
        for g in DefiningGraph::all_up_to_iso(n) {
            if g.is_square_free() {
                continue;
            }
            for r in 3..=5 {
                let t = max_flat_rectangle_thickness(&racg_ball(&g, r).unwrap().complex).value;
                assert!(t >= r - 1, "{:?} r = {r}: thickness {t}", g.edges());
            }
        }
    }
}
