"""Quick end-to-end check of the pycubex extension. Run after `pip install`."""

import json

import pycubex as cx


def main():
    x = cx.grid(3, 3)
    assert (x.num_vertices, x.num_hyperplanes, x.dimension) == (16, 6, 2)
    assert x.distance(0, 15) == 6 and x.distance_linf(0, 15) == 3
    assert x.median(0, 3, 12) == 0
    assert sorted(x.convex_hull([1, 4])) == [0, 1, 4, 5]
    assert cx.flat_rectangle_thickness(x) == 3
    assert cx.grid_thinness(x) == 3 and cx.join_thinness(x) == 3
    assert cx.four_point_delta(x)["twice_delta"] == 6
    assert len(cx.crossing_graph(x)) == 9

    again = cx.CubeComplex.from_json(x.to_json())
    assert again.edges == x.edges

    # bottom row of the grid: thick rectangles and a Π-shaped detour
    row = [0, 4, 8, 12]
    c = cx.contraction_constants(x, row)
    assert c["rect"]["value"] == 3 and c["grid"]["value"] == 3
    w = cx.morse_failure_witness(x, row, 3)
    assert w["height"] == 3 and w["path"][0] in row and w["path"][-1] in row
    assert not cx.contracting_ball_check(x, row, 0)["holds"]

    c4 = cx.DefiningGraph.cycle(4)
    assert not cx.meier_racg_hyperbolic(c4)
    assert not cx.racg_special_morse(c4, [0, 2])
    assert cx.racg_special_morse(c4, [0, 1])
    ball = cx.racg_ball(c4, 2)
    assert ball.dimension == 2

    tri = cx.DefiningGraph.parse("graph { a -- b; b -- c; c -- a }")
    assert cx.meier_racg_hyperbolic(tri)

    try:
        cx.CubeComplex.from_edges(4, [[0, 1], [1, 2], [2, 3], [3, 0], [0, 2]])
    except cx.CubexError:
        pass
    else:
        raise AssertionError("a square with a diagonal is not median")

    cfg = {"schema": 1, "source": {"builder": "grid", "p": 2, "q": 2}, "analyses": []}
    bundle = cx.report(json.dumps(cfg))
    assert bundle["results"] == []

    print("pycubex smoke test ok")


if __name__ == "__main__":
    main()
