import random

from hypothesis import given, settings, strategies as st

from qhdecomp.balls import (
    ball_census,
    canonical_code,
    codes_at_radii,
    decode_code,
    extract_ball,
)
from qhdecomp.graph import relabel, validate

from conftest import cycle, graphs, path, random_bounded_graph
from oracles import rooted_isomorphic


def test_extract_cycle_radius1():
    b = extract_ball(cycle(10), 0, 1)
    assert b.n == 3 and b.graph.edge_count() == 2
    assert b.graph.degree(0) == 2  # root is the middle of the path


def test_extract_radius0():
    b = extract_ball(cycle(10), 0, 0)
    assert b.n == 1 and b.radius == 0


def test_extract_c4_radius2_is_whole():
    b = extract_ball(cycle(4), 0, 2)
    assert b.n == 4 and b.graph.edge_count() == 4


def test_cycle_roots_share_code():
    g = cycle(10)
    codes = {canonical_code(extract_ball(g, x, 1)) for x in range(10)}
    assert len(codes) == 1


def test_star_center_vs_leaf():
    star = validate([(0, i) for i in (1, 2, 3)], 4, 3)
    center = canonical_code(extract_ball(star, 0, 1))
    leaf = canonical_code(extract_ball(star, 1, 1))
    assert center != leaf


def test_census_cycle():
    assert list(ball_census(cycle(10), 1).values()) == [10]


def test_census_path5():
    assert sorted(ball_census(path(5), 1).values()) == [2, 3]


def test_census_disjoint_cycles():
    g = validate(
        [(i, (i + 1) % 4) for i in range(4)]
        + [(4 + i, 4 + (i + 1) % 6) for i in range(6)],
        10,
        2,
    )
    assert list(ball_census(g, 1).values()) == [10]


@given(graphs(max_n=16, max_d=4), st.integers(min_value=0, max_value=3))
def test_census_counts_sum_to_n(g, r):
    assert sum(ball_census(g, r).values()) == g.n


@settings(max_examples=60)
@given(
    st.integers(min_value=2, max_value=18),
    st.integers(min_value=0, max_value=3),
    st.integers(min_value=0, max_value=2 ** 32 - 1),
)
def test_relabel_invariance(n, r, seed):
    rng = random.Random(seed)
    g = random_bounded_graph(n, 4, rng)
    x = rng.randrange(n)
    perm = list(range(n))
    rng.shuffle(perm)
    b1 = extract_ball(g, x, r)
    b2 = extract_ball(relabel(g, perm), perm[x], r)
    code1, code2 = canonical_code(b1), canonical_code(b2)
    assert code1 == code2
    assert rooted_isomorphic(b1, b2)


@settings(max_examples=40)
@given(graphs(max_n=14, max_d=4))
def test_census_relabel_invariant_multiset(g):
    rng = random.Random(g.n * 1000 + g.edge_count())
    perm = list(range(g.n))
    rng.shuffle(perm)
    assert ball_census(g, 2) == ball_census(relabel(g, perm), 2)


@given(graphs(max_n=16, max_d=4))
def test_monotone_refinement(g):
    # equal radius-(r+1) codes imply equal radius-r codes
    cache = {}
    per_vertex = [codes_at_radii(g, v, (1, 2, 3), cache=cache) for v in range(g.n)]
    for r in (1, 2):
        seen = {}
        for v in range(g.n):
            key = per_vertex[v][r + 1]
            if key in seen:
                assert per_vertex[v][r] == per_vertex[seen[key]][r]
            else:
                seen[key] = v


@given(graphs(max_n=14, max_d=4), st.integers(min_value=0, max_value=3))
def test_decode_round_trip(g, r):
    for x in range(g.n):
        code = canonical_code(extract_ball(g, x, r))
        ball = decode_code(code)
        assert ball.radius == r
        assert canonical_code(ball) == code


def test_codes_at_radii_matches_single_extraction():
    g = cycle(9)
    multi = codes_at_radii(g, 0, (1, 2, 3))
    for r in (1, 2, 3):
        assert multi[r] == canonical_code(extract_ball(g, 0, r))


def test_labeled_codes_respect_truncation():
    g = path(3)
    full = [0b1011, 0b0111, 0b1100]
    b_full = extract_ball(g, 1, 1, labels=full, label_width=4)
    b_trunc = extract_ball(g, 1, 1, labels=[v >> 3 for v in full], label_width=1)
    assert b_full.labels == (0b0111, 0b1011, 0b1100)
    assert b_trunc.labels == (0, 1, 1)
    assert canonical_code(b_full) != canonical_code(b_trunc)


def test_colored_ball_codes_distinguish_colors():
    g = path(3)
    c1 = {(0, 1): 1, (1, 2): 2}
    c2 = {(0, 1): 2, (1, 2): 1}
    c3 = {(0, 1): 1, (1, 2): 3}
    # rooted at the middle, swapping the two edge colors is an isomorphism
    a = canonical_code(extract_ball(g, 1, 1, edge_colors=c1))
    b = canonical_code(extract_ball(g, 1, 1, edge_colors=c2))
    c = canonical_code(extract_ball(g, 1, 1, edge_colors=c3))
    assert a == b
    assert a != c
