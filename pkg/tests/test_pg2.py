"""Projective plane geometry: counts, incidence, line parametrization."""

import pytest

from tfcurves import gf, pg2


@pytest.fixture(params=[2, 3, 4, 5], ids=lambda q: f"q{q}")
def ctx(request):
    return gf.ctx_for_q(request.param)


def test_point_and_line_counts(ctx):
    q = ctx.size
    points = pg2.enumerate_points(ctx)
    lines = pg2.enumerate_lines(ctx)
    assert len(points) == q * q + q + 1
    assert len(lines) == q * q + q + 1
    assert len(set(points)) == len(points)
    assert len(set(lines)) == len(lines)


def test_incidence_counts(ctx):
    q = ctx.size
    points = pg2.enumerate_points(ctx)
    lines = pg2.enumerate_lines(ctx)
    for line in lines:
        assert sum(pg2.incident(P, line) for P in points) == q + 1
    for P in points:
        assert sum(pg2.incident(P, line) for line in lines) == q + 1


def test_two_points_span_one_line(ctx):
    points = pg2.enumerate_points(ctx)
    lines = pg2.enumerate_lines(ctx)
    for i, P in enumerate(points):
        for Q in points[i + 1:]:
            assert sum(pg2.incident(P, L) and pg2.incident(Q, L)
                       for L in lines) == 1


def test_normalize_is_canonical(ctx):
    points = pg2.enumerate_points(ctx)
    for P in points:
        for c in range(1, ctx.size):
            scaled = tuple(ctx.mul(c, x) for x in P.coords)
            assert pg2.normalize(ctx, scaled) == P
    with pytest.raises(ValueError):
        pg2.normalize(ctx, (0, 0, 0))


def test_lines_through_matches_incidence(ctx):
    points = pg2.enumerate_points(ctx)
    for P in points:
        through = pg2.lines_through(P)
        assert len(through) == ctx.size + 1
        assert all(pg2.incident(P, L) for L in through)


def test_line_basis_spans_line(ctx):
    for line in pg2.enumerate_lines(ctx):
        b0, b1 = line.basis
        assert pg2.incident(b0, line) and pg2.incident(b1, line)
        assert b0 != b1


def test_parameter_on_line_reconstructs_point(ctx):
    lines = pg2.enumerate_lines(ctx)
    for ctx_pt in (ctx, gf.ext_field(ctx, 2)):
        emb = ctx_pt.embed if ctx_pt is not ctx else (lambda v: v)
        for line in lines[:3]:
            b0, b1 = line.basis
            b0e = tuple(emb(x) for x in b0.coords)
            b1e = tuple(emb(x) for x in b1.coords)
            # every point of the line over ctx_pt comes from a parameter
            seen = set()
            for s, t in [(1, u) for u in ctx_pt.elements()] + [(0, 1)]:
                coords = tuple(
                    ctx_pt.add(ctx_pt.mul(s, x), ctx_pt.mul(t, y))
                    for x, y in zip(b0e, b1e))
                P = pg2.normalize(ctx_pt, coords)
                s2, t2 = pg2.parameter_on_line(line, P)
                P2 = pg2.normalize(ctx_pt, tuple(
                    ctx_pt.add(ctx_pt.mul(s2, x), ctx_pt.mul(t2, y))
                    for x, y in zip(b0e, b1e)))
                assert P2 == P
                seen.add(P)
            assert len(seen) == ctx_pt.size + 1


def test_parameter_rejects_off_line_point(ctx):
    line = pg2.enumerate_lines(ctx)[0]
    off = next(P for P in pg2.enumerate_points(ctx)
               if not pg2.incident(P, line))
    with pytest.raises(ValueError):
        pg2.parameter_on_line(line, off)


def test_point_degree(ctx):
    for P in pg2.enumerate_points(ctx):
        assert pg2.point_degree(P) == 1
    ext = gf.ext_field(ctx, 2)
    degrees = {pg2.point_degree(P) for P in pg2.enumerate_points(ext)}
    assert degrees == {1, 2}


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_closed_point_counts_satisfy_zeta_identity(q):
    # sum over m | e of m * a_m equals the number of rational points
    # of the projective line over GF(q^e)
    counts = pg2.closed_point_counts(q, 8)
    assert len(counts) == 8
    assert counts[0] == q + 1
    for e in range(1, 9):
        total = sum(m * counts[m - 1] for m in range(1, e + 1) if e % m == 0)
        assert total == q ** e + 1
    assert all(c >= 0 for c in counts)
