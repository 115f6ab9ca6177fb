from dataclasses import replace

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import lobachevsky_quad
from ptbundle.errors import NoInteriorPoint, NonConvergence
from ptbundle.hyperbolic import (_interior_point, gluing_residual, gradient, lobachevsky,
                                 objective, regular_ideal_volume, shape_triples,
                                 solve_geometric, volume)
from ptbundle.sl2z import TwistWord
from ptbundle.triangulation import build_layered_triangulation

V3 = 1.0149416064096536


def solve(syl):
    t = build_layered_triangulation(TwistWord(syl))
    a, z = solve_geometric(t)
    return t, a, z


def test_lobachevsky_examples():
    assert lobachevsky(0.0) == 0.0
    assert abs(lobachevsky(np.pi / 2)) < 1e-16
    assert abs(regular_ideal_volume() - V3) < 1e-15
    assert abs(3 * lobachevsky(np.pi / 3) - 2 * lobachevsky(np.pi / 6)) < 1e-15


def test_lobachevsky_against_mpmath():
    xs = np.linspace(-2 * np.pi, 2 * np.pi, 4001)
    ours = lobachevsky(xs)
    ref = np.array([float(mpmath.clsin(2, 2 * mpmath.mpf(x)) / 2) for x in xs])
    assert np.max(np.abs(ours - ref)) < 1e-14


def test_lobachevsky_against_quadrature():
    for x in np.linspace(0.01, np.pi - 0.01, 37):
        assert abs(lobachevsky(x) - lobachevsky_quad(x)) < 1e-13


@settings(max_examples=200)
@given(st.floats(-20, 20))
def test_lobachevsky_odd_and_periodic(x):
    assert abs(lobachevsky(-x) + lobachevsky(x)) < 1e-14
    assert abs(lobachevsky(x + np.pi) - lobachevsky(x)) < 1e-13


def test_gradient_matches_central_differences():
    rng = np.random.default_rng(1)
    for _ in range(50):
        x = rng.uniform(0.05, np.pi - 0.05, size=9)
        h = 1e-6
        fd = [(objective(x + h * e) - objective(x - h * e)) / (2 * h) for e in np.eye(9)]
        assert np.max(np.abs(np.array(fd) - gradient(x))) < 1e-6


def test_figure_eight_solution():
    t, a, sol = solve(((1, 1),))
    assert np.allclose(a.angles, np.pi / 3, atol=1e-13)
    assert np.allclose(sol.shapes, np.exp(1j * np.pi / 3), atol=1e-13)
    v = volume(a)
    assert abs(v.volume - 2 * V3) < 1e-12
    assert v.bound_satisfied and abs(v.equality_gap) < 1e-12


def test_cat_map_square_and_r2l():
    _, a, _ = solve(((1, 1), (1, 1)))
    assert abs(volume(a).volume - 4 * V3) < 1e-9
    _, a, _ = solve(((2, 1),))
    v = volume(a)
    assert v.bound_satisfied and v.equality_gap > 0.3


def test_r2l_census_volume():
    # the R^2 L bundle is the census manifold m009
    _, a, _ = solve(((2, 1),))
    assert abs(volume(a).volume - 2.666744783449061) < 1e-9


def _bloch_wigner(z):
    z = mpmath.mpc(z)
    return float(mpmath.im(mpmath.polylog(2, z)) + mpmath.arg(1 - z) * mpmath.log(abs(z)))


@pytest.mark.parametrize("syl", [((2, 1),), ((1, 2), (2, 1)), ((3, 1), (1, 1)), ((1, 1), (1, 4))])
def test_solution_consistency(syl):
    t, a, sol = solve(syl)
    z = sol.shapes
    assert sol.residual < 1e-12
    assert (z.imag > 0).all()
    assert np.allclose(np.angle(shape_triples(z)), a.angles, atol=1e-9)
    # volume from the shapes by the Bloch-Wigner dilogarithm
    dv = sum(_bloch_wigner(x) for x in z)
    assert abs(dv - volume(a).volume) < 1e-10


def test_wrong_orientation_breaks_gluing():
    t, _, sol = solve(((2, 1),))
    flipped = replace(t, tetrahedra=tuple(replace(x, shape_order=x.shape_order[::-1])
                                          for x in t.tetrahedra))
    assert gluing_residual(flipped, sol.shapes) > 1e-3


def test_rotations_give_equal_volumes():
    w = TwistWord(((3, 1), (1, 2), (2, 2)))
    vols = [volume(solve(w.rotate(r).syllables)[1]).volume for r in range(3)]
    assert max(vols) - min(vols) < 1e-9


def test_errors():
    with pytest.raises(NoInteriorPoint):
        _interior_point(np.array([[1.0, 0.0, 0.0], [1.0, 1.0, 1.0]]), np.array([0.0, np.pi]))
    t = build_layered_triangulation(TwistWord(((2, 1),)))
    with pytest.raises(NonConvergence):
        solve_geometric(t, max_iter=1)
    with pytest.raises(ValueError):
        solve_geometric(t, tol=0)
