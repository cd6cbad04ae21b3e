import numpy as np
import pytest

from eifg.core.exceptions import ConfigError, ParameterError, ProblemEvaluationError
from eifg.core.grid import DomainSpec, build_grid
from eifg.core.problems import (
    Problem,
    eval_reaction,
    example1,
    example_burgers,
    example_fh,
    example_mcf,
    fh_maximum_bound,
    fh_reaction,
    forcing_spectrum,
    get_problem,
    heat,
    initial_field,
    mcf_limit_radius,
    mcf_limit_volume,
    oversample_factor,
    reaction_spectrum,
)
from eifg.core.transform import PhysicalField, forward, inverse

H = 1e-3


def second_difference(f, s, h=H):
    return (-f(s + 2 * h) + 16 * f(s + h) - 30 * f(s) + 16 * f(s - h) - f(s - 2 * h)) / (12 * h**2)


def test_example1_manufactured_residual():
    problem = example1(dims=1)
    s = np.linspace(0.05, 0.95, 19)
    t = 0.3

    def u(x):
        return problem.exact(t, (x,))

    # u_t = -u for this solution, so u_t - u_xx - f(t, u) must vanish
    f = problem.reaction(t, u(s), None, (s,)) + problem.source(t, (s,))
    residual = -u(s) - second_difference(u, s) - f
    assert np.max(np.abs(residual)) < 1e-6


def test_example1_exact_is_separable():
    problem = example1(dims=3)
    grid = build_grid(problem.domain, [8, 8, 8])
    x, y, z = grid.mesh()
    one = example1(dims=1).exact
    expected = np.exp(-0.5) * one(0.0, (x,)) * one(0.0, (y,)) * one(0.0, (z,))
    np.testing.assert_allclose(problem.exact(0.5, (x, y, z)), expected, atol=1e-15)


def test_burgers_exact_solves_the_equation():
    epsilon = 0.1
    problem = example_burgers(epsilon)
    x = np.linspace(0.1, 1.9, 13)
    t, h = 0.4, 1e-4

    def u(t, x):
        return problem.exact(t, (x, 0.0, 0.0))

    u_t = (u(t + h, x) - u(t - h, x)) / (2 * h)
    u_x = (u(t, x + h) - u(t, x - h)) / (2 * h)
    u_xx = (u(t, x + h) - 2 * u(t, x) + u(t, x - h)) / h**2
    residual = u_t + u(t, x) * u_x - epsilon * u_xx
    assert np.max(np.abs(residual)) < 1e-6


def test_burgers_flux_matches_nodal_form():
    problem = example_burgers(0.1, dims=1)
    grid = build_grid(problem.domain, [64])
    u = PhysicalField(grid, problem.exact(0.0, grid.mesh()))
    spectral = inverse(reaction_spectrum(problem, 0.0, forward(u))).values
    (x,) = grid.mesh()
    # -u u_x in closed form at t = 0
    denom = 2 + np.cos(np.pi * x)
    u_x = 2 * 0.1 * np.pi**2 * (2 * np.cos(np.pi * x) + 1) / denom**2
    np.testing.assert_allclose(spectral, -u.values * u_x, atol=1e-10)


def test_burgers_domain():
    problem = example_burgers()
    assert problem.domain.lower == (0.0, 0.0, 0.0)
    assert problem.domain.upper == (2.0, 1.0, 1.0)
    assert problem.domain.diffusion == pytest.approx(0.1)
    assert problem.gradient_dependent
    assert not problem.needs_nodal_gradient


def test_mcf_reaction_is_odd_with_roots():
    problem = example_mcf()
    f = lambda u: problem.reaction(0.0, u, None, ())
    u = np.linspace(-1.5, 1.5, 31)
    np.testing.assert_allclose(f(-u), -f(u), atol=1e-12)
    np.testing.assert_allclose(f(np.array([-1.0, 0.0, 1.0])), 0.0, atol=1e-12)


def test_mcf_initial_profile():
    problem = example_mcf(d=2)
    grid = build_grid(problem.domain, [64, 64])
    u0 = initial_field(problem, grid).values
    assert u0[32, 32] == pytest.approx(np.tanh(0.4 / (np.sqrt(2) * 0.075)))
    assert u0[0, 0] < -0.99
    assert "radius" in problem.capabilities


def test_mcf_limits():
    assert mcf_limit_radius(0.0) == pytest.approx(0.4)
    assert mcf_limit_radius(0.075) == pytest.approx(0.1)
    assert mcf_limit_radius(1.0) == 0.0
    assert mcf_limit_radius(0.01, d=3) == pytest.approx(np.sqrt(0.12))
    assert mcf_limit_volume(0.01, d=2) == pytest.approx(np.pi * 0.14)
    assert mcf_limit_volume(0.01, d=3) ** (2 / 3) == pytest.approx(
        (4 * np.pi / 3) ** (2 / 3) * 0.12
    )


def test_fh_reaction_odd_and_bounded():
    u = np.linspace(-0.99, 0.99, 41)
    np.testing.assert_allclose(fh_reaction(-u, 0.8, 1.6), -fh_reaction(u, 0.8, 1.6), atol=1e-12)
    assert fh_reaction(0.0, 0.8, 1.6) == 0.0
    assert np.all(np.isfinite(fh_reaction(np.array([-1.0, 1.0]), 0.8, 1.6)))


def test_fh_maximum_bound():
    gamma = fh_maximum_bound(0.8, 1.6)
    assert gamma == pytest.approx(0.9575, abs=5e-4)
    assert abs(fh_reaction(gamma, 0.8, 1.6)) < 1e-10
    with pytest.raises(ParameterError):
        fh_maximum_bound(1.6, 0.8)


def test_fh_initial_data_is_seeded():
    grid = build_grid(DomainSpec.box(0.0, 1.0, 3), [8, 8, 8])
    first = initial_field(example_fh(seed=7), grid).values
    again = initial_field(example_fh(seed=7), grid).values
    other = initial_field(example_fh(seed=8), grid).values
    np.testing.assert_array_equal(first, again)
    assert not np.array_equal(first, other)
    assert np.max(np.abs(first)) <= 0.9
    assert example_fh(seed=7).domain.diffusion == pytest.approx(0.01)


def test_heat_is_linear():
    problem = heat(dims=2)
    grid = build_grid(problem.domain, [8, 8])
    u_hat = forward(initial_field(problem, grid))
    assert problem.is_linear
    assert not np.any(reaction_spectrum(problem, 0.0, u_hat).coeffs)


def test_eval_reaction_gradient_rules():
    problem = Problem(
        name="drift",
        domain=DomainSpec.box(0.0, 2 * np.pi, 1),
        reaction=lambda t, u, grad, coords: -grad[0],
        gradient_dependent=True,
    )
    grid = build_grid(problem.domain, [8])
    (x,) = grid.mesh()
    u = PhysicalField(grid, np.sin(x))
    with pytest.raises(ConfigError):
        eval_reaction(problem, 0.0, u)
    out = eval_reaction(problem, 0.0, u, [PhysicalField(grid, np.cos(x))])
    np.testing.assert_allclose(out.values, -np.cos(x))


def test_non_finite_reaction_names_problem():
    problem = Problem(
        name="broken",
        domain=DomainSpec.box(0.0, 1.0, 1),
        reaction=lambda t, u, grad, coords: np.full_like(u, np.nan),
    )
    grid = build_grid(problem.domain, [8])
    with pytest.raises(ProblemEvaluationError, match="broken"):
        reaction_spectrum(problem, 0.0, forward(PhysicalField(grid, np.ones(8))))


def test_get_problem():
    assert get_problem("burgers", {"epsilon": 0.2}).params["epsilon"] == 0.2
    assert get_problem("fh", {}, seed=3).params["seed"] == 3
    with pytest.raises(ConfigError):
        get_problem("kdv")
    with pytest.raises(ConfigError):
        get_problem("mcf", {"thickness": 0.1})
    with pytest.raises(ConfigError):
        get_problem("fh")


def test_forcing_is_projected_not_interpolated():
    problem = Problem(
        name="forced",
        domain=DomainSpec.box(0.0, 2 * np.pi, 1),
        forcing=lambda coords: np.cos(coords[0]) + np.cos(9 * coords[0]),
    )
    grid = build_grid(problem.domain, [8])
    coeffs = forcing_spectrum(problem, grid).coeffs
    # on 8 nodes cos(9x) aliases onto cos(x); truncation drops it instead
    np.testing.assert_allclose(coeffs[[1, -1]], [0.5, 0.5], atol=1e-14)
    coeffs = np.delete(coeffs, [1, 7])
    assert np.max(np.abs(coeffs)) < 1e-14
    assert not problem.is_linear


def test_forcing_scales_with_time_factor():
    problem = example1(dims=2)
    grid = build_grid(problem.domain, [8, 8])
    zero = forward(PhysicalField(grid, np.zeros(grid.shape)))
    got = reaction_spectrum(problem, 0.7, zero).coeffs
    np.testing.assert_allclose(got, np.exp(-0.7) * forcing_spectrum(problem, grid).coeffs, atol=1e-15)
    assert forcing_spectrum(problem, grid) is forcing_spectrum(problem, grid)


def test_forcing_oversampling_is_capped():
    domain = DomainSpec.box(0.0, 1.0, 3)
    assert oversample_factor(build_grid(domain, [32, 32, 32])) == 4
    assert oversample_factor(build_grid(domain, [128, 128, 128])) == 2
    assert oversample_factor(build_grid(domain, [512, 512, 512])) == 1
