import math
import textwrap

import numpy as np
import pytest

from ksbound.grid import Grid, make_field
from ksbound.model import ModelParams
from ksbound.solver import (
    ConfigError,
    EllipticSolveError,
    Mode,
    SimConfig,
    SimState,
    Termination,
    init_state,
    load_sim_config,
    run,
    sim_config_from_mapping,
    solve_elliptic,
    step_pe,
    step_pp,
)

VALID_INI = textwrap.dedent("""\
    [model]
    n = 2
    alpha = 1.0
    l = 0.5
    mode = pp

    [domain]
    dims = 2
    extent = 1.0
    resolution = 16

    [time]
    t_end = 0.1
    dt_max = 0.01
    safety = 0.4
    dt_min = 1e-10

    [init]
    preset = gaussian
    mass = 1.0
    amplitude = 0.1
    seed = 0

    [output]
    path = out/run
    stride = 50
    growth_threshold = 1e6
""")


def quick_config(**overrides):
    base = dict(
        n=2, alpha=1.0, l=0.5, dims=2, extent=1.0, resolution=16,
        t_end=0.05, preset="gaussian", mass=1.0, amplitude=0.1, stride=20,
    )
    base.update(overrides)
    return SimConfig(**base)


class TestConfig:
    def test_valid_file_round_trip(self, tmp_path):
        path = tmp_path / "sim.ini"
        path.write_text(VALID_INI)
        cfg = load_sim_config(path)
        assert cfg.n == 2 and cfg.resolution == 16 and cfg.mode is Mode.PP
        assert cfg.K == 1.0 and cfg.K0 == 1.0  # bracketed defaults

    def test_missing_required_key(self, tmp_path):
        path = tmp_path / "sim.ini"
        path.write_text(VALID_INI.replace("resolution = 16\n", ""))
        with pytest.raises(ConfigError, match="resolution"):
            load_sim_config(path)

    def test_unknown_key_is_hard_error(self, tmp_path):
        path = tmp_path / "sim.ini"
        path.write_text(VALID_INI.replace("[time]", "[time]\nresolutoin = 16"))
        with pytest.raises(ConfigError, match="unknown key"):
            load_sim_config(path)

    def test_unknown_section_is_hard_error(self):
        with pytest.raises(ConfigError, match="unknown config section"):
            sim_config_from_mapping({"modle": {}})

    def test_bad_mode(self, tmp_path):
        path = tmp_path / "sim.ini"
        path.write_text(VALID_INI.replace("mode = pp", "mode = parabolic"))
        with pytest.raises(ConfigError, match="mode"):
            load_sim_config(path)

    def test_bad_number(self, tmp_path):
        path = tmp_path / "sim.ini"
        path.write_text(VALID_INI.replace("t_end = 0.1", "t_end = soon"))
        with pytest.raises(ConfigError, match="t_end"):
            load_sim_config(path)


class TestInitState:
    def test_constant_preset_exact(self):
        state = init_state(quick_config(preset="constant", mass=3.0, extent=2.0))
        expect = 3.0 / 4.0  # mass / |domain|
        np.testing.assert_allclose(state.u.values, expect, rtol=1e-15)
        assert state.v.values.max() == 0.0

    def test_gaussian_mass_normalization(self):
        mass = 4 * math.pi
        state = init_state(quick_config(mass=mass, resolution=32))
        got = state.u.values.sum() * state.u.grid.cell_volume
        assert got == pytest.approx(mass, abs=1e-10)

    @pytest.mark.parametrize("preset", ["gaussian", "constant-perturbed", "two-bumps"])
    def test_presets_nonnegative(self, preset):
        state = init_state(quick_config(preset=preset, amplitude=0.2, mass=2.0))
        assert state.u.values.min() >= 0.0

    def test_nonpositive_mass_rejected(self):
        with pytest.raises(ConfigError, match="mass"):
            init_state(quick_config(mass=0.0))

    def test_unknown_preset_rejected(self):
        with pytest.raises(ConfigError, match="preset"):
            init_state(quick_config(preset="plateau"))

    def test_two_bumps_has_two_maxima(self):
        state = init_state(quick_config(preset="two-bumps", amplitude=0.05, resolution=32))
        u = state.u.values
        interior = u[1:-1, 1:-1]
        peaks = (
            (interior >= u[:-2, 1:-1]) & (interior >= u[2:, 1:-1])
            & (interior >= u[1:-1, :-2]) & (interior >= u[1:-1, 2:])
            & (interior > 1e-3 * u.max())
        )
        assert peaks.sum() == 2


class TestUniformExactSolution:
    def test_ode_reproduced_to_machine_precision(self):
        # spatially uniform data kills every gradient: u stays c and
        # v solves v' = -v + K0 c^l exactly under the exponential update
        c, cv = 2.0, 0.25
        params = ModelParams(n=2, alpha=1.0, l=0.5, K0=3.0)
        grid = Grid(dims=2, extent=1.0, resolution=16)
        state = SimState(
            u=make_field(grid, np.full(grid.shape, c)),
            v=make_field(grid, np.full(grid.shape, cv)),
            t=0.0, dt=0.0, mode=Mode.PP,
        )
        dt = 1e-3
        for _ in range(1000):
            state = step_pp(state, params, dt)
        geq = 3.0 * c**0.5
        expect = geq + (cv - geq) * math.exp(-state.t)
        assert state.t == pytest.approx(1.0, rel=1e-12)
        np.testing.assert_allclose(state.u.values, c, rtol=1e-13)
        np.testing.assert_allclose(state.v.values, expect, rtol=1e-6)
        # the exponential reaction update is exact here, so much tighter holds
        np.testing.assert_allclose(state.v.values, expect, rtol=1e-12)


class TestDecayControls:
    def test_pure_diffusion_relaxes_to_mean(self):
        # f == 0 kills chemotaxis; the bump must relax monotonically to its mean
        params = ModelParams(n=2, alpha=1.0, l=0.5, sensitivity=lambda s: 0.0 * s)
        cfg = quick_config(t_end=2.0, resolution=16, stride=50)
        state = init_state(cfg)
        mean = 1.0  # mass / |Omega|
        dt = 0.4 * state.u.grid.spacing**2 / 4
        dists = []
        for k in range(int(2.0 / dt)):
            state = step_pp(state, params, dt)
            if k % 100 == 0:
                dists.append(float(((state.u.values - mean) ** 2).sum()))
        assert all(b <= a + 1e-15 for a, b in zip(dists, dists[1:]))
        np.testing.assert_allclose(state.u.values, mean, atol=1e-6)

    def test_signal_decay_envelope(self):
        # g == 0: sup|v(t)| <= exp(-t) sup|v0| within 1%
        params = ModelParams(n=2, alpha=1.0, l=0.5, production=lambda s: 0.0 * s)
        grid = Grid(dims=2, extent=1.0, resolution=16)
        rng = np.random.default_rng(2)
        v0 = rng.uniform(0.5, 2.0, size=grid.shape)
        state = SimState(
            u=make_field(grid, np.ones(grid.shape)),
            v=make_field(grid, v0), t=0.0, dt=0.0, mode=Mode.PP,
        )
        dt = 0.4 * grid.spacing**2 / 4  # the solver's own diffusive limit
        sup0 = v0.max()
        for _ in range(int(5.0 / dt)):
            state = step_pp(state, params, dt)
            assert state.v.values.max() <= 1.01 * sup0 * math.exp(-state.t)

    def test_uniform_signal_decays_exactly(self):
        params = ModelParams(n=2, alpha=1.0, l=0.5, production=lambda s: 0.0 * s)
        grid = Grid(dims=1, extent=1.0, resolution=32)
        state = SimState(
            u=make_field(grid, np.ones(grid.shape)),
            v=make_field(grid, np.full(grid.shape, 0.7)),
            t=0.0, dt=0.0, mode=Mode.PP,
        )
        for _ in range(200):
            state = step_pp(state, params, 5e-3)
        np.testing.assert_allclose(
            state.v.values, 0.7 * math.exp(-state.t), rtol=1e-12
        )


class TestElliptic:
    def test_uniform_right_hand_side(self):
        params = ModelParams(n=2, alpha=1.0, l=0.5, K0=2.0)
        grid = Grid(dims=2, extent=1.0, resolution=32)
        u = make_field(grid, np.full(grid.shape, 4.0))
        v = solve_elliptic(u, params)
        np.testing.assert_allclose(v.values, 2.0 * 2.0, rtol=1e-10)

    def test_eigenmode_convergence_order(self):
        # cell-centered cosine is an exact discrete eigenvector; the solve
        # converges to the continuous solution at second order
        params = ModelParams(n=2, alpha=1.0, l=1.0)
        L = 1.0
        errs = []
        for res in (32, 64, 128):
            grid = Grid(dims=2, extent=L, resolution=res)
            X, _ = grid.cell_centers()
            u = 1.0 + 0.5 * np.cos(np.pi * X / L)
            v = solve_elliptic(make_field(grid, u), params, tol=1e-12)
            exact = 1.0 + 0.5 * np.cos(np.pi * X / L) / (1.0 + (np.pi / L) ** 2)
            errs.append(np.abs(v.values - exact).max())
        orders = [math.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]
        assert min(orders) >= 1.8

    def test_residual_postcondition(self):
        from ksbound.kernels import helmholtz_apply_2d
        from ksbound.model import eval_production

        params = ModelParams(n=2, alpha=1.0, l=0.5)
        grid = Grid(dims=2, extent=1.0, resolution=32)
        rng = np.random.default_rng(4)
        u = make_field(grid, rng.uniform(0.0, 3.0, size=grid.shape))
        tol = 1e-10
        v = solve_elliptic(u, params, tol=tol)
        b = eval_production(u.values, params)
        res = b - helmholtz_apply_2d(v.values, grid.spacing)
        assert np.sqrt(np.vdot(res, res)) <= tol * np.sqrt(np.vdot(b, b))

    def test_nonnegativity(self):
        params = ModelParams(n=2, alpha=1.0, l=0.5)
        grid = Grid(dims=2, extent=1.0, resolution=32)
        rng = np.random.default_rng(8)
        u = make_field(grid, rng.uniform(0.0, 1.0, size=grid.shape) ** 4)
        v = solve_elliptic(u, params)
        assert v.values.min() >= -1e-14

    def test_iteration_cap(self):
        params = ModelParams(n=2, alpha=1.0, l=0.5)
        grid = Grid(dims=2, extent=1.0, resolution=32)
        u = make_field(grid, np.ones(grid.shape) + np.linspace(0, 1, 32)[:, None])
        with pytest.raises(EllipticSolveError):
            solve_elliptic(u, params, tol=1e-14, max_iter=2)

    def test_zero_density_gives_zero_signal(self):
        params = ModelParams(n=2, alpha=1.0, l=0.5)
        grid = Grid(dims=1, extent=1.0, resolution=16)
        v = solve_elliptic(make_field(grid), params)
        assert np.all(v.values == 0.0)


class TestStepPE:
    def test_uniform_fixed_point(self):
        params = ModelParams(n=2, alpha=1.0, l=0.5, K0=1.5)
        grid = Grid(dims=2, extent=1.0, resolution=16)
        c = 4.0
        state = SimState(
            u=make_field(grid, np.full(grid.shape, c)),
            v=make_field(grid), t=0.0, dt=0.0, mode=Mode.PE,
        )
        out = step_pe(state, params, 1e-4)
        np.testing.assert_array_equal(out.u.values, state.u.values)
        np.testing.assert_allclose(out.v.values, 1.5 * c**0.5, rtol=1e-10)

    def test_mass_conserved_per_step(self):
        params = ModelParams(n=2, alpha=1.2, l=0.5)
        cfg = quick_config(mode=Mode.PE, alpha=1.2)
        state = init_state(cfg)
        vol = state.u.grid.cell_volume
        m0 = state.u.values.sum() * vol
        for _ in range(50):
            state = step_pe(state, params, 1e-5)
        assert state.u.values.sum() * vol == pytest.approx(m0, rel=1e-13)

    def test_mode_mismatch_rejected(self):
        params = ModelParams(n=2, alpha=1.0, l=0.5)
        state = init_state(quick_config())
        with pytest.raises(ValueError, match="ParabolicElliptic"):
            step_pe(state, params, 1e-4)
        pe_state = init_state(quick_config(mode=Mode.PE))
        with pytest.raises(ValueError, match="ParabolicParabolic"):
            step_pp(pe_state, params, 1e-4)


class TestRun:
    @pytest.mark.parametrize("mode", [Mode.PP, Mode.PE])
    def test_conservation_and_positivity(self, mode):
        cfg = quick_config(mode=mode, t_end=0.02, resolution=32, mass=5.0)
        result = run(cfg)
        assert result.termination is Termination.COMPLETED
        m = [r.mass for r in result.records]
        assert abs(m[-1] - m[0]) / m[0] <= 1e-12
        assert result.state.u.values.min() >= -1e-14
        assert result.state.v.values.min() >= -1e-14

    def test_pure_diffusion_run_reaches_uniform(self):
        cfg = quick_config(t_end=2.0, alpha=1.0, K=1e-300, mass=2.0, stride=10**6)
        # K ~ 0 disables advection while keeping params valid
        result = run(cfg)
        assert result.termination is Termination.COMPLETED
        np.testing.assert_allclose(result.state.u.values, 2.0, atol=1e-6)

    def test_record_timestamps_strictly_increasing(self):
        result = run(quick_config(t_end=0.05, stride=7))
        ts = [r.t for r in result.records]
        assert all(b > a for a, b in zip(ts, ts[1:]))
        assert ts[-1] == pytest.approx(0.05, rel=1e-12)

    def test_final_time_reached_exactly(self):
        result = run(quick_config(t_end=0.031))
        assert result.state.t == pytest.approx(0.031, rel=1e-12)

    def test_step_underflow(self):
        cfg = quick_config(dt_min=1.0)  # above any stable step
        result = run(cfg)
        assert result.termination is Termination.STEP_UNDERFLOW
        assert result.steps == 0

    @pytest.mark.slow
    def test_supercritical_mass_growth_suspected(self):
        # classic linear sensitivity/production far above the critical mass,
        # instantaneous signal: the discrete proxy for chemotactic collapse
        cfg = SimConfig(
            n=2, alpha=1.0, l=1.0, dims=2, extent=1.0, resolution=24,
            t_end=0.5, preset="gaussian", mass=60.0, amplitude=0.08,
            mode=Mode.PE, stride=500, growth_threshold=1.5, dt_min=1e-9,
        )
        result = run(cfg)
        assert result.termination is Termination.GROWTH_SUSPECTED
        sups = [r.sup_u + r.sup_v for r in result.records]
        assert sups[-1] > 1.5 * sups[0]

    def test_one_dimensional_run(self):
        cfg = quick_config(dims=1, resolution=64, t_end=0.1)
        result = run(cfg)
        assert result.termination is Termination.COMPLETED
        m = [r.mass for r in result.records]
        assert abs(m[-1] - m[0]) / m[0] <= 1e-12

    def test_symmetry_preserved(self):
        cfg = quick_config(resolution=32, t_end=0.2, mass=10.0)
        result = run(cfg)
        u = result.state.u.values
        assert np.abs(u - u[::-1, :]).max() <= 1e-12
        assert np.abs(u - u[:, ::-1]).max() <= 1e-12

    def test_growth_threshold_validation(self):
        with pytest.raises(ConfigError, match="growth_threshold"):
            quick_config(growth_threshold=0.5)
