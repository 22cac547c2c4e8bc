"""The batch experiments behind the CLI.

Each experiment function maps a ``RunConfig`` to ``(metrics, checks)``:
``metrics`` is a flat dict of scalars, ``checks`` a list of dicts with
``name``, ``value``, ``threshold``, ``comparison`` ('le' or 'ge') and
``passed``.  All randomness flows from ``cfg.seed`` through named
substreams, so a fixed config reproduces every number exactly.
"""

from __future__ import annotations

import numpy as np

from .config import RunConfig
from .ensembles import band_limited_field, ensemble
from .field import (
    Field2D,
    Grid2D,
    lp_norm,
    pairing,
    sample_radial,
    sobolev_norm_1p,
)
from .nls import (
    NlsProblem,
    SolverTrace,
    energy_field,
    mass,
    picard_solve,
    rescale_alpha,
    rescale_field,
    sobolev_embedding_check,
    strang_propagate,
    strang_step,
    write_trace_csv,
)
from .operator import (
    Decomposition,
    PointInteraction,
    apply_forward,
    beta,
    c_functional,
    free_resolvent,
    gamma0_op,
    gamma1_op,
    gamma_op,
    green_field,
    green_field_discrete,
    inv_sqrt,
    lambda_decompose,
    resolvent,
    resolvent_decomposition,
)
from .propagator import TimeGrid, cn_step, get_stepper, strichartz_norm
from .quadrature import QuadratureRule
from .special import phi0_array

__all__ = ["run_experiment", "EXPERIMENT_FUNCS"]


def _check(name, value, threshold, comparison="le"):
    value = float(value)
    passed = value <= threshold if comparison == "le" else value >= threshold
    return {
        "name": name,
        "value": value,
        "threshold": float(threshold),
        "comparison": comparison,
        "passed": bool(passed),
    }


def _grid(cfg: RunConfig) -> Grid2D:
    return Grid2D(cfg.n, cfg.L)


def _band(cfg: RunConfig) -> float:
    # the ensemble band is anchored to the configured base resolution
    # (capped at the 512 default) so that base and refined grids sample
    # the same continuum functions
    return np.pi * min(cfg.n, 512) / (4.0 * cfg.L)


def _pi(cfg: RunConfig) -> PointInteraction:
    return PointInteraction(cfg.alpha)


def _unit_gaussian(grid: Grid2D) -> Field2D:
    x = grid.coords
    vals = np.exp(-(x[:, None] ** 2 + x[None, :] ** 2))
    f = Field2D(grid, vals)
    return (1.0 / lp_norm(f, 2.0)) * f


def _smooth_state(pi: PointInteraction, f: Field2D) -> Field2D:
    """Operator-smoothed data (in the domain of the cube of the generator),
    needed wherever a convergence order is measured."""
    u = resolvent(pi, 2.0, resolvent(pi, 3.0, resolvent(pi, 2.5, f)))
    return (1.0 / lp_norm(u, 2.0)) * u


def _rel(a: Field2D, b: Field2D) -> float:
    return lp_norm(a - b, 2.0) / max(lp_norm(b, 2.0), 1e-300)


def resolvent_checks(cfg: RunConfig):
    grid = _grid(cfg)
    pi = _pi(cfg)
    fields = ensemble(grid, cfg.seed, 10, kmax=_band(cfg))

    id_err = 0.0
    for f in fields:
        for w1, w2 in ((2.3, 3.7), (2.0 + 1.5j, 0.7 - 0.4j)):
            lhs = resolvent(pi, w1, f) - resolvent(pi, w2, f)
            rhs = (w2 - w1) * resolvent(pi, w1, resolvent(pi, w2, f))
            id_err = max(id_err, _rel(lhs, rhs))

    sa_err = 0.0
    for f, h in zip(fields[:5], fields[5:]):
        a = pairing(resolvent(pi, 3.0, f), h)
        b = pairing(f, resolvent(pi, 3.0, h))
        sa_err = max(sa_err, abs(a - b) / max(abs(a), 1e-300))

    align = 1.0
    gref = green_field_discrete(3.0, grid)
    for f in fields:
        diff = resolvent(pi, 3.0, f) - free_resolvent(3.0, f)
        align = min(
            align,
            abs(pairing(diff, gref)) / (lp_norm(diff, 2.0) * lp_norm(gref, 2.0)),
        )

    rng = np.random.default_rng([cfg.seed, 101])
    beta_err = max(
        abs(beta(PointInteraction(a), PointInteraction(a).omega0))
        for a in rng.uniform(-1.0, 2.0, 100)
    )

    # eigenpair at omega0 + 1: exact for the grid eigenvector; the
    # continuum-sampled Green differs at the origin node and is reported
    # as a metric only
    gd = green_field_discrete(pi.omega0, grid)
    eig_err = _rel(resolvent(pi, pi.omega0 + 1.0, gd), gd)
    gs = green_field(pi.omega0, grid)
    eig_sampled = _rel(resolvent(pi, pi.omega0 + 1.0, gs), gs)

    metrics = {
        "first_resolvent_identity_error": id_err,
        "self_adjointness_error": sa_err,
        "rank_one_alignment": align,
        "beta_omega0_max": beta_err,
        "eigenpair_error": eig_err,
        "eigenpair_error_sampled_green": eig_sampled,
    }
    checks = [
        _check("first_resolvent_identity", id_err, 1e-10),
        _check("self_adjointness", sa_err, 1e-10),
        _check("rank_one_alignment", align, 1.0 - 1e-8, "ge"),
        _check("beta_at_omega0", beta_err, 1e-12),
        _check("eigenpair", eig_err, 1e-3),
    ]
    return metrics, checks


def theorem21(cfg: RunConfig):
    grid = _grid(cfg)
    pi = _pi(cfg)
    omega = cfg.omega
    if not omega > pi.omega0:
        omega = pi.omega0 + 1.0
    rule = QuadratureRule.build(omega, cfg.n_nodes, cfg.t_max_factor)
    self_test = rule.self_test_error()

    f = _unit_gaussian(grid)
    twice = inv_sqrt(pi, omega, inv_sqrt(pi, omega, f, rule), rule)
    semi = _rel(twice, resolvent(pi, omega, f))

    # elliptic estimate ||(1-Delta_alpha)^{-1/2} f||_{H^{1,p}} <= C ||f||_p,
    # p = 1.5, with refinement stability of the measured C
    rule1 = QuadratureRule.build(1.0, cfg.n_nodes, cfg.t_max_factor)
    ratios = {}
    for n in (cfg.n, 2 * cfg.n):
        g = Grid2D(n, cfg.L)
        fs = ensemble(g, cfg.seed, 10, kmax=_band(cfg))
        ratios[n] = max(
            sobolev_norm_1p(inv_sqrt(pi, 1.0, h, rule1), 1.5) / lp_norm(h, 1.5)
            for h in fs
        )
    stability = abs(ratios[2 * cfg.n] / ratios[cfg.n] - 1.0)

    metrics = {
        "quadrature_self_test": self_test,
        "invsqrt_semigroup_error": semi,
        "elliptic_ratio_base": ratios[cfg.n],
        "elliptic_ratio_refined": ratios[2 * cfg.n],
        "elliptic_ratio_change": stability,
    }
    checks = [
        _check("quadrature_self_test", self_test, 1e-8),
        _check("invsqrt_semigroup", semi, 1e-6),
        _check("elliptic_ratio_stability", stability, 0.2),
    ]
    return metrics, checks


def theorem22(cfg: RunConfig):
    grid = _grid(cfg)
    pi = _pi(cfg)
    rule = QuadratureRule.build(1.0, cfg.n_nodes, cfg.t_max_factor)
    fields = ensemble(grid, cfg.seed, 10, kmax=_band(cfg))
    b1 = complex(beta(pi, 1.0))

    asm_err = 0.0
    coeff_err = 0.0
    for f in fields:
        d = lambda_decompose(pi, f, rule)
        ref = inv_sqrt(pi, 1.0, f, rule)
        asm_err = max(asm_err, _rel(d.assemble(), ref))
        expected = d.regular_at_origin() / b1
        coeff_err = max(
            coeff_err, abs(d.coeff - expected) / max(abs(d.coeff), 1e-300)
        )

    metrics = {
        "assemble_vs_invsqrt_error": asm_err,
        "coeff_consistency_error": coeff_err,
    }
    checks = [
        _check("assemble_vs_invsqrt", asm_err, 1e-4),
        _check("coeff_consistency", coeff_err, 1e-2),
    ]
    return metrics, checks


def gamma_norms(cfg: RunConfig):
    pi = _pi(cfg)
    # a 200-node rule keeps the (node x radius) kernel matrices of the
    # refined grid inside memory; the measured ratios are rule-insensitive
    rule = QuadratureRule.build(1.0, 200, cfg.t_max_factor)
    gamma_ps = (1.5, 2.0, 3.0, 4.0)

    ratio_sets = {}
    witness = {}
    for n in (cfg.n, 2 * cfg.n):
        grid = Grid2D(n, cfg.L)
        fields = ensemble(grid, cfg.seed, 20, kmax=_band(cfg))
        r = {}
        for p in gamma_ps:
            r[f"gamma_p{p}"] = max(
                sobolev_norm_1p(gamma_op(pi, f, rule), p) / lp_norm(f, p)
                for f in fields
            )
        r["gamma0_q4"] = max(
            lp_norm(gamma0_op(pi, f, rule), 4.0) / lp_norm(f, 4.0) for f in fields
        )
        r["gamma1_p1.5"] = max(
            sobolev_norm_1p(gamma1_op(pi, f, rule), 1.5) / lp_norm(f, 1.5)
            for f in fields
        )
        r["c_p4"] = max(
            abs(c_functional(pi, 1.0, f, rule)) / lp_norm(f, 4.0) for f in fields
        )
        ratio_sets[n] = r
        # divergence witnesses: the Green function and the singular profile
        # are outside H^{1,p} for p > 2; at p = 6 the discrete norm grows
        # like h^{-2/3} per refinement
        witness[n] = {
            "green": sobolev_norm_1p(green_field(1.0, grid), 6.0),
            "phi0": sobolev_norm_1p(sample_radial(grid, phi0_array), 6.0),
        }

    metrics = {}
    checks = []
    for key in ratio_sets[cfg.n]:
        base = ratio_sets[cfg.n][key]
        fine = ratio_sets[2 * cfg.n][key]
        change = abs(fine / base - 1.0)
        metrics[f"ratio_{key}_base"] = base
        metrics[f"ratio_{key}_refined"] = fine
        metrics[f"ratio_{key}_change"] = change
        checks.append(_check(f"stability_{key}", change, 0.2))
    for key in ("green", "phi0"):
        growth = witness[2 * cfg.n][key] / witness[cfg.n][key]
        metrics[f"witness_{key}_growth"] = growth
        checks.append(_check(f"witness_{key}_growth", growth, 1.5, "ge"))
    return metrics, checks


def propagate_linear(cfg: RunConfig, out_dir=None):
    grid = _grid(cfg)
    pi = _pi(cfg)

    u0 = band_limited_field(grid, [cfg.seed, 201], kmax=_band(cfg))
    n_long = 1000
    tau = 1.0 / 256.0
    # stream the long run: storing 10^3 full-resolution frames would not fit
    stepper = get_stepper(pi, grid, tau)
    m0 = mass(u0)
    mass_drift = 0.0
    early = [u0]
    u = u0
    for k in range(n_long):
        u = stepper.apply(u)
        mass_drift = max(mass_drift, abs(mass(u) - m0) / m0)
        if k < 64:
            early.append(u)

    gd = green_field_discrete(pi.omega0, grid)
    tg = TimeGrid(1.0, 256)
    bs_step = get_stepper(pi, grid, tg.tau)
    end = gd
    for _ in range(tg.n_steps):
        end = bs_step.apply(end)
    z = pairing(end, gd) / pairing(gd, gd)
    phase_err = abs(float(np.angle(z * np.exp(-1j * pi.omega0 * tg.t_final))))

    us = _smooth_state(pi, u0)

    def _terminal(n_steps):
        step = get_stepper(pi, grid, 0.5 / n_steps)
        v = us
        for _ in range(n_steps):
            v = step.apply(v)
        return v

    ref = _terminal(512)
    e_coarse = lp_norm(_terminal(64) - ref, 2.0)
    e_fine = lp_norm(_terminal(128) - ref, 2.0)
    order_ratio = e_coarse / e_fine

    sn = strichartz_norm(early, TimeGrid(64 * tau, 64), 4.0, 4.0)
    metrics = {
        "mass_drift": mass_drift,
        "bound_state_phase_error": phase_err,
        "order_ratio": order_ratio,
        "strichartz_44_ratio": sn.value / lp_norm(u0, 2.0),
    }
    checks = [
        _check("mass_drift", mass_drift, 1e-8),
        _check("bound_state_phase", phase_err, 1e-4),
        _check("order_ratio_low", order_ratio, 3.0, "ge"),
        _check("order_ratio_high", order_ratio, 5.0),
    ]
    return metrics, checks


def _strang_trace(prob: NlsProblem, tg: TimeGrid):
    """Streaming variant of strang_propagate: keeps the conservation trace
    and the final state but not the trajectory."""
    u = prob.initial_field()
    trace = SolverTrace()
    for k, t in enumerate(tg.times):
        if k > 0:
            u = strang_step(prob, u, tg.tau)
        trace.times.append(float(t))
        trace.mass.append(mass(u))
        trace.energy.append(energy_field(prob, u))
        trace.linf.append(lp_norm(u, np.inf))
    return u, trace


def nls_strang(cfg: RunConfig, out_dir=None):
    grid = _grid(cfg)
    pi = _pi(cfg)
    u0 = _unit_gaussian(grid)
    prob = NlsProblem(pi, cfg.p, cfg.mu, u0)

    _, trace = _strang_trace(prob, TimeGrid(2.0, 1000))
    m0 = trace.mass[0]
    mass_drift = max(abs(m - m0) / m0 for m in trace.mass)
    if out_dir is not None:
        write_trace_csv(f"{out_dir}/strang_trace.csv", trace)

    def _edrift(n_steps):
        _, tr = _strang_trace(prob, TimeGrid(0.5, n_steps))
        return max(abs(e - tr.energy[0]) for e in tr.energy)

    energy_ratio = _edrift(128) / _edrift(256)

    theta = 0.7
    prob_g = NlsProblem(pi, cfg.p, cfg.mu, np.exp(1j * theta) * u0)
    end_g = strang_propagate(prob_g, TimeGrid(0.1, 16))[0][-1]
    end_p = strang_propagate(prob, TimeGrid(0.1, 16))[0][-1]
    gauge_err = lp_norm(end_g - np.exp(1j * theta) * end_p, 2.0)

    tiny = 1e-6 * u0
    prob_t = NlsProblem(pi, cfg.p, cfg.mu, tiny)
    lin = strang_propagate(prob_t, TimeGrid(0.1, 16))[0][-1]
    ref = tiny
    for _ in range(16):
        ref = cn_step(pi, ref, 0.1 / 16)
    linear_limit = _rel(lin, ref)

    metrics = {
        "mass_drift": mass_drift,
        "energy_drift_ratio": energy_ratio,
        "gauge_covariance_error": gauge_err,
        "linear_limit_error": linear_limit,
    }
    checks = [
        _check("mass_drift", mass_drift, 1e-8),
        _check("energy_ratio_low", energy_ratio, 2.8, "ge"),
        _check("energy_ratio_high", energy_ratio, 5.2),
        _check("gauge_covariance", gauge_err, 1e-10),
        _check("linear_limit", linear_limit, 1e-8),
    ]
    return metrics, checks


def nls_picard(cfg: RunConfig, out_dir=None):
    grid = _grid(cfg)
    pi = _pi(cfg)
    u0 = _unit_gaussian(grid)

    def _max_ratio(residuals):
        r = [x for x in residuals if x > 1e-12]
        return max(
            (b / a for a, b in zip(r[:-1], r[1:])), default=0.0
        )

    prob2 = NlsProblem(pi, 2.0, 1, u0)
    _, tr2 = picard_solve(prob2, T=0.05, n_time_nodes=16)
    ratio_p2 = _max_ratio(tr2.picard_residuals)

    smooth = _smooth_state(pi, u0)
    prob3 = NlsProblem(pi, 3.0, 1, smooth)
    _, tr3 = picard_solve(prob3, T=0.02, n_time_nodes=16)
    ratio_p3 = _max_ratio(tr3.picard_residuals)

    prob = NlsProblem(pi, cfg.p, cfg.mu, u0)
    traj, trace = picard_solve(prob, T=0.05, n_time_nodes=32)
    strang_frames, _ = strang_propagate(prob, TimeGrid(0.05, 32))
    cross_err = _rel(traj[-1], strang_frames[-1])
    if out_dir is not None:
        write_trace_csv(f"{out_dir}/picard_trace.csv", trace)

    metrics = {
        "contraction_ratio_p2": ratio_p2,
        "contraction_ratio_p3": ratio_p3,
        "picard_vs_strang_error": cross_err,
    }
    checks = [
        _check("contraction_p2", ratio_p2, 0.5),
        _check("contraction_p3", ratio_p3, 0.95),
        _check("picard_vs_strang", cross_err, 1e-3),
    ]
    return metrics, checks


def rescaling_checks(cfg: RunConfig):
    grid = _grid(cfg)
    pi = _pi(cfg)
    rng = np.random.default_rng([cfg.seed, 301])
    beta_err = 0.0
    for _ in range(100):
        a = rng.uniform(-1.0, 2.0)
        w = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
        beta_err = max(
            beta_err,
            abs(beta(PointInteraction(a), w) - beta(PointInteraction(rescale_alpha(a, w)), 1.0)),
        )

    # operator identity: (omega - Delta_alpha) phi ==
    # omega S_lam^{-1} (1 - Delta_alphat) S_lam phi with lam = sqrt(omega)
    omega = cfg.omega
    lam = float(np.sqrt(omega))
    pit = PointInteraction(rescale_alpha(cfg.alpha, omega))
    f = band_limited_field(grid, [cfg.seed, 302], kmax=_band(cfg))
    d = resolvent_decomposition(pi, omega, f)
    lhs = apply_forward(pi, omega, d)
    ft = rescale_field(f, lam)
    dt = resolvent_decomposition(pit, 1.0, (1.0 / omega) * ft)
    rhs = rescale_field(apply_forward(pit, 1.0, dt), 1.0 / lam)
    op_err = _rel(Field2D(grid, omega * rhs.values), lhs)
    # same identity at the resolvent level
    res_err = _rel(
        resolvent(pit, 1.0, (1.0 / omega) * ft), rescale_field(resolvent(pi, omega, f), lam)
    )

    gauss = _unit_gaussian(grid)
    mass_err = abs(mass(rescale_field(gauss, 2.0)) - mass(gauss)) / mass(gauss)

    critical_gap = abs((1.0 - 3.0) - (-2.0))

    metrics = {
        "beta_identity_error": beta_err,
        "operator_rescaling_error": op_err,
        "resolvent_rescaling_error": res_err,
        "rescale_mass_error": mass_err,
        "critical_identity_gap": critical_gap,
    }
    checks = [
        _check("beta_identity", beta_err, 1e-14),
        _check("operator_rescaling", op_err, 1e-3),
        _check("rescale_mass", mass_err, 1e-8),
        _check("critical_identity", critical_gap, 0.0),
    ]
    return metrics, checks


def embedding_sweep(cfg: RunConfig):
    pi = _pi(cfg)
    q = 4.0
    rng = np.random.default_rng([cfg.seed, 401])
    coeffs = rng.standard_normal(100) + 1j * rng.standard_normal(100)
    scales = np.exp(rng.uniform(-1.0, 1.0, 100))

    ratios = {}
    for n in (cfg.n, 2 * cfg.n):
        grid = Grid2D(n, cfg.L)
        worst = 0.0
        for k in range(100):
            g = scales[k] * band_limited_field(grid, [cfg.seed, 402, k], kmax=_band(cfg))
            d = Decomposition(regular=g, coeff=complex(coeffs[k]), omega=1.0)
            worst = max(worst, sobolev_embedding_check(d, q))
        ratios[n] = worst
    change = abs(ratios[2 * cfg.n] / ratios[cfg.n] - 1.0)

    metrics = {
        "embedding_ratio_base": ratios[cfg.n],
        "embedding_ratio_refined": ratios[2 * cfg.n],
        "embedding_ratio_change": change,
    }
    checks = [_check("embedding_stability", change, 0.2)]
    return metrics, checks


EXPERIMENT_FUNCS = {
    "resolvent_checks": resolvent_checks,
    "theorem21": theorem21,
    "theorem22": theorem22,
    "gamma_norms": gamma_norms,
    "propagate_linear": propagate_linear,
    "nls_strang": nls_strang,
    "nls_picard": nls_picard,
    "rescaling_checks": rescaling_checks,
    "embedding_sweep": embedding_sweep,
}


def run_experiment(cfg: RunConfig, out_dir=None):
    func = EXPERIMENT_FUNCS[cfg.experiment]
    if cfg.experiment in ("propagate_linear", "nls_strang", "nls_picard"):
        return func(cfg, out_dir=out_dir)
    return func(cfg)
