"""Implementation of the command line commands.

Every command takes a `ResolvedRun` and the output destination and returns its exit code:
0 when all cross-checks pass, `CHECK_FAILED` otherwise. Results are written either way.
"""

from collections.abc import Callable

import numpy as np
import pandas as pd
from pydantic import BaseModel

from ..analytic import (
    delay_time,
    event_probs,
    first_count,
    mean_counts,
    mean_times_exp,
    one_count_density,
    p_zero,
    p_zero_exp,
    second_count,
    two_count_density,
)
from ..collision import convergence_table
from ..config import ResolvedRun
from ..continuum import density_grid, event_probabilities, no_count_prob
from ..model import ExponentialPulse, discretize_pulse, pure_components
from ..montecarlo import SamplerConfig, estimate
from ..numerics import integrate_1d
from ..utils import LOGGER, RunConfigurationError, parallel_map, write_csv, write_json

__all__ = ("COMMANDS", "CHECK_FAILED", "TimesReport")

CHECK_FAILED = 2
OTHER_LIMIT = 1e-3
EVENT_COLUMNS = ("P_R", "P_L", "P_RR", "P_LR", "P_RL", "P_LL")


def _check(ok: bool, message: str) -> int:
    if ok:
        return 0
    LOGGER.warning(message)
    return CHECK_FAILED


def _atom_only(run: ResolvedRun, command: str):
    if run.atom is None:
        raise RunConfigurationError(f"`{command}` needs an atom model (gamma1, gamma2, delta0)")


def _pure_state(run: ResolvedRun) -> np.ndarray:
    components = pure_components(run.initial)
    if len(components) != 1:
        raise RunConfigurationError("`converge` needs a pure initial state")
    return components[0][1]


def cmd_pzero(run: ResolvedRun, out) -> int:
    """No-count probability on the grid, closed form against the integrated evolution."""
    times = run.grid.times()
    if run.atom is not None and isinstance(run.pulse, ExponentialPulse):
        analytic = p_zero_exp(run.atom, run.atom_state, run.pulse.omega, times)
    elif run.atom is not None:
        analytic = p_zero(run.atom, run.atom_state, run.pulse, times)
    else:
        table = event_probabilities(run.model, run.pulse, run.initial, times, m_max=0)
        analytic = table["none"].to_numpy()
    quadrature = np.array(
        parallel_map(lambda t: no_count_prob(run.model, run.pulse, t, run.initial), times)
    )
    frame = pd.DataFrame(
        {
            "t": times,
            "P0_analytic": analytic,
            "P0_quadrature": quadrature,
            "abs_diff": np.abs(analytic - quadrature),
        }
    )
    write_csv(frame, out)
    worst = float(frame["abs_diff"].max())
    return _check(
        worst <= run.config.tolerance,
        f"no-count probabilities disagree by {worst:.3g} (tolerance {run.config.tolerance})",
    )


def _event_table(run: ResolvedRun, times: np.ndarray) -> pd.DataFrame:
    if run.atom is not None:
        p = event_probs(run.atom, run.atom_state, run.pulse, times)
        n_right, n_left = mean_counts(run.atom, run.atom_state, run.pulse, times)
    else:
        p = event_probabilities(
            run.model, run.pulse, run.initial, times, m_max=run.config.events.m_max
        )
        p = {key: p[key].to_numpy() for key in p.columns if key not in ("t", "total")}
        for key in ("R", "L", "RR", "LR", "RL", "LL"):
            p.setdefault(key, np.zeros_like(times))
        n_right = sum(p[key] * key.count("R") for key in p)
        n_left = sum(p[key] * key.count("L") for key in p)
    frame = pd.DataFrame({"t": times})
    for column in EVENT_COLUMNS:
        frame[column] = p[column[2:]]
    frame["N_R"] = n_right
    frame["N_L"] = n_left
    frame["total"] = sum(np.asarray(value) for value in p.values())
    return frame


def cmd_events(run: ResolvedRun, out) -> int:
    """Count pattern probabilities and mean counts on the grid."""
    frame = _event_table(run, run.grid.times())
    write_csv(frame, out)
    worst = float(np.max(np.abs(frame["total"] - 1.0)))
    return _check(
        worst <= run.config.tolerance,
        f"event probabilities miss normalization by {worst:.3g}",
    )


def cmd_densities(run: ResolvedRun, out) -> int:
    """Exclusive one and two count densities on all ordered pairs of grid points."""
    horizon = float(run.grid.t_max)
    frame = density_grid(
        run.model,
        run.pulse,
        run.initial,
        run.grid.times(),
        horizon,
        max_counts=run.config.densities.max_counts,
    )
    if run.atom is None:
        write_csv(frame, out)
        return 0

    def analytic(row) -> float:
        if np.isnan(row.t_second):
            return one_count_density(
                run.atom, run.atom_state, run.pulse, row.side_pattern, row.t_prime, horizon
            )
        return two_count_density(
            run.atom, run.atom_state, run.pulse, row.side_pattern, row.t_prime, row.t_second, horizon
        )

    frame["analytic"] = [analytic(row) for row in frame.itertuples(index=False)]
    frame["abs_diff"] = np.abs(frame["density"] - frame["analytic"])
    write_csv(frame, out)
    scale = np.maximum(1.0, np.abs(frame["analytic"]))
    worst = float(np.max((frame["abs_diff"] / scale).to_numpy(), initial=0.0))
    return _check(
        worst <= run.config.tolerance, f"densities disagree with the closed forms by {worst:.3g}"
    )


class MonteCarloTimes(BaseModel):
    """Sampled mean count times with their standard errors."""

    n_samples: int
    tau1: float | None
    tau1_std_error: float | None
    tau2: float | None = None
    tau2_std_error: float | None = None


class TimesReport(BaseModel):
    """Mean count times, in the run's time unit."""

    tau1_analytic: float
    tau1_quadrature: float
    tau2_analytic: float | None = None
    tau2_quadrature: float | None = None
    delay_time: float
    delay_lag: float
    monte_carlo: MonteCarloTimes | None = None


def _mean_time(density: Callable, run: ResolvedRun) -> float:
    # the densities have decayed to nothing well before the pulse horizon plus 40 decay times
    gamma = run.atom.gamma
    end = run.pulse.horizon + (40.0 / gamma if gamma > 0 else 0.0)
    points = [p for p in run.pulse.breakpoints if 0 < p < end]
    return float(integrate_1d(lambda t: t * density(t), 0.0, end, points=points).real)


def cmd_times(run: ResolvedRun, out) -> int:
    """Mean first and second count times, closed form against quadrature of the densities."""
    _atom_only(run, "times")
    atom, state, pulse = run.atom, run.atom_state, run.pulse
    want_second = run.config.times.second or state.is_excited()
    p1, tau1 = first_count(atom, state, pulse)
    tau2 = p2 = None
    if want_second:
        if not state.is_excited():
            raise RunConfigurationError("the second count time needs rho_ee = 1")
        p2, tau2 = second_count(atom, pulse, state)
    if isinstance(pulse, ExponentialPulse):
        closed = mean_times_exp(atom, pulse.omega, state, require_second=want_second)
        tau1, tau2 = closed.tau1, closed.tau2
    delay = delay_time(atom, pulse)
    report = TimesReport(
        tau1_analytic=tau1,
        tau1_quadrature=_mean_time(p1, run),
        tau2_analytic=tau2,
        tau2_quadrature=_mean_time(p2, run) if p2 is not None else None,
        delay_time=delay,
        delay_lag=-delay,
    )
    tol = run.config.tolerance
    code = _check(
        abs(report.tau1_analytic - report.tau1_quadrature) <= tol,
        f"tau1 disagrees: {report.tau1_analytic} against {report.tau1_quadrature}",
    )
    if tau2 is not None:
        code |= _check(
            abs(report.tau2_analytic - report.tau2_quadrature) <= tol,
            f"tau2 disagrees: {report.tau2_analytic} against {report.tau2_quadrature}",
        )
    if run.config.times.monte_carlo:
        result = _sample(run)
        sampler = run.config.sampler
        mc = MonteCarloTimes(
            n_samples=result.n_samples,
            tau1=result.tau1.probability if result.tau1 else None,
            tau1_std_error=result.tau1.std_error if result.tau1 else None,
        )
        code |= _within(mc.tau1, mc.tau1_std_error, tau1, sampler.n_sigma, "tau1")
        if tau2 is not None:
            mc = mc.model_copy(
                update={
                    "tau2": result.tau2.probability if result.tau2 else None,
                    "tau2_std_error": result.tau2.std_error if result.tau2 else None,
                }
            )
            code |= _within(mc.tau2, mc.tau2_std_error, tau2, sampler.n_sigma, "tau2")
        report = report.model_copy(update={"monte_carlo": mc})
    write_json(report, out)
    return code


def _within(value, std_error, reference, n_sigma, name) -> int:
    if value is None:
        return _check(False, f"no sample has a {name}")
    return _check(
        abs(value - reference) <= n_sigma * std_error,
        f"sampled {name} = {value} is {abs(value - reference) / std_error:.2f} standard errors "
        f"from {reference}",
    )


def cmd_converge(run: ResolvedRun, out) -> int:
    """Error of the discrete conditional pair for a sequence of time steps."""
    section = run.config.converge
    record = run.record(section.events, section.horizon)
    taus = [tau * run.time_unit for tau in section.taus]
    frame = convergence_table(
        run.model, run.pulse, _pure_state(run), record, taus, section.block_mode
    )
    write_csv(frame, out)
    ratios = frame["ratio"].dropna()
    code = _check(
        bool(((ratios >= section.ratio_min) & (ratios <= section.ratio_max)).all()),
        f"convergence ratios {list(ratios)} outside [{section.ratio_min}, {section.ratio_max}]",
    )
    if section.block_mode == "exact":
        worst = float(frame["balance"].max())
        code |= _check(
            worst <= section.balance_tol, f"outcome probabilities miss one by {worst:.3g}"
        )
    return code


def _sampling_grid(run: ResolvedRun) -> tuple[float, int]:
    section = run.config.sampler
    tau = section.tau * run.time_unit
    t_max = section.t_max * run.time_unit if section.t_max is not None else run.grid.t_max
    return tau, int(round(t_max / tau))


def _sample(run: ResolvedRun):
    section = run.config.sampler
    if run.config.seed is None:
        raise RunConfigurationError("Monte Carlo runs need a seed (`seed` or --seed)")
    tau, n_steps = _sampling_grid(run)
    n_samples = max(n_steps, int(np.ceil(run.pulse.horizon / tau)))
    dpulse = discretize_pulse(run.pulse, n_samples, n_samples * tau)
    config = SamplerConfig.create(
        seed=run.config.seed,
        n_samples=section.n_samples,
        tau=tau,
        n_steps=n_steps,
        block_mode=section.block_mode,
        max_events=section.max_events,
        chunk_size=section.chunk_size,
    )
    LOGGER.info(f"sampling {config.n_samples} records of {n_steps} collisions")
    result = estimate(config, run.model, dpulse, run.initial)
    if result.truncated:
        LOGGER.warning(f"{result.truncated} samples exceeded {config.max_events} counts")
    return result


def cmd_sample(run: ResolvedRun, out) -> int:
    """Sampled pattern frequencies against the continuous time probabilities."""
    result = _sample(run)
    n_sigma = run.config.sampler.n_sigma
    frame = result.to_dataframe()
    tau, n_steps = _sampling_grid(run)
    horizon = n_steps * tau
    if run.atom is not None:
        reference = event_probs(run.atom, run.atom_state, run.pulse, horizon)
    else:
        table = event_probabilities(run.model, run.pulse, run.initial, [horizon])
        reference = {key: float(table[key].iloc[0]) for key in table.columns if key != "t"}
    n = result.n_samples
    references, passed = [], []
    for row in frame.itertuples(index=False):
        if row.pattern == "other":
            ref = 0.0
            ok = row.probability <= OTHER_LIMIT
        else:
            ref = float(reference.get(row.pattern, 0.0))
            spread = max(np.sqrt(ref * (1 - ref) / n), row.std_error, 1.0 / n)
            ok = abs(row.probability - ref) <= n_sigma * spread
        references.append(ref)
        passed.append(bool(ok))
    frame["reference"] = references
    frame["pass"] = passed
    write_csv(frame, out)
    failed = [p for p, ok in zip(frame["pattern"], passed) if not ok]
    return _check(not failed, f"sampled patterns {failed} miss their references")


COMMANDS = {
    "pzero": cmd_pzero,
    "densities": cmd_densities,
    "events": cmd_events,
    "times": cmd_times,
    "converge": cmd_converge,
    "sample": cmd_sample,
}
