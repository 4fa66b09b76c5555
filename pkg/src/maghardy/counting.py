"""End-to-end negative-eigenvalue counting for (i grad + A)^2 - lam V.

Per-mode counts (inertia, oscillation, or phase-integral) are truncated at
the mode bound and summed; coupling sweeps fit the growth exponent of N(lam)
on the largest decade with at least 10 eigenvalues.  The integral bound
int V_+ (1 + |log r|) r dr and the sup-functional route are provided for
bound verification, including divergence detection for borderline
potentials.
"""

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import InsufficientGrowth, UnboundedWarning
from .grids import Grid
from .profiles import Potential, RadialField
from .spectral import (
    assemble_mode,
    count_negative,
    forbidden_margin,
    mode_truncation,
    phase_integral_count,
    prufer_count,
)
from .weights import v_norm_a

METHOD_INERTIA = "inertia"
METHOD_PRUFER = "prufer"
METHOD_PHASE = "phase"


def max_workers() -> int:
    env = os.environ.get("MAGNETIC_HARDY_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class CountReport:
    lam: float
    per_mode: dict
    m_max: int
    total: float
    method: str
    grid_meta: dict | None
    forbidden_margin: float | None

    def as_dict(self):
        return {
            "lambda": self.lam,
            "per_mode": {str(k): v for k, v in self.per_mode.items()},
            "m_max": self.m_max,
            "total": self.total,
            "method": self.method,
            "grid": self.grid_meta,
            "forbidden_margin": self.forbidden_margin,
        }


@dataclass(frozen=True)
class SweepResult:
    reports: tuple
    fitted_exponent: float
    fit_window: tuple
    residual: float

    def as_dict(self):
        return {
            "reports": [r.as_dict() for r in self.reports],
            "fitted_exponent": self.fitted_exponent,
            "fit_window": list(self.fit_window),
            "residual": self.residual,
        }


def count_total(
    field: RadialField,
    V: Potential,
    lam: float,
    grid: Grid | None,
    method: str = METHOD_INERTIA,
) -> CountReport:
    """Mode-truncated total count for coupling lam by the chosen method.

    Inertia and oscillation counts require a grid (Dirichlet-truncated
    domain; omitted regions only ever under-count).  The phase method also
    accepts grid=None, in which case it integrates to the true turning
    points — the regime used for strong-coupling exponent fits.
    """
    if lam < 0:
        raise ValueError("coupling must be nonnegative")
    if method not in (METHOD_INERTIA, METHOD_PRUFER, METHOD_PHASE):
        raise ValueError(f"unknown method {method!r}")
    if grid is None and method != METHOD_PHASE:
        raise ValueError("inertia and oscillation methods require a grid")
    if lam == 0.0:
        return CountReport(
            lam=0.0,
            per_mode={},
            m_max=0,
            total=0,
            method=method,
            grid_meta=grid.meta() if grid else None,
            forbidden_margin=None,
        )

    if grid is not None:
        m_max = mode_truncation(field, V, grid, lam)
    else:
        probe = Grid.auto(-1e7, 1.0, 2000)
        m_max = mode_truncation(field, V, probe, lam)
    modes = list(range(-m_max, m_max + 1))

    def one(m):
        if method == METHOD_INERTIA:
            return count_negative(assemble_mode(field, V, m, grid, lam=lam))
        if method == METHOD_PRUFER:
            return prufer_count(field, V, m, (grid.t_min, grid.t_max), lam=lam)
        dom = (grid.t_min, grid.t_max) if grid is not None else None
        return phase_integral_count(field, V, m, lam, t_domain=dom)

    workers = min(max_workers(), max(len(modes), 1))
    if workers > 1 and len(modes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(one, modes))
    else:
        counts = [one(m) for m in modes]
    per_mode = dict(zip(modes, counts))
    total = sum(per_mode.values())
    margin = None
    if grid is not None and modes:
        margin = forbidden_margin(field, V, grid, lam, modes)
    return CountReport(
        lam=float(lam),
        per_mode=per_mode,
        m_max=m_max,
        total=total if method == METHOD_PHASE else int(total),
        method=method,
        grid_meta=grid.meta() if grid else None,
        forbidden_margin=margin,
    )


# ---------------------------------------------------------------------------
# Integral bound and its verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundValue:
    value: float
    unbounded: bool
    cap_sequence: tuple

    def as_dict(self):
        return {
            "value": self.value,
            "unbounded": self.unbounded,
            "cap_sequence": [list(x) for x in self.cap_sequence],
        }


def _log_weight_integral(V: Potential, t_min: float, t_max: float) -> float:
    """int V_+(t) e^{2t} (1+|t|) dt, split so deep tails run in s = log|t|."""
    total = 0.0
    t_inner = max(t_min, -np.e)
    if t_min < -np.e:

        def tail(s):
            t = -np.exp(s)
            return float(V.vplus_density(np.array(t)) * (1.0 + np.abs(t)) * np.exp(s))

        val, _ = integrate.quad(
            tail, 1.0, np.log(-t_min), epsabs=1e-13, epsrel=1e-10, limit=400
        )
        total += val

    def direct(t):
        return float(V.vplus_density(np.array(t)) * (1.0 + abs(t)))

    val, _ = integrate.quad(
        direct, t_inner, t_max, epsabs=1e-13, epsrel=1e-10, limit=400
    )
    return total + val


def bound_jst(
    V: Potential,
    t_min_cap: float = -1e4,
    t_max: float = 30.0,
    cap_doublings: int = 3,
    growth_tol: float = 0.01,
) -> BoundValue:
    """Constant-free value of int V_+ (1 + |log r|) r dr with cap sweep.

    The ``unbounded`` flag is raised when every doubling of the lower cap
    still grows the value by more than ``growth_tol`` relative — the
    signature of the borderline potentials this bound cannot handle.
    """
    caps = [t_min_cap * 2.0**k for k in range(cap_doublings + 1)]
    values = [_log_weight_integral(V, cap, t_max) for cap in caps]
    steps = [
        abs(v2 - v1) / v2 if v2 > 0 else 0.0 for v1, v2 in zip(values[:-1], values[1:])
    ]
    unbounded = bool(steps and all(s >= growth_tol for s in steps))
    if unbounded:
        warnings.warn(
            "log-weighted potential integral grows without saturating",
            UnboundedWarning,
        )
    return BoundValue(
        value=float(values[-1]),
        unbounded=unbounded,
        cap_sequence=tuple(zip(caps, values)),
    )


def verify_counting_bound(
    field: RadialField,
    V: Potential,
    a: float,
    lambda_list,
    method: str = METHOD_PHASE,
    grid: Grid | None = None,
    t_min_cap: float = -1e4,
):
    """Table of (lam, N, [lam V]_a^a, ratio) over the coupling ladder.

    The sup-functional is evaluated once and scaled by homogeneity
    [lam V]_a = lam [V]_a; the ratio N / [lam V]_a^a estimates the bound
    constant from below and must stay bounded along the ladder.
    """
    base = v_norm_a(V, a, t_min_cap=t_min_cap)
    rows = []
    for lam in lambda_list:
        rep = count_total(field, V, float(lam), grid, method=method)
        denom = (lam * base.value) ** a
        ratio = rep.total / denom if denom > 0 else 0.0
        rows.append(
            {
                "lambda": float(lam),
                "N": rep.total,
                "va_pow_a": float(denom),
                "ratio": float(ratio),
            }
        )
    return {"rows": rows, "v_norm": base.as_dict(), "a": a}


def sweep_exponent(
    field: RadialField,
    V: Potential,
    lambda_list,
    method: str = METHOD_PHASE,
    grid: Grid | None = None,
) -> SweepResult:
    """Fit the growth exponent of log N against log lam.

    The ladder must be geometric with at least 5 points; the fit window is
    the largest decade of the ladder on which every count is >= 10.
    """
    lams = np.asarray(sorted(float(x) for x in lambda_list))
    if lams.size < 5:
        raise ValueError("need at least 5 ladder points")
    ratios = lams[1:] / lams[:-1]
    if np.max(ratios) / np.min(ratios) > 1.2:
        raise ValueError("ladder must be geometric")

    workers = min(max_workers(), lams.size)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(
                pool.map(lambda l: count_total(field, V, l, grid, method=method), lams)
            )
    else:
        reports = [count_total(field, V, l, grid, method=method) for l in lams]
    reports.sort(key=lambda r: r.lam)
    totals = np.array([r.total for r in reports], dtype=float)

    eligible = totals >= 10.0
    if not np.any(eligible):
        raise InsufficientGrowth("counts stayed below 10 over the whole ladder")
    window = None
    for hi in range(lams.size - 1, -1, -1):
        lo_val = lams[hi] / 10.0
        sel = (lams >= lo_val * (1 - 1e-9)) & (lams <= lams[hi])
        if np.sum(sel) >= 2 and np.all(totals[sel] >= 10.0):
            window = sel
            break
    if window is None:
        window = eligible
    x = np.log(lams[window])
    y = np.log(totals[window])
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return SweepResult(
        reports=tuple(reports),
        fitted_exponent=float(slope),
        fit_window=(float(np.exp(x[0])), float(np.exp(x[-1]))),
        residual=resid,
    )
