"""Per-mode radial operators: assembly, inertia counts, phase methods.

The mode-m quadratic form in t = log r,

    q_m[u] = int ( |u'|^2 + (m - alpha(t))^2 |u|^2 - e^{2t} V(t) |u|^2 ) dt,

is discretized with cell-difference stiffness and trapezoid-lumped zero-order
terms on a Dirichlet grid, giving a symmetric tridiagonal matrix whose
inertia yields exact negative-eigenvalue counts.  The same matrices drive the
Hardy-constant estimator (generalized eigenvalue bisection against a lumped
weight mass).  Oscillation (Pruefer) and phase-integral counts provide
independent cross-checks of the inertia route.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from . import _kernels
from .errors import NoTruncation, StiffnessFailure, ZeroPivotWarning
from .grids import Grid
from .profiles import Potential, RadialField, ScaledPotential, VSigma, ZeroPotential, _as_array
from .weights import Weight

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ModeOperator:
    """Symmetric tridiagonal discretization of the mode-m form (interior nodes)."""

    m: int
    diag: np.ndarray
    offdiag: np.ndarray
    grid: Grid

    @property
    def n(self):
        return self.diag.size


def _lumps(grid: Grid) -> np.ndarray:
    h = grid.steps
    return 0.5 * (h[:-1] + h[1:])


def assemble_mode(
    field: RadialField,
    V: Potential,
    m: int,
    grid: Grid,
    lam: float = 1.0,
    angular_override=None,
) -> ModeOperator:
    """Tridiagonal matrix of the mode form with Dirichlet ends.

    ``angular_override`` replaces the (m - alpha)^2 coefficient with given
    values at interior nodes (scalar or array); used for the discrete-angular
    cross-check against the full two-dimensional operator.
    """
    t = grid.t
    h = grid.steps
    ti = t[1:-1]
    if angular_override is None:
        ang = (m - field.alpha(ti)) ** 2
    else:
        ang = np.broadcast_to(np.asarray(angular_override, dtype=float), ti.shape)
    q = ang - lam * V.e2t_v(ti)
    lump = _lumps(grid)
    diag = 1.0 / h[:-1] + 1.0 / h[1:] + q * lump
    off = -1.0 / h[1:-1]
    return ModeOperator(m=int(m), diag=diag, offdiag=off, grid=grid)


def count_negative(op: ModeOperator) -> int:
    """Exact negative-eigenvalue count by LDL^T inertia (Sturm sequence)."""
    pivmin = _pivmin(op.diag, op.offdiag)
    neg, zero_pivots = _kernels.tridiag_inertia(op.diag, op.offdiag, pivmin)
    if zero_pivots:
        warnings.warn(
            f"{zero_pivots} exact zero pivot(s) perturbed in inertia count",
            ZeroPivotWarning,
        )
    return int(neg)


def _pivmin(diag, off):
    """Pivot floor: large enough to stop e^2/d overflow, far below any
    physically meaningful pivot."""
    scale = 1.0
    if diag.size:
        scale = max(scale, float(np.max(np.abs(diag))))
    if off.size:
        scale = max(scale, float(np.max(off * off)))
    return scale * 1e-292


def mode_truncation(field: RadialField, V: Potential, grid: Grid, lam: float = 1.0) -> int:
    """Smallest M with (m - alpha)^2 >= lam e^{2t} V on the grid for |m| > M.

    Modes beyond M see a pointwise nonnegative form and contribute no
    negative eigenvalues.  Raises NoTruncation when the claimed-forbidden
    modes are not actually forbidden at the grid edges (potential decaying
    too slowly for this domain).
    """
    t = grid.t
    vt = lam * V.vplus_density(t)
    if not np.any(vt > 0):
        return 0
    v_max = float(np.max(vt))
    # the grid-wise criterion says nothing about |t| beyond the grid; it is
    # only trustworthy when the potential has already decayed at the edges
    if vt[0] > 0.1 * v_max or vt[-1] > 0.1 * v_max:
        raise NoTruncation(
            "potential has not decayed at the grid edges; the mode bound "
            "cannot be certified — extend the grid"
        )
    alpha = field.alpha(t)
    a_max = float(np.max(np.abs(alpha)))
    bound = int(np.ceil(a_max + np.sqrt(v_max))) + 1

    def forbidden(m):
        return np.all((m - alpha) ** 2 >= vt)

    m_max = 0
    for m in range(-bound, bound + 1):
        if not forbidden(m):
            m_max = max(m_max, abs(m))
    return m_max


def forbidden_margin(field, V, grid, lam, m_values) -> float:
    """Signed edge margin ((m-a)^2 - v)/((m-a)^2 + v) minimized over modes."""
    edges = np.array([grid.t_min, grid.t_max])
    v = lam * V.vplus_density(edges)
    worst = 1.0
    for m in m_values:
        lam2 = (m - field.alpha(edges)) ** 2
        denom = lam2 + v
        frac = np.where(denom > 0, (lam2 - v) / np.where(denom > 0, denom, 1.0), 1.0)
        worst = min(worst, float(np.min(frac)))
    return worst


# ---------------------------------------------------------------------------
# Hardy-constant estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HardyEstimate:
    per_mode_minima: dict
    mu_star: float
    grid_meta: dict
    refinement_history: tuple

    def as_dict(self):
        return {
            "mu_star": self.mu_star,
            "per_mode_minima": {str(k): v for k, v in self.per_mode_minima.items()},
            "refinement_history": [list(x) for x in self.refinement_history],
            "grid": self.grid_meta,
        }


def smallest_generalized_mu(
    kdiag, off, mdiag, rel_tol: float = 1e-4
) -> float:
    """Smallest mu with K - mu M singular, by bisection on inertia.

    K must be positive semidefinite and M diagonal nonnegative (possibly
    singular); the count of negative eigenvalues of K - mu M equals the
    number of generalized eigenvalues below mu.
    """
    pivmin = _pivmin(kdiag, off)
    positive = mdiag > 0
    if not np.any(positive):
        return np.inf
    hi = float(np.min(kdiag[positive] / mdiag[positive]))
    hi = max(hi, 1e-300)
    for _ in range(200):
        neg, _z = _kernels.tridiag_inertia_shifted(kdiag, off, mdiag, hi, pivmin)
        if neg >= 1:
            break
        hi *= 2.0
    lo = 0.0
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        neg, _z = _kernels.tridiag_inertia_shifted(kdiag, off, mdiag, mid, pivmin)
        if neg >= 1:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def hardy_constant(
    field: RadialField,
    w: Weight,
    grid: Grid,
    m_range=range(-3, 4),
    refine_levels: int = 1,
    rel_tol: float = 1e-4,
) -> HardyEstimate:
    """Discrete Hardy constant: min over modes of the smallest Rayleigh quotient

        mu_m = min_u [ int |u'|^2 + (m-alpha)^2 u^2 dt ] / [ int w e^{2t} u^2 dt ]

    on the Dirichlet grid.  The minimum over a grid subspace over-estimates
    the continuum constant; the refinement history (midpoint-nested grids)
    must be non-increasing.
    """
    zero_v = ZeroPotential()
    history = []
    per_mode = {}
    g = grid
    mu_star = np.inf
    for level in range(refine_levels + 1):
        ti = g.t[1:-1]
        mass = w.mass_density(ti) * _lumps(g)
        per_mode = {}
        for m in m_range:
            op = assemble_mode(field, zero_v, m, g)
            per_mode[int(m)] = smallest_generalized_mu(op.diag, op.offdiag, mass, rel_tol)
        mu_star = float(min(per_mode.values()))
        history.append((g.n, mu_star))
        if level < refine_levels:
            g = g.refine()
    return HardyEstimate(
        per_mode_minima=per_mode,
        mu_star=mu_star,
        grid_meta=grid.meta(),
        refinement_history=tuple(history),
    )


# ---------------------------------------------------------------------------
# Pruefer oscillation count
# ---------------------------------------------------------------------------


def prufer_count(
    field: RadialField,
    V: Potential,
    m: int,
    t_range: tuple,
    lam: float = 1.0,
    tol: float = 1e-6,
    coeff_samples: int = 8192,
) -> int:
    """Node count of the zero-energy solution across t_range.

    Integrates the phase of -u'' + ((m-alpha)^2 - lam e^{2t} V) u = 0 with
    u(t0) = 0; the number of pi-crossings equals the Dirichlet negative-
    eigenvalue count on the interval up to boundary effects of +-1.
    """
    t0, t1 = float(t_range[0]), float(t_range[1])
    if not t1 > t0:
        raise ValueError("t_range must be increasing")
    tq = np.linspace(t0, t1, coeff_samples)
    qq = (m - field.alpha(tq)) ** 2 - lam * V.e2t_v(tq)
    span = t1 - t0
    theta, fail = _kernels.prufer_sweep(
        tq, qq, t0, t1, tol, span / 1024.0, span * 1e-12
    )
    if fail:
        raise StiffnessFailure("adaptive phase integration underflowed its step size")
    return int(np.floor(theta / np.pi))


# ---------------------------------------------------------------------------
# Phase-integral (semiclassical) count
# ---------------------------------------------------------------------------


def _unwrap_scaled(V: Potential, lam: float):
    while isinstance(V, ScaledPotential):
        lam *= V.lam
        V = V.base
    return V, lam


def phase_integral_count(
    field: RadialField,
    V: Potential,
    m: int,
    lambda_coupling: float,
    critical_shift: bool = True,
    t_domain: tuple | None = None,
) -> float:
    """(1/pi) int sqrt( (lam e^{2t} V - (m-alpha)^2 - kappa)_+ ) dt.

    kappa = 1/(4(1+t^2)) is the critical marginal coupling (enabled by
    default): without it the integral diverges for borderline r^{-2}-type
    potentials, and with it the borderline family reproduces the lam^sigma
    counting law with a finite turning point.  Set critical_shift=False for
    closed-form cross-checks on compact wells.

    For the borderline potential the integration runs in s = log|t| so
    turning points at astronomically large |t| cost O(1) nodes.
    """
    if lambda_coupling < 0:
        raise ValueError("coupling must be nonnegative")
    base, lam = _unwrap_scaled(V, lambda_coupling)
    if isinstance(base, VSigma):
        return _phase_integral_loglog(field, base, m, lam, critical_shift, t_domain)
    return _phase_integral_direct(field, V, m, lambda_coupling, critical_shift, t_domain)


def _phase_integral_loglog(field, V: VSigma, m, lam, critical_shift, t_domain):
    s_lo = np.log(2.0)
    if critical_shift:
        # turning point of lam s^{-1/sigma} = 1/4 caps the s-range
        s_cap = (4.0 * lam) ** V.sigma
    else:
        s_cap = np.inf
    if t_domain is not None:
        t_min = min(t_domain)
        if t_min >= -2.0:
            return 0.0
        s_cap = min(s_cap, np.log(-t_min))
    if not np.isfinite(s_cap):
        raise ValueError(
            "phase integral without the critical shift needs a finite t-domain "
            "for the borderline potential"
        )
    if s_cap <= s_lo:
        return 0.0

    def integrand(s):
        s = _as_array(s)
        well = lam * s ** (-1.0 / V.sigma)
        with np.errstate(over="ignore", invalid="ignore"):
            es = np.exp(s)
            am = np.abs(m - field.alpha(-es))
            # (e^s * am)^2 with am == 0 short-circuited: e^s may overflow to
            # inf, which is the correct "forbidden" limit whenever am > 0.
            ang = np.zeros_like(s)
            pos = am > 0.0
            ang[pos] = (es[pos] * am[pos]) ** 2
        barrier = 1.0 / (4.0 * (1.0 + np.exp(-2.0 * s))) if critical_shift else 0.0
        inside = well - ang - barrier
        return np.sqrt(np.maximum(inside, 0.0))

    s_nodes = np.geomspace(s_lo, s_cap, 20000)
    vals = integrand(s_nodes)
    total = np.trapezoid(vals, s_nodes)
    return float(total / np.pi)


def _phase_integral_direct(field, V, m, lam, critical_shift, t_domain):
    if t_domain is None:
        sup = V.support_t_max
        t_hi = 2.0 if sup is None else max(sup + 1.0, 1.0)
        t_lo = -60.0
    else:
        t_lo, t_hi = float(min(t_domain)), float(max(t_domain))

    def w_neg(t):
        t = _as_array(t)
        well = lam * V.e2t_v(t)
        ang = (m - field.alpha(t)) ** 2
        barrier = 1.0 / (4.0 * (1.0 + t * t)) if critical_shift else 0.0
        return well - ang - barrier

    probe = np.linspace(t_lo, t_hi, 4001)
    vals = w_neg(probe)
    if np.all(vals <= 0):
        return 0.0
    sign = vals > 0
    edges = []
    for i in range(len(probe) - 1):
        if sign[i] != sign[i + 1]:
            edges.append(
                float(optimize.brentq(lambda x: float(w_neg(x)), probe[i], probe[i + 1]))
            )
    # split at known jumps so no quadrature panel straddles a discontinuity
    breaks = set(edges) | {t_lo, t_hi}
    sup = V.support_t_max
    if sup is not None and np.isfinite(sup) and t_lo < sup < t_hi:
        breaks.add(float(sup))
    for k in field.kinks:
        if t_lo < k < t_hi:
            breaks.add(float(k))
    pts = sorted(breaks)
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        mid = 0.5 * (a + b)
        if w_neg(mid) <= 0:
            continue
        val, _err = integrate.quad(
            lambda x: float(np.sqrt(max(w_neg(x), 0.0))),
            a,
            b,
            epsabs=1e-12,
            epsrel=1e-10,
            limit=300,
        )
        total += val
    return float(total / np.pi)
