"""Hardy weight families, level sets, and the capped sup-functional.

Weights are radial; every family exposes both the raw value w(r) and the
"mass density" w(e^t) e^{2t}, which is the factor multiplying |u(t)|^2 dt in
weighted norms after the change of variables r dr -> e^{2t} dt.  The mass
density is always the overflow-safe form (e.g. the baseline log-squared
weight has mass density 1/(1+t^2)).

The sup-functional over thresholds tau,

    ([V]_a)^a = sup_{tau>0} tau^a * int_{ {V > tau w0} } w0(r) (1+|log r|) r dr

with w0 the baseline weight, is evaluated with level sets found by scan +
bisection, closed-form measure integrals, a geometric tau grid and golden
section refinement.  Divergence is detected by sweeping the lower domain cap.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, QuadratureFailure, ScanResolutionWarning, UnboundedWarning
from .profiles import Potential, RadialField, _as_array


class Weight:
    """Base class for radial weights w(r) > 0, accessed via t = log r."""

    kind = "abstract"

    def value(self, t):
        """Raw w(e^t); may overflow at extreme t."""
        raise NotImplementedError

    def mass_density(self, t):
        """w(e^t) e^{2t}, overflow-safe."""
        raise NotImplementedError

    def check_domain(self, t):
        """Raise DomainError if any node is outside the weight's domain."""
        return None


@dataclass(frozen=True)
class LogSquaredWeight(Weight):
    """Baseline weight 1/(r^2 (1 + log^2 r)); mass density 1/(1+t^2)."""

    kind: str = "log_squared"

    def value(self, t):
        t = _as_array(t)
        return np.exp(-2.0 * t) / (1.0 + t * t)

    def mass_density(self, t):
        t = _as_array(t)
        return 1.0 / (1.0 + t * t)


@dataclass(frozen=True)
class LogPowerWeight(Weight):
    """1/(r^2 |log r|^b), defined away from r = 1 (t = 0)."""

    b: float
    kind: str = "log_power"

    def value(self, t):
        t = _as_array(t)
        self.check_domain(t)
        return np.exp(-2.0 * t) * np.abs(t) ** (-self.b)

    def mass_density(self, t):
        t = _as_array(t)
        self.check_domain(t)
        return np.abs(t) ** (-self.b)

    def check_domain(self, t):
        if np.any(_as_array(t) == 0.0):
            raise DomainError("log-power weight is undefined at r = 1 (t = 0)")


@dataclass(frozen=True)
class FluxAugmentedWeight(Weight):
    """Baseline weight plus Phi^2 below the matching radius eta = e^{t_eta}.

    mass density = 1/(1+t^2) + alpha(t)^2 for t <= t_eta  (Phi^2 e^{2t}
    collapses to alpha^2, so the singular part never touches an exponential).
    The matching radius is carried in log units because the quarter-flux rule
    can place it at radii that underflow a linear float.
    """

    field: RadialField
    t_eta: float
    kind: str = "flux_augmented"

    @property
    def eta(self):
        return float(np.exp(self.t_eta))

    def value(self, t):
        t = _as_array(t)
        base = np.exp(-2.0 * t) / (1.0 + t * t)
        phi2 = (self.field.alpha(t) * np.exp(-t)) ** 2
        return np.where(t <= self.t_eta, base + phi2, base)

    def mass_density(self, t):
        t = _as_array(t)
        base = 1.0 / (1.0 + t * t)
        a2 = self.field.alpha(t) ** 2
        return np.where(t <= self.t_eta, base + a2, base)


@dataclass(frozen=True)
class ShiftedLogWeight(Weight):
    """1/(r^2 [1 + (log_+(r0/r))^2]) for a matching radius r0 > 1."""

    r0: float
    kind: str = "shifted_log"

    def __post_init__(self):
        if self.r0 <= 1.0:
            raise ValueError("r0 must exceed 1")

    def value(self, t):
        t = _as_array(t)
        s = np.maximum(np.log(self.r0) - t, 0.0)
        return np.exp(-2.0 * t) / (1.0 + s * s)

    def mass_density(self, t):
        t = _as_array(t)
        s = np.maximum(np.log(self.r0) - t, 0.0)
        return 1.0 / (1.0 + s * s)


@dataclass(frozen=True)
class AharonovBohmWeight(Weight):
    """min_k |mu - k|^2 / r^2 — the point-flux weight."""

    mu: float
    kind: str = "aharonov_bohm"

    @property
    def coefficient(self):
        frac = self.mu - np.floor(self.mu)
        return float(min(frac, 1.0 - frac) ** 2)

    def value(self, t):
        t = _as_array(t)
        return self.coefficient * np.exp(-2.0 * t)

    def mass_density(self, t):
        t = _as_array(t)
        return np.full_like(t, self.coefficient)


@dataclass(frozen=True)
class CustomWeight(Weight):
    """Weight given by a closed-form mass density callable."""

    density: object
    kind: str = "custom"

    def value(self, t):
        t = _as_array(t)
        return self.density(t) * np.exp(-2.0 * t)

    def mass_density(self, t):
        return self.density(_as_array(t))


def eval_weight(w: Weight, t=None, r=None):
    """Raw weight value at t = log r (pass exactly one of t, r)."""
    if (t is None) == (r is None):
        raise ValueError("pass exactly one of t or r")
    if t is None:
        r = _as_array(r)
        if np.any(r <= 0):
            raise ValueError("r must be positive")
        t = np.log(r)
    return w.value(t)


def select_eta_log(field: RadialField, t_lo: float = -1e9, t_hi: float = 0.0) -> float:
    """Quarter-flux matching radius in log units: the largest t_eta with
    sup_{s <= t_eta + log 2} |alpha(s)| <= 1/4, found by bisection.

    Returned in log units (eta = e^{t_eta}) since slowly decaying fluxes
    push the matching radius to radii that underflow a linear float.
    """

    def sup_alpha(t):
        s = np.linspace(min(t_lo, t + np.log(2.0) - 1.0), t + np.log(2.0), 4096)
        return float(np.max(np.abs(field.alpha(s))))

    if sup_alpha(t_hi) <= 0.25:
        return float(t_hi)
    lo, hi = t_lo, t_hi
    if sup_alpha(lo) > 0.25:
        raise ValueError("flux exceeds 1/4 even at the lower search bound")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if sup_alpha(mid) <= 0.25:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, abs(lo)):
            break
    return float(lo)


# ---------------------------------------------------------------------------
# Level sets of V / w0 and the capped sup-functional
# ---------------------------------------------------------------------------

_BASE = LogSquaredWeight()


@dataclass(frozen=True)
class LevelSet:
    """t-intervals where the ratio V/w0 exceeds a threshold.

    ``truncated_left`` is set when the region still exceeded the threshold at
    the lower scan cap (the interval is cut off, not closed).
    """

    threshold: float
    intervals: tuple
    truncated_left: bool = False

    @property
    def is_empty(self):
        return len(self.intervals) == 0


def _ratio_fn(V: Potential):
    """V(t)/w0(t) = e^{2t} V(t) (1 + t^2), as a vectorized callable."""

    def ratio(t):
        t = _as_array(t)
        return V.vplus_density(t) * (1.0 + t * t)

    return ratio


def _scan_nodes(t_min_cap: float, t_max: float, n: int) -> np.ndarray:
    pieces = [np.linspace(max(t_min_cap, -2.0), t_max, max(n // 4, 16))]
    if t_min_cap < -2.0:
        pieces.insert(0, -np.geomspace(2.0, -t_min_cap, n)[::-1])
    return np.unique(np.concatenate(pieces))


def _intervals_above(ratio, nodes, vals, t_val):
    """Crossing intervals of {ratio > t_val} from cached scan values."""
    above = vals > t_val

    def refine(a, b):
        f = lambda t: float(ratio(t) - t_val)
        try:
            return float(optimize.brentq(f, a, b, xtol=1e-9, rtol=8.9e-16))
        except ValueError:
            return 0.5 * (a + b)

    intervals = []
    truncated = bool(above[0])
    open_left = nodes[0] if above[0] else None
    for i in range(len(nodes) - 1):
        if above[i + 1] and not above[i]:
            open_left = refine(nodes[i], nodes[i + 1])
        elif above[i] and not above[i + 1]:
            intervals.append((open_left, refine(nodes[i], nodes[i + 1])))
            open_left = None
    if open_left is not None:
        intervals.append((open_left, nodes[-1]))
    return tuple(intervals), truncated


def level_set(
    V: Potential,
    t_val: float,
    t_min_cap: float = -1e6,
    t_max: float = 30.0,
    scan_n: int = 4000,
) -> LevelSet:
    """Level set {V > t_val * w0} by scan + bisection, t-tolerance 1e-9.

    For roots beyond |t| ~ 1e9 the absolute tolerance degrades to float
    resolution; bisection then stops at machine-relative accuracy.  A
    ScanResolutionWarning is emitted (never silently dropped) when a 2x finer
    scan sees a different crossing count.
    """
    if t_val <= 0:
        raise ValueError("threshold must be positive")
    ratio = _ratio_fn(V)
    nodes = _scan_nodes(t_min_cap, t_max, scan_n)
    vals = ratio(nodes)

    fine = np.unique(np.concatenate([nodes, 0.5 * (nodes[:-1] + nodes[1:])]))
    changes = int(np.sum(np.diff((vals > t_val).astype(int)) != 0))
    changes_fine = int(np.sum(np.diff((ratio(fine) > t_val).astype(int)) != 0))
    if changes_fine != changes:
        warnings.warn(
            "ratio oscillates faster than the level-set scan grid",
            ScanResolutionWarning,
        )

    intervals, truncated = _intervals_above(ratio, nodes, vals, t_val)
    return LevelSet(threshold=float(t_val), intervals=intervals, truncated_left=truncated)


def _measure_antiderivative(t):
    """Antiderivative of (1+|t|)/(1+t^2) dt, the level-set measure density."""
    t = _as_array(t)
    return np.arctan(t) + 0.5 * np.sign(t) * np.log1p(t * t)


def level_measure(ls: LevelSet) -> float:
    """int over the level set of w0(r)(1+|log r|) r dr, in closed form."""
    total = 0.0
    for a, b in ls.intervals:
        total += float(_measure_antiderivative(b) - _measure_antiderivative(a))
    return total


@dataclass(frozen=True)
class VNormResult:
    value: float
    arg_t: float
    saturated: bool
    cap_sequence: tuple

    def as_dict(self):
        return {
            "value": self.value,
            "arg_t": self.arg_t,
            "saturated": self.saturated,
            "cap_sequence": list(self.cap_sequence),
        }


def _sup_over_thresholds(V: Potential, a: float, t_min_cap: float, tau_grid_n: int = 512):
    ratio = _ratio_fn(V)
    nodes = _scan_nodes(t_min_cap, 30.0, 4000)
    vals = ratio(nodes)
    rmax = float(np.max(vals))
    if rmax <= 0.0:
        return 0.0, 0.0
    taus = np.geomspace(rmax * 1e-8, rmax * 1e8, tau_grid_n)

    def g(tau):
        intervals, _ = _intervals_above(ratio, nodes, vals, tau)
        measure = sum(
            float(_measure_antiderivative(b) - _measure_antiderivative(a_))
            for a_, b in intervals
        )
        return tau**a * measure

    grid_vals = np.array([g(tau) for tau in taus])
    k = int(np.argmax(grid_vals))
    lo = taus[max(k - 1, 0)]
    hi = taus[min(k + 1, len(taus) - 1)]

    # golden-section on log tau around the grid argmax
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    x_lo, x_hi = np.log(lo), np.log(hi)
    c = x_hi - invphi * (x_hi - x_lo)
    d = x_lo + invphi * (x_hi - x_lo)
    gc, gd = g(np.exp(c)), g(np.exp(d))
    for _ in range(60):
        if gc < gd:
            x_lo = c
            c, gc = d, gd
            d = x_lo + invphi * (x_hi - x_lo)
            gd = g(np.exp(d))
        else:
            x_hi = d
            d, gd = c, gc
            c = x_hi - invphi * (x_hi - x_lo)
            gc = g(np.exp(c))
        if x_hi - x_lo < 1e-10:
            break
    x_best = 0.5 * (x_lo + x_hi)
    best = g(np.exp(x_best))
    best = max(best, float(np.max(grid_vals)))
    return best, float(np.exp(x_best))


def v_norm_a(
    V: Potential,
    a: float,
    t_min_cap: float = -1e4,
    cap_doublings: int = 1,
    saturation_tol: float = 0.01,
    cap_schedule: str = "double",
) -> VNormResult:
    """Capped sup-functional [V]_a with divergence detection.

    The value carries the 1/a-th root, so [lam*V]_a = lam*[V]_a exactly.
    ``saturated`` is True when the last cap extension changes the value by
    less than ``saturation_tol``; ``cap_sequence`` records the (cap, value)
    pairs of the sweep.  ``cap_schedule`` extends the cap by doubling t
    ("double") or by squaring |t| ("square"); the latter is the natural
    sweep for potentials whose level sets grow doubly exponentially in the
    inverse threshold.  An UnboundedWarning is emitted when the value keeps
    growing across every step of the sweep.
    """
    if a <= 1.0:
        raise ValueError("the functional needs a > 1")
    if t_min_cap >= 0:
        raise ValueError("t_min_cap must be negative")
    if cap_schedule == "double":
        caps = [t_min_cap * (2.0**k) for k in range(cap_doublings + 1)]
    elif cap_schedule == "square":
        caps = [-((-t_min_cap) ** (2.0**k)) for k in range(cap_doublings + 1)]
    else:
        raise ValueError("cap_schedule must be 'double' or 'square'")
    values = []
    args = []
    for cap in caps:
        raw, arg = _sup_over_thresholds(V, a, cap)
        values.append(raw ** (1.0 / a) if raw > 0 else 0.0)
        args.append(arg)
    rel_steps = [
        abs(v2 - v1) / v2 if v2 > 0 else 0.0 for v1, v2 in zip(values[:-1], values[1:])
    ]
    saturated = bool(rel_steps[-1] < saturation_tol) if rel_steps else True
    if rel_steps and all(s >= saturation_tol for s in rel_steps):
        warnings.warn(
            "sup-functional kept growing across every cap doubling",
            UnboundedWarning,
        )
    return VNormResult(
        value=float(values[-1]),
        arg_t=float(args[-1]),
        saturated=saturated,
        cap_sequence=tuple(zip(caps, values)),
    )


def threshold_curve(V: Potential, a: float, t_min_cap: float = -1e4, n: int = 200):
    """(tau, tau^a * measure(level set)) samples for plotting the sup search."""
    ratio = _ratio_fn(V)
    nodes = _scan_nodes(t_min_cap, 30.0, 4000)
    vals = ratio(nodes)
    rmax = float(np.max(vals))
    if rmax <= 0:
        return np.zeros(0), np.zeros(0)
    taus = np.geomspace(rmax * 1e-6, rmax, n)
    curve = []
    for tau in taus:
        intervals, _ = _intervals_above(ratio, nodes, vals, tau)
        measure = sum(
            float(_measure_antiderivative(b) - _measure_antiderivative(a_))
            for a_, b in intervals
        )
        curve.append(tau**a * measure)
    return taus, np.asarray(curve)


def log_moment(w: Weight, alpha: float, R: float) -> float:
    """2 pi * int_1^R w(r) (log r)^alpha r dr, by quadrature in t."""
    if R <= 1.0:
        raise ValueError("R must exceed 1")
    T = float(np.log(R))

    def integrand(t):
        return float(w.mass_density(np.array(t))) * t**alpha

    val, err = integrate.quad(integrand, 0.0, T, epsabs=1e-13, epsrel=1e-11, limit=400)
    if not np.isfinite(val):
        raise QuadratureFailure("log-moment quadrature diverged")
    if abs(err) > max(1e-10, 1e-8 * abs(val)):
        raise QuadratureFailure(f"log-moment quadrature error {err:.2e} too large")
    return 2.0 * np.pi * val
