"""Growth diagnostics: sup norms, exponential type, the integer-value threshold.

Everything in this module except :func:`stirling_bounds`,
:func:`polya_threshold` and the exact polynomial certificate is a numerical
estimate. A ``limsup`` cannot be computed from finitely many radii, so the
verdicts are tri-state and report ``"inconclusive"`` when the tail has not
settled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exprcalc.nodes import Expr
from .exprcalc.verify import derivative_table, format_value, numeric_oracle, verify_data_property
from .multiindex import MultiIndex, enumerate_index_set
from .polycore import AffinePointFrame, MultiPoly, even_slice_vanishes

__all__ = [
    "SATISFIED",
    "VIOLATED",
    "INCONCLUSIVE",
    "GrowthParams",
    "stirling_bounds",
    "log_stirling_bounds",
    "cauchy_derivative_bound",
    "polya_bound",
    "polya_threshold",
    "default_r_grid",
    "SupNorm",
    "sup_norm",
    "DirectionalType",
    "estimate_directional_type",
    "GrowthCondition",
    "check_growth_condition",
    "ExceptionEntry",
    "finite_exception_scan",
    "GrowthReport",
    "theorem_pipeline",
]

SATISFIED = "satisfied"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"

DEFAULT_GRID = 128
DEFAULT_RTOL = 1e-4
# cap on torus samples per radius; higher dimensions get a coarser grid
DEFAULT_MAX_POINTS = 1 << 18


@dataclass(frozen=True)
class GrowthParams:
    """Radius ``A`` of the polydisc and the slack ``eta`` of the growth bound."""

    A: float
    eta: float

    def __post_init__(self):
        if not (self.A >= 0 and math.isfinite(self.A)):
            raise ValueError("A must be a finite number >= 0")
        if not 0 < self.eta < 1:
            raise ValueError("eta must lie in (0, 1)")


# ---------------------------------------------------------------------------
# closed-form bounds


def log_stirling_bounds(N: int) -> tuple[float, float]:
    """Natural logs of the Stirling bracket ``lower < N! < upper``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    lo = N * math.log(N) - N + 0.5 * math.log(2 * math.pi * N)
    return lo, lo + 1.0 / (12 * N)


def stirling_bounds(N: int) -> tuple[float, float]:
    """``(N^N e^-N sqrt(2 pi N), same * e^(1/(12N)))``, which bracket ``N!``.

    Raises OverflowError once the values leave the float range; use
    :func:`log_stirling_bounds` there.
    """
    lo, hi = log_stirling_bounds(N)
    if hi > 709.0:
        raise OverflowError(f"Stirling bounds for N={N} overflow; use log_stirling_bounds")
    lower = math.exp(lo)
    return lower, lower * math.exp(1.0 / (12 * N))


def cauchy_derivative_bound(t: Sequence[int], z0_norm: float, r: float, M: float) -> float:
    """Cauchy inequality bound ``t! M / r^|t|`` on ``|(D^t f)(z0)|``.

    Valid whenever ``M >= |f|_{r + |z0|}``; ``z0_norm`` is only used to
    document that radius and must be >= 0.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    if M < 0 or z0_norm < 0:
        raise ValueError("M and z0_norm must be >= 0")
    t = MultiIndex(t)
    return t.factorial() * M / r ** t.norm


def polya_bound(T: int, A: float, eta: float) -> float:
    """``(1-eta) e^(-A + 1/(12T)) (1 - A/T)^(-T)`` for ``T > A``."""
    return math.exp(_log_polya_bound(T, A, eta))


def _log_polya_bound(T: int, A: float, eta: float) -> float:
    if T <= A:
        raise ValueError("the bound needs T > A")
    return math.log1p(-eta) - A + 1.0 / (12 * T) - T * math.log1p(-A / T)


def polya_threshold(p: GrowthParams | float, eta: float | None = None) -> int:
    """Smallest integer ``T0 > A`` with the derivative bound below 1 for all ``T >= T0``.

    Accepts a :class:`GrowthParams` or the pair ``(A, eta)``. The bound
    decreases in ``T`` towards ``1 - eta``, so the first crossing is final;
    the result is re-checked on ``[T0, 10 T0]``.
    """
    if not isinstance(p, GrowthParams):
        p = GrowthParams(float(p), float(eta))
    A, eta = p.A, p.eta
    lo = math.floor(A) + 1
    if _log_polya_bound(lo, A, eta) < 0:
        T0 = lo
    else:
        hi = lo
        while _log_polya_bound(hi, A, eta) >= 0:
            hi *= 2
        # invariant: bound(lo) >= 1 > bound(hi)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _log_polya_bound(mid, A, eta) < 0:
                hi = mid
            else:
                lo = mid
        T0 = hi
    for T in range(T0, 10 * T0 + 1):
        if _log_polya_bound(T, A, eta) >= 0:
            raise ArithmeticError(f"threshold scan failed at T={T}")
    return T0


# ---------------------------------------------------------------------------
# sup norms and exponential type


def default_r_grid(r_min: float = 1.0, r_max: float = 200.0, count: int = 40) -> np.ndarray:
    return np.geomspace(r_min, r_max, count)


def _dimension(f, n):
    if n is not None:
        return int(n)
    if isinstance(f, MultiPoly):
        return f.n
    if isinstance(f, Expr):
        return max(f.dim, 1)
    raise ValueError("pass n for a callable oracle")


@dataclass(frozen=True)
class SupNorm:
    """Grid maximum of ``|f|`` on a torus, a lower estimate of ``|f|_r``."""

    value: float
    delta: float
    grid: int


def _torus_max(oracle, n: int, r: float, grid: int) -> float:
    phases = np.exp(2j * np.pi * np.arange(grid) / grid) * r
    axes = np.meshgrid(*([phases] * n), indexing="ij")
    pts = np.stack([a.ravel() for a in axes], axis=-1)
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.abs(np.asarray(oracle(pts), dtype=complex))
    if not np.all(np.isfinite(vals)):
        raise OverflowError(f"non-finite values on the torus of radius {r}")
    return float(vals.max())


def _line_max(oracle, w: np.ndarray, r: float, grid: int) -> float:
    z = r * np.exp(2j * np.pi * np.arange(grid) / grid)
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.abs(np.asarray(oracle(z[:, None] * w[None, :]), dtype=complex))
    if not np.all(np.isfinite(vals)):
        raise OverflowError(f"non-finite values on the circle of radius {r}")
    return float(vals.max())


def _refine(sample, grid: int, rtol: float, max_grid: int) -> SupNorm:
    # doubling keeps the old nodes, so the estimate never decreases
    value = sample(grid)
    if grid * 2 > max_grid:
        # no room to refine: report the change from the half grid instead
        return SupNorm(value, value - sample(grid // 2), grid)
    delta = math.inf
    while grid * 2 <= max_grid:
        finer = sample(grid * 2)
        delta = finer - value
        value, grid = finer, grid * 2
        if delta <= rtol * max(value, 1e-300):
            break
    return SupNorm(value, delta, grid)


def sup_norm(f, r: float, grid: int = DEFAULT_GRID, n: int | None = None, refine: bool = True,
             rtol: float = DEFAULT_RTOL, max_points: int = DEFAULT_MAX_POINTS) -> SupNorm:
    """Estimate ``|f|_r`` by sampling the torus ``|z_1| = ... = |z_n| = r``.

    By the maximum principle the supremum over the polydisc is attained on
    this torus. With ``refine`` the grid is doubled until the estimate
    changes by less than ``rtol`` relatively (or ``grid^n`` would exceed
    ``max_points``); ``delta`` is the last change.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    if grid < 8:
        raise ValueError("grid must be >= 8")
    n = _dimension(f, n)
    oracle = numeric_oracle(f)
    max_grid = max(8, int(round(max_points ** (1.0 / n))))
    grid = min(grid, max_grid) if n > 1 else grid
    if not refine:
        return SupNorm(_torus_max(oracle, n, r, grid), 0.0, grid)
    return _refine(lambda g: _torus_max(oracle, n, r, g), grid, rtol, max(max_grid, grid))


def _tail_windows(x: np.ndarray, y: np.ndarray, window: int | None = None) -> list[float]:
    """Least-squares slopes of y against x over sliding windows of the top half."""
    m = len(x)
    start = m // 2
    tail = m - start
    if window is None:
        window = max(3, tail // 3)
    window = min(window, tail)
    out = []
    for k in range(start, m - window + 1):
        out.append(float(np.polyfit(x[k:k + window], y[k:k + window], 1)[0]))
    return out


def _spread(values: list[float]) -> float:
    hi = max(values)
    if hi <= 0:
        return 0.0
    return (hi - min(values)) / hi


@dataclass
class DirectionalType:
    """Type and order estimates of the restriction ``z -> f(z w)``."""

    type: float
    order: float
    spread: float
    radii: list
    log_sup: list
    window_types: list
    truncated: bool = False

    @property
    def rising(self) -> bool:
        """Windows disagree by more than 10% and the last one is the largest.

        Decreasing window slopes are harmless (their maximum bounds the
        tail from above); increasing ones mean the limsup may not be reached.
        """
        ws = self.window_types
        return bool(ws) and self.spread > 0.1 and ws[-1] >= max(ws)

    def __iter__(self):
        return iter((self.type, self.order))

    def to_json(self) -> dict:
        return {"type": self.type, "order": self.order, "spread": self.spread,
                "radii": list(self.radii), "log_sup": list(self.log_sup),
                "window_types": list(self.window_types), "rising": self.rising,
                "truncated": self.truncated}


def _log_sups(sample, radii) -> tuple[list, list, bool]:
    rs, logs = [], []
    truncated = False
    for r in radii:
        try:
            v = sample(float(r))
        except OverflowError:
            truncated = True
            break
        rs.append(float(r))
        logs.append(math.log(v) if v > 0 else -math.inf)
    return rs, logs, truncated


def _order_from(rs, logs) -> float:
    pts = [(math.log(r), math.log(l)) for r, l in zip(rs, logs) if l > 1.0]
    if len(pts) < 4:
        return 0.0
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    return max(0.0, max(_tail_windows(x, y)))


def estimate_directional_type(f, w: Sequence, r_grid=None, grid: int = DEFAULT_GRID,
                              rtol: float = DEFAULT_RTOL, max_grid: int = 8192) -> DirectionalType:
    """Exponential type and order of ``z -> f(z w)``.

    ``log sup_{|z| = r} |f(z w)|`` is computed on ``r_grid`` and the type is
    the largest tail-window slope against ``r`` (a finite stand-in for the
    limsup of ``log M(r) / r``); the order is the analogous slope of
    ``log log M(r)`` against ``log r``. ``spread`` is the relative
    disagreement between windows. Radii at which the values overflow are
    dropped (``truncated``).
    """
    w = np.asarray([complex(x) for x in w])
    if not np.any(w):
        raise ValueError("direction must be nonzero")
    r_grid = default_r_grid() if r_grid is None else np.asarray(r_grid, dtype=float)
    if len(r_grid) < 4 or np.any(np.diff(r_grid) <= 0) or r_grid[0] <= 0:
        raise ValueError("r_grid must be positive, strictly increasing, with >= 4 radii")
    oracle = numeric_oracle(f)
    sample = lambda r: _refine(lambda g: _line_max(oracle, w, r, g), grid, rtol, max_grid).value
    rs, logs, truncated = _log_sups(sample, r_grid)
    finite = [(r, l) for r, l in zip(rs, logs) if math.isfinite(l)]
    if len(finite) < 4:
        if all(l == -math.inf for l in logs) and len(logs) >= 4:
            return DirectionalType(0.0, 0.0, 0.0, rs, logs, [], truncated)
        raise ArithmeticError("fewer than 4 usable radii for the type estimate")
    x = np.array([p[0] for p in finite])
    y = np.array([p[1] for p in finite])
    slopes = _tail_windows(x, y)
    tau = max(0.0, max(slopes))
    return DirectionalType(tau, _order_from(list(x), list(y)), _spread(slopes), rs, logs,
                           slopes, truncated)


# ---------------------------------------------------------------------------
# growth condition


@dataclass
class GrowthCondition:
    """Tail behaviour of ``L(r) = e^-r sqrt(r) |f|_r`` against the constant
    ``C = e^(-max |s_i|) / sqrt(2 pi)``.

    ``limsup_estimate`` is L at the largest usable radius, ``trend`` the
    slope of ``log L`` against ``log r`` over the last window, ``margin``
    is ``1 - limsup_estimate / C`` (positive when below the constant).
    """

    verdict: str
    margin: float
    constant: float
    limsup_estimate: float
    tail_sup: float
    trend: float
    radii: list
    sup_norms: list
    values: list
    truncated: bool = False

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "margin": self.margin, "constant": self.constant,
                "limsup_estimate": self.limsup_estimate, "tail_sup": self.tail_sup,
                "trend": self.trend, "truncated": self.truncated}


def check_growth_condition(f, frame: AffinePointFrame, r_grid=None, grid: int = DEFAULT_GRID,
                           trend_tol: float = 0.05, max_points: int = DEFAULT_MAX_POINTS) -> GrowthCondition:
    """Numerical verdict on ``limsup e^-r sqrt(r) |f|_r < e^(-max|s_i|) / sqrt(2 pi)``.

    ``satisfied`` when L at the largest radius is below the constant and
    ``log L`` is not increasing (slope against ``log r`` at most
    ``trend_tol``); ``violated`` when it is above and not decreasing;
    ``inconclusive`` otherwise.
    """
    n = frame.n
    r_grid = default_r_grid() if r_grid is None else np.asarray(r_grid, dtype=float)
    if len(r_grid) < 4 or np.any(np.diff(r_grid) <= 0) or r_grid[0] <= 0:
        raise ValueError("r_grid must be positive, strictly increasing, with >= 4 radii")
    C = math.exp(-frame.max_norm()) / math.sqrt(2 * math.pi)
    sample = lambda r: sup_norm(f, r, grid, n=n, max_points=max_points).value
    rs, logs, truncated = _log_sups(sample, r_grid)
    if len(rs) < 4:
        raise ArithmeticError("fewer than 4 usable radii for the growth check")
    sups = [math.exp(l) if l > -math.inf else 0.0 for l in logs]
    logL = [l - r + 0.5 * math.log(r) for r, l in zip(rs, logs)]
    vals = [math.exp(v) if v > -math.inf else 0.0 for v in logL]
    tail = vals[len(vals) // 2:]
    last = vals[-1]
    if all(v == 0.0 for v in tail):
        return GrowthCondition(SATISFIED, 1.0, C, 0.0, 0.0, -math.inf, rs, sups, vals, truncated)
    k = max(3, (len(rs) - len(rs) // 2) // 3)
    xs = np.log(np.array(rs[-k:]))
    ys = np.array(logL[-k:])
    trend = float(np.polyfit(xs, ys, 1)[0]) if np.all(np.isfinite(ys)) else -math.inf
    if last < C and trend <= trend_tol:
        verdict = SATISFIED
    elif last > C and trend >= -trend_tol:
        verdict = VIOLATED
    else:
        verdict = INCONCLUSIVE
    return GrowthCondition(verdict, 1.0 - last / C, C, last, max(tail), trend, rs, sups, vals, truncated)


# ---------------------------------------------------------------------------
# finitely many nonzero integer values


@dataclass(frozen=True)
class ExceptionEntry:
    t: tuple
    i: int
    value: object

    def to_json(self) -> dict:
        return {"t": list(self.t), "i": self.i, "value": format_value(self.value)}


def finite_exception_scan(f, frame: AffinePointFrame, T0: int, tol: float = 1e-9,
                          method: str = "auto") -> list[ExceptionEntry]:
    """Admissible pairs with ``|t| < T0`` whose data have modulus ``>= 1 - tol``.

    These are the only candidates for nonzero integer values: beyond
    ``T0`` the derivative bound is below 1.
    """
    if T0 < 0:
        raise ValueError("T0 must be >= 0")
    if T0 == 0:
        return []
    pairs = enumerate_index_set(frame.n, T0 - 1)
    values = derivative_table(f, frame, pairs, method=method)
    out = []
    for pair, v in zip(pairs, values):
        if abs(complex(v.value)) >= 1 - tol:
            out.append(ExceptionEntry(tuple(pair.t), pair.i, v))
    return out


# ---------------------------------------------------------------------------
# full diagnostic


@dataclass
class GrowthReport:
    r_grid: list
    supnorm_estimates: list
    order_estimate: float
    type_estimates: list
    condition_1_1: GrowthCondition
    condition_1_3: dict
    polya_T0: int | None
    eta: float | None
    A: float
    exceptions: list | None
    integer_data: bool | None
    degree_certificate: dict | None
    conclusions: dict
    settings: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "estimates_are_numeric": True,
            "settings": self.settings,
            "r_grid": list(self.r_grid),
            "supnorm_estimates": list(self.supnorm_estimates),
            "order_estimate": self.order_estimate,
            "type_estimates": [d for d in self.type_estimates],
            "condition_1_1": self.condition_1_1.to_json(),
            "condition_1_3": self.condition_1_3,
            "A": self.A,
            "eta": self.eta,
            "polya_T0": self.polya_T0,
            "exceptions": None if self.exceptions is None else [e.to_json() for e in self.exceptions],
            "integer_data": self.integer_data,
            "degree_certificate": self.degree_certificate,
            "conclusions": self.conclusions,
        }


def theorem_pipeline(f, frame: AffinePointFrame | None = None, r_grid=None,
                     grid: int = DEFAULT_GRID, tol: float = 1e-9, type_tol: float = 0.05,
                     n: int | None = None) -> GrowthReport:
    """Run every numeric check of the integer-valued polynomial criterion.

    Steps: the growth condition at the frame, the exponential type in each
    direction ``s_i - s_0`` against ``pi``, the threshold ``T0`` (when the
    growth condition holds), the scan for nonzero integer data below
    ``T0``, and for polynomial input the exact certificate
    ``deg f < T0 + n`` together with the vanishing of every even-order
    derivative of order ``T0``.

    The type verdict is ``satisfied`` when every estimate is below
    ``(1 - type_tol) pi`` and none is ``rising``, ``violated`` when
    one exceeds ``(1 + type_tol) pi``, and ``inconclusive`` otherwise (in
    particular at the boundary value ``pi``).
    """
    n = frame.n if frame is not None else _dimension(f, n)
    frame = frame or AffinePointFrame.canonical(n)
    r_grid = default_r_grid() if r_grid is None else np.asarray(r_grid, dtype=float)
    growth = check_growth_condition(f, frame, r_grid, grid)
    pts = frame.numeric_points()
    types = []
    for i in range(1, n + 1):
        w = [complex(a) - complex(b) for a, b in zip(pts[i], pts[0])]
        d = estimate_directional_type(f, w, r_grid, grid)
        types.append({"direction": i, "type": d.type, "order": d.order, "spread": d.spread,
                      "rising": d.rising, "truncated": d.truncated})
    tmax = max(d["type"] for d in types)
    if tmax > (1 + type_tol) * math.pi:
        type_verdict = VIOLATED
    elif tmax < (1 - type_tol) * math.pi and not any(d["rising"] for d in types):
        type_verdict = SATISFIED
    else:
        type_verdict = INCONCLUSIVE
    cond13 = {"verdict": type_verdict, "max_type": tmax, "bound": math.pi,
              "at_boundary": abs(tmax - math.pi) <= type_tol * math.pi}

    logs = [math.log(s) for s in growth.sup_norms if s > 0]
    rlog = [math.log(r) for r, s in zip(growth.radii, growth.sup_norms) if s > 0]
    order = _order_from([math.exp(x) for x in rlog], logs) if len(logs) >= 4 else 0.0

    A = float(frame.max_norm())
    T0 = eta = None
    exceptions = integer_ok = cert = None
    if growth.verdict == SATISFIED:
        # keep half of the observed slack for the estimation error
        eta = min(0.5, max(1e-6, growth.margin / 2))
        T0 = polya_threshold(GrowthParams(A, eta))
        target = (1 - eta) * growth.constant
        tail_start = None
        for r, v in zip(reversed(growth.radii), reversed(growth.values)):
            if v >= target:
                break
            tail_start = r
        if tail_start is not None:
            T0 = max(T0, math.ceil(tail_start))
        T0 += T0 % 2
        exceptions = finite_exception_scan(f, frame, T0, tol)
        integer_ok = verify_data_property(f, frame, T0, predicate="integer", tol=tol).passed
        if isinstance(f, MultiPoly):
            deg = f.degree if f.degree is not None else -1
            cert = {"degree": f.degree, "bound": T0 + n,
                    "even_slice_vanishes": even_slice_vanishes(f, T0),
                    "pass": deg < T0 + n and even_slice_vanishes(f, T0)}
    conclusions = {
        "finitely_many_nonzero_data": growth.verdict == SATISFIED,
        "polynomial_forced": growth.verdict == SATISFIED and type_verdict == SATISFIED
                             and bool(integer_ok),
    }
    settings = {"grid": grid, "tol": tol, "type_tol": type_tol, "r_min": float(r_grid[0]),
                "r_max": float(r_grid[-1]), "r_count": int(len(r_grid))}
    return GrowthReport(list(growth.radii), list(growth.sup_norms), order, types, growth, cond13,
                        T0, eta, A, exceptions, integer_ok, cert, conclusions, settings)
