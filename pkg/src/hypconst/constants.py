"""Closed-form hyperbolicity constants for the quantitative guessing-geodesics criterion.

Everything here is a pure function of its arguments.  Logarithms are base 2
throughout; the published numbers are only reproduced with that base.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

REL_TOL = 1e-9
MAX_ITER = 200
WITNESS_OFFSETS = (1.0, 10.0, 100.0, 1000.0)


class HypothesisError(ValueError):
    """Raised when parameters fall outside the range a bound was proved for."""


class ConvergenceError(RuntimeError):
    def __init__(self, message, bracket):
        super().__init__(f"{message} (last bracket {bracket})")
        self.bracket = bracket


@dataclass(frozen=True)
class QuasiParams:
    """Multiplicative constant q1, additive constant q2 and path constant D."""

    q1: float
    q2: float
    D: float

    def __post_init__(self):
        for name in ("q1", "q2", "D"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        if self.q1 < 1:
            raise ValueError(f"q1 must be >= 1, got {self.q1}")
        if self.q2 < 0:
            raise ValueError(f"q2 must be >= 0, got {self.q2}")
        if self.D <= 0:
            raise ValueError(f"D must be > 0, got {self.D}")

    @property
    def rough(self) -> bool:
        # (1, q)-quasi-geodesic, i.e. q-rough geodesic
        return self.q1 == 1

    @property
    def q(self) -> float:
        return max(self.q1, self.q2)

    def as_dict(self):
        return {"q1": self.q1, "q2": self.q2, "D": self.D}


@dataclass(frozen=True)
class KappaCertificate:
    kappa: float
    method: str  # "fixed_point" | "kappa_n" | "direct_bound"
    residual: float = 0.0
    n: Optional[int] = None
    witness_grid: tuple = ()  # (x, f(x) - x) pairs

    def as_dict(self):
        d = {
            "kappa": self.kappa,
            "method": self.method,
            "residual": self.residual,
            "witness_grid": [list(w) for w in self.witness_grid],
        }
        if self.n is not None:
            d["n"] = self.n
        return d


@dataclass(frozen=True)
class HyperbolicityBounds:
    delta_prime: float
    delta: Optional[float]
    provenance: dict = field(default_factory=dict)

    def as_dict(self):
        return {"delta_prime": self.delta_prime, "delta": self.delta, "provenance": self.provenance}


def eval_f(params: QuasiParams, x: float) -> float:
    """The control function f(x) = D log2(8x q1^3 + 7 q1^3 q2 + 2 D q1) + (q1 + q2) D / 2 + D."""
    if x < 0:
        raise ValueError(f"x must be nonnegative, got {x}")
    q1, q2, D = params.q1, params.q2, params.D
    c = q1 ** 3
    return D * math.log2(8 * x * c + 7 * c * q2 + 2 * D * q1) + 0.5 * (q1 + q2) * D + D


def _g(params, x):
    return eval_f(params, x) - x


def _witnesses(params, kappa, extra=()):
    xs = sorted({kappa + t for t in WITNESS_OFFSETS} | {kappa * s for s in (2.0, 10.0)} | set(extra))
    return tuple((x, _g(params, x)) for x in xs if x >= 0)


def kappa_n_terms(q: float, D: float, n: int):
    """Return (K_n, eps_n, kappa_n) for kappa_n = K_n q D^(1 + eps_n)."""
    if n < 1 or int(n) != n:
        raise ValueError(f"n must be a positive integer, got {n}")
    if q < 1 or D < 1:
        raise HypothesisError(f"kappa_n requires q >= 1 and D >= 1, got q={q}, D={D}")
    a = math.log2(n + 8) + 9
    K = a + math.ceil(1 + math.log2(a))
    eps = 1.0 / math.log2(n + 8)
    return K, eps, K * q * D ** (1 + eps)


def kappa_n(params: QuasiParams, n: int) -> KappaCertificate:
    K, eps, kappa = kappa_n_terms(params.q, params.D, n)
    g = _g(params, kappa)
    if g > 0:
        # cannot happen for q, D >= 1; kept as a hard check on the certificate
        raise ConvergenceError(f"f(kappa_{n}) exceeds kappa_{n}", (kappa, kappa))
    return KappaCertificate(kappa, "kappa_n", 0.0, int(n), _witnesses(params, kappa, (kappa,)))


def _argmax_g(params):
    # g is concave; g'(x) = 8 D q1^3 / (ln2 (8 x q1^3 + c0)) - 1
    q1, q2, D = params.q1, params.q2, params.D
    c = q1 ** 3
    c0 = 7 * c * q2 + 2 * D * q1
    return max(0.0, D / math.log(2) - c0 / (8 * c))


def solve_kappa(params: QuasiParams, tolerance: float = REL_TOL, max_iter: int = MAX_ITER) -> KappaCertificate:
    """Bisect for the last crossing of f with the identity.

    f is increasing and concave, so g = f - id is concave and decreasing past
    its maximiser; the crossing there is unique.  The returned kappa is the
    right end of the final bracket, where f(kappa) <= kappa holds exactly.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    lo = _argmax_g(params)
    if _g(params, lo) <= 0:
        # f(x) <= x everywhere: the infimum is attained at the origin
        kappa = max(0.0, eval_f(params, 0.0))
        return KappaCertificate(kappa, "direct_bound", 0.0, None, _witnesses(params, kappa))

    if params.q >= 1 and params.D >= 1:
        hi = kappa_n_terms(params.q, params.D, 8)[2]
    else:
        hi = max(1.0, 2 * lo)
    it = 0
    while _g(params, hi) > 0:
        lo, hi = hi, 2 * hi
        it += 1
        if it > max_iter:
            raise ConvergenceError("no upper bracket found", (lo, hi))

    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if _g(params, mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tolerance * max(1.0, hi):
            break
    else:
        raise ConvergenceError("bisection did not converge", (lo, hi))

    residual = abs(_g(params, hi))
    if residual > tolerance * max(1.0, hi):
        raise ConvergenceError("residual above tolerance", (lo, hi))
    return KappaCertificate(hi, "fixed_point", residual, None, _witnesses(params, hi))


def member_of_Z(params: QuasiParams, cert: KappaCertificate, tolerance: float = REL_TOL) -> float:
    """A strict member f(z) of the admissible set, z just past the crossing."""
    z = cert.kappa + tolerance * max(1.0, cert.kappa)
    return eval_f(params, z)


def delta_prime(params: QuasiParams, kappa: float) -> float:
    if kappa < 0:
        raise ValueError(f"kappa must be nonnegative, got {kappa}")
    q1, q2, D = params.q1, params.q2, params.D
    return 2 * (q1 ** 2 / 2 * (2 * kappa + D + q2) + q2 + kappa) + D


def delta_from_delta_prime(q: float, delta_prime: float) -> float:
    if q < 0 or delta_prime < 0:
        raise ValueError("q and delta_prime must be nonnegative")
    return 56 * delta_prime + 6 * q


def bounds_from_kappa(params: QuasiParams, cert: KappaCertificate, route: str) -> HyperbolicityBounds:
    dp = delta_prime(params, cert.kappa)
    delta = delta_from_delta_prime(params.q2, dp) if params.rough else None
    prov = {"params": params.as_dict(), "kappa": cert.as_dict(), "route": route}
    return HyperbolicityBounds(dp, delta, prov)


def theorem_b_bounds(q: float, D: float) -> HyperbolicityBounds:
    if q < 1 or D < 1:
        raise HypothesisError(f"closed-form bound requires q >= 1 and D >= 1, got q={q}, D={D}")
    dp = 72 * q * D ** 1.25 + 2 * D + 3 * q
    prov = {"params": {"q1": 1.0, "q2": q, "D": D}, "route": "theorem-b", "kappa": {"kappa": 18 * q * D ** 1.25, "method": "kappa_n", "n": 8}}
    return HyperbolicityBounds(dp, delta_from_delta_prime(q, dp), prov)


def curtain_model_params(Lambda: float) -> QuasiParams:
    if Lambda <= 0:
        raise ValueError(f"Lambda must be positive, got {Lambda}")
    return QuasiParams(1.0, max(6 * Lambda, 1.0) + 1, 125 * Lambda)


def kappa_table(q: float, D: float, n_max: int):
    """Rows (n, K_n, eps_n, kappa_n, running_min, running_argmin) for n = 1..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rows = []
    best, arg = math.inf, 0
    for n in range(1, n_max + 1):
        K, eps, k = kappa_n_terms(q, D, n)
        if k < best:
            best, arg = k, n
        rows.append((n, K, eps, k, best, arg))
    return rows


def route_bounds(params: QuasiParams, mode: str, tolerance: float = REL_TOL) -> HyperbolicityBounds:
    """mode is 'fixed-point', 'theorem-b' or 'n:<int>'."""
    if mode == "fixed-point":
        return bounds_from_kappa(params, solve_kappa(params, tolerance), mode)
    if mode == "theorem-b":
        if not params.rough:
            raise HypothesisError("theorem-b route needs q1 = 1")
        return theorem_b_bounds(params.q2, params.D)
    if mode.startswith("n:"):
        n = int(mode[2:])
        return bounds_from_kappa(params, kappa_n(params, n), mode)
    raise ValueError(f"unknown mode {mode!r}")


def sci3(x: float) -> str:
    """Three significant figures in scientific notation, e.g. 5.27e+04."""
    return f"{x:.2e}"
