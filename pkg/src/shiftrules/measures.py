"""Finite signed atomic measures and the shift-rule calculus built on them:
the optimal band-limited rule and its truncations, the periodic
Dirichlet-kernel rule, reflection/dilation, mod-p folding of shifts and
parameters, Fourier-Stieltjes transforms, and convolution against a query
function."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import InvalidKError, NotIntegerError, NotMultipleError

SNAP_DECIMALS = 12
RATIO_TOL = 1e-9


def fold_mod(x: float | np.ndarray, p: float, kind: str = "centered"):
    """Remainder of x modulo p*Z, landing in [-p/2, p/2) ("centered"),
    [0, p) ("positive"), or (-p, 0] ("negative")."""
    if p <= 0:
        raise ValueError(f"fold period must be positive, got {p}")
    xs = np.asarray(x, dtype=float)
    if kind == "centered":
        out = xs - p * np.floor(xs / p + 0.5)
    elif kind == "positive":
        out = xs - p * np.floor(xs / p)
    elif kind == "negative":
        out = xs - p * np.ceil(xs / p)
    else:
        raise ValueError(f"unknown fold kind {kind!r}")
    return float(out) if np.isscalar(x) else out


def tau_pc(s: float | np.ndarray, p: float, c: float):
    """Tail-wrapping p-folding: identity on (-c-p, c+p), and beyond that the
    argument is wrapped to just outside +-c. Requires c/p to be an integer,
    which makes the map equal to the identity modulo p*Z."""
    _require_multiple(c, p)
    ss = np.asarray(s, dtype=float)
    low = ss <= -c - p
    high = ss >= c + p
    out = np.where(low, -c + fold_mod(ss, p, "negative"),
                   np.where(high, c + fold_mod(ss, p, "positive"), ss))
    return float(out) if np.isscalar(s) else out


def _require_multiple(c: float, p: float) -> int:
    if p <= 0 or c <= 0:
        raise NotMultipleError(f"p and c must be positive, got p={p}, c={c}")
    ratio = c / p
    if abs(ratio - round(ratio)) > RATIO_TOL or round(ratio) < 1:
        raise NotMultipleError(f"c/p must be a positive integer, got {ratio!r}")
    return int(round(ratio))


@dataclass(frozen=True)
class FoldingMap:
    """A measurable map equal to the identity modulo p*Z."""

    kind: str  # "mod_centered" | "mod_positive" | "mod_negative" | "tau"
    p: float
    c: float | None = None

    def __post_init__(self) -> None:
        if self.p <= 0:
            raise ValueError(f"fold period must be positive, got {self.p}")
        if self.kind == "tau":
            _require_multiple(self.c, self.p)
        elif self.kind not in ("mod_centered", "mod_positive", "mod_negative"):
            raise ValueError(f"unknown folding kind {self.kind!r}")

    def __call__(self, s: float | np.ndarray):
        if self.kind == "tau":
            return tau_pc(s, self.p, self.c)
        return fold_mod(s, self.p, self.kind.removeprefix("mod_"))

    @staticmethod
    def mod(p: float) -> "FoldingMap":
        return FoldingMap(kind="mod_centered", p=p)

    @staticmethod
    def tau(p: float, c: float) -> "FoldingMap":
        return FoldingMap(kind="tau", p=p, c=c)


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite signed measure sum_j u_j * delta_{s_j} in canonical form:
    shifts strictly increasing, weights nonzero."""

    shifts: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        s = np.asarray(self.shifts, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if s.ndim != 1 or s.shape != w.shape or s.size == 0:
            raise ValueError("shifts and weights must be matching nonempty 1-d arrays")
        if not (np.isfinite(s).all() and np.isfinite(w).all()):
            raise ValueError("shifts and weights must be finite")
        if np.any(np.diff(s) <= 0):
            raise ValueError("shifts must be strictly increasing; use from_atoms to canonicalize")
        if np.any(w == 0.0):
            raise ValueError("weights must be nonzero; use from_atoms to canonicalize")
        object.__setattr__(self, "shifts", s)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_atoms(cls, atoms: Iterable[tuple[float, float]]) -> "AtomicMeasure":
        """Canonicalize: sort, merge atoms at equal shifts, drop zero weights."""
        pairs = list(atoms)
        if not pairs:
            raise ValueError("a measure needs at least one atom")
        s = np.array([p[0] for p in pairs], dtype=float)
        w = np.array([p[1] for p in pairs], dtype=float)
        return cls._merge(s, w)

    @classmethod
    def _merge(cls, s: np.ndarray, w: np.ndarray) -> "AtomicMeasure":
        uniq, inverse = np.unique(s, return_inverse=True)
        summed = np.bincount(inverse, weights=w, minlength=uniq.size)
        keep = summed != 0.0
        if not keep.any():
            raise ValueError("all atoms cancelled; the zero measure is not representable")
        return cls(shifts=uniq[keep], weights=summed[keep])

    def __len__(self) -> int:
        return int(self.shifts.size)

    def atoms(self) -> list[tuple[float, float]]:
        return [(float(s), float(w)) for s, w in zip(self.shifts, self.weights)]

    def norm(self) -> float:
        """Total-variation norm: sum of absolute weights."""
        return float(np.sum(np.abs(self.weights)))

    def fourier_stieltjes(self, xi: float | np.ndarray):
        """sum_j u_j exp(-2 pi i xi s_j)."""
        xs = np.asarray(xi, dtype=float)
        vals = np.exp(-2j * np.pi * xs.reshape(-1, 1) * self.shifts) @ self.weights.astype(complex)
        return complex(vals[0]) if xs.ndim == 0 else vals.reshape(xs.shape)

    def reflect_at_half(self) -> "AtomicMeasure":
        """Image under s -> 1/2 - s (norm-preserving involution)."""
        return AtomicMeasure(shifts=(0.5 - self.shifts)[::-1], weights=self.weights[::-1].copy())

    def dilated(self, k1: float, k2: float) -> "AtomicMeasure":
        """Dilation taking a rule for band limit K1 to one for K2:
        atom (s, u) -> (K1*s/K2, (K2/K1)*u)."""
        if k1 <= 0 or k2 <= 0:
            raise InvalidKError(f"band limits must be positive, got {k1}, {k2}")
        if k1 == k2:
            return self
        return AtomicMeasure._merge(self.shifts * k1 / k2, self.weights * k2 / k1)

    def folded(self, p: float) -> "AtomicMeasure":
        """Shift folding: push every atom through centered mod-p, merging atoms
        that land on the same folded shift (after a 1e-12 snap)."""
        folded = fold_mod(self.shifts, p, "centered")
        snapped = np.round(folded, SNAP_DECIMALS)
        return AtomicMeasure._merge(snapped, self.weights)

    def convolve(self, f: Callable[[float], float], x: float) -> float:
        """(f * m)(x) = sum_j u_j f(x - s_j), evaluated eagerly atom by atom."""
        return float(sum(w * f(x - s) for s, w in zip(self.shifts, self.weights)))

    def convolve_folded(self, fold: FoldingMap, f: Callable[[float], float], x: float) -> float:
        """sum_j u_j f(fold(x - s_j)): every query stays inside the fold's image."""
        return float(sum(w * f(fold(x - s)) for s, w in zip(self.shifts, self.weights)))

    def to_json(self) -> str:
        return json.dumps({"atoms": [[float(s), float(w)] for s, w in zip(self.shifts, self.weights)]})

    @classmethod
    def from_json(cls, text: str) -> "AtomicMeasure":
        data = json.loads(text)
        return cls.from_atoms((float(s), float(w)) for s, w in data["atoms"])


def _half_integers(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Half-integers -N+1/2 .. N-1/2 and the sign pattern (-1)^(a+1/2)."""
    m = np.arange(-n, n)
    a = m + 0.5
    sign = np.where(m % 2 == 0, -1.0, 1.0)  # (-1)^(m+1) with a = m + 1/2
    return a, sign


def nyquist(k: float, n: int) -> AtomicMeasure:
    """The minimal-norm shift rule for band limit K, truncated symmetrically
    to its 2N atoms nearest the origin: weight 2K*(-1)^(a+1/2)/(pi*a^2) at
    shift a/2K for half-integers a with |a| <= N - 1/2."""
    if k <= 0:
        raise InvalidKError(f"band limit must be positive, got {k}")
    if n < 1:
        raise ValueError(f"need at least one atom pair, got N={n}")
    a, sign = _half_integers(int(n))
    weights = 2.0 * k * sign / (np.pi * a * a)
    return AtomicMeasure(shifts=a / (2.0 * k), weights=weights)


def dirichlet_rule(k: float, xi1: float) -> AtomicMeasure:
    """Finite rule exact on trigonometric polynomials with frequencies in
    xi1*{-L..L}, L = K/xi1: the first derivative of the modified Dirichlet
    kernel, placed on the same shift grid a/2K. Its norm is 2*pi*K."""
    if k <= 0 or xi1 <= 0:
        raise InvalidKError(f"band limit and frequency spacing must be positive, got {k}, {xi1}")
    ratio = k / xi1
    if abs(ratio - round(ratio)) > RATIO_TOL or round(ratio) < 1:
        raise NotIntegerError(f"K/xi1 must be a positive integer, got {ratio!r}")
    el = int(round(ratio))
    a, sign = _half_integers(el)
    weights = 2.0 * k * (np.pi / (2 * el) ** 2) * sign / np.sin(np.pi * a / (2 * el)) ** 2
    return AtomicMeasure(shifts=a / (2.0 * k), weights=weights)


def nyquist_truncation_bound(k: float, n: int) -> float:
    """Upper bound 4K/(pi*(N-1/2)) on the total variation removed by
    truncating the infinite rule to 2N atoms; also bounds the worst-case
    derivative error relative to ||f||_inf."""
    return 4.0 * k / (np.pi * (n - 0.5))


def nyquist_size_for_error(k: float, eps: float) -> int:
    """Smallest truncation size N whose tail bound is at most eps."""
    if eps <= 0:
        raise ValueError(f"error budget must be positive, got {eps}")
    return max(1, math.ceil(4.0 * k / (np.pi * eps) + 0.5))
