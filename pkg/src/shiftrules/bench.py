"""Benchmark machinery behind the CLI: instance persistence, the
derivative-method comparison sweep (truncated optimal rule with its queries
clipped to [-T, T] versus the stochastic-pulse baseline), percentile
aggregation over random instances, the parameter-folding error study, and
deterministic CSV emission."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .aspsr import aspsr_derivative_batch, AspsrConfig, aspsr_mc_estimate
from .errors import SchemaError
from .estimators import EstimateReport, ShotOracle, folding_estimate, obvious_estimate
from .linalg import Rng
from .measures import AtomicMeasure, FoldingMap, fold_mod, nyquist, nyquist_size_for_error
from .model import Decomposition, ModelInstance, decompose, derivative_batch, expectation_batch, random_instance

CSV_SCHEMA = "# schema=1"
REL_FLOOR = 1e-8

FOLD_COLUMNS = ("c", "max_err_inside", "bound", "mean_mopv", "max_mopv")


# ---------------------------------------------------------------- instances

def _cmat_to_json(a: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def _cmat_from_json(rows: list, dim: int) -> np.ndarray:
    a = np.array([[complex(re, im) for re, im in row] for row in rows])
    if a.shape != (dim, dim):
        raise SchemaError(f"matrix block has shape {a.shape}, expected {(dim, dim)}")
    return a


def save_instance(path: str | Path, model: ModelInstance, seed: int | None = None) -> None:
    doc = {
        "dim": model.dim,
        "seed": seed,
        "A": _cmat_to_json(model.a),
        "B": _cmat_to_json(model.b),
        "rho": _cmat_to_json(model.rho),
        "M": _cmat_to_json(model.m),
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_instance(path: str | Path) -> ModelInstance:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        dim = int(doc["dim"])
        return ModelInstance(
            a=_cmat_from_json(doc["A"], dim),
            b=_cmat_from_json(doc["B"], dim),
            rho=_cmat_from_json(doc["rho"], dim),
            m=_cmat_from_json(doc["M"], dim),
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"{path}: not a valid instance file ({exc})") from exc


def generate_instances(dim: int, count: int, seed: int, out_dir: str | Path) -> list[Path]:
    """Write count instance files with substreams split off one seed."""
    if dim < 2 or count < 1:
        raise ValueError(f"need dim >= 2 and count >= 1, got dim={dim}, count={count}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for idx, child in enumerate(Rng(seed).split(count)):
        model = random_instance(dim, child)
        path = out / f"inst-{idx:04d}.json"
        save_instance(path, model, seed=seed)
        paths.append(path)
    return paths


# ---------------------------------------------------------------------- CSV

def write_csv(path: str | Path, columns: dict[str, np.ndarray]) -> None:
    names = list(columns)
    rows = zip(*(np.asarray(columns[n], dtype=float) for n in names))
    lines = [CSV_SCHEMA, ",".join(names)]
    lines.extend(",".join(f"{v:.17g}" for v in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_csv(path: str | Path) -> dict[str, np.ndarray]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != CSV_SCHEMA:
        raise SchemaError(f"{path}: missing '{CSV_SCHEMA}' header line")
    if len(lines) < 2:
        raise SchemaError(f"{path}: missing column header")
    names = lines[1].split(",")
    data = [[float(v) for v in line.split(",")] for line in lines[2:] if line]
    arr = np.array(data, dtype=float).reshape(len(data), len(names))
    return {name: arr[:, j] for j, name in enumerate(names)}


# ------------------------------------------------------------ compare sweep

def clipped_nyquist_estimates(model: ModelInstance, xs: np.ndarray, cutoff: float) -> np.ndarray:
    """Truncated-rule derivative estimates with every query clipped to
    [-T, T]: atoms whose query point x - s leaves the interval are dropped.
    Near |x| = T this starves one side of the rule, which is exactly the
    end-of-interval blow-up the comparison is meant to show."""
    xs = np.asarray(xs, dtype=float)
    n_cap = math.ceil(2.0 * model.k * (cutoff + np.max(np.abs(xs))) + 0.5) + 2
    rule = nyquist(model.k, n_cap)
    shifts, weights = rule.shifts, rule.weights
    lows = np.searchsorted(shifts, xs - cutoff, side="left")
    highs = np.searchsorted(shifts, xs + cutoff, side="right")
    queries = np.concatenate([x - shifts[lo:hi] for x, lo, hi in zip(xs, lows, highs)])
    w_all = np.concatenate([weights[lo:hi] for lo, hi in zip(lows, highs)])
    f_vals = expectation_batch(model, queries)
    bounds = np.concatenate([[0], np.cumsum(highs - lows)])
    return np.array([
        np.dot(w_all[a:b], f_vals[a:b]) if b > a else 0.0
        for a, b in zip(bounds[:-1], bounds[1:])
    ])


def compare_columns(model: ModelInstance, eps: float, xs: np.ndarray) -> dict[str, np.ndarray]:
    """One sweep row per grid point comparing both derivative methods at the
    shared parameter cut-off T = 1/(8*eps)."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    xs = np.asarray(xs, dtype=float)
    cutoff = 1.0 / (8.0 * eps)
    f = expectation_batch(model, xs)
    fprime = derivative_batch(model, xs)
    ny_est = clipped_nyquist_estimates(model, xs, cutoff)
    as_est = aspsr_derivative_batch(model, xs, eps)
    ny_abs = np.abs(ny_est - fprime)
    as_abs = np.abs(as_est - fprime)
    floor = np.maximum(np.abs(fprime), REL_FLOOR)
    return {
        "x": xs, "f": f, "fprime_exact": fprime,
        "nyquist_est": ny_est, "aspsr_est": as_est,
        "nyquist_abs_err": ny_abs, "aspsr_abs_err": as_abs,
        "nyquist_rel_err": ny_abs / floor, "aspsr_rel_err": as_abs / floor,
    }


def _worker_count() -> int:
    raw = os.environ.get("NYQ_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)


def _rel_err_diff(args: tuple[ModelInstance, float, np.ndarray]) -> np.ndarray:
    model, eps, xs = args
    cols = compare_columns(model, eps, xs)
    return cols["aspsr_rel_err"] - cols["nyquist_rel_err"]


def percentile_columns(models: list[ModelInstance], eps: float, xs: np.ndarray) -> dict[str, np.ndarray]:
    """Per grid point: mean, median, 25th, 10th and 1st percentile of the
    relative-error difference (pulse baseline minus clipped rule) across
    instances; positive values mean the shift rule wins."""
    if len(models) < 2:
        raise ValueError("percentile aggregation needs at least 2 instances")
    xs = np.asarray(xs, dtype=float)
    jobs = [(m, eps, xs) for m in models]
    workers = _worker_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            diffs = np.array(list(pool.map(_rel_err_diff, jobs, chunksize=4)))
    else:
        diffs = np.array([_rel_err_diff(j) for j in jobs])
    return {
        "x": xs,
        "mean": diffs.mean(axis=0),
        "median": np.percentile(diffs, 50, axis=0),
        "p25": np.percentile(diffs, 25, axis=0),
        "p10": np.percentile(diffs, 10, axis=0),
        "p1": np.percentile(diffs, 1, axis=0),
    }


# ------------------------------------------------------------- fold study

class FoldedRuleEvaluator:
    """Convolution with a tail-wrapped rule, organized for large truncations.

    Atoms inside the identity region are applied directly; the two tails wrap
    onto finitely many residues of the shift lattice modulo p, so their total
    weights come from per-residue prefix sums instead of atom-by-atom work.
    Requires the lattice spacing 1/2K to divide p.
    """

    def __init__(self, model: ModelInstance, rule: AtomicMeasure, p: float, c: float):
        self.model = model
        self.fold = FoldingMap.tau(p, c)
        self.p, self.c = float(p), float(c)
        self.shifts, self.weights = rule.shifts, rule.weights
        self.norm = rule.norm()
        step = 1.0 / (2.0 * model.k)
        n_res = p / step
        if abs(n_res - round(n_res)) > 1e-9 or round(n_res) < 1:
            raise ValueError("fold period must be a multiple of the shift spacing 1/2K")
        self.n_res = int(round(n_res))
        n = self.shifts.size
        pad = (-n) % self.n_res
        w = np.concatenate([self.weights, np.zeros(pad)]).reshape(-1, self.n_res)
        self.cum_w = np.cumsum(w, axis=0)          # prefix sums per residue class
        self.cum_abs = np.cumsum(np.abs(w), axis=0)

    def _class_sums(self, cum: np.ndarray, lo: int, hi: int) -> np.ndarray:
        """Sum of (possibly absolute) weights over indices [lo, hi) per residue class."""
        def prefix(k: int) -> np.ndarray:
            if k <= 0:
                return np.zeros(self.n_res)
            rows = np.minimum((k - 1 - np.arange(self.n_res)) // self.n_res, cum.shape[0] - 1)
            out = np.where(rows >= 0, cum[np.maximum(rows, 0), np.arange(self.n_res)], 0.0)
            return out
        return prefix(hi) - prefix(lo)

    def pieces(self, x: float):
        """Identity-region atoms and the aggregated tail classes at x."""
        n = self.shifts.size
        lo = int(np.searchsorted(self.shifts, x - (self.c + self.p), side="right"))
        hi = int(np.searchsorted(self.shifts, x + (self.c + self.p), side="left"))
        mid_q = x - self.shifts[lo:hi]
        mid_w = self.weights[lo:hi]
        classes_q, classes_w, classes_abs = [], [], []
        if lo > 0:  # x - s >= c+p: queries wrap to just outside +c
            count = min(self.n_res, lo)
            classes_q.append(self.c + fold_mod(x - self.shifts[:count], self.p, "positive"))
            classes_w.append(self._class_sums(self.cum_w, 0, lo)[:count])
            classes_abs.append(self._class_sums(self.cum_abs, 0, lo)[:count])
        if hi < n:  # x - s <= -(c+p): queries wrap to just outside -c
            count = min(self.n_res, n - hi)
            idx = hi + np.arange(count)
            classes_q.append(-self.c + fold_mod(x - self.shifts[idx], self.p, "negative"))
            order = idx % self.n_res
            classes_w.append(self._class_sums(self.cum_w, hi, n)[order])
            classes_abs.append(self._class_sums(self.cum_abs, hi, n)[order])
        tail_q = np.concatenate(classes_q) if classes_q else np.zeros(0)
        tail_w = np.concatenate(classes_w) if classes_w else np.zeros(0)
        tail_abs = np.concatenate(classes_abs) if classes_abs else np.zeros(0)
        return mid_q, mid_w, tail_q, tail_w, tail_abs

    def estimate(self, x: float) -> float:
        mid_q, mid_w, tail_q, tail_w, _ = self.pieces(x)
        qs = np.concatenate([mid_q, tail_q])
        vals = expectation_batch(self.model, qs)
        return float(np.dot(mid_w, vals[: mid_q.size]) + np.dot(tail_w, vals[mid_q.size:]))

    def mopv(self, x: float) -> tuple[float, float]:
        """(max, mean) magnitude of the queried parameter values at x."""
        mid_q, mid_w, tail_q, _, tail_abs = self.pieces(x)
        mags = np.abs(np.concatenate([mid_q, tail_q]))
        mean = (np.dot(np.abs(mid_w), mags[: mid_q.size]) + np.dot(tail_abs, mags[mid_q.size:])) / self.norm
        return float(np.max(mags)), float(mean)


def fold_error_bound(k: float, c: float, decay_constant: float) -> float:
    """8*K*C/(pi*c*(2*K*c - 1)): worst-case folded-rule error inside [-p, p]."""
    return 8.0 * k * decay_constant / (np.pi * c * (2.0 * k * c - 1.0))


def fold_study_columns(
    model: ModelInstance,
    p: float,
    c_list: list[float],
    n_trunc: int = 10**6,
    points: int = 21,
    decomposition: Decomposition | None = None,
) -> dict[str, np.ndarray]:
    """Folded-rule error versus the wrap point c, on x in [-p, p].

    max_err_inside is the worst |estimate - f'(x)| on the grid; bound is the
    quadratic-decay bound computed from the probed decay constant of the
    non-periodic part; the MoPV columns are the worst queried-magnitude
    statistics over the grid.
    """
    dec = decomposition if decomposition is not None else decompose(model)
    xs = np.linspace(-p, p, points)
    fprime = derivative_batch(model, xs)
    rule = nyquist(model.k, n_trunc)
    rows = {name: [] for name in FOLD_COLUMNS}
    for c in c_list:
        ev = FoldedRuleEvaluator(model, rule, p, c)
        errs = [abs(ev.estimate(float(x)) - fp) for x, fp in zip(xs, fprime)]
        mopvs = [ev.mopv(float(x)) for x in xs]
        const = dec.decay_constant(c)
        rows["c"].append(c)
        rows["max_err_inside"].append(max(errs))
        rows["bound"].append(fold_error_bound(model.k, c, const))
        rows["mean_mopv"].append(max(m[1] for m in mopvs))
        rows["max_mopv"].append(max(m[0] for m in mopvs))
    return {name: np.array(vals) for name, vals in rows.items()}


# --------------------------------------------------------------- estimates

def estimate_report(
    model: ModelInstance,
    rule: str,
    x: float,
    shots: int,
    seed: int,
    eps: float = 1e-3,
    p: float | None = None,
    c: float | None = None,
) -> EstimateReport:
    """Dispatch a Monte-Carlo derivative estimate for one parameter value.

    For the shift-rule estimators the truncation size is chosen so the
    deterministic truncation bias is at most eps.
    """
    oracle = ShotOracle(model, Rng(seed))
    if rule == "aspsr":
        return aspsr_mc_estimate(oracle, x, AspsrConfig(epsilon=eps, mc_samples=shots))
    m = nyquist(model.k, nyquist_size_for_error(model.k, eps))
    if rule == "nyquist":
        return obvious_estimate(oracle, m, x, shots)
    if rule == "folded":
        if p is None or c is None:
            raise ValueError("the folded rule needs both --p and --c")
        return folding_estimate(oracle, m, FoldingMap.tau(p, c), x, shots)
    raise ValueError(f"unknown rule {rule!r} (expected nyquist|folded|aspsr)")
