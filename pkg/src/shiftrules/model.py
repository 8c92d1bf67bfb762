"""Perturbed-parametric expectation values f(x) = tr(M U(x) rho U(x)^dag)
with U(x) = exp(2*pi*i*(x*A + B)): exact values and derivatives, the split
f = f1 + f0 into a trigonometric part and a decaying remainder, and the
commutation seminorm that bounds the remainder."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, ImaginaryResidueError
from .linalg import (
    TWO_PI,
    Rng,
    eig_hermitian,
    haar_unitary,
    max_abs,
    require_hermitian,
    unitary_and_derivative,
)

IMAG_RESIDUE_TOL = 1e-8
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
MIN_BAND_LIMIT = 1e-12
CLUSTER_GAP = 1e-8


@dataclass
class ModelInstance:
    """The tuple (A, B, rho, M) defining a perturbed-parametric expectation value.

    K = lambda_max(A) - lambda_min(A) is the band limit of f; A must not be
    a scalar multiple of the identity (K > 0).
    """

    a: np.ndarray
    b: np.ndarray
    rho: np.ndarray
    m: np.ndarray
    k: float = field(init=False)

    def __post_init__(self) -> None:
        self.a = require_hermitian(self.a, "A")
        self.b = require_hermitian(self.b, "B")
        self.m = require_hermitian(self.m, "M")
        self.rho = require_hermitian(self.rho, "rho")
        shapes = {x.shape for x in (self.a, self.b, self.rho, self.m)}
        if len(shapes) != 1:
            raise DimensionMismatchError(f"A, B, rho, M must share one shape, got {shapes}")
        rho_eigs = np.linalg.eigvalsh(self.rho)
        if rho_eigs.min() < -PSD_TOL:
            raise ValueError(f"rho is not positive semidefinite (min eigenvalue {rho_eigs.min():.3e})")
        tr = float(np.trace(self.rho).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"rho must have unit trace, got {tr!r}")
        a_eigs = np.linalg.eigvalsh(self.a)
        self.k = float(a_eigs[-1] - a_eigs[0])
        if self.k <= MIN_BAND_LIMIT:
            raise ValueError("A must not be a scalar multiple of the identity")

    @property
    def dim(self) -> int:
        return self.a.shape[0]


def random_instance(dim: int, rng: Rng) -> ModelInstance:
    """Random instance with Spec(A) = Spec(M) = {-1,+1} (balanced), Gaussian
    Hermitian B, and a Haar-random pure state rho; the band limit is K = 2."""
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    g = rng.generator
    signs = np.array([1.0] * ((dim + 1) // 2) + [-1.0] * (dim // 2))

    def pm_one() -> np.ndarray:
        q = haar_unitary(dim, rng)
        h = (q * signs) @ q.conj().T
        return (h + h.conj().T) / 2

    m = pm_one()
    v = g.normal(size=dim) + 1j * g.normal(size=dim)
    v /= np.linalg.norm(v)
    rho = np.outer(v, v.conj())
    a = pm_one()
    z = (g.normal(size=(dim, dim)) + 1j * g.normal(size=(dim, dim))) / np.sqrt(2.0)
    b = (z + z.conj().T) / 2
    return ModelInstance(a=a, b=b, rho=rho, m=m)


def _real_with_residue_check(value: complex, what: str) -> float:
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        raise ImaginaryResidueError(f"{what} has imaginary residue {value.imag:.3e}")
    return float(value.real)


def expectation(model: ModelInstance, x: float) -> float:
    """f(x) = tr(M U(x) rho U(x)^dag)."""
    dec = eig_hermitian(x * model.a + model.b)
    v = dec.eigenvectors
    u = (v * np.exp(TWO_PI * 1j * dec.eigenvalues)) @ v.conj().T
    val = np.trace(model.m @ u @ model.rho @ u.conj().T)
    return _real_with_residue_check(complex(val), "expectation")


def derivative(model: ModelInstance, x: float) -> float:
    """Exact f'(x) via the eigenbasis divided-difference derivative of U."""
    u, du = unitary_and_derivative(model.a, model.b, x)
    val = np.trace(model.m @ (du @ model.rho @ u.conj().T + u @ model.rho @ du.conj().T))
    return _real_with_residue_check(complex(val), "derivative")


def _batched_eig(model: ModelInstance, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    h = xs[:, None, None] * model.a[None, :, :] + model.b[None, :, :]
    return np.linalg.eigh(h)


def _rho_components(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Spectral components of rho with negligible weights dropped."""
    w, v = np.linalg.eigh(rho)
    keep = w > 1e-12
    return w[keep], v[:, keep]


def expectation_batch(model: ModelInstance, xs: np.ndarray) -> np.ndarray:
    """f on an array of points; one batched eigendecomposition, then
    per-component matvecs (rho is typically rank one here)."""
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        return np.zeros(0)
    w, v = _batched_eig(model, xs)
    phases = np.exp(TWO_PI * 1j * w)
    pw, pv = _rho_components(model.rho)
    out = np.zeros(xs.shape[0], dtype=complex)
    for weight, vec in zip(pw, pv.T):
        c = np.einsum("nji,j->ni", v.conj(), vec)
        u_vec = np.einsum("nij,nj->ni", v, phases * c)
        out += weight * np.einsum("ni,ij,nj->n", u_vec.conj(), model.m, u_vec)
    if max_abs(out.imag) > IMAG_RESIDUE_TOL:
        raise ImaginaryResidueError("batched expectation has a large imaginary residue")
    return out.real


def derivative_batch(model: ModelInstance, xs: np.ndarray) -> np.ndarray:
    """Exact f' on an array of points (batched divided-difference derivative)."""
    from .linalg import _phase_divided_difference

    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        return np.zeros(0)
    w, v = _batched_eig(model, xs)
    vh = v.conj().swapaxes(1, 2)
    phases = np.exp(TWO_PI * 1j * w)
    a_eig = vh @ model.a @ v
    du_eig = a_eig * _phase_divided_difference(w)
    m_eig = vh @ model.m @ v
    rho_eig = vh @ model.rho @ v
    inner = m_eig @ du_eig @ (rho_eig * phases.conj()[:, None, :])
    vals = 2.0 * np.trace(inner, axis1=1, axis2=2).real
    return vals


@dataclass
class GammaResult:
    """Commutation seminorm value; `exact` is False when it is only a lower
    bound obtained by searching over eigenbasis rotations of a degenerate A."""

    value: float
    exact: bool


def _eigenvalue_clusters(values: np.ndarray, gap: float = CLUSTER_GAP) -> list[slice]:
    edges = [0]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > gap:
            edges.append(i)
    edges.append(len(values))
    return [slice(edges[i], edges[i + 1]) for i in range(len(edges) - 1)]


def _offdiag_norm(b_eig: np.ndarray) -> float:
    off = b_eig - np.diag(np.diag(b_eig))
    return float(np.linalg.norm(off, ord=2))


def gamma(model: ModelInstance, rotations: int = 256, rng: Rng | None = None) -> GammaResult:
    """Largest spectral norm of B minus its diagonal over bases diagonalizing A.

    Exact when A's spectrum is nondegenerate (the basis is unique up to
    phases). Otherwise the supremum runs over within-eigenspace rotations
    and the returned value is a lower bound from a random search.
    """
    a_eigs, v0 = np.linalg.eigh(model.a)
    clusters = _eigenvalue_clusters(a_eigs)
    b0 = v0.conj().T @ model.b @ v0
    if all(c.stop - c.start == 1 for c in clusters):
        return GammaResult(value=_offdiag_norm(b0), exact=True)
    if rng is None:
        rng = Rng(0)
    g = rng.generator
    best = _offdiag_norm(b0)
    # candidate 0: the basis that re-diagonalizes B within each eigenspace
    w_blocks = np.eye(model.dim, dtype=complex)
    for c in clusters:
        if c.stop - c.start > 1:
            _, wb = np.linalg.eigh(b0[c, c])
            w_blocks[c, c] = wb
    best = max(best, _offdiag_norm(w_blocks.conj().T @ b0 @ w_blocks))
    for _ in range(rotations):
        w = np.eye(model.dim, dtype=complex)
        for c in clusters:
            n = c.stop - c.start
            if n > 1:
                z = (g.normal(size=(n, n)) + 1j * g.normal(size=(n, n))) / np.sqrt(2.0)
                q, r = np.linalg.qr(z)
                w[c, c] = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
        best = max(best, _offdiag_norm(w.conj().T @ b0 @ w))
    return GammaResult(value=best, exact=False)


@dataclass
class Decomposition:
    """f = f1 + f0: f1 comes from evolving with A plus the part of B diagonal
    in A's eigenbasis (a trigonometric polynomial with frequencies in the
    difference set of Spec A); f0 = f - f1 decays like 1/|x|."""

    model: ModelInstance
    basis: np.ndarray
    alpha: np.ndarray
    diag_b: np.ndarray
    gamma: float
    gamma_exact: bool
    _coeff: np.ndarray = field(repr=False)
    _freq: np.ndarray = field(repr=False)

    def f1(self, x: float | np.ndarray) -> float | np.ndarray:
        xs = np.asarray(x, dtype=float)
        vals = np.einsum(
            "jk,njk->n", self._coeff, np.exp(TWO_PI * 1j * xs.ravel()[:, None, None] * self._freq)
        ).real
        return float(vals[0]) if xs.ndim == 0 else vals.reshape(xs.shape)

    def f0(self, x: float | np.ndarray) -> float | np.ndarray:
        xs = np.asarray(x, dtype=float)
        if xs.ndim == 0:
            return expectation(self.model, float(x)) - self.f1(float(x))
        return expectation_batch(self.model, xs.ravel()).reshape(xs.shape) - self.f1(xs)

    def u_tilde(self, x: float) -> np.ndarray:
        """exp(2*pi*i*(x*A + diagonal part of B)) in the chosen eigenbasis of A."""
        phases = np.exp(TWO_PI * 1j * (x * self.alpha + self.diag_b))
        return (self.basis * phases) @ self.basis.conj().T

    def decay_constant(self, c: float, span: float = 60.0, step: float = 0.05) -> float:
        """Probed decay constant of f0: the largest |x*f0(x)| seen on a grid
        of magnitudes in [c, c+span]. f0 decays like 1/|x|, so this estimates
        the constant in |f0(x)| <= C/|x| for |x| >= c."""
        grid = np.arange(c, c + span, step)
        xs = np.concatenate([grid, -grid])
        return float(np.max(np.abs(xs * self.f0(xs))))

    def frequencies(self) -> np.ndarray:
        """Sorted distinct frequencies available to f1."""
        return np.unique(np.round(self._freq.ravel(), 12))


def decompose(model: ModelInstance) -> Decomposition:
    """Split f into its periodic-spectrum part and the decaying remainder.

    For degenerate A, B is re-diagonalized within each eigenspace first, which
    pins down the basis (and hence f1) reproducibly.
    """
    a_eigs, v = np.linalg.eigh(model.a)
    clusters = _eigenvalue_clusters(a_eigs)
    b_eig = v.conj().T @ model.b @ v
    for c in clusters:
        if c.stop - c.start > 1:
            _, wb = np.linalg.eigh(b_eig[c, c])
            v[:, c] = v[:, c] @ wb
    b_eig = v.conj().T @ model.b @ v
    diag_b = np.real(np.diag(b_eig))
    m_eig = v.conj().T @ model.m @ v
    rho_eig = v.conj().T @ model.rho @ v
    # f1(x) = sum_{jk} M~_jk rho~_kj exp(2 pi i (x (alpha_k - alpha_j) + (b_k - b_j)))
    coeff = m_eig * rho_eig.T * np.exp(TWO_PI * 1j * (diag_b[None, :] - diag_b[:, None]))
    freq = a_eigs[None, :] - a_eigs[:, None]
    gam = gamma(model)
    return Decomposition(
        model=model,
        basis=v,
        alpha=a_eigs,
        diag_b=diag_b,
        gamma=gam.value,
        gamma_exact=gam.exact,
        _coeff=coeff,
        _freq=freq,
    )
