"""Truncated operator model of the nonstandard quantum CP^1.

Everything here acts on the top-left ``N x N`` corner of l^2(Z>=0).  Relations
that hold on the infinite space fail only in a band at the bottom-right
corner; every pass/fail check is restricted to the first ``N - margin``
coordinates (the trusted block).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from . import numop
from .laurent import unit_circle
from .ncwords import NCElement

Real = Union[float, int, Fraction]

PASS_TOL = 1e-8
HARD_TOL = 1e-4
DECAY_TOL = 1e-10


class DegenerateTruncationError(RuntimeError):
    """The truncation is too small for the spectral splitting to be meaningful."""


class DecompositionFailure(RuntimeError):
    """A projection that must have rank one does not."""


class TruncationTooSmall(RuntimeError):
    """v-basis vectors leak into the untrusted margin."""


class VerificationFailure(RuntimeError):
    def __init__(self, what: str, k: int, residual: float):
        super().__init__(f"{what} residual {residual:.3e} at k={k} exceeds {HARD_TOL:g}")
        self.what, self.k, self.residual = what, k, residual


@dataclass(frozen=True)
class TruncationContext:
    q: float = 2.0
    c: float = 1.0
    t1: complex = 1.0 + 0j
    N: int = 256
    tol: float = numop.DEFAULT_TOL
    margin: int | None = None

    def __post_init__(self):
        if not self.q > 1:
            raise ValueError(f"q must exceed 1, got {self.q}")
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if abs(abs(self.t1) - 1) > 1e-12:
            raise ValueError(f"t1 must lie on the unit circle, got |t1| = {abs(self.t1)}")
        if self.N < 2:
            raise ValueError("N must be at least 2")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.margin is None:
            object.__setattr__(self, "margin", self.N // 4)
        if not 0 < self.margin < self.N / 2:
            raise ValueError(f"margin must satisfy 0 < margin < N/2, got {self.margin}")
        object.__setattr__(self, "t1", complex(self.t1))

    @classmethod
    def from_angle(cls, q=2.0, c=1.0, angle=0.0, N=256, tol=numop.DEFAULT_TOL, margin=None):
        return cls(q=q, c=c, t1=unit_circle(angle), N=N, tol=tol, margin=margin)

    @property
    def t2(self) -> complex:
        return self.t1.conjugate()

    @property
    def trusted(self) -> int:
        return self.N - self.margin

    def with_t1(self, t1: complex) -> "TruncationContext":
        return TruncationContext(self.q, self.c, t1, self.N, self.tol, self.margin)


# -- operators -----------------------------------------------------------


def build_alpha_gamma(ctx: TruncationContext) -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(ctx.N)
    q = float(ctx.q)
    alpha = np.diag(np.sqrt(1.0 - q ** (-2.0 * (n[:-1] + 1))), 1).astype(complex)
    gamma = np.diag(q ** (-1.0 * n)).astype(complex)
    return alpha, gamma


def build_x_pair(ctx: TruncationContext) -> tuple[np.ndarray, np.ndarray]:
    alpha, gamma = build_alpha_gamma(ctx)
    rc = math.sqrt(ctx.c)
    x1 = rc * ctx.t1 * alpha + ctx.t2 * gamma
    x2 = -(rc / ctx.q) * ctx.t1 * gamma + ctx.t2 * alpha.conj().T
    return x1, x2


def fixed_gauge_generators(q: float, c: float, N: int) -> tuple[np.ndarray, np.ndarray]:
    """X1 = sqrt(c) alpha + gamma and X2 = -q^-1 sqrt(c) gamma + alpha*."""
    return build_x_pair(TruncationContext(q=q, c=c, t1=1.0, N=N))


def nc_to_matrix(x: NCElement, ctx: TruncationContext) -> np.ndarray:
    """Substitute the truncated alpha, gamma into a normal-form element."""
    alpha, gamma = build_alpha_gamma(ctx)
    alpha_star = alpha.conj().T
    gdiag = np.diag(gamma)
    out = np.zeros((ctx.N, ctx.N), dtype=complex)
    for w, coef in x.terms.items():
        ladder = np.linalg.matrix_power(alpha if w.ladder >= 0 else alpha_star, abs(w.ladder))
        out += coef.evaluate(ctx.q, ctx.c, ctx.t1) * (gdiag ** w.gamma_pow)[:, None] * ladder
    return out


def kernel_vector_x1(ctx: TruncationContext, K: int) -> np.ndarray:
    """Closed-form kernel vector of x1 normalized by z_0 = 1, first K entries."""
    if K > ctx.N:
        raise ValueError("K must not exceed N")
    q, c = float(ctx.q), float(ctx.c)
    n = np.arange(K)
    # log|z_n| = -n(n-1)/2 log q - n/2 log c - 1/2 sum_{j<=n} log(1 - q^-2j)
    logs = np.concatenate([[0.0], np.cumsum(np.log1p(-q ** (-2.0 * n[1:])))])
    log_mag = -0.5 * n * (n - 1) * math.log(q) - 0.5 * n * math.log(c) - 0.5 * logs
    phase = (-ctx.t2 / ctx.t1) ** n
    return np.exp(log_mag) * phase


# -- partial isometries and seeds ----------------------------------------


def trusted_kernel_count(T: np.ndarray, ctx: TruncationContext) -> int:
    """Near-null right singular vectors of ``T`` living mostly in the trusted block.

    Truncation adds a spurious null direction at the boundary column for
    operators whose infinite version has a cokernel; those are skipped.
    """
    vecs = numop.null_right_vectors(T, ctx.tol)
    mass = np.sum(np.abs(vecs[: ctx.trusted]) ** 2, axis=0)
    return int(np.sum(mass > 0.5))


def build_tilde_pair(ctx: TruncationContext, x1: np.ndarray, x2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    count = numop.small_singular_count(x1, ctx.tol)
    if count != 1:
        raise DegenerateTruncationError(
            f"x1 has {count} near-zero singular values (expected 1); increase N"
        )
    return numop.polar_partial_isometry(x1, ctx.tol), numop.polar_partial_isometry(x2, ctx.tol)


def _dominant_unit_vector(p: np.ndarray) -> np.ndarray:
    fac = numop.hermitian_eig(p)
    v = fac.left[:, -1]
    big = np.abs(v) > 1e-12 * np.abs(v).max()
    first = int(np.argmax(big))
    return v * np.exp(-1j * np.angle(v[first]))


@dataclass(frozen=True)
class Seeds:
    p1: np.ndarray
    p2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray


def seed_vectors(ctx: TruncationContext, x1t: np.ndarray, x2t: np.ndarray) -> Seeds:
    eye = np.eye(ctx.N)
    p1 = eye - x1t.conj().T @ x1t
    p2 = x1t.conj().T @ (eye - x2t @ x2t.conj().T) @ x1t
    for name, p in (("p1", p1), ("p2", p2)):
        tr = np.trace(p).real
        if abs(tr - 1) > 1e-3:
            raise DecompositionFailure(f"trace({name}) = {tr:.6f}, expected a rank-1 projection")
    p1 = 0.5 * (p1 + p1.conj().T)
    p2 = 0.5 * (p2 + p2.conj().T)
    return Seeds(p1, p2, _dominant_unit_vector(p1), _dominant_unit_vector(p2))


@dataclass(frozen=True)
class VBasis:
    vectors: np.ndarray  # column k-1 holds v_k
    shift: np.ndarray  # x1t^* x2t
    gram_max_dev: float
    tail_mass: float

    @property
    def K(self) -> int:
        return self.vectors.shape[1]

    def v(self, k: int) -> np.ndarray:
        return self.vectors[:, k - 1]

    def subspace(self, i: int) -> np.ndarray:
        """Columns v_i, v_{i+2}, v_{i+4}, ... spanning the truncated H_i."""
        if i not in (1, 2):
            raise ValueError("subspace index must be 1 or 2")
        return self.vectors[:, i - 1 :: 2]


def tail_mass(vectors: np.ndarray, ctx: TruncationContext) -> np.ndarray:
    return np.linalg.norm(vectors[ctx.trusted :], axis=0)


def build_v_basis(
    ctx: TruncationContext,
    v1: np.ndarray,
    v2: np.ndarray,
    K: int,
    shift: np.ndarray,
) -> VBasis:
    """v_{i+2n} = shift^n v_i for i in {1, 2}, up to v_K."""
    if K < 2:
        raise ValueError("K must be at least 2")
    if K > ctx.trusted:
        raise TruncationTooSmall(f"K={K} exceeds the trusted block size {ctx.trusted}")
    cols = [v1, v2]
    while len(cols) < K:
        cols.append(shift @ cols[-2])
    V = np.column_stack(cols[:K])
    tails = tail_mass(V, ctx)
    worst = float(tails.max())
    if worst > HARD_TOL:
        k = int(np.argmax(tails)) + 1
        raise TruncationTooSmall(f"v_{k} has mass {worst:.3e} in the untrusted margin; increase N")
    gram = V.conj().T @ V
    dev = float(np.abs(gram - np.eye(K)).max())
    if dev > HARD_TOL:
        raise TruncationTooSmall(f"v-basis Gram deviation {dev:.3e}; increase N or lower K")
    return VBasis(V, shift, dev, worst)


def supported_v_count(ctx: TruncationContext, v1, v2, shift, limit: int | None = None) -> int:
    """Largest K such that v_1..v_K all keep less than 1e-10 mass in the margin."""
    limit = limit or ctx.trusted
    cols = [v1, v2]
    for k in range(1, limit + 1):
        if k > 2:
            cols.append(shift @ cols[-2])
        if np.linalg.norm(cols[k - 1][ctx.trusted :]) >= DECAY_TOL:
            return k - 1
    return limit


# -- eigenvalue sequence -------------------------------------------------


@dataclass(frozen=True)
class AffineContraction:
    """s -> fixed + ratio * (s - fixed)."""

    fixed_point: Real
    ratio: Real
    label: str = ""

    def __call__(self, s):
        return self.fixed_point + self.ratio * (s - self.fixed_point)

    def inverse(self, s):
        return self.fixed_point + (s - self.fixed_point) / self.ratio

    def orbit(self, s, n: int) -> list:
        out = [s]
        for _ in range(n):
            out.append(self(out[-1]))
        return out


def spectral_maps(q: Real, c: Real) -> tuple[AffineContraction, AffineContraction]:
    r = Fraction(1, 1) / Fraction(q) ** 2 if _is_exact(q) else 1 / (q * q)
    return AffineContraction(c, r, "f1"), AffineContraction(1, r, "f2")


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


@dataclass(frozen=True)
class EigenSequence:
    """c_1..c_K and the companion x2*x2 eigenvalues c'_k = 1 + q^-2 c - q^-2 c_k."""

    q: Real
    c: Real
    values: tuple
    companion: tuple
    exact: bool

    def __getitem__(self, k: int):
        if k < 1:
            raise IndexError("eigen sequence is indexed from 1")
        return self.values[k - 1]

    def closed_form(self, k: int):
        q, c = self.q, self.c
        if self.exact:
            q, c = Fraction(q), Fraction(c)
        if k % 2 == 0:
            n = k // 2
            return q ** (-2 * (n - 1)) + c
        n = (k - 1) // 2
        return (1 - q ** (-2 * n)) * c

    def weight(self, k: int) -> float:
        """Weight of x1*x2 from v_k to v_{k+2}."""
        return math.sqrt(float(self[k + 2])) * math.sqrt(float(self.companion[k - 1]))


def eigen_sequence(q: Real, c: Real, K: int) -> EigenSequence:
    if K < 2:
        raise ValueError("K must be at least 2")
    exact = _is_exact(q) and _is_exact(c)
    if exact:
        q, c = Fraction(q), Fraction(c)
        qm2 = 1 / (q * q)
    else:
        q, c = float(q), float(c)
        qm2 = q ** -2
    vals = [c * 0, 1 + c]
    while len(vals) < K:
        vals.append(c - qm2 * c + qm2 * vals[-2])
    comp = tuple(1 + qm2 * c - qm2 * v for v in vals)
    return EigenSequence(q, c, tuple(vals), comp, exact)


# -- full pipeline -------------------------------------------------------


@dataclass
class Decomposition:
    ctx: TruncationContext
    K: int
    x1: np.ndarray
    x2: np.ndarray
    x1t: np.ndarray
    x2t: np.ndarray
    seeds: Seeds
    basis: VBasis
    eigseq: EigenSequence

    @cached_property
    def x1sx1(self) -> np.ndarray:
        return self.x1.conj().T @ self.x1

    @cached_property
    def x2sx2(self) -> np.ndarray:
        return self.x2.conj().T @ self.x2

    @cached_property
    def x1sx2(self) -> np.ndarray:
        return self.x1.conj().T @ self.x2

    @property
    def shift(self) -> np.ndarray:
        return self.basis.shift


def decompose(ctx: TruncationContext, K: int = 40) -> Decomposition:
    x1, x2 = build_x_pair(ctx)
    x1t, x2t = build_tilde_pair(ctx, x1, x2)
    seeds = seed_vectors(ctx, x1t, x2t)
    shift = x1t.conj().T @ x2t
    basis = build_v_basis(ctx, seeds.v1, seeds.v2, K, shift)
    return Decomposition(ctx, K, x1, x2, x1t, x2t, seeds, basis, eigen_sequence(ctx.q, ctx.c, K))


def matrix_unit(dec: Decomposition, i: int, k: int, m: int) -> np.ndarray:
    """shift^k p_i (shift^*)^m, sending v_{i+2m} to v_{i+2k}."""
    p = dec.seeds.p1 if i == 1 else dec.seeds.p2
    X = dec.shift
    return np.linalg.matrix_power(X, k) @ p @ np.linalg.matrix_power(X.conj().T, m)


@dataclass
class DecompositionReport:
    params: dict
    eigen_rows: list = field(default_factory=list)
    weight_rows: list = field(default_factory=list)
    gram_max_dev: float = 0.0
    tail_mass: float = 0.0
    trace_p1: float = 0.0
    trace_p2: float = 0.0
    idempotency_p1: float = 0.0
    idempotency_p2: float = 0.0
    seed_overlap: float = 0.0
    x2t_isometry_defect: float = 0.0
    x1t_coisometry_defect: float = 0.0
    kernel_overlap: float = 0.0
    kernel_residual: float = 0.0
    intertwine_residual: float = 0.0
    matrix_unit_residual: float = 0.0
    trusted_kernel_x1: int = 0
    trusted_kernel_x2: int = 0
    small_singular_x1: int = 0
    small_singular_x2: int = 0

    @property
    def max_eigen_residual(self) -> float:
        return max((r["residual"] for r in self.eigen_rows), default=0.0)

    @property
    def max_eigen_deviation(self) -> float:
        return max((abs(r["measured"] - r["formula"]) for r in self.eigen_rows), default=0.0)

    @property
    def max_weight_residual(self) -> float:
        return max((r["residual"] for r in self.weight_rows), default=0.0)

    @property
    def max_leakage(self) -> float:
        return max((r["leakage"] for r in self.weight_rows), default=0.0)


def _trusted_defect(M: np.ndarray, ctx: TruncationContext) -> float:
    t = ctx.trusted
    return float(np.abs(M[:t, :t]).max())


def measure_decomposition(dec: Decomposition) -> DecompositionReport:
    ctx, K, B = dec.ctx, dec.K, dec.basis
    q, c = float(ctx.q), float(ctx.c)
    eye = np.eye(ctx.N)
    rep = DecompositionReport(params={"q": q, "c": c, "t1": ctx.t1, "N": ctx.N, "K": K, "margin": ctx.margin, "tol": ctx.tol})

    A11, A22, A12 = dec.x1sx1, dec.x2sx2, dec.x1sx2
    for k in range(1, K - 1):
        v = B.v(k)
        ck = float(dec.eigseq[k])
        measured = float(np.vdot(v, A11 @ v).real)
        residual = float(np.linalg.norm(A11 @ v - ck * v))
        if residual > HARD_TOL:
            raise VerificationFailure("eigenvector", k, residual)
        rep.eigen_rows.append({
            "k": k,
            "formula": ck,
            "measured": measured,
            "residual": residual,
            "companion_formula": float(dec.eigseq.companion[k - 1]),
            "companion_measured": float(np.vdot(v, A22 @ v).real),
        })
    for k in range(1, K - 1):
        v, w_next = B.v(k), B.v(k + 2)
        image = A12 @ v
        w = complex(np.vdot(w_next, image))
        formula = dec.eigseq.weight(k)
        residual = abs(w - formula)
        if residual > HARD_TOL:
            raise VerificationFailure("weight", k, residual)
        rep.weight_rows.append({
            "k": k,
            "formula": formula,
            "measured": w.real,
            "measured_imag": w.imag,
            "residual": residual,
            "leakage": float(np.linalg.norm(image - w * w_next)),
        })

    rep.gram_max_dev = B.gram_max_dev
    rep.tail_mass = B.tail_mass
    s = dec.seeds
    rep.trace_p1 = float(np.trace(s.p1).real)
    rep.trace_p2 = float(np.trace(s.p2).real)
    rep.idempotency_p1 = float(np.abs(s.p1 @ s.p1 - s.p1).max())
    rep.idempotency_p2 = float(np.abs(s.p2 @ s.p2 - s.p2).max())
    rep.seed_overlap = float(abs(np.vdot(s.v1, s.v2)))

    rep.x2t_isometry_defect = _trusted_defect(dec.x2t.conj().T @ dec.x2t - eye, ctx)
    rep.x1t_coisometry_defect = _trusted_defect(dec.x1t @ dec.x1t.conj().T - eye, ctx)

    z = kernel_vector_x1(ctx, ctx.N)
    zn = z / np.linalg.norm(z)
    rep.kernel_overlap = float(abs(np.vdot(s.v1, zn)))
    rep.kernel_residual = float(np.linalg.norm(dec.x1 @ z) / np.linalg.norm(z))

    X = dec.shift
    R = A11 @ X - X @ ((1 + c) * eye - A22)
    t = ctx.trusted
    rep.intertwine_residual = numop.op_norm(R[:t, :t])

    unit_res = []
    if K >= 4:
        for i in (1, 2):
            E = matrix_unit(dec, i, 1, 0)
            unit_res.append(np.linalg.norm(E @ B.v(i) - B.v(i + 2)))
            for j in range(1, 5):
                if j != i:
                    unit_res.append(np.linalg.norm(E @ B.v(j)))
    rep.matrix_unit_residual = float(max(unit_res, default=0.0))

    rep.small_singular_x1 = numop.small_singular_count(dec.x1, ctx.tol)
    rep.small_singular_x2 = numop.small_singular_count(dec.x2, ctx.tol)
    rep.trusted_kernel_x1 = trusted_kernel_count(dec.x1, ctx)
    rep.trusted_kernel_x2 = trusted_kernel_count(dec.x2, ctx)
    return rep


# -- H0 probe and Wold summary -------------------------------------------


@dataclass(frozen=True)
class H0Probe:
    complement_dim: int
    max_deviation: float | None
    median_deviation: float | None


def h0_probe(ctx: TruncationContext, basis: np.ndarray, x1sx1: np.ndarray) -> H0Probe:
    """Orthogonal complement of span(basis) inside the trusted block.

    Reports how far ``x1*x1`` is from ``c`` on that complement.  This is a
    probe only: the finite complement mostly consists of v-vectors beyond K.
    """
    t = ctx.trusted
    Bt = basis[:t]
    Q, _ = np.linalg.qr(Bt)
    M = np.eye(t) - Q @ Q.conj().T
    w, U = np.linalg.eigh(0.5 * (M + M.conj().T))
    U = U[:, w > 0.5]
    dim = U.shape[1]
    if dim == 0:
        return H0Probe(0, None, None)
    A = x1sx1[:t, :t] - ctx.c * np.eye(t)
    dev = np.abs(np.einsum("ij,ij->j", U.conj(), A @ U))
    return H0Probe(dim, float(dev.max()), float(np.median(dev)))


def wold_summary(dec: Decomposition) -> dict:
    """Shift multiplicity (codimension of range of the isometry) and a unitary-part size estimate."""
    ctx = dec.ctx
    X = dec.shift
    defect = np.eye(ctx.N) - X @ X.conj().T
    w, U = np.linalg.eigh(0.5 * (defect + defect.conj().T))
    vecs = U[:, w > 0.5]
    mass = np.sum(np.abs(vecs[: ctx.trusted]) ** 2, axis=0)
    codim = int(np.sum(mass > 0.5))
    kmax = supported_v_count(ctx, dec.seeds.v1, dec.seeds.v2, X)
    return {
        "range_codimension": codim,
        "supported_v_count": kmax,
        "unitary_part_dim_estimate": ctx.trusted - kmax,
    }


# -- gauge ---------------------------------------------------------------


@dataclass
class GaugeReport:
    t_values: list
    spectrum_dev: float = 0.0
    singular_dev: float = 0.0
    conjugation_dev: float = 0.0
    x1sx1_conjugation_dev: float = 0.0
    weight_dev: float | None = None
    rows: list = field(default_factory=list)


def gauge_unitary(t: complex, N: int) -> np.ndarray:
    """Diagonal unitary e_k -> conj(t)^(2k) e_k; conjugating by it turns t1 = t into t1 = 1."""
    return np.diag(np.conj(t) ** (2 * np.arange(N)))


def gauge_check(ctx: TruncationContext, t_values: Sequence[complex], K: int | None = None) -> GaugeReport:
    """Compare the generators across circle parameters.

    For each ``t``: eigenvalues of x1*x1 and singular values of x1*x2 match the
    ``t1 = 1`` ones, and ``D^* (x1*x2)(t) D = t^2 (x1*x2)(1)`` with
    ``D = gauge_unitary(t)``.  With ``K`` given, the v-basis weights are also
    compared.
    """
    base = ctx.with_t1(1.0)
    X1, X2 = build_x_pair(base)
    A11_1 = X1.conj().T @ X1
    A12_1 = X1.conj().T @ X2
    ev_1 = np.linalg.eigvalsh(A11_1)
    sv_1 = np.linalg.svd(A12_1, compute_uv=False)
    w_1 = None
    if K is not None:
        dec1 = decompose(base, K)
        w_1 = np.array([r["measured"] for r in measure_decomposition(dec1).weight_rows])
    rep = GaugeReport(t_values=[complex(t) for t in t_values])
    weight_devs = []
    for t in t_values:
        cx = ctx.with_t1(t)
        x1, x2 = build_x_pair(cx)
        A11 = x1.conj().T @ x1
        A12 = x1.conj().T @ x2
        ev = np.linalg.eigvalsh(A11)
        sv = np.linalg.svd(A12, compute_uv=False)
        D = gauge_unitary(t, ctx.N)
        conj12 = float(np.abs(D.conj().T @ A12 @ D - t**2 * A12_1).max())
        conj11 = float(np.abs(D.conj().T @ A11 @ D - A11_1).max())
        row = {
            "t1": complex(t),
            "spectrum_dev": float(np.abs(ev - ev_1).max()),
            "singular_dev": float(np.abs(sv - sv_1).max()),
            "conjugation_dev": conj12,
            "x1sx1_conjugation_dev": conj11,
        }
        if K is not None:
            w = np.array([r["measured"] for r in measure_decomposition(decompose(cx, K)).weight_rows])
            row["weight_dev"] = float(np.abs(w - w_1).max())
            weight_devs.append(row["weight_dev"])
        rep.rows.append(row)
    if rep.rows:
        rep.spectrum_dev = max(r["spectrum_dev"] for r in rep.rows)
        rep.singular_dev = max(r["singular_dev"] for r in rep.rows)
        rep.conjugation_dev = max(r["conjugation_dev"] for r in rep.rows)
        rep.x1sx1_conjugation_dev = max(r["x1sx1_conjugation_dev"] for r in rep.rows)
    if weight_devs:
        rep.weight_dev = max(weight_devs)
    return rep


# -- brute-force spectrum ------------------------------------------------


def small_instance_match(q: float, c: float, N: int = 16, count: int = 6, t1: complex = 1.0) -> list[dict]:
    """Distance from each of c_1..c_count to the nearest eigenvalue of the N x N x1*x1."""
    x1, _ = build_x_pair(TruncationContext(q=q, c=c, t1=t1, N=N, margin=max(1, N // 4)))
    ev = np.linalg.eigvalsh(x1.conj().T @ x1)
    seq = eigen_sequence(q, c, max(count, 2))
    rows = []
    for k in range(1, count + 1):
        ck = float(seq[k])
        j = int(np.argmin(np.abs(ev - ck)))
        rows.append({"k": k, "formula": ck, "nearest": float(ev[j]), "distance": float(abs(ev[j] - ck))})
    return rows


def cross_engine_residual(x: NCElement, numeric: np.ndarray, ctx: TruncationContext) -> float:
    """Trusted-block gap between a symbolic element evaluated on matrices and a numeric operator."""
    return _trusted_defect(nc_to_matrix(x, ctx) - numeric, ctx)
