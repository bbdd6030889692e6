"""Toeplitz symbols read off matrix bands, winding numbers and the pullback test.

An operator ``T`` that is Toeplitz modulo compacts with respect to an
orthonormal sequence ``b_0, b_1, ...`` has ``<b_{j+d}, T b_j>`` converging to
the ``d``-th Fourier coefficient of its symbol as ``j`` grows.  The estimate
averages these band entries over a window near the end of the sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SYMBOL_TOL = 1e-6


class UnreliableSymbolError(RuntimeError):
    """Band entries scatter too much over the window to define a symbol."""


class IndexUndefinedError(RuntimeError):
    """The symbol (nearly) vanishes on the circle, so it has no winding number."""


@dataclass
class SymbolSample:
    coeffs: dict[int, complex]
    window: tuple[int, int]
    tag: str = ""
    scatter: dict[int, float] = field(default_factory=dict)
    tol: float = SYMBOL_TOL

    @property
    def trusted(self) -> bool:
        return all(s < 10 * self.tol for s in self.scatter.values())

    @property
    def max_freq(self) -> int:
        return max(abs(d) for d in self.coeffs)

    def evaluate(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return sum(a * np.exp(1j * d * theta) for d, a in self.coeffs.items())

    def coeff(self, d: int) -> complex:
        return self.coeffs.get(d, 0j)

    def as_pairs(self) -> dict[str, list[float]]:
        return {str(d): [a.real, a.imag] for d, a in sorted(self.coeffs.items())}


def default_window(length: int, max_freq: int) -> tuple[int, int]:
    """Positions ``[ceil(3L/4), L-1-max_freq]`` of a length-L sequence."""
    lo = max(max_freq, math.ceil(3 * length / 4))
    hi = length - 1 - max_freq
    if hi < lo:
        raise ValueError(f"sequence of length {length} too short for frequency {max_freq}")
    return lo, hi


def subspace_columns(basis: np.ndarray, i: int | None) -> np.ndarray:
    """Columns of the v-basis spanning H_i (``i`` in {1, 2}); all columns if ``i`` is None."""
    if i is None:
        return basis
    if i not in (1, 2):
        raise ValueError("subspace index must be 1, 2 or None")
    return basis[:, i - 1 :: 2]


def symbol_estimate(
    T: np.ndarray,
    basis: np.ndarray,
    i: int | None = None,
    max_freq: int = 2,
    window: tuple[int, int] | None = None,
    tol: float = SYMBOL_TOL,
    strict: bool = True,
) -> SymbolSample:
    B = subspace_columns(basis, i)
    L = B.shape[1]
    lo, hi = window or default_window(L, max_freq)
    if lo - max_freq < 0 or hi + max_freq > L - 1:
        raise ValueError("window plus frequency range exceeds the basis")
    M = B.conj().T @ (T @ B[:, lo - max_freq : hi + max_freq + 1])
    coeffs, scatter = {}, {}
    cols = np.arange(lo, hi + 1)
    for d in range(-max_freq, max_freq + 1):
        samples = M[cols + d, cols - lo + max_freq]
        mean = complex(samples.mean())
        coeffs[d] = mean
        scatter[d] = float(np.abs(samples - mean).max())
    tag = {None: "all", 1: "H1", 2: "H2"}[i]
    sample = SymbolSample(coeffs, (lo, hi), tag, scatter, tol)
    if strict and not sample.trusted:
        worst = max(scatter, key=scatter.get)
        raise UnreliableSymbolError(
            f"scatter {scatter[worst]:.3e} at frequency {worst} exceeds {10 * tol:g}"
        )
    return sample


def winding_index(sample: SymbolSample, grid_size: int = 1024) -> int:
    theta = np.linspace(0.0, 2 * np.pi, grid_size, endpoint=False)
    values = sample.evaluate(theta)
    if np.abs(values).min() <= 10 * sample.tol:
        raise IndexUndefinedError(f"symbol modulus drops to {np.abs(values).min():.3e} on the circle")
    steps = np.angle(np.roll(values, -1) / values)
    if np.abs(steps).max() > np.pi / 2:
        raise IndexUndefinedError("grid too coarse to follow the symbol's phase")
    return int(round(steps.sum() / (2 * np.pi)))


def fredholm_index(sample: SymbolSample, grid_size: int = 1024) -> int:
    """Index of a Toeplitz-type operator: minus the winding number of its symbol."""
    return -winding_index(sample, grid_size)


@dataclass
class PullbackResult:
    passed: bool
    rows: list


def pullback_check(
    operators: dict[str, np.ndarray],
    basis: np.ndarray,
    max_freq: int = 2,
    tol: float = SYMBOL_TOL,
) -> PullbackResult:
    """Each operator must have the same symbol on H1 and on H2."""
    rows = []
    for name, T in operators.items():
        s1 = symbol_estimate(T, basis, 1, max_freq, tol=tol, strict=False)
        s2 = symbol_estimate(T, basis, 2, max_freq, tol=tol, strict=False)
        diff = max(abs(s1.coeff(d) - s2.coeff(d)) for d in range(-max_freq, max_freq + 1))
        ok = diff < tol and s1.trusted and s2.trusted
        rows.append({"operator": name, "H1": s1, "H2": s2, "max_diff": float(diff), "pass": bool(ok)})
    return PullbackResult(all(r["pass"] for r in rows), rows)


def toeplitz_model(sample: SymbolSample, size: int) -> np.ndarray:
    """Toeplitz matrix with entry (m, n) equal to coefficient m - n."""
    M = np.zeros((size, size), dtype=complex)
    for d, a in sample.coeffs.items():
        M += a * np.eye(size, k=-d)
    return M


def compact_remainder_check(
    T: np.ndarray,
    basis: np.ndarray,
    i: int | None,
    sample: SymbolSample,
    corner: int,
    tol: float = SYMBOL_TOL,
) -> dict:
    """Entries of (T on the basis) minus its Toeplitz model outside the top-left corner."""
    B = subspace_columns(basis, i)
    L = B.shape[1]
    R = B.conj().T @ T @ B - toeplitz_model(sample, L)
    outside = np.ones((L, L), dtype=bool)
    outside[:corner, :corner] = False
    worst = float(np.abs(R[outside]).max()) if outside.any() else 0.0
    inside = float(np.abs(R[~outside]).max()) if (~outside).any() else 0.0
    return {"corner": corner, "max_outside": worst, "max_inside": inside, "pass": worst < tol}


def convolve(a: SymbolSample, b: SymbolSample) -> dict[int, complex]:
    """Fourier coefficients of the pointwise product of two symbols."""
    out: dict[int, complex] = {}
    for d1, x in a.coeffs.items():
        for d2, y in b.coeffs.items():
            out[d1 + d2] = out.get(d1 + d2, 0j) + x * y
    return out
