"""Finite-dimensional generator systems on weighted Hilbert spaces.

An :class:`OperatorSystem` couples a dense generator matrix A with a diagonal
positive weight w. The weight defines the inner product
``<x, y> = sum_i w_i x_i conj(y_i)`` and the evolution is ``T_t = exp(-t A)``,
so spectra in the closed right half-plane give non-growing modes. Conjugating
with ``D = diag(sqrt(w))`` turns every weighted operator norm into a Euclidean
one, which is how all downstream norm computations are carried out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True, eq=False)
class OperatorSystem:
    """A generator matrix with the diagonal weight of its ambient inner product.

    ``shift`` records the accumulated replacement ``A <- A + omega*I`` so that
    derived systems stay traceable to the unshifted original.
    """

    dim: int
    gen: np.ndarray
    weight: np.ndarray
    label: str = ""
    shift: float = 0.0

    def __post_init__(self):
        gen = np.array(self.gen, dtype=complex)
        if gen.ndim != 2 or gen.shape[0] != gen.shape[1]:
            raise ConfigurationError("generator must be a square matrix")
        if gen.shape[0] != self.dim:
            raise ConfigurationError(f"dim={self.dim} does not match generator shape {gen.shape}")
        if self.dim < 1:
            raise ConfigurationError("dim must be positive")
        if not np.all(np.isfinite(gen)):
            raise ConfigurationError("generator entries must be finite")
        weight = np.array(self.weight, dtype=float)
        if weight.shape != (self.dim,):
            raise ConfigurationError(f"weight must be a length-{self.dim} vector")
        if not np.all(np.isfinite(weight)) or np.any(weight <= 0.0):
            raise ConfigurationError("weights must be strictly positive and finite")
        gen.setflags(write=False)
        weight.setflags(write=False)
        object.__setattr__(self, "gen", gen)
        object.__setattr__(self, "weight", weight)

    @cached_property
    def sqrt_weight(self) -> np.ndarray:
        root = np.sqrt(self.weight)
        root.setflags(write=False)
        return root

    def inner(self, x: np.ndarray, y: np.ndarray) -> complex:
        """Weighted inner product <x, y> = sum w_i x_i conj(y_i)."""
        return complex(np.vdot(np.asarray(y), self.weight * np.asarray(x)))

    def norm(self, x: np.ndarray) -> float:
        return float(np.sqrt(max(self.inner(x, x).real, 0.0)))

    def to_euclidean(self, x: np.ndarray) -> np.ndarray:
        """Coordinates in which the weighted norm of x is the Euclidean norm."""
        return self.sqrt_weight * np.asarray(x, dtype=complex)


def system(gen, weight=None, label: str = "", shift: float = 0.0) -> OperatorSystem:
    """Build an OperatorSystem, defaulting to the unweighted inner product."""
    gen = np.array(gen, dtype=complex)
    if gen.ndim != 2:
        raise ConfigurationError("generator must be a 2-d matrix")
    n = gen.shape[0]
    if weight is None:
        weight = np.ones(n)
    return OperatorSystem(dim=n, gen=gen, weight=np.asarray(weight, dtype=float),
                          label=label or f"matrix({n}x{n})", shift=shift)


def build_diagonal(eigs) -> OperatorSystem:
    """Diagonal generator diag(eigs) with the flat weight.

    Eigenvalues must lie in the closed right half-plane, so the semigroup
    exp(-t A) never grows exponentially.
    """
    eigs = [complex(e) for e in eigs]
    if not eigs:
        raise ConfigurationError("need at least one eigenvalue")
    for e in eigs:
        if e.real < 0.0:
            raise ConfigurationError(f"eigenvalue {e} has negative real part")
    return system(np.diag(np.array(eigs, dtype=complex)), label=f"diagonal(n={len(eigs)})")


def build_jordan(eig, size: int) -> OperatorSystem:
    """Single Jordan block eig*I + superdiagonal of ones, flat weight."""
    if size < 1:
        raise ConfigurationError("Jordan block size must be >= 1")
    eig = complex(eig)
    if eig.real < 0.0:
        raise ConfigurationError(f"eigenvalue {eig} has negative real part")
    gen = np.eye(size, dtype=complex) * eig + np.eye(size, k=1, dtype=complex)
    return system(gen, label=f"jordan(eig={eig}, size={size})")


@dataclass(frozen=True)
class WaveTruncationParams:
    """Fourier truncation window for the perturbed wave system on the 2-torus.

    Modes run over m in [-nx, nx], n in [-ny, ny] for each of the two state
    components; ``index`` flattens (component, m, n) into matrix coordinates.
    """

    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ConfigurationError("nx and ny must be >= 1")

    @property
    def block_dim(self) -> int:
        return (2 * self.nx + 1) * (2 * self.ny + 1)

    @property
    def dim(self) -> int:
        return 2 * self.block_dim

    def index(self, c: int, m: int, n: int) -> int:
        if c not in (1, 2):
            raise ConfigurationError("component must be 1 or 2")
        if abs(m) > self.nx or abs(n) > self.ny:
            raise ConfigurationError(f"mode ({m}, {n}) outside the truncation window")
        return (c - 1) * self.block_dim + (m + self.nx) * (2 * self.ny + 1) + (n + self.ny)

    def unindex(self, i: int) -> tuple[int, int, int]:
        if not 0 <= i < self.dim:
            raise ConfigurationError(f"index {i} out of range")
        c, rest = divmod(i, self.block_dim)
        m, n = divmod(rest, 2 * self.ny + 1)
        return c + 1, m - self.nx, n - self.ny

    def modes(self):
        for m in range(-self.nx, self.nx + 1):
            for n in range(-self.ny, self.ny + 1):
                yield m, n


def build_wave(params: WaveTruncationParams) -> OperatorSystem:
    """Spectral truncation of the perturbed wave generator on the 2-torus.

    State (u1, u2) with generator rows A(u1, u2) = (-u2, (-Lap - M d/dx) u1),
    where M multiplies by exp(i y). In the Fourier basis exp(i(m x + n y)) the
    Laplacian contributes m^2 + n^2 on the diagonal of the lower-left block and
    the multiplier shifts n -> n + 1, landing -i*m one column over; the shift
    leaving the window at n = ny is dropped (Galerkin projection). The weight
    realizes the first-order Sobolev norm on component 1 and the plain L2 norm
    on component 2.
    """
    p = params
    gen = np.zeros((p.dim, p.dim), dtype=complex)
    weight = np.ones(p.dim)
    for m, n in p.modes():
        row1 = p.index(1, m, n)
        row2 = p.index(2, m, n)
        gen[row1, p.index(2, m, n)] = -1.0
        gen[row2, p.index(1, m, n)] = float(m * m + n * n)
        if n - 1 >= -p.ny:
            gen[row2, p.index(1, m, n - 1)] = -1j * m
        weight[row1] = 1.0 + m * m + n * n
    return OperatorSystem(dim=p.dim, gen=gen, weight=weight,
                          label=f"wave(nx={p.nx}, ny={p.ny})")


def euclidean_form(sys: OperatorSystem) -> np.ndarray:
    """D A D^{-1} with D = diag(sqrt(w)); weighted norms become Euclidean."""
    root = sys.sqrt_weight
    out = (sys.gen * root[:, None]) / root[None, :]
    out.setflags(write=False)
    return out


def adjoint(sys: OperatorSystem) -> OperatorSystem:
    """The adjoint system with respect to the weighted inner product.

    A* = W^{-1} A^H W, which satisfies <A x, y> = <x, A* y> and whose
    Euclidean form is the conjugate transpose of the original one.
    """
    w = sys.weight
    gen_star = (sys.gen.conj().T * w[None, :]) / w[:, None]
    return OperatorSystem(dim=sys.dim, gen=gen_star, weight=w,
                          label=f"adjoint({sys.label})", shift=sys.shift)


def shifted(sys: OperatorSystem, omega: float) -> OperatorSystem:
    """Replace the generator by A + omega*I; the semigroup gains exp(-omega*t)."""
    omega = float(omega)
    if omega == 0.0:
        return sys
    gen = sys.gen + omega * np.eye(sys.dim)
    return OperatorSystem(dim=sys.dim, gen=gen, weight=sys.weight,
                          label=f"{sys.label}{omega:+g}I", shift=sys.shift + omega)


def reversed_system(sys: OperatorSystem) -> OperatorSystem:
    """Negate the generator, swapping the forward and backward time directions."""
    return OperatorSystem(dim=sys.dim, gen=-sys.gen, weight=sys.weight,
                          label=f"reversed({sys.label})", shift=-sys.shift)
