"""Model parameters, phase states, Hamiltonians and Poisson tensors.

The fourth-order oscillator q'''' + alpha*q'' + beta*q = 0 is handled as a
linear flow on the phase vector (q, qd, qdd, qddd).  All Hamiltonians are
quadratic forms stored as symmetric 4x4 matrices and all brackets are
constant antisymmetric 4x4 tensors, so every structural identity reduces to
matrix algebra.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ParameterDomainError
from .linalg import as_matrix

DEFAULT_DEG_TOL = 1e-8


@dataclass(frozen=True)
class PuParams:
    """Oscillator parameters: alpha multiplies qdd, beta multiplies q."""

    alpha: float
    beta: float
    omega1: float | None = None
    omega2: float | None = None
    deg_tol: float = DEFAULT_DEG_TOL

    @classmethod
    def from_frequencies(cls, omega1: float, omega2: float,
                         deg_tol: float = DEFAULT_DEG_TOL) -> "PuParams":
        """Build from the two mode frequencies: alpha = w1^2 + w2^2, beta = w1^2 w2^2."""
        w1sq, w2sq = omega1 * omega1, omega2 * omega2
        return cls(alpha=w1sq + w2sq, beta=w1sq * w2sq,
                   omega1=float(omega1), omega2=float(omega2), deg_tol=deg_tol)

    def frequencies(self) -> tuple[float, float]:
        """The (omega1, omega2) pair, derived from (alpha, beta) if needed."""
        if self.omega1 is not None and self.omega2 is not None:
            return self.omega1, self.omega2
        disc = self.alpha * self.alpha - 4.0 * self.beta
        if disc < 0.0:
            raise ParameterDomainError("alpha^2 - 4 beta < 0: no real frequencies")
        root = math.sqrt(disc)
        w1sq = 0.5 * (self.alpha + root)
        w2sq = 0.5 * (self.alpha - root)
        if w1sq < 0.0 or w2sq < 0.0:
            raise ParameterDomainError("negative squared frequency: no real frequencies")
        return math.sqrt(w1sq), math.sqrt(w2sq)

    @property
    def degenerate(self) -> bool:
        w1, w2 = self.frequencies()
        return abs(w1 * w1 - w2 * w2) <= self.deg_tol


@dataclass(frozen=True)
class PhaseState:
    """The phase vector (q, qd, qdd, qddd)."""

    q: float
    qd: float
    qdd: float
    qddd: float

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.q, self.qd, self.qdd, self.qddd)):
            raise InvalidInputError("phase state has non-finite entries")

    def as_array(self) -> np.ndarray:
        return np.array([self.q, self.qd, self.qdd, self.qddd])

    @classmethod
    def from_array(cls, v) -> "PhaseState":
        v = np.asarray(v, dtype=float)
        return cls(float(v[0]), float(v[1]), float(v[2]), float(v[3]))


def _tovec(v) -> np.ndarray:
    if isinstance(v, PhaseState):
        return v.as_array()
    if hasattr(v, "as_array"):
        return v.as_array()
    return np.asarray(v, dtype=float)


class QuadHamiltonian:
    """Quadratic form H(v) = 1/2 v^T S v with symmetric matrix S."""

    __slots__ = ("matrix",)

    def __init__(self, s, sym_tol: float = 1e-12):
        a = as_matrix(s, square=True)
        if np.linalg.norm(a - a.T) > sym_tol * (1.0 + np.linalg.norm(a)):
            raise InvalidInputError("Hamiltonian matrix is not symmetric")
        a = 0.5 * (a + a.T)
        a.flags.writeable = False
        object.__setattr__(self, "matrix", a)

    def __setattr__(self, name, value):
        raise AttributeError("QuadHamiltonian is immutable")

    def value(self, v) -> float:
        x = _tovec(v)
        return float(0.5 * x @ self.matrix @ x)

    def gradient(self, v) -> np.ndarray:
        return self.matrix @ _tovec(v)

    def __add__(self, other: "QuadHamiltonian") -> "QuadHamiltonian":
        return QuadHamiltonian(self.matrix + other.matrix)

    def __sub__(self, other: "QuadHamiltonian") -> "QuadHamiltonian":
        return QuadHamiltonian(self.matrix - other.matrix)

    def __mul__(self, c: float) -> "QuadHamiltonian":
        return QuadHamiltonian(self.matrix * float(c))

    __rmul__ = __mul__

    def __neg__(self) -> "QuadHamiltonian":
        return QuadHamiltonian(-self.matrix)

    def allclose(self, other: "QuadHamiltonian", tol: float = 1e-10) -> bool:
        scale = 1.0 + np.linalg.norm(self.matrix) + np.linalg.norm(other.matrix)
        return np.linalg.norm(self.matrix - other.matrix) <= tol * scale

    def __repr__(self):
        return f"QuadHamiltonian({self.matrix.tolist()})"


class PoissonTensor:
    """Constant antisymmetric tensor J defining {F, G} = grad F . J . grad G."""

    __slots__ = ("matrix",)

    def __init__(self, j, asym_tol: float = 1e-12):
        a = as_matrix(j, square=True)
        if np.linalg.norm(a + a.T) > asym_tol * (1.0 + np.linalg.norm(a)):
            raise InvalidInputError("Poisson tensor is not antisymmetric")
        a = 0.5 * (a - a.T)
        a.flags.writeable = False
        object.__setattr__(self, "matrix", a)

    def __setattr__(self, name, value):
        raise AttributeError("PoissonTensor is immutable")

    def bracket_basis(self, i: int, j: int) -> float:
        """{v_i, v_j} for the coordinate functions themselves."""
        return float(self.matrix[i, j])

    def __repr__(self):
        return f"PoissonTensor({self.matrix.tolist()})"


@dataclass(frozen=True)
class OstrogradskyState:
    """Canonical variables (q1, q2, pi1, pi2) of the first-order system."""

    q1: float
    q2: float
    pi1: float
    pi2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.q1, self.q2, self.pi1, self.pi2])


def companion_field(p: PuParams) -> np.ndarray:
    """Matrix M of the linear flow dv/dt = M v equivalent to the fourth-order equation."""
    return np.array([
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [-p.beta, 0.0, -p.alpha, 0.0],
    ])


def hamiltonian_h1(p: PuParams) -> QuadHamiltonian:
    """H1 = qdd^2/2 - alpha qd^2/2 - beta q^2/2 - qd qddd."""
    a, b = p.alpha, p.beta
    return QuadHamiltonian([
        [-b, 0.0, 0.0, 0.0],
        [0.0, -a, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ])


def hamiltonian_h2(p: PuParams) -> QuadHamiltonian:
    """H2 = beta qd^2/2 - alpha qdd^2/2 - qddd^2/2 - beta q qdd."""
    a, b = p.alpha, p.beta
    return QuadHamiltonian([
        [0.0, 0.0, -b, 0.0],
        [0.0, b, 0.0, 0.0],
        [-b, 0.0, -a, 0.0],
        [0.0, 0.0, 0.0, -1.0],
    ])


def poisson_j1(p: PuParams) -> PoissonTensor:
    """First bracket: {qd,qdd}=1, {qddd,q}=1, {qdd,qddd}=alpha."""
    a = p.alpha
    return PoissonTensor([
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0, a],
        [1.0, 0.0, -a, 0.0],
    ])


def poisson_j2(p: PuParams) -> PoissonTensor:
    """Second bracket: {q,qd}=1/beta, {qdd,qddd}=-1.  Needs beta != 0."""
    if p.beta == 0.0:
        raise ParameterDomainError("second Poisson tensor requires beta != 0")
    ib = 1.0 / p.beta
    return PoissonTensor([
        [0.0, ib, 0.0, 0.0],
        [-ib, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ])


def flow_residual(j: PoissonTensor, h: QuadHamiltonian, p: PuParams) -> float:
    """||J S - M|| / (1 + ||M||): zero iff (J, H) generates the oscillator flow."""
    m = companion_field(p)
    return float(np.linalg.norm(j.matrix @ h.matrix - m) / (1.0 + np.linalg.norm(m)))


def quad_bracket(j: PoissonTensor, f: QuadHamiltonian, g: QuadHamiltonian) -> QuadHamiltonian:
    """The bracket {F, G} of two quadratic forms, again a quadratic form.

    With F = v^T Sf v / 2 the gradient is Sf v, so {F,G}(v) = v^T Sf J Sg v,
    whose symmetric matrix in the 1/2 v^T S v convention is
    Sf J Sg - Sg J Sf (pointwise equal to grad F . J . grad G).
    """
    sf, sg, jm = f.matrix, g.matrix, j.matrix
    return QuadHamiltonian(sf @ jm @ sg - sg @ jm @ sf)


def ostrogradsky_map(p: PuParams, v: PhaseState) -> OstrogradskyState:
    """Canonical variables: q1=q, q2=qd, pi1=-qddd-alpha*qd, pi2=qdd."""
    return OstrogradskyState(v.q, v.qd, -v.qddd - p.alpha * v.qd, v.qdd)


def ostrogradsky_matrix(p: PuParams) -> np.ndarray:
    """Linear map T with (q1, q2, pi1, pi2) = T (q, qd, qdd, qddd)."""
    return np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, -p.alpha, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ])


def ostrogradsky_hamiltonian(p: PuParams) -> QuadHamiltonian:
    """H(q1,q2,pi1,pi2) = pi1 q2 + pi2^2/2 + alpha q2^2/2 - beta q1^2/2."""
    a, b = p.alpha, p.beta
    return QuadHamiltonian([
        [-b, 0.0, 0.0, 0.0],
        [0.0, a, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])


def canonical_tensor() -> PoissonTensor:
    """Canonical bracket {q_i, pi_j} = delta_ij on (q1, q2, pi1, pi2)."""
    return PoissonTensor([
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ])
