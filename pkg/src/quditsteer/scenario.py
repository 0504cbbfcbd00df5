"""States, measurement bases, steering functional, and question states.

Builds the concrete objects the steering protocol is run on: the maximally
entangled qudit state, the isotropic family, the two mutually unbiased
measurement bases, the steering parameter built on them, and the trusted
two-level "question states" together with the coefficients that decompose
every measurement effect over them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qmath import is_psd, ket, projector

__all__ = [
    "Povm",
    "SteeringFunctional",
    "QuestionStateSet",
    "IsotropicState",
    "max_entangled",
    "fourier_basis",
    "fourier_mub",
    "isotropic",
    "steering_functional_two_mubs",
    "question_states_qutrit",
    "question_states",
]

POVM_TOL = 1e-10


@dataclass(frozen=True)
class Povm:
    """One measurement setting: positive effects summing to the identity."""

    dim: int
    elements: list  # list of (dim, dim) complex arrays, one per outcome

    def __post_init__(self):
        for e in self.elements:
            if e.shape != (self.dim, self.dim):
                raise ValueError("POVM element has wrong shape")
            if not is_psd(e, POVM_TOL):
                raise ValueError("POVM element is not positive semidefinite")
        total = sum(self.elements)
        if np.abs(total - np.eye(self.dim)).max() > POVM_TOL:
            raise ValueError("POVM elements do not sum to the identity")

    @property
    def n_outcomes(self) -> int:
        return len(self.elements)

    @classmethod
    def from_kets(cls, kets) -> "Povm":
        kets = [np.asarray(v, dtype=complex) for v in kets]
        return cls(dim=kets[0].size, elements=[projector(v) for v in kets])


@dataclass(frozen=True)
class SteeringFunctional:
    """Linear steering parameter S = sum_{j,a} p(a, f_j(a) | j).

    ``targets[j, a]`` is the Bob outcome paired with Alice outcome ``a`` of
    setting ``j``; the coefficient of p(a,b|j) is the indicator b == f_j(a).
    ``s_lhs`` is the tight bound attainable by local-hidden-state models.
    """

    dim: int
    targets: np.ndarray  # shape (settings, dim), integer
    s_lhs: float

    @property
    def n_settings(self) -> int:
        return self.targets.shape[0]

    def weight(self, a: int, b: int, j: int) -> float:
        return 1.0 if self.targets[j, a] == b else 0.0

    def evaluate(self, probs: np.ndarray) -> float:
        """S of a probability table indexed as probs[a, b, j]."""
        s = 0.0
        for j in range(self.n_settings):
            for a in range(self.dim):
                s += probs[a, self.targets[j, a], j]
        return float(s)


@dataclass(frozen=True)
class QuestionStateSet:
    """Charlie's two-level question states and their decomposition weights.

    ``tau[k]`` are rank-1 density matrices such that every measurement
    effect of the target POVMs decomposes as E_{b|j} = sum_k s[b,j,k] tau[k].
    What Charlie physically sends is the transpose ``tau[k].T`` (states and
    effects are related by a transpose under the Bell-projector reduction),
    so the sent list carries the conjugated phases.
    """

    dim: int
    tau: list  # list of (dim, dim) rank-1 density matrices
    s: np.ndarray  # shape (dim, settings, len(tau)) real weights s[b, j, k]
    target_povms: list = field(repr=False)  # list of Povm, one per setting

    def __post_init__(self):
        for t in self.tau:
            if abs(np.trace(t) - 1.0) > 1e-12:
                raise ValueError("question state must have unit trace")
            evals = np.linalg.eigvalsh(t)
            if evals[-2] > 1e-12:
                raise ValueError("question state must be rank 1")
        for j, povm in enumerate(self.target_povms):
            for b in range(self.dim):
                if np.abs(self.reconstruct(b, j) - povm.elements[b]).max() > 1e-12:
                    raise ValueError(f"decomposition does not reproduce E_{{{b}|{j + 1}}}")

    @property
    def n_questions(self) -> int:
        return len(self.tau)

    def reconstruct(self, b: int, j: int) -> np.ndarray:
        """E_{b|j} rebuilt from the decomposition weights."""
        return sum(self.s[b, j, k] * self.tau[k] for k in range(self.n_questions))

    def sent_states(self) -> list:
        """The density matrices Charlie actually transmits (transposed)."""
        return [t.T.copy() for t in self.tau]


@dataclass(frozen=True)
class IsotropicState:
    """Maximally entangled state mixed with white noise at visibility p."""

    dim: int
    p: float
    matrix: np.ndarray  # (dim^2, dim^2)


def max_entangled(d: int) -> np.ndarray:
    """|Phi_d> = (1/sqrt d) sum_i |ii> in the global index convention."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    v = np.zeros(d * d, dtype=complex)
    for i in range(d):
        v[i * d + i] = 1.0
    return v / np.sqrt(d)


def fourier_basis(d: int) -> list:
    """Kets |b> = (1/sqrt d) sum_i exp(2 pi i b i / d) |i>, b = 0..d-1."""
    omega = np.exp(2j * np.pi / d)
    return [ket([omega ** (b * i) for i in range(d)]) for b in range(d)]


def fourier_mub(d: int, j: int) -> Povm:
    """Measurement setting j=1 (computational) or j=2 (Fourier) for a qudit.

    The two bases are mutually unbiased for every d >= 2; the Fourier phase
    convention matches the qutrit and ququart bases used in the protocol.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if j == 1:
        return Povm.from_kets([ket(np.eye(d)[b], normalize=False) for b in range(d)])
    if j == 2:
        return Povm.from_kets(fourier_basis(d))
    raise ValueError("setting index must be 1 or 2")


def isotropic(d: int, p: float) -> IsotropicState:
    """p |Phi_d><Phi_d| + (1-p)/d^2 * I."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("visibility p must lie in [0, 1]")
    m = p * projector(max_entangled(d)) + (1.0 - p) / d**2 * np.eye(d * d, dtype=complex)
    return IsotropicState(dim=d, p=p, matrix=m)


def steering_functional_two_mubs(d: int) -> SteeringFunctional:
    """S = sum_{a=b} p(a,b|1) + sum_{a+b=0 mod d} p(a,b|2), bound 1 + 1/sqrt(d)."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    targets = np.array(
        [[a for a in range(d)], [(d - a) % d for a in range(d)]], dtype=int
    )
    return SteeringFunctional(dim=d, targets=targets, s_lhs=1.0 + 1.0 / np.sqrt(d))


def _two_level(i: int, j: int, phase: complex, d: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    v[j] = phase
    return v / np.sqrt(2)


def question_states_qutrit() -> QuestionStateSet:
    """The twelve two-level question states for the qutrit protocol.

    The kets below are the decomposition-side states (those whose projectors
    combine linearly into the measurement effects); the physically
    transmitted states are their transposes, i.e. the same kets with
    conjugated phases.  All decomposition weights are validated against the
    effects at construction time.
    """
    d = 3
    w = np.exp(2j * np.pi / 3)
    e3 = np.eye(3)
    kets = [
        ket(e3[0], normalize=False),
        ket(e3[1], normalize=False),
        ket(e3[2], normalize=False),
        _two_level(0, 1, 1.0, d),
        _two_level(0, 2, 1.0, d),
        _two_level(1, 2, 1.0, d),
        _two_level(0, 1, w, d),       # sent as (|0> + e^{-i 2pi/3}|1>)/sqrt2
        _two_level(0, 1, w**2, d),
        _two_level(0, 2, w**4, d),    # e^{i 8pi/3} == e^{i 2pi/3}
        _two_level(0, 2, w**2, d),
        _two_level(1, 2, w, d),
        _two_level(1, 2, w**2, d),
    ]
    tau = [projector(v) for v in kets]

    s = np.zeros((3, 2, 12))
    s[0, 0, 0] = 1.0  # E_{0|1} = tau_1
    s[1, 0, 1] = 1.0
    s[2, 0, 2] = 1.0
    minus = [0, 1, 2]
    for b, plus in enumerate(([3, 4, 5], [6, 9, 10], [7, 8, 11])):
        for k in minus:
            s[b, 1, k] = -1.0 / 3.0
        for k in plus:
            s[b, 1, k] = 2.0 / 3.0

    povms = [fourier_mub(d, 1), fourier_mub(d, 2)]
    return QuestionStateSet(dim=d, tau=tau, s=s, target_povms=povms)


def question_states(d: int) -> QuestionStateSet:
    """Question states plus weights for dimension d in {2, 3, 4}.

    d=3 uses the hand-listed qutrit set; other dimensions build the generic
    basis of two-level states |i>, (|i>+|j>)/sqrt2, (|i>+i|j>)/sqrt2, whose
    projectors span Hermitian space, and solve a linear system for the
    weights of each effect.  The reconstruction is validated either way.
    """
    if d == 3:
        return question_states_qutrit()
    if d not in (2, 4):
        raise ValueError("question states available for d in {2, 3, 4}")

    e = np.eye(d)
    kets = [ket(e[i], normalize=False) for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            kets.append(_two_level(i, j, 1.0, d))
            kets.append(_two_level(i, j, 1.0j, d))
    tau = [projector(v) for v in kets]

    # solve sum_k s_k tau_k = E entrywise (real and imaginary parts)
    basis = np.array([np.concatenate([t.real.ravel(), t.imag.ravel()]) for t in tau]).T
    povms = [fourier_mub(d, 1), fourier_mub(d, 2)]
    s = np.zeros((d, 2, len(tau)))
    for j, povm in enumerate(povms):
        for b in range(d):
            target = np.concatenate(
                [povm.elements[b].real.ravel(), povm.elements[b].imag.ravel()]
            )
            coeffs, residual, *_ = np.linalg.lstsq(basis, target, rcond=None)
            s[b, j] = coeffs
    return QuestionStateSet(dim=d, tau=tau, s=s, target_povms=povms)
