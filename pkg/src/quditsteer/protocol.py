"""Exact simulation of the steering and MDI protocols.

Correlation tables from the Born rule, the steering parameter and its
quantum-refereed counterpart computed purely from MDI data, the critical
noise threshold, and Poisson finite-statistics Monte Carlo.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .qmath import is_psd, kron, projector
from .scenario import (
    IsotropicState,
    QuestionStateSet,
    SteeringFunctional,
    max_entangled,
)

__all__ = [
    "CorrelationTable",
    "MdiTable",
    "WitnessReport",
    "CountsTable",
    "correlations",
    "steering_parameter",
    "mdi_table",
    "qrs_witness",
    "critical_p",
    "poisson_mc",
    "random_lhs_table",
]

TABLE_TOL = 1e-10


def _state_matrix(state) -> np.ndarray:
    if isinstance(state, IsotropicState):
        return state.matrix
    return np.asarray(state, dtype=complex)


@dataclass(frozen=True)
class CorrelationTable:
    """Joint outcome probabilities probs[a, b, j] for matched settings."""

    dim: int
    probs: np.ndarray  # shape (dim, dim, settings)

    def __post_init__(self):
        if self.probs.min() < -1e-12:
            raise ValueError("negative probability in correlation table")
        sums = self.probs.sum(axis=(0, 1))
        if np.abs(sums - 1.0).max() > TABLE_TOL:
            raise ValueError("correlation table not normalized per setting")

    @property
    def n_settings(self) -> int:
        return self.probs.shape[2]


@dataclass(frozen=True)
class WitnessReport:
    """Steering parameter, its LHS bound, and the derived witnesses."""

    s: float
    s_lhs: float
    w_s: float
    w_qrs: float
    steering_detected: bool


@dataclass(frozen=True)
class MdiTable:
    """Yes-outcome probabilities P(a, Yes | j, tau_k^T) of the MDI protocol.

    Entries are indexed by the raw question states tau_k; the per-effect
    view P(a, Yes | j, tau_{b,j}^T) is always derived through the
    decomposition weights, never stored.
    """

    dim: int
    probs: np.ndarray  # shape (dim, settings, n_questions)
    qset: QuestionStateSet = field(repr=False)

    def __post_init__(self):
        # Yes-probabilities of a rank-1 projector on unit-trace product states
        if self.probs.min() < -1e-12 or self.probs.max() > 1.0 / self.dim + 1e-10:
            raise ValueError("MDI probabilities outside [0, 1/d]")

    def reconstructed(self, a: int, b: int, j: int) -> float:
        """P(a, Yes | j, tau_{b,j}^T) by linearity over the question states."""
        return float(np.dot(self.qset.s[b, j], self.probs[a, j]))


@dataclass(frozen=True)
class CountsTable:
    """Expected detection counts per table cell, plus Monte Carlo knobs."""

    expected: np.ndarray  # same indexing as CorrelationTable.probs
    trials: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.expected.min() < 0:
            raise ValueError("expected counts must be nonnegative")
        if self.trials < 2:
            raise ValueError("at least two Monte Carlo trials are required")


def correlations(state, alice: list, bob: list) -> CorrelationTable:
    """Born-rule table p(a,b|j) = Tr[(E^A_{a|j} x E^B_{b|j}) rho]."""
    rho = _state_matrix(state)
    da, db = alice[0].dim, bob[0].dim
    if rho.shape != (da * db, da * db):
        raise ValueError("state dimension does not match the POVMs")
    if len(alice) != len(bob):
        raise ValueError("need one Bob setting per Alice setting")
    k = len(alice)
    probs = np.zeros((da, db, k))
    for j in range(k):
        for a in range(da):
            for b in range(db):
                probs[a, b, j] = np.real(
                    np.trace(kron(alice[j].elements[a], bob[j].elements[b]) @ rho)
                )
    return CorrelationTable(dim=da, probs=probs)


def steering_parameter(
    table: CorrelationTable, functional: SteeringFunctional
) -> WitnessReport:
    """Evaluate S on a correlation table and compare with the LHS bound."""
    if table.dim != functional.dim:
        raise ValueError("table and functional dimensions differ")
    s = functional.evaluate(table.probs)
    w_s = s - functional.s_lhs
    return WitnessReport(
        s=s,
        s_lhs=functional.s_lhs,
        w_s=w_s,
        w_qrs=w_s / functional.dim,
        steering_detected=s > functional.s_lhs,
    )


def mdi_table(
    state, alice: list, qset: QuestionStateSet, bsm_projector: np.ndarray | None = None
) -> MdiTable:
    """P(a, Yes | j, tau_k^T) = Tr[(E^A_{a|j} x B1)(rho^{AB} x tau_k^T)].

    ``bsm_projector`` acts on Bob (x) Charlie and defaults to the Bell
    projector |Phi_d><Phi_d|.
    """
    rho = _state_matrix(state)
    d = qset.dim
    if rho.shape != (d * d, d * d):
        raise ValueError("state dimension does not match the question states")
    if bsm_projector is None:
        bsm_projector = projector(max_entangled(d))
    if bsm_projector.shape != (d * d, d * d):
        raise ValueError("Bell projector must act on the Bob-Charlie space")
    if not is_psd(bsm_projector, 1e-10):
        raise ValueError("Bell projector must be positive semidefinite")

    k = len(alice)
    sent = qset.sent_states()
    probs = np.zeros((d, k, qset.n_questions))
    for j in range(k):
        for a in range(d):
            effect = kron(alice[j].elements[a], bsm_projector)
            for q, tau_t in enumerate(sent):
                probs[a, j, q] = np.real(np.trace(effect @ kron(rho, tau_t)))
    return MdiTable(dim=d, probs=probs, qset=qset)


def qrs_witness(
    mdi: MdiTable, qset: QuestionStateSet, functional: SteeringFunctional
) -> WitnessReport:
    """Quantum-refereed witness evaluated purely from the MDI data.

    The steering parameter is rebuilt from the Yes-probabilities as
    d * sum_{j,a} P(a, Yes | j, tau_{f_j(a), j}^T); for exact quantum
    simulation this reproduces S and hence W_QRS = W_S / d.
    """
    d = functional.dim
    s = 0.0
    for j in range(functional.n_settings):
        for a in range(d):
            s += mdi.reconstructed(a, int(functional.targets[j, a]), j)
    s *= d
    w_s = s - functional.s_lhs
    return WitnessReport(
        s=s,
        s_lhs=functional.s_lhs,
        w_s=w_s,
        w_qrs=w_s / d,
        steering_detected=w_s / d > 0,
    )


def critical_p(d: int) -> float:
    """Visibility where 2p + 2(1-p)/d meets the LHS bound 1 + 1/sqrt(d)."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return (d + np.sqrt(d) - 2.0) / (2.0 * (d - 1.0))


def poisson_mc(
    counts: CountsTable, statistic: Callable[[CorrelationTable], float]
) -> tuple[float, float]:
    """Mean and standard deviation of a statistic under Poisson resampling.

    Each trial draws every cell count from a Poisson law with the expected
    value, renormalizes per setting, and evaluates the statistic.  Trial t
    uses the counter-based substream Philox(key=(seed, t)), so results are
    reproducible and independent of evaluation order.
    """
    expected = counts.expected
    settings_totals = expected.sum(axis=(0, 1))
    if np.any(settings_totals <= 0):
        raise ValueError("each setting needs a positive total expected count")
    d = expected.shape[0]
    values = np.empty(counts.trials)
    for t in range(counts.trials):
        rng = np.random.Generator(np.random.Philox(key=[counts.seed, t]))
        sample = rng.poisson(expected).astype(float)
        totals = sample.sum(axis=(0, 1))
        if np.any(totals <= 0):
            raise ValueError("a Monte Carlo trial produced zero total counts")
        table = CorrelationTable(dim=d, probs=sample / totals)
        values[t] = statistic(table)
    return float(values.mean()), float(values.std(ddof=1))


def random_lhs_table(
    d: int, bob: list, rng: np.random.Generator, n_lambda: int = 8
) -> CorrelationTable:
    """A correlation table admitting a local-hidden-state model by construction.

    Draws a random hidden-variable distribution, random (stochastic) response
    functions for Alice, and random pure hidden states for Bob, then applies
    the LHS decomposition p(a,b|j) = sum_l p(l) p(a|j,l) Tr[E_{b|j} rho_l].
    """
    k = len(bob)
    p_lambda = rng.dirichlet(np.ones(n_lambda))
    # mix of deterministic and noisy response functions
    responses = rng.dirichlet(np.ones(d), size=(n_lambda, k))
    if rng.random() < 0.5:
        det = rng.integers(0, d, size=(n_lambda, k))
        responses = np.zeros((n_lambda, k, d))
        for l in range(n_lambda):
            for j in range(k):
                responses[l, j, det[l, j]] = 1.0
    probs = np.zeros((d, d, k))
    for l in range(n_lambda):
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        rho_l = projector(v / np.linalg.norm(v))
        for j in range(k):
            born = np.array(
                [np.real(np.trace(bob[j].elements[b] @ rho_l)) for b in range(d)]
            )
            probs[:, :, j] += p_lambda[l] * np.outer(responses[l, j], born)
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum(axis=(0, 1))
    return CorrelationTable(dim=d, probs=probs)
