"""Semidefinite programming layer for steering and randomness certification.

Contains a small generic solver for SDPs over Hermitian PSD blocks (used
for LHS membership and available for cross-checks), the brute-force LHS
bound oracle, and the guessing-probability program that certifies private
randomness from steering data.

The guessing-probability program is solved in primal form after a facial
reduction step: table cells that are exactly zero force the support of the
corresponding branch states, which keeps interior-point solvers exact even
at the maximally entangled point where the feasible set has empty interior.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import cvxpy as cp
import numpy as np

from .protocol import CorrelationTable
from .qmath import eig_max_hermitian, is_psd
from .scenario import SteeringFunctional

__all__ = [
    "SdpProblem",
    "SdpSolution",
    "Assemblage",
    "RandomnessResult",
    "LhsDecision",
    "solve_sdp",
    "assemblage",
    "deterministic_strategies",
    "lhs_membership",
    "lhs_bound_bruteforce",
    "guessing_probability",
    "GuessingSolver",
]

DEFAULT_TOL = 1e-7


def _run_solvers(prob: cp.Problem, tol: float) -> str:
    """Solve with CLARABEL, falling back to SCS; returns the cvxpy status.

    The escalation chain is fixed, so a given problem always takes the same
    path and the result is deterministic.
    """
    inner = max(tol * 1e-2, 1e-10)
    attempts = [
        ("CLARABEL", {"tol_gap_abs": inner, "tol_gap_rel": inner, "tol_feas": inner}),
        ("SCS", {"eps_abs": inner, "eps_rel": inner, "max_iters": 200_000}),
    ]
    status = "solver_error"
    for solver, opts in attempts:
        try:
            with warnings.catch_warnings():
                # reduced-accuracy answers are screened by the gap check below;
                # warm starts would make re-solves depend on solve history
                warnings.simplefilter("ignore", UserWarning)
                prob.solve(solver=solver, warm_start=False, **opts)
        except cp.error.SolverError:
            continue
        status = prob.status
        if status in (cp.OPTIMAL, cp.INFEASIBLE, cp.UNBOUNDED):
            return status
    return status


# ---------------------------------------------------------------------------
# generic small-block SDP


@dataclass
class SdpProblem:
    """max/min sum_B Tr[C_B X_B] over PSD blocks X_B with linear equalities.

    ``blocks`` maps labels to side lengths; ``objective`` holds one Hermitian
    coefficient matrix per block; each constraint is a (coefficients, target)
    pair meaning sum_B Tr[A_B X_B] == target.  All coefficient matrices must
    be Hermitian so every functional is real on Hermitian blocks.
    """

    blocks: list  # list of (label, side length)
    objective: dict  # label -> Hermitian ndarray
    constraints: list  # list of (dict label -> Hermitian ndarray, float target)
    maximize: bool = True

    def dump(self) -> str:
        """Plain-text sparse form, one triplet per line.

        Format:  ``sdp max|min`` header, ``block <label> <n>`` declarations,
        then ``obj <label> <i> <j> <re> <im>`` and
        ``con <idx> <label> <i> <j> <re> <im>`` coefficient triplets
        (upper triangle only; the lower triangle is the conjugate) and
        ``rhs <idx> <value>`` targets.
        """
        lines = [f"sdp {'max' if self.maximize else 'min'}"]
        for label, n in self.blocks:
            lines.append(f"block {label} {n}")

        def emit(tag, mat):
            out = []
            for i in range(mat.shape[0]):
                for j in range(i, mat.shape[1]):
                    v = mat[i, j]
                    if v != 0:
                        out.append(f"{tag} {i} {j} {v.real:.17g} {v.imag:.17g}")
            return out

        for label, mat in self.objective.items():
            lines.extend(emit(f"obj {label}", np.asarray(mat, dtype=complex)))
        for idx, (coeffs, target) in enumerate(self.constraints):
            for label, mat in coeffs.items():
                lines.extend(emit(f"con {idx} {label}", np.asarray(mat, dtype=complex)))
            lines.append(f"rhs {idx} {target:.17g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str) -> "SdpProblem":
        blocks, sizes = [], {}
        objective: dict = {}
        con_coeffs: dict = {}
        con_rhs: dict = {}
        maximize = True
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            try:
                if tok[0] == "sdp":
                    maximize = tok[1] == "max"
                elif tok[0] == "block":
                    blocks.append((tok[1], int(tok[2])))
                    sizes[tok[1]] = int(tok[2])
                elif tok[0] == "obj":
                    label, i, j = tok[1], int(tok[2]), int(tok[3])
                    v = complex(float(tok[4]), float(tok[5]))
                    mat = objective.setdefault(
                        label, np.zeros((sizes[label], sizes[label]), dtype=complex)
                    )
                    mat[i, j] = v
                    if i != j:
                        mat[j, i] = v.conjugate()
                elif tok[0] == "con":
                    idx, label = int(tok[1]), tok[2]
                    i, j = int(tok[3]), int(tok[4])
                    v = complex(float(tok[5]), float(tok[6]))
                    coeffs = con_coeffs.setdefault(idx, {})
                    mat = coeffs.setdefault(
                        label, np.zeros((sizes[label], sizes[label]), dtype=complex)
                    )
                    mat[i, j] = v
                    if i != j:
                        mat[j, i] = v.conjugate()
                elif tok[0] == "rhs":
                    con_rhs[int(tok[1])] = float(tok[2])
                else:
                    raise ValueError(f"unknown record '{tok[0]}'")
            except (IndexError, KeyError, ValueError) as exc:
                raise ValueError(f"line {lineno}: cannot parse {raw!r}") from exc
        n_con = max(list(con_rhs) + list(con_coeffs), default=-1) + 1
        constraints = [(con_coeffs.get(i, {}), con_rhs.get(i, 0.0)) for i in range(n_con)]
        return cls(blocks=blocks, objective=objective, constraints=constraints, maximize=maximize)


@dataclass
class SdpSolution:
    value: float | None
    block_values: dict
    dual_value: float | None
    gap: float | None
    status: str  # optimal | infeasible | unbounded | maxiter


_STATUS_MAP = {
    cp.OPTIMAL: "optimal",
    cp.INFEASIBLE: "infeasible",
    cp.UNBOUNDED: "unbounded",
}


def solve_sdp(problem: SdpProblem, tol: float = DEFAULT_TOL) -> SdpSolution:
    """Solve an SdpProblem; returns a primal/dual pair or a failure status.

    Deterministic for identical inputs.  Non-convergence is reported as
    status ``maxiter``, never silently.
    """
    variables = {}
    for label, n in problem.blocks:
        # 1x1 hermitian variables trip cvxpy's complex2real reduction
        x = cp.Variable((n, n), hermitian=True) if n > 1 else cp.Variable((1, 1), symmetric=True)
        variables[label] = x
    cons = [x >> 0 for x in variables.values()]
    eq_cons = []
    for coeffs, target in problem.constraints:
        expr = sum(
            cp.real(cp.trace(np.asarray(mat, dtype=complex) @ variables[label]))
            for label, mat in coeffs.items()
        )
        eq = expr == target
        eq_cons.append(eq)
        cons.append(eq)
    obj_expr = sum(
        cp.real(cp.trace(np.asarray(mat, dtype=complex) @ variables[label]))
        for label, mat in problem.objective.items()
    )
    objective = cp.Maximize(obj_expr) if problem.maximize else cp.Minimize(obj_expr)
    prob = cp.Problem(objective, cons)
    raw = _run_solvers(prob, tol)
    if raw in (cp.INFEASIBLE, cp.UNBOUNDED):
        # infeasibility/unboundedness certificates carry no block values
        return SdpSolution(None, {}, None, None, _STATUS_MAP[raw])
    if prob.value is None:
        return SdpSolution(None, {}, None, None, "maxiter")
    block_values = {label: np.asarray(x.value) for label, x in variables.items()}
    dual = 0.0
    for eq, (_, target) in zip(eq_cons, problem.constraints):
        y = eq.dual_value
        if y is None:
            dual = None
            break
        dual += float(np.real(y)) * target
    gap = abs(prob.value - dual) if dual is not None else None
    # a reduced-accuracy answer still counts when its own gap meets the contract
    ok = raw == cp.OPTIMAL or (gap is not None and gap <= tol)
    return SdpSolution(float(prob.value), block_values, dual, gap, "optimal" if ok else "maxiter")


# ---------------------------------------------------------------------------
# assemblages and LHS membership


@dataclass(frozen=True)
class Assemblage:
    """Subnormalized conditional states sigma_{a|x} on Bob's side."""

    dim: int
    members: np.ndarray  # shape (outcomes, settings, dim, dim)

    def __post_init__(self):
        outcomes, settings = self.members.shape[:2]
        for a in range(outcomes):
            for x in range(settings):
                if not is_psd(self.members[a, x], 1e-10):
                    raise ValueError("assemblage member is not PSD")
        reduced = self.members.sum(axis=0)
        for x in range(1, settings):
            if np.abs(reduced[x] - reduced[0]).max() > 1e-10:
                raise ValueError("assemblage violates non-signaling")
        if abs(np.trace(reduced[0]) - 1.0) > 1e-10:
            raise ValueError("assemblage is not normalized")

    @property
    def n_outcomes(self) -> int:
        return self.members.shape[0]

    @property
    def n_settings(self) -> int:
        return self.members.shape[1]


def assemblage(state, alice: list) -> Assemblage:
    """sigma_{a|x} = Tr_A[(E^A_{a|x} (x) I) rho] for each setting and outcome."""
    from .protocol import _state_matrix

    rho = _state_matrix(state)
    da = alice[0].dim
    db = rho.shape[0] // da
    if rho.shape != (da * db, da * db):
        raise ValueError("state dimension does not match Alice's POVMs")
    rho4 = rho.reshape(da, db, da, db)
    members = np.zeros((da, len(alice), db, db), dtype=complex)
    for x, povm in enumerate(alice):
        for a in range(da):
            members[a, x] = np.einsum("ij,jkil->kl", povm.elements[a], rho4)
    return Assemblage(dim=db, members=members)


def deterministic_strategies(n_outcomes: int, n_settings: int) -> np.ndarray:
    """All assignments of one outcome per setting, shape (n^k, k)."""
    return np.array(
        list(itertools.product(range(n_outcomes), repeat=n_settings)), dtype=int
    )


def _hermitian_basis(d: int):
    """Real-valued trace functionals spanning Hermitian d x d matrices."""
    ops = []
    for i in range(d):
        m = np.zeros((d, d), dtype=complex)
        m[i, i] = 1.0
        ops.append(m)
    for i in range(d):
        for j in range(i + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[i, j] = m[j, i] = 1.0
            ops.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[i, j] = -1.0j
            m[j, i] = 1.0j
            ops.append(m)
    return ops


@dataclass
class LhsDecision:
    is_lhs: bool
    noise_margin: float  # white noise needed to reach the LHS set; 0 iff LHS
    sigma_lambda: np.ndarray | None  # hidden-state certificate when LHS
    witness: np.ndarray | None  # dual steering functional when steerable
    status: str


def lhs_membership(asm: Assemblage, tol: float = 1e-6) -> LhsDecision:
    """Decide LHS membership of an assemblage by semidefinite programming.

    Solves  min t  s.t.  sum_l D_l(a|x) sigma_l = sigma_{a|x} + t I/d^2
    over PSD hidden states sigma_l, with l running over all deterministic
    response functions.  t = 0 within ``tol`` means the assemblage itself
    admits an LHS model; otherwise the equality-constraint duals assemble a
    steering witness F_{a|x} certifying steerability.
    """
    d = asm.dim
    n_out, n_set = asm.n_outcomes, asm.n_settings
    strategies = deterministic_strategies(n_out, n_set)
    n_lam = len(strategies)
    if n_lam > 256:
        raise ValueError("too many deterministic strategies to enumerate")

    blocks = [(f"s{l}", d) for l in range(n_lam)] + [("t", 1)]
    basis = _hermitian_basis(d)
    constraints = []
    noise = np.eye(d) / d**2
    for a in range(n_out):
        for x in range(n_set):
            for m in basis:
                coeffs = {"t": np.array([[-np.trace(m @ noise)]], dtype=complex)}
                for l, strat in enumerate(strategies):
                    if strat[x] == a:
                        coeffs[f"s{l}"] = m
                target = float(np.real(np.trace(m @ asm.members[a, x])))
                constraints.append((coeffs, target))
    problem = SdpProblem(
        blocks=blocks,
        objective={"t": np.array([[1.0]], dtype=complex)},
        constraints=constraints,
        maximize=False,
    )
    sol = solve_sdp(problem)
    if sol.status != "optimal":
        return LhsDecision(False, np.inf, None, None, sol.status)
    t_star = max(float(sol.value), 0.0)
    if t_star <= tol:
        sigma = np.array([sol.block_values[f"s{l}"] for l in range(n_lam)])
        return LhsDecision(True, t_star, sigma, None, "optimal")
    # rebuild the dual witness from scratch: F maximizing <F, sigma> over the
    # dual cone; re-solving keeps solve_sdp's return shape simple
    witness = _membership_witness(asm, strategies, basis)
    return LhsDecision(False, t_star, None, witness, "optimal")


def _membership_witness(asm, strategies, basis) -> np.ndarray | None:
    """Dual certificate: F with <F, sigma_obs> > 0 >= <F, any LHS assemblage>."""
    d = asm.dim
    n_out, n_set = asm.n_outcomes, asm.n_settings
    F = {
        (a, x): cp.Variable((d, d), hermitian=True)
        for a in range(n_out)
        for x in range(n_set)
    }
    cons = []
    for strat in strategies:
        total = sum(F[(strat[x], x)] for x in range(n_set))
        cons.append(total << 0)
    noise = np.eye(d) / d**2
    norm = 1 + sum(
        cp.real(cp.trace(noise @ F[(a, x)])) for a in range(n_out) for x in range(n_set)
    )
    cons.append(norm >= 0)
    value = sum(
        cp.real(cp.trace(np.asarray(asm.members[a, x]) @ F[(a, x)]))
        for a in range(n_out)
        for x in range(n_set)
    )
    prob = cp.Problem(cp.Maximize(value), cons)
    _run_solvers(prob, DEFAULT_TOL)
    if prob.value is None:
        return None
    out = np.zeros((n_out, n_set, d, d), dtype=complex)
    for (a, x), var in F.items():
        out[a, x] = var.value
    return out


def lhs_bound_bruteforce(bob: list, functional: SteeringFunctional) -> float:
    """Tight LHS value of S by enumerating deterministic outcome assignments.

    For each assignment of Alice outcomes (a_1, ..., a_k) the optimal hidden
    state is the top eigenvector of sum_j Pi_{f_j(a_j)|j}; the bound is the
    maximum of the top eigenvalues over all d^k assignments.
    """
    for povm in bob:
        for e in povm.elements:
            if np.abs(e @ e - e).max() > 1e-9:
                raise ValueError("brute-force bound requires projective measurements")
    k = functional.n_settings
    best = -np.inf
    for assignment in itertools.product(range(functional.dim), repeat=k):
        m = sum(
            bob[j].elements[int(functional.targets[j, assignment[j]])] for j in range(k)
        )
        best = max(best, eig_max_hermitian(m))
    return float(best)


# ---------------------------------------------------------------------------
# guessing probability / min-entropy


@dataclass
class RandomnessResult:
    """Certified local randomness of Alice's outcome at setting x_star."""

    p_guess: float
    h_min: float  # bits
    x_star: int
    attack: np.ndarray | None  # Eve's branch assemblages sigma^e_{a|x}
    witness: dict | None  # dual values of the data constraints
    status: str


def _support_isometries(d, n_out, n_set, *, members=None, table=None, bob=None, zero_tol=1e-12):
    """Facial reduction: admissible support for each sigma^e_{a|x} block.

    A zero cell p(a,b|x) = 0 with PSD blocks forces every branch state to
    avoid the range of E_{b|x}; an assemblage member's own support bounds
    its branch supports directly.
    """
    isom = {}
    for a in range(n_out):
        for x in range(n_set):
            if members is not None:
                evals, evecs = np.linalg.eigh(members[a, x])
                v = evecs[:, evals > zero_tol]
            else:
                dead = [
                    bob[x].elements[b]
                    for b in range(len(bob[x].elements))
                    if table[a, b, x] <= zero_tol
                ]
                if not dead:
                    v = np.eye(d, dtype=complex)
                else:
                    evals, evecs = np.linalg.eigh(sum(dead))
                    v = evecs[:, evals < 1e-9]
            isom[(a, x)] = v if v.shape[1] > 0 else np.zeros((d, 1), dtype=complex)
    return isom


class GuessingSolver:
    """Reusable guessing-probability program for one scenario shape.

    Builds the cvxpy model once with the observed data as parameters, so a
    Monte Carlo loop can re-solve it cheaply.  Only full-support problems are
    cacheable this way; exact zero cells change the facial structure and are
    handled by one-off builds in :func:`guessing_probability`.
    """

    def __init__(self, d, n_settings, x_star, *, bob=None, functional=None,
                 mode="full-table", supports=None, tol=DEFAULT_TOL):
        self.d, self.k, self.x_star = d, n_settings, x_star
        self.mode = mode
        self.tol = tol
        n_out = d
        if supports is None:
            supports = {
                (a, x): np.eye(d, dtype=complex)
                for a in range(n_out)
                for x in range(n_settings)
            }
        self._blocks = {}
        cons = []
        for e in range(d):
            for a in range(n_out):
                for x in range(n_settings):
                    r = supports[(a, x)].shape[1]
                    m = cp.Variable((r, r), hermitian=True) if r > 1 else cp.Variable((1, 1), symmetric=True)
                    self._blocks[(e, a, x)] = (m, supports[(a, x)])
                    cons.append(m >> 0)

        def sigma(e, a, x):
            m, v = self._blocks[(e, a, x)]
            return v @ m @ v.conj().T

        for e in range(d):
            base = sum(sigma(e, a, 0) for a in range(n_out))
            for x in range(1, n_settings):
                cons.append(sum(sigma(e, a, x) for a in range(n_out)) == base)

        self._data_cons = []
        if mode == "assemblage":
            self._params = {
                (a, x): cp.Parameter((d, d), hermitian=True)
                for a in range(n_out)
                for x in range(n_settings)
            }
            for (a, x), par in self._params.items():
                con = sum(sigma(e, a, x) for e in range(d)) == par
                cons.append(con)
                self._data_cons.append(((a, x), con))
        elif mode == "full-table":
            self._params = {
                (a, b, x): cp.Parameter()
                for a in range(n_out)
                for b in range(d)
                for x in range(n_settings)
            }
            for (a, b, x), par in self._params.items():
                expr = cp.real(
                    cp.trace(bob[x].elements[b] @ sum(sigma(e, a, x) for e in range(d)))
                )
                con = expr == par
                cons.append(con)
                self._data_cons.append(((a, b, x), con))
        elif mode == "violation-only":
            self._params = {"S": cp.Parameter()}
            expr = 0
            for x in range(n_settings):
                for a in range(n_out):
                    b = int(functional.targets[x, a])
                    expr = expr + cp.real(
                        cp.trace(bob[x].elements[b] @ sum(sigma(e, a, x) for e in range(d)))
                    )
            con = expr == self._params["S"]
            cons.append(con)
            self._data_cons.append(("S", con))
            cons.append(
                cp.real(sum(cp.trace(sigma(e, a, 0)) for e in range(d) for a in range(n_out))) == 1
            )
        else:
            raise ValueError(f"unknown constraint mode {mode!r}")

        objective = cp.Maximize(
            cp.real(sum(cp.trace(sigma(e, e, x_star)) for e in range(d)))
        )
        self._problem = cp.Problem(objective, cons)
        self._sigma = sigma

    def set_data(self, source):
        if self.mode == "assemblage":
            for (a, x), par in self._params.items():
                par.value = source.members[a, x]
        elif self.mode == "full-table":
            for (a, b, x), par in self._params.items():
                par.value = source.probs[a, b, x]
        else:
            self._params["S"].value = float(source)

    def solve(self, source) -> RandomnessResult:
        self.set_data(source)
        raw = _run_solvers(self._problem, self.tol)
        if raw == cp.INFEASIBLE:
            raise ValueError("guessing-probability constraints are inconsistent")
        if self._problem.value is None or raw == cp.UNBOUNDED:
            return RandomnessResult(np.nan, np.nan, self.x_star, None, None, "maxiter")
        p_guess = float(self._problem.value)
        # solver noise only; genuine violations beyond 1e-6 are left visible
        if 1.0 / self.d - 1e-6 <= p_guess <= 1.0 + 1e-6:
            p_guess = min(max(p_guess, 1.0 / self.d), 1.0)
        attack = np.zeros((self.d, self.d, self.k, self.d, self.d), dtype=complex)
        for (e, a, x), (m, v) in self._blocks.items():
            attack[e, a, x] = v @ m.value @ v.conj().T
        witness = {key: con.dual_value for key, con in self._data_cons}
        return RandomnessResult(
            p_guess=p_guess,
            h_min=float(-np.log2(p_guess)) + 0.0,
            x_star=self.x_star,
            attack=attack,
            witness=witness,
            status="optimal" if raw == cp.OPTIMAL else "maxiter",
        )


_solver_cache: dict = {}


def _scenario_key(bob, functional) -> bytes:
    parts = []
    if bob is not None:
        parts.extend(np.ascontiguousarray(e).tobytes() for p in bob for e in p.elements)
    if functional is not None:
        parts.append(functional.targets.tobytes())
    return b"".join(parts)


def _cached_solver(key, builder) -> GuessingSolver:
    solver = _solver_cache.get(key)
    if solver is None:
        solver = builder()
        _solver_cache[key] = solver
    return solver


def guessing_probability(
    source,
    x_star: int,
    *,
    bob: list | None = None,
    functional: SteeringFunctional | None = None,
    mode: str | None = None,
    tol: float = DEFAULT_TOL,
    zero_tol: float = 1e-12,
) -> RandomnessResult:
    """Optimal probability for Eve to guess Alice's outcome at ``x_star``.

    ``source`` is either an :class:`Assemblage` (constraining Eve to
    reproduce every conditional state) or a :class:`CorrelationTable`, in
    which case ``bob`` must supply the trusted POVMs and ``mode`` selects
    the constraint set: ``"full-table"`` pins every observed probability,
    ``"violation-only"`` pins just the steering parameter of ``functional``.

    Compiled programs are cached per facial-reduction structure, so sweeps
    and Monte Carlo loops re-solve cheaply.
    """
    if isinstance(source, Assemblage):
        d, n_out, n_set = source.dim, source.n_outcomes, source.n_settings
        supports = _support_isometries(
            d, n_out, n_set, members=source.members, zero_tol=zero_tol
        )
        if all(v.shape[1] == d for v in supports.values()):
            solver = _cached_solver(
                ("assemblage", d, n_out, n_set, x_star, tol),
                lambda: GuessingSolver(d, n_set, x_star, mode="assemblage", tol=tol),
            )
        else:
            solver = GuessingSolver(
                d, n_set, x_star, mode="assemblage", supports=supports, tol=tol
            )
        return solver.solve(source)
    if not isinstance(source, CorrelationTable):
        raise TypeError("source must be an Assemblage or a CorrelationTable")
    if bob is None:
        raise ValueError("trusted POVMs are required with a correlation table")
    mode = mode or "full-table"
    d, n_set = source.dim, source.n_settings
    if mode == "full-table":
        mask = source.probs <= zero_tol
        supports = _support_isometries(
            d, d, n_set, table=source.probs, bob=bob, zero_tol=zero_tol
        )
        key = ("full-table", d, n_set, x_star, tol, mask.tobytes(),
               _scenario_key(bob, None))
        solver = _cached_solver(
            key,
            lambda: GuessingSolver(
                d, n_set, x_star, bob=bob, mode="full-table", supports=supports, tol=tol
            ),
        )
        return solver.solve(source)
    if mode == "violation-only":
        if functional is None:
            raise ValueError("violation-only mode needs the steering functional")
        s_obs = functional.evaluate(source.probs)
        saturated = s_obs >= n_set - zero_tol
        supports = None
        if saturated:
            # saturation forces every branch state onto the target effect
            supports = {}
            for a in range(d):
                for x in range(n_set):
                    miss = sum(
                        bob[x].elements[b]
                        for b in range(d)
                        if b != int(functional.targets[x, a])
                    )
                    evals, evecs = np.linalg.eigh(miss)
                    supports[(a, x)] = evecs[:, evals < 1e-9]
        key = ("violation-only", d, n_set, x_star, tol, saturated,
               _scenario_key(bob, functional))
        sup = supports
        solver = _cached_solver(
            key,
            lambda: GuessingSolver(
                d, n_set, x_star, bob=bob, functional=functional,
                mode="violation-only", supports=sup, tol=tol,
            ),
        )
        return solver.solve(s_obs)
    raise ValueError(f"unknown constraint mode {mode!r}")
