"""Jones-calculus simulator for path-polarization networks.

Logical qudits ride on (path, polarization) modes of a single photon.
Networks are ordered lists of elements acting linearly on those modes:

* ``hwp``/``qwp`` -- wave plates mixing H/V within one path.  Conventions:
  HWP(t) = R(t) diag(1,-1) R(-t), QWP(t) = R(t) diag(1, i) R(-t) with R the
  standard rotation and angles in degrees (fast axis from H, counted
  counterclockwise looking into the beam); global phases are dropped.
* ``bd`` -- beam displacer: transmits H straight, displaces V by a fixed
  path offset within its span.
* ``pbs`` -- polarizing beam splitter between two paths: H transmitted,
  V exchanged.
* ``phase`` -- calibration phase (path length / birefringence trim).
* ``block`` -- beam dump on a path.

Network description files use one element per line (grammar in
:func:`parse_network`); the setups shipped under ``networks/`` encode the
protocol's measurement analyzers and partial Bell-state projectors as data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy.optimize import minimize

from .qmath import projector
from .scenario import Povm, fourier_mub, max_entangled

__all__ = [
    "WaveplateElement",
    "PathPolState",
    "OpticalNetwork",
    "jones",
    "rotation",
    "encode_state",
    "apply_network",
    "network_transfer",
    "effective_povm",
    "effective_operator",
    "verify_network",
    "parse_network",
    "load_network",
    "packaged_network",
    "solve_qhq",
    "qhq_matrix",
    "phase_distance",
    "alice_measurement_network",
    "bsm_projector_network",
]

_POL = {"H": 0, "V": 1}


@dataclass(frozen=True)
class WaveplateElement:
    kind: str  # "HWP" | "QWP"
    angle: float  # degrees
    path: int


@dataclass(frozen=True)
class _Phase:
    path: int
    phase: float  # degrees
    pol: str  # "H" | "V" | "both"


@dataclass(frozen=True)
class _Bd:
    shift: int
    first: int
    last: int


@dataclass(frozen=True)
class _Pbs:
    path_a: int
    path_b: int


@dataclass(frozen=True)
class _Block:
    path: int


@dataclass
class PathPolState:
    """Single-photon amplitudes over (path, polarization) modes."""

    amplitudes: np.ndarray  # shape (n_paths, 2), columns H and V

    @property
    def n_paths(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass
class OpticalNetwork:
    """Ordered elements plus the logical input/output encodings."""

    n_paths: int
    elements: list
    encoding: dict  # logical level -> (path, pol) input modes
    mode: str = "analyzer"  # "analyzer" | "projector"
    dim: int = 0  # logical input dimension
    outputs: dict = field(default_factory=dict)  # outcome -> (path, pol)
    success: tuple | None = None  # (path, pol) for projector networks
    target: tuple | None = None  # ("mub", d, j) or ("bell", d)
    name: str = ""

    def __post_init__(self):
        if len(set(self.encoding.values())) != len(self.encoding):
            raise ValueError("input encoding is not a bijection onto modes")
        if len(set(self.outputs.values())) != len(self.outputs):
            raise ValueError("output encoding is not a bijection onto modes")


def rotation(angle_deg: float) -> np.ndarray:
    t = np.deg2rad(angle_deg)
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])


def jones(wp: WaveplateElement) -> np.ndarray:
    """2x2 Jones matrix of a wave plate (global phase dropped)."""
    retarder = np.diag([1.0, -1.0]) if wp.kind == "HWP" else np.diag([1.0, 1.0j])
    r = rotation(wp.angle)
    j = r @ retarder.astype(complex) @ r.T
    # snap trig residue at axis-aligned angles so empty modes stay empty
    j[np.abs(j) < 1e-15] = 0.0
    return j


def _mode(path: int, pol: int, n_paths: int) -> int:
    if not 1 <= path <= n_paths:
        raise ValueError(f"path {path} outside declared range 1..{n_paths}")
    return (path - 1) * 2 + pol


def _apply_element(element, m: np.ndarray, n_paths: int) -> np.ndarray:
    """Apply one element to an (2 n_paths, k) amplitude matrix."""
    if isinstance(element, WaveplateElement):
        i = _mode(element.path, 0, n_paths)
        m[i : i + 2] = jones(element) @ m[i : i + 2]
    elif isinstance(element, _Phase):
        i = _mode(element.path, 0, n_paths)
        factor = np.exp(1j * np.deg2rad(element.phase))
        if element.pol in ("H", "both"):
            m[i] *= factor
        if element.pol in ("V", "both"):
            m[i + 1] *= factor
    elif isinstance(element, _Bd):
        occupied = lambda row: np.abs(row).max() > 1e-12
        moved = {}
        for p in range(element.first, element.last + 1):
            src = _mode(p, 1, n_paths)
            if occupied(m[src]):
                dst_path = p + element.shift
                dst = _mode(dst_path, 1, n_paths)
                moved[dst] = m[src].copy()
            m[src] = 0.0
        for dst, amp in moved.items():
            if occupied(m[dst]):
                raise ValueError("beam displacer would overlap two modes")
            m[dst] = amp
    elif isinstance(element, _Pbs):
        a = _mode(element.path_a, 1, n_paths)
        b = _mode(element.path_b, 1, n_paths)
        m[[a, b]] = m[[b, a]]
    elif isinstance(element, _Block):
        i = _mode(element.path, 0, n_paths)
        m[i : i + 2] = 0.0
    else:
        raise TypeError(f"unknown element {element!r}")
    return m


def encode_state(net: OpticalNetwork, vector) -> PathPolState:
    """Place a logical state vector onto the network's input modes."""
    vector = np.asarray(vector, dtype=complex).reshape(-1)
    if vector.size != net.dim:
        raise ValueError("state dimension does not match the network encoding")
    amps = np.zeros((net.n_paths, 2), dtype=complex)
    for level, (path, pol) in net.encoding.items():
        amps[path - 1, _POL[pol]] = vector[level]
    return PathPolState(amplitudes=amps)


def apply_network(net: OpticalNetwork, state: PathPolState) -> PathPolState:
    """Propagate a path-polarization state through the network."""
    if state.n_paths != net.n_paths:
        raise ValueError("state and network disagree on the number of paths")
    # amplitudes arrive as (n_paths, 2); flatten to the internal mode order
    m = state.amplitudes.astype(complex).reshape(-1, 1).copy()
    for element in net.elements:
        m = _apply_element(element, m, net.n_paths)
    return PathPolState(amplitudes=m.reshape(net.n_paths, 2))


def network_transfer(net: OpticalNetwork) -> np.ndarray:
    """Transfer matrix from logical input levels to all (path, pol) modes."""
    n_modes = 2 * net.n_paths
    m = np.zeros((n_modes, net.dim), dtype=complex)
    for level, (path, pol) in net.encoding.items():
        m[_mode(path, _POL[pol], net.n_paths), level] = 1.0
    for element in net.elements:
        m = _apply_element(element, m, net.n_paths)
    return m


def effective_povm(net: OpticalNetwork) -> Povm:
    """POVM realized by the declared detector ports.

    Each port contributes E_k = w_k^dagger w_k with w_k the port's row of
    the transfer matrix; for a lossless analyzer these sum to the identity.
    """
    if net.mode != "analyzer":
        raise ValueError("effective_povm needs an analyzer network")
    m = network_transfer(net)
    elements = []
    for outcome in sorted(net.outputs):
        path, pol = net.outputs[outcome]
        w = m[_mode(path, _POL[pol], net.n_paths)]
        elements.append(np.outer(w.conj(), w))
    return Povm(dim=net.dim, elements=elements)


def effective_operator(net: OpticalNetwork) -> np.ndarray:
    """Rank-1 operator w^dagger w implemented by the success port."""
    if net.mode != "projector" or net.success is None:
        raise ValueError("effective_operator needs a projector network")
    m = network_transfer(net)
    path, pol = net.success
    w = m[_mode(path, _POL[pol], net.n_paths)]
    return np.outer(w.conj(), w)


def _target_operator(net: OpticalNetwork):
    kind = net.target[0]
    if kind == "mub":
        _, d, j = net.target
        return fourier_mub(d, j)
    if kind == "bell":
        _, d = net.target
        return projector(max_entangled(d))
    raise ValueError(f"unknown target {net.target!r}")


def verify_network(net: OpticalNetwork, tol: float = 1e-6) -> dict:
    """Compare the network's effective operator(s) against its target.

    Analyzers are compared outcome by outcome in operator norm (ports are
    phase-insensitive, so no extra quotient is needed); projector networks
    are compared after normalization, i.e. up to the success probability.
    """
    if net.target is None:
        raise ValueError("network declares no verification target")
    if net.mode == "analyzer":
        target = _target_operator(net)
        got = effective_povm(net)
        distances = [
            float(np.linalg.norm(g - t, 2))
            for g, t in zip(got.elements, target.elements)
        ]
        distance = max(distances)
    else:
        target = _target_operator(net)
        op = effective_operator(net)
        trace = float(np.real(np.trace(op)))
        if trace <= 0:
            distance, distances = float("inf"), []
        else:
            distance = float(np.linalg.norm(op / trace - target, 2))
            distances = [distance]
    return {
        "name": net.name,
        "target": net.target,
        "distance": distance,
        "distances": distances,
        "passed": bool(distance < tol),
        "tol": tol,
    }


# ---------------------------------------------------------------------------
# network description files


def parse_network(text: str, name: str = "<string>") -> OpticalNetwork:
    """Parse a plain-text network description.

    Grammar (one record per line, ``#`` starts a comment)::

        paths N                 declare path count (1-based labels)
        mode analyzer|projector
        dim D                   logical input dimension
        input LEVEL PATH H|V    logical input encoding
        out OUTCOME PATH H|V    detector port (analyzer)
        success PATH H|V        success port (projector)
        target mub D J          verify against a measurement basis
        target bell D           verify against the Bell projector
        hwp PATH ANGLE          half-wave plate
        qwp PATH ANGLE          quarter-wave plate
        phase PATH DEG [H|V|both]
        bd SHIFT FIRST LAST     beam displacer over paths FIRST..LAST
        pbs PATH_A PATH_B
        block PATH

    Raises ``ValueError`` with the offending line number on bad input.
    """
    n_paths = 0
    mode = "analyzer"
    dim = 0
    encoding: dict = {}
    outputs: dict = {}
    success = None
    target = None
    elements: list = []
    seen_any = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        seen_any = True
        tok = line.split()
        try:
            key = tok[0]
            if key == "paths":
                n_paths = int(tok[1])
            elif key == "mode":
                if tok[1] not in ("analyzer", "projector"):
                    raise ValueError("bad mode")
                mode = tok[1]
            elif key == "dim":
                dim = int(tok[1])
            elif key == "input":
                encoding[int(tok[1])] = (int(tok[2]), tok[3])
                if tok[3] not in _POL:
                    raise ValueError("bad polarization")
            elif key == "out":
                outputs[int(tok[1])] = (int(tok[2]), tok[3])
                if tok[3] not in _POL:
                    raise ValueError("bad polarization")
            elif key == "success":
                success = (int(tok[1]), tok[2])
                if tok[2] not in _POL:
                    raise ValueError("bad polarization")
            elif key == "target":
                if tok[1] == "mub":
                    target = ("mub", int(tok[2]), int(tok[3]))
                elif tok[1] == "bell":
                    target = ("bell", int(tok[2]))
                else:
                    raise ValueError("bad target")
            elif key == "hwp":
                elements.append(WaveplateElement("HWP", float(tok[2]), int(tok[1])))
            elif key == "qwp":
                elements.append(WaveplateElement("QWP", float(tok[2]), int(tok[1])))
            elif key == "phase":
                pol = tok[3] if len(tok) > 3 else "both"
                if pol not in ("H", "V", "both"):
                    raise ValueError("bad polarization")
                elements.append(_Phase(int(tok[1]), float(tok[2]), pol))
            elif key == "bd":
                elements.append(_Bd(int(tok[1]), int(tok[2]), int(tok[3])))
            elif key == "pbs":
                elements.append(_Pbs(int(tok[1]), int(tok[2])))
            elif key == "block":
                elements.append(_Block(int(tok[1])))
            else:
                raise ValueError(f"unknown record '{key}'")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"{name}:{lineno}: cannot parse {raw.strip()!r} ({exc})") from None
    if not seen_any:
        raise ValueError(f"{name}: empty network description")
    if n_paths <= 0:
        raise ValueError(f"{name}: missing 'paths' declaration")
    if dim <= 0 or len(encoding) != dim:
        raise ValueError(f"{name}: input encoding must cover all {dim or '?'} levels")
    net = OpticalNetwork(
        n_paths=n_paths,
        elements=elements,
        encoding=encoding,
        mode=mode,
        dim=dim,
        outputs=outputs,
        success=success,
        target=target,
        name=name,
    )
    # fail fast on out-of-range references
    network_transfer(net)
    return net


def load_network(path) -> OpticalNetwork:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_network(fh.read(), name=str(path))


def packaged_network(name: str) -> OpticalNetwork:
    """Load one of the setups shipped with the package (by file name)."""
    text = resources.files("quditsteer.networks").joinpath(name).read_text()
    return parse_network(text, name=name)


def alice_measurement_network(j: int):
    """Measurement analyzer for setting j in {1, 2}: network plus its POVM."""
    if j not in (1, 2):
        raise ValueError("setting index must be 1 or 2")
    net = packaged_network(f"alice_d3_j{j}.net")
    return net, effective_povm(net)


def bsm_projector_network(d: int):
    """Partial Bell-state projector network for d in {3, 4} plus its operator."""
    if d not in (3, 4):
        raise ValueError("Bell projector networks exist for d in {3, 4}")
    net = packaged_network(f"bsm_d{d}.net")
    return net, effective_operator(net)


# ---------------------------------------------------------------------------
# QHQ decomposition


def qhq_matrix(q1: float, h: float, q2: float) -> np.ndarray:
    """QWP(q1) . HWP(h) . QWP(q2), the wave-plate stack for a qubit unitary."""
    return (
        jones(WaveplateElement("QWP", q1, 0))
        @ jones(WaveplateElement("HWP", h, 0))
        @ jones(WaveplateElement("QWP", q2, 0))
    )


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Operator distance between 2x2 unitaries modulo a global phase."""
    overlap = abs(np.trace(a.conj().T @ b)) / 2.0
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - min(overlap, 1.0)))))


def solve_qhq(target: np.ndarray, tol: float = 1e-8) -> tuple:
    """Angles (q1, h, q2) whose QHQ stack realizes ``target`` up to phase.

    The target must be unitary within 1e-10.  Solved numerically from a
    deterministic grid of starting points; raises if no start converges.
    """
    target = np.asarray(target, dtype=complex)
    if target.shape != (2, 2) or np.abs(target @ target.conj().T - np.eye(2)).max() > 1e-10:
        raise ValueError("QHQ target must be a 2x2 unitary")

    def cost(angles):
        v = qhq_matrix(*angles)
        return 1.0 - abs(np.trace(target.conj().T @ v)) / 2.0

    best = None
    for q1 in (0.0, 45.0, 90.0, 135.0):
        for h in (0.0, 22.5, 45.0, 67.5, 112.5, 157.5):
            for q2 in (0.0, 45.0, 90.0, 135.0):
                res = minimize(cost, x0=[q1, h, q2], method="Nelder-Mead",
                               options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
                if best is None or res.fun < best.fun:
                    best = res
                if best.fun < tol**2 / 2:
                    q1s, hs, q2s = best.x
                    return float(q1s), float(hs), float(q2s)
    raise RuntimeError(f"QHQ search did not converge (residual {best.fun:.2e})")
