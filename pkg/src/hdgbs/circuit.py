"""Construction of high-dimensional time-bin GBS instances.

An (r, a, D, C) instance couples M = a^D temporal modes through delay
lines of lengths 1, a, ..., a^(D-1): for each cycle and each delay length
tau, a fresh Haar-random 2 x 2 beam-splitter acts on modes (i, i + tau)
for ascending i. The module also evaluates the delay-line loss budget and
the light-cone bandwidth implied by that gate order.
"""

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ContractViolationError, ResourceLimitError
from .matrices import (as_rng, assert_unitary, haar_isometry,
                       matrix_from_json, matrix_to_json)

MODE_LIMIT = 4096


class Gate(NamedTuple):
    i: int
    j: int
    v: np.ndarray     # 2 x 2 unitary


@dataclass(frozen=True)
class GbsInstance:
    """A constructed instance: parameters, gate list and total unitary."""

    r: float
    a: int
    dim: int
    cycles: int
    seed: int
    gates: tuple
    unitary: np.ndarray = field(repr=False)

    @property
    def modes(self) -> int:
        return self.a ** self.dim


def expected_gate_count(a: int, dim: int, cycles: int) -> int:
    m = a ** dim
    return cycles * sum(m - a ** d for d in range(dim))


def delay_path_length(a: int, dim: int) -> int:
    """Total delay-line length traversed per cycle, sum_{d<D} a^d."""
    return sum(a ** d for d in range(dim))


def light_cone_band(a: int, dim: int, cycles: int) -> int:
    """One-sided bandwidth of the instance unitary.

    With gates applied in ascending mode order, amplitude can only move
    toward lower mode indices by a^d per delay-d sweep, so entries with
    column - row > C * sum_d a^d are exactly zero.
    """
    _validate_lattice(a, dim, cycles)
    return cycles * delay_path_length(a, dim)


def _validate_lattice(a: int, dim: int, cycles: int) -> None:
    if a < 2:
        raise ContractViolationError(f"lattice size must be >= 2, got a={a}")
    if dim < 1:
        raise ContractViolationError(f"lattice dimension must be >= 1, got D={dim}")
    if cycles < 1:
        raise ContractViolationError(f"cycle count must be >= 1, got C={cycles}")


def build_instance(r: float, a: int, dim: int, cycles: int, seed: int,
                   mode_limit: int = MODE_LIMIT,
                   shared_layer_gate: bool = False) -> GbsInstance:
    """Build an (r, a, D, C) instance.

    Each beam-splitter receives an independent fresh Haar-random 2 x 2
    unitary (pass ``shared_layer_gate=True`` to reuse one per layer for
    experiments). The total unitary is assembled by applying each gate to
    the running M x M matrix, an O(gates * M) construction, and is
    unitary to 1e-10 by construction.
    """
    _validate_lattice(a, dim, cycles)
    if r < 0:
        raise ContractViolationError(f"squeezing parameter must be >= 0, got r={r}")
    m = a ** dim
    if m > mode_limit:
        raise ResourceLimitError(f"a^D = {m} exceeds the mode limit of {mode_limit}")

    seed = int(seed)
    rng = as_rng(seed)
    unitary = np.eye(m, dtype=complex)
    gates = []
    for _ in range(cycles):
        for d in range(dim):
            tau = a ** d
            v_layer = haar_isometry(2, 2, rng) if shared_layer_gate else None
            for i in range(m - tau):
                v = v_layer if shared_layer_gate else haar_isometry(2, 2, rng)
                j = i + tau
                gates.append(Gate(i, j, v))
                unitary[[i, j], :] = v @ unitary[[i, j], :]
    unitary.setflags(write=False)
    inst = GbsInstance(r=float(r), a=a, dim=dim, cycles=cycles, seed=seed,
                       gates=tuple(gates), unitary=unitary)
    assert len(inst.gates) == expected_gate_count(a, dim, cycles)
    return inst


def adjacency(instance: GbsInstance) -> np.ndarray:
    """Adjacency matrix tanh(r) U U^T of the instance's Gaussian state."""
    u = instance.unitary
    return math.tanh(instance.r) * (u @ u.T)


def adjacency_general(u: np.ndarray, r_vec) -> np.ndarray:
    """U diag(tanh r_i) U^T for per-mode squeezing parameters.

    Vacuum modes are expressed by r_i = 0. The result is complex
    symmetric by construction.
    """
    u = np.asarray(u)
    r = np.asarray(r_vec, dtype=float)
    if r.ndim != 1 or r.shape[0] != u.shape[0]:
        raise ContractViolationError(
            f"r_vec length {r.shape} does not match matrix size {u.shape[0]}")
    if np.any(r < 0):
        raise ContractViolationError("squeezing parameters must be >= 0")
    return (u * np.tanh(r)[None, :]) @ u.T


@dataclass(frozen=True)
class LossBudget:
    """Component transmissions of the delay-line architecture.

    ``eta_bs`` is the per-beam-splitter energy transmission, ``eta_unit``
    the transmission per unit delay length, and ``eta_recirc`` (only used
    in recirculator mode) the recirculation-loop transmission per unit
    length. ``mode`` selects between building C physical copies of the
    delay stack and rerouting through a single recirculation loop.
    """

    eta_bs: float
    eta_unit: float
    eta_recirc: float | None = None
    mode: str = "copies"

    def __post_init__(self):
        for name in ("eta_bs", "eta_unit"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ContractViolationError(f"{name} must lie in (0, 1], got {v}")
        if self.eta_recirc is not None and not 0.0 < self.eta_recirc <= 1.0:
            raise ContractViolationError(
                f"eta_recirc must lie in (0, 1], got {self.eta_recirc}")
        if self.mode not in ("copies", "recirculator"):
            raise ContractViolationError(f"unknown loss mode {self.mode!r}")
        if self.mode == "recirculator" and self.eta_recirc is None:
            raise ContractViolationError("recirculator mode requires eta_recirc")


def loss_budget(a: int, dim: int, cycles: int, budget: LossBudget) -> float:
    """Total end-to-end transmission of an (a, D, C) instance.

    In copies mode every mode crosses C*D beam-splitters and propagates
    a delay length of C * (a^D - 1)/(a - 1) units (the exact geometric
    sum; see ``loss_budget_report`` for the a^(D-1) large-a shorthand).
    Recirculator mode multiplies in the loop transmission over the
    L = M - (a^D - 1)/(a - 1) units spent parked in the recirculation
    delay.
    """
    return loss_budget_report(a, dim, cycles, budget)["total_transmission"]


def loss_budget_report(a: int, dim: int, cycles: int, budget: LossBudget) -> dict:
    """Loss budget with both the exact path length and the large-a
    approximation reported."""
    _validate_lattice(a, dim, cycles)
    m = a ** dim
    path = delay_path_length(a, dim)
    eta_bs_total = budget.eta_bs ** (cycles * dim)
    exact = eta_bs_total * budget.eta_unit ** (cycles * path)
    approx = eta_bs_total * budget.eta_unit ** (cycles * a ** (dim - 1))
    report = {
        "mode": budget.mode,
        "modes": m,
        "beamsplitter_crossings": cycles * dim,
        "path_length_exact": cycles * path,
        "path_length_approx": cycles * a ** (dim - 1),
        "total_transmission_approx": approx,
    }
    if budget.mode == "recirculator":
        loop_length = m - path
        exact *= budget.eta_recirc ** loop_length
        report["recirculator_length"] = loop_length
    report["total_transmission"] = exact
    return report


def instance_to_json(instance: GbsInstance) -> dict:
    return {
        "r": instance.r,
        "a": instance.a,
        "D": instance.dim,
        "C": instance.cycles,
        "seed": instance.seed,
        "unitary": matrix_to_json(instance.unitary),
        "gates": [{"i": g.i, "j": g.j, "v": matrix_to_json(g.v)} for g in instance.gates],
    }


def instance_from_json(obj: dict) -> GbsInstance:
    unitary = matrix_from_json(obj["unitary"])
    assert_unitary(unitary)
    gates = tuple(Gate(int(g["i"]), int(g["j"]), matrix_from_json(g["v"]))
                  for g in obj["gates"])
    inst = GbsInstance(r=float(obj["r"]), a=int(obj["a"]), dim=int(obj["D"]),
                       cycles=int(obj["C"]), seed=int(obj["seed"]),
                       gates=gates, unitary=unitary)
    expected = expected_gate_count(inst.a, inst.dim, inst.cycles)
    if len(gates) != expected:
        raise ContractViolationError(
            f"gate list has {len(gates)} entries, expected {expected}")
    return inst


def save_instance(instance: GbsInstance, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(instance_to_json(instance), fh)


def load_instance(path: str) -> GbsInstance:
    with open(path) as fh:
        return instance_from_json(json.load(fh))
