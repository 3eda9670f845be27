"""Fock-basis tensor networks for amplitude computation and contraction
cost estimation.

A GBS instance becomes a network of one rank-1 squeezer tensor per mode
and one rank-4 beam-splitter tensor per gate, wired in gate order, with
output wires either left open or closed by photon-count basis vectors.
Contraction paths are searched by randomized greedy descent on the size
of the intermediate produced at each step; the costs are evaluated
symbolically (no tensor is materialized during the search), which is how
lattice sizes far beyond any feasible contraction can still be priced.
"""

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import GbsInstance
from .errors import ContractViolationError, ResourceLimitError
from .matrices import assert_unitary

MEMORY_GUARD_ELEMS = 10 ** 8


@dataclass(frozen=True)
class FockTensor:
    """Dense tensor with one label per index; every axis has the same
    length only by convention of the builders, not by requirement."""

    labels: tuple
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.labels) != self.values.ndim:
            raise ContractViolationError(
                f"{len(self.labels)} labels for a rank-{self.values.ndim} tensor")
        if len(set(self.labels)) != len(self.labels):
            raise ContractViolationError(f"repeated label within tensor: {self.labels}")

    @property
    def size(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class TensorNetwork:
    tensors: tuple
    open_labels: tuple

    def __post_init__(self):
        seen: dict = {}
        for t in self.tensors:
            for lab, dim in zip(t.labels, t.values.shape):
                seen.setdefault(lab, []).append(dim)
        for lab, dims in seen.items():
            if len(set(dims)) != 1:
                raise ContractViolationError(f"label {lab!r} has mismatched dims {dims}")
            expected = 1 if lab in self.open_labels else 2
            if len(dims) != expected:
                raise ContractViolationError(
                    f"label {lab!r} appears {len(dims)} times, expected {expected}")
        missing = set(self.open_labels) - set(seen)
        if missing:
            raise ContractViolationError(f"open labels {missing} not present")


@dataclass(frozen=True)
class ContractionPlan:
    """Pairwise contraction order in single-assignment ids: tensors are
    numbered 0..T-1, and step k merges (i, j) into id T + k."""

    order: tuple
    est_flops: float
    max_tensor_elems: float


def squeezed_vacuum_tensor(r: float, cutoff: int, label: str = "out") -> FockTensor:
    """Rank-1 tensor of squeezed-vacuum amplitudes truncated to ``cutoff``
    levels: amp(2k) = (-tanh r)^k sqrt((2k)!) / (2^k k! sqrt(cosh r)),
    zero on odd levels."""
    if cutoff < 1:
        raise ContractViolationError(f"cutoff must be >= 1, got {cutoff}")
    amp = np.zeros(cutoff, dtype=complex)
    for k in range((cutoff - 1) // 2 + 1):
        amp[2 * k] = ((-math.tanh(r)) ** k
                      * math.exp(0.5 * math.lgamma(2 * k + 1) - math.lgamma(k + 1)
                                 - k * math.log(2.0) - 0.5 * math.log(math.cosh(r))))
    return FockTensor((label,), amp)


def beamsplitter_tensor(v: np.ndarray, cutoff: int,
                        labels=("o1", "o2", "i1", "i2")) -> FockTensor:
    """Rank-4 Fock representation <m1 m2|B(V)|n1 n2> of a two-mode
    beam-splitter, all indices below ``cutoff``.

    Matrix elements come from the exact combinatorial expansion of the
    transformed creation operators, evaluated at full precision and then
    truncated, so elements with m1 + m2 != n1 + n2 are exactly zero and
    every total-photon block whose total fits under the cutoff is itself
    unitary.
    """
    v = np.asarray(v, dtype=complex)
    if v.shape != (2, 2):
        raise ContractViolationError(f"expected a 2x2 matrix, got {v.shape}")
    assert_unitary(v)
    if cutoff < 1:
        raise ContractViolationError(f"cutoff must be >= 1, got {cutoff}")
    fact = [math.factorial(q) for q in range(2 * cutoff)]
    t = np.zeros((cutoff,) * 4, dtype=complex)
    for n1 in range(cutoff):
        for n2 in range(cutoff):
            for m1 in range(max(0, n1 + n2 - cutoff + 1), min(cutoff, n1 + n2 + 1)):
                m2 = n1 + n2 - m1
                s = 0.0 + 0.0j
                for j in range(max(0, m1 - n2), min(n1, m1) + 1):
                    s += (fact[n1] // (fact[j] * fact[n1 - j])
                          * (fact[n2] // (fact[m1 - j] * fact[n2 - m1 + j]))
                          * v[0, 0] ** j * v[1, 0] ** (n1 - j)
                          * v[0, 1] ** (m1 - j) * v[1, 1] ** (n2 - m1 + j))
                t[m1, m2, n1, n2] = s * math.sqrt(fact[m1] * fact[m2]
                                                  / (fact[n1] * fact[n2]))
    return FockTensor(tuple(labels), t)


def fock_basis_vector(level: int, cutoff: int, label: str) -> FockTensor:
    if not 0 <= level < cutoff:
        raise ContractViolationError(
            f"measured level {level} does not fit under cutoff {cutoff}")
    e = np.zeros(cutoff, dtype=complex)
    e[level] = 1.0
    return FockTensor((label,), e)


def build_network(instance: GbsInstance, cutoff: int,
                  pattern=None) -> TensorNetwork:
    """Network for one amplitude (pattern given) or the open output state.

    One squeezer tensor per mode, one beam-splitter tensor per gate wired
    in gate order; with a pattern, every output wire is closed by the
    corresponding photon-count basis vector.
    """
    modes = instance.modes
    wire = [f"m{q}.0" for q in range(modes)]
    hops = [0] * modes
    tensors = [squeezed_vacuum_tensor(instance.r, cutoff, wire[q])
               for q in range(modes)]
    for g in instance.gates:
        new_i = f"m{g.i}.{hops[g.i] + 1}"
        new_j = f"m{g.j}.{hops[g.j] + 1}"
        tensors.append(beamsplitter_tensor(g.v, cutoff,
                                           (new_i, new_j, wire[g.i], wire[g.j])))
        wire[g.i], wire[g.j] = new_i, new_j
        hops[g.i] += 1
        hops[g.j] += 1
    if pattern is None:
        return TensorNetwork(tuple(tensors), tuple(wire))
    counts = np.asarray(pattern, dtype=np.intp)
    if counts.shape[0] != modes:
        raise ContractViolationError(
            f"pattern length {counts.shape[0]} does not match {modes} modes")
    for q in range(modes):
        tensors.append(fock_basis_vector(int(counts[q]), cutoff, wire[q]))
    return TensorNetwork(tuple(tensors), ())


def _mask_size(mask: int, dims, uniform: int | None) -> float:
    """Element count of a tensor whose index set is the given bitmask."""
    if uniform is not None:
        return float(uniform) ** mask.bit_count()
    total = 1.0
    mm = mask
    while mm:
        low = mm & -mm
        total *= dims[low.bit_length() - 1]
        mm ^= low
    return total


def _greedy_path(masks, dims, uniform, rng):
    """One randomized greedy search over a network given as label bitmasks.

    Returns (order, est_flops, max_elems). At every step the candidate
    pair producing the smallest intermediate is contracted, with exact
    ties broken uniformly at random; that tie noise is the only source of
    variation between trials.
    """
    alive = dict(enumerate(masks))
    next_id = len(masks)
    owners: dict[int, set] = {}
    for tid, mask in alive.items():
        mm = mask
        while mm:
            low = mm & -mm
            owners.setdefault(low.bit_length() - 1, set()).add(tid)
            mm ^= low

    heap = []
    for tids in owners.values():
        if len(tids) == 2:
            ia, ib = sorted(tids)
            heapq.heappush(heap, (_mask_size(alive[ia] ^ alive[ib], dims, uniform),
                                  rng.random(), ia, ib, alive[ia], alive[ib]))
    order = []
    est_flops = 0.0
    max_elems = max((_mask_size(m, dims, uniform) for m in masks), default=1.0)
    while len(alive) > 1:
        cand = None
        while heap:
            _, _, ia, ib, ma, mb = heapq.heappop(heap)
            if alive.get(ia) == ma and alive.get(ib) == mb:
                cand = (ia, ib, ma, mb)
                break
        if cand is None:
            # disconnected remainder: outer-product the two smallest ids
            ia, ib = sorted(alive)[:2]
            cand = (ia, ib, alive[ia], alive[ib])
        ia, ib, ma, mb = cand
        est_flops += _mask_size(ma | mb, dims, uniform)
        new_mask = ma ^ mb
        max_elems = max(max_elems, _mask_size(new_mask, dims, uniform))
        order.append((ia, ib))
        del alive[ia], alive[ib]
        tid = next_id
        next_id += 1
        alive[tid] = new_mask
        neighbors = set()
        mm = new_mask
        while mm:
            low = mm & -mm
            tids = owners[low.bit_length() - 1]
            tids.discard(ia)
            tids.discard(ib)
            tids.add(tid)
            neighbors |= tids
            mm ^= low
        neighbors.discard(tid)
        for nb in neighbors:
            pa, pb = (tid, nb) if tid < nb else (nb, tid)
            heapq.heappush(heap, (_mask_size(new_mask ^ alive[nb], dims, uniform),
                                  rng.random(), pa, pb, alive[pa], alive[pb]))
    return tuple(order), est_flops, max_elems


def _network_masks(network: TensorNetwork):
    label_bits: dict = {}
    dims: list = []
    masks = []
    for t in network.tensors:
        mask = 0
        for lab, dim in zip(t.labels, t.values.shape):
            if lab not in label_bits:
                label_bits[lab] = len(dims)
                dims.append(int(dim))
            mask |= 1 << label_bits[lab]
        masks.append(mask)
    uniform = dims[0] if dims and len(set(dims)) == 1 else None
    return masks, dims, uniform


def contraction_cost(network: TensorNetwork, trials: int, seed) -> ContractionPlan:
    """Best contraction plan over ``trials`` randomized greedy searches.

    Costs count one multiply-add per element of the index union at each
    step. Nested child seeds make the trial list for t trials a prefix of
    the list for t' > t trials, so more trials can only improve the
    reported cost.
    """
    if trials < 1:
        raise ContractViolationError(f"trials must be >= 1, got {trials}")
    masks, dims, uniform = _network_masks(network)
    children = np.random.SeedSequence(seed).spawn(trials) \
        if not isinstance(seed, np.random.SeedSequence) else seed.spawn(trials)
    best = None
    for child in children:
        order, flops, elems = _greedy_path(masks, dims, uniform,
                                           np.random.default_rng(child))
        if best is None or (flops, elems) < (best.est_flops, best.max_tensor_elems):
            best = ContractionPlan(order, flops, elems)
    return best


def replay_cost(network: TensorNetwork, plan: ContractionPlan) -> tuple[float, float]:
    """Symbolically replay a plan, returning (est_flops, max_elems);
    validates that the order is a full contraction of this network."""
    masks, dims, uniform = _network_masks(network)
    alive = dict(enumerate(masks))
    next_id = len(masks)
    flops = 0.0
    max_elems = max((_mask_size(m, dims, uniform) for m in masks), default=1.0)
    for ia, ib in plan.order:
        if ia not in alive or ib not in alive:
            raise ContractViolationError(f"plan step ({ia}, {ib}) names a dead tensor")
        flops += _mask_size(alive[ia] | alive[ib], dims, uniform)
        out = alive[ia] ^ alive[ib]
        max_elems = max(max_elems, _mask_size(out, dims, uniform))
        del alive[ia], alive[ib]
        alive[next_id] = out
        next_id += 1
    if len(alive) != 1:
        raise ContractViolationError("plan does not contract the network fully")
    return flops, max_elems


def contract(network: TensorNetwork, plan: ContractionPlan | None = None,
             memory_guard: float = MEMORY_GUARD_ELEMS, seed=0,
             count_ops: bool = False):
    """Contract the network, following ``plan`` (or a fresh single-trial
    greedy plan when none is given).

    Refuses any step whose output tensor would exceed ``memory_guard``
    elements. Returns the scalar amplitude for closed networks and the
    final open tensor's values otherwise; with ``count_ops`` the realized
    multiply-add count is returned alongside.
    """
    if plan is None:
        plan = contraction_cost(network, trials=1, seed=seed)
    alive = {i: (t.labels, t.values) for i, t in enumerate(network.tensors)}
    next_id = len(network.tensors)
    ops = 0.0
    for ia, ib in plan.order:
        if ia not in alive or ib not in alive:
            raise ContractViolationError(f"plan step ({ia}, {ib}) names a dead tensor")
        (la, va), (lb, vb) = alive.pop(ia), alive.pop(ib)
        shared = [lab for lab in la if lab in lb]
        out_labels = tuple(q for q in la if q not in shared) + \
            tuple(q for q in lb if q not in shared)
        out_elems = float(np.prod([dim for lab, dim in zip(la, va.shape)
                                   if lab not in shared]
                                  + [dim for lab, dim in zip(lb, vb.shape)
                                     if lab not in shared], dtype=float))
        if out_elems > memory_guard:
            raise ResourceLimitError(
                f"intermediate of {out_elems:.3e} elements exceeds the "
                f"memory guard of {memory_guard:.3e}")
        axes_a = [la.index(lab) for lab in shared]
        axes_b = [lb.index(lab) for lab in shared]
        ops += out_elems * float(np.prod([va.shape[ax] for ax in axes_a], dtype=float))
        value = np.tensordot(va, vb, axes=(axes_a, axes_b))
        alive[next_id] = (out_labels, value)
        next_id += 1
    if len(alive) != 1:
        raise ContractViolationError("plan does not contract the network fully")
    labels, value = next(iter(alive.values()))
    if labels:
        result = value
    else:
        result = complex(value)
    return (result, ops) if count_ops else result
