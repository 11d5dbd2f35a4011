"""Substep-exact simulation, transition-graph analysis, and desk-scale deciders.

One *step* of a network under a block-parallel schedule is the composition of
one block update per substep; an automaton in a short o-block is updated many
times per step.  Everything here is exact and exhaustive, guarded by explicit
resource caps: ``cap`` bounds the number of substeps a single step may expand
to, ``n_cap`` bounds the network size for whole-graph operations.  Exceeding a
cap raises :class:`ResourceCapError` rather than truncating.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import CrossCheckError, ResourceCapError
from .network import (
    BooleanNetwork,
    Const,
    Or,
    Var,
    Xor,
    and_chain,
    format_config,
    update_block,
)
from .partitions import PrimeGadgetBasis, gadget_primes
from .schedule import DEFAULT_BLOCK_CAP, PartitionedOrder, equiv0, phi

DEFAULT_SUBSTEP_CAP = DEFAULT_BLOCK_CAP
DEFAULT_GRAPH_N_CAP = 20


def _require_compatible(f: BooleanNetwork, mu: PartitionedOrder) -> None:
    if f.n != mu.n:
        raise ValueError(f"network has {f.n} automata but schedule has {mu.n}")


def _check_config(x: int, n: int) -> None:
    if not 0 <= x < (1 << n):
        raise ValueError(f"configuration {x} out of range for n={n}")


def _check_substeps(mu: PartitionedOrder, cap: int) -> int:
    length = mu.lcm()
    if length > cap:
        raise ResourceCapError(
            f"one step expands to {length} substeps, above the cap of {cap}"
        )
    return length


def step(f: BooleanNetwork, mu: PartitionedOrder, x: int,
         cap: int = DEFAULT_SUBSTEP_CAP) -> int:
    """Image of ``x`` after one full step: all substep block updates in order."""
    _require_compatible(f, mu)
    _check_config(x, f.n)
    length = _check_substeps(mu, cap)
    compiled = f.compiled()
    oblocks = mu.oblocks
    cur = x
    for t in range(length):
        nxt = cur
        for block in oblocks:
            i = block[t % len(block)]
            if compiled[i](cur):
                nxt |= 1 << i
            else:
                nxt &= ~(1 << i)
        cur = nxt
    return cur


def step_trace(f: BooleanNetwork, mu: PartitionedOrder, x: int,
               cap: int = DEFAULT_SUBSTEP_CAP) -> list[int]:
    """``x`` followed by the configuration after each substep (length lcm+1)."""
    _require_compatible(f, mu)
    _check_config(x, f.n)
    length = _check_substeps(mu, cap)
    compiled = f.compiled()
    oblocks = mu.oblocks
    trace = [x]
    cur = x
    for t in range(length):
        nxt = cur
        for block in oblocks:
            i = block[t % len(block)]
            if compiled[i](cur):
                nxt |= 1 << i
            else:
                nxt &= ~(1 << i)
        cur = nxt
        trace.append(cur)
    return trace


class DynamicsGraph:
    """Functional graph of one full step over all ``2**n`` configurations.

    ``cycles`` are the limit cycles (each rotated to start at its smallest
    member), ``basin[x]`` is the index of the cycle the orbit of ``x`` reaches,
    and ``limit_set`` collects every configuration lying on a cycle.
    """

    __slots__ = ("n", "successors", "cycles", "basin", "limit_set")

    def __init__(self, n: int, successors: list[int]):
        size = 1 << n
        if len(successors) != size:
            raise ValueError(f"expected {size} successors, got {len(successors)}")
        self.n = n
        self.successors = tuple(successors)
        # Iterative three-colour pointer chase: 0 unseen, 1 on current path, 2 resolved.
        state = bytearray(size)
        basin = [-1] * size
        cycles: list[tuple[int, ...]] = []
        for start in range(size):
            if state[start]:
                continue
            path: list[int] = []
            position: dict[int, int] = {}
            u = start
            while state[u] == 0:
                state[u] = 1
                position[u] = len(path)
                path.append(u)
                u = successors[u]
            if state[u] == 1:
                members = path[position[u]:]
                lowest = members.index(min(members))
                cycle_id = len(cycles)
                cycles.append(tuple(members[lowest:] + members[:lowest]))
            else:
                cycle_id = basin[u]
            for w in path:
                state[w] = 2
                basin[w] = cycle_id
        self.cycles = tuple(cycles)
        self.basin = tuple(basin)
        self.limit_set = frozenset(c for cycle in cycles for c in cycle)

    def successor(self, x: int) -> int:
        return self.successors[x]

    def cycle_lengths(self) -> tuple[int, ...]:
        """Multiset of limit-cycle lengths, as a sorted tuple."""
        return tuple(sorted(len(c) for c in self.cycles))


def _successor_chunk(task) -> list[int]:
    f, mu, lo, hi, cap = task
    return [step(f, mu, x, cap=cap) for x in range(lo, hi)]


def transition_graph(f: BooleanNetwork, mu: PartitionedOrder,
                     n_cap: int = DEFAULT_GRAPH_N_CAP,
                     cap: int = DEFAULT_SUBSTEP_CAP,
                     workers: int = 1) -> DynamicsGraph:
    """Successor of every configuration, with cycle decomposition.

    ``workers > 1`` splits the configuration space across processes; the
    result is identical to the sequential one.
    """
    _require_compatible(f, mu)
    if f.n > n_cap:
        raise ResourceCapError(
            f"transition graph over 2**{f.n} configurations exceeds n_cap={n_cap}"
        )
    _check_substeps(mu, cap)
    size = 1 << f.n
    if workers <= 1:
        successors = [step(f, mu, x, cap=cap) for x in range(size)]
    else:
        chunk = max(1, size // (4 * workers))
        bounds = list(range(0, size, chunk)) + [size]
        tasks = [(f, mu, lo, hi, cap) for lo, hi in zip(bounds, bounds[1:])]
        with multiprocessing.Pool(workers) as pool:
            successors = [x for chunk in pool.map(_successor_chunk, tasks) for x in chunk]
    return DynamicsGraph(f.n, successors)


# ---------------------------------------------------------------------------
# Deciders (exhaustive, desk scale)

def is_fixed_point(f: BooleanNetwork, mu: PartitionedOrder, x: int,
                   cap: int = DEFAULT_SUBSTEP_CAP) -> bool:
    """Single-configuration verification: does one step map ``x`` to itself?"""
    return step(f, mu, x, cap=cap) == x


def fixed_points(f: BooleanNetwork, mu: PartitionedOrder,
                 n_cap: int = DEFAULT_GRAPH_N_CAP,
                 cap: int = DEFAULT_SUBSTEP_CAP) -> frozenset[int]:
    """All configurations mapped to themselves."""
    graph = transition_graph(f, mu, n_cap=n_cap, cap=cap)
    return frozenset(c[0] for c in graph.cycles if len(c) == 1)


def limit_cycles(f: BooleanNetwork, mu: PartitionedOrder,
                 n_cap: int = DEFAULT_GRAPH_N_CAP,
                 cap: int = DEFAULT_SUBSTEP_CAP) -> tuple[tuple[int, ...], ...]:
    """All limit cycles with their member configurations."""
    return transition_graph(f, mu, n_cap=n_cap, cap=cap).cycles


def limit_cycle_exists(f: BooleanNetwork, mu: PartitionedOrder, k: int,
                       n_cap: int = DEFAULT_GRAPH_N_CAP,
                       cap: int = DEFAULT_SUBSTEP_CAP) -> bool:
    """Is there a configuration returning to itself after ``k`` steps?

    Equivalent to some limit-cycle length dividing ``k``.
    """
    if k < 1:
        raise ValueError(f"cycle exponent must be positive, got {k}")
    graph = transition_graph(f, mu, n_cap=n_cap, cap=cap)
    return any(k % len(c) == 0 for c in graph.cycles)


def limit_isomorphic(f: BooleanNetwork, mu: PartitionedOrder, mu2: PartitionedOrder,
                     n_cap: int = DEFAULT_GRAPH_N_CAP,
                     cap: int = DEFAULT_SUBSTEP_CAP) -> bool:
    """Do the two schedules give isomorphic dynamics on their limit sets?

    On a finite set the limit restriction is a permutation, so isomorphism
    reduces to equality of the cycle-length multisets.
    """
    lengths = transition_graph(f, mu, n_cap=n_cap, cap=cap).cycle_lengths()
    lengths2 = transition_graph(f, mu2, n_cap=n_cap, cap=cap).cycle_lengths()
    return lengths == lengths2


def reachable(f: BooleanNetwork, mu: PartitionedOrder, x: int, y: int,
              cap: int = DEFAULT_SUBSTEP_CAP) -> bool:
    """Does the orbit of ``x`` reach ``y``?  At most ``2**n`` steps."""
    _check_config(y, f.n)
    seen: set[int] = set()
    cur = x
    while True:
        if cur == y:
            return True
        if cur in seen:
            return False
        seen.add(cur)
        cur = step(f, mu, cur, cap=cap)


def has_preimage(f: BooleanNetwork, mu: PartitionedOrder, y: int,
                 n_cap: int = DEFAULT_GRAPH_N_CAP,
                 cap: int = DEFAULT_SUBSTEP_CAP) -> Optional[int]:
    """Some configuration mapping to ``y`` in one step, or None."""
    _require_compatible(f, mu)
    _check_config(y, f.n)
    if f.n > n_cap:
        raise ResourceCapError(f"preimage search over 2**{f.n} exceeds n_cap={n_cap}")
    for x in range(1 << f.n):
        if step(f, mu, x, cap=cap) == y:
            return x
    return None


def is_bijective(f: BooleanNetwork, mu: PartitionedOrder,
                 n_cap: int = DEFAULT_GRAPH_N_CAP,
                 cap: int = DEFAULT_SUBSTEP_CAP) -> bool:
    """Is one full step a bijection on configuration space?

    Decided twice: (a) the image of the step over all configurations has full
    cardinality; (b) every distinct substep block is itself a bijective
    update.  The two answers must agree; a composition of block updates is
    bijective exactly when every factor is.
    """
    _require_compatible(f, mu)
    if f.n > n_cap:
        raise ResourceCapError(f"bijectivity check over 2**{f.n} exceeds n_cap={n_cap}")
    size = 1 << f.n
    whole_step = len({step(f, mu, x, cap=cap) for x in range(size)}) == size
    distinct_blocks = set(phi(mu, cap=cap).blocks)
    per_block = all(
        len({update_block(f, block, x) for x in range(size)}) == size
        for block in distinct_blocks
    )
    if whole_step != per_block:
        raise CrossCheckError(
            f"bijectivity methods disagree: whole-step={whole_step},"
            f" per-block={per_block}"
        )
    return whole_step


def is_identity(f: BooleanNetwork, mu: PartitionedOrder,
                n_cap: int = DEFAULT_GRAPH_N_CAP,
                cap: int = DEFAULT_SUBSTEP_CAP) -> bool:
    """Is every configuration a fixed point?"""
    _require_compatible(f, mu)
    if f.n > n_cap:
        raise ResourceCapError(f"identity check over 2**{f.n} exceeds n_cap={n_cap}")
    return all(step(f, mu, x, cap=cap) == x for x in range(1 << f.n))


def is_constant(f: BooleanNetwork, mu: PartitionedOrder,
                n_cap: int = DEFAULT_GRAPH_N_CAP,
                cap: int = DEFAULT_SUBSTEP_CAP) -> Optional[int]:
    """The common image if one step is a constant map, else None."""
    _require_compatible(f, mu)
    if f.n > n_cap:
        raise ResourceCapError(f"constant check over 2**{f.n} exceeds n_cap={n_cap}")
    image = step(f, mu, 0, cap=cap)
    for x in range(1, 1 << f.n):
        if step(f, mu, x, cap=cap) != image:
            return None
    return image


# ---------------------------------------------------------------------------
# Subdynamics recognition

def _functional_components(graph: Mapping[object, object]):
    """Cycle + hanging-tree decomposition of a small functional graph."""
    for node, succ in graph.items():
        if succ not in graph:
            raise ValueError(f"successor {succ!r} of {node!r} is not a vertex")
    state: dict[object, int] = {}
    cycles: list[list[object]] = []
    on_cycle: set[object] = set()
    for start in graph:
        if state.get(start):
            continue
        path: list[object] = []
        position: dict[object, int] = {}
        u = start
        while state.get(u, 0) == 0:
            state[u] = 1
            position[u] = len(path)
            path.append(u)
            u = graph[u]
        if state[u] == 1:
            members = path[position[u]:]
            cycles.append(members)
            on_cycle.update(members)
        for w in path:
            state[w] = 2
    children: dict[object, list[object]] = {node: [] for node in graph}
    for node, succ in graph.items():
        if node not in on_cycle:
            children[succ].append(node)
    return cycles, children


def _kuhn_match(left: list, right: list, feasible) -> bool:
    """Can every left vertex be matched to a distinct feasible right vertex?"""
    match_of: dict = {}

    def assign(u, banned: set) -> bool:
        for v in right:
            if v in banned or not feasible(u, v):
                continue
            banned.add(v)
            if v not in match_of or assign(match_of[v], banned):
                match_of[v] = u
                return True
        return False

    return all(assign(u, set()) for u in left)


def subdynamics(f: BooleanNetwork, mu: PartitionedOrder,
                graph: Mapping[object, object],
                node_cap: int = 12,
                n_cap: int = DEFAULT_GRAPH_N_CAP,
                cap: int = DEFAULT_SUBSTEP_CAP) -> bool:
    """Does the functional graph ``graph`` embed into the step dynamics?

    ``graph`` maps each vertex to its unique successor.  Each of its
    components carries exactly one cycle; a component embeds by anchoring its
    cycle onto a dynamics cycle of the same length (trying every rotation) and
    then matching hanging trees injectively.
    """
    if not graph:
        raise ValueError("subdynamics graph must be non-empty")
    if len(graph) > node_cap:
        raise ResourceCapError(
            f"subdynamics graph has {len(graph)} vertices, above node_cap={node_cap}"
        )
    g_cycles, g_children = _functional_components(dict(graph))
    dyn = transition_graph(f, mu, n_cap=n_cap, cap=cap)
    dyn_children: dict[int, list[int]] = {}
    for x, s in enumerate(dyn.successors):
        if x not in dyn.limit_set:
            dyn_children.setdefault(s, []).append(x)

    tree_memo: dict[tuple[object, int], bool] = {}

    def tree_embeds(u, w: int) -> bool:
        key = (u, w)
        cached = tree_memo.get(key)
        if cached is not None:
            return cached
        gus = g_children[u]
        dws = dyn_children.get(w, ())
        result = len(gus) <= len(dws) and _kuhn_match(gus, list(dws), tree_embeds)
        tree_memo[key] = result
        return result

    def component_embeds(g_cycle: list, dyn_cycle: tuple[int, ...]) -> bool:
        length = len(g_cycle)
        if length != len(dyn_cycle):
            return False
        for rotation in range(length):
            if all(
                tree_embeds(g_cycle[idx], dyn_cycle[(idx + rotation) % length])
                for idx in range(length)
            ):
                return True
        return False

    return _kuhn_match(
        list(range(len(g_cycles))),
        list(range(len(dyn.cycles))),
        lambda gi, di: component_embeds(g_cycles[gi], dyn.cycles[di]),
    )


# ---------------------------------------------------------------------------
# Equivalence witnesses

def distinguishing_network(mu: PartitionedOrder, mu2: PartitionedOrder
                           ) -> Optional[tuple[BooleanNetwork, int, int]]:
    """A network and configuration on which two inequivalent schedules differ.

    Searches for automata ``(i, j)`` whose first updates are ordered one way
    under ``mu`` and the other way under ``mu2``.  If found, the network with
    ``f_i = x_i | x_j``, ``f_j = x_i`` and identities elsewhere, started from
    ``x_i = 0, x_j = 1`` and zeros elsewhere, yields step images differing at
    automaton ``i``; returns ``(network, witness, i)``.  Returns None when no
    such pair exists (first-update orders coincide even though the block
    sequences differ).
    """
    if mu.n != mu2.n:
        raise ValueError(f"schedules act on different sizes: {mu.n} vs {mu2.n}")
    if equiv0(mu, mu2):
        raise ValueError("schedules are dynamically equal; nothing distinguishes them")
    times = mu.first_update_times()
    times2 = mu2.first_update_times()
    n = mu.n
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if times[i] <= times[j] and times2[i] > times2[j]:
                locals_: list = [Var(k) for k in range(n)]
                locals_[i] = Or(Var(i), Var(j))
                locals_[j] = Var(i)
                witness = 1 << j
                return BooleanNetwork(locals_), witness, i
    return None


# ---------------------------------------------------------------------------
# Gadget builders

@dataclass(frozen=True)
class GadgetBundle:
    """A network/schedule pair with named automaton ranges.

    ``padding`` automata sit in o-blocks of prime lengths and force the
    substep count up to the product of those primes; ``counter`` automata sit
    in singleton o-blocks and are updated at every substep.
    """

    network: BooleanNetwork
    schedule: PartitionedOrder
    padding: range
    counter: range
    basis: PrimeGadgetBasis

    @property
    def n_automata(self) -> int:
        return self.network.n


def counter_gadget(n: int) -> GadgetBundle:
    """Saturating binary counter driven by prime-length padding o-blocks.

    The padding automata are constant 0; the last ``n`` automata increment a
    little-endian counter (automaton ``q`` holds the least significant bit)
    once per substep until it sticks at all-ones.  One full step has more than
    ``2**n`` substeps, so the whole dynamics is the constant map onto
    ``0^q 1^n``.
    """
    if n < 2:
        raise ValueError(f"counter gadget needs n >= 2, got {n}")
    basis = gadget_primes(n)
    q = basis.total
    counter_vars = [Var(q + i) for i in range(n)]
    all_ones = and_chain(counter_vars)
    locals_: list = [Const(0)] * q
    for i in range(n):
        carry = and_chain(counter_vars[:i])
        locals_.append(Or(all_ones, Xor(Var(q + i), carry)))
    oblocks = [
        tuple(range(basis.cumulative[i], basis.cumulative[i + 1]))
        for i in range(basis.k)
    ]
    oblocks.extend((q + i,) for i in range(n))
    return GadgetBundle(
        network=BooleanNetwork(locals_),
        schedule=PartitionedOrder(q + n, oblocks),
        padding=range(0, q),
        counter=range(q, q + n),
        basis=basis,
    )


def counter_value(bundle: GadgetBundle, x: int) -> int:
    """Read the counter embedded in a gadget configuration."""
    width = len(bundle.counter)
    return (x >> bundle.counter.start) & ((1 << width) - 1)


# ---------------------------------------------------------------------------
# Exports

def to_dot(graph: DynamicsGraph) -> str:
    """DOT digraph: one node per configuration bitstring, one arc per successor."""
    lines = ["digraph dynamics {"]
    for x, s in enumerate(graph.successors):
        lines.append(
            f'  "{format_config(x, graph.n)}" -> "{format_config(s, graph.n)}";'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_json(graph: DynamicsGraph) -> dict:
    """JSON-ready edge list with a cycles summary."""
    n = graph.n
    return {
        "n": n,
        "edges": [
            [format_config(x, n), format_config(s, n)]
            for x, s in enumerate(graph.successors)
        ],
        "cycles": {
            "lengths": [len(c) for c in sorted(graph.cycles, key=len)],
            "members": [
                [format_config(x, n) for x in cycle]
                for cycle in sorted(graph.cycles, key=len)
            ],
        },
    }
