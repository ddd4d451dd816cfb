"""Generic virtual-endomorphism-to-tree-action machinery.

An *instance* packages a group G, a finite-index subgroup H with a right
transversal t_0, ..., t_{m-1} (t_0 in H), and a homomorphism f defined on
H.  Every group element then acts on the rooted m-ary tree through its
wreath decomposition

    g = (g_0, ..., g_{m-1}) sigma,

where sigma sends i to the index of the coset containing t_i * g and
g_i = f(t_i * g * t_{sigma(i)}^{-1}).  The decomposition of a product
satisfies

    (g h)_i = g_i * h_{sigma_g(i)},   sigma_{gh} = sigma_g then sigma_h,

which `product_rule_check` verifies recursively.  Iterating the
decomposition yields the state set of an element; when the breadth-first
search over canonical elements closes within a cap the result is a Mealy
automaton (transition delta(q, i) = q_i, output lambda(q, i) = sigma_q(i)).
`CapExceeded` is an ordinary result, not an error: some families are not
finite-state and the search must never loop unboundedly.

Word convention: the level-1 letter is the leftmost letter of a word;
sigma acts on it and the state at that letter acts on the suffix.
Decompositions are pure and memoized per instance; breadth-first searches
visit canonical elements in discovery order, so all outputs are
deterministic.
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property


class ContractViolation(RuntimeError):
    """An instance broke the transversal/membership/endomorphism contract."""


class Perm:
    """A permutation of {0, ..., m-1} stored as its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images):
        self.images = tuple(images)
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a bijection: {self.images}")

    def __call__(self, i: int) -> int:
        return self.images[i]

    def then(self, other: "Perm") -> "Perm":
        """The composite acting as self first, then other."""
        return Perm(tuple(other.images[i] for i in self.images))

    def inverse(self) -> "Perm":
        out = [0] * len(self.images)
        for i, j in enumerate(self.images):
            out[j] = i
        return Perm(out)

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    @staticmethod
    def identity(m: int) -> "Perm":
        return Perm(range(m))

    def cycles(self) -> str:
        seen = [False] * len(self.images)
        parts = []
        for i in range(len(self.images)):
            if seen[i]:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if len(cyc) > 1:
                parts.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(parts) if parts else "()"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Perm{self.images}"


@dataclass(frozen=True)
class WreathDecomp:
    """A level permutation together with the m subtree states."""

    perm: Perm
    states: tuple


class Instance(ABC):
    """Capability set every concrete family provides to the engine.

    Elements must be immutable, hashable, and equal exactly when they are
    equal in the group (canonical forms).  The transversal is ordered with
    t_0 in H (all families use t_0 = identity).
    """

    family: str = "abstract"

    @property
    @abstractmethod
    def degree(self) -> int:
        """The tree degree m = [G : H]."""

    @abstractmethod
    def _build_transversal(self):
        """The ordered right transversal t_0, ..., t_{m-1}."""

    @cached_property
    def transversal(self) -> tuple:
        ts = tuple(self._build_transversal())
        if len(ts) != self.degree:
            raise ContractViolation("transversal size disagrees with the degree")
        return ts

    @abstractmethod
    def identity(self):
        ...

    @abstractmethod
    def multiply(self, a, b):
        ...

    @abstractmethod
    def invert(self, a):
        ...

    @abstractmethod
    def h_member(self, g) -> bool:
        ...

    @abstractmethod
    def endo_f(self, g):
        """The virtual endomorphism; defined when h_member(g) holds."""

    @abstractmethod
    def generators(self) -> dict:
        """Named generators (always including "e" for the identity)."""

    @abstractmethod
    def render(self, g) -> str:
        """Deterministic canonical rendering of an element."""

    def describe(self) -> dict:
        """Summary metadata used by the CLI."""
        return {"family": self.family, "degree": self.degree}

    @cached_property
    def transversal_inverses(self) -> tuple:
        return tuple(self.invert(t) for t in self.transversal)

    def coset_index_exhaustive(self, g) -> int:
        """Index j with g in H t_j, by searching the whole transversal.

        This is the reference implementation; families may override
        `coset_index` with a closed form, and this remains the oracle.
        """
        for j, tinv in enumerate(self.transversal_inverses):
            if self.h_member(self.multiply(g, tinv)):
                return j
        raise ContractViolation("element lies in no transversal coset")

    def coset_index(self, g) -> int:
        return self.coset_index_exhaustive(g)

    def elem_pow(self, g, k: int):
        if k < 0:
            g = self.invert(g)
            k = -k
        out = self.identity()
        while k:
            if k & 1:
                out = self.multiply(out, g)
            g = self.multiply(g, g)
            k >>= 1
        return out

    @cached_property
    def _decomp_cache(self) -> dict:
        return {}

    @cached_property
    def _prule_cache(self) -> dict:
        return {}


def decompose(inst: Instance, g) -> WreathDecomp:
    """Compute (and memoize) the wreath decomposition of g."""
    cache = inst._decomp_cache
    hit = cache.get(g)
    if hit is not None:
        return hit
    images = []
    states = []
    for t in inst.transversal:
        c = inst.multiply(t, g)
        j = inst.coset_index(c)
        cof = inst.multiply(c, inst.transversal_inverses[j])
        if not inst.h_member(cof):
            raise ContractViolation(
                f"cofactor at letter {len(images)} fails subgroup membership"
            )
        images.append(j)
        states.append(inst.endo_f(cof))
    try:
        perm = Perm(images)
    except ValueError as exc:
        raise ContractViolation(str(exc)) from exc
    dec = WreathDecomp(perm, tuple(states))
    cache[g] = dec
    return dec


def act_on_word(inst: Instance, g, word) -> tuple:
    """Apply the tree action of g to a word over {0, ..., m-1}."""
    out = []
    cur = g
    for letter in word:
        dec = decompose(inst, cur)
        out.append(dec.perm(letter))
        cur = dec.states[letter]
    return tuple(out)


def portrait(inst: Instance, g, depth: int):
    """Nested-array portrait: [images] at the cut depth, else
    [images, [children...]]."""
    if depth < 1:
        raise ValueError("portrait depth must be >= 1")
    dec = decompose(inst, g)
    node = [list(dec.perm.images)]
    if depth > 1:
        node.append([portrait(inst, s, depth - 1) for s in dec.states])
    return node


def product_rule_check(inst: Instance, g, h, depth: int) -> bool:
    """Verify that decompositions multiply coordinatewise, recursively.

    Verified pairs are remembered on the instance (successes only), so
    repeated subpairs across many random checks are not re-verified.
    """
    m = inst.degree
    memo: dict = inst._prule_cache

    def rec(a, b, ab, d) -> bool:
        # ab is the already-computed product a*b
        if memo.get((a, b), 0) >= d:
            return True
        da = decompose(inst, a)
        db = decompose(inst, b)
        dab = decompose(inst, ab)
        if dab.perm != da.perm.then(db.perm):
            return False
        triples = []
        for i in range(m):
            bi = db.states[da.perm(i)]
            expected = inst.multiply(da.states[i], bi)
            if dab.states[i] != expected:
                return False
            triples.append((da.states[i], bi, expected))
        memo[(a, b)] = d
        if d > 1:
            for a2, b2, ab2 in triples:
                if not rec(a2, b2, ab2, d - 1):
                    return False
        return True

    return rec(g, h, inst.multiply(g, h), depth)


@dataclass(frozen=True)
class CapExceeded:
    """State search left the cap before closing; a value, not a failure."""

    visited: int
    frontier: int


class MealyAutomaton:
    """A complete deterministic transducer over the alphabet {0, ..., m-1}
    whose per-state output maps are permutations."""

    __slots__ = ("degree", "initial", "state_labels", "transitions", "outputs", "elements")

    def __init__(self, degree, initial, state_labels, transitions, outputs, elements=None):
        self.degree = degree
        self.initial = initial
        self.state_labels = tuple(state_labels)
        self.transitions = tuple(tuple(row) for row in transitions)
        self.outputs = tuple(tuple(row) for row in outputs)
        self.elements = elements
        n = len(self.state_labels)
        if not (len(self.transitions) == len(self.outputs) == n):
            raise ValueError("ragged automaton tables")
        for row_t, row_o in zip(self.transitions, self.outputs):
            if len(row_t) != degree or len(row_o) != degree:
                raise ValueError("alphabet size mismatch")
            if any(not 0 <= t < n for t in row_t):
                raise ValueError("transition target out of range")
            if sorted(row_o) != list(range(degree)):
                raise ValueError("state output map is not a permutation")

    def __len__(self) -> int:
        return len(self.state_labels)

    def simulate(self, word) -> tuple:
        state = self.initial
        out = []
        for letter in word:
            out.append(self.outputs[state][letter])
            state = self.transitions[state][letter]
        return tuple(out)

    def to_json_bytes(self) -> bytes:
        obj = {
            "degree": self.degree,
            "initial": self.initial,
            "states": list(self.state_labels),
            "transitions": [list(r) for r in self.transitions],
            "outputs": [list(r) for r in self.outputs],
        }
        return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode()

    @staticmethod
    def from_json_bytes(data: bytes) -> "MealyAutomaton":
        obj = json.loads(data.decode())
        return MealyAutomaton(
            obj["degree"],
            obj["initial"],
            obj["states"],
            obj["transitions"],
            obj["outputs"],
        )

    def to_dot_bytes(self) -> bytes:
        def quote(s: str) -> str:
            return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

        lines = ["digraph mealy {", "  rankdir=LR;", "  node [shape=circle];"]
        for i, label in enumerate(self.state_labels):
            shape = ' shape=doublecircle' if i == self.initial else ""
            lines.append(f"  q{i} [label={quote(label)}{shape}];")
        for i in range(len(self.state_labels)):
            for a in range(self.degree):
                lines.append(
                    f"  q{i} -> q{self.transitions[i][a]} "
                    f'[label="{a}|{self.outputs[i][a]}"];'
                )
        lines.append("}")
        return ("\n".join(lines) + "\n").encode()


def states_bfs(inst: Instance, g, cap: int):
    """Breadth-first closure of the state set of g.

    Returns the Mealy automaton whose states are exactly the iterated
    states of g (in discovery order, g first) when at most `cap` states
    are needed, else CapExceeded.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    index = {g: 0}
    order = [g]
    transitions = []
    outputs = []
    qi = 0
    while qi < len(order):
        dec = decompose(inst, order[qi])
        row_t = []
        for i, s in enumerate(dec.states):
            j = index.get(s)
            if j is None:
                if len(order) >= cap:
                    return CapExceeded(visited=len(order), frontier=len(order) - qi)
                j = len(order)
                index[s] = j
                order.append(s)
            row_t.append(j)
        transitions.append(row_t)
        outputs.append(dec.perm.images)
        qi += 1
    return MealyAutomaton(
        inst.degree,
        0,
        tuple(inst.render(e) for e in order),
        transitions,
        outputs,
        elements=tuple(order),
    )


def export_automaton(a: MealyAutomaton, fmt: str) -> bytes:
    if fmt == "dot":
        return a.to_dot_bytes()
    if fmt == "json":
        return a.to_json_bytes()
    raise ValueError(f"unsupported automaton format: {fmt}")


def automaton_from_json(data: bytes) -> MealyAutomaton:
    return MealyAutomaton.from_json_bytes(data)


def transversal_validate(inst: Instance, sample=()) -> bool:
    """Check that the transversal represents pairwise distinct cosets,
    that t_0 lies in the subgroup, and that coset_index is consistent
    with membership on the transversal and on the given sample."""
    ts = inst.transversal
    if len(ts) != inst.degree:
        return False
    if not inst.h_member(ts[0]):
        return False
    for i, t in enumerate(ts):
        if inst.coset_index(t) != i:
            return False
    for i in range(len(ts)):
        for j in range(len(ts)):
            if i != j and inst.h_member(inst.multiply(ts[i], inst.transversal_inverses[j])):
                return False
    for g in sample:
        j = inst.coset_index(g)
        hits = [
            k
            for k in range(len(ts))
            if inst.h_member(inst.multiply(g, inst.transversal_inverses[k]))
        ]
        if hits != [j]:
            return False
    return True


def transitivity_check(inst: Instance, gens) -> bool:
    """Whether the level permutations of the generators act transitively."""
    perms = [decompose(inst, g).perm for g in gens]
    m = inst.degree
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for perm in perms:
            for j in (perm(i), perm.inverse()(i)):
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
    return len(seen) == m


def faithfulness_probe(inst: Instance, g, max_depth: int):
    """Least depth <= max_depth at which g moves some word, else None.

    None is inconclusive: the probe never claims the action is
    unfaithful.  Raises ValueError on the identity element.
    """
    if g == inst.identity():
        raise ValueError("faithfulness probe requires a nontrivial element")
    seen = {g}
    level = [g]
    for depth in range(1, max_depth + 1):
        nxt = []
        for h in level:
            dec = decompose(inst, h)
            if not dec.perm.is_identity:
                return depth
            for s in dec.states:
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        if not nxt:
            return None
        level = nxt
    return None
