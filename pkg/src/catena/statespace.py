"""Finite state spaces of the bounded modular stack machine.

A state is a stack of residues (bottom-first tuple).  The space of a
language instance is *every* stack of depth at most ``cap`` over Z_m:
integer literals are always part of the vocabulary, so every such stack
is reachable from the empty stack regardless of which words were chosen
as generators.  States are enumerated shallowest level first; inside a
level they follow the m-ary reflected (Gray) order, which fixes the
canonical indexing every image vector in this package refers to.

Words act on states as partial transformations: an entry is undefined
whenever evaluation fails (underflow, overflow past the cap, or a type
mismatch are all conflated into plain undefinedness).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import lang
from .errors import (
    CombinatorExcluded,
    EmptyGenerators,
    LangError,
    LengthMismatch,
    UnknownWord,
)

State = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class PartialTransformation:
    """Partial map on state indices; None marks undefined entries.

    Identity is extensional: equality and hashing use the image vector
    only, while ``label`` keeps one witness word for display.
    """

    images: tuple[int | None, ...]
    label: str = ""

    def __eq__(self, other):
        if not isinstance(other, PartialTransformation):
            return NotImplemented
        return self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __call__(self, index: int) -> int | None:
        return self.images[index]

    def __len__(self):
        return len(self.images)

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.images) if v is not None)

    def is_defined(self, index: int) -> bool:
        return self.images[index] is not None

    def __repr__(self):
        body = ",".join("_" if v is None else str(v) for v in self.images)
        return f"{self.label or '?'}[{body}]"


def render_state(state: State) -> str:
    """Bottom-first digit string; the empty stack renders as ε."""
    if not state:
        return "ε"
    if all(v < 10 for v in state):
        return "".join(str(v) for v in state)
    return ".".join(str(v) for v in state)


@dataclass(frozen=True)
class StateSpace:
    """Ordered state set of one language instance (state 0 is ε)."""

    states: tuple[State, ...]
    cap: int
    modulus: int
    generators: tuple[str, ...]

    @cached_property
    def index(self) -> dict[State, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(render_state(s) for s in self.states)

    def __len__(self):
        return len(self.states)


@dataclass(frozen=True)
class TypedGeneratorGraph:
    """Edges (source state, word label, target state), one per defined
    entry of each generator's partial transformation."""

    object_names: tuple[str, ...]
    edges: tuple[tuple[int, str, int], ...]

    @property
    def objects(self) -> range:
        return range(len(self.object_names))

    def labels(self) -> tuple[str, ...]:
        seen = dict.fromkeys(label for _, label, _ in self.edges)
        return tuple(seen)


def _first_order_tokens(word, words: Mapping[str, lang.WordDef]) -> list[str]:
    """Tokenize a word/phrase and reject anything touching quotations."""
    tokens = lang.tokenize(word) if isinstance(word, str) else list(word)
    _require_first_order(tokens, words)
    return tokens


def _require_first_order(tokens: Sequence[str], words: Mapping[str, lang.WordDef]):
    for tok in tokens:
        if tok in (lang.OPEN, lang.CLOSE):
            raise CombinatorExcluded(f"{tok!r} builds a quotation")
        if lang.is_literal(tok):
            continue
        word = words.get(tok)
        if word is None:
            raise UnknownWord(f"undefined word {tok!r}")
        if word.combinator:
            raise CombinatorExcluded(f"{tok!r} consumes quotations")
        if word.body is not None:
            _require_first_order(word.body, words)


def _reflected_levels(cap: int, modulus: int) -> list[State]:
    levels: list[list[State]] = [[()]]
    for _ in range(cap):
        prev = levels[-1]
        nxt: list[State] = []
        for i, state in enumerate(prev):
            digits = range(modulus) if i % 2 == 0 else range(modulus - 1, -1, -1)
            nxt.extend(state + (d,) for d in digits)
        levels.append(nxt)
    return [s for level in levels for s in level]


def enumerate_states(generators: Iterable[str], cap: int, modulus: int,
                     words: Mapping[str, lang.WordDef] | None = None) -> StateSpace:
    """State space for the given generator words under (cap, modulus).

    Generators must be first-order (no quotations/combinators) and are
    recorded on the space; the state set itself is the full literal
    closure: all stacks of depth <= cap over Z_modulus.
    """
    gens = tuple(generators)
    if not gens:
        raise EmptyGenerators("at least one generator word is required")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    vocabulary = dict(lang.BUILTINS) if words is None else words
    for g in gens:
        _first_order_tokens(g, vocabulary)
    states = tuple(_reflected_levels(cap, modulus))
    return StateSpace(states=states, cap=cap, modulus=modulus, generators=gens)


def word_semantics(space: StateSpace, word,
                   words: Mapping[str, lang.WordDef] | None = None) -> PartialTransformation:
    """Action of a word (name or token sequence) on the state space.

    Entries where evaluation fails are undefined.
    """
    vocabulary = dict(lang.BUILTINS) if words is None else words
    tokens = _first_order_tokens(word, vocabulary)
    images: list[int | None] = []
    for state in space.states:
        machine = lang.Machine(stack=state, words=vocabulary,
                               modulus=space.modulus, cap=space.cap)
        try:
            result = lang.run(tokens, machine)
        except LangError:
            images.append(None)
            continue
        images.append(space.index[result.stack])
    return PartialTransformation(images=tuple(images), label=" ".join(tokens))


def compose_pt(f: PartialTransformation, g: PartialTransformation) -> PartialTransformation:
    """(f·g)(x) = g(f(x)): f acts first, as in automata."""
    if len(f.images) != len(g.images):
        raise LengthMismatch(f"{len(f.images)} versus {len(g.images)} states")
    images = tuple(g.images[v] if v is not None else None for v in f.images)
    label = f"{f.label} {g.label}".strip()
    return PartialTransformation(images=images, label=label)


def totalize(f: PartialTransformation) -> PartialTransformation:
    """Total transformation on one extra point: undefined entries and the
    new point itself map to the sink (the last index)."""
    sink = len(f.images)
    images = tuple(v if v is not None else sink for v in f.images) + (sink,)
    return PartialTransformation(images=images, label=f.label)


def pt_closure(generators: Sequence[PartialTransformation]) -> list[PartialTransformation]:
    """Smallest composition-closed set containing the generators.

    Breadth-first by word length with ties in generator order, so each
    element keeps the shortest (then lexicographically first) witness
    label.  Termination is guaranteed by the finite state set.
    """
    gens = list(generators)
    if not gens:
        raise EmptyGenerators("closure of an empty generator set")
    size = len(gens[0].images)
    for g in gens:
        if len(g.images) != size:
            raise LengthMismatch("generators act on different state sets")
    elements: dict[tuple, PartialTransformation] = {}
    order: list[PartialTransformation] = []
    frontier: list[PartialTransformation] = []
    for g in gens:
        if g.images not in elements:
            elements[g.images] = g
            order.append(g)
            frontier.append(g)
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                h = compose_pt(f, g)
                if h.images not in elements:
                    elements[h.images] = h
                    order.append(h)
                    nxt.append(h)
        frontier = nxt
    return order


def generator_graph(space: StateSpace,
                    transformations: Sequence[PartialTransformation]) -> TypedGeneratorGraph:
    """Typed generator graph: one edge per defined entry, generators in
    the given order, states ascending."""
    edges = []
    for pt in transformations:
        if len(pt.images) != len(space.states):
            raise LengthMismatch(f"{pt.label!r} does not act on this space")
        for s, t in enumerate(pt.images):
            if t is not None:
                edges.append((s, pt.label, t))
    return TypedGeneratorGraph(object_names=space.names, edges=tuple(edges))
