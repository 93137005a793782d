"""Finite semigroupoids: typed arrows under an associative partial
composition, generated from typed generator graphs, with morphism,
quotient, isomorphism, and sublanguage-order machinery.

A composition table entry (x, y) must exist exactly when cod(x) equals
dom(y); ``validate`` checks that, the typing of composites, and full
associativity.  Everything here is immutable and pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    EmptyGenerators,
    IncompatiblePartition,
    InconsistentSemantics,
    LengthMismatch,
    NotAMorphism,
    NotComposable,
    TableIncomplete,
)
from .statespace import (
    PartialTransformation,
    StateSpace,
    TypedGeneratorGraph,
    compose_pt,
    enumerate_states,
    generator_graph,
    pt_closure,
    word_semantics,
)


@dataclass(frozen=True)
class Obj:
    id: int
    name: str


@dataclass(frozen=True)
class Arrow:
    id: int
    dom: int
    cod: int
    label: str


@dataclass(frozen=True)
class Semigroupoid:
    objects: tuple[Obj, ...]
    arrows: tuple[Arrow, ...]
    table: dict[tuple[int, int], int]

    def __post_init__(self):
        for i, o in enumerate(self.objects):
            if o.id != i:
                raise ValueError("object ids must be dense 0..n-1")
        n = len(self.objects)
        for i, a in enumerate(self.arrows):
            if a.id != i:
                raise ValueError("arrow ids must be dense 0..n-1")
            if not (0 <= a.dom < n and 0 <= a.cod < n):
                raise ValueError(f"arrow {a.id} has invalid endpoints")
        m = len(self.arrows)
        for (x, y), z in self.table.items():
            if not (0 <= x < m and 0 <= y < m and 0 <= z < m):
                raise ValueError(f"table entry ({x},{y})->{z} uses invalid arrow ids")

    def dom(self, arrow_id: int) -> int:
        return self.arrows[arrow_id].dom

    def cod(self, arrow_id: int) -> int:
        return self.arrows[arrow_id].cod

    def composable(self, x: int, y: int) -> bool:
        return self.arrows[x].cod == self.arrows[y].dom

    def hom(self, dom: int, cod: int) -> tuple[int, ...]:
        return tuple(a.id for a in self.arrows if a.dom == dom and a.cod == cod)

    def hom_sets(self) -> dict[tuple[int, int], tuple[int, ...]]:
        out: dict[tuple[int, int], list[int]] = {}
        for a in self.arrows:
            out.setdefault((a.dom, a.cod), []).append(a.id)
        return {k: tuple(v) for k, v in sorted(out.items())}


@dataclass(frozen=True)
class Morphism:
    """Structure-preserving map between semigroupoids; ``object_map`` and
    ``arrow_map`` are indexed by source ids."""

    source: Semigroupoid
    target: Semigroupoid
    object_map: tuple[int, ...]
    arrow_map: tuple[int, ...]


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, witness: tuple, message: str):
        self.violations.append(Violation(kind, witness, message))


def validate(s: Semigroupoid) -> ValidationReport:
    """Exhaustively check the three semigroupoid invariants: table defined
    exactly on composable pairs, typing of composites, associativity."""
    report = ValidationReport()
    n = len(s.arrows)
    for x in range(n):
        for y in range(n):
            defined = (x, y) in s.table
            if defined != s.composable(x, y):
                what = "defined but not composable" if defined else "composable but missing"
                report.add("composability", (x, y), f"pair ({x},{y}) {what}")
            if defined:
                z = s.table[(x, y)]
                if s.dom(z) != s.dom(x) or s.cod(z) != s.cod(y):
                    report.add("typing", (x, y, z),
                               f"composite {z} of ({x},{y}) is mistyped")
    for x in range(n):
        for y in range(n):
            if not s.composable(x, y):
                continue
            xy = s.table.get((x, y))
            for z in range(n):
                if not s.composable(y, z):
                    continue
                yz = s.table.get((y, z))
                if xy is None or yz is None:
                    continue
                left = s.table.get((xy, z))
                right = s.table.get((x, yz))
                if left != right or left is None:
                    report.add("associativity", (x, y, z),
                               f"({x}·{y})·{z} = {left} but {x}·({y}·{z}) = {right}")
    return report


def compose_arrows(s: Semigroupoid, x: int, y: int) -> int:
    """Table lookup with the composability guard."""
    if not (0 <= x < len(s.arrows) and 0 <= y < len(s.arrows)):
        raise ValueError("arrow id out of range")
    if not s.composable(x, y):
        raise NotComposable(
            f"cod({s.arrows[x].label}) != dom({s.arrows[y].label})")
    try:
        return s.table[(x, y)]
    except KeyError:
        raise TableIncomplete(f"composable pair ({x},{y}) missing from table") from None


def from_generators(graph: TypedGeneratorGraph,
                    semantics: Mapping[str, PartialTransformation]) -> Semigroupoid:
    """Semigroupoid generated by a typed generator graph.

    Arrows are the pairs (source state, closure element defined there);
    identity is extensional, so two generator paths from the same state
    that induce the same partial map are one arrow.  The composition
    table is induced by composing partial transformations.
    """
    n = len(graph.object_names)
    for label, pt in semantics.items():
        if len(pt.images) != n:
            raise LengthMismatch(f"semantics of {label!r} has wrong length")
    want = set(graph.edges)
    got = {(s, label, t)
           for label, pt in semantics.items()
           for s, t in enumerate(pt.images) if t is not None}
    if want != got:
        witness = sorted(want ^ got)[0]
        raise InconsistentSemantics(
            f"graph and semantics disagree on edge {witness}")

    closure = pt_closure(list(semantics.values()))
    arrows: list[Arrow] = []
    carriers: list[tuple[int, PartialTransformation]] = []
    index: dict[tuple[int, tuple], int] = {}
    for f in closure:
        for source in f.domain:
            aid = len(arrows)
            arrows.append(Arrow(id=aid, dom=source, cod=f.images[source], label=f.label))
            carriers.append((source, f))
            index[(source, f.images)] = aid
    table: dict[tuple[int, int], int] = {}
    for x, (s, f) in enumerate(carriers):
        target = f.images[s]
        for y, (t, g) in enumerate(carriers):
            if t != target:
                continue
            fg = compose_pt(f, g)
            table[(x, y)] = index[(s, fg.images)]
    objects = tuple(Obj(i, name) for i, name in enumerate(graph.object_names))
    return Semigroupoid(objects=objects, arrows=tuple(arrows), table=table)


def _hom_label(s: Semigroupoid, dom: int, cod: int) -> str:
    a, b = s.objects[dom].name, s.objects[cod].name
    if len(a) == 1 and len(b) == 1:
        return a + b
    return f"{a}→{b}"


def arrow_type(s: Semigroupoid) -> tuple[Semigroupoid, Morphism]:
    """Collapse every nonempty hom-set to a single arrow.

    Returns the image semigroupoid (same objects, hom-sets ordered by
    (dom, cod)) and the surjective morphism onto it.
    """
    homs = s.hom_sets()
    hom_ids = {key: i for i, key in enumerate(homs)}
    t_arrows = tuple(Arrow(id=i, dom=d, cod=c, label=_hom_label(s, d, c))
                     for i, (d, c) in enumerate(homs))
    t_table: dict[tuple[int, int], int] = {}
    for (d1, c1), i in hom_ids.items():
        for (d2, c2), j in hom_ids.items():
            if c1 != d2:
                continue
            x = homs[(d1, c1)][0]
            y = homs[(d2, c2)][0]
            z = compose_arrows(s, x, y)
            t_table[(i, j)] = hom_ids[(s.dom(z), s.cod(z))]
    target = Semigroupoid(objects=s.objects, arrows=t_arrows, table=t_table)
    arrow_map = tuple(hom_ids[(a.dom, a.cod)] for a in s.arrows)
    phi = Morphism(source=s, target=target,
                   object_map=tuple(range(len(s.objects))), arrow_map=arrow_map)
    check = check_morphism(phi)
    if not check.ok:
        # Unreachable for valid input; kept as a guard against bad tables.
        raise NotAMorphism(f"hom-set collapse is not a morphism: {check.violations[0].message}")
    return target, phi


@dataclass
class MorphismReport:
    violations: list[Violation] = field(default_factory=list)
    surjective_on_objects: bool = False
    surjective_on_arrows: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, witness: tuple, message: str):
        self.violations.append(Violation(kind, witness, message))


def check_morphism(phi: Morphism) -> MorphismReport:
    """Verify type compatibility and the homomorphism law on every
    composable pair; surjectivity is reported, not enforced."""
    report = MorphismReport()
    s, t = phi.source, phi.target
    if len(phi.object_map) != len(s.objects) or len(phi.arrow_map) != len(s.arrows):
        report.add("structure", (), "map lengths do not match the source")
        return report
    if any(not 0 <= o < len(t.objects) for o in phi.object_map) or \
       any(not 0 <= a < len(t.arrows) for a in phi.arrow_map):
        report.add("structure", (), "map hits ids outside the target")
        return report
    for a in s.arrows:
        image = t.arrows[phi.arrow_map[a.id]]
        if image.dom != phi.object_map[a.dom] or image.cod != phi.object_map[a.cod]:
            report.add("type", (a.id,),
                       f"arrow {a.label!r} maps to {image.label!r} with mismatched endpoints")
    for (x, y), z in s.table.items():
        fx, fy, fz = phi.arrow_map[x], phi.arrow_map[y], phi.arrow_map[z]
        if not t.composable(fx, fy):
            report.add("law", (x, y), f"images of ({x},{y}) are not composable")
            continue
        fxy = t.table.get((fx, fy))
        if fxy != fz:
            report.add("law", (x, y),
                       f"φ({x})·φ({y}) = {fxy} but φ({x}·{y}) = {fz}")
    report.surjective_on_objects = set(phi.object_map) == set(range(len(t.objects)))
    report.surjective_on_arrows = set(phi.arrow_map) == set(range(len(t.arrows)))
    return report


def _block_name(names: Sequence[str], block: Sequence[int]) -> str:
    if len(block) == 1:
        return names[block[0]]
    return "{" + ",".join(names[i] for i in block) + "}"


def quotient_objects(graph: TypedGeneratorGraph,
                     partition: Sequence[Iterable[int]]) -> TypedGeneratorGraph:
    """Merge graph objects along a partition.

    Compatibility requires uniform definedness: each label must be
    defined on all of a block or none of it.  Edges of the merged graph
    are the distinct (block, label, block) triples, so one label may
    lead from a block to several blocks.
    """
    blocks = [tuple(sorted(b)) for b in partition]
    flat = [i for b in blocks for i in b]
    if sorted(flat) != list(range(len(graph.object_names))) or len(set(flat)) != len(flat):
        raise ValueError("partition must cover every object exactly once")
    block_of = {i: k for k, b in enumerate(blocks) for i in b}
    defined_at: dict[str, set[int]] = {}
    for s, label, _ in graph.edges:
        defined_at.setdefault(label, set()).add(s)
    for label in graph.labels():
        sources = defined_at.get(label, set())
        for block in blocks:
            hit = [i for i in block if i in sources]
            if hit and len(hit) != len(block):
                miss = next(i for i in block if i not in sources)
                raise IncompatiblePartition(
                    f"label {label!r} defined at {graph.object_names[hit[0]]} "
                    f"but undefined at {graph.object_names[miss]}",
                    label=label, block=block)
    merged: list[tuple[int, str, int]] = []
    seen = set()
    for s, label, t in graph.edges:
        edge = (block_of[s], label, block_of[t])
        if edge not in seen:
            seen.add(edge)
            merged.append(edge)
    names = tuple(_block_name(graph.object_names, b) for b in blocks)
    return TypedGeneratorGraph(object_names=names, edges=tuple(merged))


# --- isomorphism search -----------------------------------------------------

def _structure_iso(objs_a: Sequence[int], arrows_a: Sequence[tuple[int, int]],
                   table_a: Mapping[tuple[int, int], int],
                   objs_b: Sequence[int], arrows_b: Sequence[tuple[int, int]],
                   table_b: Mapping[tuple[int, int], int]):
    """Backtracking isomorphism search over partial composition structures.

    Arrows are (dom, cod) pairs over the given object lists; the tables
    may be partial in any way.  Returns (object map, arrow map) as dicts
    keyed by the A-side entries, or None.  Intended for desk-scale sizes.
    """
    if len(objs_a) != len(objs_b) or len(arrows_a) != len(arrows_b):
        return None
    if len(table_a) != len(table_b):
        return None
    na = len(arrows_a)

    def profiles(arrows, table):
        rows = [0] * len(arrows)
        cols = [0] * len(arrows)
        for (x, y) in table:
            rows[x] += 1
            cols[y] += 1
        sigs = []
        for i, (d, c) in enumerate(arrows):
            sigs.append((d == c, rows[i], cols[i],
                         (i, i) in table, table.get((i, i)) == i))
        return sigs

    def obj_degrees(objs, arrows):
        deg = {o: [0, 0, 0] for o in objs}
        for (d, c) in arrows:
            deg[d][0] += 1
            deg[c][1] += 1
            if d == c:
                deg[d][2] += 1
        return {o: tuple(v) for o, v in deg.items()}

    sig_a, sig_b = profiles(arrows_a, table_a), profiles(arrows_b, table_b)
    if sorted(sig_a) != sorted(sig_b):
        return None
    deg_a, deg_b = obj_degrees(objs_a, arrows_a), obj_degrees(objs_b, arrows_b)
    if sorted(deg_a.values()) != sorted(deg_b.values()):
        return None

    candidates = [[j for j in range(na) if sig_b[j] == sig_a[i]] for i in range(na)]
    order = sorted(range(na), key=lambda i: len(candidates[i]))
    arrow_map: dict[int, int] = {}
    used_arrows: set[int] = set()
    object_map: dict[int, int] = {}
    used_objects: set[int] = set()

    def bind_object(oa, ob):
        if oa in object_map:
            return object_map[oa] == ob, False
        if ob in used_objects or deg_a[oa] != deg_b[ob]:
            return False, False
        object_map[oa] = ob
        used_objects.add(ob)
        return True, True

    def release(bound):
        for oa in bound:
            used_objects.discard(object_map.pop(oa))

    def consistent(i, j):
        # Definedness must correspond on every pair among assigned arrows.
        for x, mx in arrow_map.items():
            for (p, q, mp, mq) in ((x, i, mx, j), (i, x, j, mx)):
                if ((p, q) in table_a) != ((mp, mq) in table_b):
                    return False
        if ((i, i) in table_a) != ((j, j) in table_b):
            return False
        return True

    def extend(k):
        if k == na:
            for (x, y), z in table_a.items():
                if table_b.get((arrow_map[x], arrow_map[y])) != arrow_map[z]:
                    return None
            # Any leftover isolated objects match in degree; pair them up.
            rest_a = [o for o in objs_a if o not in object_map]
            rest_b = [o for o in objs_b if o not in used_objects]
            by_deg: dict[tuple, list[int]] = {}
            for o in rest_b:
                by_deg.setdefault(deg_b[o], []).append(o)
            final = dict(object_map)
            for o in rest_a:
                pool = by_deg.get(deg_a[o])
                if not pool:
                    return None
                final[o] = pool.pop(0)
            return final, dict(arrow_map)
        i = order[k]
        (da, ca) = arrows_a[i]
        for j in candidates[i]:
            if j in used_arrows:
                continue
            (db, cb) = arrows_b[j]
            ok_d, new_d = bind_object(da, db)
            if not ok_d:
                continue
            ok_c, new_c = bind_object(ca, cb)
            if not ok_c:
                release([da] if new_d else [])
                continue
            bound = ([da] if new_d else []) + ([ca] if new_c else [])
            if consistent(i, j):
                arrow_map[i] = j
                used_arrows.add(j)
                found = extend(k + 1)
                if found is not None:
                    return found
                used_arrows.discard(arrow_map.pop(i))
            release(bound)
        return None

    return extend(0)


def find_isomorphism(s: Semigroupoid, t: Semigroupoid):
    """Exhaustive (pruned) isomorphism search between two semigroupoids.

    Returns (object bijection, arrow bijection) as tuples indexed by the
    ids of ``s``, or None when no isomorphism exists.
    """
    found = _structure_iso(
        list(range(len(s.objects))), [(a.dom, a.cod) for a in s.arrows], s.table,
        list(range(len(t.objects))), [(a.dom, a.cod) for a in t.arrows], t.table)
    if found is None:
        return None
    object_map, arrow_map = found
    return (tuple(object_map[i] for i in range(len(s.objects))),
            tuple(arrow_map[i] for i in range(len(s.arrows))))


def closure_semigroupoid(elements: Sequence[PartialTransformation],
                         object_name: str = "•") -> Semigroupoid:
    """One-object semigroupoid whose arrows are closure elements and whose
    (total) table is their composition; handy for comparing closure
    structure against abstract tables."""
    elems = list(elements)
    index = {f.images: i for i, f in enumerate(elems)}
    arrows = tuple(Arrow(id=i, dom=0, cod=0, label=f.label or f"t{i}")
                   for i, f in enumerate(elems))
    table: dict[tuple[int, int], int] = {}
    for i, f in enumerate(elems):
        for j, g in enumerate(elems):
            fg = compose_pt(f, g)
            if fg.images not in index:
                raise ValueError("element set is not composition-closed")
            table[(i, j)] = index[fg.images]
    return Semigroupoid(objects=(Obj(0, object_name),), arrows=arrows, table=table)


def sublanguage_leq(gens_a: Sequence[str], gens_b: Sequence[str],
                    cap: int, modulus: int) -> bool:
    """True when everything the first generator set can express is already
    expressible by the second, over their joint state space."""
    joint = list(dict.fromkeys([*gens_a, *gens_b]))
    space = enumerate_states(joint, cap, modulus)
    closure_a = pt_closure([word_semantics(space, g) for g in gens_a])
    closure_b = pt_closure([word_semantics(space, g) for g in gens_b])
    have = {f.images for f in closure_b}
    return all(f.images in have for f in closure_a)


@dataclass(frozen=True)
class LanguageExtraction:
    """Bundle produced by running the whole extraction pipeline once."""

    space: StateSpace
    transformations: tuple[PartialTransformation, ...]
    graph: TypedGeneratorGraph
    closure: tuple[PartialTransformation, ...]
    semigroupoid: Semigroupoid


def extract_language(generators: Sequence[str], cap: int, modulus: int) -> LanguageExtraction:
    """Enumerate states, compute generator semantics and their closure,
    and generate the semigroupoid, in one pass."""
    space = enumerate_states(generators, cap, modulus)
    transformations = tuple(word_semantics(space, g) for g in space.generators)
    graph = generator_graph(space, transformations)
    closure = tuple(pt_closure(list(transformations)))
    semantics = {pt.label: pt for pt in transformations}
    sgp = from_generators(graph, semantics)
    return LanguageExtraction(space=space, transformations=transformations,
                              graph=graph, closure=closure, semigroupoid=sgp)
