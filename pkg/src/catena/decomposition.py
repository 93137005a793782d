"""Two-level hierarchical decomposition of a semigroupoid.

Given a surjective morphism φ: S → T, the construction has three steps:
collapse (T is the approximate top level), copy (one bottom component
per T-arrow, holding its full preimage), and compress (components that
are isomorphic share a stored representative plus explicit bijections).

A component's structure is its member set with the composition
inherited from S restricted to member pairs whose composite is again a
member, together with the dom/cod pattern of the members; isomorphism
of components means a structure-preserving member bijection over some
object bijection.  The bottom-level coordinate of an arrow is the arrow
itself (expressed in representative coordinates), so the emulation
check below is an exhaustive encode/decode verification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import NotAMorphism, NotSurjective
from .semigroupoid import (
    Morphism,
    Semigroupoid,
    Violation,
    _structure_iso,
    check_morphism,
)


@dataclass(frozen=True)
class Component:
    """Preimage of one top-level arrow; ``fingerprint`` is a cheap
    invariant used to pre-bucket the isomorphism search."""

    top_arrow: int
    members: tuple[int, ...]
    fingerprint: tuple


@dataclass(frozen=True)
class ClassMember:
    """One component of an isomorphism class with the recorded bijections
    from the class representative to it (keys are representative ids)."""

    component: int
    object_map: dict[int, int]
    arrow_map: dict[int, int]


@dataclass(frozen=True)
class ComponentClass:
    representative: int
    members: tuple[ClassMember, ...]


@dataclass(frozen=True)
class Decomposition:
    top: Semigroupoid
    morphism: Morphism
    components: tuple[Component, ...]
    classes: tuple[ComponentClass, ...]


def _component_view(s: Semigroupoid, members: Sequence[int]):
    """(objects, arrows, table) view of a component for the iso engine,
    with the original object/arrow ids kept for translating back."""
    member_list = list(members)
    position = {m: i for i, m in enumerate(member_list)}
    objects = []
    for m in member_list:
        for o in (s.dom(m), s.cod(m)):
            if o not in objects:
                objects.append(o)
    arrows = [(s.dom(m), s.cod(m)) for m in member_list]
    table = {}
    for x in member_list:
        for y in member_list:
            z = s.table.get((x, y))
            if z is not None and z in position:
                table[(position[x], position[y])] = position[z]
    return objects, arrows, table, member_list


def _fingerprint(s: Semigroupoid, members: Sequence[int]) -> tuple:
    objects, arrows, table, _ = _component_view(s, members)
    relabel = {o: i for i, o in enumerate(objects)}
    pattern = tuple(sorted((relabel[d], relabel[c]) for d, c in arrows))
    rows = [0] * len(arrows)
    cols = [0] * len(arrows)
    for (x, y) in table:
        rows[x] += 1
        cols[y] += 1
    profile = tuple(sorted(zip(rows, cols)))
    return (len(members), len(objects), pattern, len(table), profile)


def compress_components(s: Semigroupoid,
                        components: Sequence[Component]) -> tuple[ComponentClass, ...]:
    """Group components by isomorphism of their induced structures.

    Each class stores its representative (lowest component index) and,
    for every member, the bijections from the representative.
    """
    classes: list[dict] = []
    for idx, comp in enumerate(components):
        placed = False
        for cls in classes:
            rep = components[cls["representative"]]
            if rep.fingerprint != comp.fingerprint:
                continue
            found = _structure_iso(*cls["view"][:3], *_component_view(s, comp.members)[:3])
            if found is None:
                continue
            object_map, arrow_map = found
            rep_members = cls["view"][3]
            comp_members = list(comp.members)
            cls["members"].append(ClassMember(
                component=idx,
                object_map={o: object_map[o] for o in object_map},
                arrow_map={rep_members[i]: comp_members[arrow_map[i]]
                           for i in range(len(rep_members))}))
            placed = True
            break
        if not placed:
            view = _component_view(s, comp.members)
            classes.append({
                "representative": idx,
                "view": view,
                "members": [ClassMember(
                    component=idx,
                    object_map={o: o for o in view[0]},
                    arrow_map={m: m for m in comp.members})],
            })
    return tuple(ComponentClass(representative=c["representative"],
                                members=tuple(c["members"]))
                 for c in classes)


def covering_decompose(s: Semigroupoid, phi: Morphism) -> Decomposition:
    """Collapse along φ, copy each preimage into a component, and
    compress isomorphic components."""
    if phi.source != s:
        raise ValueError("morphism does not start at the given semigroupoid")
    report = check_morphism(phi)
    if not report.ok:
        raise NotAMorphism(report.violations[0].message)
    if not report.surjective_on_arrows:
        hit = set(phi.arrow_map)
        missing = next(a.id for a in phi.target.arrows if a.id not in hit)
        raise NotSurjective(f"target arrow {missing} has empty preimage")
    preimages: dict[int, list[int]] = {a.id: [] for a in phi.target.arrows}
    for x, fx in enumerate(phi.arrow_map):
        preimages[fx].append(x)
    components = tuple(
        Component(top_arrow=t, members=tuple(sorted(members)),
                  fingerprint=_fingerprint(s, sorted(members)))
        for t, members in sorted(preimages.items()))
    classes = compress_components(s, components)
    return Decomposition(top=phi.target, morphism=phi,
                         components=components, classes=classes)


@dataclass
class EmulationReport:
    violations: list[Violation] = field(default_factory=list)
    pairs_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, witness: tuple, message: str):
        self.violations.append(Violation(kind, witness, message))


def _member_to_rep(d: Decomposition) -> dict[int, dict[int, int]]:
    """Per component: map from S-arrow to its representative coordinate."""
    out: dict[int, dict[int, int]] = {}
    for cls in d.classes:
        for member in cls.members:
            out[member.component] = {v: k for k, v in member.arrow_map.items()}
    return out


def verify_emulation(s: Semigroupoid, d: Decomposition) -> EmulationReport:
    """Exhaustively check that the two-level structure emulates S.

    For every composable pair (x, y): the top coordinates compose by the
    morphism law; the composite lies in the component of its top
    coordinate; and encoding arrows as (top coordinate, representative
    coordinate) is injective and decodes back exactly.
    """
    report = EmulationReport()
    phi = d.morphism
    sizes = sum(len(c.members) for c in d.components)
    if sizes != len(s.arrows):
        report.add("partition", (), f"component sizes sum to {sizes}, "
                   f"expected {len(s.arrows)}")
    seen: set[int] = set()
    for comp in d.components:
        for m in comp.members:
            if m in seen:
                report.add("partition", (m,), f"arrow {m} appears in two components")
            seen.add(m)
            if phi.arrow_map[m] != comp.top_arrow:
                report.add("partition", (m,),
                           f"arrow {m} sits in component {comp.top_arrow} "
                           f"but maps to {phi.arrow_map[m]}")
    decode = _member_to_rep(d)
    encodings: dict[tuple[int, int], int] = {}
    for x in range(len(s.arrows)):
        top = phi.arrow_map[x]
        coordinate = decode.get(top, {}).get(x)
        if coordinate is None:
            report.add("encoding", (x,), f"arrow {x} has no bottom coordinate")
            continue
        pair = (top, coordinate)
        if pair in encodings:
            report.add("encoding", (x, encodings[pair]),
                       f"arrows {x} and {encodings[pair]} share the code {pair}")
        encodings[pair] = x
    for (x, y), xy in s.table.items():
        report.pairs_checked += 1
        fx, fy = phi.arrow_map[x], phi.arrow_map[y]
        top = d.top.table.get((fx, fy))
        if top != phi.arrow_map[xy]:
            report.add("top", (x, y),
                       f"top composition of ({x},{y}) gives {top}, "
                       f"expected {phi.arrow_map[xy]}")
            continue
        if xy not in d.components[top].members:
            report.add("membership", (x, y),
                       f"composite {xy} missing from component {top}")
            continue
        coordinate = decode[top].get(xy)
        cls = next(c for c in d.classes
                   if any(m.component == top for m in c.members))
        member = next(m for m in cls.members if m.component == top)
        if coordinate is None or member.arrow_map.get(coordinate) != xy:
            report.add("decoding", (x, y),
                       f"coordinates of composite {xy} do not decode back")
    return report


def verify_compression(s: Semigroupoid, d: Decomposition) -> EmulationReport:
    """Check that every recorded bijection carries the representative
    component exactly onto its member (types and inherited composition,
    definedness in both directions)."""
    report = EmulationReport()
    for cls in d.classes:
        rep = d.components[cls.representative]
        for member in cls.members:
            comp = d.components[member.component]
            amap = member.arrow_map
            if sorted(amap.keys()) != list(rep.members) or \
               sorted(amap.values()) != list(comp.members):
                report.add("bijection", (cls.representative, member.component),
                           "arrow map is not a bijection between the member sets")
                continue
            for m in rep.members:
                if member.object_map.get(s.dom(m)) != s.dom(amap[m]) or \
                   member.object_map.get(s.cod(m)) != s.cod(amap[m]):
                    report.add("typing", (member.component, m),
                               f"bijection mistypes arrow {m}")
            for x in rep.members:
                for y in rep.members:
                    z = s.table.get((x, y))
                    z_in = z if z in rep.members else None
                    w = s.table.get((amap[x], amap[y]))
                    w_in = w if w in comp.members else None
                    if (z_in is None) != (w_in is None):
                        report.add("composition", (member.component, x, y),
                                   "inherited composition defined on one side only")
                    elif z_in is not None and amap[z_in] != w_in:
                        report.add("composition", (member.component, x, y),
                                   f"bijection breaks {x}·{y}")
    return report
