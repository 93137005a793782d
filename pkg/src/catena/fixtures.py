"""Small canonical structures used by the tests, the docs, and anyone
poking at the API from a REPL."""

from __future__ import annotations

from .semigroupoid import Arrow, Obj, Semigroupoid


def two_object_semigroupoid() -> Semigroupoid:
    """Two objects σ, τ and six arrows: a, b are endomorphisms of σ
    (forming a two-element group), c, d, e go from σ to τ (b swaps d and
    e), and f is an idempotent endomorphism of τ absorbing c, d, e."""
    objects = (Obj(0, "σ"), Obj(1, "τ"))
    arrows = (
        Arrow(0, 0, 0, "a"),
        Arrow(1, 0, 0, "b"),
        Arrow(2, 0, 1, "c"),
        Arrow(3, 0, 1, "d"),
        Arrow(4, 0, 1, "e"),
        Arrow(5, 1, 1, "f"),
    )
    a, b, c, d, e, f = range(6)
    table = {
        (a, a): a, (a, b): b, (a, c): c, (a, d): d, (a, e): e,
        (b, a): b, (b, b): a, (b, c): c, (b, d): e, (b, e): d,
        (c, f): c, (d, f): c, (e, f): c,
        (f, f): f,
    }
    return Semigroupoid(objects=objects, arrows=arrows, table=table)


def cyclic2_semigroupoid() -> Semigroupoid:
    """The two-element cyclic group as a one-object semigroupoid:
    e·e=e, e·s=s, s·e=s, s·s=e."""
    objects = (Obj(0, "•"),)
    arrows = (Arrow(0, 0, 0, "e"), Arrow(1, 0, 0, "s"))
    table = {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0}
    return Semigroupoid(objects=objects, arrows=arrows, table=table)


def right_zero_semigroupoid() -> Semigroupoid:
    """Two-element right-zero semigroup (x·y = y) on one object."""
    objects = (Obj(0, "•"),)
    arrows = (Arrow(0, 0, 0, "x"), Arrow(1, 0, 0, "y"))
    table = {(0, 0): 0, (0, 1): 1, (1, 0): 0, (1, 1): 1}
    return Semigroupoid(objects=objects, arrows=arrows, table=table)


def double_cyclic2_semigroupoid() -> Semigroupoid:
    """Disjoint union of two copies of the two-element group, one sitting
    on each of two objects; their hom-set collapse has two isomorphic
    preimage components."""
    objects = (Obj(0, "σ"), Obj(1, "τ"))
    arrows = (
        Arrow(0, 0, 0, "e1"), Arrow(1, 0, 0, "s1"),
        Arrow(2, 1, 1, "e2"), Arrow(3, 1, 1, "s2"),
    )
    table = {
        (0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0,
        (2, 2): 2, (2, 3): 3, (3, 2): 3, (3, 3): 2,
    }
    return Semigroupoid(objects=objects, arrows=arrows, table=table)


def empty_semigroupoid() -> Semigroupoid:
    return Semigroupoid(objects=(), arrows=(), table={})
