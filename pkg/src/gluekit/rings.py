"""Finite commutative rings with unity as explicit operation tables.

Everything is decided by enumeration: ring axioms, unit groups, locality,
homomorphism conditions.  A conversion of the additive group of a table
ring into a finitely generated abelian-group presentation bridges into the
integer-matrix machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from . import abgroups as ab
from . import intlinalg as il
from .errors import ValidationError

Table = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class FinCommRing:
    add: Table
    mul: Table
    zero: int
    one: int

    @property
    def order(self) -> int:
        return len(self.add)

    def elements(self) -> range:
        return range(self.order)

    def neg(self, a: int) -> int:
        for b in self.elements():
            if self.add[a][b] == self.zero:
                return b
        raise ValidationError("element without additive inverse")

    def __repr__(self):
        return f"FinCommRing(order={self.order})"


def make_ring(add, mul, one: int, zero: int | None = None) -> FinCommRing:
    """Validated commutative ring with unity; errors carry a witness."""
    add = tuple(tuple(int(x) for x in row) for row in add)
    mul = tuple(tuple(int(x) for x in row) for row in mul)
    q = len(add)
    if q == 0:
        raise ValidationError("a ring needs at least one element")
    for name, tab in (("add", add), ("mul", mul)):
        if len(tab) != q or any(len(r) != q for r in tab):
            raise ValidationError(f"{name} table is not {q}x{q}")
        for row in tab:
            for x in row:
                if not 0 <= x < q:
                    raise ValidationError(f"{name} table entry {x} out of range")
    if zero is None:
        candidates = [z for z in range(q) if all(add[z][a] == a for a in range(q))]
        if len(candidates) != 1:
            raise ValidationError("no unique additive identity")
        zero = candidates[0]
    for a in range(q):
        for b in range(q):
            if add[a][b] != add[b][a]:
                raise ValidationError(f"addition not commutative at ({a},{b})")
            if mul[a][b] != mul[b][a]:
                raise ValidationError(f"multiplication not commutative at ({a},{b})")
    for a in range(q):
        if add[zero][a] != a:
            raise ValidationError(f"additive identity fails at {a}")
        if mul[one][a] != a:
            raise ValidationError(f"unity fails at {a}")
        if not any(add[a][b] == zero for b in range(q)):
            raise ValidationError(f"element {a} has no additive inverse")
    for a in range(q):
        for b in range(q):
            for c in range(q):
                if add[add[a][b]][c] != add[a][add[b][c]]:
                    raise ValidationError(f"addition not associative at ({a},{b},{c})")
                if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                    raise ValidationError(f"multiplication not associative at ({a},{b},{c})")
                if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]:
                    raise ValidationError(f"distributivity fails at ({a},{b},{c})")
    return FinCommRing(add, mul, zero, one)


def zmod(n: int) -> FinCommRing:
    if n < 1:
        raise ValidationError("modulus must be positive")
    add = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    mul = tuple(tuple((a * b) % n for b in range(n)) for a in range(n))
    return FinCommRing(add, mul, 0, 1 % n)


def zero_ring() -> FinCommRing:
    return zmod(1)


def product_ring(rings) -> tuple[FinCommRing, list[list[int]]]:
    """Componentwise product; returns the ring and, per factor, the
    projection table element -> factor element."""
    rings = list(rings)
    tuples = list(iproduct(*(r.elements() for r in rings))) if rings else [()]
    index = {t: k for k, t in enumerate(tuples)}
    q = len(tuples)
    add = tuple(
        tuple(
            index[tuple(r.add[a[k]][b[k]] for k, r in enumerate(rings))]
            for b in tuples
        )
        for a in tuples
    )
    mul = tuple(
        tuple(
            index[tuple(r.mul[a[k]][b[k]] for k, r in enumerate(rings))]
            for b in tuples
        )
        for a in tuples
    )
    zero = index[tuple(r.zero for r in rings)]
    one = index[tuple(r.one for r in rings)]
    ring = FinCommRing(add, mul, zero, one)
    projections = [[tuples[e][k] for e in range(q)] for k in range(len(rings))]
    return ring, projections


def units(ring: FinCommRing) -> set[int]:
    return {
        a
        for a in ring.elements()
        if any(ring.mul[a][b] == ring.one for b in ring.elements())
    }


def is_local_ring(ring: FinCommRing) -> bool:
    """Local iff the non-units are closed under addition (they always absorb
    multiplication in a finite commutative ring); the zero ring is not
    local."""
    if ring.order == 1:
        return False
    non_units = [a for a in ring.elements() if a not in units(ring)]
    return all(ring.add[a][b] in non_units for a in non_units for b in non_units)


@dataclass(frozen=True)
class RingHom:
    dom: FinCommRing
    cod: FinCommRing
    assign: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.assign[a]


def make_ring_hom(dom: FinCommRing, cod: FinCommRing, assign) -> RingHom:
    assign = tuple(int(x) for x in assign)
    if len(assign) != dom.order:
        raise ValidationError("assignment must be total")
    h = RingHom(dom, cod, assign)
    if not is_ring_hom(h):
        raise ValidationError("not a unital ring homomorphism")
    return h


def is_ring_hom(h: RingHom) -> bool:
    d, c, f = h.dom, h.cod, h.assign
    if f[d.one] != c.one:
        return False
    for a in d.elements():
        for b in d.elements():
            if f[d.add[a][b]] != c.add[f[a]][f[b]]:
                return False
            if f[d.mul[a][b]] != c.mul[f[a]][f[b]]:
                return False
    return True


def identity_ring_hom(ring: FinCommRing) -> RingHom:
    return RingHom(ring, ring, tuple(ring.elements()))


def compose_ring_hom(f: RingHom, g: RingHom) -> RingHom:
    """f after g."""
    if g.cod != f.dom:
        raise ValidationError("compose_ring_hom: endpoint mismatch")
    return RingHom(g.dom, f.cod, tuple(f.assign[g.assign[a]] for a in g.dom.elements()))


def is_ring_iso(h: RingHom) -> bool:
    return len(set(h.assign)) == h.dom.order == h.cod.order and is_ring_hom(h)


def is_local_hom(h: RingHom) -> bool:
    """Non-units land on non-units."""
    dom_units = units(h.dom)
    cod_units = units(h.cod)
    return all(h.assign[a] not in cod_units for a in h.dom.elements() if a not in dom_units)


def additive_order(ring: FinCommRing, a: int) -> int:
    k, cur = 1, a
    while cur != ring.zero:
        cur = ring.add[cur][a]
        k += 1
    return k


def additive_group_presentation(ring: FinCommRing) -> tuple[ab.FgAbGroup, dict[int, tuple[int, ...]], list[int]]:
    """Present the additive group of a table ring.

    Returns (group, coordinates per element, generator elements).
    Generators are chosen greedily by decreasing additive order; relations
    are the box combinations that vanish plus one order relation per
    generator.
    """
    q = ring.order
    gens: list[int] = []
    span = {ring.zero}
    by_order = sorted(ring.elements(), key=lambda a: -additive_order(ring, a))
    for a in by_order:
        if a in span:
            continue
        gens.append(a)
        new_span = set()
        for s in span:
            cur = s
            while True:
                new_span.add(cur)
                cur = ring.add[cur][a]
                if cur == s:
                    break
        span = new_span
        if len(span) == q:
            break
    orders = [additive_order(ring, g) for g in gens]
    coords: dict[int, tuple[int, ...]] = {}
    rel_cols: list[tuple[int, ...]] = []
    for combo in iproduct(*(range(o) for o in orders)) if gens else [()]:
        elem = ring.zero
        for g, c in zip(gens, combo):
            for _ in range(c):
                elem = ring.add[elem][g]
        if elem not in coords:
            coords[elem] = tuple(combo)
        if elem == ring.zero and any(combo):
            rel_cols.append(tuple(combo))
    k = len(gens)
    for i, o in enumerate(orders):
        rel_cols.append(tuple(o if j == i else 0 for j in range(k)))
    group = ab.FgAbGroup(k, il.from_columns(rel_cols, k) if rel_cols else ())
    return group, coords, gens


def additive_hom_matrix(h: RingHom, dom_pres, cod_pres) -> ab.AbHom:
    """The additive part of a ring hom in presented coordinates."""
    dom_group, _, dom_gens = dom_pres
    cod_group, cod_coords, _ = cod_pres
    cols = [cod_coords[h.assign[g]] for g in dom_gens]
    mat = il.from_columns(cols, cod_group.ambient) if cols else ()
    return ab.AbHom(dom_group, cod_group, mat)


def ring_to_json(ring: FinCommRing) -> dict:
    return {
        "order": ring.order,
        "add": [list(r) for r in ring.add],
        "mul": [list(r) for r in ring.mul],
        "one": ring.one,
        "zero": ring.zero,
    }


def ring_from_json(doc: dict) -> FinCommRing:
    return make_ring(doc["add"], doc["mul"], int(doc["one"]), doc.get("zero"))
