"""The category of finite sets and total functions.

Objects are initial segments of the naturals (a bare size); morphisms are
image tables.  This is the base instance and the ingredient from which
multigraphs, simple graphs, presheaves and slices are built.

Pushouts are quotients of disjoint unions, computed by union-find and
canonically renumbered by least representative (A-side elements before
B-side elements), so every colimit here is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .core import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    Category,
    Cospan,
    GluingError,
    PullbackResult,
    PushoutResult,
    Span,
    Square,
    TypeMismatchError,
)


@dataclass(frozen=True, slots=True)
class FinSet:
    """A finite set {0, ..., size-1}."""

    size: int

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("size must be >= 0")

    def __iter__(self):
        return iter(range(self.size))


@dataclass(frozen=True, slots=True)
class FinFn:
    """A total function given by its image table."""

    source: FinSet
    target: FinSet
    table: tuple

    def __post_init__(self):
        if len(self.table) != self.source.size:
            raise TypeMismatchError("table length must match source size")
        if any(not (0 <= v < self.target.size) for v in self.table):
            raise TypeMismatchError("table entry out of range")

    def __call__(self, i: int) -> int:
        return self.table[i]


def fn(src: int | FinSet, tgt: int | FinSet, table) -> FinFn:
    """Convenience constructor accepting bare sizes."""
    if isinstance(src, int):
        src = FinSet(src)
    if isinstance(tgt, int):
        tgt = FinSet(tgt)
    return FinFn(src, tgt, tuple(table))


class _UnionFind:
    """Union-find with canonical class numbering by least representative."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller index as root so roots are least representatives
            if ra > rb:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def classes(self):
        """(class_of, reps): class index per element, least rep per class."""
        index = {}
        reps = []
        class_of = []
        for x in range(len(self.parent)):
            r = self.find(x)
            if r not in index:
                index[r] = len(reps)
                reps.append(r)
            class_of.append(index[r])
        return class_of, reps


class FinSetCategory(Category):
    name = "finset"

    def identity(self, obj: FinSet) -> FinFn:
        return FinFn(obj, obj, tuple(range(obj.size)))

    def compose(self, g: FinFn, f: FinFn) -> FinFn:
        if f.target != g.source:
            raise TypeMismatchError("morphisms are not composable")
        gt = g.table
        return FinFn(f.source, g.target, tuple(gt[v] for v in f.table))

    def enumerate_homs(self, src: FinSet, tgt: FinSet,
                       budget: int = DEFAULT_BUDGET) -> list:
        count = tgt.size ** src.size
        if count > budget:
            raise BudgetExceededError(
                f"{count} functions {src.size}->{tgt.size} exceed budget {budget}")
        return [FinFn(src, tgt, t)
                for t in itertools.product(range(tgt.size), repeat=src.size)]

    # -- (co)limits --------------------------------------------------------

    def pullback(self, cospan: Cospan) -> PullbackResult:
        f, g = cospan.left, cospan.right
        a, b = f.source, g.source
        pairs = [(x, y) for x in range(a.size) for y in range(b.size)
                 if f.table[x] == g.table[y]]
        apex = FinSet(len(pairs))
        p = FinFn(apex, a, tuple(x for x, _ in pairs))
        q = FinFn(apex, b, tuple(y for _, y in pairs))
        index = {pr: i for i, pr in enumerate(pairs)}

        def mediator(cone: Span) -> FinFn:
            lt, rt = cone.left.table, cone.right.table
            return FinFn(cone.apex, apex,
                         tuple(index[(lt[i], rt[i])] for i in range(cone.apex.size)))

        res = PullbackResult(Square(p, q, f, g), mediator)
        res.pairs = pairs
        return res

    def pushout(self, span: Span) -> PushoutResult:
        p, q = span.left, span.right
        a, b = p.target, q.target
        na = a.size
        uf = _UnionFind(na + b.size)
        for c in range(span.apex.size):
            uf.union(p.table[c], na + q.table[c])
        class_of, reps = uf.classes()
        corner = FinSet(len(reps))
        f = FinFn(a, corner, tuple(class_of[x] for x in range(na)))
        g = FinFn(b, corner, tuple(class_of[na + y] for y in range(b.size)))

        def comediator(cocone: Cospan) -> FinFn:
            lt, rt = cocone.left.table, cocone.right.table
            table = tuple(lt[r] if r < na else rt[r - na] for r in reps)
            return FinFn(corner, cocone.target, table)

        res = PushoutResult(Square(p, q, f, g), comediator)
        res.class_of = class_of
        res.reps = reps
        return res

    def equalizer(self, f: FinFn, g: FinFn) -> FinFn:
        agree = tuple(x for x in range(f.source.size)
                      if f.table[x] == g.table[x])
        return FinFn(FinSet(len(agree)), f.source, agree)

    def coequalizer(self, f: FinFn, g: FinFn) -> FinFn:
        uf = _UnionFind(f.target.size)
        for x in range(f.source.size):
            uf.union(f.table[x], g.table[x])
        class_of, reps = uf.classes()
        return FinFn(f.target, FinSet(len(reps)), tuple(class_of))

    # -- morphism predicates -------------------------------------------------

    def is_mono(self, f: FinFn) -> bool:
        return len(set(f.table)) == len(f.table)

    def is_epi(self, f: FinFn) -> bool:
        return len(set(f.table)) == f.target.size

    def is_iso(self, f: FinFn) -> bool:
        return f.source.size == f.target.size and self.is_mono(f)

    def inverse(self, f: FinFn) -> FinFn:
        inv = [0] * f.target.size
        for x, v in enumerate(f.table):
            inv[v] = x
        return FinFn(f.target, f.source, tuple(inv))

    def iso_search(self, a: FinSet, b: FinSet) -> Optional[FinFn]:
        if a.size != b.size:
            return None
        return FinFn(a, b, tuple(range(a.size)))

    def lift_through_mono(self, e: FinFn, m: FinFn) -> Optional[FinFn]:
        pos = {v: i for i, v in enumerate(e.table)}
        table = []
        for v in m.table:
            if v not in pos:
                return None
            table.append(pos[v])
        return FinFn(m.source, e.source, tuple(table))

    def colift_through_epi(self, q: FinFn, f: FinFn) -> Optional[FinFn]:
        table = [None] * q.target.size
        for x in range(q.source.size):
            c, v = q.table[x], f.table[x]
            if table[c] is None:
                table[c] = v
            elif table[c] != v:
                return None
        if any(v is None for v in table):
            return None
        return FinFn(q.target, f.target, tuple(table))

    def classify(self, f: FinFn, budget: int = DEFAULT_BUDGET):
        # split maps can be built directly here, no hom search needed
        from .core import MorphismClass
        mono = self.is_mono(f)
        epi = self.is_epi(f)
        iso = mono and epi and f.source.size == f.target.size
        split_mono = mono and (f.source.size > 0 or f.target.size == 0)
        split_epi = epi
        # every mono of finite sets is regular; every epi splits hence regular
        return MorphismClass(mono, epi, split_mono, split_epi,
                             regular_mono=mono, regular_epi=epi, iso=iso)

    # -- DPO ------------------------------------------------------------------

    def gluing_violations(self, l: FinFn, m: FinFn):
        kept = set(l.table)
        deleted = [x for x in range(l.target.size) if x not in kept]
        dset = set(deleted)
        identified = []
        preim = {}
        for x, v in enumerate(m.table):
            preim.setdefault(v, []).append(x)
        for v, xs in preim.items():
            if len(xs) > 1 and any(x in dset for x in xs):
                identified.append(f"element {v} identifies {xs}")
        return [], identified

    def pushout_complement(self, l: FinFn, m: FinFn):
        dangling, identified = self.gluing_violations(l, m)
        if dangling or identified:
            raise GluingError(dangling, identified)
        deleted = {m.table[x] for x in range(l.target.size)
                   if x not in set(l.table)}
        kept = [x for x in range(m.target.size) if x not in deleted]
        y = FinSet(len(kept))
        mu = FinFn(y, m.target, tuple(kept))
        pos = {v: i for i, v in enumerate(kept)}
        lam = FinFn(l.source, y,
                    tuple(pos[m.table[l.table[k]]] for k in range(l.source.size)))
        return lam, mu

    # -- enumeration / probes --------------------------------------------------

    def probe_objects(self, max_size: int = 2) -> list:
        return [FinSet(n) for n in range(max_size + 1)]

    def enumerate_objects(self, max_size: int) -> list:
        return [FinSet(n) for n in range(max_size + 1)]

    def enumerate_subobjects(self, x: FinSet) -> list:
        subs = []
        for r in range(x.size + 1):
            for combo in itertools.combinations(range(x.size), r):
                subs.append(FinFn(FinSet(r), x, combo))
        return subs

    # -- seeded generators -------------------------------------------------------

    def random_object(self, rng, max_size: int) -> FinSet:
        return FinSet(rng.randint(0, max_size))

    def random_hom(self, rng, a: FinSet, b: FinSet) -> Optional[FinFn]:
        if a.size == 0:
            return FinFn(a, b, ())
        if b.size == 0:
            return None
        return FinFn(a, b, tuple(rng.randrange(b.size) for _ in range(a.size)))

    def random_mono_extension(self, rng, a: FinSet, grow: int = 2) -> FinFn:
        extra = rng.randint(0, grow)
        b = FinSet(a.size + extra)
        image = rng.sample(range(b.size), a.size)
        return FinFn(a, b, tuple(image))

    def random_regular_mono_extension(self, rng, a: FinSet, grow: int = 2) -> FinFn:
        # all monos are regular here
        return self.random_mono_extension(rng, a, grow)

    def random_iso(self, rng, a: FinSet) -> FinFn:
        perm = list(range(a.size))
        rng.shuffle(perm)
        return FinFn(a, a, tuple(perm))


FINSET = FinSetCategory()
