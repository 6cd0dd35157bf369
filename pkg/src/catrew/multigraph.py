"""Finite directed multigraphs and their homomorphisms.

A graph is a pair of finite sets (vertices, edges) with source and target
maps; morphisms are compatible pairs of functions.  All (co)limits are
computed componentwise on the vertex and edge sets via the finset instance,
with source/target maps induced by the mediating property.

This instance is implemented directly rather than through the presheaf
module because DPO workloads hammer it; the presheaf module provides a
bridge and the agreement of the two routes is property-tested.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
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
from .finset import FINSET, FinFn, FinSet


@dataclass(frozen=True, slots=True)
class Graph:
    """A finite directed multigraph."""

    V: FinSet
    E: FinSet
    src: FinFn
    tgt: FinFn

    def __post_init__(self):
        for m in (self.src, self.tgt):
            if m.source != self.E or m.target != self.V:
                raise TypeMismatchError("src/tgt must be maps E -> V")

    @staticmethod
    def make(nv: int, edges=()) -> "Graph":
        edges = list(edges)
        v, e = FinSet(nv), FinSet(len(edges))
        return Graph(v, e,
                     FinFn(e, v, tuple(s for s, _ in edges)),
                     FinFn(e, v, tuple(t for _, t in edges)))

    def edge_list(self):
        return [(self.src.table[e], self.tgt.table[e])
                for e in range(self.E.size)]


@dataclass(frozen=True, slots=True)
class GraphMorphism:
    """A pair of maps commuting with source and target."""

    source: Graph
    target: Graph
    vmap: FinFn
    emap: FinFn

    def __post_init__(self):
        g, h = self.source, self.target
        if self.vmap.source != g.V or self.vmap.target != h.V:
            raise TypeMismatchError("vmap has wrong endpoints")
        if self.emap.source != g.E or self.emap.target != h.E:
            raise TypeMismatchError("emap has wrong endpoints")
        for e in range(g.E.size):
            img = self.emap.table[e]
            if h.src.table[img] != self.vmap.table[g.src.table[e]] \
                    or h.tgt.table[img] != self.vmap.table[g.tgt.table[e]]:
                raise TypeMismatchError(f"edge {e} is not mapped naturally")


def _edges_by_pair(g: Graph):
    by_pair = defaultdict(list)
    for e in range(g.E.size):
        by_pair[(g.src.table[e], g.tgt.table[e])].append(e)
    return by_pair


class MultigraphCategory(Category):
    name = "multigraph"

    def identity(self, g: Graph) -> GraphMorphism:
        return GraphMorphism(g, g, FINSET.identity(g.V), FINSET.identity(g.E))

    def compose(self, g: GraphMorphism, f: GraphMorphism) -> GraphMorphism:
        if f.target != g.source:
            raise TypeMismatchError("morphisms are not composable")
        return GraphMorphism(f.source, g.target,
                             FINSET.compose(g.vmap, f.vmap),
                             FINSET.compose(g.emap, f.emap))

    # -- hom enumeration ------------------------------------------------------

    def enumerate_homs(self, g: Graph, h: Graph,
                       budget: int = DEFAULT_BUDGET,
                       monic_only: bool = False) -> list:
        """All homomorphisms g -> h, canonically sorted by image tables.

        The backtracking search assigns vertices by decreasing degree
        (deterministic tie-break by index) and prunes on edge candidates.
        """
        deg = [0] * g.V.size
        for e in range(g.E.size):
            deg[g.src.table[e]] += 1
            deg[g.tgt.table[e]] += 1
        order = sorted(range(g.V.size), key=lambda v: (-deg[v], v))
        pos = {v: i for i, v in enumerate(order)}
        ready = [[] for _ in order]
        for e in range(g.E.size):
            ready[max(pos[g.src.table[e]], pos[g.tgt.table[e]])].append(e)
        hpair = _edges_by_pair(h)
        gpair = _edges_by_pair(g)

        results = []
        vassign = [0] * g.V.size
        used_v = set()

        def emit(vtable):
            # choose an image for every edge, injectively when monic
            cands = []
            for e in range(g.E.size):
                key = (vtable[g.src.table[e]], vtable[g.tgt.table[e]])
                opts = hpair.get(key, [])
                if not opts:
                    return
                cands.append(opts)
            etab = [0] * g.E.size
            used_e = set()

            def bt_edge(i):
                if i == g.E.size:
                    results.append(GraphMorphism(
                        g, h, FinFn(g.V, h.V, tuple(vtable)),
                        FinFn(g.E, h.E, tuple(etab))))
                    if len(results) > budget:
                        raise BudgetExceededError(
                            f"hom enumeration exceeded budget {budget}")
                    return
                for c in cands[i]:
                    if monic_only and c in used_e:
                        continue
                    etab[i] = c
                    used_e.add(c)
                    bt_edge(i + 1)
                    used_e.discard(c)

            bt_edge(0)

        def bt_vertex(k):
            if k == g.V.size:
                emit(tuple(vassign))
                return
            v = order[k]
            for w in range(h.V.size):
                if monic_only and w in used_v:
                    continue
                vassign[v] = w
                ok = True
                for e in ready[k]:
                    key = (vassign[g.src.table[e]], vassign[g.tgt.table[e]])
                    have = len(hpair.get(key, []))
                    need = len(gpair[(g.src.table[e], g.tgt.table[e])]) \
                        if monic_only else 1
                    if have < need:
                        ok = False
                        break
                if ok:
                    used_v.add(w)
                    bt_vertex(k + 1)
                    used_v.discard(w)

        if g.V.size == 0:
            emit(())
        else:
            bt_vertex(0)
        results.sort(key=lambda m: (m.vmap.table, m.emap.table))
        return results

    # -- (co)limits -------------------------------------------------------------

    def pullback(self, cospan: Cospan) -> PullbackResult:
        f, g = cospan.left, cospan.right
        a, b = f.source, g.source
        vres = FINSET.pullback(Cospan(f.vmap, g.vmap))
        eres = FINSET.pullback(Cospan(f.emap, g.emap))
        vindex = {pr: i for i, pr in enumerate(vres.pairs)}
        apex = Graph(
            vres.apex, eres.apex,
            FinFn(eres.apex, vres.apex,
                  tuple(vindex[(a.src.table[ea], b.src.table[eb])]
                        for ea, eb in eres.pairs)),
            FinFn(eres.apex, vres.apex,
                  tuple(vindex[(a.tgt.table[ea], b.tgt.table[eb])]
                        for ea, eb in eres.pairs)))
        p = GraphMorphism(apex, a, vres.square.p, eres.square.p)
        q = GraphMorphism(apex, b, vres.square.q, eres.square.q)

        def mediator(cone: Span) -> GraphMorphism:
            vm = vres.mediate(Span(cone.left.vmap, cone.right.vmap), FINSET)
            em = eres.mediate(Span(cone.left.emap, cone.right.emap), FINSET)
            return GraphMorphism(cone.apex, apex, vm, em)

        return PullbackResult(Square(p, q, f, g), mediator)

    def pushout(self, span: Span) -> PushoutResult:
        p, q = span.left, span.right
        a, b = p.target, q.target
        vres = FINSET.pushout(Span(p.vmap, q.vmap))
        eres = FINSET.pushout(Span(p.emap, q.emap))
        nav, nae = a.V.size, a.E.size

        def vclass(side_a: bool, v: int) -> int:
            return vres.class_of[v if side_a else nav + v]

        src_t, tgt_t = [], []
        for r in eres.reps:
            if r < nae:
                src_t.append(vclass(True, a.src.table[r]))
                tgt_t.append(vclass(True, a.tgt.table[r]))
            else:
                src_t.append(vclass(False, b.src.table[r - nae]))
                tgt_t.append(vclass(False, b.tgt.table[r - nae]))
        cv, ce = vres.corner, eres.corner
        corner = Graph(cv, ce, FinFn(ce, cv, tuple(src_t)),
                       FinFn(ce, cv, tuple(tgt_t)))
        f = GraphMorphism(a, corner, vres.square.f, eres.square.f)
        g = GraphMorphism(b, corner, vres.square.g, eres.square.g)

        def comediator(cocone: Cospan) -> GraphMorphism:
            vm = vres.comediate(Cospan(cocone.left.vmap, cocone.right.vmap), FINSET)
            em = eres.comediate(Cospan(cocone.left.emap, cocone.right.emap), FINSET)
            return GraphMorphism(corner, cocone.target, vm, em)

        return PushoutResult(Square(p, q, f, g), comediator)

    def equalizer(self, f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
        a = f.source
        ev = FINSET.equalizer(f.vmap, g.vmap)
        ee = FINSET.equalizer(f.emap, g.emap)
        vpos = {v: i for i, v in enumerate(ev.table)}
        # agreeing edges automatically have agreeing endpoints
        sub = Graph(ev.source, ee.source,
                    FinFn(ee.source, ev.source,
                          tuple(vpos[a.src.table[e]] for e in ee.table)),
                    FinFn(ee.source, ev.source,
                          tuple(vpos[a.tgt.table[e]] for e in ee.table)))
        return GraphMorphism(sub, a, ev, ee)

    def coequalizer(self, f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
        b = f.target
        qv = FINSET.coequalizer(f.vmap, g.vmap)
        qe = FINSET.coequalizer(f.emap, g.emap)
        # induced src/tgt on edge classes, by representative
        reps = {}
        for e in range(b.E.size):
            reps.setdefault(qe.table[e], e)
        src_t = tuple(qv.table[b.src.table[reps[c]]] for c in range(qe.target.size))
        tgt_t = tuple(qv.table[b.tgt.table[reps[c]]] for c in range(qe.target.size))
        quot = Graph(qv.target, qe.target,
                     FinFn(qe.target, qv.target, src_t),
                     FinFn(qe.target, qv.target, tgt_t))
        return GraphMorphism(b, quot, qv, qe)

    # -- morphism predicates ------------------------------------------------------

    def is_mono(self, f: GraphMorphism) -> bool:
        return FINSET.is_mono(f.vmap) and FINSET.is_mono(f.emap)

    def is_epi(self, f: GraphMorphism) -> bool:
        return FINSET.is_epi(f.vmap) and FINSET.is_epi(f.emap)

    def is_iso(self, f: GraphMorphism) -> bool:
        return FINSET.is_iso(f.vmap) and FINSET.is_iso(f.emap)

    def inverse(self, f: GraphMorphism) -> GraphMorphism:
        return GraphMorphism(f.target, f.source,
                             FINSET.inverse(f.vmap), FINSET.inverse(f.emap))

    def iso_search(self, g: Graph, h: Graph) -> Optional[GraphMorphism]:
        """Backtracking isomorphism search with degree-profile pruning."""
        if g.V.size != h.V.size or g.E.size != h.E.size:
            return None

        def profiles(x: Graph):
            out = [0] * x.V.size
            inn = [0] * x.V.size
            for e in range(x.E.size):
                out[x.src.table[e]] += 1
                inn[x.tgt.table[e]] += 1
            return [(out[v], inn[v]) for v in range(x.V.size)]

        gp, hp = profiles(g), profiles(h)
        if sorted(gp) != sorted(hp):
            return None
        gmult = defaultdict(int)
        hmult = defaultdict(int)
        for e in range(g.E.size):
            gmult[(g.src.table[e], g.tgt.table[e])] += 1
        for e in range(h.E.size):
            hmult[(h.src.table[e], h.tgt.table[e])] += 1
        order = sorted(range(g.V.size), key=lambda v: (-(gp[v][0] + gp[v][1]), v))
        assign = [None] * g.V.size
        used = set()

        def bt(k):
            if k == g.V.size:
                return list(assign)
            v = order[k]
            for w in range(h.V.size):
                if w in used or hp[w] != gp[v]:
                    continue
                ok = True
                for u in range(g.V.size):
                    if assign[u] is None:
                        continue
                    if gmult[(v, u)] != hmult[(w, assign[u])] \
                            or gmult[(u, v)] != hmult[(assign[u], w)]:
                        ok = False
                        break
                if ok and gmult[(v, v)] != hmult[(w, w)]:
                    ok = False
                if ok:
                    assign[v] = w
                    used.add(w)
                    res = bt(k + 1)
                    if res is not None:
                        return res
                    used.discard(w)
                    assign[v] = None
            return None

        vperm = bt(0)
        if vperm is None:
            return None
        # pair up parallel edges in index order
        hbuckets = _edges_by_pair(h)
        taken = defaultdict(int)
        etab = [0] * g.E.size
        for e in range(g.E.size):
            key = (vperm[g.src.table[e]], vperm[g.tgt.table[e]])
            bucket = hbuckets[key]
            etab[e] = bucket[taken[key]]
            taken[key] += 1
        return GraphMorphism(g, h, FinFn(g.V, h.V, tuple(vperm)),
                             FinFn(g.E, h.E, tuple(etab)))

    def lift_through_mono(self, e: GraphMorphism, m: GraphMorphism):
        vm = FINSET.lift_through_mono(e.vmap, m.vmap)
        em = FINSET.lift_through_mono(e.emap, m.emap)
        if vm is None or em is None:
            return None
        return GraphMorphism(m.source, e.source, vm, em)

    def colift_through_epi(self, q: GraphMorphism, f: GraphMorphism):
        vm = FINSET.colift_through_epi(q.vmap, f.vmap)
        em = FINSET.colift_through_epi(q.emap, f.emap)
        if vm is None or em is None:
            return None
        return GraphMorphism(q.target, f.target, vm, em)

    # -- DPO ---------------------------------------------------------------------

    def gluing_violations(self, l: GraphMorphism, m: GraphMorphism):
        lg, x = l.target, m.target
        kept_v = set(l.vmap.table)
        kept_e = set(l.emap.table)
        del_lv = [v for v in range(lg.V.size) if v not in kept_v]
        del_le = [e for e in range(lg.E.size) if e not in kept_e]
        del_xv = {m.vmap.table[v] for v in del_lv}
        del_xe = {m.emap.table[e] for e in del_le}

        identified = []
        for label, table, dels in (("vertex", m.vmap.table, set(del_lv)),
                                   ("edge", m.emap.table, set(del_le))):
            preim = defaultdict(list)
            for i, v in enumerate(table):
                preim[v].append(i)
            for v, items in sorted(preim.items()):
                if len(items) > 1 and any(i in dels for i in items):
                    identified.append(f"{label} {v} identifies {items}")

        dangling = []
        for e in range(x.E.size):
            if e in del_xe:
                continue
            if x.src.table[e] in del_xv or x.tgt.table[e] in del_xv:
                dangling.append(f"edge {e}")
        return dangling, identified

    def pushout_complement(self, l: GraphMorphism, m: GraphMorphism):
        dangling, identified = self.gluing_violations(l, m)
        if dangling or identified:
            raise GluingError(dangling, identified)
        lg, x = l.target, m.target
        kept_lv = set(l.vmap.table)
        kept_le = set(l.emap.table)
        del_xv = {m.vmap.table[v] for v in range(lg.V.size) if v not in kept_lv}
        del_xe = {m.emap.table[e] for e in range(lg.E.size) if e not in kept_le}
        keep_v = [v for v in range(x.V.size) if v not in del_xv]
        keep_e = [e for e in range(x.E.size) if e not in del_xe]
        vpos = {v: i for i, v in enumerate(keep_v)}
        epos = {e: i for i, e in enumerate(keep_e)}
        yv, ye = FinSet(len(keep_v)), FinSet(len(keep_e))
        y = Graph(yv, ye,
                  FinFn(ye, yv, tuple(vpos[x.src.table[e]] for e in keep_e)),
                  FinFn(ye, yv, tuple(vpos[x.tgt.table[e]] for e in keep_e)))
        mu = GraphMorphism(y, x, FinFn(yv, x.V, tuple(keep_v)),
                           FinFn(ye, x.E, tuple(keep_e)))
        k = l.source
        lam = GraphMorphism(
            k, y,
            FinFn(k.V, yv, tuple(vpos[m.vmap.table[l.vmap.table[v]]]
                                 for v in range(k.V.size))),
            FinFn(k.E, ye, tuple(epos[m.emap.table[l.emap.table[e]]]
                                 for e in range(k.E.size))))
        return lam, mu

    # -- enumeration / probes --------------------------------------------------------

    def probe_objects(self, max_size: int = 2) -> list:
        probes = [Graph.make(0), Graph.make(1), Graph.make(2),
                  Graph.make(2, [(0, 1)]), Graph.make(1, [(0, 0)]),
                  Graph.make(1, [(0, 0), (0, 0)]),
                  Graph.make(2, [(0, 0), (1, 1), (0, 1), (1, 0)])]
        return probes

    def enumerate_objects(self, max_size: int) -> list:
        objs = []
        for nv in range(max_size + 1):
            for ne in range(max_size - nv + 1):
                if nv == 0 and ne > 0:
                    continue
                for ends in itertools.product(
                        itertools.product(range(nv), repeat=2), repeat=ne):
                    objs.append(Graph.make(nv, list(ends)))
        return objs

    def enumerate_subobjects(self, x: Graph) -> list:
        subs = []
        for r in range(x.V.size + 1):
            for vsub in itertools.combinations(range(x.V.size), r):
                vset = set(vsub)
                inner = [e for e in range(x.E.size)
                         if x.src.table[e] in vset and x.tgt.table[e] in vset]
                for k in range(len(inner) + 1):
                    for esub in itertools.combinations(inner, k):
                        vpos = {v: i for i, v in enumerate(vsub)}
                        y = Graph(FinSet(r), FinSet(k),
                                  FinFn(FinSet(k), FinSet(r),
                                        tuple(vpos[x.src.table[e]] for e in esub)),
                                  FinFn(FinSet(k), FinSet(r),
                                        tuple(vpos[x.tgt.table[e]] for e in esub)))
                        subs.append(GraphMorphism(
                            y, x, FinFn(FinSet(r), x.V, vsub),
                            FinFn(FinSet(k), x.E, esub)))
        return subs

    # -- seeded generators ---------------------------------------------------------------

    def random_object(self, rng, max_size: int) -> Graph:
        nv = rng.randint(0, max_size)
        ne = rng.randint(0, max_size) if nv > 0 else 0
        return Graph.make(nv, [(rng.randrange(nv), rng.randrange(nv))
                               for _ in range(ne)])

    def random_hom(self, rng, a: Graph, b: Graph) -> Optional[GraphMorphism]:
        if a.V.size > 0 and b.V.size == 0:
            return None
        bpair = _edges_by_pair(b)
        for _ in range(8):
            vt = tuple(rng.randrange(b.V.size) for _ in range(a.V.size))
            et = []
            ok = True
            for e in range(a.E.size):
                opts = bpair.get((vt[a.src.table[e]], vt[a.tgt.table[e]]), [])
                if not opts:
                    ok = False
                    break
                et.append(rng.choice(opts))
            if ok:
                return GraphMorphism(a, b, FinFn(a.V, b.V, vt),
                                     FinFn(a.E, b.E, tuple(et)))
        return None

    def random_mono_extension(self, rng, a: Graph, grow: int = 2) -> GraphMorphism:
        nv = a.V.size + rng.randint(0, grow)
        edges = a.edge_list()
        if nv > 0:
            for _ in range(rng.randint(0, grow)):
                edges.append((rng.randrange(nv), rng.randrange(nv)))
        b = Graph.make(nv, edges)
        return GraphMorphism(a, b,
                             FinFn(a.V, b.V, tuple(range(a.V.size))),
                             FinFn(a.E, b.E, tuple(range(a.E.size))))

    def random_regular_mono_extension(self, rng, a: Graph, grow: int = 2):
        # every mono of multigraphs is regular
        return self.random_mono_extension(rng, a, grow)

    def random_iso(self, rng, a: Graph) -> GraphMorphism:
        vperm = list(range(a.V.size))
        eperm = list(range(a.E.size))
        rng.shuffle(vperm)
        rng.shuffle(eperm)
        src_t = [0] * a.E.size
        tgt_t = [0] * a.E.size
        for e in range(a.E.size):
            src_t[eperm[e]] = vperm[a.src.table[e]]
            tgt_t[eperm[e]] = vperm[a.tgt.table[e]]
        b = Graph(a.V, a.E, FinFn(a.E, a.V, tuple(src_t)),
                  FinFn(a.E, a.V, tuple(tgt_t)))
        return GraphMorphism(a, b, FinFn(a.V, a.V, tuple(vperm)),
                             FinFn(a.E, a.E, tuple(eperm)))


MULTIGRAPH = MultigraphCategory()
