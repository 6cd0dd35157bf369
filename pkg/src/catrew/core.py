"""Shared machinery for finite concrete categories.

Every concrete category in this package (finite sets, multigraphs, simple
graphs, presheaves, slices) implements the :class:`Category` interface:
objects and morphisms are immutable values, morphisms know their source and
target, equality is strict structural equality, and hom-sets can be
enumerated up to a budget.  On top of that interface this module provides
the decision procedures that are shared by all instances: recognizing
pullback and pushout squares by canonical comparison, computing mediating
morphisms, classifying morphisms (mono / epi / split / regular / iso), and
the pasting checks.

Recognition of universal properties works by canonical comparison: the
instance computes its canonical (co)limit, and a candidate square holds the
property iff the mediating morphism between the candidate corner and the
canonical one is an isomorphism.  This makes the universal quantification
decidable on finite data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional, Sequence

DEFAULT_BUDGET = 500_000


class CatError(Exception):
    """Base error for categorical operations."""


class TypeMismatchError(CatError):
    """Raised when morphisms are not composable or a diagram is ill-typed."""


class BudgetExceededError(CatError):
    """Raised when an enumeration would exceed the configured budget."""


class PushoutUnavailableError(CatError):
    """Raised when an instance has no canonical pushout for a span."""


class GluingError(CatError):
    """Raised when a pushout complement does not exist.

    Carries structured diagnostics: ``dangling`` and ``identified`` are
    lists of human-readable item descriptions.
    """

    def __init__(self, dangling, identified):
        self.dangling = list(dangling)
        self.identified = list(identified)
        parts = []
        if self.dangling:
            parts.append("dangling: " + ", ".join(map(str, self.dangling)))
        if self.identified:
            parts.append("identified: " + ", ".join(map(str, self.identified)))
        super().__init__("; ".join(parts) or "gluing condition violated")


@dataclass(frozen=True, slots=True)
class Span:
    """Two morphisms out of a common apex: A <-left- C -right-> B."""

    left: Any
    right: Any

    def __post_init__(self):
        if self.left.source != self.right.source:
            raise TypeMismatchError("span legs must share their source")

    @property
    def apex(self):
        return self.left.source


@dataclass(frozen=True, slots=True)
class Cospan:
    """Two morphisms into a common target: A -left-> C <-right- B."""

    left: Any
    right: Any

    def __post_init__(self):
        if self.left.target != self.right.target:
            raise TypeMismatchError("cospan legs must share their target")

    @property
    def target(self):
        return self.left.target


@dataclass(frozen=True, slots=True)
class Square:
    """A square of morphisms.

    ::

        D --p--> A
        |        |
        q        f
        v        v
        B --g--> C

    Read as a pullback candidate, ``D`` is the apex over the cospan
    ``(f, g)``.  Read as a pushout candidate, ``(p, q)`` is the span at the
    apex and ``C`` the corner.  Commutation ``f . p == g . q`` is a property
    checked by :func:`commutes`, not an invariant: squares may be
    non-commuting candidates.
    """

    p: Any
    q: Any
    f: Any
    g: Any

    def __post_init__(self):
        if self.p.source != self.q.source:
            raise TypeMismatchError("square legs p, q must share their source")
        if self.f.target != self.g.target:
            raise TypeMismatchError("square legs f, g must share their target")
        if self.p.target != self.f.source or self.q.target != self.g.source:
            raise TypeMismatchError("square legs are not composable")

    @property
    def apex(self):
        return self.p.source

    @property
    def corner(self):
        return self.f.target

    def span(self) -> Span:
        return Span(self.p, self.q)

    def cospan(self) -> Cospan:
        return Cospan(self.f, self.g)


@dataclass(frozen=True, slots=True)
class MorphismClass:
    """Classification flags for a morphism (the morphism hierarchy)."""

    mono: bool
    epi: bool
    split_mono: bool
    split_epi: bool
    regular_mono: bool
    regular_epi: bool
    iso: bool

    def hierarchy_ok(self) -> bool:
        """Implications of the hierarchy: iso at top, split => regular => plain."""
        if self.iso and not all((self.mono, self.epi, self.split_mono,
                                 self.split_epi, self.regular_mono,
                                 self.regular_epi)):
            return False
        if self.split_mono and not self.regular_mono:
            return False
        if self.regular_mono and not self.mono:
            return False
        if self.split_epi and not self.regular_epi:
            return False
        if self.regular_epi and not self.epi:
            return False
        return True


class PullbackResult:
    """A canonical pullback: the square plus its mediating-morphism solver."""

    def __init__(self, square: Square, mediator: Callable[[Span], Any]):
        self.square = square
        self._mediator = mediator

    @property
    def apex(self):
        return self.square.apex

    def mediate(self, cone: Span, cat: "Category") -> Any:
        """The unique morphism from the cone apex into the canonical apex."""
        sq = self.square
        if cone.left.target != sq.p.target or cone.right.target != sq.q.target:
            raise TypeMismatchError("cone does not sit over the same cospan")
        if cat.compose(sq.f, cone.left) != cat.compose(sq.g, cone.right):
            raise CatError("cone does not commute over the cospan")
        return self._mediator(cone)


class PushoutResult:
    """A canonical pushout: the square plus its comediating-morphism solver."""

    def __init__(self, square: Square, comediator: Callable[[Cospan], Any]):
        self.square = square
        self._comediator = comediator

    @property
    def corner(self):
        return self.square.corner

    def comediate(self, cocone: Cospan, cat: "Category") -> Any:
        """The unique morphism from the canonical corner to the cocone target."""
        sq = self.square
        if cocone.left.source != sq.p.target or cocone.right.source != sq.q.target:
            raise TypeMismatchError("cocone does not sit under the same span")
        if cat.compose(cocone.left, sq.p) != cat.compose(cocone.right, sq.q):
            raise CatError("cocone does not commute under the span")
        return self._comediator(cocone)


class Category:
    """Interface of a finite concrete category instance.

    Morphisms are immutable values with ``.source`` and ``.target``
    attributes and structural equality.  All operations are pure.
    """

    name = "abstract"

    # -- structure -------------------------------------------------------

    def identity(self, obj) -> Any:
        raise NotImplementedError

    def compose(self, g, f) -> Any:
        raise NotImplementedError

    def enumerate_homs(self, src, tgt, budget: int = DEFAULT_BUDGET) -> list:
        """All morphisms src -> tgt in a fixed lexicographic order."""
        raise NotImplementedError

    def pullback(self, cospan: Cospan) -> PullbackResult:
        raise NotImplementedError

    def pushout(self, span: Span) -> PushoutResult:
        raise NotImplementedError

    def equalizer(self, f, g) -> Any:
        """The canonical equalizer E -> A of a parallel pair f, g: A -> B."""
        raise NotImplementedError

    def coequalizer(self, f, g) -> Any:
        """The canonical coequalizer B -> Q of a parallel pair f, g: A -> B."""
        raise NotImplementedError

    # -- structural morphism predicates (cheap, instance-specific) --------

    def is_mono(self, f) -> bool:
        raise NotImplementedError

    def is_epi(self, f) -> bool:
        raise NotImplementedError

    def is_iso(self, f) -> bool:
        raise NotImplementedError

    def inverse(self, f) -> Any:
        """Inverse of an isomorphism.  Pre: is_iso(f)."""
        raise NotImplementedError

    def iso_search(self, a, b) -> Optional[Any]:
        """Some isomorphism a -> b, or None."""
        raise NotImplementedError

    def lift_through_mono(self, e, m) -> Optional[Any]:
        """h with e . h == m, for e mono; None when m does not factor."""
        raise NotImplementedError

    def colift_through_epi(self, q, f) -> Optional[Any]:
        """h with h . q == f, for q a regular epi; None when ill-defined."""
        raise NotImplementedError

    # -- DPO hooks (instance-specific deletion constructions) -------------

    def gluing_violations(self, l, m):
        """(dangling, identified) item lists for the complement of (l, m)."""
        raise NotImplementedError

    def pushout_complement(self, l, m):
        """(lam: K->Y, mu: Y->X) completing (l: K->L, m: L->X) to a pushout.

        Pre: l mono.  Raises GluingError when no complement exists.
        """
        raise NotImplementedError

    # -- bounded enumeration hooks ----------------------------------------

    def probe_objects(self, max_size: int = 2) -> list:
        """Small objects used by the bounded cancellation cross-checks."""
        raise NotImplementedError

    def enumerate_objects(self, max_size: int) -> list:
        """All objects of size <= max_size (used by the test oracles)."""
        raise NotImplementedError

    def enumerate_subobjects(self, x) -> list:
        """All canonical subobject inclusions into x (test oracles)."""
        raise NotImplementedError

    # -- seeded generators -------------------------------------------------

    def random_object(self, rng, max_size: int):
        raise NotImplementedError

    def random_hom(self, rng, a, b) -> Optional[Any]:
        """A random morphism a -> b, or None when the search gives up."""
        raise NotImplementedError

    def random_mono_extension(self, rng, a, grow: int = 2) -> Any:
        """A mono a -> b into a randomly grown object b."""
        raise NotImplementedError

    def random_regular_mono_extension(self, rng, a, grow: int = 2) -> Any:
        """Like random_mono_extension but the result is a regular mono."""
        raise NotImplementedError

    def random_iso(self, rng, a) -> Any:
        """An isomorphism from a onto a randomly relabeled copy."""
        raise NotImplementedError

    # -- derived operations -------------------------------------------------

    def classify(self, f, budget: int = DEFAULT_BUDGET) -> MorphismClass:
        """Full classification of f; split flags are found by hom search."""
        mono = self.is_mono(f)
        epi = self.is_epi(f)
        iso = self.is_iso(f)
        if iso:
            return MorphismClass(True, True, True, True, True, True, True)
        split_mono = mono and self._find_retraction(f, budget) is not None
        split_epi = epi and self._find_section(f, budget) is not None
        regular_mono = split_mono or (mono and is_regular_mono(self, f))
        regular_epi = split_epi or (epi and is_regular_epi(self, f))
        return MorphismClass(mono, epi, split_mono, split_epi,
                             regular_mono, regular_epi, iso)

    def _find_retraction(self, f, budget: int) -> Optional[Any]:
        ida = self.identity(f.source)
        for r in self.enumerate_homs(f.target, f.source, budget):
            if self.compose(r, f) == ida:
                return r
        return None

    def _find_section(self, f, budget: int) -> Optional[Any]:
        idb = self.identity(f.target)
        for s in self.enumerate_homs(f.target, f.source, budget):
            if self.compose(f, s) == idb:
                return s
        return None


# -- generic decision procedures ------------------------------------------


def commutes(cat: Category, sq: Square) -> bool:
    """Whether f . p == g . q under the instance's strict equality."""
    return cat.compose(sq.f, sq.p) == cat.compose(sq.g, sq.q)


def is_pullback(cat: Category, sq: Square) -> bool:
    """Whether sq is a pullback square (canonical comparison).

    Non-commuting squares are not cones at all and yield False.
    """
    if not commutes(cat, sq):
        return False
    pb = cat.pullback(sq.cospan())
    u = pb.mediate(sq.span(), cat)
    return cat.is_iso(u)


def is_pushout(cat: Category, sq: Square) -> bool:
    """Whether sq is a pushout square, read with the span at the apex.

    Raises PushoutUnavailableError when the instance lacks the canonical
    pushout of the span; this is distinct from returning False.
    """
    if not commutes(cat, sq):
        return False
    po = cat.pushout(sq.span())
    u = po.comediate(sq.cospan(), cat)
    return cat.is_iso(u)


def mediating_from_cone(cat: Category, sq_pullback: Square, cone: Span):
    """The unique u into the apex of a pullback square with p.u, q.u the cone.

    Pre: sq_pullback is a pullback and the cone commutes over its cospan.
    """
    pb = cat.pullback(sq_pullback.cospan())
    w = pb.mediate(cone, cat)
    t = pb.mediate(sq_pullback.span(), cat)
    if not cat.is_iso(t):
        raise CatError("square is not a pullback")
    return cat.compose(cat.inverse(t), w)


def equalizer_of(cat: Category, f, g):
    """Canonical equalizer of a parallel pair (delegates to the instance)."""
    if f.source != g.source or f.target != g.target:
        raise TypeMismatchError("equalizer needs a parallel pair")
    return cat.equalizer(f, g)


def cokernel_pair(cat: Category, m) -> Cospan:
    """The pushout cospan of m along itself."""
    po = cat.pushout(Span(m, m))
    return Cospan(po.square.f, po.square.g)


def is_regular_mono(cat: Category, m) -> bool:
    """Whether m is a regular mono, via the cokernel-pair criterion.

    m is regular iff it is the equalizer of its cokernel pair; on finite
    data this replaces the unbounded search for *some* equalized pair.
    """
    if not cat.is_mono(m):
        return False
    cp = cokernel_pair(cat, m)
    e = cat.equalizer(cp.left, cp.right)
    h = cat.lift_through_mono(e, m)
    return h is not None and cat.is_iso(h)


def is_regular_epi(cat: Category, f) -> bool:
    """Dual criterion: f is regular epi iff it coequalizes its kernel pair."""
    if not cat.is_epi(f):
        return False
    kp = cat.pullback(Cospan(f, f)).square
    q = cat.coequalizer(kp.p, kp.q)
    h = cat.colift_through_epi(q, f)
    return h is not None and cat.is_iso(h)


def paste_horizontal(cat: Category, left: Square, right: Square) -> Square:
    """Compose two squares side by side (right.q must equal left.f)."""
    if right.q != left.f:
        raise TypeMismatchError("squares do not share the middle edge")
    return Square(cat.compose(right.p, left.p), left.q,
                  right.f, cat.compose(right.g, left.g))


def pasting_check(cat: Category, inner: Square, outer_ext: Square) -> bool:
    """Concrete evaluation of the pullback pasting lemma on a pair of squares.

    Returns whether both directions hold on this data: pasting two pullbacks
    yields a pullback, and a pullback pasted against a right pullback forces
    the left square to be one.
    """
    pasted = paste_horizontal(cat, inner, outer_ext)
    left_pb = is_pullback(cat, inner)
    right_pb = is_pullback(cat, outer_ext)
    pasted_pb = is_pullback(cat, pasted)
    forward = not (left_pb and right_pb) or pasted_pb
    backward = not (pasted_pb and right_pb) or left_pb
    return forward and backward


def mono_by_cancellation(cat: Category, f, max_probe: int = 2,
                         budget: int = DEFAULT_BUDGET) -> bool:
    """Bounded left-cancellation check for mono (cross-check, not decider)."""
    for p in cat.probe_objects(max_probe):
        seen = {}
        for g in cat.enumerate_homs(p, f.source, budget):
            key = cat.compose(f, g)
            if key in seen and seen[key] != g:
                return False
            seen[key] = g
    return True


def epi_by_cancellation(cat: Category, f, max_probe: int = 2,
                        budget: int = DEFAULT_BUDGET) -> bool:
    """Bounded right-cancellation check for epi (cross-check, not decider)."""
    for p in cat.probe_objects(max_probe):
        seen = {}
        for g in cat.enumerate_homs(f.target, p, budget):
            key = cat.compose(g, f)
            if key in seen and seen[key] != g:
                return False
            seen[key] = g
    return True
