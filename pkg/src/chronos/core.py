"""Temporal ontology and interpretation structures shared by TOP and BOT.

Time is discrete, bounded, and linear: a timeline of ``size`` points is the
index range ``0 .. size-1`` ordered by numeric ``<``.  A period is a
non-empty convex set of points, realized as a closed integer interval
``[lo, hi]``.  The empty point set and the undefined point are first-class
sentinel values (``EMPTY``, ``UNDEFINED``) rather than errors, because the
evaluators of both languages propagate them.

Everything in this module is immutable after construction and safe to
share across threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


class _Empty:
    """The empty set of time-points (a localisation window can be empty)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Empty"


class _Undefined:
    """Out-of-range point, e.g. the successor of the last time-point."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Undefined"


EMPTY = _Empty()
UNDEFINED = _Undefined()


@dataclass(frozen=True, order=True, slots=True)
class Period:
    """Closed integer interval [lo, hi]; non-empty by construction."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 0 or self.lo > self.hi:
            raise ValueError(f"invalid period [{self.lo},{self.hi}]")

    def __contains__(self, t: int) -> bool:
        return self.lo <= t <= self.hi

    def points(self) -> range:
        return range(self.lo, self.hi + 1)

    def __str__(self):
        return f"[{self.lo},{self.hi}]"


PointSet = Union[Period, _Empty]

#: An object is an atom (its name) or a period; PERIODS is a subset of OBJS.
Object = Union[str, Period]

#: Variable assignment: variable name -> object.
Assignment = dict


@dataclass(frozen=True, slots=True)
class Const:
    """Constant symbol; both languages draw from the same constant class."""

    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Var:
    """Variable symbol, written ?name; shared by both languages."""

    name: str

    def __str__(self):
        return "?" + self.name


def intersect(a: PointSet, b: PointSet) -> PointSet:
    """Set intersection of two point sets; convexity is preserved."""
    if a is EMPTY or b is EMPTY:
        return EMPTY
    lo = max(a.lo, b.lo)
    hi = min(a.hi, b.hi)
    return Period(lo, hi) if lo <= hi else EMPTY


def subper(a: PointSet, b: PointSet) -> bool:
    """True iff a and b are both periods and a is a subperiod of b."""
    if a is EMPTY or b is EMPTY:
        return False
    return b.lo <= a.lo and a.hi <= b.hi


def proper_subper(a: PointSet, b: PointSet) -> bool:
    """True iff a and b are periods and a is a proper subperiod of b."""
    return subper(a, b) and a != b


def mergeable(a: Period, b: Period) -> bool:
    """True iff the union of a and b is itself convex (overlap or abut)."""
    return max(a.lo, b.lo) <= min(a.hi, b.hi) + 1


def mxlpers(periods) -> set:
    """The maximal periods of a set: members not properly contained in another."""
    ps = set(periods)
    return {p for p in ps if not any(proper_subper(p, q) for q in ps)}


@dataclass(frozen=True, slots=True)
class Timeline:
    """Bounded discrete linear time: points 0 .. size-1."""

    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("timeline needs at least one point")

    @property
    def t_last(self) -> int:
        return self.size - 1

    def full(self) -> Period:
        return Period(0, self.size - 1)

    def __contains__(self, t: int) -> bool:
        return 0 <= t < self.size

    def next(self, t: int):
        return t + 1 if t < self.size - 1 else UNDEFINED

    def prev(self, t: int):
        return t - 1 if t > 0 else UNDEFINED

    def points(self) -> range:
        return range(self.size)

    def periods(self) -> list:
        """All periods over the timeline, ordered by (lo, hi)."""
        return [
            Period(lo, hi)
            for lo in range(self.size)
            for hi in range(lo, self.size)
        ]


COMPLETE = "complete"
GAPPY = "gappy"


@dataclass(frozen=True)
class Partitioning:
    """Pairwise-disjoint periods; complete ones tile the whole timeline.

    Blocks are kept sorted by lo.  Whether the blocks actually cover the
    timeline (complete) or leave it properly uncovered (gappy) depends on
    the timeline and is checked by validate_model.
    """

    kind: str
    blocks: tuple

    def __post_init__(self):
        if self.kind not in (COMPLETE, GAPPY):
            raise ValueError(f"unknown partitioning kind {self.kind!r}")
        ordered = tuple(sorted(self.blocks))
        for a, b in zip(ordered, ordered[1:]):
            if b.lo <= a.hi:
                raise ValueError(f"overlapping blocks {a} and {b}")
        object.__setattr__(self, "blocks", ordered)

    def __contains__(self, p) -> bool:
        return isinstance(p, Period) and p in self.blocks

    def starting_at(self, lo: int):
        """The unique block whose first point is lo, or None."""
        for b in self.blocks:
            if b.lo == lo:
                return b
            if b.lo > lo:
                return None
        return None


@dataclass(frozen=True)
class ObjectDomain:
    """Named atoms plus, implicitly, every period over the timeline."""

    timeline: Timeline
    atoms: tuple

    def __post_init__(self):
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("duplicate atom names")

    def objects(self) -> Iterator[Object]:
        """Deterministic enumeration: atoms in declaration order, then periods."""
        yield from self.atoms
        yield from self.timeline.periods()

    def __contains__(self, o) -> bool:
        if isinstance(o, Period):
            return o.hi <= self.timeline.t_last
        return o in self.atoms


@dataclass(frozen=True)
class TopModel:
    """Interpretation structure for TOP formulas.

    preds maps (functor, arity) to extensions: argument tuple -> the set of
    maximal periods where the situation holds.  culms flags whether a
    situation reaches its climax at the last point where it is ongoing.
    Unlisted tuples denote the empty period set / a false culmination flag.
    """

    timeline: Timeline
    domain: ObjectDomain
    consts: dict
    preds: dict
    culms: dict
    cparts: dict
    gparts: dict

    def __post_init__(self):
        if self.domain.timeline != self.timeline:
            raise ValueError("domain built over a different timeline")

    def objects(self) -> Iterator[Object]:
        return self.domain.objects()

    def extension(self, functor: str, arity: int):
        """Extension map for a declared predicate, or None if undeclared."""
        return self.preds.get((functor, arity))

    def culm_flag(self, functor: str, arity: int, args: tuple) -> bool:
        return self.culms.get((functor, arity), {}).get(args, False)

    def partitioning(self, name: str):
        p = self.cparts.get(name)
        return p if p is not None else self.gparts.get(name)


@dataclass(frozen=True)
class BotModel:
    """Interpretation structure for BOT formulas.

    bot_preds maps (functor, arity) to the set of argument tuples on which
    the predicate is true; every other tuple denotes false.
    """

    timeline: Timeline
    domain: ObjectDomain
    consts: dict
    bot_preds: dict
    cparts: dict
    gparts: dict

    def objects(self) -> Iterator[Object]:
        return self.domain.objects()

    def true_tuples(self, functor: str, arity: int):
        return self.bot_preds.get((functor, arity))

    def partitioning(self, name: str):
        p = self.cparts.get(name)
        return p if p is not None else self.gparts.get(name)


@dataclass(frozen=True)
class EtaMapping:
    """Functor renaming scheme for the two derived culmination predicates.

    culm_functor(pi) names the predicate that is true when the situation of
    pi reaches its climax; span_functor(pi) names the predicate relating
    the arguments of pi to the period from the situation's first start to
    its last stop.
    """

    culm_prefix: str = "cmp_"
    span_prefix: str = "max_"

    def culm_functor(self, functor: str) -> str:
        return self.culm_prefix + functor

    def span_functor(self, functor: str) -> str:
        return self.span_prefix + functor


class FunctorCollision(Exception):
    """A derived functor name is already used by the model."""


class EvalError(Exception):
    """A formula refers to something the model or assignment does not supply."""


class UnboundVariable(EvalError):
    pass


class UnknownFunctor(EvalError):
    pass


class UnknownConstant(EvalError):
    pass


class UnknownPartitioning(EvalError):
    pass


@dataclass(frozen=True)
class Violation:
    code: str
    where: str

    def __str__(self):
        return f"{self.code}: {self.where}"


def derive_bot_model(m: TopModel, eta: EtaMapping = EtaMapping()) -> BotModel:
    """Build the BOT interpretation matching a TOP model.

    For each TOP predicate pi of arity n the result defines:
      * (pi, n+1): true on (args..., p) iff p is a listed maximal period;
      * (culm(pi), n): true on args iff the culmination flag is set;
      * (span(pi), n+1): true on (args..., p) iff the situation holds
        somewhere and p runs from its first start to its last stop.
    """
    functors = {}
    for f, n in list(m.preds) + list(m.culms):
        functors.setdefault(f, n)
    existing = set(functors)
    for f in functors:
        for image in (eta.culm_functor(f), eta.span_functor(f)):
            if image in existing:
                raise FunctorCollision(
                    f"derived functor {image!r} already used by the model"
                )

    bot_preds = {}
    for f, n in functors.items():
        ext = m.preds.get((f, n), {})
        flags = m.culms.get((f, n), {})
        base = set()
        span = set()
        for args, ps in ext.items():
            for p in ps:
                base.add(args + (p,))
            if ps:
                hull = Period(min(p.lo for p in ps), max(p.hi for p in ps))
                span.add(args + (hull,))
        culm = {args for args, v in flags.items() if v}
        bot_preds[(f, n + 1)] = frozenset(base)
        bot_preds[(eta.span_functor(f), n + 1)] = frozenset(span)
        bot_preds[(eta.culm_functor(f), n)] = frozenset(culm)

    return BotModel(
        timeline=m.timeline,
        domain=m.domain,
        consts=dict(m.consts),
        bot_preds=bot_preds,
        cparts=dict(m.cparts),
        gparts=dict(m.gparts),
    )


def _check_partitioning(name, part, timeline, expected_kind, out):
    where = f"{expected_kind[0]}part {name}"
    if part.kind != expected_kind:
        out.append(Violation("KindMismatch", where))
    for b in part.blocks:
        if b.hi > timeline.t_last:
            out.append(Violation("BadPeriodBounds", f"{where} block {b}"))
            return
    covered = sum(b.hi - b.lo + 1 for b in part.blocks)
    tiles = covered == timeline.size and all(
        b.lo == a.hi + 1 for a, b in zip(part.blocks, part.blocks[1:])
    ) and (not part.blocks or part.blocks[0].lo == 0)
    if expected_kind == COMPLETE and not tiles:
        out.append(Violation("IncompletePartitioning", where))
    if expected_kind == GAPPY and covered >= timeline.size:
        out.append(Violation("GappyCoversAll", where))


def validate_model(m: TopModel) -> list:
    """All invariant violations of a TOP model; empty list means valid."""
    out = []
    tl = m.timeline

    for name, obj in m.consts.items():
        if obj not in m.domain:
            out.append(Violation("UnknownObject", f"constant {name}"))

    arities = {}
    for f, n in list(m.preds) + list(m.culms):
        if arities.setdefault(f, n) != n:
            out.append(Violation("InconsistentArity", f"functor {f}"))
        if n < 1:
            out.append(Violation("BadArity", f"functor {f}/{n}"))

    for (f, n), ext in m.preds.items():
        for args, ps in ext.items():
            if len(args) != n:
                out.append(Violation("BadArity", f"{f} tuple {args}"))
                continue
            for o in args:
                if o not in m.domain:
                    out.append(Violation("UnknownObject", f"{f}{args}"))
            ordered = sorted(ps)
            for p in ordered:
                if p.hi > tl.t_last:
                    out.append(Violation("BadPeriodBounds", f"{f}{args} {p}"))
            for a, b in zip(ordered, ordered[1:]):
                if mergeable(a, b):
                    out.append(
                        Violation("MergeablePeriods", f"{f}{args}: {a} and {b}")
                    )

    for name, part in m.cparts.items():
        _check_partitioning(name, part, tl, COMPLETE, out)
    for name, part in m.gparts.items():
        _check_partitioning(name, part, tl, GAPPY, out)

    return out
