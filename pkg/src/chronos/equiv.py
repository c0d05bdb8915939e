"""Brute-force equivalence harness for the TOP-to-BOT rewrite.

Random small models and formulas are generated from a seed; for each case
the TOP denotation of the source formula is compared against the BOT
denotation of its translation over the derived BOT model.  Disagreements
are shrunk greedily (drop conjuncts, unwrap operators, shrink the
timeline, shrink periods) and reported one per line.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, replace

from . import bot, top
from .core import (
    COMPLETE,
    GAPPY,
    Const,
    EtaMapping,
    ObjectDomain,
    Partitioning,
    Period,
    Timeline,
    TopModel,
    Var,
    derive_bot_model,
    validate_model,
)
from .modelfile import format_model
from .translate import translate


@dataclass(frozen=True)
class GenParams:
    """Upper bounds for the random case generator; all draws stay below them."""

    timeline_size: int = 8
    atom_count: int = 3
    pred_count: int = 3
    max_arity: int = 2
    max_depth: int = 4
    max_periods_per_tuple: int = 2
    max_free_vars: int = 3
    seed: int = 0

    def __post_init__(self):
        bounds = [
            ("timeline_size", self.timeline_size, 10),
            ("atom_count", self.atom_count, 4),
            ("pred_count", self.pred_count, 3),
            ("max_arity", self.max_arity, 2),
            ("max_depth", self.max_depth, 4),
            ("max_periods_per_tuple", self.max_periods_per_tuple, 2),
            ("max_free_vars", self.max_free_vars, 3),
        ]
        for name, value, cap in bounds:
            if not 1 <= value <= cap:
                raise ValueError(f"{name} must be in 1..{cap}, got {value}")


@dataclass(frozen=True)
class Verdict:
    top_value: bool
    bot_value: bool
    #: (assignment, et) from the TOP search, or a BOT assignment, when a
    #: side is true; None when both sides are false.
    witness: object = None

    @property
    def agree(self) -> bool:
        return self.top_value == self.bot_value


# ---------------------------------------------------------------------------
# Generators


def _random_maximal_periods(rng, size, cap):
    """1..cap periods, left to right, separated by gaps of at least one point."""
    periods = []
    cursor = 0
    for _ in range(rng.randint(1, cap)):
        if cursor > size - 1:
            break
        lo = rng.randint(cursor, size - 1)
        hi = rng.randint(lo, size - 1)
        periods.append(Period(lo, hi))
        cursor = hi + 2
    return frozenset(periods)


def _random_tiling(rng, size):
    blocks = []
    lo = 0
    while lo < size:
        hi = rng.randint(lo, size - 1)
        blocks.append(Period(lo, hi))
        lo = hi + 1
    return blocks


def gen_model(params: GenParams, rng=None) -> TopModel:
    """A valid random model with at least one complete and one gappy
    partitioning and a non-empty extension for every predicate."""
    if rng is None:
        rng = random.Random(params.seed)
    size = rng.randint(min(3, params.timeline_size), params.timeline_size)
    timeline = Timeline(size)

    atoms = tuple(f"obj{i}" for i in range(rng.randint(1, params.atom_count)))
    consts = {a: a for a in atoms}
    for i in range(rng.randint(1, 2)):
        lo = rng.randint(0, size - 1)
        consts[f"t{i}"] = Period(lo, rng.randint(lo, size - 1))

    preds = {}
    culms = {}
    for k in range(rng.randint(1, params.pred_count)):
        arity = rng.randint(1, params.max_arity)
        ext = {}
        flags = {}
        for _ in range(rng.randint(1, 2)):
            args = tuple(rng.choice(atoms) for _ in range(arity))
            if args in ext:
                continue
            ext[args] = _random_maximal_periods(
                rng, size, params.max_periods_per_tuple
            )
            flags[args] = rng.random() < 0.5
        preds[(f"q{k}", arity)] = ext
        culms[(f"q{k}", arity)] = flags

    cparts = {"cp0": Partitioning(COMPLETE, tuple(_random_tiling(rng, size)))}

    tiling = _random_tiling(rng, size)
    if len(tiling) >= 2:
        keep = max(1, rng.randint(1, len(tiling) - 1))
        kept = rng.sample(tiling, keep)
    else:
        kept = [Period(0, 0)] if size >= 2 else []
    gparts = {"gp0": Partitioning(GAPPY, tuple(kept))}

    model = TopModel(
        timeline=timeline,
        domain=ObjectDomain(timeline, atoms),
        consts=consts,
        preds=preds,
        culms=culms,
        cparts=cparts,
        gparts=gparts,
    )
    violations = validate_model(model)
    if violations:  # generator bug, not caller error
        raise AssertionError(f"generated invalid model: {violations}")
    return model


_OP_WEIGHTS = [
    ("past", 20),
    ("at", 15),
    ("literal", 14),
    ("and", 8),
    ("pres", 7),
    ("perf", 6),
    ("culm", 6),
    ("fills", 5),
    ("before", 5),
    ("after", 5),
    ("ntense", 5),
    ("for", 4),
    ("part", 3),
]


def gen_formula(params: GenParams, model: TopModel, rng=None):
    """A random grammar-valid formula over the model's vocabulary, biased
    toward Past/At/literals so satisfiable cases stay frequent."""
    if rng is None:
        rng = random.Random(params.seed)
    pool = [f"x{i}" for i in range(rng.randint(1, params.max_free_vars))]
    preds = sorted(model.preds)
    atom_consts = sorted(n for n, v in model.consts.items() if isinstance(v, str))
    period_consts = sorted(
        n for n, v in model.consts.items() if isinstance(v, Period)
    )
    part_names = sorted(model.cparts) + sorted(model.gparts)
    cpart_names = sorted(model.cparts)
    ops, weights = zip(*_OP_WEIGHTS)

    def var():
        return Var(rng.choice(pool))

    def literal():
        functor, arity = rng.choice(preds)
        args = tuple(
            var() if rng.random() < 0.3 else Const(rng.choice(atom_consts))
            for _ in range(arity)
        )
        return top.Literal(functor, args)

    def anchor():
        if rng.random() < 0.25:
            return var()
        return Const(rng.choice(period_consts))

    def build(depth):
        if depth <= 1:
            if rng.random() < 0.15:
                return top.Part(rng.choice(part_names), var())
            return literal()
        op = rng.choices(ops, weights=weights)[0]
        if op == "literal":
            return literal()
        if op == "part":
            return top.Part(rng.choice(part_names), var())
        if op == "and":
            return top.And(build(depth - 1), build(depth - 1))
        if op == "past":
            return top.Past(var(), build(depth - 1))
        if op == "perf":
            return top.Perf(var(), build(depth - 1))
        if op == "pres":
            return top.Pres(build(depth - 1))
        if op == "culm":
            return top.Culm(literal())
        if op == "at":
            return top.At(anchor(), build(depth - 1))
        if op == "before":
            return top.Before(anchor(), build(depth - 1))
        if op == "after":
            return top.After(anchor(), build(depth - 1))
        if op == "fills":
            return top.Fills(build(depth - 1))
        if op == "ntense":
            if rng.random() < 0.4:
                return top.Ntense(None, build(depth - 1))
            return top.Ntense(var(), build(depth - 1))
        return top.For(rng.choice(cpart_names), rng.randint(1, 2), build(depth - 1))

    return build(rng.randint(1, params.max_depth))


def gen_bot_formula(rng):
    """A random grammar-valid BOT formula over a fixed small vocabulary;
    used for parser round-trip checks, so satisfiability is irrelevant."""
    arities = {}

    def term(depth):
        # bare TermRef is not canonical here: in a term position the parser
        # yields the constant or variable itself
        choice = rng.randrange(6 if depth > 0 else 2)
        if choice == 0:
            return Var(f"x{rng.randrange(3)}")
        if choice == 1:
            return Const(f"c{rng.randrange(3)}")
        if choice == 2:
            return point(depth - 1)
        return structural_period(depth - 1)

    def point(depth):
        choice = rng.randrange(6 if depth > 0 else 3)
        if choice == 0:
            return bot.BEG
        if choice == 1:
            return bot.NOW
        if choice == 2:
            return bot.END
        if choice == 3:
            return bot.Succ(point(depth - 1))
        if choice == 4:
            return bot.Earliest(period(depth - 1))
        return bot.Latest(period(depth - 1))

    def structural_period(depth):
        if depth > 0 and rng.random() < 0.4:
            return bot.Intersect(period(depth - 1), period(depth - 1))
        return bot.Interval(
            point(depth - 1), point(depth - 1), rng.random() < 0.5,
            rng.random() < 0.5,
        )

    def period(depth):
        if rng.randrange(3) == 0:
            return bot.TermRef(
                Var(f"x{rng.randrange(3)}")
                if rng.random() < 0.5
                else Const(f"c{rng.randrange(3)}")
            )
        return structural_period(depth)

    def atom():
        kind = rng.randrange(6)
        if kind == 0:
            functor = f"q{rng.randrange(3)}"
            arity = arities.setdefault(functor, rng.randint(1, 3))
            return bot.Literal(functor, tuple(term(2) for _ in range(arity)))
        if kind == 1:
            return bot.Subper(period(2), period(2))
        if kind == 2:
            return bot.Eq(term(2), term(2))
        if kind == 3:
            return bot.IsPeriod(term(2))
        if kind == 4:
            return bot.InPart(f"p{rng.randrange(2)}", term(2))
        return bot.Prec(point(2), point(2))

    f = atom()
    for _ in range(rng.randrange(3)):
        f = bot.And(f, atom())
    return f


# ---------------------------------------------------------------------------
# Checking


def check_equivalence(
    m: TopModel, st: int, f, *, eta: EtaMapping | None = None,
    mutation: str | None = None,
) -> Verdict:
    """Compare the TOP denotation of f with the BOT denotation of its
    translation over the derived BOT model."""
    eta = eta if eta is not None else EtaMapping()
    translated = translate(f, eta=eta, mutation=mutation)
    derived = derive_bot_model(m, eta)
    top_witness = top.denot_top_witness(m, st, f)
    bot_witness = bot.denot_bot_witness(derived, st, translated)
    witness = top_witness if top_witness is not None else bot_witness
    return Verdict(top_witness is not None, bot_witness is not None, witness)


def model_digest(m: TopModel, speech: int) -> str:
    text = format_model(m, speech)
    return hashlib.sha256(text.encode()).hexdigest()[:12]


# ---------------------------------------------------------------------------
# Shrinking


def _formula_shrinks(f):
    """All formulas one reduction step smaller: drop a conjunct, unwrap an
    operator, or lower a For quantity."""
    t = type(f)
    out = []
    if t in (top.Literal, top.Part):
        return out
    if t is top.And:
        out.append(f.left)
        out.append(f.right)
        out.extend(top.And(l2, f.right) for l2 in _formula_shrinks(f.left))
        out.extend(top.And(f.left, r2) for r2 in _formula_shrinks(f.right))
        return out
    if t is top.Culm:
        out.append(f.body)
        return out
    out.append(f.body)
    if t is top.For and f.qty > 1:
        out.append(top.For(f.cpart, f.qty - 1, f.body))
    rebuilt = {
        top.Pres: lambda b: top.Pres(b),
        top.Fills: lambda b: top.Fills(b),
        top.Past: lambda b: top.Past(f.var, b),
        top.Perf: lambda b: top.Perf(f.var, b),
        top.At: lambda b: top.At(f.term, b),
        top.Before: lambda b: top.Before(f.term, b),
        top.After: lambda b: top.After(f.term, b),
        top.Ntense: lambda b: top.Ntense(f.var, b),
        top.For: lambda b: top.For(f.cpart, f.qty, b),
    }[t]
    out.extend(rebuilt(b2) for b2 in _formula_shrinks(f.body))
    return out


def _clamp(p: Period, last: int):
    if p.lo > last:
        return None
    return Period(p.lo, min(p.hi, last))


def _drop_mergeable(periods):
    kept = []
    for p in sorted(periods):
        if kept and p.lo <= kept[-1].hi + 1:
            continue
        kept.append(p)
    return frozenset(kept)


def _shrink_timeline(m: TopModel, st: int):
    """The same model on a timeline one point shorter, or None."""
    size = m.timeline.size - 1
    if size < 1:
        return None
    last = size - 1
    timeline = Timeline(size)
    consts = {}
    for name, v in m.consts.items():
        if isinstance(v, Period):
            v = _clamp(v, last)
            if v is None:
                continue
        consts[name] = v
    preds = {}
    for key, ext in m.preds.items():
        new_ext = {}
        for args, ps in ext.items():
            clamped = [q for q in (_clamp(p, last) for p in ps) if q is not None]
            if clamped:
                new_ext[args] = _drop_mergeable(clamped)
        preds[key] = new_ext
    cparts = {}
    for name, part in m.cparts.items():
        blocks = []
        for b in part.blocks:
            c = _clamp(b, last)
            if c is not None:
                blocks.append(c)
        cparts[name] = Partitioning(COMPLETE, tuple(blocks))
    gparts = {}
    for name, part in m.gparts.items():
        blocks = [c for c in (_clamp(b, last) for b in part.blocks) if c]
        covered = sum(b.hi - b.lo + 1 for b in blocks)
        if covered >= size:
            blocks = blocks[:-1]
        gparts[name] = Partitioning(GAPPY, tuple(blocks))
    model = TopModel(
        timeline=timeline,
        domain=ObjectDomain(timeline, m.domain.atoms),
        consts=consts,
        preds=preds,
        culms={k: dict(v) for k, v in m.culms.items()},
        cparts=cparts,
        gparts=gparts,
    )
    return model, min(st, last)


def _period_shrinks(m: TopModel):
    """Models with one extension period or period constant one point shorter."""
    for key, ext in m.preds.items():
        for args, ps in ext.items():
            for p in sorted(ps):
                for smaller in (
                    [Period(p.lo + 1, p.hi), Period(p.lo, p.hi - 1)]
                    if p.lo < p.hi
                    else []
                ):
                    new_ps = frozenset(q for q in ps if q != p) | {smaller}
                    new_ext = dict(ext)
                    new_ext[args] = new_ps
                    new_preds = dict(m.preds)
                    new_preds[key] = new_ext
                    yield replace(m, preds=new_preds)
    for name, v in m.consts.items():
        if isinstance(v, Period) and v.lo < v.hi:
            for smaller in (Period(v.lo + 1, v.hi), Period(v.lo, v.hi - 1)):
                new_consts = dict(m.consts)
                new_consts[name] = smaller
                yield replace(m, consts=new_consts)


def shrink_counterexample(
    m: TopModel, st: int, f, *, eta=None, mutation=None
):
    """Greedy shrink preserving the disagreement; returns (model, st, formula)."""

    def disagrees(m2, st2, f2):
        if validate_model(m2):
            return False
        try:
            return not check_equivalence(
                m2, st2, f2, eta=eta, mutation=mutation
            ).agree
        except Exception:
            return False

    improved = True
    while improved:
        improved = False
        for f2 in _formula_shrinks(f):
            if disagrees(m, st, f2):
                f = f2
                improved = True
                break
        if improved:
            continue
        smaller = _shrink_timeline(m, st)
        if smaller is not None and disagrees(smaller[0], smaller[1], f):
            m, st = smaller
            improved = True
            continue
        for m2 in _period_shrinks(m):
            if disagrees(m2, st, f):
                m = m2
                improved = True
                break
    return m, st, f


# ---------------------------------------------------------------------------
# Campaign


@dataclass(frozen=True)
class Disagreement:
    case: int
    sub_seed: str
    st: int
    formula: str
    model_digest: str
    top_value: bool
    bot_value: bool
    shrunk_st: int
    shrunk_formula: str
    shrunk_model_digest: str

    def line(self) -> str:
        return (
            f"disagree case={self.case} seed={self.sub_seed} st={self.st}"
            f" top={str(self.top_value).lower()}"
            f" bot={str(self.bot_value).lower()}"
            f" model={self.model_digest} formula={self.formula}"
            f" shrunk_st={self.shrunk_st}"
            f" shrunk_model={self.shrunk_model_digest}"
            f" shrunk_formula={self.shrunk_formula}"
        )


@dataclass(frozen=True)
class CampaignReport:
    params: GenParams
    cases: int
    mutation: str | None
    disagreements: tuple

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def lines(self) -> list:
        out = [d.line() for d in self.disagreements]
        out.append(f"cases={self.cases} disagreements={len(self.disagreements)}")
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def _pick_st(rng, size):
    # interior points twice as likely, so past and future are usually non-empty
    candidates = list(range(size)) + list(range(1, size - 1))
    return rng.choice(candidates)


def gen_case(params: GenParams, index: int):
    """Deterministic (model, st, formula) triple for one campaign case."""
    rng = random.Random(f"{params.seed}/case/{index}")
    m = gen_model(params, rng)
    st = _pick_st(rng, m.timeline.size)
    f = gen_formula(params, m, rng)
    return m, st, f


def run_campaign(
    params: GenParams, cases: int, *, mutation: str | None = None,
    eta: EtaMapping | None = None,
) -> CampaignReport:
    """Check `cases` independent seeded cases; disagreements come back shrunk."""
    found = []
    for i in range(cases):
        m, st, f = gen_case(params, i)
        verdict = check_equivalence(m, st, f, eta=eta, mutation=mutation)
        if verdict.agree:
            continue
        sm, sst, sf = shrink_counterexample(m, st, f, eta=eta, mutation=mutation)
        found.append(
            Disagreement(
                case=i,
                sub_seed=f"{params.seed}/case/{i}",
                st=st,
                formula=top.print_top(f),
                model_digest=model_digest(m, st),
                top_value=verdict.top_value,
                bot_value=verdict.bot_value,
                shrunk_st=sst,
                shrunk_formula=top.print_top(sf),
                shrunk_model_digest=model_digest(sm, sst),
            )
        )
    return CampaignReport(params, cases, mutation, tuple(found))
