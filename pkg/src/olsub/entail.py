"""Entailment of `S <= T` under ground axioms, by Horn-clause proof search.

Goals are sequents: unordered pairs of side-annotated terms, {S^L, T^R}
meaning S <= T. Proof search is cut-free: a restricted transitivity rule
(AxiomCut) fires only through declared axioms, so every derivation mentions
only subterms of the goal and axioms. Working backward from the goal, each
reachable sequent contributes one Horn clause per rule instance that could
conclude it; unit propagation over those clauses then decides provability in
time linear in their total size, which is O(n^2 * (1 + |axioms|)) clauses
overall (the constant is about 16 on meet-of-joins inputs, see tests).

Two rule sets are supported. Mode "ol" is the full ortholattice system:
negation rules, a Replace rule (from {G,G} conclude {G,D}), constructor
monotonicity, and AxiomCut. Mode "bl" is the bounded-lattice restriction
used during normalization: sequents keep exactly one term per side, there is
no Replace and no negation rule, and negated variables and dual symbols are
opaque atoms.

Provability is decided, not approximated: a negative verdict means the
inequality fails in some ortholattice model of the axioms.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import NegationPresent, NotProvable
from .syntax import AxiomSet
from .terms import (
    APP,
    BOT,
    JOIN,
    MEET,
    NEGVAR,
    NOT,
    TOP,
    TermId,
    TermUniverse,
    Variance,
)

L = "L"
R = "R"

# Integer encodings: an annotated term packs (side, term id) so that integer
# order equals (side, TermId) order; a sequent packs its two annotated terms
# smallest-first, making the pair canonically unordered.
_TID_BITS = 30
_SIDE_BIT = 1 << _TID_BITS
_ANN_BITS = _TID_BITS + 1


def _ann(tid: int, side: int) -> int:
    return (side << _TID_BITS) | tid


def _ann_parts(a: int) -> tuple[int, int]:
    return a & (_SIDE_BIT - 1), a >> _TID_BITS


def _seq(a: int, b: int) -> int:
    return (a << _ANN_BITS) | b if a <= b else (b << _ANN_BITS) | a


def _seq_parts(s: int) -> tuple[int, int]:
    return s >> _ANN_BITS, s & ((1 << _ANN_BITS) - 1)


# Rule tags.
HYP = "Hyp"
LEFT_BOT = "LeftBot"
RIGHT_TOP = "RightTop"
LEFT_AND = "LeftAnd"
RIGHT_AND = "RightAnd"
LEFT_OR = "LeftOr"
RIGHT_OR = "RightOr"
LEFT_NOT = "LeftNot"
RIGHT_NOT = "RightNot"
REPLACE = "Replace"
F_RULE = "F"
AXIOM_CUT = "AxiomCut"
AXIOM = "Axiom"


@dataclass(frozen=True)
class AnnotatedTerm:
    term: TermId
    side: str  # L or R


@dataclass(frozen=True)
class Sequent:
    """Unordered pair (multiset of size two) of annotated terms, stored
    canonically: smallest first by (side, term id)."""

    a: AnnotatedTerm
    b: AnnotatedTerm

    @staticmethod
    def of(t1: TermId, side1: str, t2: TermId, side2: str) -> "Sequent":
        x = AnnotatedTerm(t1, side1)
        y = AnnotatedTerm(t2, side2)
        if (x.side, x.term) <= (y.side, y.term):
            return Sequent(x, y)
        return Sequent(y, x)

    @staticmethod
    def goal(s: TermId, t: TermId) -> "Sequent":
        return Sequent.of(s, L, t, R)

    def elements(self) -> tuple[AnnotatedTerm, AnnotatedTerm]:
        return (self.a, self.b)


@dataclass(frozen=True)
class HornClause:
    """head <- body, tagged with the proof rule instance that produced it."""

    head: Sequent
    body: tuple[Sequent, ...]
    rule: str
    aux: object = None


@dataclass
class Stats:
    sequents: int
    clauses: int
    steps: int


@dataclass
class Verdict:
    provable: bool
    stats: Stats


@dataclass
class ClauseSet:
    goal: Sequent
    clauses: list[HornClause]
    sequents: int
    mode: str
    axioms: list[tuple[TermId, TermId]] = field(default_factory=list)


@dataclass
class ProofTree:
    sequent: Sequent
    rule: str
    children: list["ProofTree"]
    aux: object = None


def as_pairs(axioms: Union[AxiomSet, Iterable[tuple[TermId, TermId]], None]) -> list:
    if axioms is None:
        return []
    if isinstance(axioms, AxiomSet):
        return list(axioms.pairs)
    return list(axioms)


class Engine:
    """Incremental clause generator and unit propagator over one universe.

    Queries share state: sequents already expanded and facts already derived
    are reused, so a long series of related queries (as the normalizer makes)
    costs little more than the largest one. The axiom set and mode are fixed
    per engine.
    """

    def __init__(self, universe: TermUniverse, axioms=None, mode: str = "ol"):
        if mode not in ("ol", "bl"):
            raise ValueError(f"unknown mode {mode!r}")
        self.u = universe
        self.mode = mode
        self.axioms = []
        for pair in as_pairs(axioms):  # drop exact duplicates, keep order
            if pair not in self.axioms:
                self.axioms.append(pair)
        self._ax_anns = [(_ann(v, 1), _ann(w, 0)) for (v, w) in self.axioms]  # (U^R, V^L)
        self._axiom_of_seq: dict[int, int] = {}
        for i, (v, w) in enumerate(self.axioms):
            self._axiom_of_seq.setdefault(_seq(_ann(v, 0), _ann(w, 1)), i)
        # per-annotated-term record: (templates, unit rule, app symbol, args, variances)
        self._info: dict[int, tuple] = {}
        self._visited: set[int] = set()
        self.clauses: list[tuple] = []  # (head, body tuple, rule, aux)
        self._counters: list[int] = []
        self._watch: dict[int, list[int]] = {}
        self.derived: dict[int, int] = {}  # sequent -> index of first deriving clause
        self._queue: deque = deque()
        self._to_visit: list[int] = []
        self.steps = 0

    # -- clause generation -------------------------------------------------

    def _record(self, ann: int) -> tuple:
        tid = ann & (_SIDE_BIT - 1)
        side = ann >> _TID_BITS
        node = self.u.node(tid)
        kind = node.kind
        ol = self.mode == "ol"
        templates: list[tuple] = []
        unit = None
        symbol_name = None
        args = None
        variances = None
        if kind == MEET:
            if side == 0:
                # dict.fromkeys: duplicate children would yield duplicate clauses
                templates = [
                    (LEFT_AND, i, (_ann(c, 0),))
                    for i, c in enumerate(dict.fromkeys(node.children))
                ]
            else:
                templates = [(RIGHT_AND, None, tuple(_ann(c, 1) for c in node.children))]
        elif kind == JOIN:
            if side == 0:
                templates = [(LEFT_OR, None, tuple(_ann(c, 0) for c in node.children))]
            else:
                templates = [
                    (RIGHT_OR, i, (_ann(c, 1),))
                    for i, c in enumerate(dict.fromkeys(node.children))
                ]
        elif kind == NOT:
            if not ol:
                raise NegationPresent("negation reached the bounded-lattice rule set")
            child = node.children[0]
            templates = [
                (LEFT_NOT if side == 0 else RIGHT_NOT, None, (_ann(child, 1 - side),))
            ]
        elif kind == NEGVAR:
            if ol:
                v = self.u.var(node.name)
                templates = [
                    (LEFT_NOT if side == 0 else RIGHT_NOT, None, (_ann(v, 1 - side),))
                ]
        elif kind == APP:
            symbol_name = node.symbol.name
            args = node.children
            variances = node.symbol.variances
            if ol and node.symbol.dual_of is not None:
                original = self.u.app(self.u.symbols[node.symbol.dual_of], node.children)
                templates = [
                    (LEFT_NOT if side == 0 else RIGHT_NOT, None, (_ann(original, 1 - side),))
                ]
        elif kind == BOT and side == 0:
            unit = LEFT_BOT
        elif kind == TOP and side == 1:
            unit = RIGHT_TOP
        record = (tuple(templates), unit, symbol_name, args, variances)
        self._info[ann] = record
        return record

    def _expand(self, s: int) -> None:
        ax = self._axiom_of_seq.get(s)
        if ax is not None:
            # An axiom sequent is closed outright; no further expansion.
            self._add_clause(s, (), AXIOM, ax)
            return
        info = self._info
        a = s >> _ANN_BITS
        b = s & ((1 << _ANN_BITS) - 1)
        ra = info.get(a)
        if ra is None:
            ra = self._record(a)
        rb = info.get(b)
        if rb is None:
            rb = self._record(b)
        if b - a == _SIDE_BIT:  # same term, sides L and R
            self._add_clause(s, (), HYP, None)
        if ra[1] is not None:
            self._add_clause(s, (), ra[1], None)
        if rb[1] is not None and a != b:
            # bot^L / top^R are unique annotated terms, so ra[1] != rb[1] here
            self._add_clause(s, (), rb[1], None)
        if self.mode == "ol" and a != b:
            self._add_clause(s, ((a << _ANN_BITS) | a,), REPLACE, None)
            self._add_clause(s, ((b << _ANN_BITS) | b,), REPLACE, None)
        for rule, aux, comps in ra[0]:
            self._add_clause(
                s,
                tuple((c << _ANN_BITS) | b if c <= b else (b << _ANN_BITS) | c for c in comps),
                rule,
                aux,
            )
        if a != b:
            for rule, aux, comps in rb[0]:
                self._add_clause(
                    s,
                    tuple(
                        (c << _ANN_BITS) | a if c <= a else (a << _ANN_BITS) | c
                        for c in comps
                    ),
                    rule,
                    aux,
                )
        if (
            ra[2] is not None
            and ra[2] == rb[2]
            and a < _SIDE_BIT <= b  # one L, one R
        ):
            body: list[int] = []
            for sl, tr, v in zip(ra[3], rb[3], ra[4]):
                if v is Variance.COVARIANT:
                    body.append(_seq(sl, tr | _SIDE_BIT))
                elif v is Variance.CONTRAVARIANT:
                    body.append(_seq(tr, sl | _SIDE_BIT))
                else:
                    body.append(_seq(sl, tr | _SIDE_BIT))
                    body.append(_seq(tr, sl | _SIDE_BIT))
            self._add_clause(s, tuple(body), F_RULE, ra[2])
        for i, (u_r, v_l) in enumerate(self._ax_anns):
            self._add_clause(s, (_seq(a, u_r), _seq(v_l, b)), AXIOM_CUT, i)
            if a != b:
                self._add_clause(s, (_seq(b, u_r), _seq(v_l, a)), AXIOM_CUT, i)

    def _add_clause(self, head: int, body: tuple, rule: str, aux) -> None:
        clauses = self.clauses
        ci = len(clauses)
        clauses.append((head, body, rule, aux))
        need = 0
        derived = self.derived
        watch = self._watch
        to_visit = self._to_visit
        for lit in body:
            if lit not in derived:
                wl = watch.get(lit)
                if wl is None:
                    watch[lit] = [ci]
                else:
                    wl.append(ci)
                need += 1
            to_visit.append(lit)
        self._counters.append(need)
        if need == 0 and head not in derived:
            derived[head] = ci
            self._queue.append(head)

    def _ensure(self, s: int) -> None:
        stack = self._to_visit
        stack.append(s)
        visited = self._visited
        expand = self._expand
        while stack:
            cur = stack.pop()
            if cur not in visited:
                visited.add(cur)
                expand(cur)

    def _run(self) -> None:
        queue = self._queue
        watch = self._watch
        counters = self._counters
        clauses = self.clauses
        derived = self.derived
        steps = self.steps
        while queue:
            s = queue.popleft()
            for ci in watch.pop(s, ()):
                counters[ci] -= 1
                steps += 1
                if counters[ci] == 0:
                    head = clauses[ci][0]
                    if head not in derived:
                        derived[head] = ci
                        queue.append(head)
        self.steps = steps

    # -- public queries ----------------------------------------------------

    def query(self, s: TermId, t: TermId) -> bool:
        """Whether s <= t is provable under this engine's axioms."""
        goal = _seq(_ann(s, 0), _ann(t, 1))
        if goal in self.derived:
            return True
        self._ensure(goal)
        self._run()
        return goal in self.derived

    def query_sequent(self, t1: TermId, side1: str, t2: TermId, side2: str) -> bool:
        goal = _seq(_ann(t1, 0 if side1 == L else 1), _ann(t2, 0 if side2 == L else 1))
        if goal not in self.derived:
            self._ensure(goal)
            self._run()
        return goal in self.derived

    def stats(self) -> Stats:
        return Stats(len(self._visited), len(self.clauses), self.steps)


# ----------------------------------------------------------------------
# one-shot operations


def check(
    universe: TermUniverse,
    s: TermId,
    t: TermId,
    axioms=None,
    mode: str = "ol",
) -> Verdict:
    """Decide s <= t under the axioms. Complete: `provable=False` is definitive."""
    engine = Engine(universe, axioms, mode)
    provable = engine.query(s, t)
    return Verdict(provable, engine.stats())


def _to_sequent(s: int) -> Sequent:
    a, b = _seq_parts(s)
    ta, sa = _ann_parts(a)
    tb, sb = _ann_parts(b)
    return Sequent(AnnotatedTerm(ta, L if sa == 0 else R), AnnotatedTerm(tb, L if sb == 0 else R))


def build_clauses(
    universe: TermUniverse,
    goal: Union[Sequent, tuple[TermId, TermId]],
    axioms=None,
    mode: str = "ol",
) -> ClauseSet:
    """Generate, backward from the goal, every clause whose head is reachable.

    A pair `(s, t)` is taken as the goal {s^L, t^R}. Each sequent is expanded
    exactly once; every clause corresponds to one rule instance concluding it.
    """
    if isinstance(goal, tuple):
        goal = Sequent.goal(*goal)
    engine = Engine(universe, axioms, mode)
    g = _seq(
        _ann(goal.a.term, 0 if goal.a.side == L else 1),
        _ann(goal.b.term, 0 if goal.b.side == L else 1),
    )
    engine._ensure(g)
    pairs = engine.axioms
    clauses = [
        HornClause(
            _to_sequent(head),
            tuple(_to_sequent(x) for x in body),
            rule,
            pairs[aux] if rule in (AXIOM_CUT, AXIOM) else aux,
        )
        for (head, body, rule, aux) in engine.clauses
    ]
    return ClauseSet(goal, clauses, len(engine._visited), mode, list(pairs))


def _propagate(clause_set: ClauseSet) -> tuple[dict[Sequent, int], int]:
    """Unit propagation over materialized clauses (Dowling-Gallier style).

    Returns the map from each derivable sequent to the clause that first
    derived it, in derivation order, plus the number of propagation steps.
    """
    counters = []
    watch: dict[Sequent, list[int]] = {}
    derived: dict[Sequent, int] = {}
    queue: deque = deque()
    for ci, clause in enumerate(clause_set.clauses):
        counters.append(len(clause.body))
        for lit in clause.body:
            watch.setdefault(lit, []).append(ci)
        if not clause.body and clause.head not in derived:
            derived[clause.head] = ci
            queue.append(clause.head)
    steps = 0
    while queue:
        s = queue.popleft()
        for ci in watch.pop(s, ()):
            counters[ci] -= 1
            steps += 1
            if counters[ci] == 0:
                head = clause_set.clauses[ci].head
                if head not in derived:
                    derived[head] = ci
                    queue.append(head)
    return derived, steps


def propagate(clause_set: ClauseSet, goal: Sequent | None = None) -> Verdict:
    """Decide whether the goal lies in the least model of the clause set."""
    derived, steps = _propagate(clause_set)
    target = goal if goal is not None else clause_set.goal
    return Verdict(
        target in derived,
        Stats(clause_set.sequents, len(clause_set.clauses), steps),
    )


def reconstruct_proof(clause_set: ClauseSet, goal: Sequent | None = None) -> ProofTree:
    """Walk back from the goal through the first-deriving clauses.

    Axiom shortcut clauses are expanded into the equivalent AxiomCut over two
    Hyp leaves, so the resulting tree uses cut-free rules only. Shared
    subderivations are shared as subtrees.
    """
    derived, _ = _propagate(clause_set)
    target = goal if goal is not None else clause_set.goal
    if target not in derived:
        raise NotProvable("goal has no derivation; check the verdict first")
    memo: dict[Sequent, ProofTree] = {}

    def build(s: Sequent) -> ProofTree:
        got = memo.get(s)
        if got is not None:
            return got
        clause = clause_set.clauses[derived[s]]
        if clause.rule == AXIOM:
            v, w = clause.aux
            children = [
                ProofTree(Sequent.of(v, L, v, R), HYP, []),
                ProofTree(Sequent.of(w, L, w, R), HYP, []),
            ]
            tree = ProofTree(s, AXIOM_CUT, children, clause.aux)
        else:
            tree = ProofTree(s, clause.rule, [build(b) for b in clause.body], clause.aux)
        memo[s] = tree
        return tree

    return build(target)


# ----------------------------------------------------------------------
# independent proof checking


def verify_proof(universe: TermUniverse, proof: ProofTree, axioms=None) -> bool:
    """Check a proof tree rule by rule against the cut-free schemas."""
    return find_invalid_node(universe, proof, axioms) is None


def find_invalid_node(universe: TermUniverse, proof: ProofTree, axioms=None) -> str | None:
    """Path of the first node violating its rule schema, or None if valid."""
    pairs = as_pairs(axioms)
    ok: set[int] = set()
    stack: list[tuple[ProofTree, str]] = [(proof, "root")]
    while stack:
        node, path = stack.pop()
        if id(node) in ok:
            continue
        if not _node_matches_schema(universe, node, pairs):
            return path
        ok.add(id(node))
        for i, child in enumerate(node.children):
            stack.append((child, f"{path}.{i}"))
    return None


def _node_matches_schema(u: TermUniverse, node: ProofTree, axioms: list) -> bool:
    a, b = node.sequent.elements()
    kids = node.children
    rule = node.rule

    def child_seqs() -> list[Sequent]:
        return [c.sequent for c in kids]

    if rule == HYP:
        return not kids and a.term == b.term and {a.side, b.side} == {L, R}
    if rule == LEFT_BOT:
        return not kids and any(
            e.side == L and u.node(e.term).kind == BOT for e in (a, b)
        )
    if rule == RIGHT_TOP:
        return not kids and any(
            e.side == R and u.node(e.term).kind == TOP for e in (a, b)
        )
    if rule == REPLACE:
        if len(kids) != 1:
            return False
        return any(kids[0].sequent == Sequent(e, e) for e in (a, b))
    if rule in (LEFT_AND, RIGHT_AND, LEFT_OR, RIGHT_OR):
        kind = MEET if rule in (LEFT_AND, RIGHT_AND) else JOIN
        side = L if rule in (LEFT_AND, LEFT_OR) else R
        branching = rule in (RIGHT_AND, LEFT_OR)  # all children vs. one pick
        for principal, context in ((a, b), (b, a)):
            n = u.node(principal.term)
            if principal.side != side or n.kind != kind:
                continue
            if branching:
                expected = [
                    Sequent.of(c, side, context.term, context.side) for c in n.children
                ]
                if child_seqs() == expected:
                    return True
            else:
                if len(kids) == 1 and any(
                    kids[0].sequent == Sequent.of(c, side, context.term, context.side)
                    for c in n.children
                ):
                    return True
        return False
    if rule in (LEFT_NOT, RIGHT_NOT):
        side = L if rule == LEFT_NOT else R
        flipped = R if side == L else L
        for principal, context in ((a, b), (b, a)):
            if principal.side != side:
                continue
            n = u.node(principal.term)
            if n.kind == NOT:
                inner = n.children[0]
            elif n.kind == NEGVAR:
                inner = u.var(n.name)
            elif n.kind == APP and n.symbol.dual_of is not None:
                inner = u.app(u.symbols[n.symbol.dual_of], n.children)
            else:
                continue
            if len(kids) == 1 and kids[0].sequent == Sequent.of(
                inner, flipped, context.term, context.side
            ):
                return True
        return False
    if rule == F_RULE:
        if {a.side, b.side} != {L, R}:
            return False
        left, right = (a, b) if a.side == L else (b, a)
        nl = u.node(left.term)
        nr = u.node(right.term)
        if nl.kind != APP or nr.kind != APP or nl.symbol.name != nr.symbol.name:
            return False
        expected = []
        for sl, tr, v in zip(nl.children, nr.children, nl.symbol.variances):
            if v is Variance.INVARIANT:
                expected.append(Sequent.of(sl, L, tr, R))
                expected.append(Sequent.of(tr, L, sl, R))
            elif v is Variance.COVARIANT:
                expected.append(Sequent.of(sl, L, tr, R))
            else:
                expected.append(Sequent.of(tr, L, sl, R))
        return child_seqs() == expected
    if rule == AXIOM_CUT:
        if len(kids) != 2 or not isinstance(node.aux, tuple) or len(node.aux) != 2:
            return False
        v, w = node.aux
        if (v, w) not in axioms:
            return False
        for gamma, delta in ((a, b), (b, a)):
            premise1 = Sequent.of(gamma.term, gamma.side, v, R)
            premise2 = Sequent.of(w, L, delta.term, delta.side)
            if child_seqs() == [premise1, premise2]:
                return True
        return False
    return False


# ----------------------------------------------------------------------
# proof display


def format_proof(universe: TermUniverse, proof: ProofTree, rename=None) -> str:
    from .syntax import print_term

    lines: list[str] = []

    def seq_str(s: Sequent) -> str:
        return ", ".join(
            f"{print_term(universe, e.term, rename)}^{e.side}" for e in s.elements()
        )

    def walk(node: ProofTree, depth: int) -> None:
        rule = node.rule
        if rule == F_RULE and node.aux is not None:
            rule = f"F[{node.aux}]"
        lines.append("  " * depth + f"{rule}: {seq_str(node.sequent)}")
        for child in node.children:
            walk(child, depth + 1)

    walk(proof, 0)
    return "\n".join(lines)
