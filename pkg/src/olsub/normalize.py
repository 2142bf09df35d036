"""Canonical minimal forms.

Bounded-lattice mode composes two passes: zeta promotes any conjunct of a
meet that already entails the enclosing join (dually for meets), iterated to
a fixpoint; eta keeps each join's children a maximal antichain (dually
minimal), collapsing unary nodes. Ortholattice mode first applies delta
(negation pushed down to variables and constructor heads, the latter turning
into dual symbols with flipped variances) and beta (a join collapses to top
when the pushed-down complement of one disjunct entails the join, dually to
bottom), then normalizes the result as a bounded-lattice term.

The composition maps equivalent terms to one identical term id, never grows
the pseudo-negation-normal image, and outputs the smallest term of the
equivalence class under the node-count convention of `TermUniverse.size`.

Every order test `u <= v` made here is answered by the entailment engine
restricted to the negation-free rules, with negated variables and dual
symbols treated as opaque atoms; engines and verdicts are cached per
universe, keeping a normalization run quadratic overall.
"""
from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass

from . import entail
from .errors import NegationPresent
from .terms import (
    APP,
    BOT,
    JOIN,
    MEET,
    NEGVAR,
    NOT,
    TOP,
    VAR,
    TermId,
    TermUniverse,
)

BL = "bl"
OL = "ol"


@dataclass(frozen=True)
class NormalTerm:
    term: TermId
    mode: str


class _Context:
    """Per-universe caches: one bounded-lattice engine, pass memos, sort keys."""

    def __init__(self, universe: TermUniverse):
        self.u = universe
        self.engine = entail.Engine(universe, axioms=None, mode="bl")
        self._engine_lock = threading.Lock()  # engine state is shared per universe
        self.leq_memo: dict[tuple[TermId, TermId], bool] = {}
        self.keys: dict[TermId, tuple] = {}
        self.delta_pos: dict[TermId, TermId] = {}
        self.delta_neg: dict[TermId, TermId] = {}
        self.beta_memo: dict[TermId, TermId] = {}
        self.zeta_memo: dict[TermId, TermId] = {}
        self.eta_memo: dict[TermId, TermId] = {}

    def leq(self, s: TermId, t: TermId) -> bool:
        key = (s, t)
        got = self.leq_memo.get(key)
        if got is None:
            with self._engine_lock:
                got = self.engine.query(s, t)
            self.leq_memo[key] = got
        return got

    # Total structural order: kind rank, then name, then children.
    _RANK = {BOT: 0, TOP: 1, VAR: 2, NEGVAR: 3, APP: 4, NOT: 5, MEET: 6, JOIN: 7}

    def key(self, t: TermId) -> tuple:
        got = self.keys.get(t)
        if got is not None:
            return got
        node = self.u.node(t)
        rank = self._RANK[node.kind]
        if node.kind in (VAR, NEGVAR):
            out = (rank, node.name)
        elif node.kind == APP:
            out = (rank, node.name) + tuple(self.key(c) for c in node.children)
        else:
            out = (rank,) + tuple(self.key(c) for c in node.children)
        self.keys[t] = out
        return out

    def sorted_meet(self, children) -> TermId:
        t = self.u.meet(children)
        node = self.u.node(t)
        if node.kind == MEET:
            return self.u.meet(sorted(node.children, key=self.key))
        return t

    def sorted_join(self, children) -> TermId:
        t = self.u.join(children)
        node = self.u.node(t)
        if node.kind == JOIN:
            return self.u.join(sorted(node.children, key=self.key))
        return t


_contexts: "weakref.WeakKeyDictionary[TermUniverse, _Context]" = weakref.WeakKeyDictionary()


def _context(universe: TermUniverse) -> _Context:
    ctx = _contexts.get(universe)
    if ctx is None:
        ctx = _Context(universe)
        _contexts[universe] = ctx
    return ctx


# ----------------------------------------------------------------------
# delta: pseudo-negation-normal form


def delta(universe: TermUniverse, t: TermId) -> TermId:
    """Push negation down to variables and constructor heads.

    Double negations vanish, De Morgan distributes through meets and joins,
    a negated constructor becomes its dual applied to the same (recursively
    rewritten, un-negated) arguments, negated bounds swap. Idempotent, and
    equivalent to the input as an ortholattice term.
    """
    return _delta(_context(universe), t, False)


def _delta(ctx: _Context, t: TermId, neg: bool) -> TermId:
    memo = ctx.delta_neg if neg else ctx.delta_pos
    got = memo.get(t)
    if got is not None:
        return got
    u = ctx.u
    node = u.node(t)
    kind = node.kind
    if kind == VAR:
        out = u.negvar(node.name) if neg else t
    elif kind == NEGVAR:
        out = u.var(node.name) if neg else t
    elif kind == TOP:
        out = u.bot() if neg else t
    elif kind == BOT:
        out = u.top() if neg else t
    elif kind == NOT:
        out = _delta(ctx, node.children[0], not neg)
    elif kind == MEET:
        mapped = [_delta(ctx, c, neg) for c in node.children]
        out = u.join(mapped) if neg else u.meet(mapped)
    elif kind == JOIN:
        mapped = [_delta(ctx, c, neg) for c in node.children]
        out = u.meet(mapped) if neg else u.join(mapped)
    else:  # APP
        args = [_delta(ctx, c, False) for c in node.children]
        out = u.app(u.dual(node.symbol) if neg else node.symbol, args)
    memo[t] = out
    return out


# ----------------------------------------------------------------------
# beta: collapse complemented joins and meets


def beta(universe: TermUniverse, t: TermId) -> TermId:
    """On a pseudo-negation-normal term, replace any join one of whose
    disjuncts is complemented within it by top, dually meets by bottom.

    The paper-style binary test folds left-to-right over canonically ordered
    children, and every child's pushed-down complement is additionally tested
    against the whole flattened node, so the result does not depend on how
    the input was associated."""
    return _beta(_context(universe), t)


def _beta(ctx: _Context, t: TermId) -> TermId:
    got = ctx.beta_memo.get(t)
    if got is not None:
        return got
    u = ctx.u
    node = u.node(t)
    kind = node.kind
    if kind in (VAR, NEGVAR, TOP, BOT):
        out = t
    elif kind == NOT:
        raise NegationPresent("beta expects a pseudo-negation-normal term")
    elif kind == APP:
        out = u.app(node.symbol, [_beta(ctx, c) for c in node.children])
    else:
        children = [_beta(ctx, c) for c in node.children]
        if kind == JOIN:
            out = _beta_join(ctx, ctx.sorted_join(children))
        else:
            out = _beta_meet(ctx, ctx.sorted_meet(children))
    ctx.beta_memo[t] = out
    return out


def _beta_join(ctx: _Context, whole: TermId) -> TermId:
    u = ctx.u
    if u.node(whole).kind != JOIN:
        return whole
    children = u.node(whole).children
    for c in children:
        if ctx.leq(_delta(ctx, c, True), whole):
            return u.top()
    acc = children[0]
    for c in children[1:]:
        pair = u.join([acc, c])
        if ctx.leq(_delta(ctx, acc, True), pair) or ctx.leq(_delta(ctx, c, True), pair):
            return u.top()
        acc = pair
    return whole


def _beta_meet(ctx: _Context, whole: TermId) -> TermId:
    u = ctx.u
    if u.node(whole).kind != MEET:
        return whole
    children = u.node(whole).children
    for c in children:
        if ctx.leq(whole, _delta(ctx, c, True)):
            return u.bot()
    acc = children[0]
    for c in children[1:]:
        pair = u.meet([acc, c])
        if ctx.leq(pair, _delta(ctx, acc, True)) or ctx.leq(pair, _delta(ctx, c, True)):
            return u.bot()
        acc = pair
    return whole


# ----------------------------------------------------------------------
# zeta: promote conjuncts over their meets (Whitman-style)


def zeta(universe: TermUniverse, t: TermId) -> TermId:
    """Bottom-up: inside a join, a meet child is replaced by one of its
    conjuncts whenever that conjunct already entails the whole join; dually
    inside meets. Iterated to a fixpoint, since a replacement can expose
    another; the first scan tests against the original join, later scans
    against the updated one."""
    return _zeta(_context(universe), t)


def _zeta(ctx: _Context, t: TermId) -> TermId:
    got = ctx.zeta_memo.get(t)
    if got is not None:
        return got
    u = ctx.u
    node = u.node(t)
    kind = node.kind
    if kind in (VAR, NEGVAR, TOP, BOT):
        out = t
    elif kind == NOT:
        raise NegationPresent("zeta operates on negation-free terms")
    elif kind == APP:
        out = u.app(node.symbol, [_zeta(ctx, c) for c in node.children])
    else:
        out = _zeta_fix(ctx, [_zeta(ctx, c) for c in node.children], kind)
    ctx.zeta_memo[t] = out
    return out


def _zeta_fix(ctx: _Context, children: list[TermId], outer: str) -> TermId:
    u = ctx.u
    inner = MEET if outer == JOIN else JOIN
    build = ctx.sorted_join if outer == JOIN else ctx.sorted_meet
    while True:
        whole = build(children)
        if u.node(whole).kind != outer:
            return whole
        replaced = False
        next_children: list[TermId] = []
        for c in u.node(whole).children:
            cn = u.node(c)
            promoted = None
            if cn.kind == inner:
                for part in cn.children:
                    ok = (
                        ctx.leq(part, whole)
                        if outer == JOIN
                        else ctx.leq(whole, part)
                    )
                    if ok:
                        promoted = part
                        break
            if promoted is None:
                next_children.append(c)
            else:
                next_children.append(promoted)
                replaced = True
        if not replaced:
            return whole
        children = next_children


# ----------------------------------------------------------------------
# eta: antichain reduction


def eta(universe: TermUniverse, t: TermId) -> TermId:
    """Bottom-up: a join keeps only its maximal children, first
    representative per equivalence class (duplicates after recursive
    normalization are identical, so this deduplicates); dually a meet keeps
    minimal children. Unary nodes collapse to their child and children end
    up in canonical structural order."""
    return _eta(_context(universe), t)


def _eta(ctx: _Context, t: TermId) -> TermId:
    got = ctx.eta_memo.get(t)
    if got is not None:
        return got
    u = ctx.u
    node = u.node(t)
    kind = node.kind
    if kind in (VAR, NEGVAR, TOP, BOT):
        out = t
    elif kind == NOT:
        raise NegationPresent("eta operates on negation-free terms")
    elif kind == APP:
        out = u.app(node.symbol, [_eta(ctx, c) for c in node.children])
    else:
        out = _eta_filter(ctx, [_eta(ctx, c) for c in node.children], kind)
    ctx.eta_memo[t] = out
    return out


def _eta_filter(ctx: _Context, kids: list[TermId], kind: str) -> TermId:
    u = ctx.u
    # A child may itself have reduced to this kind; splice it in.
    flat: list[TermId] = []
    for c in kids:
        if u.node(c).kind == kind:
            flat.extend(u.node(c).children)
        else:
            flat.append(c)
    flat.sort(key=ctx.key)
    keep_max = kind == JOIN
    kept: list[TermId] = []
    for i, c in enumerate(flat):
        redundant = False
        for j, d in enumerate(flat):
            if i == j:
                continue
            below = ctx.leq(c, d) if keep_max else ctx.leq(d, c)
            if below:
                strict = not (ctx.leq(d, c) if keep_max else ctx.leq(c, d))
                if strict or i > j:
                    redundant = True
                    break
        if not redundant:
            kept.append(c)
    if len(kept) == 1:
        return kept[0]
    return u.join(kept) if kind == JOIN else u.meet(kept)


# ----------------------------------------------------------------------
# full normal forms


def normalize_bl(universe: TermUniverse, t: TermId) -> NormalTerm:
    """Normal form over bounded lattices with constructors (negation-free)."""
    if universe.contains_not(t):
        raise NegationPresent(
            "bounded-lattice normalization takes negation-free terms; "
            "use normalize_ol or pre-apply delta"
        )
    ctx = _context(universe)
    return NormalTerm(_eta(ctx, _zeta(ctx, t)), BL)


def normalize_ol(universe: TermUniverse, t: TermId) -> NormalTerm:
    """Canonical minimal form over ortholattices with constructors."""
    ctx = _context(universe)
    return NormalTerm(_eta(ctx, _zeta(ctx, _beta(ctx, _delta(ctx, t, False)))), OL)
