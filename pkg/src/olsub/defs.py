"""Bounded abstract type definitions and capture-free symbol substitution.

A definition `type T[A,...] <: F` is eliminated without axioms: introduce a
fresh unconstrained symbol T' with T's variances and substitute
T := F & T'(A,...) throughout the goal and axioms. A lower bound uses the
dual construction T := F | T'(A,...). Recursive or forward-referencing
definitions are rejected; they would amount to universally quantified
assumptions, which are out of reach of a ground entailment procedure.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ConflictingDeclaration, RecursiveDefinition, VarianceMismatch
from .terms import (
    APP,
    JOIN,
    MEET,
    NEGVAR,
    NOT,
    VAR,
    SymbolDecl,
    TermId,
    TermUniverse,
    Variance,
)

FRESH_SUFFIX = "'"


@dataclass(frozen=True)
class Definition:
    """`name[params] <: bound` (kind 'upper') or `name[params] :> bound` ('lower')."""

    name: str
    params: tuple[str, ...]
    bound: TermId
    kind: str = "upper"


def occurrence_polarities(universe: TermUniverse, term: TermId, var: str) -> set[str]:
    """Polarities ('+', '-', 'o') at which `var` occurs in `term`."""
    out: set[str] = set()

    def walk(t: TermId, pol: str) -> None:
        node = universe.node(t)
        if node.kind == VAR:
            if node.name == var:
                out.add(pol)
        elif node.kind == NEGVAR:
            if node.name == var:
                out.add("o" if pol == "o" else ("-" if pol == "+" else "+"))
        elif node.kind == NOT:
            walk(node.children[0], "o" if pol == "o" else ("-" if pol == "+" else "+"))
        elif node.kind == APP:
            for arg, v in zip(node.children, node.symbol.variances):
                if v is Variance.INVARIANT or pol == "o":
                    walk(arg, "o")
                elif v is Variance.COVARIANT:
                    walk(arg, pol)
                else:
                    walk(arg, "-" if pol == "+" else "+")
        else:
            for c in node.children:
                walk(c, pol)

    walk(term, "+")
    return out


def infer_variance(universe: TermUniverse, term: TermId, var: str) -> Variance:
    """Most permissive variance a term supports for one of its parameters."""
    occs = occurrence_polarities(universe, term, var)
    if occs <= {"+"}:
        return Variance.COVARIANT
    if occs == {"-"}:
        return Variance.CONTRAVARIANT
    return Variance.INVARIANT


def template_compatible(universe: TermUniverse, term: TermId, var: str, declared: Variance) -> bool:
    """Whether a template is monotone the way the declared variance demands.

    An unused parameter is both monotone and antitone, so it is compatible
    with every declared variance; invariant positions impose nothing.
    """
    if declared is Variance.INVARIANT:
        return True
    occs = occurrence_polarities(universe, term, var)
    if declared is Variance.COVARIANT:
        return occs <= {"+"}
    return occs <= {"-"}


def subst_vars(universe: TermUniverse, term: TermId, mapping: dict[str, TermId]) -> TermId:
    """Replace free variables by terms (no binders exist, so nothing is captured)."""
    memo: dict[TermId, TermId] = {}

    def walk(t: TermId) -> TermId:
        got = memo.get(t)
        if got is not None:
            return got
        node = universe.node(t)
        if node.kind == VAR:
            result = mapping.get(node.name, t)
        elif node.kind == NEGVAR:
            replacement = mapping.get(node.name)
            result = t if replacement is None else universe.neg(replacement)
        elif node.kind == NOT:
            result = universe.neg(walk(node.children[0]))
        elif node.kind == MEET:
            result = universe.meet([walk(c) for c in node.children])
        elif node.kind == JOIN:
            result = universe.join([walk(c) for c in node.children])
        elif node.kind == APP:
            result = universe.app(node.symbol, [walk(c) for c in node.children])
        else:
            result = t
        memo[t] = result
        return result

    return walk(term)


def substitute(
    universe: TermUniverse,
    term: TermId,
    symbol: SymbolDecl | str,
    params: Sequence[str],
    body: TermId,
) -> TermId:
    """Replace every application of `symbol` by the template `body` over `params`.

    Arguments are substituted recursively first. The template must be
    variance-compatible with the symbol it replaces.
    """
    decl = universe.symbols[symbol] if isinstance(symbol, str) else symbol
    if len(params) != decl.arity:
        raise VarianceMismatch(
            f"template for {decl.name} has {len(params)} holes, arity is {decl.arity}"
        )
    for param, declared in zip(params, decl.variances):
        if not template_compatible(universe, body, param, declared):
            raise VarianceMismatch(
                f"template for {decl.name} is not {declared.name.lower()} in {param}"
            )
    memo: dict[TermId, TermId] = {}

    def walk(t: TermId) -> TermId:
        got = memo.get(t)
        if got is not None:
            return got
        node = universe.node(t)
        if node.kind == APP:
            new_args = [walk(c) for c in node.children]
            if node.symbol.name == decl.name:
                result = subst_vars(universe, body, dict(zip(params, new_args)))
            elif node.symbol.dual_of == decl.name:
                result = universe.neg(
                    subst_vars(universe, body, dict(zip(params, new_args)))
                )
            else:
                result = universe.app(node.symbol, new_args)
        elif node.kind == NOT:
            result = universe.neg(walk(node.children[0]))
        elif node.kind == MEET:
            result = universe.meet([walk(c) for c in node.children])
        elif node.kind == JOIN:
            result = universe.join([walk(c) for c in node.children])
        else:
            result = t
        memo[t] = result
        return result

    return walk(term)


def declare_definition_symbol(universe: TermUniverse, definition: Definition) -> SymbolDecl:
    """Declare (or validate) the defined symbol, inferring variances from its bound."""
    inferred = tuple(
        infer_variance(universe, definition.bound, p) for p in definition.params
    )
    existing = universe.symbols.get(definition.name)
    if existing is None:
        return universe.declare(definition.name, inferred)
    for param, declared in zip(definition.params, existing.variances):
        if not template_compatible(universe, definition.bound, param, declared):
            raise ConflictingDeclaration(
                f"{definition.name} declared {declared.name.lower()} in {param}, "
                "but its bound is not"
            )
    return existing


def desugar(
    universe: TermUniverse,
    definitions: Sequence[Definition],
    goal: tuple[TermId, TermId],
    axioms: Sequence[tuple[TermId, TermId]],
) -> tuple[tuple[TermId, TermId], list[tuple[TermId, TermId]], dict[str, str]]:
    """Eliminate definitions from a goal and axiom set.

    Returns the rewritten goal, rewritten axioms, and a map from fresh symbol
    names back to the definitions they stand for (for display purposes).
    Each bound may use only symbols of earlier definitions.
    """
    names = [d.name for d in definitions]
    for i, d in enumerate(definitions):
        mentioned = {
            universe.node(s).symbol.name
            for s in universe.subterms(d.bound)
            if universe.node(s).kind == APP
        }
        for later in names[i:]:
            if later in mentioned:
                raise RecursiveDefinition(
                    f"bound of {d.name} mentions {later}; definitions may only "
                    "use earlier symbols"
                )
    goal_s, goal_t = goal
    pairs = [tuple(p) for p in axioms]
    hidden: dict[str, str] = {}
    for d in reversed(definitions):
        decl = universe.symbols[d.name]
        fresh = universe.declare(d.name + FRESH_SUFFIX, decl.variances)
        hidden[fresh.name] = d.name
        params = [universe.var(p) for p in d.params]
        opaque = universe.app(fresh, params)
        if d.kind == "upper":
            body = universe.meet([d.bound, opaque])
        else:
            body = universe.join([d.bound, opaque])
        goal_s = substitute(universe, goal_s, decl, d.params, body)
        goal_t = substitute(universe, goal_t, decl, d.params, body)
        pairs = [
            (
                substitute(universe, a, decl, d.params, body),
                substitute(universe, b, decl, d.params, body),
            )
            for (a, b) in pairs
        ]
    return (goal_s, goal_t), pairs, hidden
