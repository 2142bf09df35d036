"""Interned terms over a lattice signature with variance-annotated constructors.

Structurally identical terms share a single integer id (TermId) within one
TermUniverse, so terms form a DAG and equality of ids is equality of
structure. Meets and joins are flattened n-ary nodes. Negated variables and
dual constructor symbols are first-class node kinds: they let the normalizer
carry negation without Not nodes while ordinary input keeps using Not.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Union

from .errors import ArityMismatch, ConflictingDeclaration

TermId = int

# Node kinds.
VAR = "var"
NEGVAR = "negvar"
TOP = "top"
BOT = "bot"
MEET = "meet"
JOIN = "join"
NOT = "not"
APP = "app"


class Variance(Enum):
    """Monotonicity class of one constructor argument."""

    INVARIANT = "o"
    COVARIANT = "+"
    CONTRAVARIANT = "-"

    def flip(self) -> "Variance":
        if self is Variance.COVARIANT:
            return Variance.CONTRAVARIANT
        if self is Variance.CONTRAVARIANT:
            return Variance.COVARIANT
        return Variance.INVARIANT


def _coerce_variance(v: Union[Variance, str]) -> Variance:
    if isinstance(v, Variance):
        return v
    return Variance(v)


@dataclass(frozen=True)
class SymbolDecl:
    """A declared constructor: name, arity and per-argument variance.

    `dual_of` is set only on generated dual symbols, whose variance list is
    the argument-wise flip of the original's.
    """

    name: str
    arity: int
    variances: tuple[Variance, ...]
    dual_of: str | None = None

    def __post_init__(self):
        if self.arity != len(self.variances):
            raise ArityMismatch(
                f"symbol {self.name}: arity {self.arity} != {len(self.variances)} variances"
            )


@dataclass(frozen=True)
class TermNode:
    """One interned node. `name` holds a variable or symbol name where relevant."""

    kind: str
    name: str | None = None
    symbol: SymbolDecl | None = None
    children: tuple[TermId, ...] = ()


class TermUniverse:
    """Interner and signature table.

    Writes (interning, declarations) are serialized behind a lock; after a
    build phase, ids and nodes may be read concurrently.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._nodes: list[TermNode] = []
        self._sizes: list[int] = []
        self._ids: dict[tuple, TermId] = {}
        self.symbols: dict[str, SymbolDecl] = {}

    # ------------------------------------------------------------------
    # signature

    def declare(self, name: str, variances: Sequence[Union[Variance, str]]) -> SymbolDecl:
        """Declare a constructor. Idempotent; conflicting re-declaration is an error."""
        vs = tuple(_coerce_variance(v) for v in variances)
        if name.startswith("~"):
            raise ConflictingDeclaration(f"symbol name {name!r} is reserved for duals")
        with self._lock:
            existing = self.symbols.get(name)
            if existing is not None:
                if existing.variances != vs:
                    raise ConflictingDeclaration(
                        f"symbol {name} already declared with variances "
                        f"{[v.value for v in existing.variances]}"
                    )
                return existing
            decl = SymbolDecl(name, len(vs), vs)
            self.symbols[name] = decl
            return decl

    def symbol(self, name: str) -> SymbolDecl:
        return self.symbols[name]

    def dual(self, decl: SymbolDecl) -> SymbolDecl:
        """The symbol standing for the complement of `decl`, with flipped variances.

        Taking the dual of a dual resolves back to the original declaration.
        """
        if decl.dual_of is not None:
            return self.symbols[decl.dual_of]
        dual_name = "~" + decl.name
        with self._lock:
            existing = self.symbols.get(dual_name)
            if existing is not None:
                return existing
            dual = SymbolDecl(
                dual_name,
                decl.arity,
                tuple(v.flip() for v in decl.variances),
                dual_of=decl.name,
            )
            self.symbols[dual_name] = dual
            return dual

    # ------------------------------------------------------------------
    # interning

    def _intern(self, node: TermNode, size: int) -> TermId:
        key = (node.kind, node.name, node.children)
        with self._lock:
            tid = self._ids.get(key)
            if tid is not None:
                return tid
            tid = len(self._nodes)
            self._nodes.append(node)
            self._sizes.append(size)
            self._ids[key] = tid
            return tid

    def var(self, name: str) -> TermId:
        return self._intern(TermNode(VAR, name=name), 1)

    def negvar(self, name: str) -> TermId:
        return self._intern(TermNode(NEGVAR, name=name), 1)

    def top(self) -> TermId:
        return self._intern(TermNode(TOP), 1)

    def bot(self) -> TermId:
        return self._intern(TermNode(BOT), 1)

    def neg(self, child: TermId) -> TermId:
        return self._intern(TermNode(NOT, children=(child,)), 1 + self._sizes[child])

    def _nary(self, kind: str, unit_kind: str, children: Iterable[TermId]) -> TermId:
        flat: list[TermId] = []
        for c in children:
            node = self._nodes[c]
            if node.kind == kind:
                flat.extend(node.children)
            else:
                flat.append(c)
        if not flat:
            return self.top() if unit_kind == TOP else self.bot()
        if len(flat) == 1:
            return flat[0]
        size = (len(flat) - 1) + sum(self._sizes[c] for c in flat)
        return self._intern(TermNode(kind, children=tuple(flat)), size)

    def meet(self, children: Iterable[TermId]) -> TermId:
        """n-ary meet; nested meets are flattened, a singleton is returned as-is."""
        return self._nary(MEET, TOP, children)

    def join(self, children: Iterable[TermId]) -> TermId:
        return self._nary(JOIN, BOT, children)

    def app(self, symbol: Union[SymbolDecl, str], args: Sequence[TermId]) -> TermId:
        if isinstance(symbol, str):
            decl = self.symbols[symbol]
        else:
            decl = symbol
        args = tuple(args)
        if len(args) != decl.arity:
            raise ArityMismatch(
                f"{decl.name} expects {decl.arity} arguments, got {len(args)}"
            )
        size = 1 + sum(self._sizes[a] for a in args)
        return self._intern(TermNode(APP, name=decl.name, symbol=decl, children=args), size)

    # ------------------------------------------------------------------
    # structure

    def node(self, t: TermId) -> TermNode:
        return self._nodes[t]

    def size(self, t: TermId) -> int:
        """Tree-unfolding node count: leaves and constructor heads count one,
        an n-ary meet/join counts n-1 binary nodes, Not counts one."""
        return self._sizes[t]

    def subterms(self, t: TermId) -> set[TermId]:
        """The term and all its descendants, each counted once (DAG-aware)."""
        seen: set[TermId] = set()
        stack = [t]
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(self._nodes[cur].children)
        return seen

    def contains_not(self, t: TermId) -> bool:
        return any(self._nodes[s].kind == NOT for s in self.subterms(t))

    def __len__(self) -> int:
        return len(self._nodes)
