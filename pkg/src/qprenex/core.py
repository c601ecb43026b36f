"""Syntax trees, metrics, and substitution for fully quantified boolean formulas.

A formula is an immutable tree built from three node types: variable leaves,
applications of named n-ary boolean operators, and quantifier blocks binding
finite sets of variables.  Operator meanings live in an :class:`OperatorTable`
mapping each name to an arity and a truth table.  Variable names containing
``@`` are reserved for machine-generated variables (see :class:`FreshGen`);
source-level names never contain it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Union

RESERVED_CHAR = "@"


class Kind(Enum):
    """Quantifier kind."""

    EXISTS = "exists"
    FORALL = "forall"

    @property
    def dual(self) -> "Kind":
        return Kind.FORALL if self is Kind.EXISTS else Kind.EXISTS


@dataclass(frozen=True)
class Var:
    """Variable occurrence."""

    name: str


@dataclass(frozen=True)
class App:
    """Application of a named boolean operator to argument formulas."""

    op: str
    args: tuple["Formula", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Quant:
    """Quantifier block binding a finite set of variables in a body.

    Blocks are kept as sorted, duplicate-free tuples so that structural
    equality coincides with set equality and printing is deterministic.
    The block may be empty; empty blocks still count for nblock/qdepth.
    """

    kind: Kind
    block: tuple[str, ...]
    body: "Formula"

    def __post_init__(self) -> None:
        object.__setattr__(self, "block", tuple(sorted(set(self.block))))


Formula = Union[Var, App, Quant]


class CaptureError(Exception):
    """A substitution would capture a free variable of a replacement.

    Raised instead of silently alpha-renaming: callers are expected to
    guarantee freshness, so a capture signals a bug upstream.
    """

    def __init__(self, key: str, captured: str, block: tuple[str, ...]):
        self.key = key
        self.captured = captured
        self.block = block
        super().__init__(
            f"substituting for '{key}' would capture '{captured}' "
            f"under the block {{{', '.join(block)}}}"
        )


# ---------------------------------------------------------------------------
# Operator tables

#: ``name -> (arity, truth table)``; tables are indexed by the argument tuple
#: read as a binary number, first argument most significant.
BUILTIN_OPERATORS: dict[str, tuple[int, tuple[int, ...]]] = {
    "false": (0, (0,)),
    "true": (0, (1,)),
    "not": (1, (1, 0)),
    "and": (2, (0, 0, 0, 1)),
    "or": (2, (0, 1, 1, 1)),
    "imp": (2, (1, 1, 0, 1)),
    "iff": (2, (1, 0, 0, 1)),
    "xor": (2, (0, 1, 1, 0)),
}


class OperatorTable:
    """Named boolean operators with arity and truth table.

    Always contains the built-in operators; user operators are added with
    :meth:`add` and may have any arity >= 0.
    """

    def __init__(self) -> None:
        self._entries: dict[str, tuple[int, tuple[int, ...]]] = dict(BUILTIN_OPERATORS)

    @classmethod
    def default(cls) -> "OperatorTable":
        return cls()

    def add(self, name: str, arity: int, bits: Iterable[int]) -> None:
        if name in self._entries:
            raise ValueError(f"operator '{name}' is already defined")
        table = tuple(int(b) for b in bits)
        if arity < 0:
            raise ValueError(f"operator '{name}': negative arity")
        if len(table) != 2**arity:
            raise ValueError(
                f"operator '{name}': truth table has {len(table)} entries, "
                f"expected {2 ** arity}"
            )
        if any(b not in (0, 1) for b in table):
            raise ValueError(f"operator '{name}': truth table entries must be 0 or 1")
        self._entries[name] = (arity, table)

    def has(self, name: str) -> bool:
        return name in self._entries

    def arity(self, name: str) -> int:
        return self._entry(name)[0]

    def truth_table(self, name: str) -> tuple[int, ...]:
        return self._entry(name)[1]

    def apply(self, name: str, values: Iterable[int]) -> int:
        arity, table = self._entry(name)
        index = 0
        n = 0
        for v in values:
            index = index << 1 | (1 if v else 0)
            n += 1
        if n != arity:
            raise ValueError(f"operator '{name}' expects {arity} arguments, got {n}")
        return table[index]

    def user_names(self) -> tuple[str, ...]:
        return tuple(n for n in self._entries if n not in BUILTIN_OPERATORS)

    def _entry(self, name: str) -> tuple[int, tuple[int, ...]]:
        try:
            return self._entries[name]
        except KeyError:
            raise KeyError(f"unknown operator '{name}'") from None


DEFAULT_TABLE = OperatorTable.default()


def check_formula(phi: Formula, table: OperatorTable) -> None:
    """Check that every operator in ``phi`` exists in ``table`` with matching arity."""
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, App):
            if not table.has(f.op):
                raise KeyError(f"unknown operator '{f.op}'")
            if table.arity(f.op) != len(f.args):
                raise ValueError(
                    f"operator '{f.op}' expects {table.arity(f.op)} arguments, "
                    f"got {len(f.args)}"
                )
            stack.extend(f.args)
        elif isinstance(f, Quant):
            stack.append(f.body)


# ---------------------------------------------------------------------------
# Constructors

TRUE = App("true", ())
FALSE = App("false", ())


def neg(phi: Formula) -> Formula:
    return App("not", (phi,))


def conj(a: Formula, b: Formula) -> Formula:
    return App("and", (a, b))


def disj(a: Formula, b: Formula) -> Formula:
    return App("or", (a, b))


def implies(a: Formula, b: Formula) -> Formula:
    return App("imp", (a, b))


def iff(a: Formula, b: Formula) -> Formula:
    return App("iff", (a, b))


def xor(a: Formula, b: Formula) -> Formula:
    return App("xor", (a, b))


def exists(names: Iterable[str], body: Formula) -> Formula:
    return Quant(Kind.EXISTS, tuple(names), body)


def forall(names: Iterable[str], body: Formula) -> Formula:
    return Quant(Kind.FORALL, tuple(names), body)


def big_conj(items: Iterable[Formula]) -> Formula:
    """Left-associated conjunction; empty yields ``true``, ``true`` conjuncts drop."""
    acc: Formula | None = None
    for item in items:
        if item == TRUE:
            continue
        acc = item if acc is None else conj(acc, item)
    return TRUE if acc is None else acc


# ---------------------------------------------------------------------------
# Metrics
#
# All metric walks are iterative: transformed and especially naively prenexed
# formulas can contain quantifier chains far deeper than the recursion limit.


def length(phi: Formula) -> int:
    """Symbol count: variables and operators weigh 1, negations weigh 0,
    a quantifier block weighs 1 plus its number of variables."""
    total = 0
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Var):
            total += 1
        elif isinstance(f, App):
            if f.op == "not":
                stack.append(f.args[0])
            else:
                total += 1
                stack.extend(f.args)
        else:
            total += 1 + len(f.block)
            stack.append(f.body)
    return total


def qdepth(phi: Formula) -> int:
    """Maximum nesting of quantifier blocks along any path (not alternation)."""
    best = 0
    stack: list[tuple[Formula, int]] = [(phi, 0)]
    while stack:
        f, d = stack.pop()
        if isinstance(f, Quant):
            stack.append((f.body, d + 1))
        elif isinstance(f, App) and f.args:
            stack.extend((a, d) for a in f.args)
        else:
            if d > best:
                best = d
    return best


def nblock(phi: Formula) -> int:
    """Number of quantifier block occurrences."""
    count = 0
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Quant):
            count += 1
            stack.append(f.body)
        elif isinstance(f, App):
            stack.extend(f.args)
    return count


def nbvar(phi: Formula) -> int:
    """Total number of quantified variables, summed over block occurrences."""
    count = 0
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Quant):
            count += len(f.block)
            stack.append(f.body)
        elif isinstance(f, App):
            stack.extend(f.args)
    return count


def vars_of(phi: Formula) -> frozenset[str]:
    """All occurring variables; a mention in a block counts as an occurrence."""
    seen: set[str] = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Var):
            seen.add(f.name)
        elif isinstance(f, App):
            stack.extend(f.args)
        else:
            seen.update(f.block)
            stack.append(f.body)
    return frozenset(seen)


def free_vars(phi: Formula) -> frozenset[str]:
    """Variables with at least one occurrence not under a block binding them."""
    free: set[str] = set()
    stack: list[tuple[Formula, frozenset[str]]] = [(phi, frozenset())]
    while stack:
        f, bound = stack.pop()
        if isinstance(f, Var):
            if f.name not in bound:
                free.add(f.name)
        elif isinstance(f, App):
            stack.extend((a, bound) for a in f.args)
        else:
            stack.append((f.body, bound | set(f.block)))
    return frozenset(free)


def bound_vars(phi: Formula) -> frozenset[str]:
    """Variables mentioned in some quantifier block (mentions count as bound)."""
    bound: set[str] = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Quant):
            bound.update(f.block)
            stack.append(f.body)
        elif isinstance(f, App):
            stack.extend(f.args)
    return frozenset(bound)


def is_boolean(phi: Formula) -> bool:
    """True iff the formula contains no quantifier."""
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Quant):
            return False
        if isinstance(f, App):
            stack.extend(f.args)
    return True


def is_prenex(phi: Formula) -> bool:
    """True iff the formula is a chain of quantifier blocks over a boolean body."""
    while isinstance(phi, Quant):
        phi = phi.body
    return is_boolean(phi)


def prefix_blocks(phi: Formula) -> tuple[list[tuple[Kind, tuple[str, ...]]], Formula]:
    """Split ``phi`` into its leading quantifier chain and the remaining body."""
    blocks: list[tuple[Kind, tuple[str, ...]]] = []
    while isinstance(phi, Quant):
        blocks.append((phi.kind, phi.block))
        phi = phi.body
    return blocks, phi


# ---------------------------------------------------------------------------
# Substitution

Substitution = Mapping[str, Formula]


def substitute(phi: Formula, sigma: Substitution) -> Formula:
    """Simultaneously replace free occurrences of the keys of ``sigma``.

    Requires every replacement to be free for its key: no free occurrence of
    a key may sit under a quantifier binding a free variable of the
    replacement.  Violations raise :class:`CaptureError`; there is no silent
    renaming.
    """
    if not sigma:
        return phi
    replacement_fvs = {p: free_vars(rep) for p, rep in sigma.items()}

    def go(f: Formula, sig: Substitution) -> Formula:
        if isinstance(f, Var):
            return sig.get(f.name, f)
        if isinstance(f, App):
            return App(f.op, tuple(go(a, sig) for a in f.args))
        blockset = set(f.block)
        live = {p: rep for p, rep in sig.items() if p not in blockset}
        if not live:
            return f
        risky = [p for p in live if replacement_fvs[p] & blockset]
        if risky:
            body_free = free_vars(f.body)
            for p in sorted(risky):
                if p in body_free:
                    captured = sorted(replacement_fvs[p] & blockset)[0]
                    raise CaptureError(p, captured, f.block)
                del live[p]
            if not live:
                return f
        return Quant(f.kind, f.block, go(f.body, live))

    return go(phi, dict(sigma))


def is_free_for(phi: Formula, key: str, replacement: Formula) -> bool:
    """True iff substituting ``replacement`` for ``key`` in ``phi`` captures nothing."""
    try:
        substitute(phi, {key: replacement})
    except CaptureError:
        return False
    return True


def rename_free(phi: Formula, mapping: Mapping[str, str]) -> Formula:
    """Rename free variable occurrences; renaming targets must be fresh."""
    return substitute(phi, {old: Var(new) for old, new in mapping.items()})


# ---------------------------------------------------------------------------
# Constant folding


def fold_constants(phi: Formula, table: OperatorTable | None = None) -> Formula:
    """Bottom-up propagation of ``true``/``false`` through built-in operators.

    User operators fold only when all arguments are constant (needs ``table``).
    Quantifier bodies are folded in place; blocks are untouched.
    """
    table = table or DEFAULT_TABLE

    def negated(a: Formula) -> Formula:
        # a is already folded here
        if a == TRUE:
            return FALSE
        if a == FALSE:
            return TRUE
        return App("not", (a,))

    def go(f: Formula) -> Formula:
        if isinstance(f, Var):
            return f
        if isinstance(f, Quant):
            return Quant(f.kind, f.block, go(f.body))
        args = tuple(go(a) for a in f.args)
        op = f.op
        if op == "not":
            return negated(args[0])
        if op in ("true", "false"):
            return f
        if op in ("and", "or", "imp", "iff", "xor"):
            a, b = args
            if op == "and":
                if a == FALSE or b == FALSE:
                    return FALSE
                if a == TRUE:
                    return b
                if b == TRUE:
                    return a
            elif op == "or":
                if a == TRUE or b == TRUE:
                    return TRUE
                if a == FALSE:
                    return b
                if b == FALSE:
                    return a
            elif op == "imp":
                if a == FALSE or b == TRUE:
                    return TRUE
                if a == TRUE:
                    return b
                if b == FALSE:
                    return negated(a)
            elif op == "iff":
                if a == TRUE:
                    return b
                if b == TRUE:
                    return a
                if a == FALSE:
                    return negated(b)
                if b == FALSE:
                    return negated(a)
            else:  # xor
                if a == FALSE:
                    return b
                if b == FALSE:
                    return a
                if a == TRUE:
                    return negated(b)
                if b == TRUE:
                    return negated(a)
            return App(op, args)
        if table.has(op) and all(x in (TRUE, FALSE) for x in args):
            value = table.apply(op, [1 if x == TRUE else 0 for x in args])
            return TRUE if value else FALSE
        return App(op, args)

    return go(phi)


# ---------------------------------------------------------------------------
# Fresh names

ROLE_SOURCE = "source"
ROLE_POS = "pos-copy"
ROLE_NEG = "neg-copy"
ROLE_ABBREV = "abbrev"
ROLE_TSEYTIN = "tseytin"


@dataclass(frozen=True)
class NameInfo:
    """Provenance of a variable name: role, source it copies, allocation index."""

    role: str
    origin: str
    index: int


def pos_copy(source: str, index: int) -> str:
    return f"{source}@p{index}"


def neg_copy(source: str, index: int) -> str:
    return f"{source}@n{index}"


def abbrev_name(index: int) -> str:
    return f"@a{index}"


_ABBREV_RE = re.compile(r"@a(\d+)")
_COPY_RE = re.compile(r"(.*)@([pn])(\d+)")


def classify_name(name: str) -> NameInfo | None:
    """Decode a generated name back to its provenance; None for source names."""
    m = _ABBREV_RE.fullmatch(name)
    if m:
        return NameInfo(ROLE_ABBREV, "abbrev", int(m.group(1)))
    m = _COPY_RE.fullmatch(name)
    if m:
        role = ROLE_POS if m.group(2) == "p" else ROLE_NEG
        return NameInfo(role, m.group(1), int(m.group(3)))
    return None


class FreshGen:
    """Deterministic allocator of fresh-name indices.

    All derived names contain the reserved character ``@``, so they can never
    collide with source-parsed variables.  When the input formula itself
    contains generated names (re-ingested output), start the counter past
    every index already present via :meth:`for_formula`.
    """

    def __init__(self, start: int = 1) -> None:
        if start < 1:
            raise ValueError("allocation indices start at 1")
        self._next = start

    @classmethod
    def for_formula(cls, phi: Formula) -> "FreshGen":
        highest = 0
        for name in vars_of(phi):
            info = classify_name(name)
            if info is not None and info.index > highest:
                highest = info.index
        return cls(highest + 1)

    def allocate(self) -> int:
        index = self._next
        self._next += 1
        return index
