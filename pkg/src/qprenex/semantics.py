"""Brute-force reference semantics: the oracle every rewrite is checked against.

Evaluation enumerates the 2^|X| local assignments of every quantifier block
depth-first, short-circuiting on the first witness or counterexample.  The
satisfiability/validity/equivalence judgements enumerate all assignments of
the relevant free variables.  Everything here is deliberately exponential;
a configurable cap turns oversized queries into a distinct error rather
than an answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from .core import (
    App,
    DEFAULT_TABLE,
    FALSE,
    Formula,
    FreshGen,
    Kind,
    OperatorTable,
    Quant,
    TRUE,
    Var,
    free_vars,
    substitute,
)

DEFAULT_ORACLE_CAP = 24


class RefusalError(Exception):
    """The query needs more free-variable enumeration than the cap allows.

    Signals an oracle scale limit, never anything about the formula itself.
    """

    def __init__(self, needed: int, cap: int):
        self.needed = needed
        self.cap = cap
        super().__init__(
            f"oracle refuses to enumerate {needed} free variables (cap {cap})"
        )


@dataclass(frozen=True)
class Valuation:
    """Total assignment: an explicit finite part plus a default for the rest."""

    assigned: Mapping[str, int] = field(default_factory=dict)
    default: int = 0

    def value(self, name: str) -> int:
        return self.assigned.get(name, self.default)


def _compile(phi: Formula, table: OperatorTable, env: dict[str, int]):
    """Compile a formula into a zero-argument closure reading ``env``.

    The closure implements the defining recursion directly: truth-table
    lookup for operators and depth-first enumeration of the 2^|X| local
    assignments of every block, short-circuiting on the first witness or
    counterexample.  Compiling once keeps repeated evaluation cheap.
    """
    if isinstance(phi, Var):
        name = phi.name
        return lambda: env[name]
    if isinstance(phi, App):
        op = phi.op
        if op == "true":
            return lambda: 1
        if op == "false":
            return lambda: 0
        if op == "not":
            a = _compile(phi.args[0], table, env)
            return lambda: 0 if a() else 1
        if op in ("and", "or", "imp", "iff", "xor"):
            a = _compile(phi.args[0], table, env)
            b = _compile(phi.args[1], table, env)
            if op == "and":
                return lambda: b() if a() else 0
            if op == "or":
                return lambda: 1 if a() else b()
            if op == "imp":
                return lambda: b() if a() else 1
            if op == "iff":
                return lambda: 1 if a() == b() else 0
            return lambda: 1 if a() != b() else 0
        parts = tuple(_compile(a, table, env) for a in phi.args)
        bits = table.truth_table(op)
        if table.arity(op) != len(parts):
            raise ValueError(
                f"operator '{op}' expects {table.arity(op)} arguments, "
                f"got {len(parts)}"
            )

        def general() -> int:
            index = 0
            for part in parts:
                index = index << 1 | part()
            return bits[index]

        return general
    names = phi.block
    body = _compile(phi.body, table, env)
    stop = 1 if phi.kind is Kind.EXISTS else 0
    if not names:
        return body
    last = len(names) - 1

    def enum(i: int = 0) -> int:
        x = names[i]
        old = env.get(x)
        if i == last:
            env[x] = 0
            result = body()
            if result != stop:
                env[x] = 1
                result = body()
        else:
            env[x] = 0
            result = enum(i + 1)
            if result != stop:
                env[x] = 1
                result = enum(i + 1)
        if old is None:
            del env[x]
        else:
            env[x] = old
        return result

    return enum


class _Evaluator:
    """Compiled form of one formula for repeated evaluation."""

    def __init__(self, phi: Formula, table: OperatorTable):
        self._env: dict[str, int] = {}
        self._free = sorted(free_vars(phi))
        self._root = _compile(phi, table, self._env)

    def under(self, valuation: Valuation) -> int:
        env = self._env
        env.clear()
        for name in self._free:
            env[name] = valuation.value(name)
        return self._root()

    def with_bits(self, names: list[str], bits: tuple[int, ...]) -> int:
        env = self._env
        env.clear()
        env.update(zip(names, bits))
        for name in self._free:
            if name not in env:
                env[name] = 0
        return self._root()


def evaluate(valuation: Valuation, phi: Formula, table: OperatorTable | None = None) -> int:
    """Truth value of ``phi`` under ``valuation``; worst-case exponential."""
    return _Evaluator(phi, table or DEFAULT_TABLE).under(valuation)


def _check_cap(names: list[str], cap: int) -> None:
    if len(names) > cap:
        raise RefusalError(len(names), cap)


def satisfiable(
    phi: Formula,
    table: OperatorTable | None = None,
    cap: int = DEFAULT_ORACLE_CAP,
) -> bool:
    return satisfying_assignment(phi, table, cap) is not None


def valid(
    phi: Formula,
    table: OperatorTable | None = None,
    cap: int = DEFAULT_ORACLE_CAP,
) -> bool:
    names = sorted(free_vars(phi))
    _check_cap(names, cap)
    compiled = _Evaluator(phi, table or DEFAULT_TABLE)
    return all(
        compiled.with_bits(names, bits)
        for bits in product((0, 1), repeat=len(names))
    )


def satisfying_assignment(
    phi: Formula,
    table: OperatorTable | None = None,
    cap: int = DEFAULT_ORACLE_CAP,
) -> Valuation | None:
    """A valuation making ``phi`` true, or None."""
    names = sorted(free_vars(phi))
    _check_cap(names, cap)
    compiled = _Evaluator(phi, table or DEFAULT_TABLE)
    for bits in product((0, 1), repeat=len(names)):
        if compiled.with_bits(names, bits):
            return Valuation(dict(zip(names, bits)))
    return None


def find_disagreement(
    phi: Formula,
    psi: Formula,
    table: OperatorTable | None = None,
    cap: int = DEFAULT_ORACLE_CAP,
) -> Valuation | None:
    """A valuation on which the two formulas evaluate differently, or None."""
    names = sorted(free_vars(phi) | free_vars(psi))
    _check_cap(names, cap)
    table = table or DEFAULT_TABLE
    left = _Evaluator(phi, table)
    right = _Evaluator(psi, table)
    for bits in product((0, 1), repeat=len(names)):
        if left.with_bits(names, bits) != right.with_bits(names, bits):
            return Valuation(dict(zip(names, bits)))
    return None


def equivalent(
    phi: Formula,
    psi: Formula,
    table: OperatorTable | None = None,
    cap: int = DEFAULT_ORACLE_CAP,
) -> bool:
    return find_disagreement(phi, psi, table, cap) is None


def equisatisfiable(
    phi: Formula,
    psi: Formula,
    table: OperatorTable | None = None,
    cap: int = DEFAULT_ORACLE_CAP,
) -> bool:
    return satisfiable(phi, table, cap) == satisfiable(psi, table, cap)


def equivalid(
    phi: Formula,
    psi: Formula,
    table: OperatorTable | None = None,
    cap: int = DEFAULT_ORACLE_CAP,
) -> bool:
    return valid(phi, table, cap) == valid(psi, table, cap)


def evaluate_via_mc(
    valuation: Valuation, phi: Formula, table: OperatorTable | None = None
) -> int:
    """Evaluate by rewriting into a boolean combination of prenex parts.

    Free variables are first fixed to constants per the valuation, the result
    is rewritten with :func:`qprenex.transform.prenex_mc`, and each maximal
    prenex subformula is then evaluated with the plain oracle, combining the
    answers through the boolean skeleton.  Agrees with :func:`evaluate`.
    """
    from .transform import prenex_mc  # cycle: transform tests against semantics

    table = table or DEFAULT_TABLE
    constants = {
        name: TRUE if valuation.value(name) else FALSE for name in free_vars(phi)
    }
    fixed = substitute(phi, constants)
    parts = prenex_mc(fixed, FreshGen.for_formula(fixed))

    def ev(f: Formula) -> int:
        if isinstance(f, Quant):
            return evaluate(valuation, f, table)
        if isinstance(f, Var):
            return valuation.value(f.name)
        return table.apply(f.op, [ev(a) for a in f.args])

    return ev(parts)
