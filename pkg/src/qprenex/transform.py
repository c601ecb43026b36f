"""Quantifier prenexing with linear size growth and preserved quantifier depth.

The pipeline works on the outermost layer of quantifiers at a time:

* :func:`decompose_outermost` splits a formula into a boolean skeleton over
  fresh abbreviation variables plus one binding per maximal quantified
  subformula occurrence.
* :func:`step_transform` rewrites one layer: every abbreviation is defined
  by a biconditional against its body (quantified variables replaced by
  fresh positive copies), and a guard per binding ties positive to negative
  copies so the dropped quantifiers can be re-bound outside.
* :func:`prenex` iterates the step, fusing each layer's introduced variables
  into one alternating prefix; :func:`prenex_mc` instead rebuilds the boolean
  skeleton over independently prenexed subformulas, which preserves logical
  equivalence rather than just equisatisfiability.

:func:`naive_prenex` is the classic preprocessing baseline kept as a foil
and secondary oracle: quantifiers move directly across monotone operators,
while occurrences under non-monotone operators are case-split, which blows
up exponentially once such operators nest.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .core import (
    App,
    FALSE,
    Formula,
    FreshGen,
    Kind,
    NameInfo,
    Quant,
    ROLE_ABBREV,
    ROLE_NEG,
    ROLE_POS,
    TRUE,
    Var,
    abbrev_name,
    big_conj,
    conj,
    disj,
    free_vars,
    iff,
    implies,
    is_boolean,
    length,
    neg,
    neg_copy,
    pos_copy,
    substitute,
    vars_of,
)

DEFAULT_SIZE_BUDGET = 1_000_000


class SizeBudgetExceeded(Exception):
    """The baseline rewrite outgrew its budget: expected blowup, not a bug."""

    def __init__(self, size: int, budget: int):
        self.size = size
        self.budget = budget
        super().__init__(f"rewritten formula reached length {size} (budget {budget})")


class PreconditionError(ValueError):
    """A caller-supplied argument violates a stated precondition."""


@dataclass(frozen=True)
class Binding:
    """One abbreviated quantified subformula occurrence."""

    name: str
    kind: Kind
    block: tuple[str, ...]
    body: Formula
    index: int


@dataclass(frozen=True)
class Decomposition:
    """Boolean skeleton plus the bindings abbreviating its quantified parts."""

    skeleton: Formula
    bindings: tuple[Binding, ...]


@dataclass(frozen=True)
class StepResult:
    """One-layer transform output with its bookkeeping sets.

    ``neg`` holds the fresh negative copies, ``pos`` the positive copies plus
    the abbreviation variables; ``name_map`` traces every fresh name back to
    its source variable (or the abbreviation role) and binding index.
    """

    psi: Formula
    neg: frozenset[str]
    pos: frozenset[str]
    name_map: Mapping[str, NameInfo]


def decompose_outermost(phi: Formula, gen: FreshGen | None = None) -> Decomposition:
    """Abbreviate every maximal quantified subformula occurrence.

    The traversal is depth-first left-to-right; identical occurrences get
    distinct abbreviation variables (tree semantics, no sharing).  A boolean
    input yields itself with no bindings.
    """
    gen = gen or FreshGen.for_formula(phi)
    bindings: list[Binding] = []

    def walk(f: Formula) -> Formula:
        if isinstance(f, Var):
            return f
        if isinstance(f, Quant):
            index = gen.allocate()
            name = abbrev_name(index)
            bindings.append(Binding(name, f.kind, f.block, f.body, index))
            return Var(name)
        return App(f.op, tuple(walk(a) for a in f.args))

    skeleton = walk(phi)
    return Decomposition(skeleton, tuple(bindings))


def _not_in_quantifier_scope(psi: Formula, name: str) -> bool:
    """True iff ``name`` never occurs inside any quantifier of ``psi``."""
    stack: list[tuple[Formula, bool]] = [(psi, False)]
    while stack:
        f, inside = stack.pop()
        if isinstance(f, Var):
            if inside and f.name == name:
                return False
        elif isinstance(f, App):
            stack.extend((a, inside) for a in f.args)
        else:
            if name in f.block:
                return False
            stack.append((f.body, True))
    return True


def extract_quantifier(
    psi: Formula,
    p: str,
    kind: Kind,
    block: tuple[str, ...],
    phi: Formula,
    outer: tuple[str, ...],
    gen: FreshGen | None = None,
) -> Formula:
    """Move one quantifier outwards, fusing it with an existing outer block.

    Given that ``p`` abbreviates ``kind block . phi`` inside ``psi``, builds a
    formula equivalent to ``exists outer . psi[p := kind block . phi]``: the
    negative copies are bound universally outside, and ``outer``, the positive
    copies, and ``p`` itself existentially inside, with one guard equation per
    quantified variable.
    """
    gen = gen or FreshGen.for_formula(conj(psi, phi))
    if p not in vars_of(psi):
        raise PreconditionError(f"'{p}' does not occur in the host formula")
    if p in free_vars(phi):
        raise PreconditionError(f"'{p}' occurs free in the abbreviated body")
    if not _not_in_quantifier_scope(psi, p):
        raise PreconditionError(
            f"'{p}' occurs inside a quantifier scope of the host formula"
        )
    allowed = vars_of(psi) - vars_of(phi)
    stray = set(outer) - allowed
    if stray:
        raise PreconditionError(
            f"outer block variables {sorted(stray)} must occur in the host "
            "formula and not in the abbreviated body"
        )

    index = gen.allocate()
    positive = {x: pos_copy(x, index) for x in block}
    negative = {x: neg_copy(x, index) for x in block}
    sigma = {x: Var(positive[x]) for x in block}
    parts = [psi, iff(Var(p), substitute(phi, sigma))]
    head_of = (lambda q: neg(q)) if kind is Kind.EXISTS else (lambda q: q)
    for x in block:
        parts.append(implies(head_of(Var(p)), iff(Var(positive[x]), Var(negative[x]))))
    inner = Quant(
        Kind.EXISTS, tuple(outer) + tuple(positive.values()) + (p,), big_conj(parts)
    )
    return Quant(Kind.FORALL, tuple(negative.values()), inner)


def step_transform(kind: Kind, phi: Formula, gen: FreshGen | None = None) -> StepResult:
    """Rewrite one quantifier layer away, for re-binding under ``kind``.

    Every abbreviation gets a defining biconditional (with its block replaced
    by fresh positive copies) and, for non-empty blocks, exactly one guard:
    for an existential binding the copies must agree when the abbreviation is
    false, for a universal one when it is true.  The conjunction of these is
    conjoined with the skeleton when ``kind`` is FORALL and made to imply it
    when ``kind`` is EXISTS.
    """
    gen = gen or FreshGen.for_formula(phi)
    decomposition = decompose_outermost(phi, gen)
    if not decomposition.bindings:
        return StepResult(phi, frozenset(), frozenset(), {})

    parts: list[Formula] = []
    negatives: set[str] = set()
    positives: set[str] = set()
    name_map: dict[str, NameInfo] = {}
    for b in decomposition.bindings:
        positives.add(b.name)
        name_map[b.name] = NameInfo(ROLE_ABBREV, "abbrev", b.index)
        sigma = {x: Var(pos_copy(x, b.index)) for x in b.block}
        parts.append(iff(Var(b.name), substitute(b.body, sigma)))
        if b.block:
            equalities = big_conj(
                [
                    iff(Var(pos_copy(x, b.index)), Var(neg_copy(x, b.index)))
                    for x in b.block
                ]
            )
            head = neg(Var(b.name)) if b.kind is Kind.EXISTS else Var(b.name)
            parts.append(implies(head, equalities))
        for x in b.block:
            positives.add(pos_copy(x, b.index))
            negatives.add(neg_copy(x, b.index))
            name_map[pos_copy(x, b.index)] = NameInfo(ROLE_POS, x, b.index)
            name_map[neg_copy(x, b.index)] = NameInfo(ROLE_NEG, x, b.index)

    core = big_conj(parts)
    if kind is Kind.FORALL:
        psi = conj(core, decomposition.skeleton)
    else:
        psi = implies(core, decomposition.skeleton)
    return StepResult(psi, frozenset(negatives), frozenset(positives), name_map)


def prenex_tracked(
    kind: Kind, phi: Formula, gen: FreshGen | None = None
) -> tuple[Formula, frozenset[str]]:
    """Like :func:`prenex`, also returning the first layer's negative copies."""
    gen = gen or FreshGen.for_formula(phi)

    def go(q: Kind, f: Formula) -> tuple[Formula, frozenset[str]]:
        if is_boolean(f):
            return f, frozenset()
        step = step_transform(q, f, gen)
        inner, inner_negatives = go(q.dual, step.psi)
        fused = Quant(q.dual, tuple(step.pos | inner_negatives), inner)
        return fused, step.neg

    return go(kind, phi)


def prenex(kind: Kind, phi: Formula, gen: FreshGen | None = None) -> Formula:
    """Full prenexing for satisfiability (EXISTS) or validity (FORALL) use.

    Boolean formulas pass through unchanged.  Otherwise one layer is rewritten
    and the recursion continues under the dual kind; each layer's positive
    copies fuse with the next layer's negative copies into a single block, so
    quantifier depth is preserved.
    """
    return prenex_tracked(kind, phi, gen)[0]


def prenex_mc(phi: Formula, gen: FreshGen | None = None) -> Formula:
    """Equivalence-preserving rewrite into a boolean combination of prenex parts.

    Each maximal quantified subformula is prenexed on its own and re-bound
    under its original kind, with the inner negative copies fused into the
    original block; the boolean skeleton survives as-is, so free variables
    are untouched.
    """
    gen = gen or FreshGen.for_formula(phi)
    decomposition = decompose_outermost(phi, gen)
    if not decomposition.bindings:
        return phi
    replacements: dict[str, Formula] = {}
    for b in decomposition.bindings:
        inner, negatives = prenex_tracked(b.kind, b.body, gen)
        replacements[b.name] = Quant(b.kind, b.block + tuple(negatives), inner)
    return substitute(decomposition.skeleton, replacements)


# ---------------------------------------------------------------------------
# Naive baseline

_MONOTONE = ("and", "or", "not", "imp")


def _fold_at_root(f: Formula) -> Formula:
    """Single-node constant folding after one argument became a constant."""
    if not isinstance(f, App) or f.op not in ("and", "or", "imp", "iff", "xor", "not"):
        return f
    if f.op == "not":
        (a,) = f.args
        if a == TRUE:
            return FALSE
        if a == FALSE:
            return TRUE
        return f
    a, b = f.args
    if f.op == "and":
        if a == FALSE or b == FALSE:
            return FALSE
        if a == TRUE:
            return b
        if b == TRUE:
            return a
    elif f.op == "or":
        if a == TRUE or b == TRUE:
            return TRUE
        if a == FALSE:
            return b
        if b == FALSE:
            return a
    elif f.op == "imp":
        if a == FALSE or b == TRUE:
            return TRUE
        if a == TRUE:
            return b
        if b == FALSE:
            return _fold_at_root(neg(a))
    elif f.op == "iff":
        if a == TRUE:
            return b
        if b == TRUE:
            return a
        if a == FALSE:
            return _fold_at_root(neg(b))
        if b == FALSE:
            return _fold_at_root(neg(a))
    else:  # xor
        if a == FALSE:
            return b
        if b == FALSE:
            return a
        if a == TRUE:
            return _fold_at_root(neg(b))
        if b == TRUE:
            return _fold_at_root(neg(a))
    return f


def _conj2(a: Formula, b: Formula) -> Formula:
    if a == FALSE or b == FALSE:
        return FALSE
    if a == TRUE:
        return b
    if b == TRUE:
        return a
    return conj(a, b)


def _disj2(a: Formula, b: Formula) -> Formula:
    if a == TRUE or b == TRUE:
        return TRUE
    if a == FALSE:
        return b
    if b == FALSE:
        return a
    return disj(a, b)


def _dual_prenex(phi: Formula) -> Formula:
    """Negation of a prenex formula, kept prenex: dual prefix, negated matrix."""
    blocks: list[tuple[Kind, tuple[str, ...]]] = []
    while isinstance(phi, Quant):
        blocks.append((phi.kind.dual, phi.block))
        phi = phi.body
    result = neg(phi)
    for kind, names in reversed(blocks):
        result = Quant(kind, names, result)
    return result


class _NaivePrenexer:
    """Classic preprocessing: direct movement across monotone operators,
    case splits under non-monotone ones, one prefix pull at the end."""

    def __init__(self, gen: FreshGen, budget: int):
        self.gen = gen
        self.budget = budget

    def run(self, phi: Formula) -> Formula:
        rewritten = self._process(phi)
        self._check(rewritten)
        return self._pull(rewritten, frozenset(free_vars(rewritten)))

    def _check(self, f: Formula) -> None:
        size = length(f)
        if size > self.budget:
            raise SizeBudgetExceeded(size, self.budget)

    def _process(self, f: Formula) -> Formula:
        """Remove quantifiers from non-monotone contexts, bottom-up."""
        if isinstance(f, Var):
            return f
        if isinstance(f, Quant):
            return Quant(f.kind, f.block, self.run(f.body))
        if f.op in _MONOTONE or not f.args:
            return App(f.op, tuple(self._process(a) for a in f.args))
        return self._eliminate(App(f.op, tuple(self._process(a) for a in f.args)))

    def _eliminate(self, f: Formula) -> Formula:
        """Case-split every quantified argument of a non-monotone operator."""
        if not isinstance(f, App) or is_boolean(f):
            return f
        if f.op in _MONOTONE:
            # Folding may re-expose a monotone root; anything quantified
            # beneath it is fine where it is.
            return f
        for j, arg in enumerate(f.args):
            if is_boolean(arg):
                continue
            chunk = self._pull(arg, frozenset(free_vars(arg)))
            on_true = self._eliminate(
                _fold_at_root(App(f.op, f.args[:j] + (TRUE,) + f.args[j + 1 :]))
            )
            on_false = self._eliminate(
                _fold_at_root(App(f.op, f.args[:j] + (FALSE,) + f.args[j + 1 :]))
            )
            positive = _conj2(on_true, chunk)
            if on_false == FALSE:
                result = positive
            else:
                result = _disj2(positive, _conj2(on_false, _dual_prenex(chunk)))
            self._check(result)
            return result
        return f

    def _pull(self, f: Formula, reserved: frozenset[str]) -> Formula:
        """Pull all prefixes out across and/or/not/imp, left to right.

        Block variables are renamed only when they collide with a name already
        reserved (a free variable or an earlier pulled block), which keeps the
        common case readable while making the concatenated prefix sound.
        """
        taken = set(reserved)
        prefix: list[tuple[Kind, tuple[str, ...]]] = []

        def walk(g: Formula, env: dict[str, str], flip: bool) -> Formula:
            while isinstance(g, Quant):
                env = dict(env)
                fresh: list[str] = []
                for x in g.block:
                    if x in taken:
                        new = pos_copy(x, self.gen.allocate())
                    else:
                        new = x
                    taken.add(new)
                    env[x] = new
                    fresh.append(new)
                prefix.append((g.kind.dual if flip else g.kind, tuple(fresh)))
                g = g.body
            if isinstance(g, Var):
                name = env.get(g.name, g.name)
                return Var(name) if name != g.name else g
            if g.op == "not":
                return neg(walk(g.args[0], env, not flip))
            if g.op == "imp":
                left = walk(g.args[0], env, not flip)
                right = walk(g.args[1], env, flip)
                return implies(left, right)
            if g.op in ("and", "or"):
                return App(g.op, tuple(walk(a, env, flip) for a in g.args))
            # Quantifier-free subtree: only renaming applies.
            renames = {old: Var(new) for old, new in env.items() if old != new}
            return substitute(g, renames) if renames else g

        matrix = walk(f, {}, False)
        result = matrix
        for kind, names in reversed(prefix):
            result = Quant(kind, names, result)
        return result


def naive_prenex(
    phi: Formula,
    gen: FreshGen | None = None,
    budget: int = DEFAULT_SIZE_BUDGET,
) -> Formula:
    """Exponential-in-the-worst-case baseline prenexing.

    Quantifiers move straight across and/or/not/imp; an occurrence under any
    other operator is eliminated by a case split on its truth value, doubling
    that context.  Prefixes concatenate in left-to-right traversal order,
    which is one arbitrary sound choice among many.  Raises
    :class:`SizeBudgetExceeded` when the output length passes ``budget``.
    """
    gen = gen or FreshGen.for_formula(phi)
    return _NaivePrenexer(gen, budget).run(phi)
