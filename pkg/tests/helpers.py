"""Shared fixtures: worked-example formulas and corpus samplers."""

from __future__ import annotations

import random

from qprenex.core import Formula, nblock, nbvar
from qprenex.generate import random_formula, random_problem
from qprenex.parser import Problem, parse_formula


def metrics_example() -> Formula:
    """Two nested blocks plus a negated universal: nblock 3, nbvar 4."""
    return parse_formula("(exists x . a & ~(exists x y . b)) & ~(forall y . c)")


def worked_example() -> Formula:
    """The running transform example, boolean leaves instantiated to a, b, c."""
    return parse_formula("(exists x . a & ~(exists x . b)) & ~(forall y . c)")


def xor_block_input() -> Formula:
    """Exclusive-or against an existential: (a & b) xor exists x (x | a)."""
    return parse_formula("(a & b) xor (exists x . x | a)")


def xor_block_rewrite() -> Formula:
    """The fully prenexed rewrite of :func:`xor_block_input`, spelled out by hand."""
    return parse_formula(
        "forall xn . exists xp x pv . (pv <-> (x | a)) & (pv -> (x <-> xp))"
        " & (~pv -> (x <-> xn)) & ((a & b) xor pv)"
    )


def flat_encoding_pair() -> tuple[Formula, Formula]:
    """A closed formula and its unsound flat abbreviation encoding.

    The first is unsatisfiable, the second satisfiable: abbreviating
    quantified subformulas with free definition variables at the top level
    does not preserve satisfiability.
    """
    original = parse_formula(
        "exists z . (exists x . (x <-> z) & ~x) <-> (exists y . (y <-> z) & y)"
    )
    flat = parse_formula(
        "exists z x y p q . (p <-> ((x <-> z) & ~x))"
        " & (q <-> ((y <-> z) <-> y)) & (p <-> q)"
    )
    return original, flat


def oracle_problem(rng: random.Random, limit: int = 16, **kwargs) -> Problem:
    """Random problem whose transform stays brute-force checkable.

    The transformed prefix holds exactly nblock + 2*nbvar variables, so the
    rejection below bounds oracle enumeration without constraining the
    formula shape otherwise.
    """
    size_cap = kwargs.pop("max_size", 40)
    while True:
        problem = random_problem(rng, max_size=rng.randint(4, size_cap), **kwargs)
        if nblock(problem.formula) + 2 * nbvar(problem.formula) <= limit:
            return problem


def small_formula(rng: random.Random, **kwargs) -> Formula:
    defaults = dict(pool=("a", "b", "c"), max_depth=2, max_size=12)
    defaults.update(kwargs)
    return random_formula(rng, **defaults)
