"""Shared test helpers: naive reference implementations and builders.

Everything here is written per the constraint definitions over user sets,
deliberately ignoring how the package evaluates things (per-user loops and
itertools enumeration instead of mask algebra), so agreement between the two
is meaningful evidence.
"""

from __future__ import annotations

import operator
from itertools import product
from pathlib import Path

from apep import (
    AuthorizationRelation,
    GlobalCardConstraint,
    Instance,
    LocalCardConstraint,
    PairConstraint,
    SmerConstraint,
    TeamSodConstraint,
    default_resource_names,
    default_user_names,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

_CMP = {
    "<": operator.lt,
    "<=": operator.le,
    "=": operator.eq,
    ">=": operator.ge,
    ">": operator.gt,
}


def make(rows, k, cons=()):
    """Instance from per-user resource masks with default names."""
    n = len(rows)
    return Instance.create(
        users=default_user_names(n),
        resources=default_resource_names(k),
        base=AuthorizationRelation(n, k, tuple(rows)),
        constraints=cons,
    )


def mask_eval(cols, n, c):
    """Reference constraint evaluation over per-resource user masks.

    Pair constraints are read as quantified per-user predicates; the
    existential implication takes the shared-user meaning, matching the
    package's normalization.
    """
    if isinstance(c, PairConstraint):
        a_col, b_col = cols[c.r], cols[c.r2]
        op, quant = c.op, c.quant
        if op == "implied_by":
            a_col, b_col = b_col, a_col
            op = "implies"
        if op == "implies" and quant == "exists":
            op = "iff"
        votes = []
        for u in range(n):
            a = bool(a_col >> u & 1)
            b = bool(b_col >> u & 1)
            if op == "iff":
                votes.append(a == b if quant == "forall" else a and b)
            elif op == "xor":
                votes.append(not (a and b) if quant == "forall" else a != b)
            else:
                votes.append(not a or b)
        return all(votes) if quant == "forall" else any(votes)
    if isinstance(c, GlobalCardConstraint):
        return all(
            _CMP[c.cmp](sum(col >> u & 1 for u in range(n)), c.t) for col in cols
        )
    if isinstance(c, LocalCardConstraint):
        users = {u for r in c.scope for u in range(n) if cols[r] >> u & 1}
        return _CMP[c.cmp](len(users), c.t)
    if isinstance(c, SmerConstraint):
        return not any(all(cols[r] >> u & 1 for r in c.scope) for u in range(n))
    if isinstance(c, TeamSodConstraint):
        left = {u for r in c.left for u in range(n) if cols[r] >> u & 1}
        right = {u for r in c.right for u in range(n) if cols[r] >> u & 1}
        return not left & right
    raise TypeError(f"not a constraint: {c!r}")


def nonempty_submasks_ascending(mask):
    out = []
    sub = 0
    while sub != mask:
        sub = (sub - mask) & mask
        out.append(sub)
    return out


def complete_subrelations(inst):
    """All authorized complete column tuples, leftmost column outermost.

    This is the same visiting order as the package's search, so "first hit"
    comparisons are exact.
    """
    choices = [nonempty_submasks_ascending(col) for col in inst.base.cols]
    return product(*choices)


def naive_decide(inst):
    """First eligible column tuple in enumeration order, or None."""
    for cols in complete_subrelations(inst):
        if all(mask_eval(cols, inst.n, c) for c in inst.constraints):
            return AuthorizationRelation.from_cols(inst.n, inst.k, cols)
    return None


def naive_maximize(inst):
    """(relation, size) with the first maximum in enumeration order, or None."""
    best = None
    best_size = -1
    for cols in complete_subrelations(inst):
        if all(mask_eval(cols, inst.n, c) for c in inst.constraints):
            size = sum(col.bit_count() for col in cols)
            if size > best_size:
                best_size = size
                best = cols
    if best is None:
        return None
    return AuthorizationRelation.from_cols(inst.n, inst.k, best), best_size


def core_of_cols(cols, n, constraints):
    """Core user set of a valid relation given as column masks.

    A user belongs to the core when removing them leaves some resource
    uncovered or some constraint false.  Completeness of the input is
    assumed.
    """
    core = []
    for u in range(n):
        bit = 1 << u
        if not any(col & bit for col in cols):
            continue
        stripped = tuple(col & ~bit for col in cols)
        if any(col == 0 for col in stripped) or not all(
            mask_eval(stripped, n, c) for c in constraints
        ):
            core.append(u)
    return frozenset(core)
