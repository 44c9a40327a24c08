"""Solvers and routing.

Specialized algorithms per constraint profile, each returning a uniform
report.  The exponential parts are parameterized by the resource count k
(patterns, subset DP, kernels), never by the user count.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations, islice
from typing import Callable, Iterator, Sequence

from .matching import max_weight_row_saturating
from .model import (
    AuthorizationRelation,
    Instance,
    PairConstraint,
    indices_of,
)
from .oracle import DEFAULT_BUDGET, CapacityError, brute_maximize
from .reduce import (
    TriviallyUnsat,
    WspInstance,
    apply_reduction_rule,
    eliminate_bod_u,
    from_wsp_plan,
    lift_merged_classes,
    lift_removed_users,
    to_wsp,
)
from .oracle import brute_decide
from .verify import check_valid, instance_bound

MAX_PATTERN_RESOURCES = 16


@dataclass(frozen=True)
class SolveReport:
    """Uniform solver outcome.

    ``max_size`` is filled by routes that compute the maximum solution size;
    decision-only routes leave it None.  ``counters`` carries route-specific
    work measures: patterns_explored, users_removed, dp_states.
    """

    algorithm: str
    satisfiable: bool
    witness: AuthorizationRelation | None = None
    max_size: int | None = None
    counters: dict = field(default_factory=dict)
    wall_time: float = 0.0


# ---------------------------------------------------------------------------
# Patterns
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pattern:
    """A set partition of the resources into non-empty blocks.

    Blocks are resource masks, disjoint, covering all resources, ordered by
    their smallest member.  A pattern stands for a solution shape: resources
    in one block are served by one dedicated user.
    """

    n_resources: int
    blocks: tuple[int, ...]

    def __post_init__(self) -> None:
        union = 0
        prev_low = -1
        for b in self.blocks:
            if b == 0:
                raise ValueError("empty block")
            if b & union:
                raise ValueError("blocks overlap")
            low = b & -b
            if low <= prev_low:
                raise ValueError("blocks must be ordered by smallest member")
            prev_low = low
            union |= b
        if union != (1 << self.n_resources) - 1:
            raise ValueError("blocks must cover every resource")

    @classmethod
    def from_sets(cls, n_resources: int, sets: Sequence[Sequence[int]]) -> "Pattern":
        masks = []
        for s in sets:
            mask = 0
            for r in s:
                mask |= 1 << r
            masks.append(mask)
        masks.sort(key=lambda b: b & -b)
        return cls(n_resources, tuple(masks))


def enumerate_eligible_patterns(
    k: int, conflicts: Sequence[tuple[int, int]]
) -> Iterator[Pattern]:
    """Set partitions of k resources, skipping blocks that contain a
    conflicting pair.

    Enumeration follows restricted growth strings in ascending lexicographic
    order: resource 0 opens block 0, each later resource joins an existing
    block (in order) or opens the next one.
    """
    conf = [0] * k
    for a, b in conflicts:
        conf[a] |= 1 << b
        conf[b] |= 1 << a

    blocks: list[int] = []

    def rec(i: int) -> Iterator[Pattern]:
        if i == k:
            yield Pattern(k, tuple(blocks))
            return
        bit = 1 << i
        for b in range(len(blocks)):
            if blocks[b] & conf[i]:
                continue
            blocks[b] |= bit
            yield from rec(i + 1)
            blocks[b] &= ~bit
        blocks.append(bit)
        yield from rec(i + 1)
        blocks.pop()

    if k == 0:
        return
    yield from rec(0)


def _conflict_pairs(inst: Instance) -> list[tuple[int, int]]:
    pairs = []
    for c in inst.constraints:
        if isinstance(c, PairConstraint) and c.op == "xor" and c.quant == "forall":
            pairs.append((c.r, c.r2))
    return pairs


class _PatternContext:
    """Shared tables for valuing patterns against one instance.

    For each distinct base row (user profile) m, ``omega[m][T]`` is the size
    of the largest conflict-free resource set X with T <= X <= m, or -1 when
    none exists, and ``choice[m][T]`` is the first such X of maximum size
    (smaller mask wins ties).  Matching collapses equal profiles: a block can
    always take the lowest-index users of whichever profile serves it best,
    and at most k blocks exist, so only min(k, count) candidates per profile
    are ever needed.
    """

    def __init__(self, inst: Instance):
        if inst.k > MAX_PATTERN_RESOURCES:
            raise CapacityError(
                f"pattern search supports up to {MAX_PATTERN_RESOURCES} resources"
            )
        self.inst = inst
        self.k = inst.k
        size = 1 << inst.k
        conf = [0] * inst.k
        for a, b in _conflict_pairs(inst):
            conf[a] |= 1 << b
            conf[b] |= 1 << a
        indep = [True] * size
        for x in range(1, size):
            low = x & -x
            r = low.bit_length() - 1
            rest = x ^ low
            indep[x] = indep[rest] and not conf[r] & rest
        self._indep = indep

        profile_users: dict[int, list[int]] = {}
        for u, row in enumerate(inst.base.rows):
            profile_users.setdefault(row, []).append(u)
        self.profile_users = profile_users
        self.pool = [
            (u, m)
            for m in sorted(profile_users)
            for u in profile_users[m][: min(inst.k, len(profile_users[m]))]
        ]
        self._tables: dict[int, tuple[list[int], list[int]]] = {}

    def tables_for(self, m: int) -> tuple[list[int], list[int]]:
        cached = self._tables.get(m)
        if cached is not None:
            return cached
        size = 1 << self.k
        omega = [-1] * size
        choice = [0] * size
        sub = 0
        while True:
            if self._indep[sub]:
                omega[sub] = sub.bit_count()
                choice[sub] = sub
            if sub == m:
                break
            sub = (sub - m) & m
        for b in range(self.k):
            bit = 1 << b
            for t in range(size):
                if not t & bit:
                    up = t | bit
                    if omega[up] > omega[t] or (
                        omega[up] == omega[t] and choice[up] < choice[t]
                    ):
                        omega[t] = omega[up]
                        choice[t] = choice[up]
        self._tables[m] = (omega, choice)
        return omega, choice

    def evaluate(self, pattern: Pattern) -> tuple[AuthorizationRelation, int] | None:
        inst = self.inst
        d = len(pattern.blocks)
        if d > inst.n:
            return None

        base_total = 0
        for m, users in self.profile_users.items():
            base_total += self.tables_for(m)[0][0] * len(users)

        weights: list[list[int | None]] = []
        for block in pattern.blocks:
            row: list[int | None] = []
            for u, m in self.pool:
                omega = self.tables_for(m)[0]
                w = omega[block]
                row.append(None if w < 0 else w - omega[0])
            weights.append(row)
        matched = max_weight_row_saturating(weights)
        if matched is None:
            return None
        assignment, gain = matched

        rows = [self.tables_for(m)[1][0] for m in inst.base.rows]
        for i, c in enumerate(assignment):
            u, m = self.pool[c]
            rows[u] = self.tables_for(m)[1][pattern.blocks[i]]
        rel = AuthorizationRelation(inst.n, inst.k, tuple(rows))
        value = base_total + gain
        assert check_valid(inst, rel).valid and rel.size == value
        return rel, value


def pattern_value(
    inst: Instance, pattern: Pattern
) -> tuple[AuthorizationRelation, int] | None:
    """Best valid relation whose solution shape refines the given pattern.

    The instance may carry universal-xor constraints only.  Returns the
    relation and its size, or None when the pattern needs more dedicated
    users than exist.  Patterns that put a separated pair in one block are
    rejected as errors.
    """
    kinds = inst.constraint_kinds()
    if not kinds <= {"sod_u"}:
        raise ValueError(f"pattern valuation needs universal-xor only, got {sorted(kinds)}")
    if pattern.n_resources != inst.k:
        raise ValueError("pattern resource count does not match the instance")
    for a, b in _conflict_pairs(inst):
        for block in pattern.blocks:
            if block >> a & 1 and block >> b & 1:
                raise ValueError(
                    f"pattern is not eligible: separated pair ({a}, {b}) shares a block"
                )
    return _PatternContext(inst).evaluate(pattern)


def max_sod_u(inst: Instance) -> SolveReport:
    """Maximize for instances with only universal-xor constraints.

    Sweeps eligible patterns and keeps the best realizable one.  Every valid
    relation refines some eligible pattern, so the best pattern value is the
    maximum solution size.
    """
    t0 = time.perf_counter()
    kinds = inst.constraint_kinds()
    if not kinds <= {"sod_u"}:
        raise ValueError(f"this route needs universal-xor only, got {sorted(kinds)}")
    ctx = _PatternContext(inst)
    best: tuple[AuthorizationRelation, int] | None = None
    explored = 0
    for pattern in enumerate_eligible_patterns(inst.k, _conflict_pairs(inst)):
        explored += 1
        res = ctx.evaluate(pattern)
        if res is not None and (best is None or res[1] > best[1]):
            best = res
    return SolveReport(
        algorithm="sod_u_patterns",
        satisfiable=best is not None,
        witness=None if best is None else best[0],
        max_size=None if best is None else best[1],
        counters={"patterns_explored": explored},
        wall_time=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Weighted partition DP and existential-xor maximization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndexFamily:
    """Candidate user sets for the existential-xor maximization.

    ``members`` are the distinct candidate user masks, largest first
    (cardinality descending, ascending index order inside equal sizes).
    ``fit_masks[i]`` holds the resources whose permitted set contains member
    i.  ``by_resource[r]`` lists the members contributed by resource r.
    """

    members: tuple[int, ...]
    fit_masks: tuple[int, ...]
    by_resource: tuple[tuple[int, ...], ...]


def _user_mask_sort_key(mask: int):
    return (-mask.bit_count(), indices_of(mask))


def build_index_family(inst: Instance) -> IndexFamily:
    """Pick the candidate user sets that suffice for maximization.

    A resource with a small permitted set contributes all of its non-empty
    subsets.  A large one contributes only its d+1 largest subsets, where d
    counts its distinct existential-xor partners: at most d of the largest
    subsets can be unavailable to it in an optimal partition, one per
    partner forced to differ.
    """
    kinds = inst.constraint_kinds()
    if not kinds <= {"sod_e"}:
        raise ValueError(f"this route needs existential-xor only, got {sorted(kinds)}")
    k = inst.k
    threshold = k.bit_length() - 1
    partners: dict[int, set[int]] = {r: set() for r in range(k)}
    for c in inst.constraints:
        if isinstance(c, PairConstraint) and c.op == "xor" and c.quant == "exists":
            partners[c.r].add(c.r2)
            partners[c.r2].add(c.r)

    by_resource: list[tuple[int, ...]] = []
    for r in range(k):
        col = inst.base.cols[r]
        users = indices_of(col)
        if len(users) <= threshold:
            cand = sorted(
                (sub for sub in _nonempty_submasks(col)), key=_user_mask_sort_key
            )
        else:
            gen = (
                _mask_of(combo)
                for size in range(len(users), 0, -1)
                for combo in combinations(users, size)
            )
            cand = list(islice(gen, len(partners[r]) + 1))
        by_resource.append(tuple(cand))

    members = sorted({x for cands in by_resource for x in cands}, key=_user_mask_sort_key)
    fit = []
    for x in members:
        mask = 0
        for r in range(k):
            if x & ~inst.base.cols[r] == 0:
                mask |= 1 << r
        fit.append(mask)
    return IndexFamily(tuple(members), tuple(fit), tuple(by_resource))


def _mask_of(indices: Sequence[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def _nonempty_submasks(mask: int) -> Iterator[int]:
    sub = 0
    while sub != mask:
        sub = (sub - mask) & mask
        yield sub


def max_weighted_partition(
    k: int, functions: Sequence[Callable[[int], int]]
) -> tuple[tuple[int, ...], int]:
    """Partition k items among the functions to maximize the summed values.

    Each function receives one (possibly empty) block, the blocks are
    disjoint and cover all items.  Layered subset DP, O(p * 3^k) evaluations,
    with back-pointers for the arg-max.  Ties keep the first block in
    ascending submask order, so results are deterministic.
    """
    p = len(functions)
    if p == 0:
        raise ValueError("need at least one function")
    size = 1 << k
    full = size - 1
    neg = -(1 << 60)

    tabs = [[f(T) for T in range(size)] for f in functions]
    h = [0 if S == 0 else neg for S in range(size)]
    bps: list[list[int]] = []
    for tab in tabs:
        nh = [neg] * size
        nbp = [0] * size
        for S in range(size):
            best = neg
            best_t = 0
            T = 0
            while True:
                prev = h[S ^ T]
                if prev > neg:
                    v = prev + tab[T]
                    if v > best:
                        best = v
                        best_t = T
                if T == S:
                    break
                T = (T - S) & S
            nh[S] = best
            nbp[S] = best_t
        h = nh
        bps.append(nbp)

    assignment = [0] * p
    S = full
    for i in range(p - 1, -1, -1):
        assignment[i] = bps[i][S]
        S ^= assignment[i]
    assert S == 0
    return tuple(assignment), h[full]


def _zeta_in_place(values: list[int], k: int) -> None:
    for b in range(k):
        bit = 1 << b
        for S in range(1 << k):
            if S & bit:
                values[S] += values[S ^ bit]


def max_weighted_partition_fast_value(
    k: int, functions: Sequence[Callable[[int], int]]
) -> int:
    """Value of the maximum weighted partition via subset convolution.

    Encodes each table entry v as a huge power of two (one digit of width B
    per unit of value) so that ranked zeta transforms and pointwise products
    compute all p-fold disjoint covers at once; the position of the top
    digit of the final count reads off the maximum.  Matches
    :func:`max_weighted_partition` exactly and runs in O(p^2 * 2^k * k^2)
    big-integer operations.
    """
    p = len(functions)
    if p == 0:
        raise ValueError("need at least one function")
    size = 1 << k
    tabs = [[f(T) for T in range(size)] for f in functions]
    m = max(1, max(abs(v) for tab in tabs for v in tab))
    width = p * k + k + 8  # digit width; counts stay below 2^(p*k + k)

    # hhat[r][S]: encoded count of i-tuples of subsets of S with total rank r
    hhat: list[list[int]] = [[0] * size for _ in range(k + 1)]
    for S in range(size):
        hhat[0][S] = 1

    for tab in tabs:
        fhat: list[list[int]] = [[0] * size for _ in range(k + 1)]
        for T in range(size):
            fhat[T.bit_count()][T] = 1 << (width * (tab[T] + m))
        for r in range(k + 1):
            _zeta_in_place(fhat[r], k)
        nhat: list[list[int]] = [[0] * size for _ in range(k + 1)]
        for r in range(k + 1):
            out = nhat[r]
            for a in range(r + 1):
                ha = hhat[a]
                fb = fhat[r - a]
                for S in range(size):
                    va = ha[S]
                    if va:
                        vb = fb[S]
                        if vb:
                            out[S] += va * vb
        hhat = nhat

    full = size - 1
    total = 0
    for S in range(size):
        c = hhat[k][S]
        if c:
            if (full ^ S).bit_count() & 1:
                total -= c
            else:
                total += c
    assert total > 0, "some partition always exists"
    top_digit = (total.bit_length() - 1) // width
    return top_digit - p * m


def max_sod_e(inst: Instance) -> SolveReport:
    """Maximize for instances with only existential-xor constraints.

    Candidate user sets from the index family become partition functions:
    assigning block T to candidate X means every resource in T gets exactly
    the users X.  Infeasible combinations score an impossible penalty, so
    the optimum is at least 1 exactly when the instance is satisfiable.
    """
    t0 = time.perf_counter()
    kinds = inst.constraint_kinds()
    if not kinds <= {"sod_e"}:
        raise ValueError(f"this route needs existential-xor only, got {sorted(kinds)}")
    if inst.k > MAX_PATTERN_RESOURCES:
        raise CapacityError(
            f"subset DP supports up to {MAX_PATTERN_RESOURCES} resources"
        )

    k = inst.k
    size = 1 << k
    conf = [0] * k
    for c in inst.constraints:
        assert isinstance(c, PairConstraint)
        conf[c.r] |= 1 << c.r2
        conf[c.r2] |= 1 << c.r
    indep = [True] * size
    for x in range(1, size):
        low = x & -x
        r = low.bit_length() - 1
        rest = x ^ low
        indep[x] = indep[rest] and not conf[r] & rest

    fam = build_index_family(inst)
    penalty = -(inst.base.size + 1)

    def make_f(x: int, fit: int) -> Callable[[int], int]:
        gain = x.bit_count()

        def f(T: int) -> int:
            if T == 0:
                return 0
            if indep[T] and T & ~fit == 0:
                return T.bit_count() * gain
            return penalty

        return f

    functions = [make_f(x, fit) for x, fit in zip(fam.members, fam.fit_masks)]
    assignment, value = max_weighted_partition(k, functions)
    satisfiable = value >= 1

    witness = None
    if satisfiable:
        cols = [0] * k
        for x, block in zip(fam.members, assignment):
            for r in indices_of(block):
                cols[r] = x
        witness = AuthorizationRelation.from_cols(inst.n, k, cols)
        assert check_valid(inst, witness).valid and witness.size == value

    return SolveReport(
        algorithm="sod_e_partition",
        satisfiable=satisfiable,
        witness=witness,
        max_size=value if satisfiable else None,
        counters={"dp_states": len(functions) * size},
        wall_time=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Polynomial profiles
# ---------------------------------------------------------------------------


def solve_bod_u(inst: Instance) -> SolveReport:
    """Instances whose constraints are all universal-iff (or none).

    Merging resource classes decides everything: satisfiable exactly when
    every class keeps a common permitted user, and the expanded class
    intersections form the largest solution.
    """
    t0 = time.perf_counter()
    kinds = inst.constraint_kinds()
    if not kinds <= {"bod_u"}:
        raise ValueError(f"this route needs universal-iff only, got {sorted(kinds)}")
    res = eliminate_bod_u(inst)
    if isinstance(res, TriviallyUnsat):
        return SolveReport(
            algorithm="bod_u_merge",
            satisfiable=False,
            counters={"reason": res.reason},
            wall_time=time.perf_counter() - t0,
        )
    merged, trace = res
    witness = lift_merged_classes(inst, trace, merged.base)
    assert check_valid(inst, witness).valid
    return SolveReport(
        algorithm="bod_u_merge",
        satisfiable=True,
        witness=witness,
        max_size=witness.size,
        wall_time=time.perf_counter() - t0,
    )


def solve_bod_e(inst: Instance) -> SolveReport:
    """Instances whose constraints are all existential-iff.

    Shared users only become easier to find as the relation grows, so the
    base relation itself is the decisive candidate and the maximum.
    """
    t0 = time.perf_counter()
    kinds = inst.constraint_kinds()
    if not kinds <= {"bod_e"}:
        raise ValueError(f"this route needs existential-iff only, got {sorted(kinds)}")
    verdict = check_valid(inst, inst.base)
    return SolveReport(
        algorithm="bod_e_base",
        satisfiable=verdict.valid,
        witness=inst.base if verdict.valid else None,
        max_size=inst.base.size if verdict.valid else None,
        wall_time=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Kernel route for arbitrary bounded mixes
# ---------------------------------------------------------------------------


def solve_bounded(inst: Instance, kernel_budget: int = 1 << 60) -> SolveReport:
    """Decision route for any mix of the modeled constraint species.

    Merges universal-iff classes when only pair constraints are present
    and truncates user families to the instance's core bound, then decides
    the kernel exhaustively.  The kernel has at most 2^k * f users, so the
    search is independent of the original user count.
    """
    t0 = time.perf_counter()
    work = inst
    merge_trace = None
    if all(isinstance(c, PairConstraint) for c in inst.constraints):
        res = eliminate_bod_u(inst)
        if isinstance(res, TriviallyUnsat):
            return SolveReport(
                algorithm="bounded_kernel",
                satisfiable=False,
                counters={"users_removed": 0, "reason": res.reason},
                wall_time=time.perf_counter() - t0,
            )
        work, merge_trace = res

    f = instance_bound(work)
    kernel, kernel_trace = apply_reduction_rule(work, f)
    found = brute_decide(kernel, budget=kernel_budget)
    removed = len(kernel_trace.removed_users)
    if found is None:
        return SolveReport(
            algorithm="bounded_kernel",
            satisfiable=False,
            counters={"users_removed": removed},
            wall_time=time.perf_counter() - t0,
        )
    witness = lift_removed_users(work, kernel, found)
    if merge_trace is not None:
        witness = lift_merged_classes(inst, merge_trace, witness)
    assert check_valid(inst, witness).valid
    return SolveReport(
        algorithm="bounded_kernel",
        satisfiable=True,
        witness=witness,
        counters={"users_removed": removed},
        wall_time=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Planning route for existential-iff plus universal-xor
# ---------------------------------------------------------------------------


def solve_wsp(
    wsp: WspInstance, stats: dict | None = None
) -> tuple[int, ...] | None:
    """Find a plan for a step instance, or None when there is none.

    Steps tied by equalities are contracted first; the contracted classes
    are then grouped into same-user blocks (patterns again), and a block
    grouping is realizable when distinct users can be matched to blocks,
    each authorized for every step inside their block.
    """
    n_steps = wsp.n_steps
    parent = list(range(n_steps))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in wsp.eq_pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    roots = sorted({find(s) for s in range(n_steps)})
    class_index = {root: i for i, root in enumerate(roots)}
    nc = len(roots)
    class_auth = [-1] * nc
    for s in range(n_steps):
        class_auth[class_index[find(s)]] &= wsp.auth[s]

    conflicts = set()
    for a, b in wsp.neq_pairs:
        ca, cb = class_index[find(a)], class_index[find(b)]
        if ca == cb:
            return None  # a step pair must both share and not share a user
        conflicts.add((min(ca, cb), max(ca, cb)))
    if any(a == 0 for a in class_auth):
        return None

    explored = 0
    for pattern in enumerate_eligible_patterns(nc, sorted(conflicts)):
        explored += 1
        users: set[int] = set()
        for block in pattern.blocks:
            auth = -1
            for c in indices_of(block):
                auth &= class_auth[c]
            users.update(indices_of(auth & ((1 << len(wsp.user_names)) - 1)))
        pool = sorted(users)
        col_of = {u: i for i, u in enumerate(pool)}
        weights: list[list[int | None]] = []
        for block in pattern.blocks:
            auth = -1
            for c in indices_of(block):
                auth &= class_auth[c]
            weights.append(
                [0 if auth >> u & 1 else None for u in pool]
            )
        if len(weights) > len(pool):
            continue
        matched = max_weight_row_saturating(weights)
        if matched is None:
            continue
        assignment, _ = matched
        if stats is not None:
            stats["patterns_explored"] = explored
        plan = [0] * n_steps
        block_user = [pool[c] for c in assignment]
        class_block = {}
        for i, block in enumerate(pattern.blocks):
            for c in indices_of(block):
                class_block[c] = i
        for s in range(n_steps):
            plan[s] = block_user[class_block[class_index[find(s)]]]
        return tuple(plan)

    if stats is not None:
        stats["patterns_explored"] = explored
    return None


def solve_bod_e_sod_u(inst: Instance) -> SolveReport:
    """Decision route for existential-iff plus universal-xor mixes.

    Rewrites the instance to the step planning form, then maps a solved
    plan back to a relation.
    """
    t0 = time.perf_counter()
    wsp = to_wsp(inst)
    stats: dict = {}
    plan = solve_wsp(wsp, stats)
    witness = None if plan is None else from_wsp_plan(inst, wsp, plan)
    return SolveReport(
        algorithm="bod_e_sod_u_wsp",
        satisfiable=plan is not None,
        witness=witness,
        counters={
            "steps": wsp.n_steps,
            "patterns_explored": stats.get("patterns_explored", 0),
        },
        wall_time=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Routing
# ---------------------------------------------------------------------------


def _brute_report(inst: Instance, t0: float) -> SolveReport:
    try:
        res = brute_maximize(inst, budget=DEFAULT_BUDGET)
    except CapacityError as e:
        raise CapacityError(
            f"{e}; maximization over this constraint mix has no reduced route, "
            "try mode=decide"
        ) from None
    return SolveReport(
        algorithm="brute_force",
        satisfiable=res is not None,
        witness=None if res is None else res[0],
        max_size=None if res is None else res[1],
        wall_time=time.perf_counter() - t0,
    )


def dispatch(inst: Instance, mode: str = "decide") -> SolveReport:
    """Route an instance to the most specific applicable algorithm.

    Decision instances with arbitrary species mixes go through the kernel
    route; maximization falls back to exhaustive search when no specialized
    route applies, guarded by the search budget.
    """
    if mode not in ("decide", "max"):
        raise ValueError(f"unknown mode {mode!r}")
    t0 = time.perf_counter()
    kinds = inst.constraint_kinds()
    if kinds <= {"bod_u"}:
        return solve_bod_u(inst)
    if kinds == {"bod_e"}:
        return solve_bod_e(inst)
    if kinds == {"sod_u"}:
        return max_sod_u(inst)
    if kinds == {"sod_e"}:
        return max_sod_e(inst)
    if kinds <= {"bod_e", "sod_u"}:
        if mode == "decide":
            return solve_bod_e_sod_u(inst)
        return _brute_report(inst, t0)
    if mode == "decide":
        return solve_bounded(inst)
    return _brute_report(inst, t0)
