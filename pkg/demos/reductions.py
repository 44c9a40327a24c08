"""Shrink instances before solving: user families and resource merging.

The first half groups users by their permitted resource sets and keeps
only as many per family as any minimal solution could need.  The second
half merges resources tied by universal binding into one representative
and lifts the solution back afterwards.
"""

from pathlib import Path

from apep import (
    AuthorizationRelation,
    Instance,
    PairConstraint,
    apply_reduction_rule,
    check_valid,
    dispatch,
    eliminate_bod_u,
    instance_bound,
    lift_merged_classes,
    lift_removed_users,
    partition_families,
)
from apep.cli import load_instance

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def family_demo() -> None:
    inst = load_instance(str(FIXTURES / "distinct_teams_8x3.json"))
    print(f"instance: {inst.n} users, {inst.k} resources")

    fams = partition_families(inst)
    for mask, members in zip(fams.masks, fams.members):
        names = [inst.resources[r] for r in range(inst.k) if mask >> r & 1]
        users = [inst.users[u] for u in members]
        print(f"  family {{{', '.join(names)}}}: {' '.join(users)}")

    f = instance_bound(inst)
    reduced, trace = apply_reduction_rule(inst, f)
    print(f"per-family bound f={f}, removed: {' '.join(trace.removed_users)}")

    report = dispatch(reduced, "decide")
    print(f"reduced decision: {'sat' if report.satisfiable else 'unsat'}")
    lifted = lift_removed_users(inst, reduced, report.witness)
    print(f"lifted witness valid: {check_valid(inst, lifted).valid}")
    print()


def merge_demo() -> None:
    # a chain of universal bindings collapses r1, r2, r3 into one resource
    inst = Instance.create(
        users=("ana", "bo", "chris"),
        resources=("r1", "r2", "r3"),
        base=AuthorizationRelation(3, 3, (0b011, 0b111, 0b110)),
        constraints=[
            PairConstraint(0, 1, "iff", "forall"),
            PairConstraint(1, 2, "iff", "forall"),
        ],
    )
    res = eliminate_bod_u(inst)
    if not isinstance(res, tuple):
        print(f"trivially unsatisfiable: {res.reason}")
        return
    reduced, trace = res
    for names in trace.resource_classes:
        if len(names) > 1:
            print(f"merged {' '.join(names)} into {names[0]}")
    print(f"resources {inst.k} -> {reduced.k}")

    report = dispatch(reduced, "max")
    lifted = lift_merged_classes(inst, trace, report.witness)
    print(f"witness on the merged instance: {reduced.relation_to_names(report.witness)}")
    print(f"lifted back: {inst.relation_to_names(lifted)}")
    print(f"lifted witness valid: {check_valid(inst, lifted).valid}")


def main() -> int:
    family_demo()
    merge_demo()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
