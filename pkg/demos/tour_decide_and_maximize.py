"""Tour the solver routes: one small instance per constraint family.

Each section builds an instance inline and asks for a decision or for
the largest valid relation, printing which algorithm the dispatcher
picked.
"""

from apep import (
    AuthorizationRelation,
    Instance,
    PairConstraint,
    SmerConstraint,
    check_valid,
    dispatch,
)


def build(rows, k, constraints):
    n = len(rows)
    return Instance.create(
        users=tuple(f"u{i + 1}" for i in range(n)),
        resources=tuple(f"r{j + 1}" for j in range(k)),
        base=AuthorizationRelation(n, k, tuple(rows)),
        constraints=constraints,
    )


def show(title, inst, mode):
    report = dispatch(inst, mode)
    print(f"== {title} ({mode}) ==")
    print(f"route: {report.algorithm}")
    print(f"decision: {'sat' if report.satisfiable else 'unsat'}")
    if report.max_size is not None:
        print(f"largest valid relation: {report.max_size} pairs")
    if report.witness is not None:
        assert check_valid(inst, report.witness).valid
        for user, resources in inst.relation_to_names(report.witness).items():
            print(f"  {user}: {' '.join(resources)}")
    print()


def main() -> int:
    # universal binding: r1 and r2 must have identical user sets, so only
    # users permitted both can serve either
    bodu = build([0b01, 0b11, 0b11], 2, [PairConstraint(0, 1, "iff", "forall")])
    show("universal binding of duty", bodu, "max")

    # existential binding: one shared user suffices, the base itself wins
    bode = build([0b01, 0b11, 0b10], 2, [PairConstraint(0, 1, "iff", "exists")])
    show("existential binding of duty", bode, "max")

    # universal separation: nobody may hold both resources of a pair
    sodu = build(
        [0b0111, 0b1101, 0b0011, 0b1110],
        4,
        [PairConstraint(0, 1, "xor", "forall"), PairConstraint(2, 3, "xor", "forall")],
    )
    show("universal separation of duty", sodu, "max")

    # existential separation: the two user sets must differ somewhere
    sode = build([0b11, 0b11, 0b01], 2, [PairConstraint(0, 1, "xor", "exists")])
    show("existential separation of duty", sode, "max")

    # a mix routes through the workflow rewrite for decisions and falls
    # back to exhaustive search for maximization on small instances
    mixed = build(
        [0b111, 0b110, 0b011],
        3,
        [PairConstraint(0, 1, "iff", "exists"), PairConstraint(1, 2, "xor", "forall")],
    )
    show("binding plus separation", mixed, "decide")

    # cardinality caps and mutual exclusion go through kernelization
    bounded = build(
        [0b11, 0b11, 0b10],
        2,
        [SmerConstraint({0, 1})],
    )
    show("mutual exclusion", bounded, "decide")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
