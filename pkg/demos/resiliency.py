"""Probe how many disjoint backup teams a permission table supports.

A relation is (d, t)-resilient for a resource set Q when d pairwise
disjoint teams of at most t users each can all cover Q.  The encoding
turns that question into an existence instance, so the regular solver
answers it.
"""

from apep import (
    AuthorizationRelation,
    Instance,
    dispatch,
    encode_resiliency,
)


def resilient(A, Q, d, t) -> bool:
    inst = encode_resiliency(A, Q, d, t)
    if not isinstance(inst, Instance):
        return False
    return dispatch(inst, "decide").satisfiable


def main() -> int:
    # six users, three resources, a deliberately lopsided table
    users = ("ana", "bo", "chris", "dee", "eli", "fay")
    rows = (0b111, 0b011, 0b110, 0b101, 0b001, 0b010)
    A = AuthorizationRelation(6, 3, rows)
    Q = [0, 1, 2]

    print("permission table:")
    for name, row in zip(users, rows):
        held = [f"r{j + 1}" for j in range(3) if row >> j & 1]
        print(f"  {name}: {' '.join(held)}")
    print()

    for d in range(1, 5):
        supported = [t for t in range(1, 4) if resilient(A, Q, d, t)]
        if supported:
            print(f"d={d}: works with team size cap t in {supported}")
        else:
            print(f"d={d}: impossible, even with the largest cap")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
