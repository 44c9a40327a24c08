"""Decide a binding plus separation mix by rewriting it as a planning task.

Existential bindings become shared steps and universal separations
become inequality edges between steps. A step assignment maps back to a
valid relation.
"""

from pathlib import Path

from apep import check_valid, from_wsp_plan, solve_wsp, to_wsp
from apep.cli import load_instance

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main() -> int:
    inst = load_instance(str(FIXTURES / "planning_mix_5x4.json"))
    print(f"instance: {inst.n} users, {inst.k} resources, "
          f"{len(inst.constraints)} constraints")

    wsp = to_wsp(inst)
    print(f"steps: {' '.join(wsp.steps)}")
    for a, b in wsp.eq_pairs:
        print(f"  same user: {wsp.steps[a]} = {wsp.steps[b]}")
    for a, b in wsp.neq_pairs:
        print(f"  different users: {wsp.steps[a]} != {wsp.steps[b]}")

    plan = solve_wsp(wsp)
    if plan is None:
        print("no plan exists, the instance is unsatisfiable")
        return 1

    for s, u in enumerate(plan):
        print(f"  {wsp.steps[s]} -> {wsp.user_names[u]}")
    witness = from_wsp_plan(inst, wsp, plan)
    print(f"witness: {inst.relation_to_names(witness)}")
    print(f"valid: {check_valid(inst, witness).valid}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
