"""Solve the umbrella decision with and without a forecast."""

import beliefcore as bc


if __name__ == "__main__":
    for name in ("FIX-ID", "FIX-ID-INFO"):
        d = bc.fixture(name)
        result = bc.evaluate_influence_diagram(d)
        print(name, "expected utility", result.expected_utility)
        for line in result.policy.describe(d):
            print("   ", line)

    blind = bc.evaluate_influence_diagram(bc.fixture("FIX-ID")).expected_utility
    seen = bc.evaluate_influence_diagram(bc.fixture("FIX-ID-INFO")).expected_utility
    print("value of seeing the weather:", seen - blind)

    # a bigger random diagram, missing information arcs added on the fly
    d = bc.random_influence_diagram(chance_count=5, decision_count=2, seed=3)
    result = bc.evaluate_influence_diagram(d, add_no_forgetting=True)
    print("random diagram EU", round(result.expected_utility, 4))
    for line in result.policy.describe(d):
        print("   ", line)
