"""Watch Gibbs estimates settle on the exact answer as sweeps grow."""

import beliefcore as bc


if __name__ == "__main__":
    d = bc.random_network(8, max_parents=2, states_range=(2, 3), seed=11)
    ev = {bc.graph_order(d)[-1]: 0}
    truth = bc.joint_enumeration_oracle(d, ev)

    for sweeps in (200, 2000, 20000):
        b = bc.gibbs_infer(d, ev, bc.SimParams(sweeps=sweeps, burn_in=sweeps // 10, seed=0))
        print(f"{sweeps:6d} sweeps  max error {b.max_abs_diff(truth):.4f}")

    try:
        bc.gibbs_infer(bc.fixture("FIX-ZERO"))
    except bc.NotStrictlyPositive as exc:
        print("refused:", exc)
    # nudging the zeros away makes it acceptable
    print(bc.gibbs_infer(bc.make_strictly_positive(bc.fixture("FIX-ZERO"), 1e-3), params=bc.SimParams(5000, 500, 0)))
