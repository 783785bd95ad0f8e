"""Predict join-tree inference cost and check it against a stopwatch."""

import beliefcore as bc
from beliefcore.random_nets import bench_networks


if __name__ == "__main__":
    for op, steps in bc.unit_step_accounting():
        print(f"{steps:4d}  {op}")

    d = bc.fixture("FIX-DIAMOND")
    counter = bc.StepCounter()
    jt = bc.build_join_tree(d, counter=counter)
    print("universes", jt.universes)
    print("init: estimate", bc.estimate_jensen_init(jt), "counted", counter.total)

    counter = bc.StepCounter()
    bc.jt_infer_jensen(jt, {"D": "t"}, counter=counter)
    print("update: estimate", bc.estimate_jensen_update(jt), "counted", counter.total)

    cal = bc.calibrate(bench_networks(15, seed=1), repeats=3)
    print("net        clique   estimate   time(us)")
    for r in cal.reports:
        print(f"{r.net_id:10s} {r.max_clique_states:7d} {r.update_estimate:10d} {r.wall_time_ns / 1000:10.1f}")
    print("correlation", round(cal.correlation, 4))
