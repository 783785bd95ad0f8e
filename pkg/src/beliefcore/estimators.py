"""Step counting and closed-form cost estimates for join-tree inference.

A *step* is one cell visited while sweeping a node's or universe's joint
state space.  :class:`StepCounter` is threaded through the instrumented
algorithms; the ``estimate_*`` functions predict its value from join-tree
structure alone, without touching any potential.
"""

import csv
import io
import time
from dataclasses import asdict, dataclass

import numpy as np


class StepCounter:
    """Per-run step tally."""

    def __init__(self):
        self.total = 0

    def add(self, steps):
        self.total += int(steps)

    def set_distribution(self, table):
        """Charge writing a conditional table: one step per cell."""
        self.add(np.asarray(table).size)

    def normalize(self, vector):
        """Normalize a belief vector: one sum pass plus one divide pass."""
        vector = np.asarray(vector, dtype=float)
        self.add(vector.size)
        s = vector.sum()
        self.add(vector.size)
        return vector / s

    def __repr__(self):
        return f"StepCounter(total={self.total})"


def estimate_jensen_init(jt):
    """Cost of setting up and calibrating a join tree: ``sum_U (3 + N(U)) * S(U)``."""
    return sum((3 + jt.N(u)) * jt.S(u) for u in range(len(jt.universes)))


def estimate_jensen_update(jt, evidence=None):
    """Cost of one evidence update.

    ``sum_U (2 + N(U)) * S(U) + sum_i [S(U_i) + S(i)]`` where ``U_i`` is the
    smallest universe containing node ``i`` and the second sum runs over all
    network nodes.  Evidence declaration is not part of the formula;
    ``evidence`` is accepted for interface symmetry only.
    """
    propagation = sum((2 + jt.N(u)) * jt.S(u) for u in range(len(jt.universes)))
    marginals = sum(jt.S(jt.member_home[i]) + jt.cards[i] for i in jt.node_order)
    return propagation + marginals


def evidence_declaration_cost(jt, evidence):
    """Steps spent entering evidence: one pass over each evidence node's home universe."""
    return sum(jt.S(jt.member_home[i]) for i in evidence)


def unit_step_accounting():
    """Worked reference values of the counting convention, computed with a live counter.

    Returns a list of ``(operation, steps)`` rows.
    """
    rows = []
    c = StepCounter()
    c.set_distribution(np.full((2, 2), 0.5))
    rows.append(("set distribution: binary node, one binary parent", c.total))
    c = StepCounter()
    c.normalize(np.array([0.2, 0.6]))
    rows.append(("normalize belief vector: binary node", c.total))
    c = StepCounter()
    c.set_distribution(np.full((2, 2, 3), 1 / 3))
    rows.append(("set distribution: 3-state node, two binary parents", c.total))
    return rows


@dataclass
class EstimateReport:
    net_id: str
    nodes: int
    max_clique_states: int
    init_estimate: int
    update_estimate: int
    instrumented_init: int
    instrumented_update: int
    evidence_declaration_cost: int
    wall_time_ns: int


CSV_COLUMNS = ("net_id", "nodes", "max_clique_states", "init_estimate", "update_estimate",
               "instrumented_init", "instrumented_update", "wall_time_ns")


@dataclass
class Calibration:
    reports: list
    correlation: float | None
    instrumented_correlation: float | None

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore",
                                lineterminator="\n")
        writer.writeheader()
        for r in self.reports:
            writer.writerow(asdict(r))
        return buf.getvalue()


def pearson(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2 or np.std(x) == 0 or np.std(y) == 0:
        return None
    return float(np.corrcoef(x, y)[0, 1])


def calibrate(nets, evidence=None, method="min-fill", repeats=5, net_ids=None):
    """Compare estimates with instrumented counts and wall time on a set of nets.

    Wall time is the fastest of ``repeats`` timed updates.  Returns a
    :class:`Calibration` with one report per net and the Pearson correlation
    between ``update_estimate`` and wall time (``None`` when undefined).
    """
    from .clustering import build_join_tree, jt_infer_jensen

    nets = list(nets)
    evidence = list(evidence) if evidence is not None else [{}] * len(nets)
    reports = []
    for k, (d, ev) in enumerate(zip(nets, evidence)):
        init_counter = StepCounter()
        jt = build_join_tree(d, method, counter=init_counter)
        counter = StepCounter()
        jt_infer_jensen(jt, ev, counter=counter)
        best = None
        for _ in range(repeats):
            t0 = time.perf_counter_ns()
            jt_infer_jensen(jt, ev)
            elapsed = time.perf_counter_ns() - t0
            best = elapsed if best is None else min(best, elapsed)
        ev_idx = jt.resolve(ev)
        reports.append(EstimateReport(
            net_id=net_ids[k] if net_ids else (d.name or str(k)),
            nodes=len(d),
            max_clique_states=max(jt.S(u) for u in range(len(jt.universes))),
            init_estimate=estimate_jensen_init(jt),
            update_estimate=estimate_jensen_update(jt, ev_idx),
            instrumented_init=init_counter.total,
            instrumented_update=counter.total,
            evidence_declaration_cost=evidence_declaration_cost(jt, ev_idx),
            wall_time_ns=best,
        ))
    corr = pearson([r.update_estimate for r in reports], [r.wall_time_ns for r in reports])
    icorr = pearson([r.update_estimate for r in reports], [r.instrumented_update for r in reports])
    return Calibration(reports, corr, icorr)
