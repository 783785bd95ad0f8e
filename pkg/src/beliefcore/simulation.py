"""Gibbs sampling for strictly positive belief networks.

Every unobserved node starts in a uniformly drawn state.  A sweep visits the
unobserved nodes in graph order and redraws each one from its distribution
given the current states of its Markov blanket.  Beliefs are state
frequencies over the sweeps after burn-in.

Draws go through cumulative rows rounded to 12 decimals and an integer
search, so a fixed seed gives the same beliefs on every platform.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadParams, NotBeliefNet, NotStrictlyPositive
from .factors import product
from .model import Beliefs, graph_order, is_belief_net, is_strictly_positive, resolve_evidence, unit_vector
from .transforms import family_factor

CDF_DECIMALS = 12
MAX_BLANKET_TABLE = 1 << 20


@dataclass(frozen=True)
class SimParams:
    sweeps: int = 20000
    burn_in: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not (isinstance(self.sweeps, int) and isinstance(self.burn_in, int)):
            raise BadParams("sweeps and burn_in must be integers")
        if not self.sweeps > self.burn_in >= 0:
            raise BadParams(f"need sweeps > burn_in >= 0, got {self.sweeps} and {self.burn_in}")


def markov_blanket(d, node_id):
    node = d[node_id]
    out = set(node.parents)
    for c in d.children(node_id):
        out.add(c)
        out.update(d[c].parents)
    out.discard(node_id)
    return out


def markov_blanket_conditional(d, node_id, state):
    """``P(x | blanket)`` for the blanket values in ``state`` (node id -> index).

    Proportional to the node's own row times, for each child, the child's
    row entry at the child's current state.
    """
    node = d[node_id]
    w = np.array(node.table[tuple(state[p] for p in node.parents)], dtype=float)
    for c in d.children(node_id):
        child = d[c]
        idx = tuple(slice(None) if p == node_id else state[p] for p in child.parents)
        w = w * child.table[idx + (state[c],)]
    return w / w.sum()


def _cdf(w):
    return np.round(np.cumsum(w / w.sum(axis=-1, keepdims=True), axis=-1), CDF_DECIMALS)


class _Sampler:
    """Per-node lookup of rounded cumulative blanket conditionals."""

    def __init__(self, d, node_id):
        self.d = d
        self.id = node_id
        self.card = d[node_id].card
        blanket = sorted(markov_blanket(d, node_id))
        size = self.card * int(np.prod([d.card(b) for b in blanket], dtype=np.int64))
        self.table = None
        if size <= MAX_BLANKET_TABLE:
            factors = [family_factor(d[node_id])] + [family_factor(d[c]) for c in d.children(node_id)]
            f = product(factors)
            self.blanket = tuple(v for v in f.variables if v != node_id)
            self.table = _cdf(f.transpose(self.blanket + (node_id,)).values)

    def draw(self, state, u):
        if self.table is not None:
            row = self.table[tuple(state[b] for b in self.blanket)]
        else:
            row = _cdf(markov_blanket_conditional(self.d, self.id, state))
        return min(int(np.searchsorted(row, u, side="right")), self.card - 1)


def gibbs_infer(d, evidence=None, params=None):
    params = params or SimParams()
    if not is_belief_net(d):
        raise NotBeliefNet("simulation needs a belief network")
    if not is_strictly_positive(d):
        raise NotStrictlyPositive("simulation requires every table entry to be positive")
    ev = resolve_evidence(d, evidence)
    order = graph_order(d)
    free = [i for i in order if i not in ev]
    rng = np.random.default_rng(params.seed)
    state = dict(ev)
    for i in free:
        state[i] = int(rng.integers(d.card(i)))
    samplers = [_Sampler(d, i) for i in free]
    counts = {i: np.zeros(d.card(i)) for i in free}
    for sweep in range(params.sweeps):
        us = rng.random(len(free))
        for s, u in zip(samplers, us):
            state[s.id] = s.draw(state, u)
        if sweep >= params.burn_in:
            for i in free:
                counts[i][state[i]] += 1
    kept = params.sweeps - params.burn_in
    posteriors = {}
    for i in order:
        posteriors[i] = unit_vector(d.card(i), ev[i]) if i in ev else counts[i] / kept
    return Beliefs(posteriors)
