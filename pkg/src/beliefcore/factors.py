"""Small labelled-array algebra used by the exact algorithms.

A :class:`Factor` is a non-negative (or, for utilities, real) array with one
named axis per variable.  Products align axes by name and broadcast, so no
explicit index bookkeeping leaks into the algorithms.
"""

import numpy as np


class Factor:
    __slots__ = ("variables", "values")

    def __init__(self, variables, values):
        self.variables = tuple(variables)
        self.values = np.asarray(values, dtype=float)
        if self.values.ndim != len(self.variables):
            raise ValueError(
                f"factor over {self.variables} got array of ndim {self.values.ndim}"
            )

    def __repr__(self):
        return f"Factor({self.variables}, shape={self.values.shape})"

    @property
    def cards(self):
        return dict(zip(self.variables, self.values.shape))

    def aligned(self, variables):
        """Return ``values`` transposed and reshaped to broadcast over ``variables``."""
        perm = [self.variables.index(v) for v in variables if v in self.variables]
        arr = self.values.transpose(perm)
        shape = []
        it = iter(arr.shape)
        for v in variables:
            shape.append(next(it) if v in self.variables else 1)
        return arr.reshape(shape)

    def __mul__(self, other):
        if not isinstance(other, Factor):
            return Factor(self.variables, self.values * other)
        variables = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return Factor(variables, self.aligned(variables) * other.aligned(variables))

    def marginal(self, keep):
        keep = [v for v in self.variables if v in keep]
        axes = tuple(i for i, v in enumerate(self.variables) if v not in keep)
        return Factor(keep, self.values.sum(axis=axes) if axes else self.values.copy())

    def sum_out(self, *variables):
        return self.marginal([v for v in self.variables if v not in variables])

    def max_out(self, variable):
        ax = self.variables.index(variable)
        return Factor(self.variables[:ax] + self.variables[ax + 1:], self.values.max(axis=ax))

    def transpose(self, variables):
        variables = tuple(variables)
        if set(variables) != set(self.variables) or len(variables) != len(self.variables):
            raise ValueError(f"cannot transpose {self.variables} to {variables}")
        return Factor(variables, self.values.transpose([self.variables.index(v) for v in variables]))

    def reduce(self, variable, state):
        """Slice the factor at ``variable == state`` and drop that axis."""
        ax = self.variables.index(variable)
        idx = [slice(None)] * len(self.variables)
        idx[ax] = state
        return Factor(self.variables[:ax] + self.variables[ax + 1:], self.values[tuple(idx)])


def product(factors):
    factors = list(factors)
    if not factors:
        return Factor((), np.array(1.0))
    variables = []
    for f in factors:
        variables.extend(v for v in f.variables if v not in variables)
    out = np.ones([1] * len(variables))
    for f in factors:
        out = out * f.aligned(variables)
    return Factor(variables, out)


def indicator(variable, card, state):
    vec = np.zeros(card)
    vec[state] = 1.0
    return Factor((variable,), vec)
