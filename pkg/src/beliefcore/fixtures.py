"""Named reference diagrams used by tests, demos and the command line."""

from .errors import UnknownFixture
from .model import NodeKind, build_diagram, make_node

TF = ("t", "f")


def _chain():
    return build_diagram([
        make_node("A", TF, (), [0.3, 0.7]),
        make_node("B", TF, ("A",), [[0.8, 0.2], [0.1, 0.9]]),
    ], name="FIX-CHAIN")


def _diamond():
    return build_diagram([
        make_node("A", TF, (), [0.5, 0.5]),
        make_node("B", TF, ("A",), [[0.9, 0.1], [0.2, 0.8]]),
        make_node("C", TF, ("A",), [[0.7, 0.3], [0.1, 0.9]]),
        make_node("D", TF, ("B", "C"), [[0.99, 0.01], [0.8, 0.2], [0.6, 0.4], [0.05, 0.95]]),
    ], name="FIX-DIAMOND")


def _zero():
    return build_diagram([
        make_node("A", TF, (), [0.5, 0.5]),
        make_node("B", TF, ("A",), [[1.0, 0.0], [0.4, 0.6]]),
    ], name="FIX-ZERO")


def _umbrella(info):
    return build_diagram([
        make_node("W", ("rain", "sun"), (), [0.4, 0.6]),
        make_node("D", ("take", "leave"), ("W",) if info else (), kind=NodeKind.DECISION),
        make_node("V", (), ("W", "D"), [[70.0, 0.0], [80.0, 100.0]], kind=NodeKind.VALUE),
    ], name="FIX-ID-INFO" if info else "FIX-ID")


_FIXTURES = {
    "FIX-CHAIN": _chain,
    "FIX-DIAMOND": _diamond,
    "FIX-ZERO": _zero,
    "FIX-ID": lambda: _umbrella(False),
    "FIX-ID-INFO": lambda: _umbrella(True),
}

FIXTURE_NAMES = tuple(_FIXTURES)


def fixture(name):
    """Return a fresh copy of a named diagram (case-insensitive)."""
    try:
        return _FIXTURES[name.upper()]()
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}; choose from {', '.join(_FIXTURES)}") from None
