"""Shared fixtures-in-plain-code for the test suite."""

from fractions import Fraction

from chorefair import AdditiveOracle, Instance
from chorefair.verify import counterexample_instance


def tri(c1, c2, c3) -> Instance:
    return Instance(len(c1), 3, (AdditiveOracle(c1), AdditiveOracle(c2),
                                 AdditiveOracle(c3)))


# one hand-built additive instance per classification case (m = 6)
CASE_INSTANCES = {
    "A1": tri([10, 9, 5, 4, 3, 2], [20, 18, 8, 6, 4, 2], [30, 27, 12, 9, 6, 3]),
    "A2": tri([10, 9, 5, 4, 3, 2], [20, 18, 8, 6, 4, 2], [30, 8, 27, 9, 6, 3]),
    "A3": tri([10, 9, 5, 4, 3, 2], [20, 8, 18, 6, 4, 2], [30, 8, 9, 27, 6, 3]),
    "B1": tri([10, 9, 5, 4, 3, 2], [18, 20, 8, 6, 4, 2], [3, 30, 27, 9, 6, 2]),
    "B21": tri([10, 9, 5, 4, 3, 2], [18, 20, 4, 8, 6, 2], [3, 2, 30, 27, 9, 6]),
    "B221": tri([10, 9, 5, 4, 3, 2], [18, 20, 8, 6, 4, 2], [3, 2, 30, 27, 9, 6]),
    "B2221": tri([10, 9, 3, 4, 5, 2], [20, 18, 6, 8, 10, 2], [3, 2, 30, 27, 9, 6]),
    "B2222": tri([10, 9, 3, 4, 5, 2], [18, 20, 6, 8, 10, 2], [3, 2, 30, 27, 9, 6]),
    "C": tri([10, 9, 5, 4, 3, 2], [20, 8, 6, 18, 4, 2], [3, 2, 30, 27, 9, 6]),
    "D1": tri([10, 4, 3, 9, 2, 1], [9, 10, 3, 4, 2, 1], [4, 3, 10, 9, 2, 1]),
    "D21": tri([10, 9, 5, 4, 3, 2], [4, 3, 10, 9, 2, 1], [3, 2, 5, 4, 10, 9]),
    "D22": tri([10, 4, 3, 9, 2, 1], [4, 10, 3, 9, 2, 1], [4, 3, 10, 9, 2, 1]),
    "D23": tri([10, 4, 3, 9, 2, 1], [4, 10, 3, 9, 2, 1], [4, 3, 10, 2, 9, 1]),
}

COUNTEREXAMPLE = counterexample_instance(26, 12)

HALF = Fraction(1, 2)
