"""Shared builders for the test suite."""

from fractions import Fraction

import pytest

from cforacle import FunctionDistribution, FunctionTable, enumerate_functions

CONST0 = FunctionTable.constant(2, 2, 0)
CONST1 = FunctionTable.constant(2, 2, 1)
IDENTITY = FunctionTable.identity(2)
FLIP = FunctionTable.flip()


def binary_distribution(p_const0, p_identity, p_flip, p_const1):
    weights = {
        CONST0: Fraction(p_const0),
        IDENTITY: Fraction(p_identity),
        FLIP: Fraction(p_flip),
        CONST1: Fraction(p_const1),
    }
    return FunctionDistribution(2, 2, weights)


@pytest.fixture
def mix_identity_flip():
    return binary_distribution(0, Fraction(1, 2), Fraction(1, 2), 0)


@pytest.fixture
def mix_constants():
    return binary_distribution(Fraction(1, 2), 0, 0, Fraction(1, 2))


@pytest.fixture
def uniform_binary():
    return FunctionDistribution.uniform(2, 2)


def brute_force_joint(pF, pairs):
    """Independent oracle: literal enumeration over every function table."""
    total = Fraction(0)
    for table in enumerate_functions(pF.n_x, pF.n_y):
        if all(table.outputs[x] == y for x, y in pairs):
            total += pF.probability(table)
    return total
