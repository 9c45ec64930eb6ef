import random

import pytest

from optsort.network import Network, new_network


FIG_COMPARATORS = [(1, 2, 1), (3, 4, 1), (1, 3, 2), (2, 4, 2), (2, 3, 3)]


@pytest.fixture
def four_wire_sorter() -> Network:
    return new_network(4, 3, FIG_COMPARATORS)


def binary_vectors(n: int):
    for mask in range(1 << n):
        yield [(mask >> b) & 1 for b in range(n)]


def random_network(rng: random.Random, width: int, depth: int) -> Network:
    comparators = []
    for level in range(1, depth + 1):
        free = list(range(1, width + 1))
        rng.shuffle(free)
        while len(free) >= 2 and rng.random() < 0.8:
            a, b = free.pop(), free.pop()
            comparators.append((min(a, b), max(a, b), level))
    return new_network(width, depth, comparators)
