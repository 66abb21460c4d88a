import random

import pytest

from suitcore.core import PermutationArray

SUITABLE_4X6_ROWS = [[3, 1, 2, 6, 4, 5], [4, 6, 1, 5, 2, 3], [4, 2, 1, 3, 6, 5], [5, 6, 2, 1, 3, 4]]
TWO_SYMBOL_CORE = [[1, 2], [2, 1], [1, 2], [2, 1]]

# two 2-colorings of K_4 with 3 colors: (u, w) -> colors
K4_WITH_MONO_TRIANGLE = {(1, 2): {1, 3}, (1, 3): {1, 2}, (1, 4): {1, 2}, (2, 3): {1, 2}, (2, 4): {2, 3}, (3, 4): {1, 3}}
K4_RAMSEY_333 = {(1, 2): {1, 3}, (1, 3): {2, 3}, (1, 4): {1, 2}, (2, 3): {1, 2}, (2, 4): {2, 3}, (3, 4): {1, 3}}


@pytest.fixture
def suitable_4x6():
    return PermutationArray(SUITABLE_4X6_ROWS)


@pytest.fixture
def two_symbol_core():
    return PermutationArray(TWO_SYMBOL_CORE)


def random_array(rng: random.Random, n_rows: int, v: int) -> PermutationArray:
    rows = []
    for _ in range(n_rows):
        row = list(range(1, v + 1))
        rng.shuffle(row)
        rows.append(row)
    return PermutationArray(rows, n_symbols=v)


def brute_c_pre(rows, sigma, t_set):
    """Count rows where the set of symbols before sigma is inside t_set."""
    t_set = set(t_set)
    return sum(set(row[: row.index(sigma)]) <= t_set for row in rows)


def brute_core_suitable(rows, v, t):
    from itertools import combinations

    for sigma in range(1, v + 1):
        others = [x for x in range(1, v + 1) if x != sigma]
        for size in range(len(others) + 1):
            for t_set in combinations(others, size):
                if brute_c_pre(rows, sigma, t_set) < t + 1 - v + size:
                    return False
    return True


_ACCEPTANCE = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
