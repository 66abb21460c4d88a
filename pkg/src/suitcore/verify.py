"""Certify or falsify suitable cores.

A core over ``v`` symbols is ``t``-suitable iff for every symbol ``sigma``
and every set ``T`` of other symbols::

    c_pre(sigma, T) >= t + 1 - v + |T|

Four tiers are provided:

* :func:`verify_exact` sweeps all ``2**(v-1)`` sets per symbol with a subset
  zeta transform.
* :func:`verify_condition_ii` enumerates "sigma precedes S in >= t-|S| rows"
  directly; it exists as an independent oracle for the exact tier.
* :func:`verify_shallow` bounds ``c_pre`` from below using only rows where
  ``sigma`` sits in the first three positions. Polynomial, one-sided.
* :func:`sample_falsify` draws random ``(sigma, T)`` pairs.

:func:`verify_necessary` checks the cheap lead-count conditions.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

import numpy as np

from .core import PermutationArray, c_pre

CERTIFIED = "certified"
FALSIFIED = "falsified"
UNKNOWN = "unknown"

DEFAULT_CAP = 20
SHALLOW_NODE_CAP = 1 << 24


class VerifierCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    sigma: int
    t_set: tuple[int, ...]
    count: int

    def to_json(self) -> dict[str, Any]:
        return {"sigma": self.sigma, "t_set": list(self.t_set), "count": self.count}

    @classmethod
    def from_json(cls, d: dict[str, Any]) -> "Witness":
        return cls(int(d["sigma"]), tuple(sorted(int(x) for x in d["t_set"])), int(d["count"]))

    def holds(self, core: PermutationArray, t: int) -> bool:
        """True when the triple is a genuine violation of ``core`` at strength ``t``."""
        actual = c_pre(core, self.sigma, self.t_set)
        return actual == self.count and actual < t + 1 - core.n_symbols + len(self.t_set)


@dataclass
class Verdict:
    status: str
    tier: str
    witness: Witness | None = None
    stats: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in (CERTIFIED, FALSIFIED, UNKNOWN):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == FALSIFIED and self.witness is None:
            raise ValueError("a falsified verdict needs a witness")

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    @property
    def falsified(self) -> bool:
        return self.status == FALSIFIED

    def to_json(self) -> dict[str, Any]:
        return {
            "tier": self.tier,
            "status": self.status,
            "stats": dict(self.stats),
            "witness": self.witness.to_json() if self.witness else None,
        }

    @classmethod
    def from_json(cls, d: dict[str, Any]) -> "Verdict":
        w = d.get("witness")
        return cls(d["status"], d["tier"], Witness.from_json(w) if w else None, dict(d.get("stats") or {}))


def verify_cap() -> int:
    return int(os.environ.get("SUITABLE_VERIFY_CAP", DEFAULT_CAP))


def _others(v: int, sigma: int) -> list[int]:
    return [x for x in range(1, v + 1) if x != sigma]


def _popcounts(bits: int) -> np.ndarray:
    pc = np.zeros(1 << bits, dtype=np.int32)
    for i in range(bits):
        pc[1 << i: 2 << i] = pc[: 1 << i] + 1
    return pc


def _subset_sums(hist: np.ndarray, bits: int) -> np.ndarray:
    """In-place zeta transform: out[T] = sum of hist[P] over P subset of T."""
    g = hist
    for i in range(bits):
        view = g.reshape(-1, 2, 1 << i)
        view[:, 1, :] += view[:, 0, :]
    return g


def _pred_masks(core: PermutationArray, sigma: int) -> list[int]:
    # predecessor set of sigma per row, over bit positions of the other symbols
    bit = {x: k for k, x in enumerate(_others(core.n_symbols, sigma))}
    out = []
    for row in core.rows:
        m = 0
        for x in row:
            if x == sigma:
                break
            m |= 1 << bit[x]
        out.append(m)
    return out


def _exact_one(core: PermutationArray, t: int, sigma: int, pc: np.ndarray) -> Witness | None:
    v = core.n_symbols
    bits = v - 1
    hist = np.zeros(1 << bits, dtype=np.int64)
    np.add.at(hist, np.array(_pred_masks(core, sigma), dtype=np.int64), 1)
    counts = _subset_sums(hist, bits)
    bad = counts - pc < t + 1 - v
    if not bad.any():
        return None
    mask = int(np.argmax(bad))
    others = _others(v, sigma)
    t_set = tuple(others[k] for k in range(bits) if mask >> k & 1)
    return Witness(sigma, t_set, int(counts[mask]))


def verify_exact(core: PermutationArray, t: int, cap: int | None = None, jobs: int = 1) -> Verdict:
    """Exhaustive check of every ``(sigma, T)`` pair.

    Per symbol, rows are bucketed by their predecessor set and a subset-sum
    transform yields ``c_pre(sigma, T)`` for all ``T`` at once.
    """
    cap = verify_cap() if cap is None else cap
    v = core.n_symbols
    if v > cap:
        raise VerifierCapExceeded(
            f"v={v} exceeds the exact-verifier cap {cap}; use verify_shallow or sample_falsify "
            "(or raise SUITABLE_VERIFY_CAP)"
        )
    start = time.perf_counter()
    stats = {"subsets": v * (1 << max(v - 1, 0)), "rows": core.n_rows}
    if v == 0:
        # no symbol, no condition
        stats["elapsed"] = time.perf_counter() - start
        return Verdict(CERTIFIED, "exact", None, stats)
    pc = _popcounts(v - 1)
    syms = list(core.symbols)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda s: _exact_one(core, t, s, pc), syms))
    else:
        results = [_exact_one(core, t, s, pc) for s in syms]
    stats["elapsed"] = time.perf_counter() - start
    for w in results:
        if w is not None:
            return Verdict(FALSIFIED, "exact", w, stats)
    return Verdict(CERTIFIED, "exact", None, stats)


def verify_condition_ii(core: PermutationArray, t: int, cap: int = 10) -> Verdict:
    """Direct enumeration: each symbol precedes each ``s``-set of others in ``>= t-s`` rows."""
    v = core.n_symbols
    if v > cap:
        raise VerifierCapExceeded(f"v={v} exceeds the condition-(ii) oracle cap {cap}")
    start = time.perf_counter()
    pos = core.positions()
    examined = 0
    for sigma in core.symbols:
        others = _others(v, sigma)
        for size in range(0, min(t - 1, v - 1) + 1):
            for subset in combinations(others, size):
                examined += 1
                hits = sum(all(p[sigma] < p[x] for x in subset) for p in pos)
                if hits < t - size:
                    t_set = tuple(x for x in others if x not in subset)
                    w = Witness(sigma, t_set, hits)
                    return Verdict(FALSIFIED, "condition-ii", w,
                                   {"subsets": examined, "elapsed": time.perf_counter() - start})
    return Verdict(CERTIFIED, "condition-ii", None,
                   {"subsets": examined, "elapsed": time.perf_counter() - start})


def shallow_counts(core: PermutationArray, sigma: int) -> tuple[int, dict[int, int], dict[tuple[int, int], int]]:
    """Rows led by ``sigma``, rows ``j sigma ...`` per j, rows ``ij sigma``/``ji sigma`` per pair."""
    lead, x, y = 0, {}, {}
    for row in core.rows:
        if row[0] == sigma:
            lead += 1
        elif len(row) > 1 and row[1] == sigma:
            x[row[0]] = x.get(row[0], 0) + 1
        elif len(row) > 2 and row[2] == sigma:
            key = (min(row[0], row[1]), max(row[0], row[1]))
            y[key] = y.get(key, 0) + 1
    return lead, x, y


class _NodeBudget(Exception):
    pass


def _shallow_min_below(zero: list[int], y: dict[tuple[int, int], int], limit: int,
                       budget: list[int]) -> tuple[int, ...] | None:
    """Find T within ``zero`` with ``pairs(T) - |T| < limit``, or None if none exists.

    Branch and bound over ``zero`` in ascending order; adding ``j`` to ``T``
    changes the objective by ``-1 + sum(y[i, j] for i in T)``, which only grows
    as ``T`` grows, so ``cur + sum(min(0, gain_j))`` bounds every completion.
    """
    n = len(zero)
    w = [[y.get((min(a, b), max(a, b)), 0) for b in zero] for a in zero]

    def rec(idx: int, chosen: list[int], cur: int, gains: list[int]) -> tuple[int, ...] | None:
        budget[0] -= 1
        if budget[0] < 0:
            raise _NodeBudget
        if cur < limit:
            return tuple(zero[k] for k in chosen)
        if idx == n:
            return None
        optimistic = cur + sum(min(0, gains[k]) for k in range(idx, n))
        if optimistic >= limit:
            return None
        # including j with a non-negative gain is dominated by skipping it
        if gains[idx] < 0:
            new_gains = gains[:]
            for k in range(idx + 1, n):
                new_gains[k] += w[idx][k]
            hit = rec(idx + 1, chosen + [idx], cur + gains[idx], new_gains)
            if hit is not None:
                return hit
        return rec(idx + 1, chosen, cur, gains)

    return rec(0, [], 0, [-1] * n)


def verify_shallow(core: PermutationArray, t: int, node_cap: int = SHALLOW_NODE_CAP) -> Verdict:
    """Certify from depth-three prefix counts only; never reports falsified.

    For each symbol the bound ``lead + sum x_j + sum y_ij - |T|`` is minimised
    over ``T``. Symbols with ``x_j >= 1`` never lower it, so only
    ``Z = {j : x_j = 0}`` is searched.
    """
    start = time.perf_counter()
    v = core.n_symbols
    floor = t + 1 - v
    budget = [node_cap]
    stats: dict[str, Any] = {"rows": core.n_rows}
    for sigma in core.symbols:
        lead, x, y = shallow_counts(core, sigma)
        zero = [j for j in _others(v, sigma) if x.get(j, 0) == 0]
        try:
            hit = _shallow_min_below(zero, y, floor - lead, budget)
        except _NodeBudget:
            stats.update(nodes=node_cap, elapsed=time.perf_counter() - start, reason="node cap")
            return Verdict(UNKNOWN, "shallow", None, stats)
        if hit is not None:
            stats.update(nodes=node_cap - budget[0], elapsed=time.perf_counter() - start,
                         weak_symbol=sigma, weak_set=list(hit))
            return Verdict(UNKNOWN, "shallow", None, stats)
    stats.update(nodes=node_cap - budget[0], elapsed=time.perf_counter() - start)
    return Verdict(CERTIFIED, "shallow", None, stats)


def verify_necessary(core: PermutationArray, t: int) -> Verdict:
    """Lead-count necessary conditions. Falsifies with a witness, otherwise unknown.

    (i)   v <= t:   every symbol leads >= t+1-v rows.
    (ii)  v <= t+1: two symbols each leading exactly t+1-v rows need a row ``jk``.
    (iii) v <= t+2: a symbol ``k`` leading exactly t+2-v rows, with neither ``ik``
          nor ``jk`` starting a row, needs a row ``ijk`` or ``jik``.
    """
    start = time.perf_counter()
    v = core.n_symbols
    floor = t + 1 - v
    leads = core.lead_counts()
    pairs = {(r[0], r[1]) for r in core.rows if v >= 2}
    triples = {(min(r[0], r[1]), max(r[0], r[1]), r[2]) for r in core.rows if v >= 3}

    def fail(sigma: int, t_set: tuple[int, ...], rule: str) -> Verdict:
        w = Witness(sigma, t_set, c_pre(core, sigma, t_set))
        return Verdict(FALSIFIED, "necessary", w, {"rule": rule, "elapsed": time.perf_counter() - start})

    if v <= t:
        for k in core.symbols:
            if leads[k] < floor:
                return fail(k, (), "i")
    if v <= t + 1:
        tight = [k for k in core.symbols if leads[k] == floor]
        for j in tight:
            for k in tight:
                if j != k and (j, k) not in pairs:
                    return fail(k, (j,), "ii")
    if v <= t + 2:
        for k in core.symbols:
            if leads[k] != floor + 1:
                continue
            free = [i for i in core.symbols if i != k and (i, k) not in pairs]
            for i, j in combinations(free, 2):
                if (i, j, k) not in triples:
                    return fail(k, (i, j), "iii")
    return Verdict(UNKNOWN, "necessary", None, {"elapsed": time.perf_counter() - start})


def sample_falsify(core: PermutationArray, t: int, trials: int, seed: int = 0) -> Verdict:
    """Randomised search for a violating ``(sigma, T)``.

    Most draws take ``T`` inside ``{j : no row starts j sigma}``, where
    violations concentrate; the rest are uniform subsets of the other symbols.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    start = time.perf_counter()
    rng = random.Random(seed)
    v = core.n_symbols
    floor = t + 1 - v
    pairs = {(r[0], r[1]) for r in core.rows if v >= 2}
    syms = list(core.symbols)
    zero = {s: [j for j in _others(v, s) if (j, s) not in pairs] for s in syms}
    for trial in range(trials):
        sigma = rng.choice(syms)
        pool = zero[sigma] if rng.random() < 0.8 else _others(v, sigma)
        t_set = tuple(j for j in pool if rng.random() < 0.5)
        count = c_pre(core, sigma, t_set)
        if count < floor + len(t_set):
            return Verdict(FALSIFIED, "sample", Witness(sigma, t_set, count),
                           {"trials": trial + 1, "seed": seed, "elapsed": time.perf_counter() - start})
    return Verdict(UNKNOWN, "sample", None,
                   {"trials": trials, "seed": seed, "elapsed": time.perf_counter() - start})
