"""Edge multi-colorings of complete graphs and Ramsey-number calculators.

An ``(r; m)``-coloring gives every edge of ``K_n`` a set of ``m`` colors out of
``1..r``; ``m = 1`` is an ordinary edge coloring. A clique is monochromatic in
color ``h`` when ``h`` is on every one of its edges. Vertices are 1-based and
edges are listed lexicographically.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Iterable, Sequence


def edges_of(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(1, n + 1), 2))


@dataclass(frozen=True)
class EdgeMultiColoring:
    n: int
    r: int
    m: int
    color_sets: tuple[frozenset[int], ...]  # indexed like edges_of(n)

    def __init__(self, n: int, r: int, m: int, color_sets: Iterable[Iterable[int]]):
        sets = tuple(frozenset(int(c) for c in cs) for cs in color_sets)
        if not 1 <= m < r:
            raise ValueError(f"need 1 <= m < r, got m={m}, r={r}")
        if len(sets) != n * (n - 1) // 2:
            raise ValueError(f"K_{n} has {n * (n - 1) // 2} edges, got {len(sets)} color sets")
        for cs in sets:
            if len(cs) != m or not all(1 <= c <= r for c in cs):
                raise ValueError(f"color set {sorted(cs)} is not an {m}-subset of 1..{r}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "color_sets", sets)

    @classmethod
    def from_edges(cls, n: int, r: int, m: int, edges: dict[tuple[int, int], Iterable[int]]) -> "EdgeMultiColoring":
        norm = {(min(u, w), max(u, w)): cs for (u, w), cs in edges.items()}
        return cls(n, r, m, [norm[e] for e in edges_of(n)])

    def colors(self, u: int, w: int) -> frozenset[int]:
        if u > w:
            u, w = w, u
        # lexicographic index of (u, w) among pairs of 1..n
        idx = (u - 1) * (2 * self.n - u) // 2 + (w - u - 1)
        return self.color_sets[idx]

    def color_adjacency(self, h: int) -> list[int]:
        """Bitmask adjacency of the color-``h`` graph; bit ``w`` set in ``adj[u]``."""
        adj = [0] * (self.n + 1)
        for (u, w), cs in zip(edges_of(self.n), self.color_sets):
            if h in cs:
                adj[u] |= 1 << w
                adj[w] |= 1 << u
        return adj

    def induced(self, vertices: Sequence[int]) -> "EdgeMultiColoring":
        vs = sorted(vertices)
        return EdgeMultiColoring(len(vs), self.r, self.m,
                                 [self.colors(vs[a], vs[b]) for a, b in combinations(range(len(vs)), 2)])

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n, "r": self.r, "m": self.m,
            "edges": [[u, w, sorted(cs)] for (u, w), cs in zip(edges_of(self.n), self.color_sets)],
        }

    @classmethod
    def from_json(cls, d: dict[str, Any]) -> "EdgeMultiColoring":
        edges = {(int(u), int(w)): cs for u, w, cs in d["edges"]}
        return cls.from_edges(int(d["n"]), int(d["r"]), int(d["m"]), edges)


@dataclass(frozen=True)
class RamseyTarget:
    k_vec: tuple[int, ...]

    def __init__(self, k_vec: Iterable[int]):
        kv = tuple(int(k) for k in k_vec)
        if not kv or any(k < 2 for k in kv):
            raise ValueError(f"clique budgets must all be >= 2, got {list(kv)}")
        object.__setattr__(self, "k_vec", kv)

    def __len__(self) -> int:
        return len(self.k_vec)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _clique_in(adj: list[int], cand: int, q: int) -> list[int] | None:
    """A q-clique inside vertex set ``cand`` (ascending-first search), or None."""
    if q == 0:
        return []
    if bin(cand).count("1") < q:
        return None
    for u in _bits(cand):
        rest = adj[u] & cand & ~((1 << (u + 1)) - 1)
        found = _clique_in(adj, rest, q - 1)
        if found is not None:
            return [u] + found
    return None


def _count_cliques(adj: list[int], cand: int, q: int) -> int:
    if q == 0:
        return 1
    total = 0
    for u in _bits(cand):
        rest = adj[u] & cand & ~((1 << (u + 1)) - 1)
        if q == 1:
            total += 1
        elif rest:
            total += _count_cliques(adj, rest, q - 1)
    return total


def _core_reduce(adj: list[int], n: int, q: int) -> int:
    # drop vertices whose color degree cannot support a q-clique
    alive = sum(1 << u for u in range(1, n + 1))
    changed = True
    while changed:
        changed = False
        for u in _bits(alive):
            if bin(adj[u] & alive).count("1") < q - 1:
                alive &= ~(1 << u)
                changed = True
    return alive


def find_mono_clique(col: EdgeMultiColoring, color: int, size: int) -> tuple[int, ...] | None:
    """Lexicographically first ``size``-clique whose edges all carry ``color``."""
    if not 1 <= color <= col.r:
        raise ValueError(f"color {color} outside 1..{col.r}")
    if size < 2:
        raise ValueError("clique size must be at least 2")
    adj = col.color_adjacency(color)
    found = _clique_in(adj, _core_reduce(adj, col.n, size), size)
    return tuple(found) if found is not None else None


def validate_ramsey_coloring(col: EdgeMultiColoring, target: RamseyTarget) -> tuple[bool, tuple[int, tuple[int, ...]] | None]:
    if len(target) != col.r:
        raise ValueError(f"target has {len(target)} budgets for {col.r} colors")
    for h, k in enumerate(target.k_vec, start=1):
        clique = find_mono_clique(col, h, k)
        if clique is not None:
            return False, (h, clique)
    return True, None


def count_mono_cliques(col: EdgeMultiColoring, target: RamseyTarget) -> int:
    return sum(_count_cliques(col.color_adjacency(h), sum(1 << u for u in range(1, col.n + 1)), k)
               for h, k in enumerate(target.k_vec, start=1))


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------

class _State:
    """Mutable coloring with per-color adjacency bitmasks for incremental counting."""

    def __init__(self, n: int, r: int, sets: list[frozenset[int]], ks: tuple[int, ...]):
        self.n, self.r, self.ks = n, r, ks
        self.edges = edges_of(n)
        self.sets = sets
        self.adj = [[0] * (n + 1) for _ in range(r + 1)]
        for (u, w), cs in zip(self.edges, sets):
            for h in cs:
                self.adj[h][u] |= 1 << w
                self.adj[h][w] |= 1 << u

    def through(self, h: int, u: int, w: int) -> int:
        """Color-``h`` cliques of size ``k_h`` containing edge ``uw`` (as if the edge had ``h``)."""
        a = self.adj[h]
        common = a[u] & a[w] & ~((1 << u) | (1 << w))
        return _count_cliques(a, common, self.ks[h - 1] - 2)

    def recolor(self, idx: int, new: frozenset[int]) -> None:
        u, w = self.edges[idx]
        old = self.sets[idx]
        for h in old - new:
            self.adj[h][u] &= ~(1 << w)
            self.adj[h][w] &= ~(1 << u)
        for h in new - old:
            self.adj[h][u] |= 1 << w
            self.adj[h][w] |= 1 << u
        self.sets[idx] = new

    def violations(self) -> int:
        full = sum(1 << u for u in range(1, self.n + 1))
        return sum(_count_cliques(self.adj[h], full, k) for h, k in enumerate(self.ks, start=1))

    def some_violation(self, rng: random.Random) -> tuple[int, list[int]] | None:
        order = list(range(1, self.r + 1))
        rng.shuffle(order)
        for h in order:
            a = self.adj[h]
            clique = _clique_in(a, _core_reduce(a, self.n, self.ks[h - 1]), self.ks[h - 1])
            if clique is not None:
                return h, clique


def search_coloring(n: int, target: RamseyTarget, m: int = 1, seed: int = 0, budget: int = 200_000,
                    stagnation: int = 2_000) -> EdgeMultiColoring | None:
    """Min-conflicts local search for an ``(r; m)``-coloring of ``K_n`` avoiding the target cliques.

    Repeatedly picks a monochromatic forbidden clique, then recolors the edge
    of that clique whose best alternative color set lowers the violation count
    the most (ties broken at random). Restarts from a fresh random coloring
    after ``stagnation`` steps without a new best. ``budget`` caps total steps;
    returns None when it runs out.
    """
    r = len(target)
    if not 1 <= m < r:
        raise ValueError(f"need 1 <= m < r, got m={m}, r={r}")
    rng = random.Random(seed)
    palette = [frozenset(cs) for cs in combinations(range(1, r + 1), m)]
    n_edges = n * (n - 1) // 2
    edge_index = {e: i for i, e in enumerate(edges_of(n))}
    steps = 0
    while steps < budget:
        state = _State(n, r, [rng.choice(palette) for _ in range(n_edges)], target.k_vec)
        score = state.violations()
        best, since = score, 0
        while steps < budget and since < stagnation:
            if score == 0:
                col = EdgeMultiColoring(n, r, m, state.sets)
                if validate_ramsey_coloring(col, target)[0]:
                    return col
                score = state.violations()
                continue
            hit = state.some_violation(rng)
            if hit is None:  # counter drifted; resync
                score = state.violations()
                continue
            _, clique = hit
            moves = []
            for u, w in combinations(clique, 2):
                idx = edge_index[(u, w)]
                old = state.sets[idx]
                for cand in palette:
                    if cand == old:
                        continue
                    gain = sum(state.through(h, u, w) for h in cand - old) \
                        - sum(state.through(h, u, w) for h in old - cand)
                    moves.append((gain, rng.random(), idx, cand))
            gain, _, idx, cand = min(moves)
            state.recolor(idx, cand)
            score += gain
            steps += 1
            if score < best:
                best, since = score, 0
            else:
                since += 1
    return None


def _colex_edges(n: int) -> list[tuple[int, int]]:
    return [(u, w) for w in range(2, n + 1) for u in range(1, w)]


def exhaustive_nonexistence(n: int, target: RamseyTarget, m: int = 1, cap: int = 1 << 26) -> bool:
    """True iff no ``(r; m)``-coloring of ``K_n`` avoids every target clique.

    Plain backtracking over edges in colex order, rejecting a partial coloring
    as soon as the last edge closes a forbidden monochromatic clique.
    """
    r = len(target)
    if not 1 <= m < r:
        raise ValueError(f"need 1 <= m < r, got m={m}, r={r}")
    space = math.comb(r, m) ** (n * (n - 1) // 2)
    if space > cap:
        raise ValueError(f"search space {math.comb(r, m)}^{n * (n - 1) // 2} exceeds the enumeration cap {cap}")
    if n < 2:
        return False
    palette = [frozenset(cs) for cs in combinations(range(1, r + 1), m)]
    order = _colex_edges(n)
    adj = [[0] * (n + 1) for _ in range(r + 1)]
    ks = target.k_vec

    def closes(h: int, u: int, w: int) -> bool:
        a = adj[h]
        common = a[u] & a[w]
        return _clique_in(a, common, ks[h - 1] - 2) is not None

    def rec(pos: int) -> bool:
        if pos == len(order):
            return True
        u, w = order[pos]
        for cs in palette:
            if any(closes(h, u, w) for h in cs):
                continue
            for h in cs:
                adj[h][u] |= 1 << w
                adj[h][w] |= 1 << u
            ok = rec(pos + 1)
            for h in cs:
                adj[h][u] &= ~(1 << w)
                adj[h][w] &= ~(1 << u)
            if ok:
                return True
        return False

    return not rec(0)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

@dataclass
class BoundReport:
    quantity: str
    value: int | None
    raw: float | Fraction | None
    formula: str
    kind: str  # "lower" or "upper"
    valid: bool = True
    flags: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        raw = self.raw
        if isinstance(raw, Fraction):
            raw = str(raw) if raw.denominator != 1 else raw.numerator
        return {"quantity": self.quantity, "value": self.value, "raw": raw, "formula": self.formula,
                "kind": self.kind, "valid": self.valid, "flags": self.flags}


def erdos_lower(k: int) -> BoundReport:
    """Diagonal two-color lower bound ``R(k,k) >= k 2^(k/2) / (e sqrt 2)``."""
    if k < 2:
        raise ValueError("k must be >= 2")
    raw = k * 2 ** (k / 2) / (math.e * math.sqrt(2))
    return BoundReport(f"R({k},{k})", math.floor(raw), raw, "k*2^(k/2)/(e*sqrt(2))", "lower")


def robertson_lower(k: int, l: int, r_k_l2: int) -> BoundReport:
    """``R(3,k,l) >= 4 R(k,l-2) - 3`` given a known lower bound on ``R(k, l-2)``."""
    if k < 3 or l < 3:
        raise ValueError("Robertson's recurrence needs k, l >= 3")
    val = 4 * r_k_l2 - 3
    return BoundReport(f"R(3,{k},{l})", val, val, "4*R(k,l-2)-3", "lower", flags={"R(k,l-2)": r_k_l2})


def multicolor_lower(m: int, r: int, k: int) -> BoundReport:
    """Probabilistic lower bound on ``R^m(k; r)``, gated on its side condition."""
    if not 2 <= m < r or k <= 1:
        raise ValueError(f"need 2 <= m < r and k > 1, got m={m}, r={r}, k={k}")
    side = (r / m) ** ((k - 1) / 2) * (math.e / r) ** (1 / k)
    ok = side >= 2 * math.e
    raw = math.sqrt(m) / (math.sqrt(math.e) * r) * k * (r / m) ** (k / 2)
    flags = {"side_condition": side, "side_threshold": 2 * math.e}
    return BoundReport(f"R^{m}({k};{r})", math.floor(raw) if ok else None, raw if ok else None,
                       "sqrt(m)/(sqrt(e)*r)*k*(r/m)^(k/2)", "lower", ok, flags)


def _nu(ks: Sequence[int], m: int) -> int:
    return sum(k - 2 for k in sorted(ks)[: len(ks) - m])


def multinomial_upper(m: int, ks: Sequence[int]) -> BoundReport:
    """Closed-form multinomial upper bound on ``R^m(k_1, ..., k_r)``."""
    ks = sorted(int(k) for k in ks)
    r = len(ks)
    if not 1 <= m < r or any(k < 2 for k in ks):
        raise ValueError(f"need 1 <= m < r and all k_i >= 2, got m={m}, k={ks}")
    nu = _nu(ks, m)
    denom = math.prod(math.factorial(k - 1) for k in ks)
    raw = Fraction(1, m) ** nu * Fraction(math.factorial(sum(ks) - r), denom)
    return BoundReport(f"R^{m}{tuple(ks)}", math.floor(raw), raw,
                       "(1/m)^nu*(sum k - r)!/prod (k_i-1)!", "upper", flags={"nu": nu})


@lru_cache(maxsize=None)
def _recurrence(m: int, ks: tuple[int, ...]) -> int:
    r = len(ks)
    if ks[0] <= 1:
        return 1
    if all(k <= 2 for k in ks[: r - m]):
        return ks[r - m]
    total = 0
    for i in range(r):
        nxt = list(ks)
        nxt[i] -= 1
        total += _recurrence(m, tuple(sorted(nxt)))
    return -(-total // m)


def recurrence_upper(m: int, ks: Sequence[int]) -> BoundReport:
    """Erdos-Szekeres style recurrence ``R^m(k) <= (R_1 + ... + R_r) / m``.

    Each level is rounded up: the pigeonhole step needs an integer vertex count
    of at least ``sum R_i / m``.
    """
    ks_sorted = tuple(sorted(int(k) for k in ks))
    r = len(ks_sorted)
    if not 1 <= m < r or any(k < 2 for k in ks_sorted):
        raise ValueError(f"need 1 <= m < r and all k_i >= 2, got m={m}, k={list(ks)}")
    if all(k <= 2 for k in ks_sorted[: r - m]):
        val = ks_sorted[r - m]
        return BoundReport(f"R^{m}{ks_sorted}", val, Fraction(val), "base case", "upper")
    parts = []
    for i in range(r):
        nxt = list(ks_sorted)
        nxt[i] -= 1
        parts.append(_recurrence(m, tuple(sorted(nxt))))
    raw = Fraction(sum(parts), m)
    return BoundReport(f"R^{m}{ks_sorted}", math.ceil(raw), raw, "(R_1+...+R_r)/m", "upper",
                       flags={"children": parts})


def bounds_report(formula: str, **kw: Any) -> BoundReport:
    """Dispatch by formula name: erdos, robertson, lemma9, corollary1, lemma10-recurrence, johnson-d43."""
    from .packings import johnson_d_l43

    if formula == "erdos":
        return erdos_lower(kw["k"])
    if formula == "robertson":
        return robertson_lower(kw["k"], kw["l"], kw["r_k_l2"])
    if formula == "lemma9":
        return multicolor_lower(kw["m"], kw["r"], kw["k"])
    if formula == "corollary1":
        return multinomial_upper(kw["m"], kw["k_vec"])
    if formula == "lemma10-recurrence":
        return recurrence_upper(kw["m"], kw["k_vec"])
    if formula == "johnson-d43":
        val = johnson_d_l43(kw["l"])
        return BoundReport(f"D({kw['l']},4,3)", val, val, "Johnson bound (exact for k=4)", "exact")
    raise ValueError(f"unknown formula {formula!r}")
