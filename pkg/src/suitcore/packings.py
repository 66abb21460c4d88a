"""Triple packings (3-(l, k, 1) packings) and block-to-symbol assignment."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Any, Iterable


class PackingError(RuntimeError):
    pass


class AssignmentError(RuntimeError):
    pass


@dataclass(frozen=True)
class BlockPacking:
    """Blocks of size ``k`` on points ``1..l``; points are 1-based."""

    l: int
    k: int
    blocks: tuple[frozenset[int], ...]

    def __init__(self, l: int, k: int, blocks: Iterable[Iterable[int]] = ()):
        bl = tuple(frozenset(int(x) for x in b) for b in blocks)
        for b in bl:
            if len(b) != k or not all(1 <= x <= l for x in b):
                raise ValueError(f"block {sorted(b)} is not a {k}-subset of 1..{l}")
        if len(set(bl)) != len(bl):
            raise ValueError("blocks must be distinct")
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "blocks", bl)

    def __len__(self) -> int:
        return len(self.blocks)

    def to_json(self) -> dict[str, Any]:
        return {"l": self.l, "k": self.k, "blocks": [sorted(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, d: dict[str, Any]) -> "BlockPacking":
        return cls(int(d["l"]), int(d["k"]), d["blocks"])


def johnson_d_l43(l: int) -> int:
    """Maximum number of 4-subsets of an l-set with no triple covered twice."""
    if l < 4:
        raise ValueError(f"D(l,4,3) needs l >= 4, got {l}")
    inner = ((l - 1) * ((l - 2) // 2)) // 3
    if l % 6 == 0:
        inner -= 1
    return (l * inner) // 4


def johnson_upper(l: int, k: int) -> int:
    """Nested-floor upper bound on D(l, k, 3); exact for k in {3, 4}."""
    if k == 3:
        return comb(l, 3)
    if k == 4 and l >= 4:
        return johnson_d_l43(l)
    if l < k:
        return 0
    return (l * (((l - 1) * ((l - 2) // (k - 2))) // (k - 1))) // k


def validate_packing(p: BlockPacking) -> tuple[bool, tuple[tuple[int, ...], frozenset[int], frozenset[int]] | None]:
    """``(True, None)`` or ``(False, (triple, first_block, second_block))``."""
    seen: dict[tuple[int, ...], frozenset[int]] = {}
    for b in p.blocks:
        for tri in combinations(sorted(b), 3):
            if tri in seen:
                return False, (tri, seen[tri], b)
            seen[tri] = b
    return True, None


def _greedy_pass(l: int, k: int, rng: random.Random) -> list[frozenset[int]]:
    candidates = list(combinations(range(1, l + 1), k))
    rng.shuffle(candidates)
    used: set[tuple[int, ...]] = set()
    blocks = []
    for cand in candidates:
        tris = list(combinations(cand, 3))
        if any(tri in used for tri in tris):
            continue
        used.update(tris)
        blocks.append(frozenset(cand))
    return blocks


def build_packing(l: int, k: int, target: int, seed: int = 0, restarts: int = 64) -> BlockPacking:
    """Randomised greedy packing with restarts.

    Each pass scans all k-subsets in a seeded random order, keeping those whose
    triples are still free, so every pass ends in a maximal packing. Returns the
    first pass that reaches ``target``.
    """
    if not 3 <= k <= l:
        raise ValueError(f"need 3 <= k <= l, got k={k}, l={l}")
    if target * comb(k, 3) > comb(l, 3):
        raise ValueError(f"target {target} exceeds the counting bound C({l},3)/C({k},3)")
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    best: list[frozenset[int]] = []
    for attempt in range(restarts):
        blocks = _greedy_pass(l, k, random.Random(f"{seed}:{attempt}"))
        if len(blocks) > len(best):
            best = blocks
        if len(best) >= target:
            break
    if len(best) < target:
        raise PackingError(
            f"greedy reached only {len(best)} blocks of size {k} on {l} points "
            f"(target {target}, {restarts} restarts)"
        )
    best.sort(key=sorted)
    return BlockPacking(l, k, best)


@dataclass(frozen=True)
class BlockAssignment:
    """``b_prime[i]`` is the block given to symbol ``i``; ``b`` drops ``i`` itself for heavy symbols."""

    v: int
    c: int
    b_prime: dict[int, frozenset[int]]

    @property
    def heavy(self) -> range:
        return range(self.c + 1, self.v + 1)

    @property
    def b(self) -> dict[int, frozenset[int]]:
        return {i: (blk - {i} if i > self.c else blk) for i, blk in self.b_prime.items()}

    def check(self, k: int) -> None:
        if sorted(self.b_prime) != list(range(1, self.v + 1)):
            raise AssignmentError("every symbol needs a block")
        if len(set(self.b_prime.values())) != self.v:
            raise AssignmentError("assigned blocks are not distinct")
        for i in self.heavy:
            if i not in self.b_prime[i]:
                raise AssignmentError(f"block of heavy symbol {i} does not contain it")
        for i, blk in self.b.items():
            if len(blk) != (k if i <= self.c else k - 1):
                raise AssignmentError(f"B_{i} has wrong size {len(blk)}")

    def to_json(self) -> dict[str, Any]:
        return {"v": self.v, "c": self.c, "b_prime": {str(i): sorted(b) for i, b in sorted(self.b_prime.items())}}


def _match(left: list[int], adj: dict[int, list[int]]) -> dict[int, int]:
    """Maximum bipartite matching by augmenting paths; returns left -> right."""
    owner: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for w in adj[u]:
            if w in seen:
                continue
            seen.add(w)
            if w not in owner or augment(owner[w], seen):
                owner[w] = u
                return True
        return False

    for u in left:
        augment(u, set())
    return {u: w for w, u in owner.items()}


def assign_blocks(p: BlockPacking, v: int, c: int) -> BlockAssignment:
    """Give every symbol of ``1..v`` a distinct block on ``R = c+1..v``.

    Packing point ``x`` becomes symbol ``c + x``. Heavy symbols ``i in R`` are
    matched to blocks containing ``i`` (a system of distinct representatives);
    light symbols take the lowest-indexed unused blocks.
    """
    if v - c != p.l:
        raise ValueError(f"|R| = v - c = {v - c} must equal the packing's point count {p.l}")
    if len(p.blocks) < v:
        raise AssignmentError(f"packing has {len(p.blocks)} blocks, {v} symbols need one each")
    blocks = [frozenset(c + x for x in b) for b in p.blocks]
    heavy = list(range(c + 1, v + 1))
    adj = {i: [idx for idx, b in enumerate(blocks) if i in b] for i in heavy}
    match = _match(heavy, adj)
    if len(match) < len(heavy):
        missing = [i for i in heavy if i not in match]
        raise AssignmentError(f"no system of distinct representatives; unmatched heavy symbols {missing}")
    taken = set(match.values())
    spare = [idx for idx in range(len(blocks)) if idx not in taken]
    b_prime = {i: blocks[match[i]] for i in heavy}
    for i, idx in zip(range(1, c + 1), spare):
        b_prime[i] = blocks[idx]
    out = BlockAssignment(v, c, dict(sorted(b_prime.items())))
    out.check(p.k)
    return out
