"""Permutation arrays, suitable cores and the leader transform between them.

Symbols are 1-based everywhere. A core over ``v`` symbols is just a
:class:`PermutationArray`; the strength ``t`` travels separately.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable, Sequence


@dataclass(frozen=True)
class PermutationArray:
    """An ``n_rows x n_symbols`` array whose rows are permutations of ``1..v``.

    ``n_symbols == 0`` is allowed so that the degenerate core of an
    ``(N, N, t)`` array (every symbol is a leader) can be represented.
    """

    rows: tuple[tuple[int, ...], ...]
    n_symbols: int

    def __init__(self, rows: Iterable[Sequence[int]], n_symbols: int | None = None):
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        if not rows:
            raise ValueError("a permutation array needs at least one row")
        if n_symbols is None:
            n_symbols = len(rows[0])
        expected = set(range(1, n_symbols + 1))
        for idx, row in enumerate(rows):
            if len(row) != n_symbols or set(row) != expected:
                raise ValueError(f"row {idx} is not a permutation of 1..{n_symbols}: {list(row)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "n_symbols", n_symbols)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def symbols(self) -> range:
        return range(1, self.n_symbols + 1)

    def leaders(self) -> list[int]:
        return [row[0] for row in self.rows] if self.n_symbols else []

    def lead_counts(self) -> dict[int, int]:
        counts = dict.fromkeys(self.symbols, 0)
        for x in self.leaders():
            counts[x] += 1
        return counts

    def positions(self) -> list[dict[int, int]]:
        return [{x: p for p, x in enumerate(row)} for row in self.rows]

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.rows]

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class SuitabilityParams:
    t: int

    def __post_init__(self):
        if self.t < 1:
            raise ValueError(f"strength must be positive, got t={self.t}")

    def excess(self, v: int) -> int:
        """``t + 1 - v``: the per-symbol lead floor of a core over ``v`` symbols."""
        return self.t + 1 - v


@dataclass
class CoreWitness:
    core: PermutationArray
    params: SuitabilityParams
    provenance: dict[str, Any] = field(default_factory=dict)
    certificate: Any = None

    def __post_init__(self):
        v, floor = self.core.n_symbols, self.params.excess(self.core.n_symbols)
        if floor > 0 and self.core.n_rows < v * floor:
            raise ValueError(
                f"{self.core.n_rows} rows cannot form a core over {v} symbols at "
                f"t={self.params.t}; need at least {v * floor}"
            )

    @property
    def n(self) -> int:
        return self.core.n_rows

    @property
    def v(self) -> int:
        return self.core.n_symbols

    @property
    def t(self) -> int:
        return self.params.t


def _check_symbol(core: PermutationArray, x: int) -> None:
    if not 1 <= x <= core.n_symbols:
        raise ValueError(f"symbol {x} outside 1..{core.n_symbols}")


def c_pre(core: PermutationArray, sigma: int, t_set: Iterable[int]) -> int:
    """Count rows in which every symbol before ``sigma`` belongs to ``t_set``."""
    _check_symbol(core, sigma)
    allowed = set(t_set)
    for x in allowed:
        _check_symbol(core, x)
    if sigma in allowed:
        raise ValueError(f"t_set must not contain sigma={sigma}")
    count = 0
    for row in core.rows:
        for x in row:
            if x == sigma:
                count += 1
                break
            if x not in allowed:
                break
    return count


def _after_masks(array: PermutationArray) -> list[list[int]]:
    # masks[row][sigma] = bitset of symbols after sigma in that row (bit x-1)
    masks = []
    for row in array.rows:
        per = [0] * (array.n_symbols + 1)
        acc = 0
        for x in reversed(row):
            per[x] = acc
            acc |= 1 << (x - 1)
        masks.append(per)
    return masks


def is_suitable_array(array: PermutationArray, t: int) -> tuple[bool, tuple[int, tuple[int, ...]] | None]:
    """Check t-suitability directly.

    Returns ``(True, None)`` or ``(False, (sigma, S))`` where ``S`` is a
    t-subset containing ``sigma`` such that no row puts ``sigma`` before the
    rest of ``S``.
    """
    v = array.n_symbols
    if not 1 <= t <= v:
        raise ValueError(f"strength t={t} outside 1..{v}")
    masks = _after_masks(array)
    for sigma in array.symbols:
        afters = {m[sigma] for m in masks}
        others = [x for x in array.symbols if x != sigma]
        for rest in combinations(others, t - 1):
            need = 0
            for x in rest:
                need |= 1 << (x - 1)
            if not any(need & a == need for a in afters):
                return False, (sigma, tuple(sorted((sigma,) + rest)))
    return True, None


def array_to_core(array: PermutationArray, t: int) -> CoreWitness:
    """Extract the suitable core of an ``(N, v, t)``-suitable array with ``N <= v``.

    Rows are processed top-down; each row's leader is its first symbol not
    already chosen, and every chosen leader is pushed to the right end of all
    other rows. The leftover symbols are renamed ``1..v-N`` in numeric order.
    """
    n, v = array.n_rows, array.n_symbols
    if n > v:
        raise ValueError(f"array has more rows ({n}) than symbols ({v})")
    ok, bad = is_suitable_array(array, t)
    if not ok:
        raise ValueError(f"array is not {t}-suitable; symbol {bad[0]} fails on {list(bad[1])}")

    rows = [list(r) for r in array.rows]
    leaders: list[int] = []
    for i in range(n):
        lead = next(x for x in rows[i] if x not in leaders)
        leaders.append(lead)
        for j in range(n):
            if j != i and lead in rows[j]:
                rows[j].remove(lead)
                rows[j].append(lead)
        # keep own row's leader in front; earlier leaders already sit at the tail
        rows[i].remove(lead)
        rows[i].insert(0, lead)

    chosen = set(leaders)
    rest = sorted(x for x in array.symbols if x not in chosen)
    rename = {x: k + 1 for k, x in enumerate(rest)}
    core_rows = [[rename[x] for x in row if x not in chosen] for row in rows]
    core = PermutationArray(core_rows, n_symbols=len(rest))
    return CoreWitness(
        core=core,
        params=SuitabilityParams(t),
        provenance={"route": "array", "leaders": leaders, "symbols": rest},
    )


def core_to_array(core: PermutationArray, t: int) -> PermutationArray:
    """Prepend a distinct new leader to each core row and append the others ascending."""
    SuitabilityParams(t)
    vp, n = core.n_symbols, core.n_rows
    new = list(range(vp + 1, vp + n + 1))
    rows = []
    for i, row in enumerate(core.rows):
        lead = new[i]
        rows.append([lead, *row, *(x for x in new if x != lead)])
    return PermutationArray(rows, n_symbols=vp + n)


def read_text_array(text: str) -> tuple[PermutationArray, int]:
    """Parse the plain-text format: ``N v t`` header, then ``N`` rows of ``v`` ints."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 3:
        raise ValueError("expected header line 'N v t'")
    n, v, t = (int(x) for x in lines[0])
    body = lines[1:]
    if len(body) != n:
        raise ValueError(f"header says {n} rows, found {len(body)}")
    return PermutationArray(body, n_symbols=v), t


def write_text_array(array: PermutationArray, t: int) -> str:
    out = [f"{array.n_rows} {array.n_symbols} {t}"]
    out += [" ".join(map(str, row)) for row in array.rows]
    return "\n".join(out) + "\n"
