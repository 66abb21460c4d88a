"""Explicit constructions of suitable cores and a parameter planner.

Two routes, both with ``t = 2s + delta`` and ``v = s + alpha``:

packing
    Blocks of a 3-(l, k, 1) packing on the last ``l`` symbols decide which
    pairs ``ij`` never start a row; shared block elements are pushed into the
    third position. ``k = 2*alpha - delta - 2``.

ramsey
    Light symbols ``1..c`` lead the minimum number of rows; the ``r`` heavy
    symbols lead extra rows, and a Ramsey coloring of ``K_c`` decides which
    heavy symbols come third after each light pair.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from .core import CoreWitness, PermutationArray, SuitabilityParams
from .packings import AssignmentError, BlockAssignment, PackingError, assign_blocks, build_packing, johnson_upper
from .ramsey import (EdgeMultiColoring, RamseyTarget, erdos_lower, multicolor_lower, search_coloring,
                     validate_ramsey_coloring)
from .verify import Verdict, verify_cap, verify_exact, verify_necessary, verify_shallow

log = logging.getLogger(__name__)


class InfeasibleSpec(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


@dataclass
class BuildSpec:
    s: int
    delta: int
    alpha: int
    l: int | None = None
    route: str = "packing"
    k_vec: tuple[int, ...] | None = None
    seed: int = 0

    def __post_init__(self):
        if self.delta not in (0, 1):
            raise InfeasibleSpec(f"delta must be 0 or 1, got {self.delta}")
        if self.alpha < 3:
            raise InfeasibleSpec(f"alpha must be at least 3, got {self.alpha}")
        if self.route not in ("packing", "ramsey"):
            raise InfeasibleSpec(f"unknown route {self.route!r}")
        if self.k_vec is not None:
            self.k_vec = tuple(int(k) for k in self.k_vec)
            if self.l is None:
                self.l = sum(self.k_vec)
            elif sum(self.k_vec) != self.l:
                raise InfeasibleSpec(f"k_vec sums to {sum(self.k_vec)}, not l={self.l}")
        if self.l is None:
            raise InfeasibleSpec("l (or k_vec) is required")
        if self.s < 1 or self.l < 1:
            raise InfeasibleSpec("s and l must be positive")

    @classmethod
    def from_tv(cls, t: int, v: int, **kw: Any) -> "BuildSpec":
        s, delta = divmod(t, 2)
        return cls(s=s, delta=delta, alpha=v - s, **kw)

    @property
    def t(self) -> int:
        return 2 * self.s + self.delta

    @property
    def v(self) -> int:
        return self.s + self.alpha

    @property
    def r(self) -> int:
        return 2 * self.alpha - self.delta - 2

    @property
    def block_size(self) -> int:
        return self.r

    @property
    def c(self) -> int:
        """Number of light symbols: ``v - l`` on the packing route, ``t + 2 - v`` on the Ramsey route."""
        if self.route == "packing":
            return self.v - self.l
        return self.t + 2 - self.v

    @property
    def n_rows(self) -> int:
        return self.v * (self.t + 1 - self.v) + self.l

    def resolved_k_vec(self) -> tuple[int, ...]:
        if self.k_vec is not None:
            return self.k_vec
        return balanced_k_vec(self.l, self.r)

    def to_json(self) -> dict[str, Any]:
        return {"route": self.route, "s": self.s, "delta": self.delta, "alpha": self.alpha, "l": self.l,
                "k_vec": list(self.resolved_k_vec()) if self.route == "ramsey" else None, "seed": self.seed,
                "t": self.t, "v": self.v, "c": self.c, "r": self.r}


def balanced_k_vec(l: int, r: int) -> tuple[int, ...]:
    """``k_i = l // r`` with the remainder added to the last budget."""
    base = l // r
    return (base,) * (r - 1) + (base + l - base * r,)


def skewed_k_vec(l: int) -> tuple[int, int, int]:
    """Three-color split ``(3, (l-5)/2, (l-1)/2)`` for odd ``l``."""
    if l % 2 == 0 or l < 11:
        raise InfeasibleSpec(f"the (3, (l-5)/2, (l-1)/2) split needs odd l >= 11, got {l}")
    return 3, (l - 5) // 2, (l - 1) // 2


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def _complete(prefix: Sequence[int], v: int) -> list[int]:
    used = set(prefix)
    return list(prefix) + [x for x in range(1, v + 1) if x not in used]


def _certify(core: PermutationArray, t: int, shallow: bool, jobs: int = 1) -> Verdict:
    nec = verify_necessary(core, t)
    if nec.falsified:
        return nec
    if shallow:
        sh = verify_shallow(core, t)
        if not sh.certified:
            log.warning("shallow certificate failed: %s", sh.stats)
    if core.n_symbols <= verify_cap():
        return verify_exact(core, t, jobs=jobs)
    if shallow:
        return sh
    return verify_shallow(core, t)


# ---------------------------------------------------------------------------
# packing route
# ---------------------------------------------------------------------------

def packing_prefixes(assign: BlockAssignment) -> dict[tuple[int, int], int | None]:
    """Row prefixes ``ij`` with their forced third element (None when free).

    Every symbol ``i`` starts one row ``ij`` for each ``j`` outside ``B_i``.
    For each pair with ``B_i & B_j = {a < b}`` (``i < j``) ``a`` follows ``ij``
    and ``b`` follows ``ji``; with a single shared ``a`` it follows ``ij`` if
    that row exists, else ``ji``.
    """
    v = assign.v
    b = assign.b
    rows: dict[tuple[int, int], int | None] = {}
    for i in range(1, v + 1):
        for j in range(1, v + 1):
            if j != i and j not in b[i]:
                rows[(i, j)] = None
    for i in range(1, v + 1):
        for j in range(i + 1, v + 1):
            shared = sorted(b[i] & b[j])
            if len(shared) > 2:
                raise ConstructionError(f"B_{i} and B_{j} share {shared}; blocks are not a packing")
            if len(shared) == 2:
                if (i, j) not in rows or (j, i) not in rows:
                    raise ConstructionError(f"B_{i} & B_{j} = {shared} but rows {i}{j}/{j}{i} are not both present")
                rows[(i, j)], rows[(j, i)] = shared
            elif len(shared) == 1:
                if (i, j) in rows:
                    rows[(i, j)] = shared[0]
                elif (j, i) in rows:
                    rows[(j, i)] = shared[0]
                else:
                    raise ConstructionError(f"B_{i} & B_{j} = {shared} but neither {i}{j} nor {j}{i} starts a row")
    return rows


def build_packing_core(spec: BuildSpec, restarts: int = 64, shallow: bool = True, jobs: int = 1) -> CoreWitness:
    if spec.route != "packing":
        spec = BuildSpec(spec.s, spec.delta, spec.alpha, spec.l, "packing", None, spec.seed)
    v, l, k, c = spec.v, spec.l, spec.block_size, spec.c
    if not (k <= l <= v):
        raise InfeasibleSpec(f"packing route needs block size {k} <= l={l} <= v={v}")
    if johnson_upper(l, k) < v:
        raise InfeasibleSpec(f"D({l},{k},3) <= {johnson_upper(l, k)} < v={v}; not enough blocks")

    # one greedy pass per attempt: a pass that reaches v blocks can still lack an SDR
    last: Exception | None = None
    for attempt in range(restarts):
        try:
            packing = build_packing(l, k, v, seed=f"{spec.seed}:{attempt}", restarts=1)
            assign = assign_blocks(packing, v, c)
            break
        except (PackingError, AssignmentError) as exc:
            last = exc
    else:
        raise ConstructionError(f"no packing with a block assignment after {restarts} passes; last: {last}")

    prefixes = packing_prefixes(assign)
    rows = []
    for (i, j), third in prefixes.items():
        rows.append(_complete([i, j] if third is None else [i, j, third], v))
    core = PermutationArray(rows, n_symbols=v)
    if core.n_rows != spec.n_rows:
        raise ConstructionError(f"emitted {core.n_rows} rows, expected {spec.n_rows}")

    leads = core.lead_counts()
    floor = spec.t + 1 - v
    for i in range(1, v + 1):
        want = floor if i <= c else floor + 1
        if leads[i] != want:
            raise ConstructionError(f"symbol {i} leads {leads[i]} rows, expected {want}")

    provenance = {
        **spec.to_json(),
        "block_size": k,
        "packing": packing.to_json(),
        "assignment": assign.to_json(),
    }
    return CoreWitness(core, SuitabilityParams(spec.t), provenance, _certify(core, spec.t, shallow, jobs))


# ---------------------------------------------------------------------------
# ramsey route
# ---------------------------------------------------------------------------

def ramsey_rows(c: int, r: int, k_vec: Sequence[int], coloring: EdgeMultiColoring | None) -> list[list[int]]:
    """Rows of the Ramsey-route core, in emission order.

    The coloring's missing two colors ``h1 < h2`` on edge ``ij`` (``i < j``)
    put ``c + h1`` after ``ij`` and ``c + h2`` after ``ji``.
    """
    v = c + r
    heavy = list(range(c + 1, v + 1))
    third: dict[tuple[int, int], int] = {}
    if c >= 2:
        for i in range(1, c + 1):
            for j in range(i + 1, c + 1):
                h1, h2 = sorted(set(range(1, r + 1)) - coloring.colors(i, j))
                third[(i, j)], third[(j, i)] = c + h1, c + h2
    rows = []
    for j in range(1, v + 1):
        for i in range(1, c + 1):
            if i == j:
                continue
            t3 = third.get((j, i))
            rows.append(_complete([j, i] if t3 is None else [j, i, t3], v))
    for h, kh in enumerate(k_vec, start=1):
        lead = c + h
        seconds = [x for x in heavy if x != lead] + list(range(1, c + 1))
        for step in range(kh - 1):
            rows.append(_complete([lead, seconds[step % len(seconds)]], v))
    return rows


def build_ramsey_core(spec: BuildSpec, budget: int = 200_000, shallow: bool = True,
                      coloring: EdgeMultiColoring | None = None, jobs: int = 1) -> CoreWitness:
    if spec.route != "ramsey":
        spec = BuildSpec(spec.s, spec.delta, spec.alpha, spec.l, "ramsey", spec.k_vec, spec.seed)
    c, r, v = spec.c, spec.r, spec.v
    k_vec = spec.resolved_k_vec()
    if len(k_vec) != r:
        raise InfeasibleSpec(f"need {r} clique budgets, got {len(k_vec)}")
    if any(k < r for k in k_vec):
        raise InfeasibleSpec(f"every k_i must be >= r={r} so heavy symbols can cover each other; got {list(k_vec)}")
    if c < 1:
        raise InfeasibleSpec(f"c = t + 2 - v = {c} must be positive")

    m = r - 2
    target = RamseyTarget(k + 1 for k in k_vec)
    if coloring is None and c >= 2:
        coloring = search_coloring(c, target, m, seed=spec.seed, budget=budget)
        if coloring is None:
            raise ConstructionError(
                f"no Ramsey {tuple(target.k_vec)}^{m} coloring of K_{c} found within budget {budget}")
    if coloring is not None:
        if (coloring.n, coloring.r, coloring.m) != (c, r, m):
            raise InfeasibleSpec(f"coloring must be an ({r};{m})-coloring of K_{c}")
        ok, bad = validate_ramsey_coloring(coloring, target)
        if not ok:
            raise InfeasibleSpec(f"coloring has a monochromatic K_{len(bad[1])} in color {bad[0]}")

    core = PermutationArray(ramsey_rows(c, r, k_vec, coloring), n_symbols=v)
    if core.n_rows != spec.n_rows:
        raise ConstructionError(f"emitted {core.n_rows} rows, expected {spec.n_rows}")
    leads = core.lead_counts()
    for i in range(1, c + 1):
        if leads[i] != c - 1:
            raise ConstructionError(f"light symbol {i} leads {leads[i]} rows, expected {c - 1}")
    for h, kh in enumerate(k_vec, start=1):
        if leads[c + h] != c + kh - 1:
            raise ConstructionError(f"heavy symbol {c + h} leads {leads[c + h]} rows, expected {c + kh - 1}")

    provenance = {**spec.to_json(), "m": m, "target": list(target.k_vec),
                  "coloring": coloring.to_json() if coloring is not None else None}
    return CoreWitness(core, SuitabilityParams(spec.t), provenance, _certify(core, spec.t, shallow, jobs))


def build(spec: BuildSpec, **kw: Any) -> CoreWitness:
    if spec.route == "packing":
        return build_packing_core(spec, **kw)
    return build_ramsey_core(spec, **kw)


# ---------------------------------------------------------------------------
# planning
# ---------------------------------------------------------------------------

@dataclass
class Plan:
    t: int
    v: int
    s: int
    delta: int
    alpha: int
    packing: dict[str, Any] = field(default_factory=dict)
    ramsey: dict[str, Any] = field(default_factory=dict)
    advisories: list[str] = field(default_factory=list)

    def feasible_packing_l(self) -> list[int]:
        return self.packing.get("l_values", [])

    def to_json(self) -> dict[str, Any]:
        return {"t": self.t, "v": self.v, "s": self.s, "delta": self.delta, "alpha": self.alpha,
                "packing": self.packing, "ramsey": self.ramsey, "advisories": self.advisories}


def _coloring_guaranteed(c: int, k: int, r: int) -> bool:
    """Whether some Ramsey ``(k+1; r)^(r-2)`` coloring of ``K_c`` provably exists."""
    if c <= k:
        return True  # K_c has no (k+1)-clique at all
    m = r - 2
    if m == 1:
        # three colors: using only two of them already avoids K_{k+1}
        return erdos_lower(k + 1).value > c
    rep = multicolor_lower(m, r, k + 1)
    return rep.valid and rep.value > c


def plan_parameters(t: int, v: int) -> Plan:
    """Feasible ``l`` for each route at ``(t, v)`` with ``v = floor(t/2) + alpha``, ``alpha >= 3``."""
    if t < 3:
        raise InfeasibleSpec("strength must be at least 3")
    if v > t:
        raise InfeasibleSpec(f"v={v} > t={t}: no route applies")
    s, delta = divmod(t, 2)
    alpha = v - s
    if alpha < 3:
        raise InfeasibleSpec(f"v={v} gives alpha={alpha} < 3: no route applies")
    plan = Plan(t, v, s, delta, alpha)
    base = v * (t + 1 - v)

    k = 2 * alpha - delta - 2
    exact = k in (3, 4)
    ls = [l for l in range(max(k, 1), v + 1) if johnson_upper(l, k) >= v]
    plan.packing = {
        "block_size": k,
        "l_values": ls,
        "n_values": [base + l for l in ls],
        "min_l": ls[0] if ls else None,
        "min_n": base + ls[0] if ls else None,
        "packing_number": "exact" if exact else "upper bound only; the greedy packing may fall short",
    }

    r = k
    c = t + 2 - v
    l_min = r * r
    guaranteed = next((r * kk for kk in range(r, 64) if _coloring_guaranteed(c, kk, r)), None)
    tau = 2 * r / (math.log(r) - math.log(r - 2))
    plan.ramsey = {
        "r": r, "c": c, "m": r - 2,
        "min_l": l_min,
        "min_n": base + l_min,
        "guaranteed_l": guaranteed,
        "guaranteed_n": base + guaranteed if guaranteed is not None else None,
        "tau_threshold": tau,
        "tau_threshold_alpha3_odd": 4 / math.log(2) if (alpha, delta) == (3, 1) else None,
        "asymptotic_l": tau * math.log(s),
    }
    if alpha == 3:
        lim = math.log(s) / (6 * math.log(3))
        plan.advisories.append(
            f"alpha=3: for l <= ln(s)/(6 ln 3) = {lim:.3f} no core exists once s is large enough")
        plan.ramsey["nonexistence_l_limit"] = lim
    return plan
