"""{0,1} assignments on the directions and the search showing none fits every basis.

A basis is *valid* under an assignment when its three values show exactly one 0,
i.e. are a permutation of (1, 0, 1).

An :class:`Assignment` gives a value to each of the 33 symmetry axes. A basis that
contains a completing direction (id > 33) needs a value there too. It is either
supplied explicitly (``extension``) or, by default, chosen in the predictor's
favour: 0 when both axes of the pair show 1, and 1 otherwise. With the favourable
choice such a basis fails only when both of its axes show 0.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .geometry import NUM_COMPLETIONS, NUM_RAYS, Basis

SPIN_PATTERNS = ((1, 0, 1), (0, 1, 1), (1, 1, 0))

MODES = ("triples_only", "triples_and_pairs", "projected")


def pattern_valid(t: Sequence[int]) -> bool:
    return len(t) == 3 and all(b in (0, 1) for b in t) and sum(t) == 2


def _bits(values, length: int, what: str) -> tuple[int, ...]:
    out = tuple(int(v) for v in values)
    if len(out) != length:
        raise ValueError(f"{what} needs exactly {length} bits, got {len(out)}")
    if any(v not in (0, 1) for v in out):
        raise ValueError(f"{what} entries must be 0 or 1")
    return out


@dataclass(frozen=True)
class Assignment:
    values: tuple[int, ...]
    extension: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _bits(self.values, NUM_RAYS, "assignment"))
        if self.extension is not None:
            object.__setattr__(
                self, "extension", _bits(self.extension, NUM_COMPLETIONS, "extension")
            )

    @classmethod
    def constant(cls, bit: int) -> Assignment:
        return cls((bit,) * NUM_RAYS)

    def __getitem__(self, ray_id: int) -> int:
        if 1 <= ray_id <= NUM_RAYS:
            return self.values[ray_id - 1]
        if self.extension is not None and 1 <= ray_id - NUM_RAYS <= NUM_COMPLETIONS:
            return self.extension[ray_id - NUM_RAYS - 1]
        raise KeyError(ray_id)

    def triple(self, basis: Basis) -> tuple[int, int, int]:
        """The three values a predictor shows for ``basis``."""
        out = []
        for rid in basis.ids:
            if rid <= NUM_RAYS or self.extension is not None:
                out.append(self[rid])
                continue
            if rid - NUM_RAYS > NUM_COMPLETIONS:
                raise KeyError(rid)
            partners = [self[p] for p in basis.ids if p <= NUM_RAYS]
            out.append(0 if 0 not in partners else 1)
        return out[0], out[1], out[2]

    def to_string(self) -> str:
        s = "".join(map(str, self.values))
        if self.extension is not None:
            s += "".join(map(str, self.extension))
        return s


def first_violated_basis(a: Assignment, bases: Iterable[Basis]) -> int | None:
    for b in bases:
        if not pattern_valid(a.triple(b)):
            return b.rank
    return None


def first_violated_many(values: np.ndarray, bases: Sequence[Basis]) -> np.ndarray:
    """Vectorised :func:`first_violated_basis` for rows of 33 bits.

    Completing directions take the favourable value. Returns the first failing
    rank per row, 0 where every basis is valid.
    """
    values = np.asarray(values, dtype=np.uint8)
    if values.ndim != 2 or values.shape[1] != NUM_RAYS:
        raise ValueError("expected an (n, 33) array of bits")
    out = np.zeros(values.shape[0], dtype=np.int64)
    undecided = np.ones(values.shape[0], dtype=bool)
    for b in bases:
        axes = [rid - 1 for rid in b.ids if rid <= NUM_RAYS]
        zeros = (values[:, axes] == 0).sum(axis=1)
        if len(axes) == 3:
            bad = zeros != 1
        else:
            bad = zeros >= 2
        hit = bad & undecided
        out[hit] = b.rank
        undecided &= ~hit
    return out


@dataclass
class SearchReport:
    result: str
    witness: Assignment | None
    nodes_visited: int
    max_depth: int
    elapsed: float = field(default=0.0, compare=False)

    @property
    def satisfiable(self) -> bool:
        return self.result == "SAT"


class _Propagator:
    """Exactly-one-zero and at-most-one-zero constraints over direction ids."""

    def __init__(self, exactly_one, at_most_one) -> None:
        self.cons = [("one", tuple(c)) for c in exactly_one]
        self.cons += [("amo", tuple(c)) for c in at_most_one]
        self.vars = sorted({v for _, c in self.cons for v in c})
        self.occurs: dict[int, list[int]] = {v: [] for v in self.vars}
        for idx, (_, c) in enumerate(self.cons):
            for v in set(c):
                self.occurs[v].append(idx)
        self.value: dict[int, int] = {}
        self.trail: list[int] = []

    def assign(self, var: int, val: int) -> bool:
        self.value[var] = val
        self.trail.append(var)
        return self.propagate(self.occurs[var])

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            del self.value[self.trail.pop()]

    def propagate(self, pending) -> bool:
        queue = list(pending)
        while queue:
            kind, c = self.cons[queue.pop()]
            vals = [self.value.get(v) for v in c]
            zeros = vals.count(0)
            free = [v for v, x in zip(c, vals) if x is None]
            if zeros > 1:
                return False
            if zeros == 1:
                forced = 1
            elif kind == "one" and not free:
                return False
            elif kind == "one" and len(free) == 1:
                forced = 0
            else:
                continue
            for v in dict.fromkeys(free):
                if v in self.value:
                    if self.value[v] != forced:
                        return False
                    continue
                self.value[v] = forced
                self.trail.append(v)
                queue.extend(self.occurs[v])
        return True


def _to_assignment(value: dict[int, int]) -> Assignment:
    ext_ids = range(NUM_RAYS + 1, NUM_RAYS + NUM_COMPLETIONS + 1)
    return Assignment(
        tuple(value.get(i, 1) for i in range(1, NUM_RAYS + 1)),
        tuple(value.get(i, 1) for i in ext_ids),
    )


def prove_noncolorable(
    bases: Iterable[Basis], pairs: Iterable[tuple[int, int]] = ()
) -> SearchReport:
    """Complete search for an assignment making every basis valid.

    Branches on the lowest unassigned id, trying 1 before 0, with unit
    propagation after every decision. ``pairs`` adds at-most-one-zero
    constraints. Directions not mentioned anywhere are reported as 1.
    """
    start = time.perf_counter()
    prop = _Propagator([b.ids for b in bases], pairs)
    stats = {"nodes": 0, "depth": 0}

    def search(depth: int) -> bool:
        stats["nodes"] += 1
        stats["depth"] = max(stats["depth"], depth)
        var = next((v for v in prop.vars if v not in prop.value), None)
        if var is None:
            return True
        for val in (1, 0):
            mark = len(prop.trail)
            if prop.assign(var, val) and search(depth + 1):
                return True
            prop.undo(mark)
        return False

    if prop.propagate(range(len(prop.cons))) and search(0):
        result, witness = "SAT", _to_assignment(prop.value)
    else:
        stats["nodes"] = max(stats["nodes"], 1)
        result, witness = "UNSAT", None
    return SearchReport(
        result, witness, stats["nodes"], stats["depth"], time.perf_counter() - start
    )


def uncovered_pairs(
    bases: Iterable[Basis], pairs: Iterable[tuple[int, int]]
) -> list[tuple[int, int]]:
    covered = set()
    for b in bases:
        covered.update(itertools.combinations(sorted(b.ids), 2))
    return [tuple(sorted(p)) for p in pairs if tuple(sorted(p)) not in covered]


@dataclass
class CnfDocument:
    variable_count: int
    clauses: list[tuple[int, ...]]
    comments: list[str] = field(default_factory=list)

    @property
    def header(self) -> str:
        return f"p cnf {self.variable_count} {len(self.clauses)}"

    def render(self) -> str:
        lines = [f"c {c}" if c else "c" for c in self.comments]
        lines.append(self.header)
        lines += [" ".join(map(str, cl)) + " 0" for cl in self.clauses]
        return "\n".join(lines) + "\n"


def _exactly_one_zero(i: int, j: int, k: int) -> list[tuple[int, ...]]:
    return [(i, j, k), (-i, -j), (-i, -k), (-j, -k)]


def export_dimacs(
    bases: Sequence[Basis],
    mode: str = "triples_only",
    pairs: Iterable[tuple[int, int]] = (),
) -> CnfDocument:
    """Encode the bases as CNF; variable ``v`` true means direction ``v`` is 0.

    ``triples_only`` gives each basis its four exactly-one clauses over all
    directions it uses. ``triples_and_pairs`` also forbids two zeros on each
    orthogonal pair in ``pairs`` that no basis already covers. ``projected``
    stays on the 33 axes: a basis holding a completing direction contributes only
    the clause that its two axes are not both 0.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    bases = list(bases)
    clauses: list[tuple[int, ...]] = []
    for b in bases:
        if mode == "projected" and not b.complete:
            p, q = (rid for rid in b.ids if rid <= NUM_RAYS)
            clauses.append((-p, -q))
        else:
            clauses.extend(_exactly_one_zero(*b.ids))
    extra = uncovered_pairs(bases, pairs) if mode == "triples_and_pairs" else []
    clauses += [(-p, -q) for p, q in extra]
    used = max((abs(l) for cl in clauses for l in cl), default=0)
    nvars = NUM_RAYS if mode == "projected" else max(NUM_RAYS, used)
    comments = [
        "orthogonal-triple constraints on the 33 symmetry axes",
        f"mode {mode}; {len(bases)} bases",
        "variable v true <=> direction v is assigned 0",
        "variables 1-33 are symmetry axes; 34-57 are completing directions",
        "each basis must show exactly one 0",
    ]
    if extra:
        comments.append(f"{len(extra)} orthogonal pairs may not both be 0")
    return CnfDocument(nvars, clauses, comments)


def parse_dimacs(text: str) -> CnfDocument:
    comments: list[str] = []
    clauses: list[tuple[int, ...]] = []
    header = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith("c"):
            comments.append(line[2:] if line.startswith("c ") else "")
            continue
        if line.startswith("p "):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: malformed header {line!r}")
            header = int(parts[2]), int(parts[3])
            continue
        if not line.strip():
            continue
        if header is None:
            raise ValueError(f"line {lineno}: clause before header")
        lits = [int(tok) for tok in line.split()]
        if not lits or lits[-1] != 0 or 0 in lits[:-1]:
            raise ValueError(f"line {lineno}: clause must end with a single 0")
        if any(abs(l) > header[0] for l in lits[:-1]):
            raise ValueError(f"line {lineno}: literal out of range")
        clauses.append(tuple(lits[:-1]))
    if header is None:
        raise ValueError("missing 'p cnf' header")
    if header[1] != len(clauses):
        raise ValueError(f"header promises {header[1]} clauses, found {len(clauses)}")
    return CnfDocument(header[0], clauses, comments)


def max_satisfiable(bases: Sequence[Basis]) -> tuple[int, Assignment]:
    """Largest number of bases that one assignment makes valid, with a witness.

    Branch and bound over the ids in ascending order. A direction that occurs in
    a single basis and nowhere else is never branched on; it takes whatever value
    helps its basis once the rest is fixed. The bound counts every basis not yet
    known to fail.
    """
    bases = list(bases)
    occurrences: dict[int, int] = {}
    for b in bases:
        for rid in b.ids:
            occurrences[rid] = occurrences.get(rid, 0) + 1
    free = {rid for rid, n in occurrences.items() if n == 1}
    order = sorted(rid for rid in occurrences if rid not in free)
    pos = {rid: n for n, rid in enumerate(order)}

    members = [[rid for rid in b.ids if rid not in free] for b in bases]
    n_free = [3 - len(m) for m in members]
    touching: dict[int, list[int]] = {rid: [] for rid in order}
    for idx, m in enumerate(members):
        for rid in m:
            touching[rid].append(idx)
    last = [max((pos[r] for r in m), default=-1) for m in members]

    zeros = [0] * len(bases)
    value: dict[int, int] = {}

    def dead(idx: int, depth: int) -> bool:
        if zeros[idx] > 1:
            return True
        return zeros[idx] == 0 and n_free[idx] == 0 and last[idx] < depth

    failed = sum(1 for idx in range(len(bases)) if dead(idx, 0))
    best = [-1, None]

    def search(depth: int, failed: int) -> None:
        if len(bases) - failed <= best[0]:
            return
        if depth == len(order):
            best[0], best[1] = len(bases) - failed, dict(value)
            return
        rid = order[depth]
        for val in (1, 0):
            value[rid] = val
            newly = 0
            for idx in touching[rid]:
                was = dead(idx, depth)
                zeros[idx] += val == 0
                newly += dead(idx, depth + 1) and not was
            search(depth + 1, failed + newly)
            for idx in touching[rid]:
                zeros[idx] -= val == 0
        del value[rid]

    search(0, failed)
    value = best[1]
    for idx, b in enumerate(bases):
        open_ids = [rid for rid in b.ids if rid in free]
        if not open_ids:
            continue
        has_zero = any(value[r] == 0 for r in members[idx])
        for n, rid in enumerate(open_ids):
            value[rid] = 0 if (n == 0 and not has_zero) else 1
    return best[0], _to_assignment(value)
