"""The 33 symmetry axes of three 45°-rotated cubes and their 40 orthogonal triples.

All coordinates live in Z[√2] (see :mod:`ksverify.quadring`), so orthogonality and
parallelism are decided exactly.

Of the 40 orthogonal triples, 16 consist of three of the 33 axes. Each of the
other 24 is an orthogonal pair of axes together with the direction perpendicular
to both, which is not itself one of the 33. Those 24 *completing directions* get
ids 34..57, numbered in the lexical order of the pairs they complete.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .quadring import ZERO, QuadInt, q_div_sqrt2, q_mul, q_sign

NUM_RAYS = 33
NUM_DUPLICATES = 6
NUM_BASES = 40
NUM_COMPLETIONS = 24
NUM_DIRECTIONS = NUM_RAYS + NUM_COMPLETIONS

ROTATION_AXES = ("X", "Y", "Z")

Vec3 = tuple[QuadInt, QuadInt, QuadInt]

_UNDERLINE = "̲"

# The 13 symmetry axes of the coordinate cube in their fixed order; an underlined
# digit is -1.
CUBE_AXIS_LABELS = (
    "100", "010", "001",
    "110", "101", f"101{_UNDERLINE}", f"11{_UNDERLINE}0", "011", f"011{_UNDERLINE}",
    "111", f"111{_UNDERLINE}", f"11{_UNDERLINE}1", f"1{_UNDERLINE}11",
)


class ConstructionError(RuntimeError):
    """The fixed configuration came out with the wrong shape."""


def parse_axis_label(label: str) -> tuple[int, int, int]:
    digits: list[int] = []
    for ch in label:
        if ch == _UNDERLINE:
            if not digits:
                raise ValueError(f"dangling underline in {label!r}")
            digits[-1] = -digits[-1]
        elif ch in "01":
            digits.append(int(ch))
        else:
            raise ValueError(f"bad character {ch!r} in axis label {label!r}")
    if len(digits) != 3:
        raise ValueError(f"axis label {label!r} does not have three digits")
    return digits[0], digits[1], digits[2]


def vec(x, y, z) -> Vec3:
    """Build a vector from ints, QuadInts or ``(a, b)`` pairs."""

    def conv(c):
        if isinstance(c, QuadInt):
            return c
        if isinstance(c, int):
            return QuadInt(c, 0)
        return QuadInt.from_list(c)

    return conv(x), conv(y), conv(z)


def cube_axes() -> list[Vec3]:
    return [vec(*parse_axis_label(label)) for label in CUBE_AXIS_LABELS]


def rotate45(axis: str, v: Vec3, sense: int = 1) -> Vec3:
    """√2 times the 45° rotation of ``v`` about a coordinate axis.

    ``sense=+1`` is the right-hand rule, ``-1`` the opposite rotation. The √2
    factor keeps every entry inside Z[√2] and does not change the direction.
    """
    if sense not in (1, -1):
        raise ValueError("sense must be +1 or -1")
    x, y, z = v
    r2 = QuadInt(0, 1)
    if axis == "X":
        return r2 * x, y - sense * z, sense * y + z
    if axis == "Y":
        return x + sense * z, r2 * y, z - sense * x
    if axis == "Z":
        return x - sense * y, sense * x + y, r2 * z
    raise ValueError(f"unknown rotation axis {axis!r}")


def canonicalize(v: Sequence[QuadInt]) -> Vec3:
    """Unique representative of the direction of ``v``.

    Common factors of √2 and common integer factors are divided out, then the
    sign is fixed so the first nonzero component is positive.
    """
    comps = list(v)
    if len(comps) != 3:
        raise ValueError("expected a 3-vector")
    if not any(comps):
        raise ValueError("the zero vector has no direction")
    while all(c.a % 2 == 0 for c in comps):
        comps = [q_div_sqrt2(c) for c in comps]
    g = 0
    for c in comps:
        g = gcd(g, c.a, c.b)
    if g > 1:
        comps = [QuadInt(c.a // g, c.b // g) for c in comps]
    lead = next(c for c in comps if c)
    if q_sign(lead) < 0:
        comps = [-c for c in comps]
    return comps[0], comps[1], comps[2]


def _components(r) -> Sequence[QuadInt]:
    return r.components if isinstance(r, Ray) else r


def dot(r1, r2) -> QuadInt:
    u, v = _components(r1), _components(r2)
    acc = ZERO
    for p, q in zip(u, v):
        acc = acc + q_mul(p, q)
    return acc


def is_orthogonal(r1, r2) -> bool:
    return not dot(r1, r2)


def cross(r1, r2) -> Vec3:
    (a1, a2, a3), (b1, b2, b3) = _components(r1), _components(r2)
    return a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1


def is_parallel(r1, r2) -> bool:
    return not any(cross(r1, r2))


def format_vec(v: Sequence[QuadInt]) -> str:
    return "(" + ", ".join(str(c) for c in v) + ")"


@dataclass(frozen=True)
class Ray:
    """A registered direction.

    Ids 1..33 are symmetry axes and carry the cube and the source axis label they
    first came from; ids 34..57 are completing directions and carry the pair of
    axes they complete.
    """

    id: int
    components: Vec3
    cube: str | None = None
    axis: str | None = None
    completes: tuple[int, int] | None = None

    def __str__(self) -> str:
        return f"r{self.id}{format_vec(self.components)}"


@dataclass(frozen=True)
class Duplicate:
    cube: str
    axis: str
    matches: int


@dataclass(frozen=True)
class Basis:
    i: int
    j: int
    k: int
    rank: int

    @property
    def ids(self) -> tuple[int, int, int]:
        return self.i, self.j, self.k

    @property
    def complete(self) -> bool:
        """True when all three members are symmetry axes."""
        return self.k <= NUM_RAYS


@dataclass(frozen=True)
class RaySystem:
    rays: tuple[Ray, ...]
    eliminated: tuple[Duplicate, ...]
    completions: tuple[Ray, ...] = ()
    sense: int = 1
    _by_id: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        for r in self.directions:
            self._by_id[r.id] = r

    @property
    def directions(self) -> tuple[Ray, ...]:
        return self.rays + self.completions

    def __getitem__(self, ray_id: int) -> Ray:
        try:
            return self._by_id[ray_id]
        except KeyError:
            raise KeyError(f"no direction with id {ray_id}") from None

    def __len__(self) -> int:
        return len(self.rays)

    def cube_counts(self) -> dict[str, int]:
        counts = {a: 0 for a in ROTATION_AXES}
        for r in self.rays:
            counts[r.cube] += 1
        return counts


def orthogonal_pairs(rays: Iterable[Ray]) -> list[tuple[int, int]]:
    rays = sorted(rays, key=lambda r: r.id)
    return [
        (p.id, q.id)
        for p, q in itertools.combinations(rays, 2)
        if is_orthogonal(p, q)
    ]


def _complete_triads(rays: Sequence[Ray]) -> list[tuple[int, int, int]]:
    pairs = set(orthogonal_pairs(rays))
    ids = sorted(r.id for r in rays)
    out = []
    for i, j in sorted(pairs):
        for k in ids:
            if k > j and (i, k) in pairs and (j, k) in pairs:
                out.append((i, j, k))
    return out


def _completions(rays: Sequence[Ray]) -> list[Ray]:
    covered = set()
    for t in _complete_triads(rays):
        covered.update(itertools.combinations(t, 2))
    by_id = {r.id: r for r in rays}
    out: list[Ray] = []
    for i, j in orthogonal_pairs(rays):
        if (i, j) in covered:
            continue
        w = canonicalize(cross(by_id[i], by_id[j]))
        for other in itertools.chain(rays, out):
            if is_parallel(w, other):
                raise ConstructionError(
                    f"completion of ({i}, {j}) coincides with direction {other.id}"
                )
        out.append(Ray(NUM_RAYS + len(out) + 1, w, completes=(i, j)))
    return out


def build_ray_system(sense: int = 1) -> RaySystem:
    """Construct the 33 ordered axes, the 6 eliminated repeats and the completions."""
    axes = cube_axes()
    rays: list[Ray] = []
    index: dict[Vec3, int] = {}
    eliminated: list[Duplicate] = []
    for cube in ROTATION_AXES:
        for label, v in zip(CUBE_AXIS_LABELS, axes):
            c = canonicalize(rotate45(cube, v, sense))
            if c in index:
                eliminated.append(Duplicate(cube, label, index[c]))
                continue
            index[c] = len(rays) + 1
            rays.append(Ray(len(rays) + 1, c, cube=cube, axis=label))
    if len(rays) != NUM_RAYS or len(eliminated) != NUM_DUPLICATES:
        raise ConstructionError(
            f"expected {NUM_RAYS} rays and {NUM_DUPLICATES} duplicates, "
            f"got {len(rays)} and {len(eliminated)}"
        )
    completions = _completions(rays)
    if len(completions) != NUM_COMPLETIONS:
        raise ConstructionError(
            f"expected {NUM_COMPLETIONS} completing directions, got {len(completions)}"
        )
    return RaySystem(tuple(rays), tuple(eliminated), tuple(completions), sense)


def enumerate_bases(rs: RaySystem) -> list[Basis]:
    """The 40 orthogonal triples in lexical order of their ascending id triples."""
    triples = _complete_triads(rs.rays)
    triples += [(*c.completes, c.id) for c in rs.completions]
    triples.sort()
    if len(triples) != NUM_BASES:
        raise ConstructionError(f"expected {NUM_BASES} bases, got {len(triples)}")
    bases = [Basis(i, j, k, rank) for rank, (i, j, k) in enumerate(triples, start=1)]
    for b in bases:
        for p, q in itertools.combinations(b.ids, 2):
            if not is_orthogonal(rs[p], rs[q]):
                raise ConstructionError(f"basis {b.rank} is not orthogonal")
    return bases
