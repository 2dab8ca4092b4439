"""Integer lattices, sublattices and their discriminant invariants."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import linalg
from .errors import (
    DegenerateLattice,
    GroupTooLarge,
    InvalidLatticeFile,
    NotTwoElementary,
    UnknownName,
)

DELTA_ENUMERATION_BOUND = 2**20


def _freeze(m) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in m)


@dataclass(frozen=True)
class IntegerLattice:
    gram: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None
    name: str = ""

    def __post_init__(self):
        g = _freeze(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        for i, row in enumerate(g):
            if len(row) != n:
                raise InvalidLatticeFile(f"gram row {i} has length {len(row)}, expected {n}")
        for i in range(n):
            for j in range(i + 1, n):
                if g[i][j] != g[j][i]:
                    raise InvalidLatticeFile(
                        f"gram is not symmetric: entry [{i}][{j}]={g[i][j]} but [{j}][{i}]={g[j][i]}"
                    )
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != n:
                raise InvalidLatticeFile(f"{len(labels)} labels for rank {n}")
            object.__setattr__(self, "labels", labels)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def inner(self, u: Sequence, v: Sequence):
        return linalg.bilinear(self.gram, u, v)

    def norm(self, v: Sequence):
        return self.inner(v, v)

    def det(self) -> int:
        return linalg.det(self.gram)


@dataclass(frozen=True)
class Sublattice:
    """A sublattice given by basis rows in ambient coordinates."""

    ambient: IntegerLattice
    basis: tuple[tuple[int, ...], ...]
    saturated: bool = field(default=True, compare=False)

    def __post_init__(self):
        b = _freeze(self.basis)
        object.__setattr__(self, "basis", b)
        for row in b:
            if len(row) != self.ambient.rank:
                raise ValueError("basis vector length does not match the ambient rank")
        if b and linalg.rank(b) != len(b):
            raise ValueError("sublattice basis is linearly dependent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        g = self.ambient.gram
        return _freeze(linalg.matmul(linalg.matmul(self.basis, g), linalg.transpose(self.basis)))

    def as_lattice(self, name: str = "") -> IntegerLattice:
        return IntegerLattice(self.gram, name=name)

    def to_ambient(self, coords: Sequence[int]) -> list[int]:
        """Map coordinates w.r.t. this basis to ambient coordinates."""
        out = [0] * self.ambient.rank
        for c, row in zip(coords, self.basis):
            if c:
                for k, x in enumerate(row):
                    out[k] += c * x
        return out

    def contains(self, v: Sequence[int]) -> bool:
        return linalg.in_span(v, self.basis) if self.basis else not any(v)

    def same_as(self, other: "Sublattice") -> bool:
        return linalg.same_span(self.basis, other.basis)


@dataclass(frozen=True)
class DiscriminantData:
    elementary_divisors: tuple[int, ...]
    order: int
    ell: int
    is_two_elementary: bool
    a: int
    delta: int | None


@dataclass(frozen=True)
class InvariantTriple:
    r: int
    a: int
    delta: int

    def __iter__(self):
        return iter((self.r, self.a, self.delta))

    def __str__(self):
        return f"({self.r},{self.a},{self.delta})"


# --- standard lattices ----------------------------------------------------------------

H_GRAM = ((0, 1), (1, 0))

# -E8 in the basis used for the K3 lattice; node 4 is the trivalent one.
MINUS_E8_GRAM = (
    (-2, 0, 1, 0, 0, 0, 0, 0),
    (0, -2, 0, 1, 0, 0, 0, 0),
    (1, 0, -2, 1, 0, 0, 0, 0),
    (0, 1, 1, -2, 1, 0, 0, 0),
    (0, 0, 0, 1, -2, 1, 0, 0),
    (0, 0, 0, 0, 1, -2, 1, 0),
    (0, 0, 0, 0, 0, 1, -2, 1),
    (0, 0, 0, 0, 0, 0, 1, -2),
)

A1_GRAM = ((-2,),)

K3_LABELS = (
    ("u_1^1", "u_2^1", "u_1^2", "u_2^2", "u_1^3", "u_2^3")
    + tuple(f"v_{k}^1" for k in range(1, 9))
    + tuple(f"v_{k}^2" for k in range(1, 9))
)

_BLOCKS = {"H": H_GRAM, "minusE8": MINUS_E8_GRAM, "A1": A1_GRAM}


def direct_sum(*lattices: IntegerLattice, name: str = "") -> IntegerLattice:
    gram = linalg.block_diag(*(l.gram for l in lattices))
    if all(l.labels is not None for l in lattices) and lattices:
        labels = tuple(x for l in lattices for x in l.labels)
    else:
        labels = None
    return IntegerLattice(gram, labels, name)


def standard_lattice(name: str) -> IntegerLattice:
    """Build H, minusE8, A1, K3 or a direct sum such as ``3H+2minusE8``."""
    key = name.strip()
    if key == "K3":
        lat = standard_lattice("3H+2minusE8")
        return IntegerLattice(lat.gram, K3_LABELS, "K3")
    blocks = []
    for term in key.split("+"):
        m = re.fullmatch(r"\s*(\d*)\s*([A-Za-z][A-Za-z0-9]*)\s*", term)
        if not m or m.group(2) not in _BLOCKS:
            raise UnknownName(f"unknown lattice name {name!r}")
        mult = int(m.group(1)) if m.group(1) else 1
        blocks += [_BLOCKS[m.group(2)]] * mult
    if not blocks:
        raise UnknownName(f"unknown lattice name {name!r}")
    return IntegerLattice(linalg.block_diag(*blocks), name=key)


def load_lattice(path: str | Path) -> IntegerLattice:
    """Read a lattice from a JSON file {"name", "gram", "labels"?}."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidLatticeFile(f"{path}: not valid JSON ({exc})") from exc
    return lattice_from_dict(data)


def lattice_from_dict(data: dict) -> IntegerLattice:
    if not isinstance(data, dict) or "gram" not in data:
        raise InvalidLatticeFile("lattice document needs a 'gram' entry")
    gram = data["gram"]
    if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram):
        raise InvalidLatticeFile("'gram' must be a list of integer rows")
    for i, row in enumerate(gram):
        for j, x in enumerate(row):
            if not isinstance(x, int) or isinstance(x, bool):
                raise InvalidLatticeFile(f"gram entry [{i}][{j}] is not an integer")
    return IntegerLattice(gram, data.get("labels"), data.get("name", ""))


def lattice_to_dict(l: IntegerLattice) -> dict:
    out = {"name": l.name, "gram": [list(r) for r in l.gram]}
    if l.labels is not None:
        out["labels"] = list(l.labels)
    return out


# --- invariants -----------------------------------------------------------------------


def smith_normal_form(m):
    return linalg.smith_normal_form(m)


def integer_kernel(m, ncols: int | None = None):
    return linalg.integer_kernel(m, ncols)


def signature(l: IntegerLattice) -> tuple[int, int, int]:
    """(n_plus, n_minus, n_zero) by congruent diagonalization over Q."""
    a = [[Fraction(x) for x in row] for row in l.gram]
    n = len(a)
    pos = neg = 0
    live = list(range(n))

    def eliminate(p):
        for i in live:
            if i != p and a[i][p]:
                f = a[i][p] / a[p][p]
                for k in range(n):
                    a[i][k] -= f * a[p][k]
                for k in range(n):
                    a[k][i] -= f * a[k][p]

    while live:
        p = next((i for i in live if a[i][i]), None)
        if p is None:
            pair = next(((i, j) for i in live for j in live if i < j and a[i][j]), None)
            if pair is None:
                break  # remaining block is zero
            i, j = pair
            # e_i <- e_i + e_j gives a nonzero diagonal entry 2*a[i][j]
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            p = i
        if a[p][p] > 0:
            pos += 1
        else:
            neg += 1
        live.remove(p)
        eliminate(p)
    return pos, neg, n - pos - neg


def is_even(l: IntegerLattice) -> bool:
    return all(l.gram[i][i] % 2 == 0 for i in range(l.rank))


def discriminant_invariants(l: IntegerLattice, bound: int = DELTA_ENUMERATION_BOUND) -> DiscriminantData:
    """Elementary divisors, 2-elementary flag, a and delta of L*/L."""
    if l.rank == 0:
        return DiscriminantData((), 1, 0, True, 0, 0)
    s, _, v = linalg.smith_normal_form(l.gram)
    divs = tuple(s[i][i] for i in range(l.rank))
    if 0 in divs:
        raise DegenerateLattice("gram matrix is singular")
    order = 1
    for d in divs:
        order *= d
    ell = sum(1 for d in divs if d > 1)
    two_el = all(d in (1, 2) for d in divs)
    a = sum(1 for d in divs if d == 2)
    delta = None
    if two_el and is_even(l):
        if 2**a > bound:
            raise GroupTooLarge(f"2^{a} discriminant classes exceed the bound {bound}")
        # dual lattice = v * S^{-1} Z^n; classes are y/2, y a 0/1 combination of the
        # columns v_k with divisor 2, so x^2 is an integer iff y^T G y = 0 mod 4
        gens = [[v[i][k] for i in range(l.rank)] for k in range(l.rank) if divs[k] == 2]
        p = [[l.inner(g, h) for h in gens] for g in gens]
        delta = _delta_by_gray_code(p)
    return DiscriminantData(divs, order, ell, two_el, a, delta)


def _delta_by_gray_code(p: list[list[int]]) -> int:
    """Walk all 2^a subsets in Gray-code order, tracking y^T G y exactly."""
    a = len(p)
    chosen = [0] * a
    t = [0] * a  # t[l] = sum_k chosen[k] * p[k][l]
    s = 0
    for step in range(1, 2**a):
        k = (step & -step).bit_length() - 1
        if chosen[k]:
            s += p[k][k] - 2 * t[k]
            sign = -1
        else:
            s += p[k][k] + 2 * t[k]
            sign = 1
        chosen[k] ^= 1
        for l in range(a):
            t[l] += sign * p[k][l]
        if s % 4:
            return 1
    return 0


def lattice_invariants(l: IntegerLattice) -> InvariantTriple:
    """(rank, a, delta) of an even 2-elementary lattice, without signature checks."""
    disc = discriminant_invariants(l)
    if not disc.is_two_elementary or disc.delta is None:
        raise NotTwoElementary("lattice is not even and 2-elementary")
    return InvariantTriple(l.rank, disc.a, disc.delta)


def orthogonal_complement(l: IntegerLattice, constraints: Sequence[Sequence]) -> Sublattice:
    """Saturated sublattice {v : v.c = 0 for every constraint vector c}."""
    rows = []
    for c in constraints:
        gc = linalg.matvec(l.gram, [Fraction(x) for x in c])
        if any(gc):
            rows.append(linalg.clear_denominators(gc))
    if not rows:
        return Sublattice(l, linalg.identity(l.rank))
    return Sublattice(l, linalg.integer_kernel(rows))


def is_primitive_sublattice(s: Sublattice) -> bool:
    if not s.basis:
        return True
    return all(d == 1 for d in linalg.elementary_divisors(s.basis))


def span_sublattice(l: IntegerLattice, vectors: Sequence[Sequence[int]]) -> Sublattice:
    """Sublattice spanned by the given vectors (not saturated)."""
    hnf = linalg.hermite_normal_form(vectors)
    return Sublattice(l, hnf, saturated=False)


def saturation(s: Sublattice) -> Sublattice:
    return Sublattice(s.ambient, linalg.saturate(s.basis, s.ambient.rank))
