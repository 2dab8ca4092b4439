"""Period triples (x, y, z), their singular roots, and equivariant partial resolutions.

Real coefficients never appear. A slot is a base direction plus perturbation
directions that enter with generic, Q-linearly independent small coefficients,
so a lattice vector is orthogonal to the realized class iff it is orthogonal
to every direction of the slot separately.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidLatticeFile,
    NotAdmissible,
    NotSignedPermutation,
    OrbitOverlap,
    TypeMismatch,
)
from .isometry import K3, LatticeIsometry
from .lattice import orthogonal_complement
from .roots import AdeConfig, SingularityReport, classify_gram, singularity_report

Vector = tuple[Fraction, ...]

SLOTS = ("x", "y", "z")

# equivariance signs on (x, y, z)
SINGLE_SIGNS = (-1, -1, 1)
FIRST_SIGNS = (-1, -1, 1)
SECOND_SIGNS = (-1, 1, -1)

COWEIGHT = "coweight"
ROOT = "root"

BALANCE_NOTE = (
    "coefficients are chosen small and Q-linearly independent; equal norms "
    "x'^2 = y'^2 = z'^2 are reached by positive rescaling and never change the root set"
)


def _vec(v: Iterable) -> Vector:
    out = tuple(Fraction(x) for x in v)
    if len(out) != K3.rank:
        raise DimensionMismatch(f"period vectors have length {K3.rank}, got {len(out)}")
    return out


def _parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise InvalidLatticeFile(f"not a rational: {x!r}")
    if isinstance(x, (int, str)):
        try:
            return Fraction(x)
        except ValueError as exc:
            raise InvalidLatticeFile(f"not a rational: {x!r}") from exc
    raise InvalidLatticeFile(f"not a rational: {x!r}")


def _fmt_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Slot:
    base: Vector
    perturb: tuple[Vector, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "base", _vec(self.base))
        object.__setattr__(self, "perturb", tuple(_vec(p) for p in self.perturb))
        if K3.norm(self.base) <= 0:
            raise ValueError("base direction must have positive square")

    def directions(self) -> tuple[Vector, ...]:
        return (self.base,) + self.perturb

    def extended(self, dirs: Iterable[Sequence]) -> "Slot":
        return Slot(self.base, self.perturb + tuple(_vec(d) for d in dirs))


@dataclass(frozen=True)
class PeriodSpec:
    x: Slot
    y: Slot
    z: Slot
    note: str = field(default=BALANCE_NOTE, compare=False)

    def slots(self) -> tuple[Slot, Slot, Slot]:
        return (self.x, self.y, self.z)

    def constraints(self) -> list[Vector]:
        return [d for s in self.slots() for d in s.directions()]

    def extended(self, x=(), y=(), z=()) -> "PeriodSpec":
        return replace(self, x=self.x.extended(x), y=self.y.extended(y), z=self.z.extended(z))

    def to_json(self) -> dict:
        return {
            name: {
                "base": [_fmt_rational(c) for c in s.base],
                "perturb": [[_fmt_rational(c) for c in p] for p in s.perturb],
            }
            for name, s in zip(SLOTS, self.slots())
        }

    @classmethod
    def from_json(cls, data: dict) -> "PeriodSpec":
        try:
            slots = [
                Slot(
                    [_parse_rational(c) for c in data[k]["base"]],
                    [[_parse_rational(c) for c in p] for p in data[k].get("perturb", [])],
                )
                for k in SLOTS
            ]
        except (KeyError, TypeError) as exc:
            raise InvalidLatticeFile(f"malformed period spec: {exc}") from exc
        return cls(*slots)


def _u(k: int, l: int) -> list[int]:
    """Coordinate vector of u_k^l."""
    v = [0] * K3.rank
    v[2 * (l - 1) + (k - 1)] = 1
    return v


def _comb(*terms: tuple[int, list[int]]) -> list[int]:
    out = [0] * K3.rank
    for c, v in terms:
        for i, x in enumerate(v):
            out[i] += c * x
    return out


def _hsum(l: int) -> list[int]:
    return _comb((1, _u(1, l)), (1, _u(2, l)))


@lru_cache(maxsize=None)
def canonical_period_spec(i: int) -> PeriodSpec:
    """Base periods for the i-th involution of 3H; the sqrt(2) on y for i = 7 is dropped."""
    if not 1 <= i <= 7:
        raise IndexOutOfRange(f"i={i} is outside 1..7")
    if i == 7:
        x = _comb((1, _hsum(1)), (-1, _hsum(2)))
        z = _comb((1, _hsum(1)), (1, _hsum(2)))
        return PeriodSpec(Slot(x), Slot(_hsum(3)), Slot(z))
    return PeriodSpec(Slot(_hsum(2)), Slot(_hsum(3)), Slot(_hsum(1)))


@lru_cache(maxsize=None)
def swapped_period_spec() -> PeriodSpec:
    """Periods for a second involution whose 3H part exchanges H_2 and H_3."""
    x = _comb((1, _hsum(2)), (-1, _hsum(3)))
    y = _comb((1, _hsum(2)), (1, _hsum(3)))
    return PeriodSpec(Slot(x), Slot(y), Slot(_hsum(1)))


def pair_period_spec(i1: int, i2: int) -> PeriodSpec:
    if i1 == 7:
        return canonical_period_spec(7)
    if i2 == 7:
        return swapped_period_spec()
    return canonical_period_spec(1)


def check_equivariance(m: LatticeIsometry, signs: Sequence[int], spec: PeriodSpec) -> bool:
    if len(m.matrix) != K3.rank:
        raise DimensionMismatch(f"isometry must act on the rank {K3.rank} lattice")
    if len(signs) != 3 or any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be three values in {+1, -1}")
    for eps, slot in zip(signs, spec.slots()):
        for d in slot.directions():
            # rescaling does not change the eigenvector condition; integers are much faster
            v = linalg.clear_denominators(d)
            if m(v) != [eps * c for c in v]:
                return False
    return True


def singular_roots(spec: PeriodSpec) -> SingularityReport:
    """Roots orthogonal to every direction of every slot, with their ADE type."""
    return singularity_report(orthogonal_complement(K3, spec.constraints()))


# --- the 19 roots spanning the complement of the canonical periods ------------------


def _picard_basis() -> tuple[tuple[int, ...], ...]:
    out = [tuple(_comb((1, _u(1, l)), (-1, _u(2, l)))) for l in (1, 2, 3)]
    for k in range(16):
        v = [0] * K3.rank
        v[6 + k] = 1
        out.append(tuple(v))
    return tuple(out)


PICARD_BASIS = _picard_basis()
PICARD_GRAM = tuple(tuple(K3.inner(a, b) for b in PICARD_BASIS) for a in PICARD_BASIS)
BASE_CONFIG = classify_gram(PICARD_GRAM)


def _coweights() -> tuple[Vector, ...]:
    inv = linalg.inverse(PICARD_GRAM)
    out = []
    for j in range(19):
        v = [Fraction(0)] * K3.rank
        for k in range(19):
            if inv[j][k]:
                for t, x in enumerate(PICARD_BASIS[k]):
                    if x:
                        v[t] += inv[j][k] * x
        out.append(tuple(v))
    return tuple(out)


# dual basis of the root basis inside its rational span: coweight_j . w_k = [j == k]
COWEIGHTS = _coweights()


def node_direction(j: int, directions: str = COWEIGHT) -> Vector:
    """Direction that removes node j (1-based) from the diagram when added to a period.

    Adding a coweight removes exactly node j. Adding the root itself (the literal
    choice) keeps every root orthogonal to it, which for an E8 node is larger.
    """
    _check_index(j)
    if directions == COWEIGHT:
        return COWEIGHTS[j - 1]
    if directions == ROOT:
        return tuple(Fraction(x) for x in PICARD_BASIS[j - 1])
    raise ValueError(f"unknown direction mode {directions!r}")


def _combination(coeffs: dict[int, int], directions: str) -> Vector:
    out = [Fraction(0)] * K3.rank
    for j, c in coeffs.items():
        for t, x in enumerate(node_direction(j, directions)):
            out[t] += c * x
    return tuple(out)


def _check_index(j: int):
    if not 1 <= j <= 19:
        raise IndexOutOfRange(f"root index {j} is outside 1..19")


def signed_action(m: LatticeIsometry) -> tuple[tuple[int, int], ...]:
    """(target, sign) per 1-based root index with m(w_i) = sign * w_target."""
    lookup = {}
    for k, w in enumerate(PICARD_BASIS, start=1):
        lookup[w] = (k, 1)
        lookup[tuple(-x for x in w)] = (k, -1)
    out = []
    for i, w in enumerate(PICARD_BASIS, start=1):
        img = tuple(m(w))
        if img not in lookup:
            raise NotSignedPermutation(f"image of root {i} is not a signed root of the basis")
        out.append(lookup[img])
    return tuple(out)


def deletion_config(deleted: Iterable[int]) -> AdeConfig:
    """Diagram left after removing the given nodes (1-based) from 3A1+2E8."""
    gone = set(deleted)
    for j in gone:
        _check_index(j)
    keep = [i for i in range(19) if i + 1 not in gone]
    return classify_gram([[PICARD_GRAM[a][b] for b in keep] for a in keep])


# --- one involution ------------------------------------------------------------------

FIXED, NEGATED, SWAPPED, ANTISWAPPED = "fixed", "negated", "swapped", "antiswapped"
KIND_SET = {FIXED: 1, NEGATED: 2, SWAPPED: 3, ANTISWAPPED: 4}


@dataclass(frozen=True)
class Orbit:
    id: int
    members: tuple[int, ...]
    kind: str


def single_orbits(rho: LatticeIsometry) -> list[Orbit]:
    """Orbits of rho on the 19 roots, each named by its smallest index."""
    act = signed_action(rho)
    seen = set()
    out = []
    for i in range(1, 20):
        if i in seen:
            continue
        t, s = act[i - 1]
        if t == i:
            out.append(Orbit(i, (i,), FIXED if s == 1 else NEGATED))
            seen.add(i)
        else:
            out.append(Orbit(i, (i, t), SWAPPED if s == 1 else ANTISWAPPED))
            seen.update((i, t))
    return out


def _orbit_map(orbits: list[Orbit]) -> dict[int, Orbit]:
    return {j: o for o in orbits for j in o.members}


def perturb_single(
    rho: LatticeIsometry,
    spec: PeriodSpec,
    m1: Iterable[int] = (),
    m2: Iterable[int] = (),
    m3: Iterable[int] = (),
    m4: Iterable[int] = (),
    directions: str = COWEIGHT,
) -> PeriodSpec:
    """Add one direction per chosen orbit: fixed orbits to z, the rest to x.

    Indices may name any member of an orbit.
    """
    by_index = _orbit_map(single_orbits(rho))
    xs, zs = [], []
    used = {}
    for number, (chosen, kind) in enumerate(zip((m1, m2, m3, m4), (FIXED, NEGATED, SWAPPED, ANTISWAPPED)), 1):
        for j in sorted(set(chosen)):
            _check_index(j)
            o = by_index[j]
            if o.kind != kind:
                raise TypeMismatch(f"orbit {o.id} is {o.kind}, it cannot go into M{number}")
            if o.id in used:
                continue
            used[o.id] = number
            if kind == FIXED:
                zs.append(_combination({o.id: 1}, directions))
            elif kind == NEGATED:
                xs.append(_combination({o.id: 1}, directions))
            elif kind == SWAPPED:
                xs.append(_combination({o.members[0]: 1, o.members[1]: -1}, directions))
            else:
                xs.append(_combination({o.members[0]: 1, o.members[1]: 1}, directions))
    return spec.extended(x=xs, z=zs)


def split_by_kind(rho: LatticeIsometry, orbit_ids: Iterable[int]) -> tuple[list[int], ...]:
    """Sort orbit names into (M1, M2, M3, M4) by the kind of each orbit."""
    by_index = _orbit_map(single_orbits(rho))
    sets: tuple[list[int], ...] = ([], [], [], [])
    for j in orbit_ids:
        _check_index(j)
        o = by_index[j]
        if o.id not in sets[KIND_SET[o.kind] - 1]:
            sets[KIND_SET[o.kind] - 1].append(o.id)
    return sets


def single_deleted_nodes(rho: LatticeIsometry, *sets: Iterable[int]) -> set[int]:
    by_index = _orbit_map(single_orbits(rho))
    out = set()
    for chosen in sets:
        for j in chosen:
            _check_index(j)
            out.update(by_index[j].members)
    return out


# --- two commuting involutions -------------------------------------------------------


@dataclass(frozen=True)
class OrbitEntry:
    index: int
    type: tuple[int, int]
    partner: int
    image1: tuple[int, int]
    image2: tuple[int, int]
    # w' as integer coefficients over the 19 roots, None if it vanishes or the type is (1,1)
    prime: tuple[int, ...] | None

    def prime_vector(self) -> tuple[int, ...] | None:
        if self.prime is None:
            return None
        v = [0] * K3.rank
        for c, w in zip(self.prime, PICARD_BASIS):
            if c:
                for t, x in enumerate(w):
                    v[t] += c * x
        return tuple(v)


@dataclass(frozen=True)
class OrbitTypeReport:
    entries: tuple[OrbitEntry, ...]

    def __getitem__(self, i: int) -> OrbitEntry:
        _check_index(i)
        return self.entries[i - 1]

    def of_type(self, t: tuple[int, int]) -> list[int]:
        return [e.index for e in self.entries if e.type == t]

    def orbit(self, i: int) -> tuple[int, ...]:
        e = self[i]
        return (i,) if e.partner == i else tuple(sorted((i, e.partner)))


def _apply(act, coeffs: list[int]) -> list[int]:
    out = [0] * 19
    for i, c in enumerate(coeffs):
        if c:
            t, s = act[i]
            out[t - 1] += s * c
    return out


def orbit_analysis(rho1: LatticeIsometry, rho2: LatticeIsometry) -> OrbitTypeReport:
    """Type, orbit partner and equivariant w' for each of the 19 roots.

    w' is the projection of w_i onto the joint eigenspace of its type, scaled to
    integer coefficients with +1 on w_i; this reproduces the case tables
    (w_i, w_i - w_j, w_i + w_j) and is None when the projection is zero.
    """
    a1, a2 = signed_action(rho1), signed_action(rho2)
    entries = []
    for i in range(1, 20):
        t1, s1 = a1[i - 1]
        t2, s2 = a2[i - 1]
        typ = (1 if (t1, s1) == (i, 1) else -1, 1 if (t2, s2) == (i, 1) else -1)
        partner = t1 if t1 != i else t2
        e = [0] * 19
        e[i - 1] = 1
        g1, g2 = _apply(a1, e), _apply(a2, e)
        g12 = _apply(a1, g2)
        eps1, eps2 = typ
        proj = [a + eps1 * b + eps2 * c + eps1 * eps2 * d for a, b, c, d in zip(e, g1, g2, g12)]
        prime = None
        if typ != (1, 1) and any(proj):
            scale = proj[i - 1]
            prime = tuple(c // scale for c in proj)
            # both involutions must act on w' by the signs of its type
            assert _apply(a1, list(prime)) == [eps1 * c for c in prime]
            assert _apply(a2, list(prime)) == [eps2 * c for c in prime]
        entries.append(OrbitEntry(i, typ, partner, (t1, s1), (t2, s2), prime))
    return OrbitTypeReport(tuple(entries))


def perturb_pair(
    rho1: LatticeIsometry,
    rho2: LatticeIsometry,
    spec: PeriodSpec,
    p: Iterable[int] = (),
    q: Iterable[int] = (),
    r: Iterable[int] = (),
    directions: str = COWEIGHT,
) -> PeriodSpec:
    """Add w' for i in P to x, i in Q to y and i in R to z."""
    report = orbit_analysis(rho1, rho2)
    added = []
    for chosen, typ, name in zip((p, q, r), ((-1, -1), (-1, 1), (1, -1)), "PQR"):
        dirs, orbits = [], set()
        for i in sorted(set(chosen)):
            e = report[i]
            if e.type != typ:
                raise TypeMismatch(f"root {i} has type {e.type}, {name} needs {typ}")
            if e.prime is None:
                raise TypeMismatch(f"root {i} has no component in the {typ} eigenspace")
            orb = report.orbit(i)
            if orb in orbits:
                raise OrbitOverlap(f"roots in {name} share the orbit {orb}")
            orbits.add(orb)
            dirs.append(_combination({j + 1: c for j, c in enumerate(e.prime) if c}, directions))
        added.append(dirs)
    out = spec.extended(*added)
    if not (check_equivariance(rho1, FIRST_SIGNS, out) and check_equivariance(rho2, SECOND_SIGNS, out)):
        raise NotAdmissible("perturbed periods are not equivariant under both involutions")
    return out


def pair_deleted_nodes(report: OrbitTypeReport, *sets: Iterable[int]) -> set[int]:
    out = set()
    for chosen in sets:
        for i in chosen:
            out.update(report.orbit(i))
    return out


def fixed_root_config(report: OrbitTypeReport) -> AdeConfig:
    """Diagram of the roots fixed pointwise by both involutions."""
    return deletion_config(i for i in range(1, 20) if report[i].type != (1, 1))
