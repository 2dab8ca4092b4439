"""Involutions of the K3 lattice in its standard basis.

The standard basis is (u_1^1, u_2^1, u_1^2, u_2^2, u_1^3, u_2^3, v_1^1..v_8^1,
v_1^2..v_8^2). Matrices act on coordinate column vectors: column j is the
image of basis vector j.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import linalg
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidLatticeFile,
    InvalidVariant,
    NotHyperbolic,
    NotInvolution,
    NotIsometry,
    NotTwoElementary,
    ParityError,
)
from .lattice import (
    IntegerLattice,
    InvariantTriple,
    Sublattice,
    _freeze,
    discriminant_invariants,
    integer_kernel,
    signature,
    standard_lattice,
)

STANDARD = "standard"
ALT = "alt"

K3 = standard_lattice("K3")
THREE_H = standard_lattice("3H")
TWO_E8 = standard_lattice("2minusE8")


@dataclass(frozen=True)
class LatticeIsometry:
    ambient: IntegerLattice
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "matrix", _freeze(self.matrix))
        n = self.ambient.rank
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise DimensionMismatch(f"matrix is not {n}x{n}")

    def __call__(self, v: Sequence) -> list:
        return linalg.matvec(self.matrix, v)

    def __matmul__(self, other: "LatticeIsometry") -> "LatticeIsometry":
        return LatticeIsometry(self.ambient, linalg.matmul(self.matrix, other.matrix))

    def is_involution(self) -> bool:
        return linalg.matmul(self.matrix, self.matrix) == linalg.identity(self.ambient.rank)

    def commutes_with(self, other: "LatticeIsometry") -> bool:
        return linalg.matmul(self.matrix, other.matrix) == linalg.matmul(other.matrix, self.matrix)


@dataclass(frozen=True, order=True)
class SimpleInvolutionId:
    i: int
    j: int
    variant: str = STANDARD

    def __post_init__(self):
        if not 1 <= self.i <= 7:
            raise IndexOutOfRange(f"i={self.i} is outside 1..7")
        if not 1 <= self.j <= 4:
            raise IndexOutOfRange(f"j={self.j} is outside 1..4")
        if self.variant not in (STANDARD, ALT):
            raise InvalidVariant(f"unknown variant {self.variant!r}")
        if self.variant == ALT and self.j not in (2, 4):
            raise InvalidVariant(f"j={self.j} has no alternate form")

    @classmethod
    def parse(cls, text: str) -> "SimpleInvolutionId":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) not in (2, 3):
            raise ValueError(f"expected 'I,J' or 'I,J,alt', got {text!r}")
        variant = parts[2] if len(parts) == 3 else STANDARD
        return cls(int(parts[0]), int(parts[1]), variant)

    def __str__(self):
        return f"{self.i},{self.j}" + (",alt" if self.variant == ALT else "")


def verify_isometry(m: Sequence[Sequence[int]], l: IntegerLattice) -> bool:
    n = l.rank
    if len(m) != n or any(len(r) != n for r in m):
        raise DimensionMismatch(f"matrix is not {n}x{n}")
    mt_g_m = linalg.matmul(linalg.matmul(linalg.transpose(m), l.gram), m)
    return mt_g_m == [list(r) for r in l.gram] and abs(linalg.det(m)) == 1


def first_violation(m: Sequence[Sequence[int]], l: IntegerLattice) -> tuple[int, int] | None:
    """First (i, j) with m(w_i).m(w_j) != w_i.w_j, or None."""
    mt_g_m = linalg.matmul(linalg.matmul(linalg.transpose(m), l.gram), m)
    for i in range(l.rank):
        for j in range(l.rank):
            if mt_g_m[i][j] != l.gram[i][j]:
                return i, j
    return None


# --- generators -----------------------------------------------------------------------

_I = ((1, 0), (0, 1))
_NI = ((-1, 0), (0, -1))
_S = ((0, 1), (1, 0))
_NS = ((0, -1), (-1, 0))

_RHO1_BLOCKS = {
    1: (_I, _NI, _NI),
    2: (_I, _NS, _NI),
    3: (_I, _NS, _NS),
    4: (_S, _NI, _NI),
    5: (_S, _NS, _NI),
    6: (_S, _NS, _NS),
}


def generator_rho1(i: int) -> LatticeIsometry:
    """The i-th canonical involution of 3H."""
    if i == 7:
        m = linalg.zeros(6, 6)
        for k in range(4):
            m[(k + 2) % 4][k] = 1
        m[4][4] = m[5][5] = -1
        return LatticeIsometry(THREE_H, m)
    if i not in _RHO1_BLOCKS:
        raise IndexOutOfRange(f"i={i} is outside 1..7")
    return LatticeIsometry(THREE_H, linalg.block_diag(*_RHO1_BLOCKS[i]))


def generator_rho2(j: int, variant: str = STANDARD) -> LatticeIsometry:
    """The j-th canonical involution of 2(-E8), or its alternate simple conjugate."""
    if not 1 <= j <= 4:
        raise IndexOutOfRange(f"j={j} is outside 1..4")
    if variant not in (STANDARD, ALT) or (variant == ALT and j not in (2, 4)):
        raise InvalidVariant(f"no variant {variant!r} for j={j}")
    one = linalg.identity(8)
    neg = [[-x for x in row] for row in one]
    zero = linalg.zeros(8, 8)
    if j == 4:
        s = -1 if variant == ALT else 1
        top = [zero[r] + [s * x for x in one[r]] for r in range(8)]
        bottom = [[s * x for x in one[r]] + zero[r] for r in range(8)]
        return LatticeIsometry(TWO_E8, top + bottom)
    signs = {1: (one, one), 2: (neg, one), 3: (neg, neg)}[j]
    if variant == ALT:
        signs = (one, neg)
    return LatticeIsometry(TWO_E8, linalg.block_diag(*signs))


# u_k^l -> u_k^{4-l}
TAU = LatticeIsometry(
    THREE_H,
    [
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
    ],
)


def tau_conjugate(m: LatticeIsometry) -> LatticeIsometry:
    """tau * m * tau, with tau exchanging H_1 and H_3 (identity on 2(-E8))."""
    n = m.ambient.rank
    if n == 6:
        tau = TAU.matrix
    elif n == 22:
        tau = linalg.block_diag(TAU.matrix, linalg.identity(16))
    else:
        raise DimensionMismatch("tau acts on 3H or on the K3 lattice")
    return LatticeIsometry(m.ambient, linalg.matmul(linalg.matmul(tau, m.matrix), tau))


def combine(rho1: LatticeIsometry, rho2: LatticeIsometry) -> LatticeIsometry:
    if rho1.ambient.rank != 6 or rho2.ambient.rank != 16:
        raise DimensionMismatch("expected a 3H part and a 2(-E8) part")
    return LatticeIsometry(K3, linalg.block_diag(rho1.matrix, rho2.matrix))


def simple_involution(id: SimpleInvolutionId) -> LatticeIsometry:
    return combine(generator_rho1(id.i), generator_rho2(id.j, id.variant))


def is_signed_permutation(m: Sequence[Sequence[int]]) -> bool:
    for rows in (m, linalg.transpose(m)):
        for row in rows:
            nz = [x for x in row if x]
            if len(nz) != 1 or abs(nz[0]) != 1:
                return False
    return True


# --- fixed lattices and invariants ----------------------------------------------------


def _shifted(m: LatticeIsometry, s: int):
    return [[x - s * int(i == j) for j, x in enumerate(row)] for i, row in enumerate(m.matrix)]


def fixed_lattice(m: LatticeIsometry) -> Sublattice:
    if not m.is_involution():
        raise NotInvolution("matrix does not square to the identity")
    return Sublattice(m.ambient, integer_kernel(_shifted(m, 1)))


def anti_fixed_lattice(m: LatticeIsometry) -> Sublattice:
    if not m.is_involution():
        raise NotInvolution("matrix does not square to the identity")
    return Sublattice(m.ambient, integer_kernel(_shifted(m, -1)))


def involution_invariants(m: LatticeIsometry) -> InvariantTriple:
    """(r, a, delta) of the fixed lattice of a non-symplectic involution."""
    fixed = fixed_lattice(m).as_lattice()
    r = fixed.rank
    if r == 0 or signature(fixed) != (1, r - 1, 0):
        raise NotHyperbolic(f"fixed lattice of rank {r} is not hyperbolic")
    disc = discriminant_invariants(fixed)
    if not disc.is_two_elementary or disc.delta is None:
        raise NotTwoElementary("fixed lattice is not 2-elementary")
    return InvariantTriple(r, disc.a, disc.delta)


def classification_table() -> list[tuple[SimpleInvolutionId, InvariantTriple]]:
    """All 28 simple involutions with their computed invariants, sorted by (i, j)."""
    out = []
    for i in range(1, 8):
        for j in range(1, 5):
            sid = SimpleInvolutionId(i, j)
            out.append((sid, involution_invariants(simple_involution(sid))))
    return out


@dataclass(frozen=True)
class FixedLocusTopology:
    kind: str  # "empty", "two_elliptic_curves" or "general"
    genus: int | None = None
    rational_curve_count: int | None = None

    def __str__(self):
        if self.kind == "empty":
            return "empty"
        if self.kind == "two_elliptic_curves":
            return "two elliptic curves"
        return f"curve of genus {self.genus} + {self.rational_curve_count} rational curves"


def fixed_locus_topology(t: InvariantTriple) -> FixedLocusTopology:
    r, a, delta = t
    if (22 - r - a) % 2 or (r - a) % 2:
        raise ParityError(f"22-r-a and r-a must be even for {t}")
    if (r, a, delta) == (10, 10, 0):
        return FixedLocusTopology("empty")
    if (r, a, delta) == (10, 8, 0):
        return FixedLocusTopology("two_elliptic_curves")
    return FixedLocusTopology("general", (22 - r - a) // 2, (r - a) // 2)


# --- file format ----------------------------------------------------------------------


def isometry_from_dict(data: dict, ambient: IntegerLattice = K3) -> LatticeIsometry:
    if not isinstance(data, dict) or "matrix" not in data:
        raise InvalidLatticeFile("isometry document needs a 'matrix' entry")
    m = data["matrix"]
    n = ambient.rank
    if not isinstance(m, list) or len(m) != n or any(not isinstance(r, list) or len(r) != n for r in m):
        raise DimensionMismatch(f"matrix must be {n}x{n}")
    bad = first_violation(m, ambient)
    if bad is not None:
        i, j = bad
        raise NotIsometry(
            f"images of basis vectors {i + 1} and {j + 1} have product "
            f"{linalg.bilinear(ambient.gram, [r[i] for r in m], [r[j] for r in m])}, "
            f"expected {ambient.gram[i][j]}"
        )
    if abs(linalg.det(m)) != 1:
        raise NotIsometry("matrix is not invertible over the integers")
    return LatticeIsometry(ambient, m)


def load_isometry(path: str | Path) -> LatticeIsometry:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidLatticeFile(f"{path}: not valid JSON ({exc})") from exc
    return isometry_from_dict(data)
