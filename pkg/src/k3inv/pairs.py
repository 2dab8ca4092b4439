"""Commuting pairs of simple involutions, embedding criteria and derived counts."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .errors import NotAdmissible
from .isometry import (
    ALT,
    STANDARD,
    InvariantTriple,
    LatticeIsometry,
    SimpleInvolutionId,
    combine,
    generator_rho1,
    generator_rho2,
    involution_invariants,
    tau_conjugate,
)
from .periods import (
    FIRST_SIGNS,
    SECOND_SIGNS,
    PeriodSpec,
    check_equivariance,
    fixed_root_config,
    orbit_analysis,
    pair_period_spec,
)
from .roots import AdeConfig

EXCLUDED_J = {(2, 4), (4, 2)}
EXCLUDED_I = {(2, 7), (5, 7), (7, 2), (7, 5), (7, 7)}

GUARANTEED = "guaranteed"
NOT_IMPLIED = "not_implied"


@dataclass(frozen=True, order=True)
class PairId:
    first: SimpleInvolutionId
    second: SimpleInvolutionId

    @classmethod
    def parse(cls, text: str) -> "PairId":
        """Parse "i1,j1/i2,j2", optionally with "+alt" for the second 2(-E8) part."""
        body = text.strip()
        alt = body.endswith("+alt")
        if alt:
            body = body[: -len("+alt")]
        halves = body.split("/")
        if len(halves) != 2:
            raise ValueError(f"expected 'i1,j1/i2,j2', got {text!r}")
        first = SimpleInvolutionId.parse(halves[0])
        second = SimpleInvolutionId.parse(halves[1])
        if alt:
            second = SimpleInvolutionId(second.i, second.j, ALT)
        return cls(first, second)

    @classmethod
    def of(cls, i1: int, j1: int, i2: int, j2: int, variant: str = STANDARD) -> "PairId":
        return cls(SimpleInvolutionId(i1, j1), SimpleInvolutionId(i2, j2, variant))

    def __str__(self):
        s = f"{self.first.i},{self.first.j}/{self.second.i},{self.second.j}"
        return s + ("+alt" if self.second.variant == ALT else "")


def first_involution(sid: SimpleInvolutionId) -> LatticeIsometry:
    return combine(generator_rho1(sid.i), generator_rho2(sid.j, sid.variant))


def second_involution(sid: SimpleInvolutionId) -> LatticeIsometry:
    """The 3H part is conjugated by the exchange of H_1 and H_3."""
    return combine(tau_conjugate(generator_rho1(sid.i)), generator_rho2(sid.j, sid.variant))


def _excluded(pid: PairId) -> bool:
    return (pid.first.i, pid.second.i) in EXCLUDED_I or (pid.first.j, pid.second.j) in EXCLUDED_J


def _checked(pid: PairId):
    """Matrices and periods, or None when a build-time check fails."""
    rho1, rho2 = first_involution(pid.first), second_involution(pid.second)
    if not rho1.commutes_with(rho2):
        return None
    spec = pair_period_spec(pid.first.i, pid.second.i)
    if not (check_equivariance(rho1, FIRST_SIGNS, spec) and check_equivariance(rho2, SECOND_SIGNS, spec)):
        return None
    return rho1, rho2, spec


def pair_admissible(pid: PairId) -> bool:
    return not _excluded(pid) and _checked(pid) is not None


def build_pair(pid: PairId) -> tuple[LatticeIsometry, LatticeIsometry, PeriodSpec]:
    if _excluded(pid):
        raise NotAdmissible(f"pair {pid} is on the exclusion list")
    built = _checked(pid)
    if built is None:
        raise NotAdmissible(f"pair {pid} fails the commuting or period checks")
    return built


@lru_cache(maxsize=None)
def _invariants(sid: SimpleInvolutionId, second: bool) -> InvariantTriple:
    m = second_involution(sid) if second else first_involution(sid)
    return involution_invariants(m)


def minimal_residual_singularity(pid: PairId) -> AdeConfig:
    """Diagram of the roots fixed by both involutions; these cannot be resolved."""
    rho1, rho2, _ = build_pair(pid)
    return fixed_root_config(orbit_analysis(rho1, rho2))


@dataclass(frozen=True)
class PairRecord:
    id: PairId
    first: InvariantTriple
    second: InvariantTriple
    residual: AdeConfig

    def invariant_set(self) -> frozenset:
        return frozenset((tuple(self.first), tuple(self.second)))

    def tsv(self) -> str:
        f, s = self.first, self.second
        cols = (
            self.id.first.i, self.id.first.j, self.id.second.i, self.id.second.j,
            f.r, f.a, f.delta, s.r, s.a, s.delta, self.residual,
        )
        return "\t".join(str(c) for c in cols)


def _record(pid: PairId) -> PairRecord | None:
    built = None if _excluded(pid) else _checked(pid)
    if built is None:
        return None
    rho1, rho2, _ = built
    return PairRecord(
        pid,
        _invariants(pid.first, False),
        _invariants(pid.second, True),
        fixed_root_config(orbit_analysis(rho1, rho2)),
    )


def _records_chunk(tuples: list[tuple[int, int, int, int]]) -> list[PairRecord]:
    out = []
    for t in tuples:
        rec = _record(PairId.of(*t))
        if rec is not None:
            out.append(rec)
    return out


def candidate_tuples() -> list[tuple[int, int, int, int]]:
    return list(product(range(1, 8), range(1, 5), range(1, 8), range(1, 5)))


def pair_records(jobs: int = 1) -> list[PairRecord]:
    """Admissible pairs over all 784 candidates, ordered by (i1, j1, i2, j2)."""
    tuples = candidate_tuples()
    if jobs <= 1:
        return _records_chunk(tuples)
    chunks = [tuples[k::jobs] for k in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_records_chunk, chunks))
    records = [r for part in parts for r in part]
    if os.environ.get("K3INV_DETERMINISTIC", "1") != "0":
        records.sort(key=lambda r: r.id)
    return records


def distinct_invariant_sets(records: list[PairRecord]) -> int:
    return len({r.invariant_set() for r in records})


def enumerate_pairs(jobs: int = 1) -> tuple[list[PairId], int]:
    records = pair_records(jobs)
    return [r.id for r in records], distinct_invariant_sets(records)


# --- embedding criteria ----------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingVerdict:
    exists: str
    unique: str


def nikulin_embedding_check(
    k_rank: int, k_sig: tuple[int, int], k_ell: int, l_rank: int, l_sig: tuple[int, int]
) -> EmbeddingVerdict:
    """Sufficient conditions for a primitive embedding of an even K into an even unimodular L.

    NOT_IMPLIED only means the conditions are silent, never that no embedding exists.
    """
    kp, km = k_sig
    lp, lm = l_sig
    fits = kp <= lp and km <= lm
    exists = fits and (2 * k_rank <= l_rank or k_rank + k_ell < l_rank)
    unique = exists and kp < lp and km < lm and (2 * k_rank <= l_rank - 2 or k_rank + k_ell <= l_rank - 2)
    return EmbeddingVerdict(GUARANTEED if exists else NOT_IMPLIED, GUARANTEED if unique else NOT_IMPLIED)


def smooth_pair_exists(t1: InvariantTriple, t2: InvariantTriple) -> bool:
    r1, a1, _ = t1
    r2, a2, _ = t2
    return r1 + r2 <= 11 or r1 + r2 + a1 + a2 < 22
