"""Roots of negative definite lattices and ADE recognition of their diagrams."""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import floor, isqrt
from typing import Iterable, Sequence

from . import linalg
from .errors import (
    DegenerateFunctional,
    NotADE,
    NotNegativeDefinite,
    NotSimplyLaced,
    ResourceLimit,
)
from .lattice import IntegerLattice, Sublattice, signature

MAX_RANK = 24
MAX_DET = 10**9

_FAMILY_ORDER = {"A": 0, "D": 1, "E": 2}


@dataclass(frozen=True)
class RootSet:
    lattice: IntegerLattice
    roots: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.roots)


@dataclass(frozen=True)
class AdeConfig:
    """Multiset of ADE types, stored as sorted (family, n, count) triples."""

    components: tuple[tuple[str, int, int], ...] = ()

    @classmethod
    def from_labels(cls, labels: Iterable[tuple[str, int]]) -> "AdeConfig":
        counts = Counter(labels)
        comps = sorted(
            ((f, n, c) for (f, n), c in counts.items()),
            key=lambda t: (_FAMILY_ORDER[t[0]], t[1]),
        )
        return cls(tuple(comps))

    @classmethod
    def parse(cls, text: str) -> "AdeConfig":
        text = text.strip()
        if text in ("", "smooth"):
            return cls()
        labels = []
        for term in text.split("+"):
            m = re.fullmatch(r"\s*(\d*)([ADE])(\d+)\s*", term)
            if not m:
                raise ValueError(f"cannot parse ADE term {term!r}")
            labels += [(m.group(2), int(m.group(3)))] * (int(m.group(1)) if m.group(1) else 1)
        return cls.from_labels(labels)

    def labels(self) -> list[tuple[str, int]]:
        return [(f, n) for f, n, c in self.components for _ in range(c)]

    @property
    def node_count(self) -> int:
        return sum(n * c for _, n, c in self.components)

    @property
    def root_count(self) -> int:
        return sum(c * ade_root_count(f, n) for f, n, c in self.components)

    def __add__(self, other: "AdeConfig") -> "AdeConfig":
        return AdeConfig.from_labels(self.labels() + other.labels())

    def __le__(self, other: "AdeConfig") -> bool:
        mine, theirs = Counter(self.labels()), Counter(other.labels())
        return all(theirs[k] >= v for k, v in mine.items())

    def __str__(self):
        if not self.components:
            return "smooth"
        return "+".join(f"{c if c > 1 else ''}{f}{n}" for f, n, c in self.components)

    def to_json(self) -> dict:
        return {"components": [{"type": f, "n": n, "count": c} for f, n, c in self.components]}

    @classmethod
    def from_json(cls, data: dict) -> "AdeConfig":
        return cls.from_labels(
            (d["type"], d["n"]) for d in data["components"] for _ in range(d["count"])
        )


def ade_root_count(family: str, n: int) -> int:
    if family == "A":
        return n * (n + 1)
    if family == "D":
        return 2 * n * (n - 1)
    return {6: 72, 7: 126, 8: 240}[n]


# --- enumeration ----------------------------------------------------------------------


def _int_range(c: Fraction, r: Fraction) -> range:
    """Integers t with (t - c)^2 <= r, as a range (r >= 0)."""
    s = isqrt(floor(r))
    fc = floor(c)
    lo = fc - s - 1
    while (lo - c) ** 2 > r and lo < c:
        lo += 1
    hi = fc + s + 2
    while (hi - c) ** 2 > r and hi > c:
        hi -= 1
    if (lo - c) ** 2 > r:
        return range(0)
    return range(lo, hi + 1)


def short_vectors(q: Sequence[Sequence[int]], bound: int) -> list[tuple[int, ...]]:
    """All nonzero x with x^T q x <= bound, q positive definite (Fincke-Pohst, exact)."""
    n = len(q)
    if n == 0:
        return []
    d, mu = linalg.ldl(q)
    x = [0] * n
    found = []

    def descend(i: int, budget: Fraction):
        c = Fraction(0)
        row = mu[i]
        for j in range(i + 1, n):
            if x[j]:
                c -= row[j] * x[j]
        for t in _int_range(c, budget / d[i]):
            x[i] = t
            rest = budget - d[i] * (t - c) ** 2
            if i == 0:
                if any(x):
                    found.append(tuple(x))
            else:
                descend(i - 1, rest)
        x[i] = 0

    descend(n - 1, Fraction(bound))
    return found


def _components(gram: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(gram)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and gram[i][j]:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def _check_definite(l: IntegerLattice):
    if l.rank > MAX_RANK:
        raise ResourceLimit(f"rank {l.rank} exceeds the enumeration limit {MAX_RANK}")
    if abs(l.det()) > MAX_DET:
        raise ResourceLimit(f"|det| exceeds the enumeration limit {MAX_DET}")
    if signature(l) != (0, l.rank, 0):
        raise NotNegativeDefinite("root enumeration needs a negative definite lattice")


def enumerate_roots(l: IntegerLattice) -> RootSet:
    """All d with d.d = -2, in lexicographic order."""
    _check_definite(l)
    if l.rank == 0:
        return RootSet(l, ())
    q = [[-x for x in row] for row in l.gram]
    t = linalg.lll_gram(q)
    qr = linalg.matmul(linalg.matmul(t, q), linalg.transpose(t))
    roots = set()
    # an orthogonal splitting of a definite lattice splits its roots too
    for comp in _components(qr):
        sub = [[qr[i][j] for j in comp] for i in comp]
        for y in short_vectors(sub, 2):
            v = [0] * l.rank
            for coef, i in zip(y, comp):
                if coef:
                    for k, tk in enumerate(t[i]):
                        v[k] += coef * tk
            if l.norm(v) == -2:
                roots.add(tuple(v))
    return RootSet(l, tuple(sorted(roots)))


# --- simple roots ---------------------------------------------------------------------


def _primes(k: int) -> list[int]:
    out, c = [], 2
    while len(out) < k:
        if all(c % p for p in out if p * p <= c):
            out.append(c)
        c += 1
    return out


def extract_simple_roots(rs: RootSet, seed: int = 0, retries: int = 64) -> list[tuple[int, ...]]:
    """Simple roots for the positive system cut out by a generic linear functional."""
    roots = rs.roots
    if not roots:
        return []
    n = rs.lattice.rank
    base = _primes(n + seed)[seed:]
    for attempt in range(retries):
        w = [p + attempt * (k + 1) ** 2 for k, p in enumerate(base)]
        vals = [linalg.dot(w, r) for r in roots]
        # any functional that vanishes on no root defines a positive system
        if 0 not in vals:
            positive = [r for r, f in zip(roots, vals) if f > 0]
            break
    else:
        raise DegenerateFunctional("no generic functional found")
    pos = set(positive)
    simple = []
    for p in positive:
        if not any(tuple(a - b for a, b in zip(p, q)) in pos for q in positive if q != p):
            simple.append(p)
    simple.sort()
    if len(simple) != linalg.rank(roots):
        raise DegenerateFunctional("simple root count does not match the rank of the root span")
    return simple


# --- Dynkin diagrams ------------------------------------------------------------------


def classify_gram(gram: Sequence[Sequence[int]]) -> AdeConfig:
    """Recognize the Dynkin diagram whose nodes have the given pairwise products.

    Diagonal entries must be -2 and off-diagonal entries 0 or 1.
    """
    n = len(gram)
    for i in range(n):
        if gram[i][i] != -2:
            raise NotSimplyLaced(f"node {i} has norm {gram[i][i]}, expected -2")
        for j in range(n):
            if i != j and gram[i][j] not in (0, 1):
                raise NotSimplyLaced(f"product of nodes {i},{j} is {gram[i][j]}")
    adj = [[j for j in range(n) if j != i and gram[i][j]] for i in range(n)]
    labels = []
    for comp in _components(gram):
        labels.append(_recognize(comp, adj))
    return AdeConfig.from_labels(labels)


def _recognize(comp: list[int], adj: list[list[int]]) -> tuple[str, int]:
    size = len(comp)
    edges = sum(len(adj[i]) for i in comp) // 2
    if edges != size - 1:
        raise NotADE(f"component with {size} nodes contains a cycle")
    deg = {i: len(adj[i]) for i in comp}
    branch = [i for i in comp if deg[i] >= 3]
    if not branch:
        return ("A", size)
    if len(branch) > 1 or deg[branch[0]] > 3:
        raise NotADE(f"component with {size} nodes is not a Dynkin diagram")
    centre = branch[0]
    legs = []
    for start in adj[centre]:
        length, prev, cur = 1, centre, start
        while True:
            nxt = [j for j in adj[cur] if j != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        legs.append(length)
    legs.sort()
    if legs[0] == 1 and legs[1] == 1:
        return ("D", size)
    if legs[0] == 1 and legs[1] == 2 and legs[2] in (2, 3, 4):
        return ("E", size)
    raise NotADE(f"branched tree with legs {tuple(legs)} is not a Dynkin diagram")


def classify_dynkin(simple_roots: Sequence[Sequence[int]], l: IntegerLattice) -> AdeConfig:
    gram = [[l.inner(a, b) for b in simple_roots] for a in simple_roots]
    return classify_gram(gram)


@dataclass(frozen=True)
class SingularityReport:
    config: AdeConfig
    root_count: int
    simple_roots: tuple[tuple[int, ...], ...]

    def __str__(self):
        return f"{self.config} (roots: {self.root_count})"


def singularity_report(s: Sublattice | IntegerLattice, seed: int = 0) -> SingularityReport:
    """Roots, simple roots and ADE type; simple roots are returned in ambient coordinates."""
    if isinstance(s, Sublattice):
        lat = s.as_lattice()
    else:
        lat = s
    rs = enumerate_roots(lat)
    simple = extract_simple_roots(rs, seed=seed)
    config = classify_dynkin(simple, lat)
    if isinstance(s, Sublattice):
        simple = [tuple(s.to_ambient(r)) for r in simple]
    return SingularityReport(config, len(rs), tuple(simple))


def singularity_configuration(s: Sublattice | IntegerLattice) -> AdeConfig:
    return singularity_report(s).config
