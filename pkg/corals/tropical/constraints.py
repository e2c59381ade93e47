"""
Asymptotic constraints.

A constraint prescribes, for each of the first k positive ends of a degree,
the affine line (a class in N_R / R.u_i) the end must lie on. This module
decides goodness, samples good general constraints, and certifies whether a
constraint sits in the stable range where rescaling changes nothing.
"""

import logging
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import floor
from typing import List, Optional, Sequence, Tuple

from corals.core.config import settings
from corals.core.errors import DirectionMismatch, SamplingFailed, SolverInconsistency
from corals.tropical.coral import Degree, TropicalCoral, require_valid
from corals.tropical.coralgraph import CoralType
from corals.tropical.lattice import LatticeVector, QuotientClass, det2, pairing, sign
from corals.tropical.moduli import (
    ScaleWindow,
    TypeCatalog,
    enumerate_types,
    scale_window,
    solve_parametric,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Constraint:
    """Quotient classes for the labelled positive ends, in label order."""
    entries: Tuple[QuotientClass, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    @property
    def k(self) -> int:
        return len(self.entries)

    @property
    def directions(self) -> List[LatticeVector]:
        return [e.direction for e in self.entries]

    def scaled(self, s) -> "Constraint":
        return Constraint(tuple(e.scaled(s) for e in self.entries))

    @classmethod
    def from_values(cls, directions: Sequence[LatticeVector], values: Sequence) -> "Constraint":
        return cls(tuple(QuotientClass(u, Fraction(v)) for u, v in zip(directions, values)))


class Verdict(str, Enum):
    """Behaviour of one type under rescaling of the constraint."""
    EMPTY = "empty-for-all-s"
    REALIZED = "realized-at-s=1"
    RESCALE = "realized-only-after-rescale"


@dataclass(frozen=True)
class TypeVerdict:
    ctype: CoralType
    verdict: Verdict
    lower: Optional[Fraction] = None  # infimum of the realizing scales
    upper: Optional[Fraction] = None  # supremum, None when unbounded

    __hash__ = None


@dataclass(frozen=True)
class StableRangeCertificate:
    """Per-type verdicts for one constraint over every general type of a degree."""
    degree: Degree
    constraint: Constraint
    verdicts: Tuple[TypeVerdict, ...]

    __hash__ = None

    @property
    def stable(self) -> bool:
        return all(v.verdict != Verdict.RESCALE for v in self.verdicts)

    @property
    def realized(self) -> int:
        return sum(1 for v in self.verdicts if v.verdict == Verdict.REALIZED)

    def to_dict(self) -> dict:
        return {
            "stable": self.stable,
            "verdicts": [
                {
                    "type": i,
                    "verdict": v.verdict.value,
                    "lower": None if v.lower is None else str(v.lower),
                    "upper": None if v.upper is None else str(v.upper),
                }
                for i, v in enumerate(self.verdicts)
            ],
        }


# ============================================================================
# Matching and goodness
# ============================================================================

def matches(c: TropicalCoral, lam: Constraint) -> bool:
    """Whether every labelled positive end of c lies on its prescribed line."""
    require_valid(c)
    g = c.graph
    if lam.k > len(g.labels):
        raise DirectionMismatch(f"{lam.k} constraint entries for {len(g.labels)} positive edges")
    for i, entry in enumerate(lam.entries):
        e = g.labels[i]
        (v,) = g.ends(e)
        u = c.ctype.flag_dirs[(v, e)]
        if u != entry.direction:
            raise DirectionMismatch(f"entry {i} has direction {entry.direction}, edge {e} has {u}")
        if pairing(u, c.positions[v]) != entry.value:
            return False
    return True


def boundary_sides(d: Degree) -> dict:
    """Directions on the boundary of the positive cone mapped to the sign of its image."""
    dirs = d.positive_primitives()
    slopes = [u.slope() for u in dirs]
    lo, hi = min(slopes), max(slopes)
    sides = {}
    for u in dirs:
        if u.slope() not in (lo, hi) or lo == hi:
            continue
        other = next(w for w in dirs if det2(u, w) != 0)
        sides[u] = sign(det2(u, other))
    return sides


def is_good(lam: Constraint, d: Degree) -> bool:
    """Boundary directions of the cone need values strictly on its interior side."""
    if lam.k == 0:
        return True
    dirs = d.positive_primitives()
    if all(det2(dirs[0], u) == 0 for u in dirs):
        # the cone is a single ray; its image in every quotient is a point
        return False
    sides = boundary_sides(d)
    for entry in lam.entries:
        side = sides.get(entry.direction)
        if side is not None and sign(entry.value) != side:
            return False
    return True


# ============================================================================
# Generality
# ============================================================================

def _degenerates(sol) -> bool:
    """Whether the solution closes up onto a non-general coral.

    Edges of length zero are contracted; every component may carry at most
    one negative vertex and components without one must stay above height 1.
    """
    system = sol.system
    t = system.ctype
    g = t.graph
    lengths = sol.lengths()
    heights = sol.heights()
    if any(L < 0 for L in lengths.values()) or all(L > 0 for L in lengths.values()):
        return False

    parent = {v: v for v in g.vertex_ids}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for e, L in lengths.items():
        if L == 0:
            a, b = g.ends(e)
            parent[find(a)] = find(b)

    components: dict = {}
    for v in g.vertex_ids:
        components.setdefault(find(v), []).append(v)
    negatives = set(g.negative_vertices)
    for members in components.values():
        count = sum(1 for v in members if v in negatives)
        if count > 1:
            return False
        if count == 0 and any(heights[v] <= 1 for v in members):
            return False
    return True


def is_general_constraint(lam: Constraint, d: Degree, catalog: Optional[TypeCatalog] = None) -> bool:
    """No coral of degree d matching lam is non-general."""
    if lam.k != d.l - 1:
        return False
    if catalog is None:
        catalog = enumerate_types(d)
    for t in catalog.types:
        try:
            sol = solve_parametric(t, lam)
        except SolverInconsistency:
            return False
        if sol is None or not sol.valid_at(1):
            continue
        if _degenerates(sol):
            logger.debug("constraint degenerates onto a contraction of a type")
            return False
    return True


def sample_general_good(d: Degree, seed: int, attempts: Optional[int] = None) -> Constraint:
    """Deterministic good general constraint for d.

    Attempt i draws values from random.Random(seed * 1_000_003 + i); boundary
    directions get the sign goodness demands, the others a random sign.
    """
    k = d.l - 1
    if k == 0:
        return Constraint(())
    attempts = attempts if attempts is not None else settings.sampling_attempts
    dirs = d.positive_primitives()[:k]
    if all(det2(dirs[0], u) == 0 for u in d.positive_primitives()):
        raise SamplingFailed("all positive directions are parallel; no constraint is good")

    sides = boundary_sides(d)
    catalog = enumerate_types(d)
    for attempt in range(attempts):
        rng = random.Random(seed * 1_000_003 + attempt)
        values = []
        for u in dirs:
            magnitude = Fraction(rng.randint(1, settings.sampling_value_bound), settings.sampling_denominator)
            side = sides.get(u) or rng.choice((1, -1))
            values.append(side * magnitude)
        lam = Constraint.from_values(dirs, values)
        if is_good(lam, d) and is_general_constraint(lam, d, catalog):
            logger.debug("sampled constraint after %d attempts", attempt + 1)
            return lam
        logger.debug("sample %d for seed %d rejected", attempt, seed)
    raise SamplingFailed(f"no good general constraint found in {attempts} attempts", details={"seed": seed})


# ============================================================================
# Stable range
# ============================================================================

def in_stable_range(lam: Constraint, d: Degree, catalog: Optional[TypeCatalog] = None) -> StableRangeCertificate:
    """Classify every general type by how its realizability depends on s >= 1."""
    if catalog is None:
        catalog = enumerate_types(d)
    verdicts = []
    for t in catalog.types:
        window = scale_window(solve_parametric(t, lam))
        if window.empty:
            verdicts.append(TypeVerdict(t, Verdict.EMPTY))
            continue
        verdict = Verdict.REALIZED if 1 in window else Verdict.RESCALE
        verdicts.append(TypeVerdict(t, verdict, window.lower, window.upper))
    cert = StableRangeCertificate(d, lam, tuple(verdicts))
    logger.debug("stable range check: %d types, stable=%s", len(verdicts), cert.stable)
    return cert


def _stable_at(windows: Sequence[ScaleWindow], s: int) -> bool:
    for w in windows:
        if w.empty or s in w:
            continue
        # empty at s but realized somewhere above
        if w.upper is None or s < w.upper:
            return False
    return True


def stabilize(lam: Constraint, d: Degree, catalog: Optional[TypeCatalog] = None) -> Tuple[int, Constraint]:
    """Smallest integer s0 >= 1 with s0*lam in the stable range, and s0*lam."""
    if catalog is None:
        catalog = enumerate_types(d)
    windows = [scale_window(solve_parametric(t, lam)) for t in catalog.types]
    endpoints = [w.lower for w in windows if not w.empty]
    endpoints += [w.upper for w in windows if not w.empty and w.upper is not None]
    bound = floor(max(endpoints, default=Fraction(1))) + 1
    for s in range(1, bound + 1):
        if _stable_at(windows, s):
            if s > 1:
                logger.info("constraint stabilized by rescaling with s0=%d", s)
            return s, lam.scaled(s)
    return bound, lam.scaled(bound)
