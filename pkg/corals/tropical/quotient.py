"""
The Z-quotient of the truncated cone.

Z acts by the shear (x, h) -> (x + k*b*h, h). A degree on the quotient is a
class of degrees under translating each end separately; corals are graded by
their tropical area, the stable intersection number with the lines
L_j = R*(j*b, 1).
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import ceil, floor
from typing import Dict, Iterator, List, Optional, Tuple

from corals.core.config import settings
from corals.core.errors import BadConstraint, CoralError, InvalidDegree
from corals.tropical.constraints import Constraint, in_stable_range, is_general_constraint, is_good
from corals.tropical.coral import Degree, TropicalCoral, require_valid
from corals.tropical.coralgraph import CoralType
from corals.tropical.counting import contribution
from corals.tropical.lattice import LatticeVector, QuotientClass, RationalPoint, sign
from corals.tropical.moduli import check_degree, enumerate_types, realize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuotientDegree:
    """Degree on the quotient: periodicity b and a representative with its first end normalized."""
    b: int
    representative: Degree
    offset: int = 0  # shear applied to the input degree to reach the representative


@dataclass(frozen=True)
class AreaSeries:
    """Coefficients of q^A for A = 0..a_max."""
    coefficients: Dict[int, Fraction] = field(default_factory=dict)
    a_max: int = 0
    skipped: int = 0  # translates left out

    __hash__ = None

    def coefficient(self, area: int) -> Fraction:
        return self.coefficients.get(area, Fraction(0))


# ============================================================================
# The Z-action
# ============================================================================

def shear(v: LatticeVector, k: int, b: int) -> LatticeVector:
    return LatticeVector(v.a + k * b * v.b, v.b)


def shear_point(p: RationalPoint, k: int, b: int) -> RationalPoint:
    return RationalPoint(p.x + k * b * p.h, p.h)


def translate_degree(d: Degree, k: int, b: int) -> Degree:
    return Degree(tuple(shear(v, k, b) for v in d.positive), tuple(shear(v, k, b) for v in d.negative))


def translate(c: TropicalCoral, k: int, b: int) -> TropicalCoral:
    """Image of c under k times the generator of the Z-action."""
    t = c.ctype
    moved = CoralType(
        t.graph,
        {flag: shear(u, k, b) for flag, u in t.flag_dirs.items()},
        {v: shear(u, k, b) for v, u in t.negvert_dirs.items()},
        dict(t.negvert_weights),
    )
    return TropicalCoral(moved, {v: shear_point(p, k, b) for v, p in c.positions.items()})


def translate_constraint(lam: Constraint, k: int, b: int) -> Constraint:
    """Shear the directions of lam; the pairing values are invariant under the action."""
    return Constraint(tuple(QuotientClass(shear(e.direction, k, b), e.value) for e in lam.entries))


def normalize_mod_Z(d: Degree, b: int) -> QuotientDegree:
    """Shear d so the first positive end has slope in [0, b)."""
    if not d.positive:
        raise InvalidDegree("degree has no positive end")
    k = floor(d.positive[0].slope() / b)
    return QuotientDegree(b, translate_degree(d, -k, b), -k)


# ============================================================================
# Tropical area
# ============================================================================

def _g(j: int, b: int, x: Fraction, h: Fraction) -> Fraction:
    """Signed position relative to L_j; equals det((x, h), (j*b, 1))."""
    return x - j * b * h


def _perturbed_sign(alpha: Fraction, beta: Fraction) -> int:
    """Sign of alpha + beta*eps for infinitesimal eps > 0."""
    return sign(alpha) if alpha != 0 else sign(beta)


def _pieces(c: TropicalCoral) -> Iterator[Tuple[RationalPoint, Optional[RationalPoint], LatticeVector, int]]:
    """Segments (P, Q, u, w) and positive rays (P, None, u, w) of the coral."""
    t = c.ctype
    g = c.graph
    for e, (a, b) in g.bounded_edges:
        yield c.positions[a], c.positions[b], t.flag_dirs[(a, e)], g.weight(e)
    for e, v in g.positive_edges:
        yield c.positions[v], None, t.flag_dirs[(v, e)], g.weight(e)


def _line_range(c: TropicalCoral, b: int) -> range:
    slopes = [p.radial() for p in c.positions.values()]
    slopes += [t.slope() for t in c.ctype.label_directions()]
    return range(floor(min(slopes) / b) - 1, ceil(max(slopes) / b) + 2)


def stable_intersections(c: TropicalCoral, b: int, perturbation: Optional[Fraction] = None,
                         direction: int = 1) -> Dict[int, int]:
    """Intersection number of c with each line L_j after shifting c by eps*(direction, delta)."""
    delta = perturbation if perturbation is not None else settings.perturbations[0]
    tx, th = Fraction(direction), Fraction(delta)
    out: Dict[int, int] = {}
    for j in _line_range(c, b):
        beta = _g(j, b, tx, th)
        total = 0
        for P, Q, u, w in _pieces(c):
            gu = _g(j, b, Fraction(u.a), Fraction(u.b))
            start = _perturbed_sign(_g(j, b, P.x, P.h), beta)
            if Q is not None:
                crosses = start != _perturbed_sign(_g(j, b, Q.x, Q.h), beta)
            else:
                crosses = gu != 0 and start != sign(gu)
            if crosses:
                total += w * abs(gu)
        if total:
            out[j] = total
    return out


def tropical_area(c: TropicalCoral, b: int) -> int:
    """Sum over j of the stable intersection numbers with L_j."""
    require_valid(c)
    area = sum(stable_intersections(c, b).values())
    logger.debug("tropical area %d for b=%d", area, b)
    return area


def area_agrees(c: TropicalCoral, b: int) -> bool:
    """Whether two unrelated perturbations give the same area."""
    first, second = settings.perturbations
    return (sum(stable_intersections(c, b, first, 1).values())
            == sum(stable_intersections(c, b, second, -1).values()))


# ============================================================================
# Area-graded count
# ============================================================================

def _translates(d: Degree, b: int, a_max: int) -> List[Degree]:
    """Degrees obtained by shearing every end but the first, keeping the balance.

    Each shift k_i is bounded by a_max + ceil(|s_i - s_1| / b) + 2, s_i the
    slope of end i; the last shift is solved from sum k_i * h_i = 0.
    """
    ends = list(d.positive) + list(d.negative)
    if len(ends) < 2:
        return [d]
    s1 = ends[0].slope()
    bounds = [a_max + ceil(abs(v.slope() - s1) / b) + 2 for v in ends]
    free = range(1, len(ends) - 1)
    last = ends[-1]
    seen = set()
    out = []
    for shifts in product(*(range(-bounds[i], bounds[i] + 1) for i in free)):
        weight = sum(k * ends[i].b for k, i in zip(shifts, free))
        if weight % last.b != 0:
            continue
        k_last = -weight // last.b
        if abs(k_last) > bounds[-1]:
            continue
        ks = (0,) + shifts + (k_last,)
        moved = [shear(v, k, b) for v, k in zip(ends, ks)]
        candidate = Degree(tuple(moved[:d.l]), tuple(moved[d.l:]))
        key = (tuple(sorted(candidate.positive)), tuple(sorted(candidate.negative)))
        if key in seen:
            continue
        seen.add(key)
        out.append(candidate)
    return out


def _translate_problem(d: Degree, lam: Constraint, catalog) -> Optional[str]:
    """Why lam cannot be used on the translate d, or None."""
    if not is_good(lam, d):
        return "constraint is not good"
    if not is_general_constraint(lam, d, catalog):
        return "constraint is not general"
    if not in_stable_range(lam, d, catalog).stable:
        return "constraint is not in the stable range"
    return None


def count_series(qd: QuotientDegree, lam: Constraint, a_max: int) -> AreaSeries:
    """Contributions of realized corals over all translates, graded by area up to a_max.

    Translates on which the constraint is not good, general and stable are
    left out and counted in `skipped`.
    """
    if a_max < 0:
        raise BadConstraint("a_max must be nonnegative")
    d, b = qd.representative, qd.b
    check_degree(d)
    if not is_good(lam, d):
        raise BadConstraint("constraint is not good for the representative degree")
    catalog = enumerate_types(d)
    if not is_general_constraint(lam, d, catalog):
        raise BadConstraint("constraint is not general for the representative degree")
    cert = in_stable_range(lam, d, catalog)
    if not cert.stable:
        raise BadConstraint("constraint is not in the stable range", details=cert.to_dict())

    coefficients: Dict[int, Fraction] = defaultdict(Fraction)
    translates = _translates(d, b, a_max)
    skipped = 0
    for moved in translates:
        dirs = [v for v in moved.positive_primitives()[:lam.k]]
        moved_lam = Constraint(tuple(QuotientClass(u, e.value) for u, e in zip(dirs, lam.entries)))
        try:
            moved_catalog = enumerate_types(moved)
            problem = _translate_problem(moved, moved_lam, moved_catalog)
        except CoralError as exc:
            problem = str(exc)
        if problem is not None:
            logger.warning("leaving out translate %s: %s", [v.as_list() for v in moved.positive], problem)
            skipped += 1
            continue
        for t in moved_catalog.types:
            c = realize(t, moved_lam)
            if c is None:
                continue
            area = tropical_area(c, b)
            if area <= a_max:
                coefficients[area] += contribution(t)
    logger.info("area series over %d translates (%d left out) up to A=%d: %s", len(translates), skipped, a_max,
                {a: str(v) for a, v in sorted(coefficients.items())})
    return AreaSeries(dict(sorted(coefficients.items())), a_max, skipped)
