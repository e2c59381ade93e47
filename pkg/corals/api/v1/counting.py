"""
Tropical Corals - Counting API
"""

from fastapi import APIRouter

from corals.core.config import settings
from corals.schemas import ConstraintModel, CountJobModel, CountResultModel, DegreeModel, StableRangeModel
from corals.tropical.constraints import in_stable_range, sample_general_good
from corals.tropical.counting import count

router = APIRouter()


def _constraint(job: CountJobModel):
    d = job.degree.to_degree()
    if job.constraint is not None:
        return d, job.constraint.to_constraint()
    seed = job.seed if job.seed is not None else settings.default_seed
    return d, sample_general_good(d, seed)


@router.post("/count", response_model=CountResultModel)
def count_job(job: CountJobModel):
    """Tropical count with its per-type breakdown; a missing constraint is sampled."""
    d, lam = _constraint(job)
    return CountResultModel.from_result(count(d, lam, auto_stabilize=job.auto_stabilize))


@router.post("/sample", response_model=ConstraintModel)
def sample(degree: DegreeModel, seed: int = 0):
    """Deterministic good general constraint for a degree."""
    return ConstraintModel.from_constraint(sample_general_good(degree.to_degree(), seed))


@router.post("/stable-range", response_model=StableRangeModel)
def stable_range(job: CountJobModel):
    """Per-type verdicts under rescaling of the constraint."""
    d, lam = _constraint(job)
    return StableRangeModel.from_certificate(in_stable_range(lam, d))
