"""
Tropical Corals - Quotient API
"""

from typing import Dict

from fastapi import APIRouter
from pydantic import BaseModel, Field

from corals.core.config import settings
from corals.core.errors import ParseError
from corals.schemas import AreaSeriesModel, CoralModel, CountJobModel
from corals.tropical.constraints import sample_general_good
from corals.tropical.quotient import (
    area_agrees,
    count_series,
    normalize_mod_Z,
    stable_intersections,
    tropical_area,
    translate_constraint,
)

router = APIRouter()


class AreaRequest(BaseModel):
    coral: CoralModel
    b: int = Field(..., ge=1, description="periodicity")


class AreaResponse(BaseModel):
    area: int
    intersections: Dict[int, int]
    perturbations_agree: bool


@router.post("/area", response_model=AreaResponse)
def area(request: AreaRequest):
    """Tropical area with the stable intersection number of every line."""
    c = request.coral.to_coral()
    return AreaResponse(
        area=tropical_area(c, request.b),
        intersections=stable_intersections(c, request.b),
        perturbations_agree=area_agrees(c, request.b),
    )


@router.post("/series", response_model=AreaSeriesModel)
def series(job: CountJobModel):
    """Area-graded count of the quotient degree up to a_max."""
    if job.b is None or job.a_max is None:
        raise ParseError("series needs b and a_max")
    qd = normalize_mod_Z(job.degree.to_degree(), job.b)
    if job.constraint is not None:
        lam = translate_constraint(job.constraint.to_constraint(), qd.offset, job.b)
    else:
        seed = job.seed if job.seed is not None else settings.default_seed
        lam = sample_general_good(qd.representative, seed)
    return AreaSeriesModel.from_series(count_series(qd, lam, job.a_max))
