"""
Tropical Corals - Coral validation and extension API
"""

from fastapi import APIRouter

from corals.schemas import CoralModel, TropicalCurveModel, ValidationReportModel
from corals.tropical.coral import validate_coral
from corals.tropical.counting import extend_coral

router = APIRouter()


@router.post("/validate", response_model=ValidationReportModel)
def validate(coral: CoralModel):
    """Check the defining conditions of a tropical coral."""
    return ValidationReportModel.from_report(validate_coral(coral.to_coral()))


@router.post("/extend", response_model=TropicalCurveModel)
def extend(coral: CoralModel):
    """Prolong the negative edges of a coral to rays through the origin."""
    return TropicalCurveModel.from_curve(extend_coral(coral.to_coral()))
