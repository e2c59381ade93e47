"""
Tropical Corals - Morse tree API
"""

from fractions import Fraction
from typing import List, Optional

from fastapi import APIRouter
from pydantic import BaseModel, Field

from corals.schemas import CoralModel, MorseTreeModel, Rational, ValidationReportModel
from corals.tropical.morse import coral_to_tmt, lift_tmt, validate_tmt

router = APIRouter()


class LiftRequest(BaseModel):
    """Morse tree with the height parameters r0, ..., r_{l-2}."""
    tree: MorseTreeModel
    heights: List[Rational] = Field(..., description="rationals greater than 1")


class ProjectRequest(BaseModel):
    coral: CoralModel
    root: Optional[int] = Field(None, description="negative vertex used as the root")


class MorseValidation(ValidationReportModel):
    accelerations: dict = {}
    contracted: List[int] = []


@router.post("/validate", response_model=MorseValidation)
def validate(tree: MorseTreeModel):
    """Velocity propagation, rationality and the contraction law."""
    report, profile = validate_tmt(tree.to_tree())
    body = MorseValidation(**report.to_dict())
    if profile is not None:
        body.accelerations = {str(e): n for e, n in sorted(profile.accelerations.items())}
        body.contracted = sorted(profile.contracted)
    return body


@router.post("/lift", response_model=CoralModel)
def lift(request: LiftRequest):
    """A coral in the fibre of the projection over the tree."""
    c = lift_tmt(request.tree.to_tree(), [Fraction(h) for h in request.heights])
    return CoralModel.from_coral(c)


@router.post("/project", response_model=MorseTreeModel)
def project(request: ProjectRequest):
    """Project a general coral of good type to its Morse tree."""
    return MorseTreeModel.from_tree(coral_to_tmt(request.coral.to_coral(), root=request.root))
