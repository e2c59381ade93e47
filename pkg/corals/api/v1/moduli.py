"""
Tropical Corals - Type enumeration API
"""

from fastapi import APIRouter, Query

from corals.schemas import CoralTypeModel, DegreeModel, TypeCatalogModel
from corals.tropical.moduli import enumerate_types

router = APIRouter()


@router.post("/enumerate", response_model=TypeCatalogModel)
def enumerate_catalog(
    degree: DegreeModel,
    general_only: bool = Query(True, description="Drop non-general degenerations"),
):
    """All coral types of a degree, in canonical order."""
    catalog = enumerate_types(degree.to_degree(), general_only=general_only)
    return TypeCatalogModel(degree=degree, types=[CoralTypeModel.from_type(t) for t in catalog.types])
