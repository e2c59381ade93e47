"""
Tropical Corals - File formats

Pydantic models for every JSON document the CLI and the API read or write.
Rationals travel as "p/q" strings, lattice vectors as [a, b] integer pairs.
Each model converts to and from the frozen value types of corals.tropical.
"""

from fractions import Fraction
from typing import Annotated, Dict, List, Optional, Tuple, Type, TypeVar, Union

from pydantic import AfterValidator, BaseModel, Field, ValidationError

from corals.core.errors import ParseError
from corals.core.validation import ValidationReport
from corals.tropical.constraints import Constraint, StableRangeCertificate
from corals.tropical.coral import Degree, TropicalCoral, build_coral
from corals.tropical.coralgraph import CoralGraph, CoralType, EndKind, VertexClass
from corals.tropical.counting import CountResult, Ray, TropicalCurve
from corals.tropical.lattice import LatticeVector, QuotientClass, RationalPoint
from corals.tropical.morse import MorseTree
from corals.tropical.quotient import AreaSeries


def _check_rational(value: str) -> str:
    try:
        return str(Fraction(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"{value!r} is not a rational number") from exc


Rational = Annotated[str, AfterValidator(_check_rational)]
Vector = Tuple[int, int]
Point = Tuple[Rational, Rational]


def _vec(v: Vector) -> LatticeVector:
    return LatticeVector(int(v[0]), int(v[1]))


def _pt(p: Point) -> RationalPoint:
    return RationalPoint(Fraction(p[0]), Fraction(p[1]))


def _dump_vec(u: LatticeVector) -> Vector:
    return (u.a, u.b)


def _dump_pt(p: RationalPoint) -> Point:
    return (str(p.x), str(p.h))


# ============================================================================
# Graphs, types and corals
# ============================================================================

class VertexModel(BaseModel):
    id: int = Field(..., ge=0)
    cls: VertexClass = Field(..., description="interior or negative")


class PositiveEdgeModel(BaseModel):
    id: int = Field(..., ge=0)
    vertex: int


class BoundedEdgeModel(BaseModel):
    id: int = Field(..., ge=0)
    ends: Tuple[int, int]


class CoralGraphModel(BaseModel):
    """Coral graph file: vertex classes, edge lists, weights and the labelling."""
    vertices: List[VertexModel]
    positive_edges: List[PositiveEdgeModel]
    bounded_edges: List[BoundedEdgeModel] = []
    weights: Dict[int, int]
    labels: List[int] = Field(..., description="positive edge ids in label order")

    def to_graph(self) -> CoralGraph:
        return CoralGraph(
            vertices=[(v.id, v.cls) for v in self.vertices],
            positive_edges=[(e.id, e.vertex) for e in self.positive_edges],
            bounded_edges=[(e.id, e.ends) for e in self.bounded_edges],
            weights=self.weights,
            labels=self.labels,
        )

    @classmethod
    def from_graph(cls, g: CoralGraph) -> "CoralGraphModel":
        return cls(
            vertices=[VertexModel(id=v, cls=c) for v, c in g.vertices],
            positive_edges=[PositiveEdgeModel(id=e, vertex=v) for e, v in g.positive_edges],
            bounded_edges=[BoundedEdgeModel(id=e, ends=pair) for e, pair in g.bounded_edges],
            weights=dict(sorted(g.weights.items())),
            labels=list(g.labels),
        )


class FlagDirectionModel(BaseModel):
    vertex: int
    edge: int
    direction: Vector


class CoralTypeModel(BaseModel):
    """A coral graph with its flag and negative vertex directions; no positions."""
    graph: CoralGraphModel
    flag_dirs: List[FlagDirectionModel]
    negvert_dirs: Dict[int, Vector]
    negvert_weights: Dict[int, int] = {}

    def to_type(self) -> CoralType:
        return CoralType(
            self.graph.to_graph(),
            {(f.vertex, f.edge): _vec(f.direction) for f in self.flag_dirs},
            {v: _vec(u) for v, u in self.negvert_dirs.items()},
            dict(self.negvert_weights),
        )

    @classmethod
    def from_type(cls, t: CoralType) -> "CoralTypeModel":
        return cls(
            graph=CoralGraphModel.from_graph(t.graph),
            flag_dirs=[FlagDirectionModel(vertex=v, edge=e, direction=_dump_vec(u))
                       for (v, e), u in sorted(t.flag_dirs.items())],
            negvert_dirs={v: _dump_vec(u) for v, u in sorted(t.negvert_dirs.items())},
            negvert_weights=dict(sorted(t.negvert_weights.items())),
        )


class CoralModel(BaseModel):
    """Coral file: graph, directions of the positive edges and vertex positions."""
    graph: CoralGraphModel
    ray_dirs: Dict[int, Vector] = Field(..., description="primitive direction per positive edge")
    positions: Dict[int, Point]
    negvert_weights: Optional[Dict[int, int]] = None

    def to_coral(self) -> TropicalCoral:
        return build_coral(
            self.graph.to_graph(),
            {v: _pt(p) for v, p in self.positions.items()},
            {e: _vec(u) for e, u in self.ray_dirs.items()},
            self.negvert_weights,
        )

    @classmethod
    def from_coral(cls, c: TropicalCoral) -> "CoralModel":
        g = c.graph
        return cls(
            graph=CoralGraphModel.from_graph(g),
            ray_dirs={e: _dump_vec(c.ctype.flag_dirs[(v, e)]) for e, v in sorted(g.positive_edges)},
            positions={v: _dump_pt(p) for v, p in sorted(c.positions.items())},
            negvert_weights=dict(sorted(c.ctype.negvert_weights.items())),
        )


class RayModel(BaseModel):
    id: int
    vertex: int
    direction: Vector
    weight: int = Field(..., ge=1)
    kind: EndKind
    label: int = -1


class TropicalCurveModel(BaseModel):
    """Plane tropical curve: the extension of a coral."""
    vertices: Dict[int, Point]
    bounded_edges: List[BoundedEdgeModel] = []
    weights: Dict[int, int] = {}
    rays: List[RayModel]

    def to_curve(self) -> TropicalCurve:
        return TropicalCurve(
            vertices={v: _pt(p) for v, p in self.vertices.items()},
            bounded_edges=tuple((e.id, tuple(e.ends)) for e in self.bounded_edges),
            weights=dict(self.weights),
            rays=tuple(Ray(r.id, r.vertex, _vec(r.direction), r.weight, r.kind, r.label) for r in self.rays),
        )

    @classmethod
    def from_curve(cls, tc: TropicalCurve) -> "TropicalCurveModel":
        return cls(
            vertices={v: _dump_pt(p) for v, p in sorted(tc.vertices.items())},
            bounded_edges=[BoundedEdgeModel(id=e, ends=pair) for e, pair in tc.bounded_edges],
            weights=dict(sorted(tc.weights.items())),
            rays=[RayModel(id=r.id, vertex=r.vertex, direction=_dump_vec(r.direction), weight=r.weight,
                           kind=r.kind, label=r.label) for r in tc.rays],
        )


# ============================================================================
# Degrees and constraints
# ============================================================================

class DegreeModel(BaseModel):
    """Positive entries in label order, negative entries as a multiset."""
    positive: List[Vector]
    negative: List[Vector]

    def to_degree(self) -> Degree:
        return Degree(tuple(_vec(v) for v in self.positive), tuple(_vec(v) for v in self.negative))

    @classmethod
    def from_degree(cls, d: Degree) -> "DegreeModel":
        return cls(positive=[_dump_vec(v) for v in d.positive], negative=[_dump_vec(v) for v in d.negative])


class ConstraintEntryModel(BaseModel):
    direction: Vector
    value: Rational


class ConstraintModel(BaseModel):
    entries: List[ConstraintEntryModel] = []

    def to_constraint(self) -> Constraint:
        return Constraint(tuple(QuotientClass(_vec(e.direction), Fraction(e.value)) for e in self.entries))

    @classmethod
    def from_constraint(cls, lam: Constraint) -> "ConstraintModel":
        return cls(entries=[ConstraintEntryModel(direction=_dump_vec(e.direction), value=str(e.value))
                            for e in lam.entries])


class CountJobModel(BaseModel):
    """Input of a count or area-series job; a missing constraint is sampled from the seed."""
    degree: DegreeModel
    constraint: Optional[ConstraintModel] = None
    seed: Optional[int] = None
    auto_stabilize: bool = False
    b: Optional[int] = Field(None, ge=1)
    a_max: Optional[int] = Field(None, ge=0)


# ============================================================================
# Morse trees
# ============================================================================

class MorseTreeModel(BaseModel):
    """Morse tree file: ribbon tree with cyclic orders, root, decoration and phi."""
    vertices: List[int]
    edges: List[BoundedEdgeModel]
    cyclic: Dict[int, List[int]] = Field(..., description="anticlockwise edge order at each vertex")
    root: int
    decoration: List[int]
    phi: Dict[int, Rational]

    def to_tree(self) -> MorseTree:
        return MorseTree(
            vertices=tuple(self.vertices),
            edges=tuple((e.id, e.ends) for e in self.edges),
            cyclic=self.cyclic,
            root=self.root,
            decoration=tuple(self.decoration),
            phi={v: Fraction(p) for v, p in self.phi.items()},
        )

    @classmethod
    def from_tree(cls, m: MorseTree) -> "MorseTreeModel":
        return cls(
            vertices=list(m.vertices),
            edges=[BoundedEdgeModel(id=e, ends=pair) for e, pair in m.edges],
            cyclic={v: list(es) for v, es in sorted(m.cyclic.items())},
            root=m.root,
            decoration=list(m.decoration),
            phi={v: str(p) for v, p in sorted(m.phi.items())},
        )


# ============================================================================
# Results
# ============================================================================

class ValidationReportModel(BaseModel):
    subject: str
    valid: bool
    violations: List[str] = []

    @classmethod
    def from_report(cls, report: ValidationReport) -> "ValidationReportModel":
        return cls(**report.to_dict())


class TypeContributionModel(BaseModel):
    ctype: CoralTypeModel
    contribution: Rational
    realized: bool
    coral: Optional[CoralModel] = None


class CountResultModel(BaseModel):
    degree: DegreeModel
    constraint: ConstraintModel
    total: Rational
    scale: int = 1
    per_type: List[TypeContributionModel] = []

    @classmethod
    def from_result(cls, result: CountResult) -> "CountResultModel":
        return cls(
            degree=DegreeModel.from_degree(result.degree),
            constraint=ConstraintModel.from_constraint(result.constraint),
            total=str(result.total),
            scale=result.scale,
            per_type=[
                TypeContributionModel(
                    ctype=CoralTypeModel.from_type(p.ctype),
                    contribution=str(p.contribution),
                    realized=p.realized,
                    coral=CoralModel.from_coral(p.coral) if p.coral is not None else None,
                )
                for p in result.per_type
            ],
        )


class TypeCatalogModel(BaseModel):
    degree: DegreeModel
    types: List[CoralTypeModel]


class StableRangeModel(BaseModel):
    stable: bool
    verdicts: List[dict]

    @classmethod
    def from_certificate(cls, cert: StableRangeCertificate) -> "StableRangeModel":
        return cls(**cert.to_dict())


class AreaSeriesModel(BaseModel):
    coefficients: Dict[int, Rational]
    a_max: int
    skipped: int = 0

    @classmethod
    def from_series(cls, series: AreaSeries) -> "AreaSeriesModel":
        return cls(coefficients={a: str(v) for a, v in sorted(series.coefficients.items())},
                   a_max=series.a_max, skipped=series.skipped)


# ============================================================================
# Loading
# ============================================================================

M = TypeVar("M", bound=BaseModel)


def load_model(model: Type[M], data: Union[str, dict]) -> M:
    """Parse a JSON document or decoded object, turning schema failures into ParseError."""
    try:
        if isinstance(data, str):
            return model.model_validate_json(data)
        return model.model_validate(data)
    except ValidationError as exc:
        details = [{"loc": [str(p) for p in err["loc"]], "msg": err["msg"]} for err in exc.errors()]
        raise ParseError(f"input does not match the {model.__name__} schema", details=details) from exc


def dump_model(obj: BaseModel) -> str:
    return obj.model_dump_json(indent=2) + "\n"
