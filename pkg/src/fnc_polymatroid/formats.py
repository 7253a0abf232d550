"""
JSON file formats.

Each format has a strict pydantic schema; loaders turn a validated file
into the library object and report the first problem as an
InputFormatError naming the file and the offending location.
"""

import json
from pathlib import Path
from typing import Any, Literal, Optional, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .bridge import PolymatroidMap
from .codec import FncSolution
from .constructor import LogEntry
from .errors import FncError, InputFormatError
from .linalg import Field as PrimeField
from .linalg import Mat
from .matroid import Matroid
from .network import Network
from .polymatroid import DiscretePolymatroid, Representation


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class RepresentationFile(_Strict):
    q: int
    ambient: int
    generators: list[list[list[int]]]


class PolymatroidFile(_Strict):
    r: int
    rank: dict[str, int]


class MatroidFile(_Strict):
    r: int
    independent: list[int]


class InputEdgeModel(_Strict):
    id: str
    at: str
    msg: int
    k: int


class EdgeModel(_Strict):
    id: str
    origin: str = Field(alias="from")
    dest: str = Field(alias="to")


class DemandModel(_Strict):
    node: str
    msgs: list[int]


class NetworkFile(_Strict):
    nodes: list[str]
    inputs: list[InputEdgeModel]
    edges: list[EdgeModel] = []
    demands: list[DemandModel] = []


class SolutionFile(_Strict):
    q: int
    k: list[int]
    n: int
    global_: dict[str, list[list[int]]] = Field(alias="global")


class MapFile(_Strict):
    f: dict[str, int]


class ChoiceModel(_Strict):
    i: int
    u: list[int]


class ChoicesFile(_Strict):
    choices: list[ChoiceModel]


class LogEntryModel(_Strict):
    step: Literal["source", "relay", "demand"]
    i: int
    u: list[int]


class LogFile(_Strict):
    log: list[LogEntryModel]


M = TypeVar("M", bound=BaseModel)

Source = Union[str, Path, dict]


# ==================== Parsing ====================


def _validate(model: type[M], data: Any, source: str) -> M:
    try:
        if isinstance(data, (str, bytes)):
            return model.model_validate_json(data)
        return model.model_validate(data)
    except ValidationError as e:
        err = e.errors()[0]
        location = ".".join(str(part) for part in err["loc"]) or None
        raise InputFormatError(source, location, err["msg"]) from None


def _read(source: Source) -> tuple[Any, str]:
    """File contents (or an inline object) plus a name for error messages."""
    if isinstance(source, dict):
        return source, "<inline>"
    path = Path(source)
    try:
        return path.read_text(encoding="utf-8"), str(path)
    except OSError as e:
        raise InputFormatError(str(path), None, f"cannot read file: {e.strerror}") from None


def _build(source: str, location: Optional[str], factory):
    try:
        return factory()
    except (FncError, ValueError) as e:
        if isinstance(e, InputFormatError):
            raise
        raise InputFormatError(source, location, str(e)) from None


def load_representation(source: Source) -> Representation:
    data, name = _read(source)
    doc = _validate(RepresentationFile, data, name)
    return _build(
        name,
        "generators",
        lambda: Representation.from_dict(doc.model_dump()),
    )


def load_polymatroid(source: Source) -> DiscretePolymatroid:
    data, name = _read(source)
    doc = _validate(PolymatroidFile, data, name)
    return _build(name, "rank", lambda: DiscretePolymatroid.from_dict(doc.model_dump()))


def load_matroid(source: Source) -> Matroid:
    data, name = _read(source)
    doc = _validate(MatroidFile, data, name)
    return _build(name, "independent", lambda: Matroid.from_dict(doc.model_dump()))


def load_network(source: Source) -> Network:
    data, name = _read(source)
    doc = _validate(NetworkFile, data, name)
    return _build(name, None, lambda: Network.from_dict(doc.model_dump(by_alias=True)))


def load_solution(source: Source) -> FncSolution:
    data, name = _read(source)
    doc = _validate(SolutionFile, data, name)
    return _build(name, "global", lambda: _solution(doc))


def _solution(doc: SolutionFile) -> FncSolution:
    field = PrimeField(doc.q)
    globals_ = {eid: Mat.from_rows(field, rows) for eid, rows in doc.global_.items()}
    return FncSolution(field=field, k=list(doc.k), n=doc.n, globals=globals_)


def load_map(source: Source) -> PolymatroidMap:
    data, name = _read(source)
    doc = _validate(MapFile, data, name)
    return PolymatroidMap(dict(doc.f))


def load_choices(source: Source) -> list[tuple[int, tuple[int, ...]]]:
    data, name = _read(source)
    doc = _validate(ChoicesFile, data, name)
    return [(c.i, tuple(c.u)) for c in doc.choices]


def load_log(source: Source) -> list[LogEntry]:
    data, name = _read(source)
    doc = _validate(LogFile, data, name)
    return [LogEntry(e.step, e.i, tuple(e.u)) for e in doc.log]


def load_rank_oracle(source: Source) -> Union[Representation, DiscretePolymatroid]:
    """A representation or a rank table, told apart by their keys."""
    data, name = _read(source)
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise InputFormatError(name, f"line {e.lineno} column {e.colno}", e.msg) from None
    if isinstance(data, dict) and "generators" in data:
        doc = _validate(RepresentationFile, data, name)
        return _build(name, "generators", lambda: Representation.from_dict(doc.model_dump()))
    doc = _validate(PolymatroidFile, data, name)
    return _build(name, "rank", lambda: DiscretePolymatroid.from_dict(doc.model_dump()))


# ==================== Output ====================


def dumps(data: Any, pretty: bool = False) -> str:
    """Canonical JSON text, newline-terminated."""
    if pretty:
        return json.dumps(data, indent=2) + "\n"
    return json.dumps(data, separators=(",", ":")) + "\n"


def write_json(path: Union[str, Path], data: Any) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(data, pretty=True), encoding="utf-8")


def log_to_dict(log: list[LogEntry]) -> dict:
    return {"log": [entry.to_dict() for entry in log]}
