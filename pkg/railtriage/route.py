from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Tuple, Union

from .constants import ComplaintCategory, Confidence, RouteBasis
from .core import Table, read_table
from .exceptions import (
    FileUnreadable,
    IncompleteDepartmentMap,
    MalformedEntry,
    MissingDefaultRoute,
    UnknownDivision,
)
from .extract import Gazetteer
from .types import EntitySet, RoutingAssignment
from .utils import combined_version, get_logger

logger = get_logger(__name__)

DEPARTMENTS_FILE = "departments.tsv"
TRAINS_FILE = "trains.tsv"
DEFAULT_ROUTE_FILE = "default_route.tsv"

# (zone, division)
Region = Tuple[str, str]


@dataclass(frozen=True)
class RoutingTables:
    departments: Mapping[ComplaintCategory, str]
    trains: Mapping[str, Region]
    default: Region
    version: str = ""


def _load_departments(table: Table) -> Mapping[ComplaintCategory, str]:
    departments = {}
    for line_number, (name, department) in table.rows:
        try:
            category = ComplaintCategory(name)
        except ValueError:
            raise MalformedEntry(
                f"unknown category {name!r}", path=table.path, line_number=line_number
            )
        if not department:
            raise MalformedEntry("empty department", path=table.path, line_number=line_number)
        departments[category] = department
    absent = [c.value for c in ComplaintCategory if c not in departments]
    if absent:
        raise IncompleteDepartmentMap(
            f"no department for {', '.join(absent)}", categories=absent
        )
    return departments


def _load_trains(table: Table, gazetteer: Gazetteer) -> Mapping[str, Region]:
    pairs = gazetteer.pairs
    trains = {}
    for line_number, (train_no, division, zone) in table.rows:
        if not train_no.isdigit():
            raise MalformedEntry(
                f"train number {train_no!r} is not numeric",
                path=table.path,
                line_number=line_number,
            )
        region = (zone.upper(), division.upper())
        if region not in pairs:
            raise UnknownDivision(
                f"train {train_no} maps to {region[1]}/{region[0]} which the gazetteer lacks",
                path=table.path,
                line_number=line_number,
            )
        trains[train_no] = region
    return trains


def _load_default(path: Path) -> Table:
    try:
        table = read_table(path, 2)
    except FileUnreadable:
        raise MissingDefaultRoute(f"cannot read {path}", path=str(path))
    if len(table.rows) != 1:
        raise MissingDefaultRoute(
            f"expected exactly one zone<TAB>division line got {len(table.rows)}",
            path=table.path,
        )
    return table


def load_routes(directory: Union[str, Path], gazetteer: Gazetteer) -> RoutingTables:
    """
    Load departments.tsv, trains.tsv and default_route.tsv from one
    directory, checking train divisions against the gazetteer.
    """
    directory = Path(directory)
    departments_table = read_table(directory / DEPARTMENTS_FILE, 2)
    trains_table = read_table(directory / TRAINS_FILE, 3)
    default_table = _load_default(directory / DEFAULT_ROUTE_FILE)
    _line_number, (zone, division) = default_table.rows[0]
    default = (zone.upper(), division.upper())
    trains = _load_trains(trains_table, gazetteer)
    version = combined_version(
        t.version for t in (departments_table, trains_table, default_table)
    )
    logger.debug(f"loaded routes trains={len(trains)} default={default}")
    return RoutingTables(
        _load_departments(departments_table), trains, default, version
    )


def route(
    category: ComplaintCategory, entities: EntitySet, tables: RoutingTables
) -> RoutingAssignment:
    department = tables.departments[category]
    region: Optional[Region] = None
    if entities.station is not None:
        region = (entities.station.zone, entities.station.division)
        basis = RouteBasis.STATION
    elif entities.train_no is not None and entities.train_no in tables.trains:
        region = tables.trains[entities.train_no]
        basis = RouteBasis.TRAIN
    if region is None:
        zone, division = tables.default
        return RoutingAssignment(
            zone, division, department, Confidence.FALLBACK, RouteBasis.CATEGORY_DEFAULT
        )
    zone, division = region
    return RoutingAssignment(zone, division, department, Confidence.RESOLVED, basis)
