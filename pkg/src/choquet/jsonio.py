"""JSON codecs for every format the CLI reads or writes.

Numbers arrive as ints, exact decimal strings, "p/q" strings, or the token
"inf"; floats in source JSON are parsed digit-exactly (0.1 means one
tenth).  Emitted rationals render as "p/q" with an optional decimal field
where the format is object-shaped.  Every emitter here round-trips through
the matching loader.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .capacity import Capacity
from .convergence import FunctionSequence
from .domain import GroundSet, StepFunction, SubsetMask
from .duality import AdditiveMeasure
from .errors import LoaderError
from .hausdorff import (
    AlgebraicValue,
    CoverSolution,
    DyadicCellSet,
    DyadicCube,
    DyadicDomain,
)
from .values import INF, decimal_string, json_value, parse_value


def loads(text: str):
    """Parse JSON with floats kept exact."""
    try:
        return json.loads(
            text, parse_float=lambda s: Fraction(s), parse_constant=_constant
        )
    except json.JSONDecodeError as exc:
        raise LoaderError(f"malformed JSON: {exc}") from exc


def _constant(name: str):
    if name == "Infinity":
        return INF
    raise LoaderError(f"unsupported JSON constant {name!r}")


def load_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise LoaderError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def _value_at(raw, path: str, *, allow_negative=False):
    try:
        return parse_value(raw, allow_negative=allow_negative)
    except ValueError as exc:
        raise LoaderError(f"{path}: {exc}") from exc


def load_function(obj, universe: Optional[GroundSet] = None, *, path="function") -> StepFunction:
    """A step function is a bare array of values."""
    if not isinstance(obj, list) or not obj:
        raise LoaderError(f"{path}: expected a nonempty array of values")
    if universe is None:
        universe = GroundSet(len(obj))
    elif universe.size != len(obj):
        raise LoaderError(
            f"{path}: expected {universe.size} values, got {len(obj)}"
        )
    values = tuple(
        _value_at(v, f"{path}[{i}]", allow_negative=True) for i, v in enumerate(obj)
    )
    return StepFunction(universe, values)


def dump_function(f: StepFunction) -> list:
    return [json_value(v) for v in f.values]


def load_subset(obj, universe: GroundSet, *, path="set") -> SubsetMask:
    if not isinstance(obj, list):
        raise LoaderError(f"{path}: expected an array of point indices")
    for i, v in enumerate(obj):
        if not isinstance(v, int) or isinstance(v, bool):
            raise LoaderError(f"{path}[{i}]: expected an integer index, got {v!r}")
        if not 0 <= v < universe.size:
            raise LoaderError(
                f"{path}[{i}]: index {v} outside the {universe.size}-point universe"
            )
    return SubsetMask.from_indices(universe, obj)


def dump_subset(subset: SubsetMask) -> list:
    return list(subset.indices())


def load_set_family(obj, universe: Optional[GroundSet] = None, *, path="sets"):
    """Either a bare array of index arrays or {"n": int, "sets": [...]}."""
    if isinstance(obj, dict):
        if "n" not in obj or "sets" not in obj:
            raise LoaderError(f'{path}: expected keys "n" and "sets"')
        n = obj["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise LoaderError(f"{path}.n: expected a positive integer")
        universe = GroundSet(n)
        body = obj["sets"]
    else:
        body = obj
    if not isinstance(body, list) or not body:
        raise LoaderError(f"{path}: expected a nonempty array of sets")
    if universe is None:
        top = 0
        for family_member in body:
            if isinstance(family_member, list):
                for v in family_member:
                    if isinstance(v, int) and not isinstance(v, bool):
                        top = max(top, v + 1)
        universe = GroundSet(max(top, 1))
    return universe, [
        load_subset(member, universe, path=f"{path}[{i}]")
        for i, member in enumerate(body)
    ]


def dump_set_family(universe: GroundSet, sets) -> dict:
    return {"n": universe.size, "sets": [dump_subset(s) for s in sets]}


def load_capacity(obj, *, path="capacity") -> tuple[Capacity, list[str]]:
    """Returns the capacity plus loader warnings (unspecified subsets)."""
    if not isinstance(obj, dict):
        raise LoaderError(f"{path}: expected an object with n and entries")
    n = obj.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise LoaderError(f"{path}.n: expected a positive integer ground-set size")
    universe = GroundSet(n)
    entries = obj.get("entries")
    if not isinstance(entries, list):
        raise LoaderError(f"{path}.entries: expected an array")
    table = [None] * (1 << n)
    for i, entry in enumerate(entries):
        epath = f"{path}.entries[{i}]"
        if not isinstance(entry, dict):
            raise LoaderError(f"{epath}: expected an object")
        if ("set" in entry) == ("mask" in entry):
            raise LoaderError(f'{epath}: exactly one of "set" or "mask" is required')
        if "mask" in entry:
            mask = entry["mask"]
            if not isinstance(mask, int) or isinstance(mask, bool) or not 0 <= mask < (1 << n):
                raise LoaderError(f"{epath}.mask: out of range for n={n}")
        else:
            mask = load_subset(entry["set"], universe, path=f"{epath}.set").bits
        if "value" not in entry:
            raise LoaderError(f'{epath}: missing "value"')
        if table[mask] is not None:
            raise LoaderError(f"{epath}: duplicate entry for subset mask {mask}")
        table[mask] = _value_at(entry["value"], f"{epath}.value")
    warnings_out = []
    missing = sum(1 for v in table if v is None)
    if missing:
        warnings_out.append(
            f"{missing} of {1 << n} subsets were unspecified and default to 0"
        )
        table = [Fraction(0) if v is None else v for v in table]
    return Capacity(universe, table), warnings_out


def dump_capacity(H: Capacity) -> dict:
    entries = []
    for mask in H.universe.masks():
        value = H.table[mask]
        entry = {
            "set": list(SubsetMask(H.universe, mask).indices()),
            "value": json_value(value),
        }
        if value is not INF and value.denominator != 1:
            entry["decimal"] = decimal_string(value)
        entries.append(entry)
    return {"n": H.universe.size, "entries": entries}


def load_measure(obj, universe: Optional[GroundSet] = None, *, path="measure") -> AdditiveMeasure:
    if isinstance(obj, dict):
        masses = obj.get("masses")
        n = obj.get("n", len(masses) if isinstance(masses, list) else None)
        if not isinstance(masses, list):
            raise LoaderError(f'{path}: expected a "masses" array')
        if universe is None:
            universe = GroundSet(n if isinstance(n, int) else len(masses))
    else:
        masses = obj
        if not isinstance(masses, list):
            raise LoaderError(f"{path}: expected an array of masses")
        if universe is None:
            universe = GroundSet(len(masses))
    return AdditiveMeasure(
        universe,
        tuple(
            Fraction(_value_at(v, f"{path}[{i}]")) for i, v in enumerate(masses)
        ),
    )


def dump_measure(mu: AdditiveMeasure) -> dict:
    return {"n": mu.universe.size, "masses": [json_value(m) for m in mu.masses]}


def load_sequence(obj, *, path="sequence") -> FunctionSequence:
    if not isinstance(obj, dict):
        raise LoaderError(f"{path}: expected an object with terms and limit")
    terms_raw = obj.get("terms")
    if not isinstance(terms_raw, list) or not terms_raw:
        raise LoaderError(f"{path}.terms: expected a nonempty array of functions")
    first = load_function(terms_raw[0], path=f"{path}.terms[0]")
    universe = first.universe
    terms = [first] + [
        load_function(t, universe, path=f"{path}.terms[{i}]")
        for i, t in enumerate(terms_raw[1:], start=1)
    ]
    limit_raw = obj.get("limit")
    if limit_raw is None:
        raise LoaderError(f"{path}.limit: required")
    limit = load_function(limit_raw, universe, path=f"{path}.limit")
    schedule = []
    for i, pair in enumerate(obj.get("schedule", [])):
        ppath = f"{path}.schedule[{i}]"
        if not isinstance(pair, dict) or "eps" not in pair or "set" not in pair:
            raise LoaderError(f'{ppath}: expected an object with "eps" and "set"')
        eps = Fraction(_value_at(pair["eps"], f"{ppath}.eps"))
        schedule.append((eps, load_subset(pair["set"], universe, path=f"{ppath}.set")))
    return FunctionSequence(universe, tuple(terms), limit, tuple(schedule))


def dump_sequence(seq: FunctionSequence) -> dict:
    out = {
        "terms": [dump_function(t) for t in seq.terms],
        "limit": dump_function(seq.declared_limit),
    }
    if seq.schedule:
        out["schedule"] = [
            {"eps": json_value(eps), "set": dump_subset(subset)}
            for eps, subset in seq.schedule
        ]
    return out


def load_cells(obj, domain: DyadicDomain, *, path="cells") -> DyadicCellSet:
    if not isinstance(obj, list):
        raise LoaderError(f"{path}: expected an array of coordinate tuples")
    cells = []
    for i, coords in enumerate(obj):
        if not isinstance(coords, list) or len(coords) != domain.dimension:
            raise LoaderError(
                f"{path}[{i}]: expected {domain.dimension} coordinates"
            )
        for c in coords:
            if not isinstance(c, int) or isinstance(c, bool) or not 0 <= c < domain.side_count:
                raise LoaderError(f"{path}[{i}]: coordinate {c!r} out of range")
        cells.append(tuple(coords))
    return DyadicCellSet(domain, frozenset(cells))


def dump_cells(cell_set: DyadicCellSet) -> list:
    return [list(c) for c in sorted(cell_set.cells)]


def dump_algebraic(value: AlgebraicValue) -> dict:
    out: dict = {"decimal": f"{value.as_float():.15g}"}
    if value.is_rational:
        out["rational"] = json_value(value.as_fraction())
    else:
        out["root_order"] = value.order
        out["coeffs"] = [json_value(c) for c in value.coeffs]
    return out


def load_algebraic(obj, *, path="value") -> AlgebraicValue:
    if not isinstance(obj, dict):
        raise LoaderError(f"{path}: expected an object")
    if "rational" in obj:
        return AlgebraicValue.from_rational(
            Fraction(_value_at(obj["rational"], f"{path}.rational")), 1
        )
    order = obj.get("root_order")
    coeffs = obj.get("coeffs")
    if not isinstance(order, int) or not isinstance(coeffs, list) or len(coeffs) != order:
        raise LoaderError(f"{path}: need root_order and a matching coeffs array")
    return AlgebraicValue(
        order,
        tuple(
            Fraction(
                _value_at(c, f"{path}.coeffs[{i}]", allow_negative=True)
            )
            for i, c in enumerate(coeffs)
        ),
    )


def dump_cover(solution: CoverSolution) -> dict:
    return {
        "dimension": solution.domain.dimension,
        "depth": solution.domain.depth,
        "beta": json_value(solution.beta),
        "value": dump_algebraic(solution.value),
        "exact": solution.exact,
        "cubes": [
            {"level": cube.level, "coords": list(cube.coords)} for cube in solution.cubes
        ],
    }


def load_cover(obj, *, path="cover") -> CoverSolution:
    if not isinstance(obj, dict):
        raise LoaderError(f"{path}: expected an object")
    for key in ("dimension", "depth", "beta", "value", "cubes"):
        if key not in obj:
            raise LoaderError(f"{path}: missing {key!r}")
    domain = DyadicDomain(obj["dimension"], obj["depth"])
    beta = Fraction(_value_at(obj["beta"], f"{path}.beta"))
    value = load_algebraic(obj["value"], path=f"{path}.value")
    if value.order != beta.denominator:
        # rational payloads load at order 1; lift to the beta field
        if value.is_rational:
            value = AlgebraicValue.from_rational(value.as_fraction(), beta.denominator)
        else:
            raise LoaderError(f"{path}: value order disagrees with beta")
    cubes = []
    for i, cube in enumerate(obj["cubes"]):
        cpath = f"{path}.cubes[{i}]"
        if not isinstance(cube, dict) or "level" not in cube or "coords" not in cube:
            raise LoaderError(f"{cpath}: expected level and coords")
        cubes.append(DyadicCube(cube["level"], tuple(cube["coords"])))
    return CoverSolution(value=value, cubes=tuple(cubes), beta=beta, domain=domain)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
