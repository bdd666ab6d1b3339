"""Curve configurations on a foliated surface.

A :class:`CurveConfiguration` is a closed world: the finitely many curves
it lists, their pairwise intersection numbers, the foliation data carried
by each curve and a few global numbers of the surface.  Nefness and
negativity are only ever decided relative to the configured curves.

``K_X . C`` is not stored; it is derived by adjunction as
``2 p_a(C) - 2 - C^2``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from types import MappingProxyType
from typing import Any, Iterable, Iterator, Mapping

from .rational import as_fraction, render


class ConfigurationError(ValueError):
    """Malformed input: dangling ids, asymmetric matrix, bad field types."""


@dataclass(frozen=True)
class SingularityIncidence:
    point_id: str
    h_contrib: int
    cs_value: Fraction | None
    z_contrib: int | None = None
    reduced_nondegenerate: bool = True
    singular: bool = True


@dataclass(frozen=True)
class Curve:
    id: str
    self_int: int
    pa: int
    geom_genus: int
    invariant: bool
    kf_dot: int
    singularities: tuple[SingularityIncidence, ...] = ()
    delta_coeff: Fraction = Fraction(0)
    declared_kx_dot: int | None = None

    @property
    def kx_dot(self) -> int:
        return 2 * self.pa - 2 - self.self_int

    @property
    def tang(self) -> int:
        return self.kf_dot + self.self_int

    @property
    def z_total(self) -> int:
        # 2 - 2 p_a + K_F.C, the total GSV index of an invariant curve
        return 2 - 2 * self.pa + self.kf_dot

    @property
    def singular_points(self) -> tuple[SingularityIncidence, ...]:
        return tuple(s for s in self.singularities if s.singular)

    @property
    def smooth_rational(self) -> bool:
        return self.pa == 0 and self.geom_genus == 0


@dataclass(frozen=True)
class GlobalInvariants:
    kx_self: int
    chi_structure: int
    ambient_pseudoeffective_flag: bool = True
    kf_self: int | None = None
    kf_kx: int | None = None


@dataclass(frozen=True)
class AdjointParams:
    """The pair (Delta, epsilon) defining D = Delta + epsilon K_X."""

    epsilon: Fraction = Fraction(0)
    delta: Mapping[str, Fraction] = field(default_factory=dict)
    allow_invariant_delta: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "epsilon", as_fraction(self.epsilon))
        clean = {k: as_fraction(v) for k, v in sorted(self.delta.items()) if as_fraction(v) != 0}
        object.__setattr__(self, "delta", MappingProxyType(clean))

    def with_epsilon(self, epsilon: Fraction | int | str) -> "AdjointParams":
        return replace(self, epsilon=as_fraction(epsilon), delta=dict(self.delta))

    def delta_only(self) -> "AdjointParams":
        return self.with_epsilon(0)

    def __hash__(self) -> int:
        return hash((self.epsilon, tuple(self.delta.items()), self.allow_invariant_delta))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AdjointParams):
            return NotImplemented
        return (self.epsilon, dict(self.delta), self.allow_invariant_delta) == (
            other.epsilon,
            dict(other.delta),
            other.allow_invariant_delta,
        )


class QDivisor:
    """Sparse exact-rational combination of configured curves."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[str, Fraction | int] | Iterable[tuple[str, Fraction | int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[str, Fraction] = {}
        for key, value in items:
            acc[key] = acc.get(key, Fraction(0)) + Fraction(value)
        self._coeffs = {k: acc[k] for k in sorted(acc) if acc[k] != 0}

    @classmethod
    def curve(cls, cid: str, coeff: Fraction | int = 1) -> "QDivisor":
        return cls({cid: coeff})

    def __getitem__(self, cid: str) -> Fraction:
        return self._coeffs.get(cid, Fraction(0))

    def items(self):
        return self._coeffs.items()

    def __iter__(self) -> Iterator[str]:
        return iter(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(self._coeffs)

    def __add__(self, other: "QDivisor") -> "QDivisor":
        return QDivisor(list(self._coeffs.items()) + list(other._coeffs.items()))

    def __sub__(self, other: "QDivisor") -> "QDivisor":
        return self + (-other)

    def __neg__(self) -> "QDivisor":
        return QDivisor({k: -v for k, v in self._coeffs.items()})

    def __mul__(self, scalar: Fraction | int) -> "QDivisor":
        s = Fraction(scalar)
        return QDivisor({k: v * s for k, v in self._coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QDivisor):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(tuple(self._coeffs.items()))

    def is_effective(self) -> bool:
        return all(v >= 0 for v in self._coeffs.values())

    def floor_is_zero(self) -> bool:
        return all(0 <= v < 1 for v in self._coeffs.values())

    def to_json(self) -> dict[str, str]:
        return {k: render(v) for k, v in self._coeffs.items()}

    def __repr__(self) -> str:
        if not self._coeffs:
            return "QDivisor(0)"
        return "QDivisor(" + " + ".join(f"{render(v)}*{k}" for k, v in self._coeffs.items()) + ")"


ZERO = QDivisor()


class CurveConfiguration:
    """Immutable closed-world model of a surface."""

    def __init__(
        self,
        curves: Iterable[Curve],
        intersections: Mapping[tuple[str, str], int],
        globals_: GlobalInvariants,
        adjoint: AdjointParams | None = None,
        description: str = "",
    ):
        self._curves = tuple(curves)
        self._by_id = {c.id: c for c in self._curves}
        if len(self._by_id) != len(self._curves):
            seen: set[str] = set()
            dup = next(c.id for c in self._curves if c.id in seen or seen.add(c.id))
            raise ConfigurationError(f"duplicate curve id {dup!r}")
        inter: dict[tuple[str, str], int] = {}
        for (a, b), m in intersections.items():
            for cid in (a, b):
                if cid not in self._by_id:
                    raise ConfigurationError(f"intersection references unknown curve {cid!r}")
            if a == b:
                raise ConfigurationError(f"diagonal entry for {a!r} must come from self_int")
            if m < 0:
                raise ConfigurationError(f"negative intersection {a}.{b} = {m}")
            if (b, a) in intersections and intersections[(b, a)] != m:
                raise ConfigurationError(f"asymmetric intersection matrix at ({a}, {b})")
            if m:
                inter[(a, b)] = m
                inter[(b, a)] = m
        self._inter = inter
        self._nbrs: dict[str, dict[str, int]] = {c.id: {} for c in self._curves}
        for (a, b), m in inter.items():
            self._nbrs[a][b] = m
        self.globals = globals_
        self.adjoint = adjoint if adjoint is not None else AdjointParams()
        self.description = description

    @property
    def curves(self) -> tuple[Curve, ...]:
        return self._curves

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self._curves)

    def __contains__(self, cid: str) -> bool:
        return cid in self._by_id

    def curve(self, cid: str) -> Curve:
        try:
            return self._by_id[cid]
        except KeyError:
            raise KeyError(f"unknown curve id {cid!r}") from None

    def dot(self, a: str, b: str) -> int:
        if a == b:
            return self.curve(a).self_int
        self.curve(a), self.curve(b)
        return self._inter.get((a, b), 0)

    def neighbors(self, cid: str) -> Mapping[str, int]:
        self.curve(cid)
        return MappingProxyType(self._nbrs[cid])

    def gram(self, ids: Iterable[str]) -> list[list[int]]:
        ids = list(ids)
        return [[self.dot(a, b) for b in ids] for a in ids]

    def intersection_items(self) -> list[tuple[str, str, int]]:
        return sorted((a, b, m) for (a, b), m in self._inter.items() if a < b)

    def with_adjoint(self, adjoint: AdjointParams) -> "CurveConfiguration":
        return CurveConfiguration(
            self._curves, dict(self._inter), self.globals, adjoint, self.description
        )


# --- intersection functionals -------------------------------------------------


def intersection(config: CurveConfiguration, d1: QDivisor, d2: QDivisor) -> Fraction:
    total = Fraction(0)
    for a, x in d1.items():
        for b, y in d2.items():
            m = config.dot(a, b)
            if m:
                total += x * y * m
    return total


def dot_curve(config: CurveConfiguration, d: QDivisor, cid: str) -> Fraction:
    return intersection(config, d, QDivisor.curve(cid))


def delta_divisor(params: AdjointParams) -> QDivisor:
    return QDivisor(dict(params.delta))


def d_dot(config: CurveConfiguration, params: AdjointParams, cid: str) -> Fraction:
    """D . C for D = Delta + epsilon K_X."""
    c = config.curve(cid)
    return dot_curve(config, delta_divisor(params), cid) + params.epsilon * c.kx_dot


def adjoint_dot(config: CurveConfiguration, params: AdjointParams, cid: str) -> Fraction:
    """(K_F + Delta + epsilon K_X) . C."""
    return config.curve(cid).kf_dot + d_dot(config, params, cid)


def kx_dot_divisor(config: CurveConfiguration, d: QDivisor) -> Fraction:
    return sum((x * config.curve(cid).kx_dot for cid, x in d.items()), Fraction(0))


def kf_dot_divisor(config: CurveConfiguration, d: QDivisor) -> Fraction:
    return sum((x * config.curve(cid).kf_dot for cid, x in d.items()), Fraction(0))


# --- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Finding:
    code: str
    curve: str | None
    point: str | None
    detail: str

    def to_json(self) -> dict[str, Any]:
        return {"code": self.code, "curve": self.curve, "point": self.point, "detail": self.detail}


@dataclass
class ValidationReport:
    violations: list[Finding] = field(default_factory=list)
    warnings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict[str, Any]:
        return {
            "valid": self.ok,
            "violations": [v.to_json() for v in self.violations],
            "warnings": [w.to_json() for w in self.warnings],
        }


def validate_configuration(config: CurveConfiguration) -> ValidationReport:
    report = ValidationReport()
    bad = report.violations.append
    warn = report.warnings.append
    params = config.adjoint

    if not 0 <= params.epsilon <= 1:
        bad(Finding("epsilon-range", None, None, f"epsilon={render(params.epsilon)} outside [0,1]"))

    for c in config.curves:
        if c.pa < 0 or c.geom_genus < 0:
            bad(Finding("genus-negative", c.id, None, f"pa={c.pa}, g={c.geom_genus}"))
        if c.geom_genus > c.pa:
            bad(Finding("genus-order", c.id, None, f"g={c.geom_genus} exceeds pa={c.pa}"))
        if c.declared_kx_dot is not None and c.declared_kx_dot != c.kx_dot:
            bad(Finding("adjunction", c.id, None, f"declared K_X.C={c.declared_kx_dot}, adjunction gives {c.kx_dot}"))
        if not 0 <= c.delta_coeff <= 1:
            bad(Finding("delta-range", c.id, None, f"coefficient {render(c.delta_coeff)} outside [0,1]"))
        if params.delta.get(c.id, Fraction(0)) != c.delta_coeff:
            bad(Finding(
                "delta-mismatch", c.id, None,
                f"curve says {render(c.delta_coeff)}, adjoint map says {render(params.delta.get(c.id, 0))}",
            ))
        if c.invariant and c.delta_coeff > 0 and not params.allow_invariant_delta:
            bad(Finding("delta-invariant", c.id, None, "invariant curve carries a boundary coefficient"))

        for s in c.singularities:
            if s.h_contrib < 0:
                bad(Finding("h-negative", c.id, s.point_id, f"h={s.h_contrib}"))
            elif (s.h_contrib == 0) == s.singular:
                bad(Finding("h-singular-flag", c.id, s.point_id, f"h={s.h_contrib} but singular={s.singular}"))

        if not c.invariant:
            if c.tang < 0:
                bad(Finding("tang-negative", c.id, None, f"K_F.C + C^2 = {c.tang} < 0"))
            continue

        residual = verify_cln_residual(c)
        if residual != 0:
            bad(Finding(
                "cln-residual", c.id, None,
                f"sum h_p - (2 - 2g + K_F.C) = {residual}; incidences "
                + ", ".join(f"{s.point_id}:h={s.h_contrib}" for s in c.singularities),
            ))
        cs = verify_cs_residual(c)
        if cs is None:
            warn(Finding("cs-unrepresentable", c.id, None, "CS values missing; Camacho-Sad sum not checked"))
        elif cs != 0:
            bad(Finding("cs-residual", c.id, None, f"C^2 - sum CS = {render(cs)}"))
        z = verify_z_residual(c)
        if z is not None and z != 0:
            warn(Finding("z-residual", c.id, None, f"sum Z - (2 - 2p_a + K_F.C) = {z}"))
        if z is not None and c.smooth_rational and c.self_int <= -2 and c.kf_dot == 0:
            warn(Finding(
                "z-convention", c.id, None,
                "K_F.C = 0 forces total Z = 2; chain recognition uses K_F.C, not a literal Z = 0",
            ))

    delta = delta_divisor(params)
    for c in config.curves:
        if c.invariant and delta:
            dd = dot_curve(config, delta, c.id)
            if dd < 0:
                bad(Finding("delta-dot-invariant", c.id, None, f"Delta.C = {render(dd)} < 0"))

    _node_reciprocity(config, warn)
    return report


def _node_reciprocity(config: CurveConfiguration, warn) -> None:
    # at a reduced non-degenerate node the two CS indices are mutually inverse
    by_point: dict[str, list[tuple[str, SingularityIncidence]]] = {}
    for c in config.curves:
        if c.invariant:
            for s in c.singularities:
                by_point.setdefault(s.point_id, []).append((c.id, s))
    for pid, entries in sorted(by_point.items()):
        if len(entries) != 2:
            continue
        (a, sa), (b, sb) = entries
        if not (sa.reduced_nondegenerate and sb.reduced_nondegenerate):
            continue
        if sa.cs_value is None or sb.cs_value is None or sa.cs_value == 0:
            continue
        if sa.cs_value * sb.cs_value != 1:
            warn(Finding(
                "cs-reciprocity", a, pid,
                f"CS({a})*CS({b}) = {render(sa.cs_value * sb.cs_value)} at a shared node",
            ))


def verify_cln_residual(c: Curve) -> int:
    return sum(s.h_contrib for s in c.singularities) - (2 - 2 * c.geom_genus + c.kf_dot)


def verify_cs_residual(c: Curve) -> Fraction | None:
    values = [s.cs_value for s in c.singular_points]
    if any(v is None for v in values):
        return None
    return c.self_int - sum(values, Fraction(0))


def verify_z_residual(c: Curve) -> int | None:
    zs = [s.z_contrib for s in c.singular_points]
    if not zs or any(z is None for z in zs):
        return None
    return sum(zs) - c.z_total


# --- document input -----------------------------------------------------------


def _require(obj: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in obj:
        raise ConfigurationError(f"{where}: missing field {key!r}")
    return obj[key]


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{where}: expected integer, got {value!r}")
    return value


def _bool(value: Any, where: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigurationError(f"{where}: expected boolean, got {value!r}")
    return value


def _frac(value: Any, where: str) -> Fraction:
    try:
        return as_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"{where}: {exc}") from None


def _parse_incidence(raw: Mapping[str, Any], where: str) -> SingularityIncidence:
    if not isinstance(raw, Mapping):
        raise ConfigurationError(f"{where}: incidence must be an object")
    h = _int(_require(raw, "h_contrib", where), f"{where}.h_contrib")
    cs_raw = raw.get("cs_value")
    z = raw.get("z_contrib")
    return SingularityIncidence(
        point_id=str(_require(raw, "point_id", where)),
        h_contrib=h,
        cs_value=None if cs_raw is None else _frac(cs_raw, f"{where}.cs_value"),
        z_contrib=None if z is None else _int(z, f"{where}.z_contrib"),
        reduced_nondegenerate=_bool(raw.get("reduced_nondegenerate", True), f"{where}.reduced_nondegenerate"),
        singular=_bool(raw.get("singular", True), f"{where}.singular"),
    )


def parse_configuration(doc: Mapping[str, Any]) -> CurveConfiguration:
    if not isinstance(doc, Mapping):
        raise ConfigurationError("configuration document must be an object")
    raw_curves = _require(doc, "curves", "document")
    if not isinstance(raw_curves, list):
        raise ConfigurationError("curves must be a list")

    adjoint_raw = doc.get("adjoint", {}) or {}
    delta_raw = adjoint_raw.get("delta", {}) or {}
    if not isinstance(delta_raw, Mapping):
        raise ConfigurationError("adjoint.delta must be an object")
    delta_map = {str(k): _frac(v, f"adjoint.delta[{k}]") for k, v in delta_raw.items()}

    curves = []
    for idx, rc in enumerate(raw_curves):
        where = f"curves[{idx}]"
        if not isinstance(rc, Mapping):
            raise ConfigurationError(f"{where}: curve must be an object")
        cid = str(_require(rc, "id", where))
        where = f"curve {cid!r}"
        incid = rc.get("singularities", []) or []
        if not isinstance(incid, list):
            raise ConfigurationError(f"{where}: singularities must be a list")
        if "delta_coeff" in rc:
            delta_coeff = _frac(rc["delta_coeff"], f"{where}.delta_coeff")
        else:
            delta_coeff = delta_map.get(cid, Fraction(0))
        kx = rc.get("kx_dot")
        curves.append(Curve(
            id=cid,
            self_int=_int(_require(rc, "self_int", where), f"{where}.self_int"),
            pa=_int(rc.get("pa", 0), f"{where}.pa"),
            geom_genus=_int(rc.get("geom_genus", rc.get("pa", 0)), f"{where}.geom_genus"),
            invariant=_bool(_require(rc, "invariant", where), f"{where}.invariant"),
            kf_dot=_int(_require(rc, "kf_dot", where), f"{where}.kf_dot"),
            singularities=tuple(_parse_incidence(s, f"{where}.singularities[{j}]") for j, s in enumerate(incid)),
            delta_coeff=delta_coeff,
            declared_kx_dot=None if kx is None else _int(kx, f"{where}.kx_dot"),
        ))
    ids = {c.id for c in curves}
    for cid in delta_map:
        if cid not in ids:
            raise ConfigurationError(f"adjoint.delta references unknown curve {cid!r}")
    # curves may carry their coefficient without repeating it in the adjoint map
    for c in curves:
        if c.id not in delta_map and c.delta_coeff != 0:
            delta_map[c.id] = c.delta_coeff

    inter: dict[tuple[str, str], int] = {}
    for j, triple in enumerate(doc.get("intersections", []) or []):
        if not isinstance(triple, list) or len(triple) != 3:
            raise ConfigurationError(f"intersections[{j}]: expected [id, id, multiplicity]")
        a, b, m = str(triple[0]), str(triple[1]), _int(triple[2], f"intersections[{j}]")
        if (a, b) in inter and inter[(a, b)] != m:
            raise ConfigurationError(f"asymmetric intersection matrix at ({a}, {b})")
        inter[(a, b)] = m

    g = _require(doc, "globals", "document")
    if not isinstance(g, Mapping):
        raise ConfigurationError("globals must be an object")
    amb = g.get("ambient_products", {}) or {}
    globals_ = GlobalInvariants(
        kx_self=_int(_require(g, "kx_self", "globals"), "globals.kx_self"),
        chi_structure=_int(_require(g, "chi_structure", "globals"), "globals.chi_structure"),
        ambient_pseudoeffective_flag=_bool(g.get("ambient_pseudoeffective_flag", True), "globals.ambient_pseudoeffective_flag"),
        kf_self=None if amb.get("kf_self") is None else _int(amb["kf_self"], "ambient_products.kf_self"),
        kf_kx=None if amb.get("kf_kx") is None else _int(amb["kf_kx"], "ambient_products.kf_kx"),
    )
    adjoint = AdjointParams(
        epsilon=_frac(adjoint_raw.get("epsilon", 0), "adjoint.epsilon"),
        delta=delta_map,
        allow_invariant_delta=_bool(adjoint_raw.get("allow_invariant_delta", False), "adjoint.allow_invariant_delta"),
    )
    return CurveConfiguration(curves, inter, globals_, adjoint, str(doc.get("description", "")))


def load_configuration(path: str | Path) -> CurveConfiguration:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON ({exc})") from None
    return parse_configuration(doc)
