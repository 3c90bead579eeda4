"""JSON system files, control files and report serialization."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .criteria import ControlSystem, ControllabilityReport, Tolerances
from .functionals import FunctionalFamily, ValueSet
from .simulator import PiecewiseConstantControl

SCHEMA_PATH = Path(__file__).with_name("report.schema.json")
DEFAULT_GRID_POINTS = 33


class SystemFileError(ValueError):
    """A system, control or state file failed validation."""


def _matrix(obj, field: str, n: int) -> np.ndarray:
    if not isinstance(obj, dict) or "re" not in obj:
        raise SystemFileError(f"{field}: expected an object with 're' (and optional 'im') arrays")
    try:
        re = np.array(obj["re"], dtype=float)
        im = np.array(obj.get("im", np.zeros((n, n))), dtype=float)
    except (TypeError, ValueError) as exc:
        raise SystemFileError(f"{field}: arrays must be rectangular numeric ({exc})") from None
    for part, arr in (("re", re), ("im", im)):
        if arr.shape != (n, n):
            raise SystemFileError(f"{field}.{part}: expected shape ({n}, {n}), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise SystemFileError(f"{field}.{part}: entries must be finite")
    return re + 1j * im


def _value_set(obj) -> ValueSet:
    try:
        if isinstance(obj, list):
            return ValueSet(tuple(float(x) for x in obj))
        if isinstance(obj, dict):
            return ValueSet.interval(float(obj["min"]), float(obj["max"]), int(obj.get("points", DEFAULT_GRID_POINTS)))
    except (KeyError, TypeError, ValueError) as exc:
        raise SystemFileError(f"value_set: {exc}") from None
    raise SystemFileError("value_set: expected a list of reals or {min, max, points}")


def _functionals(obj, v: ValueSet) -> FunctionalFamily:
    if not isinstance(obj, dict) or "type" not in obj:
        raise SystemFileError("functionals: expected an object with a 'type' key")
    try:
        if obj["type"] == "monomial":
            degree = obj["degree"]
            if not isinstance(degree, int) or isinstance(degree, bool):
                raise SystemFileError("functionals.degree: expected an integer")
            return FunctionalFamily.monomial(degree)
        if obj["type"] == "sampled":
            return FunctionalFamily.sampled(obj["values"], v)
    except KeyError as exc:
        raise SystemFileError(f"functionals: missing key {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, SystemFileError):
            raise
        raise SystemFileError(f"functionals: {exc}") from None
    raise SystemFileError(f"functionals.type: unknown type {obj['type']!r}")


def tolerances_from(obj) -> Tolerances:
    if obj is None:
        return Tolerances()
    allowed = set(Tolerances.__dataclass_fields__)
    unknown = set(obj) - allowed
    if unknown:
        raise SystemFileError(f"tolerances: unknown keys {sorted(unknown)}")
    return Tolerances(**obj)


def system_from_dict(doc: dict) -> tuple[ControlSystem, Tolerances]:
    if not isinstance(doc, dict):
        raise SystemFileError("system file must be a JSON object")
    for key in ("n", "h0", "mu", "functionals", "value_set"):
        if key not in doc:
            raise SystemFileError(f"missing required key {key!r}")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SystemFileError("n: expected a positive integer")
    h0 = _matrix(doc["h0"], "h0", n)
    if not isinstance(doc["mu"], list) or not doc["mu"]:
        raise SystemFileError("mu: expected a nonempty list of matrices")
    mus = [_matrix(m, f"mu[{k}]", n) for k, m in enumerate(doc["mu"])]
    v = _value_set(doc["value_set"])
    fam = _functionals(doc["functionals"], v)
    tol = tolerances_from(doc.get("tolerances"))
    try:
        sys = ControlSystem(h0, mus, fam, v, herm_tol=tol.herm)
    except ValueError as exc:
        raise SystemFileError(str(exc)) from None
    return sys, tol


def _complex_obj(m: np.ndarray) -> dict:
    return {"re": np.real(m).tolist(), "im": np.imag(m).tolist()}


def system_to_dict(sys: ControlSystem, tol: Tolerances | None = None) -> dict:
    if sys.fam.kind == "monomial" and sys.fam.powers == tuple(range(1, len(sys.fam) + 1)):
        fam = {"type": "monomial", "degree": len(sys.fam)}
    elif sys.fam.kind == "sampled":
        fam = {"type": "sampled", "values": sys.fam.table.tolist()}
    else:
        grid = np.array(sys.fam.matrix(sys.v)).T
        fam = {"type": "sampled", "values": grid.tolist()}
    doc = {
        "n": sys.n,
        "h0": _complex_obj(sys.h0),
        "mu": [_complex_obj(m) for m in sys.mus],
        "functionals": fam,
        "value_set": list(sys.v.points),
    }
    if tol is not None:
        doc["tolerances"] = {k: v for k, v in tol.__dict__.items()}
    return doc


def read_json(path) -> tuple[object, bytes]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise SystemFileError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(raw), raw
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SystemFileError(f"{path}: invalid JSON ({exc})") from None


def load_system_file(path):
    """Return ``(system, tolerances, sha256 hex digest of the file bytes)``."""
    doc, raw = read_json(path)
    sys, tol = system_from_dict(doc)
    return sys, tol, hashlib.sha256(raw).hexdigest()


def control_from_obj(obj) -> PiecewiseConstantControl:
    if not isinstance(obj, list):
        raise SystemFileError("control: expected a list of {duration, value} objects")
    segs = []
    for k, seg in enumerate(obj):
        if not isinstance(seg, dict) or set(seg) != {"duration", "value"}:
            raise SystemFileError(f"control[{k}]: expected exactly the keys 'duration' and 'value'")
        if not all(isinstance(seg[key], (int, float)) and not isinstance(seg[key], bool) for key in seg):
            raise SystemFileError(f"control[{k}]: duration and value must be numbers")
        segs.append((seg["duration"], seg["value"]))
    try:
        return PiecewiseConstantControl(tuple(segs))
    except ValueError as exc:
        raise SystemFileError(f"control: {exc}") from None


def control_to_obj(ctrl: PiecewiseConstantControl) -> list:
    return [{"duration": dt, "value": x} for dt, x in ctrl.segments]


def parse_state(text: str) -> np.ndarray:
    """Comma-separated amplitudes, each anything ``complex()`` accepts (``0.6``, ``0.8j``, ``1+2j``)."""
    try:
        return np.array([complex(tok.strip().replace(" ", "")) for tok in text.split(",")])
    except ValueError:
        raise SystemFileError(f"--state: cannot parse {text!r} as comma-separated complex numbers") from None


def report_document(report: ControllabilityReport, **meta) -> dict:
    from . import __version__

    doc = report.to_dict()
    doc.update(tool="qlie", tool_version=__version__)
    doc.update(meta)
    return doc


def load_schema() -> dict:
    return json.loads(SCHEMA_PATH.read_text())


def write_json(path, doc) -> None:
    # json emits floats with repr(), the shortest string that round-trips exactly
    Path(path).write_text(json.dumps(doc, indent=2, allow_nan=False) + "\n")
