"""Plain-text formats: edge lists, signal and spectrum CSVs, filter specs.

Indices are 1-based in files and 0-based in memory. Floats are written with
``repr`` (shortest round-trip form), so a write/read cycle is lossless and
identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path

import jsonschema
import numpy as np

from .filters import IdealLowPass, PolynomialFilter, Rational, Tabulated
from .graph import Graph, GraphError, Representation

FORMAT_VERSION = "v1"


class ParseError(ValueError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class SchemaError(ParseError):
    pass


def fmt(x: float) -> str:
    x = float(x)
    if x == 0.0:
        return "0.0"  # drops the sign of -0.0
    return repr(x)


def _read_text(source) -> tuple[str, str | None]:
    if isinstance(source, (str, Path)) and Path(source).exists():
        return Path(source).read_text(), str(source)
    if hasattr(source, "read"):
        return source.read(), getattr(source, "name", None)
    raise FileNotFoundError(source)


# ---------------------------------------------------------------------------
# graphs

_GRAPH_HEADER = re.compile(r"#\s*(?:v1\s+)?nodes\s+(\d+)\s+directed\s+([01])\s*$")


def parse_graph(text: str, path=None) -> Graph:
    n_header = None
    directed = False
    edges = []
    max_idx = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _GRAPH_HEADER.match(line)
            if m:
                n_header = int(m.group(1))
                directed = m.group(2) == "1"
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'i j [w]', got {raw!r}", lineno, path)
        try:
            i, j = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ParseError(f"non-numeric field in {raw!r}", lineno, path) from None
        if i < 1 or j < 1:
            raise ParseError(f"node indices are 1-based, got {i} {j}", lineno, path)
        if i == j:
            raise ParseError(f"self-loop at node {i}", lineno, path)
        edges.append((lineno, i - 1, j - 1, w))
        max_idx = max(max_idx, i, j)
    n = n_header if n_header is not None else max(max_idx, 1)
    if max_idx > n:
        raise ParseError(f"node index {max_idx} exceeds declared node count {n}", None, path)
    seen = {}
    for lineno, i, j, w in edges:
        key = (i, j) if directed else (min(i, j), max(i, j))
        if key in seen:
            raise ParseError(f"duplicate edge {i + 1} {j + 1} (first on line {seen[key]})", lineno, path)
        seen[key] = lineno
    try:
        return Graph(n, tuple((i, j, w) for _, i, j, w in edges), directed)
    except GraphError as exc:
        raise ParseError(str(exc), None, path) from None


def read_graph(source) -> Graph:
    text, path = _read_text(source)
    return parse_graph(text, path)


def format_graph(g: Graph) -> str:
    lines = [f"# {FORMAT_VERSION} nodes {g.n_nodes} directed {int(g.directed)}"]
    for i, j, w in g.edges:
        lines.append(f"{i + 1} {j + 1} {fmt(w)}")
    return "\n".join(lines) + "\n"


def write_graph(g: Graph, path) -> None:
    Path(path).write_text(format_graph(g))


# ---------------------------------------------------------------------------
# signals

_SIGNAL_HEADER = re.compile(r"#\s*(?:v1\s+)?N=(\d+)\s+T=(\d+)(?:\s+complex=([01]))?\s*$")


def parse_signal(text: str, path=None) -> np.ndarray:
    dims = None
    is_complex = False
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _SIGNAL_HEADER.match(line)
            if m:
                dims = (int(m.group(1)), int(m.group(2)))
                is_complex = m.group(3) == "1"
            continue
        try:
            rows.append((lineno, [float(c) for c in line.split(",")]))
        except ValueError:
            raise ParseError(f"non-numeric cell in row {len(rows) + 1}", lineno, path) from None
    if not rows:
        raise ParseError("no data rows", None, path)
    width = len(rows[0][1])
    for k, (lineno, r) in enumerate(rows, start=1):
        if len(r) != width:
            raise ParseError(f"ragged row {k}: {len(r)} cells, expected {width}", lineno, path)
    X = np.array([r for _, r in rows], dtype=float)
    if is_complex:
        if width % 2:
            raise ParseError("complex signal needs paired re/im columns", None, path)
        X = X[:, 0::2] + 1j * X[:, 1::2]
    if dims is not None and X.shape != dims:
        raise ParseError(f"header declares {dims[0]}x{dims[1]}, data is {X.shape[0]}x{X.shape[1]}", None, path)
    return X


def read_signal(source) -> np.ndarray:
    text, path = _read_text(source)
    return parse_signal(text, path)


def format_signal(X) -> str:
    X = np.atleast_2d(np.asarray(X))
    N, T = X.shape
    cplx = np.iscomplexobj(X)
    lines = [f"# {FORMAT_VERSION} N={N} T={T}" + (" complex=1" if cplx else "")]
    for row in X:
        if cplx:
            cells = [c for z in row for c in (fmt(z.real), fmt(z.imag))]
        else:
            cells = [fmt(v) for v in row]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_signal(X, path) -> None:
    Path(path).write_text(format_signal(X))


# ---------------------------------------------------------------------------
# spectra

SPECTRUM_COLUMNS = "t,n,lambda_T_re,lambda_T_im,lambda_G,coef_re,coef_im"


def format_spectrum(Y, lam_T, lam_G) -> str:
    """One row per joint frequency, ``t`` outer and ``n`` inner, 1-based."""
    Y = np.asarray(Y)
    N, T = Y.shape
    lines = [f"# {FORMAT_VERSION} N={N} T={T}", SPECTRUM_COLUMNS]
    for t in range(T):
        lt = complex(lam_T[t])
        for n in range(N):
            z = complex(Y[n, t])
            lines.append(",".join([
                str(t + 1), str(n + 1), fmt(lt.real), fmt(lt.imag),
                fmt(np.real(lam_G[n])), fmt(z.real), fmt(z.imag),
            ]))
    return "\n".join(lines) + "\n"


def parse_spectrum(text: str, path=None) -> np.ndarray:
    entries = {}
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line != SPECTRUM_COLUMNS:
                raise ParseError(f"expected header {SPECTRUM_COLUMNS!r}", lineno, path)
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != 7:
            raise ParseError(f"expected 7 cells, got {len(parts)}", lineno, path)
        try:
            t, n = int(parts[0]), int(parts[1])
            re_, im_ = float(parts[5]), float(parts[6])
        except ValueError:
            raise ParseError("non-numeric cell", lineno, path) from None
        entries[(n - 1, t - 1)] = complex(re_, im_)
    if not entries:
        raise ParseError("no spectrum rows", None, path)
    N = 1 + max(k[0] for k in entries)
    T = 1 + max(k[1] for k in entries)
    if len(entries) != N * T or min(min(k) for k in entries) < 0:
        raise ParseError(f"spectrum does not cover a full {N}x{T} grid", None, path)
    Y = np.zeros((N, T), dtype=complex)
    for (n, t), z in entries.items():
        Y[n, t] = z
    return Y


def read_spectrum(source) -> np.ndarray:
    text, path = _read_text(source)
    return parse_spectrum(text, path)


# ---------------------------------------------------------------------------
# filter specs

_REPR_NAMES = ["laplacian", "normalized", "adjacency"]

FILTER_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "type": {"const": "polynomial"},
                "version": {"const": FORMAT_VERSION},
                "K": {"type": "integer", "minimum": 0},
                "L": {"type": "integer", "minimum": 0},
                "coeffs": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
                "representation": {"enum": _REPR_NAMES},
            },
            "required": ["type", "K", "L", "coeffs", "representation"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "ideal_lowpass"},
                "version": {"const": FORMAT_VERSION},
                "angle_cut": {"type": "number"},
                "graph_cut": {"type": "number"},
            },
            "required": ["type"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "rational"},
                "version": {"const": FORMAT_VERSION},
                "f": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                "g": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                "symmetrize_time": {"type": "boolean"},
            },
            "required": ["type", "f", "g"],
            "additionalProperties": False,
        },
    ]
}


def _pick_branch(doc):
    kinds = {"polynomial": 0, "ideal_lowpass": 1, "rational": 2}
    if isinstance(doc, dict) and doc.get("type") in kinds:
        return FILTER_SCHEMA["oneOf"][kinds[doc["type"]]]
    return {"type": "object", "properties": {"type": {"enum": list(kinds)}}, "required": ["type"]}


def filter_from_dict(doc, path=None):
    """Validate a filter spec and build a :class:`PolynomialFilter` or response."""
    try:
        # validate against the branch named by "type" for precise error paths
        jsonschema.validate(doc, _pick_branch(doc))
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"{exc.json_path}: {exc.message}", None, path) from None
    kind = doc["type"]
    if kind == "polynomial":
        c = np.array(doc["coeffs"], dtype=float)
        if c.ndim != 2 or c.shape != (doc["K"] + 1, doc["L"] + 1):
            raise SchemaError(
                f"$.coeffs: expected a {doc['K'] + 1}x{doc['L'] + 1} matrix", None, path
            )
        if not np.all(np.isfinite(c)):
            raise SchemaError("$.coeffs: entries must be finite", None, path)
        return PolynomialFilter(c, doc["representation"])
    if kind == "ideal_lowpass":
        return IdealLowPass(float(doc.get("angle_cut", math.pi)), float(doc.get("graph_cut", 1.0)))
    return Rational(doc["f"], doc["g"], bool(doc.get("symmetrize_time", True)))


def filter_to_dict(obj) -> dict:
    if isinstance(obj, PolynomialFilter):
        return {
            "type": "polynomial",
            "version": FORMAT_VERSION,
            "K": obj.K,
            "L": obj.L,
            "coeffs": [[float(v) for v in row] for row in obj.coeffs],
            "representation": obj.representation.value,
        }
    if isinstance(obj, IdealLowPass):
        return {"type": "ideal_lowpass", "version": FORMAT_VERSION,
                "angle_cut": float(obj.angle_cut), "graph_cut": float(obj.graph_cut)}
    if isinstance(obj, Rational):
        return {"type": "rational", "version": FORMAT_VERSION,
                "f": [float(v) for v in obj.f.coef], "g": [float(v) for v in obj.g.coef],
                "symmetrize_time": bool(obj.symmetrize_time)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def format_filter_spec(obj) -> str:
    return json.dumps(filter_to_dict(obj), indent=2, sort_keys=True) + "\n"


def read_filter_spec(source):
    text, path = _read_text(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, path) from None
    return filter_from_dict(doc, path)


def write_filter_spec(obj, path) -> None:
    Path(path).write_text(format_filter_spec(obj))


# ---------------------------------------------------------------------------
# tabulated responses and generic tables

TABULATED_COLUMNS = "lambda_T_re,lambda_T_im,lambda_G,h_re,h_im"


def read_tabulated(source) -> Tabulated:
    text, path = _read_text(source)
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line == TABULATED_COLUMNS:
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise ParseError(f"expected 5 cells ({TABULATED_COLUMNS})", lineno, path)
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise ParseError("non-numeric cell", lineno, path) from None
    if not rows:
        raise ParseError("no tabulated rows", None, path)
    a = np.array(rows)
    return Tabulated(a[:, 0] + 1j * a[:, 1], a[:, 2], a[:, 3] + 1j * a[:, 4])


def format_table(header: str, rows, comment: str | None = None) -> str:
    lines = [f"# {FORMAT_VERSION}" + (f" {comment}" if comment else ""), header]
    for row in rows:
        lines.append(",".join(fmt(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def representation_name(kind) -> str:
    return Representation.parse(kind).value
