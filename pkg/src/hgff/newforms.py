"""Ingestion of newform coefficient data with complex embeddings.

Data files are JSON of the shape

    { "label": "27.3.b.b", "weight": 3, "level": 27, "char": "kronecker:-3",
      "field_poly": [1, 0, 1], "an": [["1", "0"], ["0", "3"], ...],
      "embedding_precision_bits": 128 }

where field_poly lists integer coefficients constant term first, and an[i]
holds the exact rational coordinates of a(i+1) over the power basis of the
coefficient field.  Embeddings are the complex roots of field_poly, sorted
by (real part, imaginary part) so reports are deterministic.

Files live under HGFF_DATA_DIR (default ./data, falling back to the data
directory bundled with the repository).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from mpmath import mp, mpf

from .cyclotomic import ComplexValue, _inflate, complex_zero
from .errors import DataFormatError, FetchError, IndexOutOfRange, LabelNotFound, NotNormalized

_REQUIRED_KEYS = {"label", "weight", "level", "char", "field_poly", "an", "embedding_precision_bits"}


def data_dir() -> Path:
    env = os.environ.get("HGFF_DATA_DIR")
    if env:
        return Path(env)
    local = Path("data")
    if local.is_dir():
        return local
    return Path(__file__).resolve().parents[2] / "data"


@dataclass
class Newform:
    label: str
    weight: int
    level: int
    char: str
    field_poly: tuple[int, ...]
    an: list[tuple[Fraction, ...]]  # an[i] = coordinates of a(i+1)
    embedding_precision_bits: int
    meta: dict = field(default_factory=dict)
    _embeddings: list[ComplexValue] | None = None

    @property
    def degree(self) -> int:
        return len(self.field_poly) - 1

    def a(self, n: int) -> tuple[Fraction, ...]:
        if n < 1 or n > len(self.an):
            raise IndexOutOfRange(f"a({n}) outside stored range 1..{len(self.an)} for {self.label}")
        return self.an[n - 1]

    def a_rational(self, n: int) -> Fraction:
        coords = self.a(n)
        if any(coords[1:]):
            raise DataFormatError(f"a({n}) of {self.label} is not rational")
        return coords[0]

    @property
    def embeddings(self) -> list[ComplexValue]:
        """Complex roots of field_poly, sorted by (re, im)."""
        if self._embeddings is None:
            prec = self.embedding_precision_bits
            if self.degree == 1:
                # root of c0 + c1 x
                with mp.workprec(prec + 12):
                    r = mpf(-self.field_poly[0]) / self.field_poly[1]
                self._embeddings = [ComplexValue(r, mpf(0), 2.0 ** (4 - prec), prec)]
            else:
                with mp.workprec(prec + 12):
                    coeffs = [mpf(c) for c in reversed(self.field_poly)]
                    roots, err = mp.polyroots(coeffs, maxsteps=200, extraprec=80, error=True)
                    bound = _inflate(max(float(err), 2.0 ** (4 - prec)))
                    vals = [ComplexValue(r.real, r.imag, bound, prec) for r in roots]
                vals.sort(key=lambda z: (float(z.re), float(z.im)))
                self._embeddings = vals
        return self._embeddings


def coeff_embedded(f: Newform, n: int, e: int) -> ComplexValue:
    """a(n) under the e-th embedding, with propagated error."""
    roots = f.embeddings
    if e < 0 or e >= len(roots):
        raise IndexOutOfRange(f"embedding {e} outside 0..{len(roots) - 1}")
    coords = f.a(n)
    prec = f.embedding_precision_bits
    root = roots[e]
    out = complex_zero(prec)
    power = ComplexValue.exact(1, prec)
    for j, c in enumerate(coords):
        if j:
            power = power * root
        if c:
            out = out + power * ComplexValue.exact(c, prec)
    return out


def _parse_coord(v) -> Fraction:
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, int):
        return Fraction(v)
    raise DataFormatError(f"coefficient entry {v!r} must be an int or 'num/den' string")


def parse_newform(payload: dict, label_hint: str | None = None) -> Newform:
    if not isinstance(payload, dict):
        raise DataFormatError("newform payload must be a JSON object")
    if "data" in payload and _REQUIRED_KEYS - set(payload):
        payload = payload["data"]
    missing = _REQUIRED_KEYS - set(payload)
    if missing:
        raise DataFormatError(f"newform record missing keys: {sorted(missing)}")
    try:
        field_poly = tuple(int(c) for c in payload["field_poly"])
        degree = len(field_poly) - 1
        if degree < 1:
            raise DataFormatError("field_poly must have positive degree")
        an = []
        for i, vec in enumerate(payload["an"]):
            if len(vec) != degree:
                raise DataFormatError(
                    f"coefficient vector for a({i + 1}) has length {len(vec)}, expected {degree}"
                )
            an.append(tuple(_parse_coord(v) for v in vec))
        form = Newform(
            label=str(payload["label"]),
            weight=int(payload["weight"]),
            level=int(payload["level"]),
            char=str(payload["char"]),
            field_poly=field_poly,
            an=an,
            embedding_precision_bits=int(payload["embedding_precision_bits"]),
            meta=dict(payload.get("meta", {})),
        )
    except DataFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"malformed newform record: {exc}") from exc
    if label_hint and form.label != label_hint:
        raise DataFormatError(f"label mismatch: file says {form.label}, expected {label_hint}")
    if not form.an:
        raise DataFormatError("empty coefficient list")
    if form.an[0] != (Fraction(1),) + (Fraction(0),) * (degree - 1):
        raise NotNormalized(f"{form.label}: a(1) != 1")
    return form


def load_newform(source) -> Newform:
    """Load from a path, an open stream, or an already-parsed dict."""
    if isinstance(source, dict):
        return parse_newform(source)
    if hasattr(source, "read"):
        try:
            payload = json.load(source)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"invalid JSON: {exc}") from exc
        return parse_newform(payload)
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"invalid JSON in {path}: {exc}") from exc
    return parse_newform(payload, label_hint=path.stem)


def load_label(label: str, directory: Path | None = None) -> Newform:
    d = directory or data_dir()
    path = d / f"{label}.json"
    if not path.exists():
        raise LabelNotFound(f"no data file for {label} under {d}")
    return load_newform(path)


def fetch_newform(label: str, endpoint: str, directory: Path | None = None) -> Path:
    """Fetch one label from an LMFDB-compatible endpoint and store it locally.

    The endpoint serves {endpoint}/{label}.json; the response is validated
    against the schema before anything is written.
    """
    import urllib.error
    import urllib.request

    url = f"{endpoint.rstrip('/')}/{label}.json"
    try:
        with urllib.request.urlopen(url, timeout=30) as resp:
            body = resp.read()
    except urllib.error.HTTPError as exc:
        if exc.code == 404:
            raise LabelNotFound(f"{label} not known to {endpoint}") from exc
        raise FetchError(f"HTTP {exc.code} fetching {url}") from exc
    except (urllib.error.URLError, OSError) as exc:
        raise FetchError(f"network failure fetching {url}: {exc}") from exc
    try:
        payload = json.loads(body)
    except json.JSONDecodeError as exc:
        raise FetchError(f"endpoint returned invalid JSON for {label}") from exc
    form = parse_newform(payload, label_hint=label)
    d = directory or data_dir()
    d.mkdir(parents=True, exist_ok=True)
    out = d / f"{label}.json"
    out.write_text(json.dumps(payload, indent=1, sort_keys=True))
    return out


def save_newform_payload(payload: dict, directory: Path | None = None) -> Path:
    """Validate and write a generated newform record."""
    form = parse_newform(payload)
    d = directory or data_dir()
    d.mkdir(parents=True, exist_ok=True)
    out = d / f"{form.label}.json"
    out.write_text(json.dumps(payload, indent=1, sort_keys=True))
    return out
