"""Run configuration: a sectioned key-value file with rational-string vectors.

Example::

    [algebra]
    preset = Z2(eps=2, k=1)
    traces = tr1; tr2

    [inertia]
    alpha0 = 1, 0
    alpha1 = 1, 0
    zeta = 0, 0

    [domain]
    L = 40
    N = 256

    [time]
    dt = 1e-3
    t_end = 0.5
    scheme = ifrk4

    [initial]
    profile = sine
    variable = u
    k = 1
    amplitude = 1/2, 1/4
    offset = 0, 0

    [output]
    path = run.csv
    every = 10
    fields = false

An algebra definition file (``file = path`` instead of ``preset``) has an
``[algebra]`` section with ``dim``, ``unit``, ``trace`` and products
``e1*e2 = 0, 1``; missing products are zero and ``e_j*e_i`` defaults to
``e_i*e_j``.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .algebra import (
    AlgebraError,
    FrobeniusAlgebra,
    builtin_R,
    builtin_Z2,
    builtin_Zl,
    make_algebra,
    to_fraction,
)
from .euler import EulerEquation, InertiaSpec, build_euler_equation


class ConfigError(ValueError):
    pass


PROFILES = ("zero", "sine", "sech2", "file")
SCHEMES = ("rk4", "ifrk4")


def parse_vector(text: str) -> list[Fraction]:
    """``"1/2, -1, 0.25"`` -> Fractions (decimal strings are read exactly)."""
    text = text.strip().strip("[]()")
    if not text:
        raise ConfigError("empty vector")
    try:
        return [Fraction(p.strip()) for p in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational vector {text!r}: {exc}") from None


def _split_args(text: str) -> list[str]:
    """Split on commas outside square brackets."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur.strip())
    return parts


_PRESET = re.compile(r"^\s*([A-Za-z][A-Za-z0-9]*)\s*(?:\((.*)\))?\s*$")


def parse_preset(text: str) -> FrobeniusAlgebra:
    """Presets: ``R``, ``Z2(eps, k)``, ``Z2(eps=-1, k=2)``, ``Zl(l)``, ``Zl(3, top)``, ``Zl(2, trace=[1,0])``.

    Raises ConfigError for unknown names and AlgebraError (e.g. DegenerateTrace)
    for invalid algebras.
    """
    match = _PRESET.match(text)
    if not match:
        raise ConfigError(f"cannot parse algebra preset {text!r}")
    name, argtext = match.group(1), match.group(2) or ""
    positional, keyword = [], {}
    for arg in _split_args(argtext):
        if "=" in arg:
            key, val = arg.split("=", 1)
            keyword[key.strip()] = val.strip()
        else:
            positional.append(arg)

    def take(key, idx, default=None):
        if key in keyword:
            return keyword.pop(key)
        if idx < len(positional):
            return positional[idx]
        if default is None:
            raise ConfigError(f"preset {name} is missing argument {key!r}")
        return default

    try:
        if name == "R":
            alg = builtin_R()
            npos = 0
        elif name == "Z2":
            eps = to_fraction(Fraction(take("eps", 0)))
            k = int(take("k", 1, "1"))
            alg = builtin_Z2(eps, k)
            npos = 2
        elif name == "Zl":
            l = int(take("l", 0))
            tr = take("trace", 1, "top")
            alg = builtin_Zl(l, tr if tr == "top" else parse_vector(tr))
            npos = 2
        else:
            raise ConfigError(f"unknown algebra preset {name!r}")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (ConfigError, AlgebraError)):
            raise
        raise ConfigError(f"bad arguments for preset {text!r}: {exc}") from None
    if keyword or len(positional) > npos:
        raise ConfigError(f"unexpected arguments in preset {text!r}")
    return alg


def load_algebra_file(path: Path) -> FrobeniusAlgebra:
    cp = configparser.ConfigParser()
    cp.optionxform = str
    if not cp.read(path):
        raise ConfigError(f"cannot read algebra file {path}")
    if "algebra" not in cp:
        raise ConfigError(f"{path}: missing [algebra] section")
    sec = cp["algebra"]
    try:
        dim = int(sec["dim"])
        unit = parse_vector(sec["unit"])
        trace = parse_vector(sec["trace"])
    except KeyError as exc:
        raise ConfigError(f"{path}: missing key {exc}") from None
    C = np.full((dim, dim, dim), Fraction(0), dtype=object)
    given = set()
    for key, val in sec.items():
        m = re.fullmatch(r"e(\d+)\*e(\d+)", key.replace(" ", ""))
        if not m:
            continue
        i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
        if not (0 <= i < dim and 0 <= j < dim):
            raise ConfigError(f"{path}: product {key} outside dimension {dim}")
        vec = parse_vector(val)
        if len(vec) != dim:
            raise ConfigError(f"{path}: product {key} has {len(vec)} coordinates, expected {dim}")
        C[i, j] = vec
        given.add((i, j))
    for i, j in list(given):
        if (j, i) not in given:
            C[j, i] = C[i, j]
    return make_algebra(
        dim, C, unit, trace, exact=True, name=sec.get("name", Path(path).stem), trace_name=sec.get("trace_name", "tr")
    )


@dataclass
class InitialSpec:
    profile: str = "zero"
    variable: str = "u"
    k: int = 1
    amplitude: list = field(default_factory=list)
    offset: list = field(default_factory=list)
    c: float = 1.0
    x0: float = 0.0
    component: int = 1
    path: Path | None = None

    def values(self, N: int, L: float, dim: int) -> np.ndarray:
        x = np.arange(N) * (L / N)
        out = np.zeros((N, dim))
        if self.profile == "zero":
            pass
        elif self.profile == "sine":
            amp = self.amplitude or [0.0] * dim
            off = self.offset or [0.0] * dim
            for j in range(dim):
                out[:, j] = float(amp[j]) * np.sin(2 * np.pi * self.k * x / L) + float(off[j])
        elif self.profile == "sech2":
            z = (x - self.x0 + L / 2) % L - L / 2
            out[:, self.component - 1] = self.c / np.cosh(np.sqrt(self.c) * z / 2) ** 2
        elif self.profile == "file":
            out = read_field_csv(self.path, N, dim)
        return out


def read_field_csv(path: Path, N: int, dim: int) -> np.ndarray:
    """Read the field-dump format: ``#`` comment lines, a header ``x,<components>``, then rows."""
    try:
        lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.startswith("#")]
        data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)
    except (OSError, ValueError, IndexError) as exc:
        raise ConfigError(f"cannot read initial data file {path}: {exc}") from None
    if data.shape != (N, dim + 1):
        raise ConfigError(f"initial data file {path} has shape {data.shape}, expected {(N, dim + 1)} (x plus components)")
    return data[:, 1:]


@dataclass
class RunSettings:
    """Parsed configuration file."""

    algebra: FrobeniusAlgebra
    traces: list
    inertia: list
    zeta: list
    L: float | None = None
    N: int | None = None
    dt: float | None = None
    t_end: float | None = None
    scheme: str | None = None
    initial: InitialSpec = field(default_factory=InitialSpec)
    output_path: Path | None = None
    every: int = 1
    fields: bool = False
    source: Path | None = None

    def equation(self) -> EulerEquation:
        alg = self.algebra
        inertia = InertiaSpec(tuple(alg.element(a) for a in self.inertia))
        return build_euler_equation(alg, inertia, alg.element(self.zeta))

    def require_simulation(self) -> None:
        missing = [k for k in ("L", "N", "dt", "t_end") if getattr(self, k) is None]
        if missing:
            raise ConfigError(f"simulation needs {', '.join(missing)}")


def _trace_choices(sec, alg: FrobeniusAlgebra) -> list[FrobeniusAlgebra]:
    text = sec.get("traces", "").strip()
    if not text:
        return [alg]
    out = []
    for entry in (e.strip() for e in text.split(";") if e.strip()):
        m = re.fullmatch(r"tr([12])", entry)
        if m and alg.name.startswith("Z2("):
            eps = Fraction(alg.name[3:-1])
            out.append(builtin_Z2(eps, int(m.group(1))))
        elif entry == alg.trace_name:
            out.append(alg)
        elif entry == "top":
            vec = [0] * alg.dim
            vec[-1] = 1
            out.append(alg.with_trace(vec, "top"))
        else:
            vec = parse_vector(entry)
            if len(vec) != alg.dim:
                raise ConfigError(f"trace {entry!r} has {len(vec)} coordinates, expected {alg.dim}")
            out.append(alg.with_trace(vec, "tr[" + ",".join(str(v) for v in vec) + "]"))
    names = [a.trace_name for a in out]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate trace choices {names}")
    return out


def _positive(sec, key, cast):
    if key not in sec:
        return None
    try:
        value = cast(sec[key])
    except ValueError:
        raise ConfigError(f"[{sec.name}] {key} = {sec[key]!r} is not a number") from None
    if value <= 0:
        raise ConfigError(f"[{sec.name}] {key} must be positive, got {sec[key]}")
    return value


def _vec(text, dim, what):
    vec = parse_vector(text)
    if len(vec) != dim:
        raise ConfigError(f"{what} has {len(vec)} components, expected {dim}")
    return vec


def load_config(path) -> RunSettings:
    """Parse a run configuration; raises ConfigError or AlgebraError on invalid input."""
    path = Path(path)
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    try:
        if not cp.read(path):
            raise ConfigError(f"cannot read config file {path}")
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if "algebra" not in cp:
        raise ConfigError(f"{path}: missing [algebra] section")
    asec = cp["algebra"]
    if "preset" in asec:
        alg = parse_preset(asec["preset"])
    elif "file" in asec:
        alg = load_algebra_file(path.parent / asec["file"])
    else:
        raise ConfigError("[algebra] needs 'preset' or 'file'")
    traces = _trace_choices(asec, alg)
    dim = alg.dim

    isec = cp["inertia"] if "inertia" in cp else {}
    inertia = []
    n = 0
    while f"alpha{n}" in isec:
        inertia.append(_vec(isec[f"alpha{n}"], dim, f"alpha{n}"))
        n += 1
    if not inertia:
        inertia = [list(alg.unit_coords)]
    zeta = _vec(isec["zeta"], dim, "zeta") if "zeta" in isec else [Fraction(0)] * dim

    settings = RunSettings(alg, traces, inertia, zeta, source=path)
    if "domain" in cp:
        settings.L = _positive(cp["domain"], "L", float)
        settings.N = _positive(cp["domain"], "N", int)
        if settings.N is not None and (settings.N < 16 or settings.N & (settings.N - 1)):
            raise ConfigError(f"N must be a power of two >= 16, got {settings.N}")
    if "time" in cp:
        tsec = cp["time"]
        settings.dt = _positive(tsec, "dt", float)
        settings.t_end = _positive(tsec, "t_end", float)
        scheme = tsec.get("scheme", "").strip() or None
        if scheme is not None and scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")
        settings.scheme = scheme
    if "initial" in cp:
        settings.initial = _initial(cp["initial"], dim, path.parent)
    if "output" in cp:
        osec = cp["output"]
        if osec.get("path"):
            settings.output_path = path.parent / osec["path"]
        settings.every = _positive(osec, "every", int) or 1
        try:
            settings.fields = osec.getboolean("fields", fallback=False)
        except ValueError:
            raise ConfigError("[output] fields must be a boolean") from None
    return settings


def _initial(sec, dim: int, base: Path) -> InitialSpec:
    spec = InitialSpec()
    spec.profile = sec.get("profile", "zero").strip()
    if spec.profile not in PROFILES:
        raise ConfigError(f"unknown initial profile {spec.profile!r}; choose from {PROFILES}")
    spec.variable = sec.get("variable", "u").strip()
    if spec.variable not in ("u", "m"):
        raise ConfigError("[initial] variable must be 'u' or 'm'")
    try:
        spec.k = int(sec.get("k", "1"))
        spec.c = float(sec.get("c", "1"))
        spec.x0 = float(sec.get("x0", "0"))
        spec.component = int(sec.get("component", "1"))
    except ValueError as exc:
        raise ConfigError(f"[initial] {exc}") from None
    if "amplitude" in sec:
        spec.amplitude = _vec(sec["amplitude"], dim, "amplitude")
    if "offset" in sec:
        spec.offset = _vec(sec["offset"], dim, "offset")
    if not 1 <= spec.component <= dim:
        raise ConfigError(f"[initial] component {spec.component} outside 1..{dim}")
    if spec.profile == "sech2" and spec.c <= 0:
        raise ConfigError("[initial] sech2 speed c must be positive")
    if spec.profile == "file":
        if "path" not in sec:
            raise ConfigError("[initial] profile = file needs a path")
        spec.path = base / sec["path"]
    return spec
