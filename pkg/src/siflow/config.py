"""Line-oriented run configuration.

Format::

    # comment
    [model]
    parity = even            # or odd
    n = 3                    # optional; checked against the multiplicities
    roots = 1:2:+1 -2:1:-1   # value:multiplicity:sign, separated by spaces or commas
    mu = 1: 1, 1/2           # one line per multiple root: root: mu_1, ..., mu_r
    xi = -2: 3               # one line per simple root
    nu = 3/2                 # odd parity only
    domain = -2, 1           # optional; 'inf' / '-inf' for an open end

    [verify]
    checks = ode, recurrence, brackets

    [integrate]
    s0 = 0.5, 0.3, 0.1, 0.1  # a, y, Pi, P_y   (Pi = (a/x') P_a)
    T = 10
    h = 1e-3
    every = 10

    [classify]
    family = odd-minus
    mu = 3/10, 1/5
    nu = 2                   # even-r2 only: parameters at the second root
    simple = -4:1:1          # a_i:eps_i:xi_i (even families), repeatable
    a1 = 1
    a2 = 4

Every error is reported with the offending line number.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .families import GlobalExampleSpec
from .model import ModelSpec, SpecError

__all__ = [
    "ConfigError",
    "ConfigFile",
    "IntegrateSettings",
    "VERIFY_CHECKS",
    "parse_config",
    "load_config",
]

VERIFY_CHECKS = ("ode", "recurrence", "brackets")

_SECTIONS = {
    "model": {"parity", "n", "roots", "mu", "xi", "nu", "domain"},
    "verify": {"checks"},
    "integrate": {"s0", "t", "h", "every"},
    "classify": {"family", "mu", "nu", "simple", "a1", "a2"},
}
_REPEATABLE = {("model", "mu"), ("model", "xi"), ("classify", "simple")}


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class IntegrateSettings:
    s0: tuple[float, float, float, float]
    T: float = 10.0
    h: float = 1e-3
    every: int = 10


@dataclass
class ConfigFile:
    model: ModelSpec | None = None
    checks: tuple[str, ...] = VERIFY_CHECKS
    integrate: IntegrateSettings | None = None
    classify: GlobalExampleSpec | None = None
    source: str = ""
    lines: dict[str, int] = field(default_factory=dict)


def _fraction(text: str, line: int) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a rational number: {text.strip()!r}", line) from None


def _float(text: str, line: int) -> float:
    t = text.strip().lower()
    try:
        return float(Fraction(t)) if "/" in t else float(t)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a number: {text.strip()!r}", line) from None


def _int(text: str, line: int) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(f"not an integer: {text.strip()!r}", line) from None


def _items(text: str) -> list[str]:
    return [t for t in re.split(r"[\s,]+", text.strip()) if t]


def _sign(text: str, line: int) -> int:
    t = text.strip()
    if t in ("+", "+1", "1"):
        return 1
    if t in ("-", "-1"):
        return -1
    raise ConfigError(f"sign must be +1 or -1, got {t!r}", line)


def _root_triple(text: str, line: int) -> tuple[Fraction, int, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"root {text!r} must be value:multiplicity:sign", line)
    return _fraction(parts[0], line), _int(parts[1], line), _sign(parts[2], line)


def _keyed_list(text: str, line: int) -> tuple[Fraction, tuple[Fraction, ...]]:
    if ":" not in text:
        raise ConfigError(f"expected 'root: value, ...', got {text.strip()!r}", line)
    root, vals = text.split(":", 1)
    values = tuple(_fraction(v, line) for v in _items(vals))
    if not values:
        raise ConfigError("no values after ':'", line)
    return _fraction(root, line), values


def _bound(text: str, line: int) -> Fraction | None:
    t = text.strip().lower()
    if t in ("inf", "+inf", "-inf", "none"):
        return None
    return _fraction(t, line)


def _tokenize(text: str):
    """Yield (line number, section, key, value)."""
    section = None
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("["):
            if not body.endswith("]"):
                raise ConfigError(f"malformed section header {body!r}", no)
            section = body[1:-1].strip().lower()
            if section not in _SECTIONS:
                raise ConfigError(f"unknown section [{section}]", no)
            yield no, section, None, None
            continue
        if section is None:
            raise ConfigError("key outside of any section", no)
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {body!r}", no)
        key, value = (s.strip() for s in body.split("=", 1))
        key = key.lower()
        if key not in _SECTIONS[section]:
            raise ConfigError(f"unknown key {key!r} in [{section}]", no)
        yield no, section, key, value


def parse_config(text: str) -> ConfigFile:
    entries: dict[str, dict[str, list[tuple[int, str]]]] = {}
    header: dict[str, int] = {}
    for no, section, key, value in _tokenize(text):
        if key is None:
            if section in header:
                raise ConfigError(f"section [{section}] appears twice", no)
            header[section] = no
            entries[section] = {}
            continue
        bucket = entries[section].setdefault(key, [])
        if bucket and (section, key) not in _REPEATABLE:
            raise ConfigError(f"duplicate key {key!r} in [{section}]", no)
        bucket.append((no, value))

    cfg = ConfigFile(source=text, lines=header)
    if "model" in entries:
        cfg.model = _model(entries["model"], header["model"])
    if "verify" in entries:
        cfg.checks = _checks(entries["verify"])
    if "integrate" in entries:
        cfg.integrate = _integrate(entries["integrate"], header["integrate"])
    if "classify" in entries:
        cfg.classify = _classify(entries["classify"], header["classify"])
    return cfg


def load_config(path: str | Path) -> ConfigFile:
    return parse_config(Path(path).read_text())


def _one(e: dict, key: str):
    v = e.get(key)
    return v[0] if v else None


def _model(e: dict, hline: int) -> ModelSpec:
    roots_entry = _one(e, "roots")
    if roots_entry is None:
        raise ConfigError("[model] needs a 'roots' line", hline)
    rline, rtext = roots_entry
    roots = [_root_triple(t, rline) for t in _items(rtext)]
    if not roots:
        raise ConfigError("no roots given", rline)
    parity = "even"
    if (p := _one(e, "parity")) is not None:
        parity = p[1].strip().lower()
        if parity not in ("even", "odd"):
            raise ConfigError(f"parity must be even or odd, got {parity!r}", p[0])
    mu, xi = {}, {}
    for no, text in e.get("mu", []):
        root, vals = _keyed_list(text, no)
        if root in mu:
            raise ConfigError(f"mu for root {root} given twice", no)
        mu[root] = vals
    for no, text in e.get("xi", []):
        root, vals = _keyed_list(text, no)
        if len(vals) != 1 or root in xi:
            raise ConfigError(f"xi for root {root} must be a single value given once", no)
        xi[root] = vals[0]
    nu = _fraction(e["nu"][0][1], e["nu"][0][0]) if "nu" in e else None
    n = _int(e["n"][0][1], e["n"][0][0]) if "n" in e else None
    domain = None
    if (d := _one(e, "domain")) is not None:
        parts = d[1].split(",")
        if len(parts) != 2:
            raise ConfigError("domain must be 'lo, hi'", d[0])
        domain = (_bound(parts[0], d[0]), _bound(parts[1], d[0]))
    try:
        return ModelSpec(roots=roots, parity=parity, mu=mu, xi=xi, nu=nu, domain=domain, n=n)
    except SpecError as exc:
        raise ConfigError(f"invalid model: {exc}", rline) from None


def _checks(e: dict) -> tuple[str, ...]:
    entry = _one(e, "checks")
    if entry is None:
        return VERIFY_CHECKS
    no, text = entry
    out = []
    for c in _items(text):
        c = c.lower()
        if c not in VERIFY_CHECKS:
            raise ConfigError(f"unknown check {c!r}; expected some of {', '.join(VERIFY_CHECKS)}", no)
        if c not in out:
            out.append(c)
    return tuple(out)


def _integrate(e: dict, hline: int) -> IntegrateSettings:
    entry = _one(e, "s0")
    if entry is None:
        raise ConfigError("[integrate] needs 's0 = a, y, Pi, P_y'", hline)
    vals = [_float(v, entry[0]) for v in _items(entry[1])]
    if len(vals) != 4:
        raise ConfigError(f"s0 needs 4 numbers (a, y, Pi, P_y), got {len(vals)}", entry[0])
    s = IntegrateSettings(tuple(vals))
    if "t" in e:
        s.T = _float(e["t"][0][1], e["t"][0][0])
    if "h" in e:
        s.h = _float(e["h"][0][1], e["h"][0][0])
    if "every" in e:
        s.every = _int(e["every"][0][1], e["every"][0][0])
    for key, val in (("t", s.T), ("h", s.h), ("every", s.every)):
        if val <= 0:
            raise ConfigError(f"{key} must be positive", e.get(key, [(hline,)])[0][0])
    return s


def _classify(e: dict, hline: int) -> GlobalExampleSpec:
    fam = _one(e, "family")
    if fam is None:
        raise ConfigError("[classify] needs a 'family' line", hline)
    kw = {"family": fam[1].strip().lower()}
    for key in ("mu", "nu"):
        if key in e:
            no, text = e[key][0]
            kw[key] = tuple(_fraction(v, no) for v in _items(text))
    simple = []
    for no, text in e.get("simple", []):
        for t in _items(text):
            parts = t.split(":")
            if len(parts) != 3:
                raise ConfigError(f"simple root {t!r} must be value:sign:xi", no)
            simple.append((_fraction(parts[0], no), _sign(parts[1], no), _fraction(parts[2], no)))
    if simple:
        kw["simple"] = tuple(simple)
    for key in ("a1", "a2"):
        if key in e:
            kw[key] = _fraction(e[key][0][1], e[key][0][0])
    try:
        return GlobalExampleSpec(**kw)
    except SpecError as exc:
        raise ConfigError(f"invalid classification parameters: {exc}", fam[0]) from None
