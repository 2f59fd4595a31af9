"""TOML game configuration: parsing, validation and templates.

Layout::

    alpha = 0.0            # size of the switching test
    delta = 1.0
    mode = "full"          # full | myopic | unaware
    seed = 0

    [payoff]               # kind = quadratic | exponential | table
    c = 4.0
    beta = 2.0

    [grid]
    effort_points = 401
    output_atoms = 201     # lattice size for continuous families

    [models]               # one label per technology, in technology order
    A = ["H"]
    B = ["L"]

    [[technology]]
    name = "x"
    family = "DiscreteBandit"
    b = 1.0
    [technology.params]
    r = 0.0
    [technology.true_process]
    kind = "H"             # H | L | law | table

Errors carry the line of the offending entry where one can be found.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - depends on the interpreter
    import tomli as tomllib

from .game import MODES, GameConfig
from .payoffs import PayoffSpec
from .views import FAMILIES, DomainError, LatticePair, TrueProcess

TOP_KEYS = {"alpha", "delta", "mode", "seed", "payoff", "grid", "models", "technology"}
PAYOFF_KEYS = {"kind", "c", "beta", "a", "table_outputs", "table_efforts", "table_values"}
GRID_KEYS = {"effort_points", "output_atoms"}
TECH_KEYS = {"name", "family", "b", "params", "true_process"}


class ConfigError(DomainError):
    """Malformed or invalid configuration; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path:
            where = f"{path}:{line}: " if line else f"{path}: "
        elif line:
            where = f"line {line}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class LoadedConfig:
    game: GameConfig
    names: tuple
    seed: int | None
    raw: dict


class _Lines:
    """Find the line of a key inside a (possibly repeated) table."""

    _header = re.compile(r"^\s*\[(\[)?\s*([A-Za-z0-9_.\-]+)\s*\]")

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def find(self, key: str, table: str = "", index: int = 0) -> int | None:
        """Line of ``key = ...`` in ``table``; ``index`` picks the entry of an array of tables."""
        current, counts = "", {}
        pat = re.compile(rf"^\s*{re.escape(key)}\s*=")
        for n, line in enumerate(self.lines, start=1):
            m = self._header.match(line)
            if m:
                current = m.group(2)
                if m.group(1):
                    counts[current] = counts.get(current, -1) + 1
                continue
            base = current.split(".")[0]
            if current == table and pat.match(line) and counts.get(base, 0) == index:
                return n
        return None

    def header(self, table: str, index: int = 0) -> int | None:
        count = -1
        base_count = -1
        base = table.split(".")[0]
        for n, line in enumerate(self.lines, start=1):
            m = self._header.match(line)
            if not m:
                continue
            if m.group(1) and m.group(2) == base:
                base_count += 1
            if m.group(2) == table:
                count += 1
                if (base_count if base != table else count) == index:
                    return n
        return None


def _number(value, name, line, path, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}", line, path)
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"{name} must be an integer, got {value!r}", line, path)
        return int(value)
    return float(value)


def _unknown(keys, allowed, where, lines, table, path, index=0):
    extra = sorted(set(keys) - allowed)
    if extra:
        raise ConfigError(f"unknown key {extra[0]!r} in {where}", lines.find(extra[0], table, index), path)


def _labels(value, n_tech, who, line, path):
    if isinstance(value, str):
        value = [value]
    if not isinstance(value, list) or len(value) != n_tech or any(v not in ("H", "L") for v in value):
        raise ConfigError(f"model {who} must list 'H' or 'L' for each of {n_tech} technologies", line, path)
    return tuple(value)


def _truth(entry, pair, lines, index, path):
    if entry is None:
        entry = {"kind": "H"}
    if isinstance(entry, str):
        entry = {"kind": entry}
    kind = entry.get("kind", "H")
    line = lines.find("kind", "technology.true_process", index) or lines.header("technology", index)
    if kind in ("H", "L"):
        return TrueProcess.member(pair, kind)
    if kind == "law":
        kw = {k: _number(v, f"true_process.{k}", lines.find(k, "technology.true_process", index), path)
              for k, v in entry.items() if k != "kind"}
        need = ("R", "lam") if pair.family == "DiscreteBandit" else ("slope",)
        for k in need:
            if k not in kw:
                raise ConfigError(f"true_process law for {pair.family} needs {k!r}", line, path)
        allowed = set(need) | ({"intercept"} if pair.family != "DiscreteBandit" else set())
        _unknown(kw, allowed, "true_process", lines, "technology.true_process", path, index)
        return TrueProcess.law(pair, **kw)
    if kind == "table":
        try:
            return TrueProcess.table(pair, entry["atoms"], entry["efforts"], entry["probs"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"true_process table needs atoms, efforts and probs ({exc})", line, path)
    raise ConfigError(f"unknown true_process kind {kind!r}", line, path)


def parse_config(text: str, path: str | None = None, effort_points: int | None = None) -> LoadedConfig:
    """Parse and validate configuration text into a :class:`GameConfig`."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"malformed TOML: {exc}", int(m.group(1)) if m else None, path) from None
    lines = _Lines(text)
    _unknown(raw, TOP_KEYS, "the top level", lines, "", path)

    techs = raw.get("technology", [])
    if not isinstance(techs, list) or not techs:
        raise ConfigError("at least one [[technology]] entry is required", None, path)
    if len(techs) > 2:
        raise ConfigError("at most two technologies are supported", lines.header("technology", 2), path)

    grid = raw.get("grid", {})
    _unknown(grid, GRID_KEYS, "[grid]", lines, "grid", path)
    points = _number(grid.get("effort_points", 401), "effort_points", lines.find("effort_points", "grid"),
                     path, integer=True)
    if effort_points is not None:
        points = int(effort_points)
    atoms = grid.get("output_atoms")

    pairs, truths, names = [], [], []
    for i, tech in enumerate(techs):
        head = lines.header("technology", i)
        _unknown(tech, TECH_KEYS, f"technology {i + 1}", lines, "technology", path, i)
        family = tech.get("family")
        if family not in FAMILIES:
            raise ConfigError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}",
                              lines.find("family", "technology", i) or head, path)
        cls = FAMILIES[family]
        params = dict(tech.get("params", {}))
        for k, v in params.items():
            if k != "noise_kind":
                params[k] = _number(v, k, lines.find(k, "technology.params", i), path,
                                    integer=(k == "output_atoms"))
        if "b" in tech:
            params["b"] = _number(tech["b"], "b", lines.find("b", "technology", i), path)
        if atoms is not None and issubclass(cls, LatticePair) and "output_atoms" not in params:
            params["output_atoms"] = _number(atoms, "output_atoms", lines.find("output_atoms", "grid"), path,
                                             integer=True)
        try:
            pair = cls(**params)
        except TypeError as exc:
            raise ConfigError(f"bad parameters for {family}: {exc}", lines.header("technology.params", i) or head,
                              path) from None
        except DomainError as exc:
            raise ConfigError(f"{family}: {exc}", lines.header("technology.params", i) or head, path) from None
        pairs.append(pair)
        names.append(str(tech.get("name", "xy"[i])))
        try:
            truths.append(_truth(tech.get("true_process"), pair, lines, i, path))
        except DomainError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc), lines.header("technology.true_process", i) or head, path) from None
    if len(set(names)) != len(names):
        raise ConfigError("technology names must be distinct", lines.header("technology", 1), path)

    pay = dict(raw.get("payoff", {}))
    _unknown(pay, PAYOFF_KEYS, "[payoff]", lines, "payoff", path)
    for k in ("c", "beta", "a"):
        if k in pay:
            pay[k] = _number(pay[k], k, lines.find(k, "payoff"), path)
    for k in ("table_outputs", "table_efforts"):
        if k in pay:
            pay[k] = tuple(pay[k])
    if "table_values" in pay:
        pay["table_values"] = tuple(tuple(r) for r in pay["table_values"])
    try:
        payoff = PayoffSpec(**pay)
    except DomainError as exc:
        raise ConfigError(str(exc), lines.header("payoff"), path) from None

    models = raw.get("models", {})
    _unknown(models, {"A", "B", "assignment"}, "[models]", lines, "models", path)
    n = len(pairs)
    ma = _labels(models.get("A", ["H"] * n), n, "A", lines.find("A", "models"), path)
    mb = _labels(models.get("B", ["L"] * n), n, "B", lines.find("B", "models"), path)
    assignment = models.get("assignment")
    if assignment is not None:
        line = lines.find("assignment", "models")
        if not isinstance(assignment, list) or len(assignment) != 2 or any(a not in names for a in assignment):
            raise ConfigError(f"assignment must name two of the technologies {names}", line, path)
        assignment = tuple(names.index(a) for a in assignment)

    mode = raw.get("mode", "full")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}", lines.find("mode"), path)
    alpha = _number(raw.get("alpha", 0.0), "alpha", lines.find("alpha"), path)
    delta = _number(raw.get("delta", 1.0), "delta", lines.find("delta"), path)
    seed = raw.get("seed")
    if seed is not None:
        seed = _number(seed, "seed", lines.find("seed"), path, integer=True)
    if seed is not None and seed < 0:
        raise ConfigError("seed must be nonnegative", lines.find("seed"), path)
    try:
        game = GameConfig(views=tuple(pairs), truth=tuple(truths), payoff=payoff, models=(ma, mb),
                          alpha=alpha, delta=delta, mode=mode, assignment=assignment,
                          effort_points=points, seed=seed or 0)
    except DomainError as exc:
        key = next((k for k in ("alpha", "delta", "effort_points") if k in str(exc)), None)
        line = (lines.find(key, "grid" if key == "effort_points" else "") if key else None)
        raise ConfigError(str(exc), line, path) from None
    return LoadedConfig(game, tuple(names), seed, raw)


def load_config(path, effort_points: int | None = None) -> LoadedConfig:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", None, str(path)) from None
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise ConfigError("config is not valid UTF-8", None, str(path)) from None
    return parse_config(text, str(path), effort_points)


_TEMPLATES = {
    "DiscreteBandit": '''# Discrete bandit: output R with probability min(1, lam * e), else 0 (view H);
# under view L the breakthrough pays r instead of R.
alpha = 0.0       # size of the switching test
delta = 1.0       # second-period discount
mode = "full"     # full | myopic | unaware
seed = 0

[payoff]
kind = "quadratic"   # u = y - c e^2 / 2
c = 4.0              # keep c > 2R
beta = 2.0           # externality v(y) = beta * y

[grid]
effort_points = 401

[models]
A = ["H"]
B = ["L"]

[[technology]]
name = "x"
family = "DiscreteBandit"
b = 1.0
[technology.params]
r = 0.0
R = 1.0
lam = 1.0
[technology.true_process]
kind = "H"
''',
    "AdditiveNoise": '''# Linear mean plus symmetric log-concave noise: Y = slope * e + noise.
alpha = 0.05
delta = 1.0
mode = "full"
seed = 0

[payoff]
kind = "quadratic"
c = 1.0
beta = 2.0

[grid]
effort_points = 401
output_atoms = 201

[models]
A = ["H"]
B = ["L"]

[[technology]]
name = "x"
family = "AdditiveNoise"
b = 2.0
[technology.params]
slope_H = 1.0
slope_L = 0.5
noise_kind = "gaussian"   # gaussian | triangular | uniform
noise_scale = 0.25
[technology.true_process]
kind = "H"
''',
    "UniformLinear": '''# View H: Y = gamma_H * e + U[-psi, psi]; view L: Y = U[-psi, psi].
alpha = 0.05
delta = 1.0
mode = "full"
seed = 0

[payoff]
kind = "quadratic"
c = 1.0
beta = 2.0

[grid]
effort_points = 401
output_atoms = 201

[models]
A = ["H"]
B = ["L"]

[[technology]]
name = "x"
family = "UniformLinear"
b = 4.0
[technology.params]
gamma_H = 1.0
psi = 5.0
[technology.true_process]
kind = "law"      # E_Q[Y | e] = slope * e with the same uniform noise
slope = 1.0
''',
    "InverseInfoLinear": '''# View H: Y = gamma0 + gamma1 e + N(0, sigma^2); view L: Y = gamma2 e + N(0, sigma^2).
# Requires gamma2 > gamma1 > 0 and gamma2 * b < gamma0 + gamma1 * b.
alpha = 0.05
delta = 1.0
mode = "full"
seed = 0

[payoff]
kind = "exponential"   # u = (exp(a y) - 1) / a - c e^2 / 2
a = 0.2
c = 2.0
beta = -2.0

[grid]
effort_points = 401
output_atoms = 201

[models]
A = ["H"]
B = ["L"]

[[technology]]
name = "x"
family = "InverseInfoLinear"
b = 8.0
[technology.params]
gamma0 = 5.0
gamma1 = 0.5
gamma2 = 1.0
sigma = 1.0
[technology.true_process]
kind = "H"
''',
}


def emit_config_template(family: str) -> str:
    """Commented, parseable configuration for one view family."""
    try:
        return _TEMPLATES[family]
    except KeyError:
        raise ConfigError(f"unknown family {family!r}; choose from {sorted(_TEMPLATES)}") from None
