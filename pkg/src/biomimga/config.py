"""Experiment config files.

Configs are INI-style ``key = value`` files with one section per concern::

    [landscape]
    kind = onemax
    L = 100

    [ga]
    population_size = 100
    generations = 50
    survivor_fraction = 0.1
    elitist = true
    init_mode = random
    seed = 1

    [operators]
    p_m = 0
    crossover_kind = uniform_flat

Comparison configs add ``[experiment]`` (budget, replicates, seeds) and may
override ``[ga]``/``[operators]`` keys per method in ``[classical]`` and
``[biomimetic]`` sections. Segmented landscapes take their initial layout
from ``[genome] segments = id:length, ...``.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path

from .engine import GAConfig
from .landscapes import Landscape
from .operators import OperatorConfig

DEFAULT_SEEDS = tuple(range(1, 11))

_GA_KEYS = {"population_size": int, "generations": int, "survivor_fraction": float,
            "elitist": "bool", "init_mode": str, "seed": int}
_OP_KEYS = {"p_m": float, "p_sig": float, "crossover_kind": str, "p_inversion": float,
            "p_translocation": float, "p_duplication": float}
_LANDSCAPE_KEYS = {"kind": str, "L": int, "K": int, "c": int, "m": int, "g_width": int,
                   "weights": "floats", "seed": int}
_EXPERIMENT_KEYS = {"budget": int, "replicates": int, "seeds": "ints"}
_OUTPUT_KEYS = {"dir": str, "trace": str}
_SECTIONS = {
    "landscape": _LANDSCAPE_KEYS,
    "ga": _GA_KEYS,
    "operators": _OP_KEYS,
    "genome": {"segments": "template"},
    "experiment": _EXPERIMENT_KEYS,
    "output": _OUTPUT_KEYS,
    "classical": {**_GA_KEYS, **_OP_KEYS},
    "biomimetic": {**_GA_KEYS, **_OP_KEYS},
}


class ConfigError(ValueError):
    """Invalid config; ``str()`` gives ``path:line: message``."""

    def __init__(self, message: str, path: str | Path = "<config>", line: int = 0):
        self.path = str(path)
        self.line = line
        self.message = message
        super().__init__(f"{self.path}:{line}: {message}")


@dataclass
class ExperimentConfig:
    landscape: Landscape
    ga: GAConfig | None = None
    classical: GAConfig | None = None
    biomimetic: GAConfig | None = None
    budget: int | None = None
    replicates: int = len(DEFAULT_SEEDS)
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    out_dir: str = "."
    trace_name: str = "trace.csv"
    path: str = "<config>"
    lines: dict = field(default_factory=dict, repr=False)


def parse_template(text: str) -> tuple[tuple[int, int], ...]:
    """``"0:8, 1:8"`` -> ``((0, 8), (1, 8))``."""
    out = []
    for part in text.replace(";", ",").split(","):
        part = part.strip()
        if not part:
            continue
        gid, _, k = part.partition(":")
        out.append((int(gid), int(k)))
    return tuple(out)


def parse_seeds(text: str) -> tuple[int, ...]:
    return tuple(int(s) for s in re.split(r"[,\s]+", text.strip()) if s)


def _convert(kind, raw: str):
    if kind == "bool":
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    if kind == "floats":
        return tuple(float(x) for x in re.split(r"[,\s]+", raw.strip()) if x)
    if kind == "ints":
        return parse_seeds(raw)
    if kind == "template":
        return parse_template(raw)
    return kind(raw.strip())


def _line_index(text: str) -> dict:
    """Map ``(section, key)`` and ``(section, None)`` to 1-based line numbers."""
    lines = {}
    section = None
    for no, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s[0] in "#;":
            continue
        m = re.match(r"\[(.+)\]$", s)
        if m:
            section = m.group(1).strip()
            lines[(section, None)] = no
            continue
        key = re.split(r"[=:]", s, maxsplit=1)[0].strip()
        if section is not None:
            lines[(section, key)] = no
    return lines


class _Reader:
    def __init__(self, text: str, path):
        self.path = path
        self.lines = _line_index(text)
        cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        cp.optionxform = str  # keys are case-sensitive (L vs l)
        try:
            cp.read_string(text, source=str(path))
        except configparser.Error as exc:
            line = getattr(exc, "lineno", 0) or 0
            raise ConfigError(f"malformed config: {exc.message.splitlines()[0]}", path, line) from None
        self.cp = cp
        for section in cp.sections():
            if section not in _SECTIONS:
                raise ConfigError(f"unknown section [{section}]", path, self.line(section))
            for key in cp[section]:
                if key not in _SECTIONS[section]:
                    raise ConfigError(f"{key}: unknown key in [{section}]", path,
                                      self.line(section, key))

    def line(self, section, key=None) -> int:
        return self.lines.get((section, key), self.lines.get((section, None), 0))

    def has(self, section) -> bool:
        return self.cp.has_section(section)

    def values(self, section) -> dict:
        if not self.cp.has_section(section):
            return {}
        schema = _SECTIONS[section]
        out = {}
        for key, raw in self.cp[section].items():
            try:
                out[key] = _convert(schema[key], raw)
            except ValueError:
                raise ConfigError(f"{key}: cannot read {raw!r}", self.path,
                                  self.line(section, key)) from None
        return out

    def fail(self, exc: Exception, sections) -> ConfigError:
        """Attach the line of the first key named in ``exc`` within ``sections``."""
        msg = str(exc)
        present = [(s, k) for s in sections if self.has(s) for k in self.cp[s]]
        for section, key in present:
            if re.match(rf"{re.escape(key)}\b", msg):
                return ConfigError(msg, self.path, self.line(section, key))
        for section, key in present:
            if re.search(rf"\b{re.escape(key)}\b", msg):
                return ConfigError(f"{key}: {msg}", self.path, self.line(section, key))
        return ConfigError(msg, self.path, self.line(sections[0]) if sections else 0)


def _landscape(r: _Reader) -> Landscape:
    if not r.has("landscape"):
        raise ConfigError("landscape: missing required section [landscape]", r.path, 0)
    vals = r.values("landscape")
    if "kind" not in vals:
        raise ConfigError("kind: missing required key in [landscape]", r.path, r.line("landscape"))
    try:
        return Landscape(**vals)
    except (TypeError, ValueError) as exc:
        raise r.fail(exc, ["landscape"]) from None


def _ga(r: _Reader, landscape: Landscape, override: str | None, seed_default: int = 1) -> GAConfig:
    ga = {"seed": seed_default, **r.values("ga")}
    ops = r.values("operators")
    sections = ["ga", "operators"]
    if override:
        extra = r.values(override)
        ga.update({k: v for k, v in extra.items() if k in _GA_KEYS})
        ops.update({k: v for k, v in extra.items() if k in _OP_KEYS})
        sections = [override] + sections
    if landscape.representation == "segmented":
        ops.setdefault("crossover_kind", "segment_aligned")
    else:
        ops.setdefault("crossover_kind", "uniform_flat")
    try:
        op_cfg = OperatorConfig(id_width=landscape.g_width, **ops)
        template = r.values("genome").get("segments", ())
        return GAConfig(landscape, op_cfg, segment_template=template, **ga)
    except (TypeError, ValueError) as exc:
        raise r.fail(exc, sections + ["genome"]) from None


def load_text(text: str, path: str | Path = "<config>", mode: str = "run") -> ExperimentConfig:
    """Parse and validate config text; ``mode`` is ``"run"`` or ``"compare"``."""
    r = _Reader(text, path)
    landscape = _landscape(r)
    exp = r.values("experiment")
    out = r.values("output")
    cfg = ExperimentConfig(landscape, path=str(path), lines=r.lines)
    if "seeds" in exp:
        cfg.seeds = exp["seeds"]
    cfg.replicates = exp.get("replicates", len(cfg.seeds))
    cfg.budget = exp.get("budget")
    cfg.out_dir = out.get("dir", ".")
    cfg.trace_name = out.get("trace", "trace.csv")

    if mode == "compare":
        if cfg.budget is None:
            raise ConfigError("budget: missing required key in [experiment]", r.path,
                              r.line("experiment"))
        if cfg.budget < 1:
            raise ConfigError("budget: must be >= 1", r.path, r.line("experiment", "budget"))
        if cfg.replicates < 1 or cfg.replicates > len(cfg.seeds):
            raise ConfigError(f"replicates: must lie in [1, {len(cfg.seeds)}] (number of seeds)",
                              r.path, r.line("experiment", "replicates"))
        cfg.classical = _ga(r, landscape, "classical")
        cfg.biomimetic = _ga(r, landscape, "biomimetic")
        for name, ga in (("classical", cfg.classical), ("biomimetic", cfg.biomimetic)):
            if cfg.budget % ga.population_size:
                raise ConfigError(f"budget: {cfg.budget} is not divisible by the {name} "
                                  f"population_size {ga.population_size}",
                                  r.path, r.line("experiment", "budget"))
    else:
        cfg.ga = _ga(r, landscape, None)
    return cfg


def load(path: str | Path, mode: str = "run") -> ExperimentConfig:
    text = Path(path).read_text()
    return load_text(text, path, mode)
