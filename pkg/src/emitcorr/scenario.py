"""Scenario configs, figure presets and CSV output.

Config files are line oriented::

    # comment
    coupling_model = plasmonic
    initial = "10"
    t_final = 10

    [plasmonic]
    beta = 0.94
    L_nm = 2000
    lambda_pl_nm = 542
    zeta = 1

    [drive]
    amplitude1 = 0.2

Every key has one home block; it may be written at top level or inside
that block, never in another block. Top-level keys must precede the
first block header.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .correlations import CorrelationRecord, OptimizerSettings, correlation_record
from .coupling import (
    CollectiveParams,
    DipoleGeometry,
    PlasmonWaveguide,
    free_space_coupling,
    plasmonic_coupling,
)
from .dynamics import DriveConfig, EvolutionSpec, evolve, steady_state
from .state import PSI_MINUS, PSI_PLUS, alpha_state, basis_ket, projector, pure_state

COUPLING_MODELS = ("direct", "free_space", "plasmonic")

SECTIONS = {
    "direct": ("V", "gamma"),
    "free_space": ("mu1", "mu2", "r12_hat", "separation_over_wavelength", "refractive_index"),
    "plasmonic": ("beta", "L_nm", "lambda_pl_nm", "zeta"),
    "drive": ("amplitude1", "amplitude2", "detuning1", "detuning2"),
    "optimizer": ("grid_theta", "grid_phi", "refine_tol"),
}
TOP_LEVEL = ("coupling_model", "initial", "alpha", "t_final", "sample_count", "measured_qubit")
KEY_HOME = {k: sec for sec, keys in SECTIONS.items() for k in keys}
KEY_HOME.update({k: None for k in TOP_LEVEL})

INT_KEYS = {"sample_count", "grid_theta", "grid_phi"}
VECTOR_KEYS = {"mu1", "mu2", "r12_hat"}
STRING_KEYS = {"coupling_model", "initial", "measured_qubit"}

NAMED_STATES = ("00", "01", "10", "11", "psi_plus", "psi_minus", "alpha")
DEFAULT_SAMPLES = 500

FIGURES = ("fig1a", "fig1b", "fig2a", "fig2b", "fig2b_inset", "fig3a", "fig3b", "fig3c")


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


Coupling = Union[CollectiveParams, DipoleGeometry, PlasmonWaveguide]


@dataclass(frozen=True)
class ScenarioConfig:
    coupling_model: str
    coupling: Coupling
    initial: str
    t_final: float
    alpha: Optional[float] = None
    drive: DriveConfig = DriveConfig()
    sample_count: int = DEFAULT_SAMPLES
    measured_qubit: str = "B"
    optimizer: OptimizerSettings = field(default_factory=OptimizerSettings)

    def __post_init__(self):
        expected = {"direct": CollectiveParams, "free_space": DipoleGeometry, "plasmonic": PlasmonWaveguide}
        if self.coupling_model not in expected:
            raise ValueError(f"coupling_model must be one of {COUPLING_MODELS}")
        if not isinstance(self.coupling, expected[self.coupling_model]):
            raise ValueError(f"{self.coupling_model} model needs a {expected[self.coupling_model].__name__}")
        if not (math.isfinite(self.t_final) and self.t_final > 0):
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        if self.sample_count < 2:
            raise ValueError("sample_count must be >= 2")
        if self.measured_qubit not in ("A", "B"):
            raise ValueError("measured_qubit must be A or B")
        if self.initial == "alpha":
            if self.alpha is None or not 0.0 <= self.alpha <= 1.0:
                raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        elif self.alpha is not None:
            raise ValueError("alpha is only meaningful with initial = alpha")
        self.initial_state()

    def initial_state(self) -> np.ndarray:
        label = self.initial
        if label in ("00", "01", "10", "11"):
            return projector(basis_ket(label))
        if label == "psi_plus":
            return projector(PSI_PLUS)
        if label == "psi_minus":
            return projector(PSI_MINUS)
        if label == "alpha":
            return projector(alpha_state(self.alpha))
        try:
            amps = [complex(x.replace(" ", "")) for x in label.split(",")]
        except ValueError:
            raise ValueError(f"unknown initial state {label!r}") from None
        return projector(pure_state(amps))

    def collective_params(self) -> CollectiveParams:
        if self.coupling_model == "free_space":
            return free_space_coupling(self.coupling)
        if self.coupling_model == "plasmonic":
            return plasmonic_coupling(self.coupling)
        return self.coupling

    def evolution_spec(self) -> EvolutionSpec:
        return EvolutionSpec(
            initial_state=self.initial_state(),
            params=self.collective_params(),
            drive=self.drive,
            t_final=self.t_final,
            sample_count=self.sample_count,
        )


# --- parsing ---------------------------------------------------------------


def _strip_comment(line):
    quote = None
    for i, ch in enumerate(line):
        if ch in "\"'":
            quote = None if quote == ch else (quote or ch)
        elif ch == "#" and quote is None:
            return line[:i]
    return line


def _unquote(text):
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    return text


def _convert(key, raw, line):
    text = _unquote(raw.strip())
    try:
        if key in STRING_KEYS:
            if not text:
                raise ValueError("empty value")
            return text
        if key in INT_KEYS:
            return int(text)
        if key in VECTOR_KEYS:
            parts = [p for p in text.strip("[]()").split(",") if p.strip()]
            if len(parts) != 3:
                raise ValueError("expected three components")
            return tuple(float(p) for p in parts)
        value = float(text)
        if not math.isfinite(value):
            raise ValueError("non-finite number")
        return value
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {raw.strip()!r} ({exc})", line) from None


def _tokenize(text):
    """Split config text into typed values, their line numbers and block headers."""
    values = {}
    lines = {}
    headers = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {line!r}", lineno)
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise ConfigError(f"unknown section [{section}]", lineno)
            if section in headers:
                raise ConfigError(f"duplicate section [{section}]", lineno)
            headers[section] = lineno
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, raw_value = (s.strip() for s in line.split("=", 1))
        if key not in KEY_HOME:
            raise ConfigError(f"unknown key {key!r}", lineno)
        home = KEY_HOME[key]
        if section is not None and section != home:
            where = "top level" if home is None else f"[{home}]"
            raise ConfigError(f"key {key!r} belongs at {where}, not in [{section}]", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[key]})", lineno)
        values[key] = _convert(key, raw_value, lineno)
        lines[key] = lineno
    return values, lines, headers


def _from_values(values, lines=None, headers=None):
    lines = lines or {}
    headers = headers or {}

    def need(key):
        if key not in values:
            raise ConfigError(f"missing required key {key!r}")
        return values[key]

    def at(key):
        return lines.get(key)

    present = {}
    for sec in COUPLING_MODELS:
        used = [k for k in SECTIONS[sec] if k in values]
        if sec in headers or used:
            marks = [headers[sec]] if sec in headers else []
            marks += [lines[k] for k in used if k in lines]
            present[sec] = min(marks) if marks else None
    if len(present) > 1:
        names = ", ".join(sorted(present))
        raise ConfigError(f"conflicting coupling blocks: {names}", max(present.values(), key=lambda v: v or 0))

    model = need("coupling_model")
    if model not in COUPLING_MODELS:
        raise ConfigError(f"coupling_model must be one of {COUPLING_MODELS}, got {model!r}", at("coupling_model"))
    other = [s for s in present if s != model]
    if other:
        raise ConfigError(
            f"coupling_model = {model} conflicts with a [{other[0]}] block", present[other[0]]
        )

    try:
        if model == "direct":
            coupling = CollectiveParams(v_coherent=need("V"), gamma_collective=need("gamma"))
        elif model == "free_space":
            coupling = DipoleGeometry(
                mu1_hat=need("mu1"),
                mu2_hat=need("mu2"),
                r12_hat=need("r12_hat"),
                separation_over_wavelength=need("separation_over_wavelength"),
                refractive_index=values.get("refractive_index", 1.0),
            )
        else:
            coupling = PlasmonWaveguide(
                beta=need("beta"),
                propagation_length=need("L_nm"),
                plasmon_wavelength=need("lambda_pl_nm"),
                zeta=need("zeta"),
            )
    except ConfigError:
        raise
    except ValueError as exc:
        keyline = min((lines[k] for k in SECTIONS[model] if k in lines), default=None)
        raise ConfigError(f"invalid {model} parameters: {exc}", keyline) from None

    initial = need("initial")
    alpha = values.get("alpha")
    if initial.startswith("alpha:"):
        if alpha is not None:
            raise ConfigError("alpha given twice (initial = alpha:<x> and alpha key)", at("alpha"))
        try:
            alpha = float(initial.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad alpha in initial {initial!r}", at("initial")) from None
        initial = "alpha"
    if initial == "alpha" and alpha is not None and not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"alpha must lie in [0, 1], got {alpha}", at("alpha") or at("initial"))

    drive_kw = {k: values[k] for k in SECTIONS["drive"] if k in values}
    opt_kw = {k: values[k] for k in SECTIONS["optimizer"] if k in values}
    try:
        return ScenarioConfig(
            coupling_model=model,
            coupling=coupling,
            initial=initial,
            alpha=alpha,
            t_final=need("t_final"),
            drive=DriveConfig(**drive_kw),
            sample_count=values.get("sample_count", DEFAULT_SAMPLES),
            measured_qubit=values.get("measured_qubit", "B"),
            optimizer=OptimizerSettings(**opt_kw),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        msg = str(exc)
        culprit = next((k for k in values if k in msg), None)
        raise ConfigError(msg, at(culprit) if culprit else None) from None


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate config text; errors name the offending line."""
    values, lines, headers = _tokenize(text)
    return _from_values(values, lines, headers)


def config_values(cfg: ScenarioConfig) -> dict:
    """Flat key -> value mapping with defaults applied (keys are globally unique)."""
    out = {
        "coupling_model": cfg.coupling_model,
        "initial": cfg.initial,
        "t_final": cfg.t_final,
        "sample_count": cfg.sample_count,
        "measured_qubit": cfg.measured_qubit,
    }
    if cfg.alpha is not None:
        out["alpha"] = cfg.alpha
    c = cfg.coupling
    if cfg.coupling_model == "direct":
        out.update(V=c.v_coherent, gamma=c.gamma_collective)
    elif cfg.coupling_model == "free_space":
        out.update(
            mu1=c.mu1_hat,
            mu2=c.mu2_hat,
            r12_hat=c.r12_hat,
            separation_over_wavelength=c.separation_over_wavelength,
            refractive_index=c.refractive_index,
        )
    else:
        out.update(
            beta=c.beta, L_nm=c.propagation_length, lambda_pl_nm=c.plasmon_wavelength, zeta=c.zeta
        )
    out.update(dataclasses.asdict(cfg.drive))
    o = cfg.optimizer
    out.update(grid_theta=o.grid_theta, grid_phi=o.grid_phi, refine_tol=o.refine_tol)
    return out


def _render_value(key, value):
    if key in STRING_KEYS:
        return f'"{value}"'
    if key in VECTOR_KEYS:
        return "[" + ", ".join(repr(float(x)) for x in value) + "]"
    if key in INT_KEYS:
        return str(int(value))
    return repr(float(value))


def render_config(cfg: ScenarioConfig) -> str:
    """Serialize a config so that ``parse_config(render_config(cfg)) == cfg``."""
    values = config_values(cfg)
    out = [f"{k} = {_render_value(k, values[k])}" for k in TOP_LEVEL if k in values]
    for sec in (cfg.coupling_model, "drive", "optimizer"):
        out.append("")
        out.append(f"[{sec}]")
        out.extend(f"{k} = {_render_value(k, values[k])}" for k in SECTIONS[sec] if k in values)
    return "\n".join(out) + "\n"


# --- presets ---------------------------------------------------------------

_FIG2_WAVEGUIDE = dict(beta=0.94, propagation_length=2000.0, plasmon_wavelength=542.0)


def figure_preset(fig_id: str) -> ScenarioConfig:
    """Scenario reproducing one figure panel.

    The time window is 5/Gamma for fig1a (its plotted window is not
    stated; correlations are gone well before) and 10/Gamma otherwise.
    fig3b is the alpha-sweep panel; the returned config sits at
    alpha = 1/2, see :func:`figure_sweep` for the full grid.
    """
    plasmonic = lambda zeta: PlasmonWaveguide(zeta=zeta, **_FIG2_WAVEGUIDE)  # noqa: E731
    if fig_id == "fig1a":
        return ScenarioConfig("direct", CollectiveParams(7.0, 0.2), "10", t_final=5.0)
    if fig_id == "fig1b":
        geometry = DipoleGeometry(
            mu1_hat=(0.0, 0.0, 1.0),
            mu2_hat=(0.0, 0.0, 1.0),
            r12_hat=(1.0, 0.0, 0.0),
            separation_over_wavelength=0.75,
        )
        return ScenarioConfig("free_space", geometry, "10", t_final=10.0)
    if fig_id == "fig2a":
        return ScenarioConfig("plasmonic", plasmonic(1.0), "10", t_final=10.0)
    if fig_id == "fig2b":
        return ScenarioConfig("plasmonic", plasmonic(0.75), "10", t_final=10.0, drive=DriveConfig(0.2, 0.2))
    if fig_id == "fig2b_inset":
        return ScenarioConfig("plasmonic", plasmonic(0.75), "10", t_final=10.0)
    if fig_id == "fig3a":
        return ScenarioConfig("plasmonic", plasmonic(1.0), "01", t_final=10.0, drive=DriveConfig(0.2, -0.2))
    if fig_id == "fig3b":
        return ScenarioConfig(
            "plasmonic", plasmonic(1.0), "alpha", alpha=0.5, t_final=10.0, drive=DriveConfig(0.4, -0.4)
        )
    if fig_id == "fig3c":
        return ScenarioConfig(
            "plasmonic", plasmonic(1.0), "alpha", alpha=1.0, t_final=10.0, drive=DriveConfig(0.4, -0.4)
        )
    raise ValueError(f"unknown figure id {fig_id!r}; expected one of {FIGURES}")


@dataclass(frozen=True)
class SweepSpec:
    path: str
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) < 2:
            raise ValueError("a sweep needs at least 2 points")

    @classmethod
    def linear(cls, path, start, stop, count):
        return cls(path, tuple(np.linspace(start, stop, int(count))))


def figure_sweep(fig_id: str) -> Optional[SweepSpec]:
    if fig_id == "fig3b":
        return SweepSpec("initial_state.alpha", tuple(round(0.1 * k, 10) for k in range(11)))
    return None


def parse_grid(text: str) -> tuple:
    """``start:stop:count`` for a linear grid, else a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            return tuple(np.linspace(float(start), float(stop), int(count)))
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ValueError(f"bad sweep grid {text!r}") from None


def apply_path(cfg: ScenarioConfig, path: str, value: float) -> ScenarioConfig:
    """Return a copy of ``cfg`` with one parameter replaced.

    Paths are ``<block>.<key>`` (e.g. ``drive.amplitude1``,
    ``plasmonic.zeta``), a bare top-level key, or ``initial_state.alpha``.
    """
    values = config_values(cfg)
    if path == "initial_state.alpha":
        values["initial"] = "alpha"
        values["alpha"] = float(value)
        return _from_values(values)
    block, _, key = path.rpartition(".")
    if key not in KEY_HOME or (KEY_HOME[key] or "") != block or key not in values:
        raise KeyError(f"sweep path {path!r} does not exist in this config")
    values[key] = int(value) if key in INT_KEYS else float(value)
    return _from_values(values)


# --- running ---------------------------------------------------------------


def run_scenario(cfg: ScenarioConfig) -> list:
    """Evolve the scenario and compute one record per sample."""
    traj = evolve(cfg.evolution_spec())
    return [
        correlation_record(rho, float(t), cfg.optimizer, cfg.measured_qubit)
        for t, rho in zip(traj.times, traj.states)
    ]


def run_sweep(cfg: ScenarioConfig, sweep: SweepSpec) -> list:
    """``[(value, records), ...]`` ordered by sweep value."""
    configs = [(v, apply_path(cfg, sweep.path, v)) for v in sorted(sweep.values)]
    return [(v, run_scenario(c)) for v, c in configs]


def run_steady(cfg: ScenarioConfig) -> CorrelationRecord:
    rho = steady_state(cfg.collective_params(), cfg.drive)
    return correlation_record(rho, None, cfg.optimizer, cfg.measured_qubit)


CSV_HEADER = "t,I,CC,D,EoF,C"


def _fmt(x):
    return "" if x is None else f"{x:.17g}"


def format_records(records) -> str:
    rows = [CSV_HEADER]
    rows.extend(",".join(_fmt(x) for x in r.as_tuple()) for r in records)
    return "\n".join(rows) + "\n"


def format_sweep(path: str, blocks) -> str:
    return "".join(f"# {path} = {_fmt(v)}\n" + format_records(recs) for v, recs in blocks)


def read_records(text: str) -> list:
    """Parse CSV produced by :func:`format_records` (comment lines skipped).

    Each row is revalidated through :class:`CorrelationRecord`.
    """
    out = []
    for line in text.splitlines():
        if not line or line.startswith("#") or line == CSV_HEADER:
            continue
        t, *vals = line.split(",")
        out.append(CorrelationRecord(float(t) if t else None, *(float(v) for v in vals)))
    return out
