"""Declarative parameter sweeps, figure presets and CSV/SVG output."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Mapping

from . import analytic, energy, montecarlo
from .channel import SeedSpec
from .params import ParameterError, SystemParams, check, params_from_mapping, parse_config_text, validate
from .schemes import SchemeId, SinrMode

SWEEPABLE = ("rho_db", "d_s1", "theta", "delta", "eta")
OPT_SCHEME = "CNOMA_IHS_opt"
METRICS = ("ESC", "EE")
PRESETS = tuple(f"figure{k}" for k in range(3, 10))
BASE_COLUMNS = ["swept_value", "scheme", "metric", "mean", "std_error"]
ANALYTIC_COLUMNS = ["analytic_c1", "analytic_c2_printed", "analytic_c2_oracle", "analytic_sum"]


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    swept: str
    grid: tuple[float, ...]
    fixed: SystemParams = field(default_factory=SystemParams)
    schemes: tuple[str, ...] = tuple(s.value for s in SchemeId)
    metric: str = "ESC"
    n_samples: int = 1_000_000
    seed: int = 42
    analytic: bool = False
    sinr_mode: str = SinrMode.THEOREM_CONSISTENT.value
    ee_variant: str = energy.EE_LITERAL
    grid_samples: int = 100_000  # per-point sample count for the theta* grid search
    name: str = "sweep"

    def point_params(self, value: float) -> SystemParams:
        changes = {self.swept: value}
        if self.swept == "d_s1":
            changes["d_12"] = None  # d_12 = d_s2 - d_s1
        return self.fixed.replace(**changes)


def parse_grid(text: str) -> tuple[float, ...]:
    """``a:step:b`` (inclusive) or a comma/space separated list."""
    text = text.strip()
    if ":" in text:
        parts = [float(x) for x in text.split(":")]
        if len(parts) != 3 or parts[1] <= 0:
            raise SpecError(f"bad range {text!r}; expected start:step:stop with step > 0")
        a, step, b = parts
        count = int(math.floor((b - a) / step + 1e-9)) + 1
        return tuple(round(a + k * step, 10) for k in range(max(count, 0)))
    return tuple(float(x) for x in text.replace(",", " ").split())


def _bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off", ""):
        return False
    raise SpecError(f"not a boolean: {text!r}")


def spec_from_mapping(values: Mapping[str, str], name: str = "sweep") -> SweepSpec:
    try:
        fixed = params_from_mapping(values)
    except ParameterError as e:
        raise SpecError(str(e)) from e
    if "swept" not in values or "grid" not in values:
        raise SpecError("sweep config needs 'swept' and 'grid'")
    kw: dict = dict(swept=values["swept"].strip(), grid=parse_grid(values["grid"]),
                    fixed=fixed, name=values.get("name", name).strip())
    try:
        if "schemes" in values:
            kw["schemes"] = tuple(s.strip() for s in values["schemes"].replace(",", " ").split())
        if "metric" in values:
            kw["metric"] = values["metric"].strip().upper()
        for key in ("n_samples", "samples"):
            if key in values:
                kw["n_samples"] = int(float(values[key]))
        if "grid_samples" in values:
            kw["grid_samples"] = int(float(values["grid_samples"]))
        if "seed" in values:
            kw["seed"] = int(values["seed"])
        if "analytic" in values:
            kw["analytic"] = _bool(values["analytic"])
        if "sinr_mode" in values:
            kw["sinr_mode"] = SinrMode(values["sinr_mode"].strip()).value
        if "ee_variant" in values:
            kw["ee_variant"] = values["ee_variant"].strip()
    except ValueError as e:
        raise SpecError(str(e)) from e
    return SweepSpec(**kw)


def load_spec(path: str | Path) -> SweepSpec:
    path = Path(path)
    return spec_from_mapping(parse_config_text(path.read_text()), name=path.stem)


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise SpecError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return resources.files("cnoma_ihs.presets").joinpath(f"{name}.cfg").read_text()


def load_preset(name: str) -> SweepSpec:
    return spec_from_mapping(parse_config_text(preset_text(name)), name=name)


def check_spec(spec: SweepSpec) -> list[str]:
    """All problems with a sweep spec; checked before any computation."""
    errs = []
    if spec.swept not in SWEEPABLE:
        errs.append(f"swept must be one of {SWEEPABLE}, got {spec.swept!r}")
    if not spec.grid:
        errs.append("grid is empty")
    elif any(b <= a for a, b in zip(spec.grid, spec.grid[1:])):
        errs.append("grid must be strictly increasing")
    if not spec.schemes:
        errs.append("scheme list is empty")
    for s in spec.schemes:
        if s == OPT_SCHEME:
            if spec.metric != "EE":
                errs.append(f"{OPT_SCHEME} is only defined for metric EE")
            continue
        try:
            SchemeId(s)
        except ValueError:
            errs.append(f"unknown scheme {s!r}")
    if len(set(spec.schemes)) != len(spec.schemes):
        errs.append("duplicate schemes")
    if spec.metric not in METRICS:
        errs.append(f"metric must be ESC or EE, got {spec.metric!r}")
    if spec.analytic and (spec.metric != "ESC" or "CNOMA_IHS" not in spec.schemes):
        errs.append("analytic overlay needs metric ESC and CNOMA_IHS in schemes")
    if spec.n_samples < montecarlo.MIN_SAMPLES:
        errs.append(f"n_samples must be >= {montecarlo.MIN_SAMPLES}")
    if OPT_SCHEME in spec.schemes and spec.grid_samples < montecarlo.MIN_SAMPLES:
        errs.append(f"grid_samples must be >= {montecarlo.MIN_SAMPLES}")
    if spec.ee_variant not in (energy.EE_LITERAL, energy.EE_SCALED):
        errs.append(f"unknown ee_variant {spec.ee_variant!r}")
    if spec.swept in SWEEPABLE:
        for v in spec.grid:
            for fld, msg in check(spec.point_params(v)):
                errs.append(f"{spec.swept}={v}: {fld}: {msg}")
    return errs


@dataclass
class SweepTable:
    spec: SweepSpec
    rows: list[dict]
    theta_star: dict = field(default_factory=dict)  # grid value -> ThetaStarResult

    def select(self, scheme: str) -> list[dict]:
        return [r for r in self.rows if r["scheme"] == scheme]


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepTable:
    errs = check_spec(spec)
    if errs:
        raise SpecError("; ".join(errs))
    seed = SeedSpec(spec.seed)
    points = [(v, validate(spec.point_params(v))) for v in spec.grid]

    theta_star = {}
    arms = []
    for i, (v, p) in enumerate(points):
        for s in spec.schemes:
            if s == OPT_SCHEME:
                res = energy.theta_star(p, p.lam_s1, energy.ThetaMethod.GRID,
                                        n=spec.grid_samples, seed=seed, workers=workers,
                                        sinr_mode=spec.sinr_mode, ee_variant=spec.ee_variant)
                theta_star[v] = res
                arms.append(((i, s), SchemeId.CNOMA_IHS, p.replace(theta=res.theta_star)))
            else:
                arms.append(((i, s), SchemeId(s), p))
    res = montecarlo.run_arms(arms, spec.n_samples, seed, workers=workers,
                              sinr_mode=spec.sinr_mode, ee_variant=spec.ee_variant)
    rows = []
    for i, (v, p) in enumerate(points):
        closed = None
        if spec.analytic:
            closed = analytic.all_closed_forms(p)
        for s in spec.schemes:
            est = res.metric((i, s), spec.metric)
            row = {"swept_value": v, "scheme": s, "metric": spec.metric,
                   "mean": est.mean, "std_error": est.std_error}
            if spec.analytic:
                if s == "CNOMA_IHS":
                    row.update(analytic_c1=closed.c1, analytic_c2_printed=closed.c2_printed,
                               analytic_c2_oracle=closed.c2_oracle,
                               analytic_sum=closed.validated)
                else:
                    row.update({c: None for c in ANALYTIC_COLUMNS})
            rows.append(row)
    return SweepTable(spec, rows, theta_star)


# --- output -------------------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def to_csv(table: SweepTable) -> str:
    if not table.rows:
        raise SpecError("empty table")
    cols = BASE_COLUMNS + (ANALYTIC_COLUMNS if table.spec.analytic else [])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in table.rows:
        w.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue()


class OutputError(OSError):
    pass


def _write(path: Path, data: str | bytes) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(data, bytes):
            path.write_bytes(data)
        else:
            path.write_text(data)
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e.strerror or e}") from e
    return path


def plot_svg(table: SweepTable) -> bytes:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "cnoma-ihs"
    spec = table.spec
    fig, ax = plt.subplots(figsize=(6, 4.2))
    for s in spec.schemes:
        rows = table.select(s)
        xs = [r["swept_value"] for r in rows]
        ax.errorbar(xs, [r["mean"] for r in rows],
                    yerr=[montecarlo.Z95 * r["std_error"] for r in rows],
                    marker="o", ms=3, capsize=2, lw=1, label=s)
    if spec.analytic:
        rows = table.select("CNOMA_IHS")
        xs = [r["swept_value"] for r in rows]
        ax.plot(xs, [r["analytic_sum"] for r in rows], "k*", ms=7, label="CNOMA_IHS (analytic)")
        ax.plot(xs, [r["analytic_c1"] + r["analytic_c2_printed"] for r in rows], "kx", ms=6,
                label="CNOMA_IHS (printed closed form)")
    ax.set_xlabel(spec.swept)
    ax.set_ylabel("ESC (bit/s/Hz)" if spec.metric == "ESC" else "EE (bit/s/Hz per unit power)")
    ax.grid(alpha=0.3, ls="--")
    ax.legend(fontsize=7)
    ax.set_title(spec.name)
    buf = io.BytesIO()
    fig.savefig(buf, format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)
    return buf.getvalue()


def emit(table: SweepTable, out_dir: str | Path, formats=("csv",)) -> list[Path]:
    if not table.rows:
        raise SpecError("empty table")
    out_dir = Path(out_dir)
    written = []
    for fmt in formats:
        if fmt == "csv":
            written.append(_write(out_dir / f"{table.spec.name}.csv", to_csv(table)))
        elif fmt == "plot":
            written.append(_write(out_dir / f"{table.spec.name}.svg", plot_svg(table)))
        else:
            raise SpecError(f"unknown format {fmt!r}")
    return written


def with_overrides(spec: SweepSpec, **kw) -> SweepSpec:
    kw = {k: v for k, v in kw.items() if v is not None}
    return replace(spec, **kw) if kw else spec
