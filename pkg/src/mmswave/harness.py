"""Scenario orchestration: run the MMS pipeline and the reference solver side by side."""
from __future__ import annotations

import copy
import json
import math
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import ConfigError, EmptyWindow, MmsWaveError, PipelineError, ZeroReference
from .grid import Grid, SpectralField
from .initial import initial_B, invert_for_A, linear_field, normalized_spectrum, reference_ics
from .mms import MmsCoefficients, classify, compute_coefficients, growth_curve, initial_solution, propagate, reconstruct_E
from .modes import find_branch
from .refsolver import default_dt, initial_state, integrate, model_order
from .susceptibility import SusceptibilityModel, model_from_dict

PRESETS = ("toy", "lorentz_uv", "lorentz_ir")
FLOAT_FMT = "%.17g"


@dataclass
class ScenarioConfig:
    name: str
    model: SusceptibilityModel
    epsilon: float
    k0: float
    delta: float
    grid: Grid
    times: List[float]
    dt: Optional[float] = None
    tol: float = 1e-12
    max_newton_iter: int = 20
    pad: int = 1
    include_B: bool = True
    hump_half_width: Optional[float] = None
    checks: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def window(self) -> float:
        return self.hump_half_width if self.hump_half_width else 10.0 / math.sqrt(self.delta)

    @property
    def rel_l2_max(self) -> float:
        v = self.checks.get("rel_l2_max")
        return float(v) if v is not None else 2 * self.epsilon**2

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        try:
            m = d["model"]
            model = model_from_dict(m["kind"], m["params"])
            grid = Grid(int(d["grid"]["n"]), float(d["grid"]["length"]))
            solver = d.get("solver", {})
            cfg = cls(name=str(d["name"]), model=model, epsilon=float(d["epsilon"]),
                      k0=float(d["k0"]), delta=float(d["delta"]), grid=grid,
                      times=[float(t) for t in d.get("times", [])],
                      dt=solver.get("dt"), tol=float(solver.get("tol", 1e-12)),
                      max_newton_iter=int(solver.get("max_newton_iter", 20)),
                      pad=int(solver.get("pad", 1)), include_B=bool(d.get("include_B", True)),
                      hump_half_width=d.get("hump_half_width"),
                      checks=dict(d.get("checks", {})), raw=copy.deepcopy(d))
        except (KeyError, TypeError, ValueError, MmsWaveError) as e:
            raise ConfigError(f"bad scenario config: {e}") from e
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if not 0 < self.epsilon < 1:
            raise ConfigError("epsilon must lie in (0, 1)")
        if self.delta <= 0:
            raise ConfigError("delta must be positive")
        if self.times != sorted(self.times) or any(t < 0 for t in self.times):
            raise ConfigError("times must be sorted and nonnegative")
        if self.dt is not None and self.dt <= 0:
            raise ConfigError("dt must be positive")
        try:
            self.grid.check_carrier(self.k0)
        except MmsWaveError as e:
            raise ConfigError(str(e)) from e

    def to_dict(self) -> dict:
        d = copy.deepcopy(self.raw) if self.raw else {}
        d.update({"name": self.name,
                  "model": {"kind": self.model.kind, "params": self.model.params()},
                  "epsilon": self.epsilon, "k0": self.k0, "delta": self.delta,
                  "grid": {"n": self.grid.n, "length": self.grid.length},
                  "times": list(self.times),
                  "solver": {"dt": self.dt, "tol": self.tol,
                             "max_newton_iter": self.max_newton_iter, "pad": self.pad},
                  "include_B": self.include_B, "hump_half_width": self.hump_half_width,
                  "checks": self.checks})
        return d

    def with_overrides(self, epsilon: Optional[float] = None, dt: Optional[float] = None) -> "ScenarioConfig":
        d = self.to_dict()
        if epsilon is not None:
            d["epsilon"] = epsilon
        if dt is not None:
            d["solver"]["dt"] = dt
        return ScenarioConfig.from_dict(d)


def load_config(path) -> ScenarioConfig:
    with open(path) as f:
        return ScenarioConfig.from_dict(json.load(f))


def load_preset(name: str) -> ScenarioConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    text = resources.files("mmswave").joinpath("presets", f"{name}.json").read_text()
    return ScenarioConfig.from_dict(json.loads(text))


def compare_fields(a: SpectralField, b: SpectralField) -> Tuple[float, float]:
    """Relative L2 and max-norm distance of ``a`` from the reference ``b``."""
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")
    ref = b.physical.real
    diff = a.physical.real - ref
    nb2, nbinf = np.linalg.norm(ref), np.max(np.abs(ref))
    if nb2 < 1e-300:
        raise ZeroReference("reference field is zero")
    return float(np.linalg.norm(diff) / nb2), float(np.max(np.abs(diff)) / nbinf)


def hump_metrics(spectrum, k, center: float, window: float) -> Tuple[float, float, float]:
    """(peak_k, peak |E|, sum |E|^2) over modes with |k - center| < window."""
    if window <= 0:
        raise ValueError("window must be positive")
    spectrum = np.abs(np.asarray(spectrum))
    k = np.asarray(k)
    sel = np.abs(k - center) < window
    if not np.any(sel):
        raise EmptyWindow(f"no modes within {window} of {center}")
    s = spectrum[sel]
    i = int(np.argmax(s))
    return float(k[sel][i]), float(s[i]), float(np.sum(s**2))


@dataclass
class ValidationReport:
    config: ScenarioConfig
    coefficients: dict
    posedness: str
    dt: float
    rows: List[dict] = field(default_factory=list)
    checks: List[dict] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)
    growth: Optional[np.ndarray] = None
    ref_fields: Dict[float, SpectralField] = field(default_factory=dict, repr=False)
    mms_fields: Dict[float, SpectralField] = field(default_factory=dict, repr=False)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_dict(self) -> dict:
        return {"config": self.config.to_dict(), "coefficients": self.coefficients,
                "posedness": self.posedness, "dt": self.dt, "results": self.rows,
                "checks": self.checks, "passed": self.passed, "timings": self.timings}


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except MmsWaveError as e:
        raise PipelineError(name, e) from e


def _humps(f: SpectralField, k0: float, window: float) -> dict:
    k = f.grid.k
    out = {}
    for label, c in (("k0", k0), ("3k0", 3 * k0)):
        pk, h, mass = hump_metrics(f.spectral, k, c, window)
        out[label] = {"peak_k": pk, "height": h, "mass": mass}
    return out


def run_scenario(config: ScenarioConfig) -> ValidationReport:
    timings = {}
    t0 = time.perf_counter()
    model, grid, eps = config.model, config.grid, config.epsilon
    branch = _stage("modes", find_branch, model, config.k0)
    coeffs: MmsCoefficients = _stage("mms", compute_coefficients, model, branch)
    timings["coefficients"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    A1, omega = _stage("init", normalized_spectrum, model, branch, grid, config.delta)
    E0 = _stage("init", linear_field, A1, model, branch, 0.0, grid, omega)
    ics = _stage("init", reference_ics, A1, model, branch, model_order(model), grid, omega)
    A0 = _stage("init", invert_for_A, E0, coeffs, eps, config.max_newton_iter, config.tol)
    B0 = initial_B(A0, coeffs.c1) if config.include_B else None
    sol = initial_solution(A0, coeffs, eps, B0)
    timings["initial_data"] = time.perf_counter() - t0

    dt = config.dt if config.dt else default_dt(model, grid)
    t0 = time.perf_counter()
    state = initial_state(ics, model, eps, grid)
    t_end = max(config.times) if config.times else 0.0
    snaps = _stage("refsolver", integrate, state, t_end, dt, config.times, config.pad)
    timings["reference"] = time.perf_counter() - t0

    q = np.linspace(-config.k0, config.k0, 401)
    report = ValidationReport(config=config, coefficients=coeffs.as_dict(),
                              posedness=classify(coeffs), dt=dt, timings=timings,
                              growth=np.column_stack([q, growth_curve(coeffs, q)]))
    t0 = time.perf_counter()
    for snap in snaps:
        t = snap.t
        mms_E = reconstruct_E(propagate(sol, t))
        ref_E = snap.E
        rel_l2, rel_max = _stage("harness", compare_fields, mms_E, ref_E)
        report.rows.append({"t": t, "rel_l2": rel_l2, "rel_max": rel_max,
                            "ref_asymmetry": snap.max_asymmetry(),
                            "mms_imag_fraction": mms_E.imag_fraction(),
                            "humps": {"ref": _humps(ref_E, config.k0, config.window),
                                      "mms": _humps(mms_E, config.k0, config.window)}})
        report.ref_fields[t] = ref_E
        report.mms_fields[t] = mms_E
    timings["mms"] = time.perf_counter() - t0
    report.checks = evaluate_checks(report)
    return report


def evaluate_checks(report: ValidationReport) -> List[dict]:
    cfg = report.config
    rows = {r["t"]: r for r in report.rows}
    out = []
    tol = cfg.rel_l2_max
    for t in cfg.checks.get("rel_l2_times", []):
        r = rows.get(float(t))
        if r is None:
            continue
        out.append({"name": f"rel_l2(t={t:g}) <= {tol:g}", "value": r["rel_l2"],
                    "passed": bool(r["rel_l2"] <= tol)})
    th = cfg.checks.get("hump_time")
    if th is not None and float(th) in rows:
        h = rows[float(th)]["humps"]
        dk = cfg.grid.dk
        off = abs(h["ref"]["3k0"]["peak_k"] - 3 * cfg.k0)
        ntol = float(cfg.checks.get("hump_peak_tol_dk", 2.0))
        out.append({"name": f"reference 3k0 peak within {ntol:g} dk (t={th:g})", "value": off / dk,
                    "passed": bool(off <= ntol * dk + 1e-12)})
        lo, hi = cfg.checks.get("hump_ratio", [0.8, 1.25])
        ratio = h["mms"]["3k0"]["height"] / h["ref"]["3k0"]["height"]
        out.append({"name": f"3k0 hump height ratio in [{lo:g}, {hi:g}] (t={th:g})", "value": ratio,
                    "passed": bool(lo <= ratio <= hi)})
    return out


def _fmt_t(t: float) -> str:
    return f"{t:g}"


def export_report(report: ValidationReport, out_dir) -> List[Path]:
    """Write report.json, growth_curve.csv and per-time field and spectrum CSVs."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    p = out / "report.json"
    p.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    written.append(p)
    if not report.rows:
        return written
    if report.growth is not None:
        p = out / "growth_curve.csv"
        np.savetxt(p, report.growth, delimiter=",", header="k,re_lambda", comments="", fmt=FLOAT_FMT)
        written.append(p)
    name = report.config.name
    for label, fields in (("ref", report.ref_fields), ("mms", report.mms_fields)):
        d = out / label
        d.mkdir(exist_ok=True)
        for t, f in fields.items():
            written += write_snapshot(d, name, t, f)
    return written


def write_snapshot(directory: Path, name: str, t: float, f: SpectralField) -> List[Path]:
    tag = f"{name}_{_fmt_t(t)}"
    p1 = directory / f"{tag}.csv"
    np.savetxt(p1, np.column_stack([f.grid.z, f.physical.real]), delimiter=",",
               header="z,E", comments="", fmt=FLOAT_FMT)
    p2 = directory / f"{tag}_spectrum.csv"
    k = np.fft.fftshift(f.grid.k)
    np.savetxt(p2, np.column_stack([k, np.abs(np.fft.fftshift(f.spectral))]), delimiter=",",
               header="k,abs_E_hat", comments="", fmt=FLOAT_FMT)
    return [p1, p2]


def read_field_csv(path) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    return data[:, 1]


def compare_dirs(ref_dir, mms_dir) -> List[dict]:
    """rel_l2 / rel_max for every field CSV present in both directories."""
    ref_dir, mms_dir = Path(ref_dir), Path(mms_dir)
    rows = []
    for p in sorted(ref_dir.glob("*.csv")):
        if p.name.endswith("_spectrum.csv"):
            continue
        q = mms_dir / p.name
        if not q.exists():
            continue
        ref, mms = read_field_csv(p), read_field_csv(q)
        if ref.shape != mms.shape:
            raise ValueError(f"{p.name}: length mismatch")
        nb = np.linalg.norm(ref)
        if nb < 1e-300:
            raise ZeroReference(f"{p.name}: reference field is zero")
        diff = mms - ref
        rows.append({"file": p.name, "rel_l2": float(np.linalg.norm(diff) / nb),
                     "rel_max": float(np.max(np.abs(diff)) / np.max(np.abs(ref)))})
    return rows
