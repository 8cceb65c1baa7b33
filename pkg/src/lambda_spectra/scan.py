"""Experiment harness: sweep one-photon detuning, run the
transmit -> normalize -> fit pipeline per point, emit descriptor curves.

Configuration is an INI-style key-value document with flat sections
([medium], [rates], [fields], [delta_grid], [sweep], [quadrature], [slabs],
[output]); unknown sections or keys are errors, since a silently ignored
typo in a physics parameter is the main operational hazard.  All config
frequencies are ordinary MHz (gamma_bc in kHz), lengths cm, wavelengths nm,
densities 1/cm^3; conversion to internal rad/s happens here.

The delta grid is either explicit (center/span/points, kHz) or "auto": a
per-detuning grid centered on the ac-Stark-shifted resonance, sized from
the analytic width, its Doppler spread, and the density-narrowing estimate,
so that both the broad near-resonance structure and the narrow far-detuned
resonance stay resolved.

Sweep points are independent; they run on a thread pool capped by
LAMBDA_SPECTRA_THREADS (0 or unset = auto).  Outputs are byte-deterministic
for identical configs.  A scan refuses to write into a directory holding
results from a different config (manifest hash check).
"""

from __future__ import annotations

import configparser
import hashlib
import json
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import ac_stark_shift
from .csvio import DescriptorCurve, DescriptorRow, export_csv
from .doppler import QuadratureSpec, velocity_nodes
from .errors import ConfigError, DegenerateSpectrum
from .fitting import fit_lineshape
from .model import Fields, Medium, Rates, drive_only_populations
from .propagation import SlabConfig, Spectrum, normalize, transmit
from .units import cm, khz, mhz, nm, per_cm3

__all__ = ["ScanConfig", "load_config", "parse_config", "preset_config",
           "preset_names", "auto_delta_grid", "run_scan", "scan_point"]

ENV_THREADS = "LAMBDA_SPECTRA_THREADS"

MANIFEST_NAME = "scan_manifest.json"

# (section, key) -> (type, default); None default means required
_SCHEMA = {
    ("medium", "density_cm3"): (float, None),
    ("medium", "length_cm"): (float, None),
    ("medium", "wavelength_nm"): (float, None),
    ("medium", "ku_mhz"): (float, None),
    ("rates", "gamma_r_mhz"): (float, None),
    ("rates", "gamma_deph_mhz"): (float, None),
    ("rates", "gamma_bc_khz"): (float, None),
    ("fields", "omega_d_mhz"): (float, None),
    ("fields", "omega_p_mhz"): (float, None),
    ("delta_grid", "mode"): (str, "auto"),
    ("delta_grid", "center_khz"): (float, 0.0),
    ("delta_grid", "span_khz"): (float, 0.0),
    ("delta_grid", "points"): (int, 801),
    ("sweep", "start_mhz"): (float, None),
    ("sweep", "stop_mhz"): (float, None),
    ("sweep", "points"): (int, None),
    ("quadrature", "scheme"): (str, "gauss_hermite"),
    ("quadrature", "node_count"): (int, 64),
    ("quadrature", "truncation"): (float, 6.0),
    ("slabs", "slab_count"): (int, 128),
    ("slabs", "adaptive"): (bool, True),
    ("slabs", "richardson_check"): (bool, False),
    ("output", "directory"): (str, "scan_output"),
    ("output", "write_spectra"): (bool, True),
    ("output", "svg"): (bool, False),
}


@dataclass(frozen=True)
class ScanConfig:
    """Validated scan parameters, still in config units (MHz/kHz/cm/nm)."""

    values: dict
    preset: str = ""
    warning: str = ""

    def get(self, section: str, key: str):
        return self.values[(section, key)]

    # -- internal-unit constructors ------------------------------------
    def rates(self) -> Rates:
        return Rates(gamma_r=mhz(self.get("rates", "gamma_r_mhz")),
                     gamma_deph=mhz(self.get("rates", "gamma_deph_mhz")),
                     gamma_bc=khz(self.get("rates", "gamma_bc_khz")))

    def medium(self) -> Medium:
        return Medium(density=per_cm3(self.get("medium", "density_cm3")),
                      length=cm(self.get("medium", "length_cm")),
                      wavelength=nm(self.get("medium", "wavelength_nm")),
                      ku=mhz(self.get("medium", "ku_mhz")))

    def fields(self, big_delta: float = 0.0) -> Fields:
        return Fields(omega_d=mhz(self.get("fields", "omega_d_mhz")),
                      omega_p=mhz(self.get("fields", "omega_p_mhz")),
                      big_delta=big_delta)

    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(scheme=self.get("quadrature", "scheme"),
                              node_count=self.get("quadrature", "node_count"),
                              truncation=self.get("quadrature", "truncation"))

    def slabs(self) -> SlabConfig:
        return SlabConfig(slab_count=self.get("slabs", "slab_count"),
                          richardson_check=self.get("slabs", "richardson_check"))

    def sweep_deltas(self) -> np.ndarray:
        start = self.get("sweep", "start_mhz")
        stop = self.get("sweep", "stop_mhz")
        n = self.get("sweep", "points")
        return mhz(1.0) * np.linspace(start, stop, n)

    def digest(self) -> str:
        items = sorted((f"{s}.{k}", repr(v)) for (s, k), v in self.values.items())
        blob = json.dumps(items).encode()
        return hashlib.sha256(blob).hexdigest()


def _coerce(section: str, key: str, raw: str):
    typ, _ = _SCHEMA[(section, key)]
    try:
        if typ is bool:
            low = raw.strip().lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        return typ(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: {exc}") from None


def _validate(values: dict, origin: str) -> None:
    def bad(section, key, msg):
        raise ConfigError(f"{origin}: [{section}] {key}: {msg}")

    nonneg = [k for k in _SCHEMA
              if k[0] in ("medium", "rates", "fields") or k[1].endswith("_khz")]
    for section, key in nonneg:
        if (section, key) in values and isinstance(values[(section, key)], float):
            if values[(section, key)] < 0:
                bad(section, key, "physical values must be >= 0")
    if values[("fields", "omega_p_mhz")] > values[("fields", "omega_d_mhz")]:
        bad("fields", "omega_p_mhz", "weak-probe regime needs omega_p <= omega_d")
    if values[("delta_grid", "mode")] not in ("auto", "explicit"):
        bad("delta_grid", "mode", "must be 'auto' or 'explicit'")
    if values[("delta_grid", "mode")] == "explicit" and values[("delta_grid", "span_khz")] <= 0:
        bad("delta_grid", "span_khz", "explicit grid needs span_khz > 0")
    if values[("delta_grid", "points")] < 7:
        bad("delta_grid", "points", "grid needs at least 7 points")
    if values[("sweep", "points")] < 1:
        bad("sweep", "points", "sweep needs at least 1 point")
    if values[("sweep", "stop_mhz")] < values[("sweep", "start_mhz")]:
        bad("sweep", "stop_mhz", "sweep stop must be >= start")


def parse_config(text: str, origin: str = "<config>") -> ScanConfig:
    """Parse and validate an INI config document.  Unknown keys are errors."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=origin)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None

    values = {}
    known_sections = {s for s, _ in _SCHEMA}
    for section in cp.sections():
        if section not in known_sections:
            raise ConfigError(f"{origin}: unknown section [{section}]")
        for key in cp[section]:
            if (section, key) not in _SCHEMA:
                raise ConfigError(f"{origin}: unknown key [{section}] {key}")
            values[(section, key)] = _coerce(section, key, cp[section][key])

    for (section, key), (_, default) in _SCHEMA.items():
        if (section, key) not in values:
            if default is None:
                raise ConfigError(f"{origin}: missing required key [{section}] {key}")
            values[(section, key)] = default

    _validate(values, origin)
    return ScanConfig(values=values)


def load_config(path) -> ScanConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, origin=str(path))


# ----------------------------------------------------------------------
# presets: cell parameter sets used throughout; the krypton cell sits in
# the ballistic (<1 Torr) regime where uniform gamma_bc relaxation is a
# poor model of transit, hence the attached warning.
_COMMON = {
    ("medium", "density_cm3"): 2.5e11,
    ("medium", "length_cm"): 2.5,
    ("medium", "wavelength_nm"): 794.979,
    ("medium", "ku_mhz"): 250.0,
    ("rates", "gamma_r_mhz"): 3.0,
    ("fields", "omega_d_mhz"): 2.5,
    ("fields", "omega_p_mhz"): 0.5,
    ("sweep", "start_mhz"): 0.0,
    ("sweep", "stop_mhz"): 2000.0,
    ("sweep", "points"): 21,
}

_PRESETS = {
    "vacuum": {
        ("rates", "gamma_deph_mhz"): 0.0,
        ("rates", "gamma_bc_khz"): 30.0,
        ("sweep", "stop_mhz"): 1000.0,
        # a bare radiative linewidth under this Doppler width needs the
        # dense trapezoid; node spacing ~gamma/2 over +-5 ku
        ("quadrature", "scheme"): "trapezoid",
        ("quadrature", "node_count"): 1601,
        ("quadrature", "truncation"): 5.0,
    },
    "kr_0.12torr": {
        ("rates", "gamma_deph_mhz"): 0.6,
        ("rates", "gamma_bc_khz"): 10.0,
        ("quadrature", "scheme"): "trapezoid",
        ("quadrature", "node_count"): 1601,
        ("quadrature", "truncation"): 5.0,
    },
    "ne_30torr": {
        ("rates", "gamma_deph_mhz"): 150.0,
        ("rates", "gamma_bc_khz"): 0.7,
    },
    "ne_100torr": {
        ("rates", "gamma_deph_mhz"): 450.0,
        ("rates", "gamma_bc_khz"): 0.5,
    },
}

_PRESET_WARNINGS = {
    "kr_0.12torr": ("mean free path is comparable to the beam: transit is "
                    "ballistic, not diffusive, and a uniform gamma_bc is "
                    "outside the model's validity"),
}


def preset_names():
    return tuple(sorted(_PRESETS))


def preset_config(name: str, output_dir: str | None = None) -> ScanConfig:
    if name not in _PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: "
                          f"{', '.join(preset_names())}")
    values = {k: default for k, (_, default) in _SCHEMA.items()}
    values.update(_COMMON)
    values.update(_PRESETS[name])
    if output_dir is not None:
        values[("output", "directory")] = output_dir
    else:
        values[("output", "directory")] = f"scan_{name}"
    _validate(values, f"preset:{name}")
    return ScanConfig(values={k: v for k, v in values.items() if v is not None},
                      preset=name, warning=_PRESET_WARNINGS.get(name, ""))


def config_text(cfg: ScanConfig) -> str:
    """Render a config back to its INI document form."""
    sections: dict = {}
    for (section, key), value in sorted(cfg.values.items()):
        sections.setdefault(section, []).append((key, value))
    out = []
    for section, items in sections.items():
        out.append(f"[{section}]")
        for key, value in items:
            if isinstance(value, bool):
                value = "true" if value else "false"
            elif isinstance(value, float):
                value = format(value, "g")
            out.append(f"{key} = {value}")
        out.append("")
    return "\n".join(out)


# ----------------------------------------------------------------------


def _background_depths(rates: Rates, fields: Fields,
                       medium: Medium) -> tuple[float, float]:
    """Doppler-averaged background optical depths (probe, drive) at the
    entry drive intensity; cheap estimates used to size grids and slabs."""
    kl = medium.kappa_L(rates.gamma_r)
    if kl <= 0:
        return 0.0, 0.0
    g = rates.gamma
    od2 = fields.omega_d**2
    w, kv = velocity_nodes(QuadratureSpec(node_count=32), medium.ku)
    deff = fields.big_delta - kv
    pb, pc = drive_only_populations(rates, fields.omega_d, deff)
    g2d2 = g * g + deff * deff
    probe = kl * float(np.dot(w, (g * pb + (g * od2 / g2d2) * pc) / g2d2))
    drive = kl * g * float(np.dot(w, pc / g2d2))
    return probe, drive


def auto_delta_grid(rates: Rates, fields: Fields, medium: Medium,
                    base_points: int = 801, max_points: int = 3201) -> np.ndarray:
    """Two-photon grid adapted to the resonance at this one-photon detuning.

    Centered on the ac-Stark shift; the span covers the analytic width, the
    Doppler spread of the shift, and the surrounding baseline; the point
    count keeps the expected fitted width (including density narrowing in
    the optically thick near-resonant case) sampled by several points.
    """
    g, gbc = rates.gamma, rates.gamma_bc
    od = fields.omega_d
    od2 = od * od
    dl = fields.big_delta
    ku = medium.ku

    d0 = ac_stark_shift(dl, od, g)
    w_nat = gbc + g * od2 / (g * g + dl * dl)

    if ku > 0:
        shifts = np.linspace(-2 * ku, 2 * ku, 41)
        d0_all = od2 * (dl - shifts) / (g * g + (dl - shifts) ** 2)
        spread = float(np.max(np.abs(d0_all - d0)))
    else:
        spread = 0.0

    od_bg, _ = _background_depths(rates, fields, medium)
    kl = medium.kappa_L(rates.gamma_r)

    span = (30.0 * max(w_nat, spread / 3.0) / math.sqrt(1.0 + min(od_bg, 30.0))
            + 6.0 * (abs(d0) + spread))

    # narrowest structure the fit may encounter
    w_fit = w_nat
    if kl > 0 and g > 0:
        w_density = od2 / math.sqrt(g * kl)
        if ku > 0:
            w_density *= math.exp(min(dl * dl / (2 * ku * ku), 50.0))
        w_fit = min(w_nat, w_density)
    w_fit = max(w_fit, w_nat / 50.0, 1e-12)

    points = base_points
    if span > 0:
        needed = int(math.ceil(12.0 * span / w_fit)) + 1
        points = int(np.clip(needed, base_points, max_points))
    if points % 2 == 0:
        points += 1
    return d0 + np.linspace(-span, span, points)


def _adaptive_slabs(cfg_slabs: SlabConfig, rates: Rates, fields: Fields,
                    medium: Medium) -> SlabConfig:
    """Scale the slab count with optical depth: the probe coefficient
    varies in z only through drive depletion, so thin-drive points need
    few slabs regardless of the probe's own depth."""
    probe_od, drive_od = _background_depths(rates, fields, medium)
    lever = math.sqrt(drive_od * (1.0 + probe_od))
    n = 16 * (1 + round(4.0 * lever))
    n = int(np.clip(n, 16, cfg_slabs.slab_count))
    return replace(cfg_slabs, slab_count=n)


def scan_point(cfg: ScanConfig, big_delta: float) -> tuple[Spectrum, DescriptorRow]:
    """Run one sweep point: grid, transmit, normalize, fit."""
    rates = cfg.rates()
    medium = cfg.medium()
    fields = cfg.fields(big_delta)
    quad = cfg.quadrature()
    slabs = cfg.slabs()
    if cfg.get("slabs", "adaptive"):
        slabs = _adaptive_slabs(slabs, rates, fields, medium)

    if cfg.get("delta_grid", "mode") == "explicit":
        center = khz(cfg.get("delta_grid", "center_khz"))
        span = khz(cfg.get("delta_grid", "span_khz"))
        grid = center + np.linspace(-span, span, cfg.get("delta_grid", "points"))
    else:
        grid = auto_delta_grid(rates, fields, medium,
                               base_points=cfg.get("delta_grid", "points"))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # gain flags land in the row
        raw = transmit(rates, fields, medium, quad, slabs, grid)
        spec = normalize(raw)
    gain = bool(np.any(raw.metadata["gain_flag"]))

    try:
        fit = fit_lineshape(spec)
        row = DescriptorRow(
            big_delta=big_delta, A=fit.params.A, B=fit.params.B,
            C=fit.params.C, D=fit.polar.D, phi=fit.polar.phi,
            gamma_tilde=fit.params.gamma_tilde, delta0=fit.params.delta0,
            residual_rms=fit.residual_rms, converged=fit.converged,
            gain_flag=gain)
    except DegenerateSpectrum:
        row = DescriptorRow(
            big_delta=big_delta, A=math.nan, B=math.nan, C=math.nan,
            D=math.nan, phi=math.nan, gamma_tilde=math.nan, delta0=math.nan,
            residual_rms=0.0, converged=False, gain_flag=gain)
    return spec, row


def _worker_count() -> int:
    raw = os.environ.get(ENV_THREADS, "0")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{ENV_THREADS} must be an integer, got {raw!r}") from None
    if n <= 0:
        n = os.cpu_count() or 1
    return max(1, n)


def run_scan(cfg: ScanConfig, out_dir=None) -> DescriptorCurve:
    """Sweep the one-photon detuning and write descriptor + spectrum CSVs.

    Refuses to mix results: an existing non-empty output directory must
    carry a manifest from the identical config, in which case files are
    reproduced byte-for-byte.
    """
    out = Path(out_dir) if out_dir is not None else Path(cfg.get("output", "directory"))
    digest = cfg.digest()
    manifest_path = out / MANIFEST_NAME
    if out.exists() and any(out.iterdir()):
        if not manifest_path.exists():
            raise OSError(f"output directory {out} is not empty and has no "
                          f"manifest; refusing to mix results")
        previous = json.loads(manifest_path.read_text(encoding="utf-8"))
        if previous.get("config_digest") != digest:
            raise OSError(f"output directory {out} holds results from a "
                          f"different config; refusing to overwrite")
    out.mkdir(parents=True, exist_ok=True)

    deltas = cfg.sweep_deltas()
    results: list = [None] * len(deltas)
    workers = min(_worker_count(), max(1, len(deltas)))
    if workers == 1:
        for i, dl in enumerate(deltas):
            results[i] = scan_point(cfg, float(dl))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(scan_point, cfg, float(dl)): i
                       for i, dl in enumerate(deltas)}
            for fut, i in futures.items():
                results[i] = fut.result()

    curve = DescriptorCurve(rows=[row for _, row in results])
    curve.validate()
    export_csv(curve, out / "descriptors.csv")

    spectra_files = []
    if cfg.get("output", "write_spectra"):
        for i, (spec, _) in enumerate(results):
            name = f"spectrum_{i:03d}.csv"
            export_csv(spec, out / name)
            spectra_files.append(name)

    if cfg.get("output", "svg"):
        from ._svg import write_curve_svg, write_spectrum_svg
        write_curve_svg(curve, out / "descriptors.svg")
        for i, (spec, _) in enumerate(results):
            write_spectrum_svg(spec, out / f"spectrum_{i:03d}.svg")

    manifest = {
        "version": __version__,
        "config_digest": digest,
        "preset": cfg.preset,
        "delta_1photon_mhz": [float(d) / mhz(1.0) for d in deltas],
        "spectra": spectra_files,
    }
    manifest_path.write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return curve
