"""
CSV and JSON emission for spectra, pulse records and sweep tables.

CSV headers carry units in brackets. Numbers are written with a fixed
format so that identical inputs give byte-identical files.
"""

import csv
import json
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np

from .propagation import PulseRecord, SpectrumResult

FLOAT_FORMAT = "{:.12e}"


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return FLOAT_FORMAT.format(float(x))
    return str(x)


def write_csv(path, header, columns) -> Path:
    """Write equally long ``columns`` under ``header``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = zip(*columns)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    return path


def read_csv(path):
    """(header, float array of shape (rows, columns))."""
    with Path(path).open() as fh:
        r = csv.reader(fh)
        header = next(r)
        data = np.array([[float(x) for x in row] for row in r])
    return header, data


def write_spectrum(path, spectrum: SpectrumResult, delta_unit: str = "rad/s") -> Path:
    header = [f"delta [{delta_unit}]", "transmission [1]"]
    cols = [spectrum.delta, spectrum.transmission]
    if spectrum.anti_stokes is not None:
        header.append("anti_stokes [1]")
        cols.append(spectrum.anti_stokes)
    return write_csv(path, header, cols)


def write_pulse(path, record: PulseRecord, time_unit: str = "s", rate_unit: str = "rad/s") -> Path:
    header = [f"time [{time_unit}]", f"physical_time [{time_unit}]",
              "input_re [1]", "input_im [1]", "output_re [1]", "output_im [1]",
              "reference_re [1]", "reference_im [1]",
              "input_intensity [1]", "output_intensity [1]", f"control [{rate_unit}]"]
    cols = [record.times, record.physical_time,
            record.input.real, record.input.imag, record.output.real, record.output.imag,
            record.reference.real, record.reference.imag,
            np.abs(record.input) ** 2, np.abs(record.output) ** 2, record.control]
    return write_csv(path, header, cols)


def write_table(path, rows, units=None) -> Path:
    """Rows of dicts with identical keys; ``units`` maps key -> unit string."""
    if not rows:
        raise ValueError("empty table")
    keys = list(rows[0])
    units = units or {}
    header = [f"{k} [{units.get(k, '1')}]" for k in keys]
    return write_csv(path, header, [[row[k] for row in rows] for k in keys])


def to_jsonable(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if np.isfinite(x) else None
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def write_json(path, payload) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + "\n")
    return path
