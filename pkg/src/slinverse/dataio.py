"""Spectral-data JSON files and reconstruction CSV output.

Dataset document:

    {"problem": "robin-robin" | "robin-dirichlet",
     "rho": [...], "alpha": [...]?, "mu": [...]?,
     "meta": {"generator": {...}, "tolerances": {...}}}

``alpha`` is present exactly for eigenvalue/norming-constant data
(problem "robin-robin"); two-spectra files carry ``rho`` and ``mu``.
All floating-point output uses 17 significant digits so repeated runs are
byte-identical and diffable.
"""

import json

import numpy as np

from .spectral import SpectralDataset, TwoSpectraDataset


def _fmt(v):
    return float(f"{float(v):.17g}")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    return obj


def dump_json(doc, path):
    with open(path, "w") as f:
        json.dump(_jsonable(doc), f, indent=1)
        f.write("\n")


def write_dataset(path, dataset, meta=None):
    """Write a SpectralDataset / TwoSpectraDataset / mu-array as JSON."""
    doc = {"meta": meta or {}}
    if isinstance(dataset, SpectralDataset):
        doc["problem"] = "robin-robin"
        doc["rho"] = dataset.rho
        doc["alpha"] = dataset.alpha
    elif isinstance(dataset, TwoSpectraDataset):
        doc["problem"] = "robin-dirichlet"
        doc["rho"] = dataset.rho
        doc["mu"] = dataset.mu
    else:
        doc["problem"] = "robin-dirichlet"
        doc["mu"] = np.asarray(dataset)
    dump_json(doc, path)


def read_dataset(path):
    """Load a dataset file; returns (dataset, meta).

    robin-robin files yield a SpectralDataset; robin-dirichlet files with
    both arrays a TwoSpectraDataset, otherwise the bare mu array.
    """
    with open(path) as f:
        doc = json.load(f)
    meta = doc.get("meta", {})
    problem = doc.get("problem")
    if problem == "robin-robin":
        if "alpha" not in doc:
            raise ValueError(f"{path}: robin-robin data requires 'alpha'")
        return SpectralDataset.from_arrays(doc["rho"], doc["alpha"]), meta
    if problem == "robin-dirichlet":
        if "rho" in doc and "mu" in doc:
            return (
                TwoSpectraDataset(np.asarray(doc["rho"]), np.asarray(doc["mu"])),
                meta,
            )
        return np.asarray(doc["mu"], dtype=float), meta
    raise ValueError(f"{path}: unknown problem kind {problem!r}")


def write_reconstruction_csv(path, recon, q_reference=None):
    """CSV of the recovered potential: x, q[, q_reference, abs_error]."""
    with open(path, "w") as f:
        if q_reference is None:
            f.write("x,q_recovered\n")
            for x, q in zip(recon.mesh, recon.q):
                f.write(f"{x:.17g},{q:.17g}\n")
        else:
            f.write("x,q_recovered,q_reference,abs_error\n")
            for x, q, qr in zip(recon.mesh, recon.q, q_reference):
                f.write(f"{x:.17g},{q:.17g},{qr:.17g},{abs(q - qr):.17g}\n")


def reconstruction_report(recon, q_reference=None):
    """Diagnostics document for a Reconstruction (JSON-ready)."""
    doc = {
        "omega": recon.omega,
        "h": recon.h,
        "H": recon.H,
        "lambda0": recon.lambda0,
        "method": recon.method_tags,
        "diagnostics": recon.diagnostics,
    }
    if q_reference is not None:
        err = np.abs(recon.q - q_reference)
        doc["l1_error"] = float(np.trapezoid(err, recon.mesh))
        doc["max_error"] = float(np.max(err))
    return doc
