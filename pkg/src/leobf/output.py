"""Writers for map grids, heatmaps, sweeps and run summaries.

Every file is written to a temporary sibling and moved into place, so a
failed run never leaves a truncated output behind.
"""

from __future__ import annotations

import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from leobf import __version__
from leobf.config import RunRequest, scenario_to_dict
from leobf.constants import DB_FLOOR
from leobf.coverage import EnhancementMap

PGM_MAXVAL = 65535


def atomic_write(path, text: str) -> Path:
    """Write ``text`` to ``path`` via a temporary file and rename.

    Raises
    ------
    OSError
        With the target path in the message.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return path


def grid_csv(emap: EnhancementMap) -> str:
    """Row-major ``x_m,y_m,enhancement_db`` table, y outer and x inner."""
    X, Y = emap.mesh()
    table = np.column_stack([X.ravel(), Y.ravel(), emap.values_db.ravel()])
    buf = io.StringIO()
    np.savetxt(buf, table, fmt="%.6f", delimiter=",", header="x_m,y_m,enhancement_db",
               comments="")
    return buf.getvalue()


def heatmap_levels(values_db: np.ndarray, top_db: float) -> np.ndarray:
    """Map [DB_FLOOR, top_db] linearly onto [0, PGM_MAXVAL]."""
    span = top_db - DB_FLOOR
    scaled = (np.asarray(values_db) - DB_FLOOR) / span * PGM_MAXVAL
    return np.clip(np.rint(scaled), 0, PGM_MAXVAL).astype(np.int64)


def heatmap_pgm(emap: EnhancementMap, top_db: float | None = None) -> str:
    """Plain (P2) greyscale image, north (largest y) on the first row."""
    if top_db is None:
        top_db = emap.metadata.get("closed_form_max_db", float(emap.values_db.max()))
    levels = heatmap_levels(emap.values_db, top_db)[::-1]
    n_rows, n_cols = levels.shape
    lines = ["P2", f"{n_cols} {n_rows}", str(PGM_MAXVAL)]
    lines.extend(" ".join(map(str, row)) for row in levels)
    return "\n".join(lines) + "\n"


def sweep_csv(sweep) -> str:
    rows = ["df_hz,enhancement_db"]
    rows.extend(f"{df:.6f},{db:.6f}" for df, db in sweep)
    return "\n".join(rows) + "\n"


def _metrics_dict(obj):
    return None if obj is None else {k: float(v) for k, v in vars(obj).items()}


def summary(req: RunRequest, emap: EnhancementMap | None = None, *, spot=None, fringe=None,
            link=None, sweep=None, crossing_hz=None) -> dict:
    out = {
        "tool": "leobf",
        "version": __version__,
        "scenario": scenario_to_dict(req.scenario),
        "time_offsets_s": list(req.offsets.per_beam_offset_s) if req.offsets else None,
        "defaults_applied": list(req.defaults_applied),
    }
    if emap is not None:
        v = emap.values_db
        out["map"] = {
            "resolution": emap.resolution,
            "extent_m": emap.extent_m,
            "pitch_m": emap.pitch_m,
            "max_db": float(v.max()),
            "min_db": float(v.min()),
            "ue_db": float(v[emap.center_index]),
            "closed_form_max_db": emap.metadata.get("closed_form_max_db"),
            "integration_steps": emap.metadata.get("integration_steps"),
        }
        out["spot"] = _metrics_dict(spot)
        out["fringe"] = _metrics_dict(fringe)
    if link is not None:
        out["link"] = link
    if sweep is not None:
        out["doppler_sweep"] = {
            "points": len(sweep),
            "window_s": req.sweep.window_s if req.sweep else None,
            "crossing_3db_hz": crossing_hz,
        }
    return out


def emit_outputs(req: RunRequest, emap: EnhancementMap | None = None, *, spot=None,
                 fringe=None, link=None, sweep=None, crossing_hz=None) -> list[Path]:
    """Write the requested artifacts under ``req.out_dir``; returns the paths written."""
    stem = req.scenario.case_id.value
    out_dir = Path(req.out_dir)
    written = []
    if emap is not None and "grid_csv" in req.outputs:
        written.append(atomic_write(out_dir / f"{stem}_grid.csv", grid_csv(emap)))
    if emap is not None and "heatmap_pgm" in req.outputs:
        written.append(atomic_write(out_dir / f"{stem}_heatmap.pgm", heatmap_pgm(emap)))
    if sweep is not None:
        written.append(atomic_write(out_dir / "doppler_sweep.csv", sweep_csv(sweep)))
    if "summary_json" in req.outputs:
        name = f"{stem}_summary.json" if emap is not None else "doppler_summary.json"
        doc = summary(req, emap, spot=spot, fringe=fringe, link=link, sweep=sweep,
                      crossing_hz=crossing_hz)
        written.append(atomic_write(out_dir / name, json.dumps(doc, indent=2, sort_keys=True) + "\n"))
    return written
