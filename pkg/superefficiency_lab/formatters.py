"""Output format handlers for experiment artifacts."""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import __version__

# Frozen CSV column schemas, one per table name
SCHEMAS: Dict[str, Sequence[str]] = {
    "affinity": (
        "theta1", "theta2", "n", "sigma", "affinity_exact", "affinity_reference",
        "abs_difference", "lr_exceedance", "tv_exact", "tv_bound",
    ),
    "affinity-discrete": (
        "pair", "k", "affinity_np", "affinity_bruteforce", "abs_difference", "tv", "tv_bound",
    ),
    "tv": ("theta1", "theta2", "n", "sigma", "tv_exact", "tv_reference", "abs_difference"),
    "tv-discrete": ("pair", "k", "tv", "tv_bruteforce", "abs_difference"),
    "concentration": ("estimator", "n", "theta", "c", "radius", "p_exact", "p_mc", "std_error", "z_score"),
    "efficiency": ("estimator", "theta", "c", "n", "inner_value"),
    "efficiency-summary": ("estimator", "theta", "ae_approx", "classification"),
    "trace": (
        "estimator", "iteration", "left", "right", "width", "n", "hull_left", "hull_right",
        "diameter", "width_after", "width_ratio", "resolution_ok",
    ),
    "countability": (
        "estimator", "n_star", "tested_from", "tested_to", "persistent_points",
        "diameter", "diameter_bound", "loci", "passed",
    ),
    "assumptions": ("assumption", "theta1", "theta2", "n", "lhs", "rhs", "slack", "passed", "rejected"),
    "lan": ("theta", "lam", "n", "samples", "max_abs_residual", "ks_statistic", "ks_pvalue", "passed"),
}


@dataclass
class Artifact:
    """Everything one command emits: named tables, a JSON summary and optional text."""
    command: str
    config: dict
    tables: Dict[str, List[dict]] = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    text: Optional[str] = None


def jsonable(value: Any) -> Any:
    """Recursively convert values JSON cannot carry: inf and nan become strings, fractions become "p/q"."""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def format_csv(table: str, rows: List[dict]) -> str:
    """
    Render rows with the frozen schema of `table`, header row first.

    Raises:
        ValueError: If the table has no schema or a row carries unknown columns
    """
    if table not in SCHEMAS:
        raise ValueError(f"No column schema for table: {table}")
    columns = SCHEMAS[table]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        extra = set(row) - set(columns)
        if extra:
            raise ValueError(f"Unknown columns for {table}: {', '.join(sorted(extra))}")
        writer.writerow([_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def format_json(artifact: Artifact) -> str:
    """Render the artifact as JSON with the resolved config and the artifact version embedded."""
    data = {
        "version": __version__,
        "command": artifact.command,
        "config": artifact.config,
        "summary": artifact.summary,
        "tables": artifact.tables,
    }
    return json.dumps(jsonable(data), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _csv_name(command: str, table: str) -> str:
    return f"{table}.csv" if table.startswith(command) else f"{command}-{table}.csv"


def write_artifact(artifact: Artifact, out_dir: Path, output_format: str) -> List[Path]:
    """
    Write an artifact once, at the end of a run.

    Args:
        artifact: Tables, summary and text of the command
        out_dir: Output directory, created if missing
        output_format: csv, json, or both

    Returns:
        List of written file paths
    """
    if output_format not in FORMATTERS:
        raise ValueError(f"Unsupported format: {output_format}. Supported formats: {', '.join(FORMATTERS)}")
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name in FORMATTERS[output_format]:
        if name == "csv":
            for table, rows in artifact.tables.items():
                path = out_dir / _csv_name(artifact.command, table)
                path.write_text(format_csv(table, rows), encoding='utf-8')
                written.append(path)
        else:
            path = out_dir / f"{artifact.command}.json"
            path.write_text(format_json(artifact), encoding='utf-8')
            written.append(path)
    if artifact.text is not None:
        path = out_dir / f"{artifact.command}.txt"
        path.write_text(artifact.text, encoding='utf-8')
        written.append(path)
    return written


# Format registry
FORMATTERS = {
    'csv': ('csv',),
    'json': ('json',),
    'both': ('csv', 'json'),
}
