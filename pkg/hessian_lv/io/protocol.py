"""
Result documents written by the command line front end.

A document is a dictionary {"meta": {...}, "columns": [...], "rows": [[...]]}.
CSV renders meta as "# key=value" comment lines followed by a header row and
%.17g-formatted rows; JSON renders {"meta": ..., "rows": [{column: value}]}.
"""
import csv
import io
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from hessian_lv.analysis.exponents import ExponentReport, Params
from hessian_lv.config import TOOL_VERSION
from hessian_lv.errors import OutputError
from hessian_lv.utils.logger import setup_logger

logger = setup_logger(__name__)


class OutputFormat(str, Enum):
    """Serialisation formats."""
    CSV = "csv"
    JSON = "json"


class DocumentKind(str, Enum):
    """Kinds of result documents."""
    EXPONENTS = "exponents"
    ORBIT = "orbit"
    BIFURCATION = "bifurcation"
    COUNT = "count"
    SOLUTION = "solution"
    VERIFY = "verify"


def format_number(value: Any) -> str:
    """%.17g for floats, 'inf'/'-inf'/'nan' for non-finite values."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return "%.17g" % value
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return format_number(value)
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {key: _json_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(item) for item in value]
    return value


class ResultDocument:
    """Factories for every document the CLI emits."""

    @staticmethod
    def base_meta(kind: DocumentKind, params: Params) -> Dict[str, Any]:
        """
        Metadata common to all documents.

        Args:
            kind: Document kind
            params: Problem parameters

        Returns:
            Ordered metadata dictionary
        """
        meta = {
            "tool": "hessian-lv",
            "version": TOOL_VERSION,
            "kind": kind.value,
            "n": params.n,
            "k": params.k,
            "sigma": params.sigma,
            "q": params.q,
        }
        if params.lam is not None:
            meta["lambda"] = params.lam
        return meta

    @staticmethod
    def create(kind: DocumentKind, params: Params, columns: Sequence[str],
               rows: Sequence[Sequence[Any]], **extra: Any) -> Dict[str, Any]:
        meta = ResultDocument.base_meta(kind, params)
        meta.update(extra)
        return {"meta": meta, "columns": list(columns), "rows": [list(row) for row in rows]}

    @staticmethod
    def create_exponents_document(report: ExponentReport, params: Params) -> Dict[str, Any]:
        """One row per ExponentReport field."""
        rows = [[name, value] for name, value in report.model_dump().items()]
        return ResultDocument.create(DocumentKind.EXPONENTS, params, ["field", "value"], rows)

    @staticmethod
    def create_orbit_document(t: np.ndarray, xy: np.ndarray, lam: np.ndarray,
                              params: Params, terminated: str) -> Dict[str, Any]:
        """Rows t, x, y, Lambda."""
        rows = zip(t.tolist(), xy[:, 0].tolist(), xy[:, 1].tolist(), lam.tolist())
        return ResultDocument.create(DocumentKind.ORBIT, params, ["t", "x", "y", "Lambda"],
                                     rows, terminated=terminated)

    @staticmethod
    def create_bifurcation_document(samples, params: Params) -> Dict[str, Any]:
        """Rows t0, lambda, A."""
        rows = [[s.t0, s.lam, s.A] for s in samples]
        return ResultDocument.create(DocumentKind.BIFURCATION, params, ["t0", "lambda", "A"], rows)

    @staticmethod
    def create_count_document(count: int, saturated: bool, params: Params) -> Dict[str, Any]:
        return ResultDocument.create(DocumentKind.COUNT, params, ["count", "saturated"],
                                     [[count, saturated]])

    @staticmethod
    def create_solution_document(solution, params: Params, index: int) -> Dict[str, Any]:
        """Rows r, u of one radial solution."""
        rows = zip(solution.r.tolist(), solution.u.tolist())
        return ResultDocument.create(DocumentKind.SOLUTION, params, ["r", "u"], rows,
                                     index=index, solution_lambda=solution.lam,
                                     u0=solution.u0, source=solution.source.value)

    @staticmethod
    def create_verify_document(results, params: Params) -> Dict[str, Any]:
        """Rows oracle, status, residual, tolerance."""
        rows = [[r.name, "PASS" if r.passed else "FAIL", r.residual, r.tolerance]
                for r in results]
        return ResultDocument.create(DocumentKind.VERIFY, params,
                                     ["oracle", "status", "residual", "tolerance"], rows)


class ResultWriter:
    """Render documents and write them to a path or stdout."""

    @staticmethod
    def render(document: Dict[str, Any], fmt: OutputFormat = OutputFormat.CSV) -> str:
        """
        Render a document as text.

        Args:
            document: Document from ResultDocument
            fmt: Output format

        Returns:
            The serialised document
        """
        if fmt == OutputFormat.JSON:
            payload = {
                "meta": _json_value(document["meta"]),
                "rows": [
                    {column: _json_value(value) for column, value in zip(document["columns"], row)}
                    for row in document["rows"]
                ],
            }
            return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"

        buffer = io.StringIO()
        for key, value in document["meta"].items():
            buffer.write(f"# {key}={format_number(value)}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(document["columns"])
        for row in document["rows"]:
            writer.writerow([format_number(value) for value in row])
        return buffer.getvalue()

    @staticmethod
    def write(document: Dict[str, Any], fmt: OutputFormat = OutputFormat.CSV,
              path: Optional[Path] = None, stream=None) -> None:
        """
        Write a rendered document.

        Raises:
            OutputError: if the file cannot be written
        """
        text = ResultWriter.render(document, fmt)
        if path is None:
            stream.write(text)
            return
        try:
            path = Path(path)
            path.write_text(text, encoding="utf-8")
        except OSError as e:
            logger.error(f"Failed to write {path}: {e}")
            raise OutputError(f"cannot write {path}: {e}") from e
        logger.info(f"Wrote {len(document['rows'])} rows to {path}")


class ResultParser:
    """Read documents written by ResultWriter."""

    @staticmethod
    def parse_csv(text: str) -> Dict[str, Any]:
        """
        Parse a CSV document.

        Returns:
            {"meta": {key: str}, "columns": [...], "rows": [[float or str]]}

        Raises:
            ValueError: if the header row is missing
        """
        meta = {}
        body = []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = value
            elif line:
                body.append(line)
        if not body:
            raise ValueError("Missing header row")
        reader = csv.reader(body)
        columns = next(reader)
        rows: List[List[Any]] = []
        for row in reader:
            parsed = []
            for value in row:
                try:
                    parsed.append(float(value))
                except ValueError:
                    parsed.append(value)
            rows.append(parsed)
        return {"meta": meta, "columns": columns, "rows": rows}

    @staticmethod
    def parse_json(text: str) -> Dict[str, Any]:
        """
        Parse a JSON document.

        Raises:
            ValueError: on invalid JSON or a missing meta block
        """
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            logger.error(f"Invalid JSON: {e}")
            raise ValueError(f"Invalid JSON: {e}")
        if "meta" not in document or "rows" not in document:
            raise ValueError("Missing meta or rows")
        return document
