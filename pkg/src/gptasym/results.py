"""Boundary-value results shared by the expansions and the forward oracle."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

SCHEMA_VERSION = 1


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


@dataclass
class BoundaryResult:
    """Values of a boundary quantity on the nodes of the domain boundary.

    ``quantity`` is ``"trace"`` (Neumann data given, ``u`` returned) or
    ``"flux"`` (Dirichlet data given, ``du/dnu`` returned). ``reference``
    holds the inclusion-free counterpart (``U`` or ``dV/dnu``), and
    ``terms`` the individual correction contributions, which sum to
    ``values - reference``.
    """

    nodes: np.ndarray
    values: np.ndarray
    reference: np.ndarray
    quantity: str = "trace"
    terms: dict[str, np.ndarray] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @property
    def correction(self) -> np.ndarray:
        return self.values - self.reference

    def max_abs_diff(self, other) -> float:
        v = other.values if isinstance(other, BoundaryResult) else np.asarray(other)
        return float(np.abs(self.values - v).max())

    def to_json(self) -> str:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "quantity": self.quantity,
            "metadata": _clean(self.metadata),
            "nodes": _clean(self.nodes),
            "reference": _clean(self.reference),
            "values": _clean(self.values),
            "terms": {name: _clean(v) for name, v in self.terms.items()},
        }
        return json.dumps(doc, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["# schema_version", SCHEMA_VERSION])
        ref = "U" if self.quantity == "trace" else "dV_dnu"
        val = "u" if self.quantity == "trace" else "du_dnu"
        names = list(self.terms)
        w.writerow(["node", "x1", "x2", ref, val, *names])
        for p in range(self.nodes.shape[0]):
            row = [p, repr(float(self.nodes[p, 0])), repr(float(self.nodes[p, 1]))]
            row += [repr(float(self.reference[p])), repr(float(self.values[p]))]
            row += [repr(float(self.terms[n][p])) for n in names]
            w.writerow(row)
        return buf.getvalue()

    @classmethod
    def from_json(cls, text: str) -> "BoundaryResult":
        doc = json.loads(text)
        return cls(
            nodes=np.asarray(doc["nodes"], dtype=float),
            values=np.asarray(doc["values"], dtype=float),
            reference=np.asarray(doc["reference"], dtype=float),
            quantity=doc["quantity"],
            terms={k: np.asarray(v, dtype=float) for k, v in doc["terms"].items()},
            metadata=doc["metadata"],
        )
