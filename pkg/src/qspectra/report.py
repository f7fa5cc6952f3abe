"""Verification report records and their JSON form."""
from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class CellResult:
    m: int
    n: int
    k: int
    status: str  # "pass" | "fail"
    ms: float = 0.0
    witness: str | None = None
    detail: str | None = None  # both sides, shown in text reports only

    def to_dict(self, timings: bool = False) -> dict:
        # ms is null unless asked for, so untimed reports are reproducible
        d = {"m": self.m, "n": self.n, "k": self.k, "status": self.status,
             "ms": round(self.ms, 3) if timings else None}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class VerificationReport:
    identity: str
    mode: str
    seed: int | None
    cells: list[CellResult] = field(default_factory=list)

    @property
    def n_pass(self) -> int:
        return sum(c.status == "pass" for c in self.cells)

    @property
    def n_fail(self) -> int:
        return sum(c.status != "pass" for c in self.cells)

    @property
    def passed(self) -> bool:
        return self.n_fail == 0

    @property
    def grid(self) -> list[tuple[int, int, int]]:
        return [(c.m, c.n, c.k) for c in self.cells]

    def first_failure(self) -> CellResult | None:
        return next((c for c in self.cells if c.status != "pass"), None)

    def to_dict(self, timings: bool = False) -> dict:
        """Stable field order; ``ms`` is null unless ``timings`` is set so
        that repeated runs serialize byte-identically."""
        return {
            "identity": self.identity,
            "mode": self.mode,
            "seed": self.seed,
            "cells": [c.to_dict(timings) for c in self.cells],
            "summary": {"pass": self.n_pass, "fail": self.n_fail},
        }

    def to_json(self, timings: bool = False, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(timings), indent=indent)

    def to_text(self, timings: bool = False) -> str:
        lines = [f"{self.identity} [{self.mode}" + (f", seed={self.seed}" if self.seed is not None else "") + "]"]
        for c in self.cells:
            line = f"  m={c.m} n={c.n} k={c.k}: {c.status.upper()}"
            if timings:
                line += f" ({c.ms:.1f} ms)"
            lines.append(line)
            if c.detail:
                lines.append(f"    {c.detail}")
            if c.witness:
                lines.append(f"    witness: {c.witness}")
        lines.append(f"  summary: {self.n_pass} pass, {self.n_fail} fail")
        return "\n".join(lines)


def load_report(d: dict) -> VerificationReport:
    """Inverse of ``VerificationReport.to_dict``."""
    cells = [CellResult(c["m"], c["n"], c["k"], c["status"], c.get("ms") or 0.0, c.get("witness"))
             for c in d["cells"]]
    return VerificationReport(d["identity"], d["mode"], d.get("seed"), cells)
