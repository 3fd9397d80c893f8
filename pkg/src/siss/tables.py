"""Maximum-gap tables: recomputation, printed reference values and provenance tags."""

import math
from dataclasses import dataclass

from .constants import table_constant
from .sampling import gap_threshold, gap_threshold_bandlimited
from .spectral import bernstein_constant_closed

# Values as printed, row k -> entries for nu = 1..4.
PRINTED = {
    "T1": {
        1: (1, 2, 3, 4),
        2: (1.5006, 3.0112, 4.5018, 6.0024),
        3: (2, 4, 6, 8),
        4: (1.9169, 3.8338, 5.7507, 7.6676),
        5: (2.361, 4.722, 7.083, 9.444),
        6: (2.8094, 5.6188, 8.4282, 11.2376),
        7: (3.2608, 6.5216, 9.7824, 13.0432),
        8: (3.7144, 7.4288, 11.1432, 14.8576),
        9: (4.1697, 8.3394, 12.5091, 16.6788),
        10: (4.6263, 9.2526, 13.8789, 18.5052),
        20: (10.0044, 20.0088, 30.0132, 40.0176),
        40: (19.5623, 39.1246, 58.6869, 78.2492),
    },
    "T2": {
        1: (0.9999, 1.9998, 2.9997, 3.9996),
        2: (1.5055, 3.011, 4.5165, 6.022),
        3: (1.9975, 3.995, 5.9925, 7.99),
    },
    "T3": {
        1: (0.9999, 1.9998, 2.9997, 3.9996),
        2: (1.5056, 3.0112, 4.5168, 6.0224),
        3: (1.9999, 3.9998, 5.9997, 7.996),
    },
}

SPLINE_ORDER = {"T2": 8, "T3": 10}
DISCREPANCY = "paper-discrepancy"


class TableError(ValueError):
    pass


@dataclass(frozen=True)
class TableSpec:
    table: str
    ks: tuple = None
    nus: tuple = (1, 2, 3, 4)
    m: int = None

    def resolved(self):
        if self.table not in PRINTED:
            raise TableError(f"unknown table {self.table!r}")
        ks = tuple(self.ks) if self.ks is not None else tuple(PRINTED[self.table])
        m = self.m if self.m is not None else SPLINE_ORDER.get(self.table)
        return ks, tuple(self.nus), m


@dataclass(frozen=True)
class Cell:
    k: int
    nu: int
    threshold: float
    method: str
    printed: float = None
    tag: str = ""

    def as_row(self):
        return {"k": self.k, "nu": self.nu, "threshold": self.threshold,
                "method": self.method, "printed": self.printed, "tag": self.tag}


def render_table(spec, tolerance=2e-3):
    """Recompute every cell against its printed value.

    All cells of a row share one constant c_k, so a row with any cell off by more
    than ``tolerance`` is tagged as a whole; tagged cells keep both numbers.
    """
    ks, nus, m = spec.resolved()
    cells = []
    for k in ks:
        c = table_constant(k)
        if spec.table == "T1":
            base = gap_threshold_bandlimited(1, k, c.value, math.pi)
        else:
            if m < 2 * k + 1:
                raise TableError(f"spline order m={m} needs m >= 2k+1 for k={k}")
            M = bernstein_constant_closed("bspline", 2 * k, m)
            base = gap_threshold(1, k, c.value, M)
        printed = PRINTED[spec.table].get(k, ())
        row = []
        for nu in nus:
            ref = printed[nu - 1] if 1 <= nu <= len(printed) else None
            row.append((nu, nu * base, ref))
        off = any(ref is not None and abs(v - ref) > tolerance for _, v, ref in row)
        for nu, v, ref in row:
            tag = DISCREPANCY if off and ref is not None else ""
            cells.append(Cell(k, nu, v, c.method, ref, tag))
    return cells


def table_csv(cells):
    lines = ["k,nu,threshold,method,printed,tag"]
    for c in cells:
        printed = "" if c.printed is None else repr(float(c.printed))
        lines.append(f"{c.k},{c.nu},{c.threshold:.6f},{c.method},{printed},{c.tag}")
    return "\n".join(lines) + "\n"


def table_markdown(cells):
    """Row k, columns nu; discrepancies show the printed value in brackets."""
    nus = sorted({c.nu for c in cells})
    ks = sorted({c.k for c in cells})
    grid = {(c.k, c.nu): c for c in cells}
    lines = ["| k \\ nu | " + " | ".join(str(n) for n in nus) + " |",
             "|---" * (len(nus) + 1) + "|"]
    for k in ks:
        parts = []
        for n in nus:
            c = grid[(k, n)]
            txt = f"{c.threshold:.4f}"
            if c.tag:
                txt += f" [{c.printed}]"
            parts.append(txt)
        lines.append(f"| {k} | " + " | ".join(parts) + " |")
    return "\n".join(lines) + "\n"
