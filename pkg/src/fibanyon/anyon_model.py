"""Fibonacci fusion-category data: labels, fusion rules, F and R symbols.

Index conventions
-----------------
An F symbol is keyed by the sextuple ``(i, j, m, k, l, n)`` and written
``F^{ijm}_{kln}``.  It is the coefficient relating the two fusion orders of
three objects ``i, j, k`` with total charge ``l``::

    |(i j)_m k ; l>  =  sum_n  F^{ijm}_{kln}  |i (j k)_n ; l>

so ``m`` runs over channels of ``i x j`` and ``n`` over channels of
``j x k``.  ``R(a, b, c)`` is the phase acquired when ``a`` and ``b`` fused
into ``c`` are exchanged counterclockwise.

The Fibonacci tables use the standard gauge: every admissible F symbol with
a vacuum external label equals one, and the all-tau block is the real
symmetric golden-ratio matrix.  This gauge reproduces the composed 4x4 basis
transform used by :mod:`fibanyon.braid_space` entry for entry.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field, replace
from enum import IntEnum
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

PHI = (1.0 + math.sqrt(5.0)) / 2.0
"""Golden ratio, the quantum dimension of the tau anyon."""


class AnyonLabel(IntEnum):
    VACUUM = 0
    TAU = 1


VACUUM = AnyonLabel.VACUUM
TAU = AnyonLabel.TAU

Label = int  # AnyonLabel or plain 0/1
FKey = tuple[int, int, int, int, int, int]
RKey = tuple[int, int, int]


@dataclass(frozen=True)
class FusionData:
    """Fusion rules and quantum dimensions of a (small) fusion category."""

    labels: tuple[int, ...]
    fusion_table: dict[tuple[int, int], frozenset[int]]
    qdim: dict[int, float]
    phi: float = PHI

    def __post_init__(self) -> None:
        if abs(self.phi**2 - self.phi - 1.0) > 1e-12:
            raise ValueError("phi does not satisfy phi^2 = phi + 1")
        for (a, b), out in self.fusion_table.items():
            if a not in self.labels or b not in self.labels or not out <= set(self.labels):
                raise ValueError(f"fusion rule {(a, b)} -> {set(out)} uses unknown labels")

    def fuse(self, a: Label, b: Label) -> frozenset[int]:
        """Set of possible fusion outcomes of ``a x b``."""
        return self.fusion_table[(int(a), int(b))]

    def admissible(self, a: Label, b: Label, c: Label) -> bool:
        """Whether ``c`` is a channel of ``a x b``."""
        return int(c) in self.fuse(a, b)

    @classmethod
    def fibonacci(cls) -> "FusionData":
        v, t = int(VACUUM), int(TAU)
        table = {
            (v, v): frozenset({v}),
            (v, t): frozenset({t}),
            (t, v): frozenset({t}),
            (t, t): frozenset({v, t}),
        }
        return cls(labels=(v, t), fusion_table=table, qdim={v: 1.0, t: PHI})

    @classmethod
    def trivial(cls) -> "FusionData":
        """Category with only the vacuum label (used as a degenerate control)."""
        v = int(VACUUM)
        return cls(labels=(v,), fusion_table={(v, v): frozenset({v})}, qdim={v: 1.0})


@dataclass(frozen=True)
class FSymbolTable:
    """Sparse table of F symbols over a :class:`FusionData`.

    Only fusion-admissible sextuples are stored; lookups of anything else
    return zero.
    """

    fusion: FusionData
    entries: dict[FKey, complex] = field(default_factory=dict)

    def admissible(self, i: Label, j: Label, m: Label, k: Label, l: Label, n: Label) -> bool:
        fu = self.fusion
        return (
            fu.admissible(i, j, m)
            and fu.admissible(m, k, l)
            and fu.admissible(j, k, n)
            and fu.admissible(i, n, l)
        )

    def get(self, i: Label, j: Label, m: Label, k: Label, l: Label, n: Label) -> complex:
        return self.entries.get((int(i), int(j), int(m), int(k), int(l), int(n)), 0.0 + 0.0j)

    def f_matrix(self, i: Label, j: Label, k: Label, l: Label) -> tuple[np.ndarray, list[int], list[int]]:
        """The block ``[F^{ijk}_l]_{mn}`` over admissible ``(m, n)``.

        Returns ``(matrix, m_labels, n_labels)``.  Non-admissible external
        labels yield a 0x0 block.
        """
        fu = self.fusion
        ms = [m for m in fu.labels if fu.admissible(i, j, m) and fu.admissible(m, k, l)]
        ns = [n for n in fu.labels if fu.admissible(j, k, n) and fu.admissible(i, n, l)]
        mat = np.array(
            [[self.get(i, j, m, k, l, n) for n in ns] for m in ms], dtype=complex
        ).reshape(len(ms), len(ns))
        return mat, ms, ns

    def with_entry(self, key: FKey, value: complex) -> "FSymbolTable":
        """Copy of the table with one entry replaced (negative-control hook)."""
        new = dict(self.entries)
        new[key] = value
        return replace(self, entries=new)

    @classmethod
    def fibonacci(cls, fusion: FusionData | None = None) -> "FSymbolTable":
        fusion = fusion or FusionData.fibonacci()
        phi = fusion.phi
        golden = {
            (0, 0): 1.0 / phi,
            (0, 1): 1.0 / math.sqrt(phi),
            (1, 0): 1.0 / math.sqrt(phi),
            (1, 1): -1.0 / phi,
        }
        entries: dict[FKey, complex] = {}
        labels = fusion.labels
        table = cls(fusion)
        for i in labels:
            for j in labels:
                for k in labels:
                    for l in labels:
                        for m in labels:
                            for n in labels:
                                if not table.admissible(i, j, m, k, l, n):
                                    continue
                                if (i, j, k, l) == (1, 1, 1, 1):
                                    entries[(i, j, m, k, l, n)] = complex(golden[(m, n)])
                                else:
                                    entries[(i, j, m, k, l, n)] = 1.0 + 0.0j
        return replace(table, entries=entries)


@dataclass(frozen=True)
class RSymbolTable:
    """Exchange phases ``R(a, b, c)`` for ``a x b -> c``."""

    fusion: FusionData
    entries: dict[RKey, complex] = field(default_factory=dict)

    def get(self, a: Label, b: Label, c: Label) -> complex:
        return self.entries.get((int(a), int(b), int(c)), 0.0 + 0.0j)

    def with_entry(self, key: RKey, value: complex) -> "RSymbolTable":
        new = dict(self.entries)
        new[key] = value
        return replace(self, entries=new)

    @classmethod
    def fibonacci(cls, fusion: FusionData | None = None) -> "RSymbolTable":
        fusion = fusion or FusionData.fibonacci()
        entries: dict[RKey, complex] = {}
        for a in fusion.labels:
            for b in fusion.labels:
                for c in fusion.fuse(a, b):
                    if (a, b) == (1, 1):
                        entries[(a, b, c)] = (
                            cmath.exp(-4j * math.pi / 5) if c == 0 else cmath.exp(3j * math.pi / 5)
                        )
                    else:
                        entries[(a, b, c)] = 1.0 + 0.0j
        return cls(fusion, entries)


@dataclass(frozen=True)
class ConsistencyReport:
    name: str
    max_residual: float
    checked: int

    @property
    def passed(self) -> bool:
        return self.max_residual < 1e-12


def _label_tuples(labels: Iterable[int], repeat: int) -> Iterator[tuple[int, ...]]:
    labels = tuple(labels)
    idx = [0] * repeat
    while True:
        yield tuple(labels[i] for i in idx)
        pos = repeat - 1
        while pos >= 0:
            idx[pos] += 1
            if idx[pos] < len(labels):
                break
            idx[pos] = 0
            pos -= 1
        if pos < 0:
            return


def verify_pentagon(ftable: FSymbolTable) -> ConsistencyReport:
    """Exhaustive pentagon identity over all label assignments.

    With two labels there are at most 2^9 tuples, so the loop is exact and
    fast.  Non-admissible assignments contribute zeros on both sides.
    """
    f = ftable.get
    labels = ftable.fusion.labels
    worst = 0.0
    checked = 0
    for a, b, c, d, e, p, g, k, l in _label_tuples(labels, 9):
        lhs = f(p, c, g, d, e, l) * f(a, b, p, l, e, k)
        rhs = sum(
            f(a, b, p, c, g, h) * f(a, h, g, d, e, k) * f(b, c, h, d, k, l) for h in labels
        )
        worst = max(worst, abs(lhs - rhs))
        checked += 1
    return ConsistencyReport("pentagon", worst, checked)


def verify_hexagon(ftable: FSymbolTable, rtable: RSymbolTable) -> ConsistencyReport:
    """Both hexagon identities (for R and for its inverse), exhaustively."""
    f = ftable.get
    r = rtable.get
    labels = ftable.fusion.labels
    worst = 0.0
    checked = 0

    def r_inv(a: int, b: int, c: int) -> complex:
        val = r(a, b, c)
        return 1.0 / val if val != 0 else 0.0

    for a, b, c, d, e, g in _label_tuples(labels, 6):
        lhs = r(c, a, e) * f(a, c, e, b, d, g) * r(c, b, g)
        rhs = sum(f(c, a, e, b, d, p) * r(c, p, d) * f(a, b, p, c, d, g) for p in labels)
        worst = max(worst, abs(lhs - rhs))
        lhs_inv = r_inv(a, c, e) * f(a, c, e, b, d, g) * r_inv(b, c, g)
        rhs_inv = sum(f(c, a, e, b, d, p) * r_inv(p, c, d) * f(a, b, p, c, d, g) for p in labels)
        worst = max(worst, abs(lhs_inv - rhs_inv))
        checked += 2
    return ConsistencyReport("hexagon", worst, checked)


def verify_f_unitarity(ftable: FSymbolTable) -> ConsistencyReport:
    """Every F block must be unitary over its admissible index sets."""
    labels = ftable.fusion.labels
    worst = 0.0
    checked = 0
    for i, j, k, l in _label_tuples(labels, 4):
        mat, ms, ns = ftable.f_matrix(i, j, k, l)
        if not ms or not ns:
            continue
        if len(ms) != len(ns):
            worst = max(worst, 1.0)
            continue
        worst = max(worst, float(np.abs(mat @ mat.conj().T - np.eye(len(ms))).max()))
        checked += 1
    return ConsistencyReport("f-unitarity", worst, checked)


# ---------------------------------------------------------------------------
# JSON serialization (complex numbers as [re, im] pairs)
# ---------------------------------------------------------------------------

_LABEL_NAMES = {0: "vacuum", 1: "tau"}
_NAME_LABELS = {v: k for k, v in _LABEL_NAMES.items()}


def _key_str(key: tuple[int, ...]) -> str:
    return ",".join(str(x) for x in key)


def _parse_key(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(","))


def category_to_dict(
    fusion: FusionData, ftable: FSymbolTable, rtable: RSymbolTable
) -> dict:
    return {
        "labels": [_LABEL_NAMES.get(l, str(l)) for l in fusion.labels],
        "fusion": {
            _key_str(k): sorted(v) for k, v in sorted(fusion.fusion_table.items())
        },
        "qdim": {str(k): v for k, v in sorted(fusion.qdim.items())},
        "f_symbols": {
            _key_str(k): [v.real, v.imag] for k, v in sorted(ftable.entries.items())
        },
        "r_symbols": {
            _key_str(k): [v.real, v.imag] for k, v in sorted(rtable.entries.items())
        },
    }


def category_from_dict(data: dict) -> tuple[FusionData, FSymbolTable, RSymbolTable]:
    labels = tuple(
        _NAME_LABELS[name] if name in _NAME_LABELS else int(name)
        for name in data["labels"]
    )
    fusion = FusionData(
        labels=labels,
        fusion_table={
            _parse_key(k)[:2]: frozenset(v) for k, v in data["fusion"].items()
        },
        qdim={int(k): float(v) for k, v in data["qdim"].items()},
    )
    ftable = FSymbolTable(
        fusion,
        {
            _parse_key(k): complex(re, im)
            for k, (re, im) in data["f_symbols"].items()
        },
    )
    rtable = RSymbolTable(
        fusion,
        {
            _parse_key(k): complex(re, im)
            for k, (re, im) in data["r_symbols"].items()
        },
    )
    return fusion, ftable, rtable


def save_category(path: str | Path, fusion: FusionData, ftable: FSymbolTable, rtable: RSymbolTable) -> None:
    Path(path).write_text(json.dumps(category_to_dict(fusion, ftable, rtable), indent=2, sort_keys=True))


def load_category(path: str | Path) -> tuple[FusionData, FSymbolTable, RSymbolTable]:
    return category_from_dict(json.loads(Path(path).read_text()))
