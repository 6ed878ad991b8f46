"""The outer weight polytope: exact feasibility and infeasibility certificates.

The polytope is { y in Q^n : sum(y) = 1, y >= 0, d.y >= 0 for every cut },
where each cut row d comes from a union-closed family B via
d_i = 2*|B_i| - |B|.  Feasibility is decided by a phase-1 simplex over
``fractions.Fraction`` with Bland's rule, which is exact, deterministic, and
cannot cycle.  When the polytope is empty the final dual values give
nonnegative multipliers whose combination of the cut rows is strictly
negative in every component: a self-contained infeasibility certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .families import SetFamily, UCFamily, frequencies


@dataclass(frozen=True)
class CutRow:
    """Normalized inequality d.y >= 0 derived from a union-closed family."""

    source: UCFamily
    coefficients: tuple[int, ...]

    @classmethod
    def from_family(cls, family: UCFamily) -> "CutRow":
        size = len(family.members)
        d = [2 * f - size for f in frequencies(family)]
        g = gcd(*(abs(x) for x in d)) if any(d) else 0
        if g > 1:
            d = [x // g for x in d]
        return cls(family, tuple(d))


@dataclass(frozen=True)
class FarkasCertificate:
    """Nonnegative multipliers, one per cut, with sum_k mult_k * d^k < 0
    componentwise; any y >= 0 with sum(y) = 1 would contradict them."""

    multipliers: tuple[Fraction, ...]

    def refutes(self, cuts) -> bool:
        rows = [c.coefficients for c in cuts]
        if len(self.multipliers) != len(rows):
            return False
        if any(l < 0 for l in self.multipliers):
            return False
        n = len(rows[0]) if rows else 0
        for i in range(n):
            if sum(l * row[i] for l, row in zip(self.multipliers, rows)) >= 0:
                return False
        return n > 0


class MasterPolytope:
    """Cut collection plus the simplex machinery to probe it."""

    def __init__(self, n: int):
        self.n = n
        self.cuts: list[CutRow] = []
        self._last_tableau = None

    def add_cut(self, family: UCFamily) -> "MasterPolytope":
        if not family.members:
            raise ValueError("cut family must be nonempty")
        if family.n != self.n:
            raise ValueError(f"cut ground size {family.n} != {self.n}")
        row = CutRow.from_family(family)
        if all(row.coefficients != c.coefficients for c in self.cuts):
            self.cuts.append(row)
        self._last_tableau = None
        return self

    def find_point(self) -> tuple[Fraction, ...] | None:
        """A vertex of the polytope, or None when it is empty.

        Deterministic: phase-1 simplex, Bland's rule, fixed column order
        (weights, slacks, artificials).
        """
        n = self.n
        k = len(self.cuts)
        m = 1 + k
        width = n + k + m  # y, slack per cut, artificial per row
        zero, one = Fraction(0), Fraction(1)

        rows = []
        # sum(y) = 1
        row = [zero] * (width + 1)
        for j in range(n):
            row[j] = one
        row[n + k] = one  # artificial 0
        row[width] = one  # rhs
        rows.append(row)
        # d.y - s = 0 per cut
        for c, cut in enumerate(self.cuts):
            row = [zero] * (width + 1)
            for j, d in enumerate(cut.coefficients):
                row[j] = Fraction(d)
            row[n + c] = -one
            row[n + k + 1 + c] = one
            rows.append(row)

        basis = list(range(n + k, n + k + m))
        # Reduced-cost row for min(sum of artificials): z_j = -sum_i a_ij on
        # non-artificial columns, 0 on artificials, objective = -sum(rhs).
        obj = [zero] * (width + 1)
        for j in range(width + 1):
            if n + k <= j < n + k + m:
                continue
            obj[j] = -sum(r[j] for r in rows)

        while True:
            enter = next((j for j in range(width) if obj[j] < 0), None)
            if enter is None:
                break
            leave, best = None, None
            for i in range(m):
                a = rows[i][enter]
                if a > 0:
                    ratio = rows[i][width] / a
                    if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[leave]
                    ):
                        leave, best = i, ratio
            if leave is None:
                raise AssertionError("unbounded phase-1 objective")
            piv = rows[leave][enter]
            rows[leave] = [x / piv for x in rows[leave]]
            for i in range(m):
                if i != leave and rows[i][enter] != 0:
                    f = rows[i][enter]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[leave])]
            if obj[enter] != 0:
                f = obj[enter]
                obj = [x - f * y for x, y in zip(obj, rows[leave])]
            basis[leave] = enter

        value = -obj[width]
        self._last_tableau = (obj, value)
        if value > 0:
            return None
        point = [zero] * n
        for i, b in enumerate(basis):
            if b < n:
                point[b] = rows[i][width]
        return tuple(point)

    def extract_farkas(self) -> FarkasCertificate:
        """Multipliers from the final phase-1 duals; only valid when empty."""
        if self._last_tableau is None:
            self.find_point()
        obj, value = self._last_tableau
        if value <= 0:
            raise ValueError("polytope is feasible; no Farkas certificate")
        n, k = self.n, len(self.cuts)
        # Dual of row i = 1 - reduced cost of its artificial column.
        mu = 1 - obj[n + k]
        assert mu > 0
        lambdas = tuple((1 - obj[n + k + 1 + c]) / mu for c in range(k))
        cert = FarkasCertificate(lambdas)
        assert cert.refutes(self.cuts)
        return cert
