"""Sparse exact-rational matrices with rank, kernel and solve.

Elimination is Bareiss-style fraction-free: rows are scaled to integers
once, and the two-term pivot update divides exactly by the previous
pivot, so intermediate entries stay integral.  Pivot rows are chosen by
smallest bit length of the pivot entry; the column order is fixed by the
caller, which is what makes reductions reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _to_int_row(row):
    """Scale a sparse Fraction row to integers (content not removed)."""
    denom = 1
    for v in row.values():
        v = Fraction(v)
        denom = denom * v.denominator // gcd(denom, v.denominator)
    out = {}
    for j, v in row.items():
        v = Fraction(v)
        iv = v.numerator * (denom // v.denominator)
        if iv:
            out[j] = iv
    return out


def _reduce_content(row):
    g = 0
    for v in row.values():
        g = gcd(g, abs(v))
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return dict(row)


class Echelon:
    """Integer row echelon accumulator with a fixed column order.

    Rows are added one at a time; each is reduced against the current
    pivots (fraction-free two-term updates) and, if nonzero, becomes a
    new pivot row on its leading column.
    """

    def __init__(self, ncols):
        self.ncols = ncols
        self.pivots = {}  # col -> integer row dict

    def _reduce_row(self, row):
        while row:
            lead = min(row)
            if lead not in self.pivots:
                return row, lead
            p = self.pivots[lead]
            a, b = p[lead], row[lead]
            g = gcd(abs(a), abs(b))
            ma, mb = a // g, b // g
            new = {}
            for j in set(row) | set(p):
                v = ma * row.get(j, 0) - mb * p.get(j, 0)
                if v:
                    new[j] = v
            row = new
        return row, None

    def add_row(self, frac_row):
        """Insert a row (dict col->Fraction); returns its pivot col or None."""
        row = _to_int_row(frac_row)
        row, lead = self._reduce_row(row)
        if lead is None:
            return None
        self.pivots[lead] = _reduce_content(row)
        return lead

    def residual(self, frac_row):
        """The row fully reduced against all pivots, back in Fractions.

        Pivot rows are not inter-reduced, so elimination proceeds by
        repeatedly clearing the smallest pivot column still present;
        a pivot row has no entries before its own lead, which makes
        this terminate.
        """
        out = {j: Fraction(v) for j, v in frac_row.items() if v}
        while True:
            hit = None
            for j in sorted(out):
                if j in self.pivots:
                    hit = j
                    break
            if hit is None:
                return out
            p = self.pivots[hit]
            factor = out[hit] / p[hit]
            for j, v in p.items():
                nv = out.get(j, Fraction(0)) - factor * v
                if nv:
                    out[j] = nv
                else:
                    out.pop(j, None)

    def rank(self):
        return len(self.pivots)

    def pivot_columns(self):
        return sorted(self.pivots)


class RationalMatrix:
    """Sparse matrix over Q; rows and columns carry caller-chosen keys."""

    def __init__(self, row_keys, col_keys, entries=None):
        self.row_keys = list(row_keys)
        self.col_keys = list(col_keys)
        self.col_index = {k: i for i, k in enumerate(self.col_keys)}
        self.rows = [dict() for _ in self.row_keys]
        if entries:
            for (i, j), v in entries.items():
                self.set(i, j, v)

    @classmethod
    def from_rows(cls, rows, col_keys=None, row_keys=None):
        """rows: list of dicts mapping column key (or index) -> value."""
        if col_keys is None:
            cols = sorted({j for r in rows for j in r}, key=repr)
        else:
            cols = list(col_keys)
        m = cls(row_keys if row_keys is not None else range(len(rows)), cols)
        ci = m.col_index
        for i, r in enumerate(rows):
            for j, v in r.items():
                v = Fraction(v)
                if v:
                    m.rows[i][ci[j]] = v
        return m

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.col_keys)

    def set(self, i, j, v):
        v = Fraction(v)
        jj = self.col_index[j] if j in self.col_index else j
        if v:
            self.rows[i][jj] = v
        else:
            self.rows[i].pop(jj, None)

    def get(self, i, j):
        jj = self.col_index[j] if j in self.col_index else j
        return self.rows[i].get(jj, Fraction(0))

    def transpose(self):
        t = RationalMatrix(self.col_keys, self.row_keys)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                t.rows[j][i] = v
        return t

    def rank(self):
        ech = Echelon(self.ncols)
        for row in self.rows:
            ech.add_row(row)
        return ech.rank()

    def right_kernel(self):
        """Basis of {x : M x = 0}, x indexed like columns."""
        ech = Echelon(self.ncols)
        for row in self.rows:
            ech.add_row(row)
        pivots = ech.pivots
        pivot_cols = set(pivots)
        free_cols = [j for j in range(self.ncols) if j not in pivot_cols]
        basis = []
        for fc in free_cols:
            x = {fc: Fraction(1)}
            for pc in sorted(pivots, reverse=True):
                row = pivots[pc]
                s = sum((Fraction(v) * x.get(j, Fraction(0))
                         for j, v in row.items() if j != pc), Fraction(0))
                if s:
                    x[pc] = -s / row[pc]
            basis.append(x)
        return basis

    def left_kernel(self):
        return self.transpose().right_kernel()

    def solve(self, b):
        """One solution of M x = b, or None if inconsistent.

        ``b`` is a dict row-index -> Fraction (missing = 0).
        """
        aug_cols = self.ncols + 1
        ech = Echelon(aug_cols)
        for i, row in enumerate(self.rows):
            r = dict(row)
            bv = Fraction(b.get(i, 0))
            if bv:
                r[self.ncols] = bv
            ech.add_row(r)
        if self.ncols in ech.pivots:
            return None
        # homogeneous in (x, x_aug) with x_aug fixed to -1
        x = {self.ncols: Fraction(-1)}
        for pc in sorted(ech.pivots, reverse=True):
            row = ech.pivots[pc]
            s = Fraction(0)
            for j, v in row.items():
                if j != pc:
                    s += Fraction(v) * x.get(j, Fraction(0))
            x[pc] = -s / row[pc]
        x.pop(self.ncols)
        # verify exactly
        for i, row in enumerate(self.rows):
            s = sum((Fraction(v) * x.get(j, Fraction(0))
                     for j, v in row.items()), Fraction(0))
            if s != Fraction(b.get(i, 0)):
                return None
        return x

    def triplets(self):
        out = []
        for i, row in enumerate(self.rows):
            for j in sorted(row):
                out.append((self.row_keys[i], self.col_keys[j], row[j]))
        return out
