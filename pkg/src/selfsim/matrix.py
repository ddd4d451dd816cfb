"""Exact matrices over the ring layer.

Two matrix flavors are used by the instance families:

* upper-triangular matrices over a localized ring (``TriMat``) together
  with diagonal matrices of units (``DiagMat``), the building blocks of
  the triangular matrix groups;
* square matrices and column vectors over F_p[x] (``PolyMat``,
  ``ColumnVec``) for the affine family, with the shift-style conjugation
  by the companion matrix A computed in closed form.

In closed form, conjugation by A permutes entries cyclically and moves a
single factor of (x-1) in and out of the last row/column:

    (A b A^{-1})[i][j] = b[i+1 mod n][j+1 mod n] * (x-1)^eps,

with eps = +1 when j is the last index (and i is not), eps = -1 when i is
the last index (and j is not), and eps = 0 otherwise.  Exactness of the
eps = -1 division is enforced and fails precisely off the affine Borel
subgroup.  This avoids a rational-function matrix type; a naive rational
conjugation exists only in the tests as an oracle.
"""

from __future__ import annotations

from .ring import (
    NEG_INF,
    DensePoly,
    LocalizedRing,
    NotDivisible,
    NotInvertible,
    SFraction,
    Unit,
)


# Column vectors over F_p[x] are plain tuples of DensePoly values.
ColumnVec = tuple


class TriMat:
    """An upper-triangular square matrix over a localized ring."""

    __slots__ = ("ring", "size", "rows", "_hash")

    def __init__(self, ring: LocalizedRing, rows):
        self.ring = ring
        self.rows = tuple(tuple(row) for row in rows)
        self.size = len(self.rows)
        for i, row in enumerate(self.rows):
            if len(row) != self.size:
                raise ValueError("non-square matrix")
            for j in range(i):
                if not row[j].is_zero:
                    raise ValueError("entry below the diagonal is nonzero")
        self._hash = hash(self.rows)

    @staticmethod
    def identity(ring: LocalizedRing, size: int) -> "TriMat":
        return TriMat(
            ring,
            [
                [ring.one if i == j else ring.zero for j in range(size)]
                for i in range(size)
            ],
        )

    @property
    def is_unitriangular(self) -> bool:
        one = self.ring.one
        return all(self.rows[i][i] == one for i in range(self.size))

    def __mul__(self, other: "TriMat") -> "TriMat":
        if self.size != other.size:
            raise ValueError("size mismatch")
        n = self.size
        zero = self.ring.zero
        out = [[zero] * n for _ in range(n)]
        a, b = self.rows, other.rows
        for i in range(n):
            for j in range(i, n):
                acc = zero
                for k in range(i, j + 1):
                    x = a[i][k]
                    y = b[k][j]
                    if not (x.is_zero or y.is_zero):
                        acc = acc + x * y
                out[i][j] = acc
        return TriMat(self.ring, out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TriMat) and self.rows == other.rows

    def __hash__(self) -> int:
        return self._hash

    def to_json(self) -> list:
        return [[entry.to_json() for entry in row] for row in self.rows]

    def render(self) -> str:
        return "[" + ",".join(
            "[" + ",".join(e.render() for e in row) + "]" for row in self.rows
        ) + "]"

    def __repr__(self) -> str:
        return f"TriMat({self.render()})"


def tri_inverse(t: TriMat) -> TriMat:
    """Invert an upper-triangular matrix with unit diagonal entries.

    Back substitution: the inverse diagonal is entrywise inverse and, for
    i < j, b[i][j] = -a[i][i]^{-1} * sum_{i<k<=j} a[i][k] b[k][j].
    """
    n = t.size
    ring = t.ring
    a = t.rows
    zero = ring.zero
    b = [[zero] * n for _ in range(n)]
    inv_diag = []
    for i in range(n):
        d = a[i][i]
        if d == ring.one:
            inv_diag.append(ring.one)
        else:
            try:
                inv_diag.append(d.inverse_unit())
            except NotInvertible as exc:
                raise NotInvertible(f"diagonal entry {d.render()} is not a unit") from exc
        b[i][i] = inv_diag[i]
    for i in range(n - 1, -1, -1):
        for j in range(i + 1, n):
            acc = zero
            for k in range(i + 1, j + 1):
                x = a[i][k]
                y = b[k][j]
                if not (x.is_zero or y.is_zero):
                    acc = acc + x * y
            b[i][j] = -(inv_diag[i] * acc)
    return TriMat(ring, b)


class DiagMat:
    """A diagonal matrix of localized-ring units."""

    __slots__ = ("entries", "_hash")

    def __init__(self, entries):
        self.entries = tuple(entries)
        if not all(isinstance(u, Unit) for u in self.entries):
            raise ValueError("diagonal entries must be units")
        self._hash = hash(self.entries)

    @property
    def size(self) -> int:
        return len(self.entries)

    def __mul__(self, other: "DiagMat") -> "DiagMat":
        return DiagMat(tuple(a * b for a, b in zip(self.entries, other.entries)))

    def inv(self) -> "DiagMat":
        return DiagMat(tuple(u.inv() for u in self.entries))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DiagMat) and self.entries == other.entries

    def __hash__(self) -> int:
        return self._hash

    def render(self) -> str:
        return "diag(" + ",".join(u.render() for u in self.entries) + ")"


class PolyMat:
    """A square matrix over F_p[x]."""

    __slots__ = ("p", "size", "rows", "_hash")

    def __init__(self, p: int, rows):
        self.p = p
        self.rows = tuple(tuple(row) for row in rows)
        self.size = len(self.rows)
        for row in self.rows:
            if len(row) != self.size:
                raise ValueError("non-square matrix")
        self._hash = hash(self.rows)

    @staticmethod
    def identity(p: int, size: int) -> "PolyMat":
        one, zero = DensePoly.one(p), DensePoly.zero(p)
        return PolyMat(p, [[one if i == j else zero for j in range(size)] for i in range(size)])

    def __mul__(self, other: "PolyMat") -> "PolyMat":
        if self.size != other.size:
            raise ValueError("size mismatch")
        n = self.size
        zero = DensePoly.zero(self.p)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    x = self.rows[i][k]
                    y = other.rows[k][j]
                    if not (x.is_zero or y.is_zero):
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return PolyMat(self.p, out)

    def apply(self, v):
        """Matrix-vector product, v a sequence of polynomials (a column)."""
        n = self.size
        zero = DensePoly.zero(self.p)
        out = []
        for i in range(n):
            acc = zero
            for k in range(n):
                x = self.rows[i][k]
                if not (x.is_zero or v[k].is_zero):
                    acc = acc + x * v[k]
            out.append(acc)
        return tuple(out)

    def det(self) -> DensePoly:
        """Determinant by Laplace expansion (desk-scale sizes)."""

        def rec(rows, cols):
            if len(cols) == 1:
                return rows[0][cols[0]]
            acc = DensePoly.zero(self.p)
            sign = 1
            for idx, c in enumerate(cols):
                top = rows[0][c]
                if not top.is_zero:
                    sub = rec(rows[1:], cols[:idx] + cols[idx + 1 :])
                    term = top * sub
                    acc = acc + (term if sign > 0 else -term)
                sign = -sign
            return acc

        return rec(self.rows, tuple(range(self.size)))

    def inverse_gl(self) -> "PolyMat":
        """Inverse when the determinant is a nonzero constant."""
        d = self.det()
        if d.degree != 0:
            raise NotInvertible("determinant is not a nonzero constant")
        dinv = pow(d.coeffs[0], self.p - 2, self.p)
        n = self.size
        if n == 1:
            return PolyMat(self.p, [[DensePoly.constant(self.p, dinv)]])
        out = [[None] * n for _ in range(n)]
        idx = tuple(range(n))
        for i in range(n):
            for j in range(n):
                rows = tuple(self.rows[r] for r in idx if r != i)
                cols = tuple(c for c in idx if c != j)

                def rec(rws, cls):
                    if len(cls) == 1:
                        return rws[0][cls[0]]
                    acc = DensePoly.zero(self.p)
                    sign = 1
                    for k, c in enumerate(cls):
                        top = rws[0][c]
                        if not top.is_zero:
                            acc = acc + (
                                (top * rec(rws[1:], cls[:k] + cls[k + 1 :])).mul_scalar(sign)
                            )
                        sign = -sign
                    return acc

                minor = rec(rows, cols)
                out[j][i] = minor.mul_scalar(dinv if (i + j) % 2 == 0 else -dinv % self.p)
        return PolyMat(self.p, out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyMat) and self.p == other.p and self.rows == other.rows

    def __hash__(self) -> int:
        return self._hash

    def to_json(self) -> list:
        return [[e.to_json() for e in row] for row in self.rows]

    @staticmethod
    def from_json(p: int, data) -> "PolyMat":
        return PolyMat(p, [[DensePoly(p, e) for e in row] for row in data])

    def render(self) -> str:
        return "[" + ",".join(
            "[" + ",".join(e.render() for e in row) + "]" for row in self.rows
        ) + "]"

    def __repr__(self) -> str:
        return f"PolyMat({self.render()})"


def rho(c) -> int | float:
    """Maximal entry degree of a PolyMat or a column of polynomials;
    -inf for the zero matrix/vector."""
    entries = []
    if isinstance(c, PolyMat):
        for row in c.rows:
            entries.extend(row)
    else:
        entries = list(c)
    best = NEG_INF
    for e in entries:
        if not e.is_zero and e.degree > best:
            best = e.degree
    return best


def conj_by_A(b: PolyMat) -> PolyMat:
    """Conjugation by the companion-style matrix A in closed form.

    Requires every entry above the diagonal to be divisible by x-1;
    raises NotDivisible otherwise.
    """
    n = b.size
    p = b.p
    pivot = DensePoly(p, (-1, 1))
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        si = (i + 1) % n
        for j in range(n):
            sj = (j + 1) % n
            entry = b.rows[si][sj]
            if i == n - 1 and j != n - 1:
                q, r = divmod(entry, pivot)
                if not r.is_zero:
                    raise NotDivisible(
                        "entry above the diagonal is not divisible by x-1"
                    )
                entry = q
            elif j == n - 1 and i != n - 1:
                entry = entry * pivot
            out[i][j] = entry
    return PolyMat(p, out)


def apply_A(v) -> tuple:
    """The shift map (v_1, ..., v_n) -> (v_2, ..., v_n, v_1/(x-1)).

    Requires (x-1) | v_1; raises NotDivisible otherwise.
    """
    v = tuple(v)
    p = v[0].p
    pivot = DensePoly(p, (-1, 1))
    q, r = divmod(v[0], pivot)
    if not r.is_zero:
        raise NotDivisible("first coordinate is not divisible by x-1")
    return v[1:] + (q,)
