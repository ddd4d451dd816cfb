"""Center quotients of triangular matrix groups over a localized ring.

An element is stored factored as N * D with N unitriangular over
A = F_p[1/x, 1/f_1, ..., 1/f_{n-1}] and D diagonal with entries in the
unit group F_p^* x <f_0, ..., f_{n-1}>.  Scalar matrices form the center,
so equality is taken modulo scalars; the canonical representative scales
D to make its first entry 1 (N is unchanged by scalar factors).

The distinguished subgroup H consists of the elements whose N-part entry
at (i, j) is divisible by (x-1)^(j-i); the endomorphism performs exactly
those divisions and fixes D.  The transversal consists of the
unitriangular matrices with polynomial entries of degree < j-i at (i, j),
of which there are p^l, l = sum_i i(m-i).

Locating the coset of an element never needs the full p^l search: writing
the required cofactor condition superdiagonal by superdiagonal gives, for
each diagonal distance delta, a congruence modulo (x-1)^delta whose unique
solution of degree < delta is the corresponding entry of t^{-1}.  The
exhaustive search survives as `coset_index_exhaustive`, the test oracle.
"""

from __future__ import annotations

import itertools

from ..engine import Instance
from ..matrix import TriMat, tri_inverse
from ..ring import (
    DensePoly,
    LocalizedRing,
    SFraction,
    Unit,
    divide_exact,
    validate_config,
)
from . import InstanceConfigError


class BorelElem:
    """N * D modulo scalars, canonicalized so the first diagonal unit is 1."""

    __slots__ = ("n_part", "d_part", "_hash")

    def __init__(self, n_part: TriMat, d_part: tuple, _canonical: bool = False):
        if not _canonical:
            raise ValueError("use BorelInstance.make_element")
        self.n_part = n_part
        self.d_part = d_part
        self._hash = hash((n_part, d_part))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BorelElem)
            and self.n_part == other.n_part
            and self.d_part == other.d_part
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"BorelElem({self.n_part.render()}, {[u.render() for u in self.d_part]})"


class BorelInstance(Instance):
    family = "borel"

    def __init__(self, p: int, m: int, polys, max_degree: int = 4096):
        if m < 2:
            raise InstanceConfigError("matrix size m must be >= 2")
        report = validate_config(p, polys)
        if not report.ok:
            raise InstanceConfigError("; ".join(report.problems))
        self.validation = report
        self.p = p
        self.m = m
        self.ring = LocalizedRing(p, polys)
        self.n = len(self.ring.polys)
        self.l_exponent = sum(i * (m - i) for i in range(1, m))
        self._degree = p ** self.l_exponent
        if self._degree > max_degree:
            raise InstanceConfigError(
                f"transversal size p^l = {self._degree} exceeds the enumeration bound {max_degree}"
            )
        one = self.ring.unit_one()
        self._unit_ident = (one,) * m
        self._identity = BorelElem(TriMat.identity(self.ring, m), self._unit_ident, _canonical=True)
        self._index_of_n = None

    # -- element construction ---------------------------------------------

    def make_element(self, n_part: TriMat, d_part) -> BorelElem:
        """Canonicalize an N * D pair modulo the scalar center."""
        d_part = tuple(d_part)
        if len(d_part) != self.m or n_part.size != self.m:
            raise ValueError("size mismatch")
        lead = d_part[0]
        if not lead.is_one:
            scale = lead.inv()
            d_part = tuple(u * scale for u in d_part)
        return BorelElem(n_part, d_part, _canonical=True)

    def from_matrix(self, rows) -> BorelElem:
        """Element from a full upper-triangular matrix of ring fractions
        whose diagonal entries are units."""
        m = self.m
        d_part = tuple(rows[i][i].as_unit() for i in range(m))
        inv = [u.inv() for u in d_part]
        n_rows = []
        for i in range(m):
            row = []
            for j in range(m):
                if j < i:
                    row.append(self.ring.zero)
                elif j == i:
                    row.append(self.ring.one)
                else:
                    row.append(rows[i][j].mul_unit(inv[j]))
            n_rows.append(row)
        return self.make_element(TriMat(self.ring, n_rows), d_part)

    def matrix_entry(self, g: BorelElem, i: int, j: int) -> SFraction:
        """Entry (i, j) of the representative matrix N * D."""
        return g.n_part.rows[i][j].mul_unit(g.d_part[j])

    def from_literal(self, data: dict) -> BorelElem:
        """Element from {"n": [[coeffs or {num, den}, ...], ...],
        "d": [{"c": int, "exps": [ints]}, ...]}."""
        m = self.m
        rows = []
        raw_n = data.get("n")
        for i in range(m):
            row = []
            for j in range(m):
                if j < i:
                    row.append(self.ring.zero)
                elif j == i:
                    row.append(self.ring.one)
                else:
                    cell = raw_n[i][j] if raw_n is not None else []
                    row.append(SFraction.from_json(self.ring, cell))
            rows.append(row)
        units = []
        raw_d = data.get("d")
        for i in range(m):
            if raw_d is None:
                units.append(self.ring.unit_one())
            else:
                units.append(
                    Unit(self.ring, raw_d[i].get("c", 1), raw_d[i].get("exps", (0,) * self.n))
                )
        return self.make_element(TriMat(self.ring, rows), units)

    # -- contract -----------------------------------------------------------

    @property
    def degree(self) -> int:
        return self._degree

    def _superdiag_polys(self, delta: int):
        """All polynomials of degree < delta, zero first, in a fixed order."""
        out = []
        for coeffs in itertools.product(range(self.p), repeat=delta):
            out.append(DensePoly(self.p, coeffs))
        return out

    def _build_transversal(self):
        m = self.m
        positions = [(i, j) for i in range(m) for j in range(i + 1, m)]
        choices = [self._superdiag_polys(j - i) for (i, j) in positions]
        elems = []
        index = {}
        for combo in itertools.product(*choices):
            rows = [
                [self.ring.one if i == j else self.ring.zero for j in range(m)]
                for i in range(m)
            ]
            for (pos, poly) in zip(positions, combo):
                rows[pos[0]][pos[1]] = self.ring.from_poly(poly)
            n_part = TriMat(self.ring, rows)
            index[n_part] = len(elems)
            elems.append(BorelElem(n_part, self._unit_ident, _canonical=True))
        self._index_of_n = index
        return elems

    def identity(self) -> BorelElem:
        return self._identity

    def multiply(self, a: BorelElem, b: BorelElem) -> BorelElem:
        # (Na Da)(Nb Db) = (Na * (Da Nb Da^{-1})) * (Da Db)
        m = self.m
        da = a.d_part
        inv = [u.inv() for u in da]
        conj_rows = []
        for i in range(m):
            row = list(b.n_part.rows[i])
            for j in range(i + 1, m):
                e = row[j]
                if not e.is_zero:
                    row[j] = e.mul_unit(da[i] * inv[j])
            conj_rows.append(row)
        n_part = a.n_part * TriMat(self.ring, conj_rows)
        d_part = tuple(x * y for x, y in zip(da, b.d_part))
        return self.make_element(n_part, d_part)

    def invert(self, a: BorelElem) -> BorelElem:
        # (N D)^{-1} = (D^{-1} N^{-1} D) * D^{-1}
        m = self.m
        ninv = tri_inverse(a.n_part)
        da = a.d_part
        inv = [u.inv() for u in da]
        rows = []
        for i in range(m):
            row = list(ninv.rows[i])
            for j in range(i + 1, m):
                e = row[j]
                if not e.is_zero:
                    row[j] = e.mul_unit(inv[i] * da[j])
            rows.append(row)
        return self.make_element(TriMat(self.ring, rows), tuple(inv))

    def h_member(self, g: BorelElem) -> bool:
        m = self.m
        for i in range(m):
            for j in range(i + 1, m):
                e = g.n_part.rows[i][j]
                if e.is_zero:
                    continue
                if not (e.num % self.ring.pivot_pow(j - i)).is_zero:
                    return False
        return True

    def endo_f(self, g: BorelElem) -> BorelElem:
        m = self.m
        rows = []
        for i in range(m):
            row = list(g.n_part.rows[i])
            for j in range(i + 1, m):
                e = row[j]
                if not e.is_zero:
                    row[j] = divide_exact(e, j - i)
            rows.append(row)
        return self.make_element(TriMat(self.ring, rows), g.d_part)

    def coset_index(self, g: BorelElem) -> int:
        """Superdiagonal-by-superdiagonal reduction.

        Solves d_i * s[i][l] = -(M[i][l] + sum_{i<r<l} M[i][r] s[r][l])
        modulo (x-1)^(l-i) for the entries of s = t^{-1}, then looks the
        resulting t up in the transversal enumeration.
        """
        self.transversal  # ensure the index map exists
        m = self.m
        ring = self.ring
        M = [[None] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                M[i][j] = self.matrix_entry(g, i, j)
        d_inv = [u.inv() for u in g.d_part]
        s = [[None] * m for _ in range(m)]
        zero = ring.zero
        for delta in range(1, m):
            for i in range(m - delta):
                l = i + delta
                acc = M[i][l]
                for r in range(i + 1, l):
                    x = M[i][r]
                    y = s[r][l]
                    if not (x.is_zero or y.is_zero):
                        acc = acc + x * y
                rhs = (-acc).mul_unit(d_inv[i])
                poly = rhs.reduce_mod_pivot_pow(delta)
                s[i][l] = ring.from_poly(poly) if not poly.is_zero else zero
        rows = [
            [
                s[i][j] if j > i else (ring.one if i == j else ring.zero)
                for j in range(m)
            ]
            for i in range(m)
        ]
        t_n = tri_inverse(TriMat(ring, rows))
        idx = self._index_of_n.get(t_n)
        if idx is None:
            from ..engine import ContractViolation

            raise ContractViolation("coset reduction left the transversal")
        return idx

    def generators(self) -> dict:
        """u1..u_{m-1} (superdiagonal elementary) and xK_S (diagonal f_S at
        slot K, 1-based); xKsS is accepted as an alias."""
        gens = {"e": self._identity}
        m = self.m
        for i in range(1, m):
            rows = [
                [self.ring.one if a == b else self.ring.zero for b in range(m)]
                for a in range(m)
            ]
            rows[i - 1][i] = self.ring.one
            gens[f"u{i}"] = BorelElem(
                TriMat(self.ring, rows), self._unit_ident, _canonical=True
            )
        for k in range(1, m + 1):
            for sdx in range(self.n):
                units = list(self._unit_ident)
                units[k - 1] = Unit(
                    self.ring, 1, tuple(1 if t == sdx else 0 for t in range(self.n))
                )
                elem = self.make_element(TriMat.identity(self.ring, m), units)
                gens[f"x{k}_{sdx}"] = elem
                gens[f"x{k}s{sdx}"] = elem
        return gens

    def render(self, g: BorelElem) -> str:
        m = self.m
        rows = []
        for i in range(m):
            row = []
            for j in range(m):
                if j < i:
                    row.append("0")
                else:
                    row.append(self.matrix_entry(g, i, j).render())
            rows.append("[" + ",".join(row) + "]")
        return "[" + ",".join(rows) + "]"

    def describe(self) -> dict:
        return {
            "family": self.family,
            "p": self.p,
            "m": self.m,
            "polys": [f.to_json() for f in self.ring.polys],
            "degree": self.degree,
            "l_exponent": self.l_exponent,
        }

    def random_element(self, rng, length: int = 5) -> BorelElem:
        gens = []
        seen = set()
        for name, g in self.generators().items():
            if name == "e" or g in seen:
                continue
            seen.add(g)
            gens.append(g)
        out = self._identity
        for _ in range(length):
            g = rng.choice(gens)
            if rng.randrange(2):
                g = self.invert(g)
            out = self.multiply(out, g)
        return out

    def random_h_element(self, rng, length: int = 5) -> BorelElem:
        g = self.random_element(rng, length)
        m = self.m
        rows = []
        for i in range(m):
            row = list(g.n_part.rows[i])
            for j in range(i + 1, m):
                if not row[j].is_zero:
                    row[j] = row[j] * self.ring.from_poly(self.ring.pivot_pow(j - i))
            rows.append(row)
        return self.make_element(TriMat(self.ring, rows), g.d_part)

    # -- structure checks ----------------------------------------------------

    def claim1_check(self) -> bool:
        """The transversal is closed under inversion, with the inverse
        entries obeying the same degree bounds deg <= j-i-1."""
        for t in self.transversal:
            inv = self.invert(t)
            if any(not u.is_one for u in inv.d_part):
                return False
            for i in range(self.m):
                for j in range(i + 1, self.m):
                    e = inv.n_part.rows[i][j]
                    if e.is_zero:
                        continue
                    if not e.is_poly or e.num.degree > j - i - 1:
                        return False
        return True

    def diagonal_generator(self, k: int, sdx: int) -> BorelElem:
        if not (1 <= k <= self.m and 0 <= sdx < self.n):
            raise ValueError("generator indices out of range")
        return self.generators()[f"x{k}_{sdx}"]

    def delta_size(self, k: int, sdx: int) -> int:
        deg = int(self.ring.polys[sdx].degree)
        per_entry = self.p ** (deg + 1)
        return per_entry ** (self.m * (self.m - 1) // 2)

    def in_delta(self, g: BorelElem, k: int, sdx: int) -> bool:
        """Membership (mod center) in the set of upper-triangular matrices
        with diagonal (1, .., f_s at slot k, .., 1) and polynomial entries
        of degree <= deg f_s."""
        m = self.m
        f_unit = Unit(self.ring, 1, tuple(1 if t == sdx else 0 for t in range(self.n)))
        deg = self.ring.polys[sdx].degree
        others = [g.d_part[j] for j in range(m) if j != k - 1]
        lam = others[0].inv()
        if any(u != others[0] for u in others):
            return False
        if lam * g.d_part[k - 1] != f_unit:
            return False
        for i in range(m):
            for j in range(i + 1, m):
                e = self.matrix_entry(g, i, j).mul_unit(lam)
                if e.is_zero:
                    continue
                if not e.is_poly or e.num.degree > deg:
                    return False
        return True

    def claim2_check(self, k: int, sdx: int, cap: int | None = None) -> bool:
        """All iterated states of the diagonal generator at (k, s) close
        inside the bounded-degree set above."""
        from ..engine import CapExceeded, states_bfs

        cap = cap if cap is not None else self.delta_size(k, sdx)
        res = states_bfs(self, self.diagonal_generator(k, sdx), cap)
        if isinstance(res, CapExceeded):
            return False
        return all(self.in_delta(e, k, sdx) for e in res.elements)

    def u_states_trivial_check(self) -> bool:
        """The superdiagonal generators have only trivial states."""
        from ..engine import decompose

        for i in range(1, self.m):
            dec = decompose(self, self.generators()[f"u{i}"])
            if any(s != self._identity for s in dec.states):
                return False
        return True
