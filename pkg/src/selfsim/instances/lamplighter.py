"""The metabelian family u^r q over a localized ring.

Elements are pairs (r, q) standing for u^r x_0^{q_0} ... x_{n-1}^{q_{n-1}}
with u^p = 1, r in A = F_p[1/x, 1/f_1, ..., 1/f_{n-1}] and q in Z^n; the
generator x_j acts on exponents by multiplication with f_j.  All basis
polynomials evaluate to 1 at x = 1 (f_0 = x does automatically), so the
subgroup H of pairs with r(1) = 0 is picked out by evaluation at 1 and the
transversal is u^0, ..., u^{p-1}.  The endomorphism divides r by x-1.

With the product convention

    (r1, q1) * (r2, q2) = (r1 + r2 * phi(q1)^{-1}, q1 + q2),
    phi(q) = f_0^{q_0} * ... * f_{n-1}^{q_{n-1}},

the generators decompose in closed form:

    u          -> trivial states, the p-cycle (0 1 ... p-1);
    x_j        -> states u^{-i (f_j^{-1} - 1)/(x-1)} x_j, trivial perm;
    x_j^{-1}   -> states u^{-i (f_j - 1)/(x-1)} x_j^{-1}, trivial perm;
    u^lam x_j^{-1}
               -> states u^{lt - s_i (f_j - 1)/(x-1)} x_j^{-1} shifted by
                  lam(1), where lam = (x-1) lt + lam(1) and
                  s_i = (i + lam(1)) mod p.

For p = 2, n = 1 this is the classical two-state lamplighter machine.
"""

from __future__ import annotations

from ..engine import Instance, Perm, WreathDecomp, decompose
from ..ring import (
    DensePoly,
    LocalizedRing,
    SFraction,
    Unit,
    divide_exact,
    eval_at_one,
    poly_divrem,
    validate_config,
)
from . import InstanceConfigError


class LampElem:
    """u^r times a Z^n part, in canonical form."""

    __slots__ = ("r", "q", "_hash")

    def __init__(self, r: SFraction, q):
        self.r = r
        self.q = tuple(q)
        self._hash = hash((r, self.q))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LampElem) and self.r == other.r and self.q == other.q

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"LampElem(u^({self.r.render()}), q={self.q})"


class LampInstance(Instance):
    family = "lamplighter"

    def __init__(self, p: int, polys):
        report = validate_config(p, polys, require_one_at_one=True)
        if not report.ok:
            raise InstanceConfigError("; ".join(report.problems))
        self.validation = report
        self.p = p
        self.ring = LocalizedRing(p, polys)
        self.n = len(self.ring.polys)
        self._identity = LampElem(self.ring.zero, (0,) * self.n)

    # -- contract --------------------------------------------------------

    @property
    def degree(self) -> int:
        return self.p

    def _build_transversal(self):
        return [LampElem(self.ring.constant(i), (0,) * self.n) for i in range(self.p)]

    def identity(self) -> LampElem:
        return self._identity

    def elem(self, r: SFraction, q) -> LampElem:
        return LampElem(r, q)

    def _phi_inv(self, q) -> Unit:
        return Unit(self.ring, 1, tuple(-e for e in q))

    def multiply(self, a: LampElem, b: LampElem) -> LampElem:
        r = a.r + b.r.mul_unit(self._phi_inv(a.q))
        return LampElem(r, tuple(x + y for x, y in zip(a.q, b.q)))

    def invert(self, a: LampElem) -> LampElem:
        r = -(a.r.mul_unit(Unit(self.ring, 1, a.q)))
        return LampElem(r, tuple(-e for e in a.q))

    def h_member(self, g: LampElem) -> bool:
        return eval_at_one(g.r).value == 0

    def endo_f(self, g: LampElem) -> LampElem:
        return LampElem(divide_exact(g.r, 1), g.q)

    def coset_index(self, g: LampElem) -> int:
        # the coset of u^i is detected by evaluating the exponent at 1
        return eval_at_one(g.r).value

    def generators(self) -> dict:
        gens = {"e": self._identity, "u": LampElem(self.ring.one, (0,) * self.n)}
        for j in range(self.n):
            q = tuple(1 if i == j else 0 for i in range(self.n))
            gens[f"x{j}"] = LampElem(self.ring.zero, q)
        return gens

    def render(self, g: LampElem) -> str:
        parts = []
        if not g.r.is_zero:
            r = g.r.render()
            parts.append("u" if r == "1" else f"u^({r})")
        for j, e in enumerate(g.q):
            if e:
                parts.append(f"x{j}" + (f"^{e}" if e != 1 else ""))
        return " ".join(parts) if parts else "e"

    def describe(self) -> dict:
        return {
            "family": self.family,
            "p": self.p,
            "n": self.n,
            "polys": [f.to_json() for f in self.ring.polys],
            "degree": self.degree,
        }

    def random_element(self, rng, max_deg: int = 3, span: int = 2) -> LampElem:
        num = DensePoly(self.p, [rng.randrange(self.p) for _ in range(max_deg + 1)])
        den = tuple(rng.randrange(2) for _ in range(self.n))
        q = tuple(rng.randrange(-span, span + 1) for _ in range(self.n))
        return LampElem(self.ring.fraction(num, den), q)

    def random_h_element(self, rng, max_deg: int = 3) -> LampElem:
        g = self.random_element(rng, max_deg)
        r = g.r * self.ring.from_poly(self.ring.pivot)
        return LampElem(r, g.q)

    # -- closed forms ------------------------------------------------------

    def u_power(self, lam: DensePoly) -> LampElem:
        """The element u^{lam} for a polynomial exponent."""
        return LampElem(self.ring.from_poly(lam), (0,) * self.n)

    def closed_form_decompose(self, g: LampElem) -> WreathDecomp:
        """Decomposition of the supported generator shapes without the
        engine: u^{+-1}, x_j^{+-1}, and u^lam x_j^{-1} with lam a
        polynomial.  Raises ValueError off these shapes."""
        p = self.p
        ring = self.ring
        zeros = (0,) * self.n
        cycle = Perm(tuple((i + 1) % p for i in range(p)))
        if g.q == zeros and g.r == ring.one:
            return WreathDecomp(cycle, (self._identity,) * p)
        if g.q == zeros and g.r == ring.constant(-1):
            return WreathDecomp(cycle.inverse(), (self._identity,) * p)
        j = next((k for k, e in enumerate(g.q) if e), None)
        if j is None or any(e for k, e in enumerate(g.q) if k != j):
            raise ValueError("unsupported element shape")
        f_j = ring.polys[j]
        if g.q[j] == 1 and g.r.is_zero:
            # states u^{-i (f_j^{-1} - 1)/(x-1)} x_j
            w = divide_exact(ring.fraction(DensePoly.one(p) - f_j, tuple(
                1 if k == j else 0 for k in range(self.n)
            )), 1)
            states = tuple(
                LampElem(w.mul_unit(ring.unit(-i % p)) if i else ring.zero, g.q)
                for i in range(p)
            )
            return WreathDecomp(Perm.identity(p), states)
        if g.q[j] == -1 and g.r.is_poly:
            lam = g.r.num
            deg_fj = f_j.degree
            lt, rem = poly_divrem(lam, ring.pivot)
            lam1 = rem.coeffs[0] if rem.coeffs else 0
            w = divide_exact(ring.from_poly(f_j - DensePoly.one(p)), 1)
            states = []
            for i in range(p):
                s = (i + lam1) % p
                r = ring.from_poly(lt) - w.mul_unit(ring.unit(s)) if s else ring.from_poly(lt)
                states.append(LampElem(r, g.q))
            perm = Perm(tuple((i + lam1) % p for i in range(p)))
            return WreathDecomp(perm, tuple(states))
        raise ValueError("unsupported element shape")

    def power_identity_check(self, i_max: int, lambdas) -> bool:
        """Check the two power decomposition identities against the engine:

            u^{x^i} = (u^{x^{i-1}} ... u^x u)^{(1)} u
            u^{lam} = (u^{(lam - lam(1))/(x-1)})^{(1)} u^{lam(1)}
        """
        p = self.p
        ring = self.ring
        cycle = Perm(tuple((i + 1) % p for i in range(p)))
        for i in range(1, i_max + 1):
            lhs = decompose(self, self.u_power(DensePoly.x(p) ** i))
            acc = DensePoly.zero(p)
            for k in range(i):
                acc = acc + DensePoly.x(p) ** k
            expected = WreathDecomp(cycle, (self.u_power(acc),) * p)
            if lhs.perm != expected.perm or lhs.states != expected.states:
                return False
        for lam in lambdas:
            lhs = decompose(self, self.u_power(lam))
            lt, rem = poly_divrem(lam, ring.pivot)
            lam1 = rem.coeffs[0] if rem.coeffs else 0
            perm = Perm(tuple((i + lam1) % p for i in range(p)))
            expected = WreathDecomp(perm, (self.u_power(lt),) * p)
            if lhs.perm != expected.perm or lhs.states != expected.states:
                return False
        return True

    # -- state-closed subsets ---------------------------------------------

    def y_set_member(self, g: LampElem, j: int) -> bool:
        """Membership in Y_j = {u^lam x_j^{-1} : deg lam <= deg f_j or 0}."""
        if g.q != tuple(-1 if k == j else 0 for k in range(self.n)):
            return False
        if not g.r.is_poly:
            return False
        return g.r.is_zero or g.r.num.degree <= self.ring.polys[j].degree

    def y_set(self, j: int) -> list:
        """All of Y_j, enumerated deterministically."""
        import itertools

        deg = int(self.ring.polys[j].degree)
        q = tuple(-1 if k == j else 0 for k in range(self.n))
        out = []
        for coeffs in itertools.product(range(self.p), repeat=deg + 1):
            out.append(LampElem(self.ring.from_coeffs(coeffs), q))
        return out

    def yj_closure_check(self, j: int, cap: int | None = None) -> bool:
        """Breadth-first closure from every element of Y_j stays in Y_j."""
        from ..engine import CapExceeded, states_bfs

        members = self.y_set(j)
        cap = cap if cap is not None else len(members)
        for g in members:
            res = states_bfs(self, g, cap)
            if isinstance(res, CapExceeded):
                return False
            if not all(self.y_set_member(e, j) for e in res.elements):
                return False
        return True
