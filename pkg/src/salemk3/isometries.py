"""Isometries of lattices: twisting, kernels, integral powering.

Matrices act on column vectors and are validated exactly against the Gram
matrix. Rational isometries are allowed throughout; integrality is a derived
property and several operations (twisting, discriminant actions) insist on it.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from . import linalg
from .lattices import Lattice, discriminant_form, forms_isomorphic, hyperbolic_p_form
from .numbertheory import factorize, valuation
from .polynomials import (
    IntPolynomial,
    NotSalemError,
    discriminant,
    is_salem,
    resultant,
    trace_polynomial,
)


class IsometryError(ValueError):
    pass


def is_isometry(L: Lattice, M) -> bool:
    """Exact check M^T G M = G."""
    if len(M) != L.rank or any(len(row) != L.rank for row in M):
        return False
    Mt = linalg.transpose(M)
    product = linalg.mat_mul(linalg.mat_mul(Mt, L.gram), M)
    return all(
        Fraction(a) == b for prow, grow in zip(product, L.gram) for a, b in zip(prow, grow)
    )


@dataclass(frozen=True)
class Isometry:
    lattice: Lattice
    matrix: tuple

    def __init__(self, lattice, matrix):
        matrix = tuple(tuple(Fraction(x) for x in row) for row in matrix)
        matrix = tuple(
            tuple(int(x) if x.denominator == 1 else x for x in row) for row in matrix
        )
        if not is_isometry(lattice, matrix):
            raise IsometryError("matrix does not preserve the bilinear form")
        object.__setattr__(self, "lattice", lattice)
        object.__setattr__(self, "matrix", matrix)

    @property
    def rank(self):
        return self.lattice.rank

    def is_integral(self):
        return linalg.is_integral(self.matrix)

    def char_poly(self):
        """Characteristic polynomial; raises if it is not integral."""
        coeffs = linalg.charpoly(self.matrix)
        fracs = [Fraction(c) for c in coeffs]
        if any(c.denominator != 1 for c in fracs):
            raise IsometryError("characteristic polynomial is not integral")
        return IntPolynomial([int(c) for c in fracs])

    def inverse_matrix(self):
        # F^-1 = G^-1 F^T G, exact and division-free in F
        Ginv = self.lattice.dual_basis()
        return linalg.mat_mul(
            linalg.mat_mul(Ginv, linalg.transpose(self.matrix)), self.lattice.gram
        )

    def w_matrix(self):
        """f + f^-1, the self-adjoint generator used for twists."""
        return linalg.mat_add(self.matrix, self.inverse_matrix())

    def power_matrix(self, n):
        if n >= 0:
            return linalg.mat_pow(self.matrix, n)
        return linalg.mat_pow(self.inverse_matrix(), -n)

    def apply(self, v):
        return linalg.mat_vec(self.matrix, v)


@dataclass(frozen=True)
class TwistElement:
    """Element a of Z[f + f^-1], given as an integer polynomial in w."""

    poly: IntPolynomial

    def __init__(self, poly):
        if isinstance(poly, (list, tuple)):
            poly = IntPolynomial(poly)
        if isinstance(poly, int):
            poly = IntPolynomial([poly])
        object.__setattr__(self, "poly", poly)

    def matrix_for(self, f: Isometry):
        W = f.w_matrix()
        acc = linalg.zeros(f.rank, f.rank)
        for c in reversed(self.poly.coeffs):
            acc = linalg.mat_add(
                linalg.mat_mul(acc, W), linalg.mat_scale(c, linalg.identity(f.rank))
            )
        return acc

    def norm_against(self, trace_poly: IntPolynomial):
        """Field norm from Z[w]: resultant of the trace polynomial with a(w)."""
        if self.poly.is_zero():
            return 0
        return resultant(self.poly, trace_poly)


def twist(L: Lattice, f: Isometry, a: TwistElement):
    """Twisted lattice <x, y>_a = <a x, y> together with f acting on it.

    Requires a(f + f^-1) integral; the twist of an even lattice stays even
    and f remains an isometry of the twist verbatim.
    """
    A = a.matrix_for(f)
    if not linalg.is_integral(A):
        raise IsometryError("twist element does not act integrally on the lattice")
    A = linalg.mat_to_int(A)
    gram2 = linalg.mat_mul(linalg.transpose(A), L.gram)
    if not linalg.is_symmetric(gram2):
        raise AssertionError("twisted form is not symmetric; a is not self-adjoint")
    if linalg.bareiss_det(gram2) == 0:
        raise IsometryError("twist is degenerate")
    L2 = Lattice(gram2)
    if L.is_even() and not L2.is_even():
        raise AssertionError("twist of an even lattice must stay even")
    return L2, Isometry(L2, f.matrix)


@dataclass(frozen=True)
class KernelSublattice:
    lattice: Lattice
    basis: tuple  # rows, ambient coordinates
    isometry: Isometry


def kernel_sublattice(f: Isometry, p: IntPolynomial):
    """Saturated sublattice ker p(f) with its induced form and isometry."""
    char = f.char_poly()
    from .polynomials import divides

    if not divides(p, char):
        raise IsometryError("polynomial does not divide the characteristic polynomial")
    n = f.rank
    P = linalg.zeros(n, n)
    for c in reversed(p.coeffs):
        P = linalg.mat_add(
            linalg.mat_mul(P, f.matrix), linalg.mat_scale(c, linalg.identity(n))
        )
    ker = linalg.rat_kernel(P)
    if not ker:
        raise IsometryError("kernel is trivial")
    den = 1
    for row in ker:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    int_rows = tuple(tuple(int(Fraction(x) * den) for x in row) for row in ker)
    B = linalg.saturation(int_rows)
    sub_gram = linalg.mat_mul(linalg.mat_mul(B, f.lattice.gram), linalg.transpose(B))
    if linalg.bareiss_det(sub_gram) == 0:
        raise IsometryError("kernel sublattice is degenerate")
    sub = Lattice(sub_gram)
    restricted = _restrict_to_rows(f.matrix, B)
    return KernelSublattice(lattice=sub, basis=B, isometry=Isometry(sub, restricted))


def _restrict_to_rows(F, B):
    """Matrix of the action on row-span coordinates: rows b -> b F^T."""
    image = linalg.mat_mul(B, linalg.transpose(F))
    # solve X B = image; pick an invertible column set of B
    _, pivots = linalg.rat_row_reduce(B)
    Bp = tuple(tuple(row[j] for j in pivots) for row in B)
    Ip = tuple(tuple(row[j] for j in pivots) for row in image)
    X = linalg.mat_mul(Ip, linalg.rat_inverse(Bp))
    if linalg.mat_mul(X, linalg.mat_to_fraction(B)) != linalg.mat_to_fraction(image):
        raise AssertionError("row span is not invariant under the isometry")
    # column-action convention
    return linalg.transpose(X)


def _matrix_order_mod(A, m, cap=None):
    """Multiplicative order of an invertible matrix modulo m (m >= 2)."""
    n = len(A)
    order = 1
    for p, e in factorize(m).items():
        # order modulo p divides |GL_n(F_p)|
        bound = p ** (n * (n - 1) // 2)
        for i in range(1, n + 1):
            bound *= p**i - 1
        Ap = linalg.mat_mod(A, p)
        if linalg.mat_pow_mod(Ap, bound, p) != linalg.mat_mod(linalg.identity(n), p):
            raise ArithmeticError("matrix is not invertible modulo p")
        o = bound
        for q in factorize(bound):
            while o % q == 0 and linalg.mat_pow_mod(Ap, o // q, p) == linalg.mat_mod(
                linalg.identity(n), p
            ):
                o //= q
        # lift to p^e: order grows by factors of p only
        pk = p
        for _ in range(e - 1):
            pk *= p
            if linalg.mat_pow_mod(A, o, pk) != linalg.mat_mod(linalg.identity(n), pk):
                o *= p
        order = lcm(order, o)
        if cap is not None and order > cap:
            raise ArithmeticError("order search exceeded its cap")
    return order


def power_to_integral(L: Lattice, f: Isometry):
    """Minimal n >= 1 with f^n integral, plus the integral matrix f^n.

    Computes the module M = Z[f] L by Hermite reduction, the index
    k = [M : L], and the order of f on M / k M; the minimal n is then the
    smallest divisor of that order whose power is integral.
    """
    f.char_poly()  # raises when not integral
    F = f.matrix
    n = L.rank
    if linalg.is_integral(F):
        return 1, Isometry(L, linalg.mat_to_int(F))
    rows = []
    power = linalg.identity(n)
    den = 1
    powers = []
    for _ in range(n):
        powers.append(power)
        for row in linalg.transpose(power):
            rows.append(row)
        power = linalg.mat_mul(F, power)
    for row in rows:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    int_rows = tuple(tuple(int(Fraction(x) * den) for x in row) for row in rows)
    H = linalg.hnf(int_rows)
    BM = tuple(tuple(Fraction(x, den) for x in row) for row in H)  # rows: basis of M
    C = linalg.rat_inverse(BM)  # rows: coordinates of Z^n inside M
    if not linalg.is_integral(C):
        raise AssertionError("L is not contained in Z[f]L")
    k = abs(linalg.bareiss_det(linalg.mat_to_int(C)))
    # action of f in M-coordinates (column convention)
    Psi = linalg.mat_mul(
        linalg.mat_mul(linalg.rat_inverse(linalg.transpose(BM)), F), linalg.transpose(BM)
    )
    if not linalg.is_integral(Psi):
        raise AssertionError("Z[f]L is not f-stable; integral char poly violated?")
    Psi = linalg.mat_to_int(Psi)
    if k == 1:
        raise AssertionError("index 1 but f not integral")
    n0 = _matrix_order_mod(Psi, k)
    # minimal exponent divides n0
    divisors = sorted(_divisors(n0))
    for d in divisors:
        Fd = f.power_matrix(d)
        if linalg.is_integral(Fd):
            return d, Isometry(L, linalg.mat_to_int(Fd))
    raise AssertionError("no integral power found below the group-order bound")


def _divisors(n):
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p**i for d in out for i in range(e + 1)]
    return out


# --- invariant forms ----------------------------------------------------------


def invariant_symmetric_forms(F):
    """Basis of the space of symmetric rational G with F^T G F = G.

    F must be invertible over Q. Matrices are returned with integer primitive
    entries (denominators cleared).
    """
    n = len(F)
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    pos = {ij: k for k, ij in enumerate(idx)}
    rows = []
    Ff = linalg.mat_to_fraction(F)
    for a in range(n):
        for b in range(a, n):
            # (F^T G F - G)[a][b] as a linear form in the g_ij
            row = [Fraction(0)] * len(idx)
            for i in range(n):
                for j in range(n):
                    key = (i, j) if i <= j else (j, i)
                    row[pos[key]] += Ff[i][a] * Ff[j][b]
            row[pos[(a, b)]] -= 1
            rows.append(tuple(row))
    kernel = linalg.rat_kernel(tuple(rows))
    out = []
    for vec in kernel:
        den = 1
        for x in vec:
            den = lcm(den, x.denominator)
        ints = [int(x * den) for x in vec]
        g = gcd(0, 0)
        for x in ints:
            g = gcd(g, x)
        if g:
            ints = [x // g for x in ints]
        G = [[0] * n for _ in range(n)]
        for (i, j), k in pos.items():
            G[i][j] = ints[k]
            G[j][i] = ints[k]
        out.append(tuple(tuple(row) for row in G))
    return tuple(out)


def search_even_invariant_lattice(F, signature=None, determinant=None, box=10):
    """Even nondegenerate invariant lattice from small combinations of the basis.

    Deterministically scans integer coefficient vectors of sup-norm up to
    ``box`` and returns the first match; raises IsometryError when the box
    is exhausted.
    """
    basis = invariant_symmetric_forms(F)
    if not basis:
        raise IsometryError("no invariant symmetric forms")
    n = len(F)
    from itertools import product

    dim = len(basis)
    for radius in range(1, box + 1):
        for coeffs in sorted(product(range(-radius, radius + 1), repeat=dim)):
            if max((abs(c) for c in coeffs), default=0) != radius:
                continue
            G = linalg.zeros(n, n)
            for c, B in zip(coeffs, basis):
                if c:
                    G = linalg.mat_add(G, linalg.mat_scale(c, B))
            if any(G[i][i] % 2 for i in range(n)):
                continue
            if linalg.bareiss_det(G) == 0:
                continue
            cand = Lattice(G)
            if signature is not None and cand.signature() != tuple(signature):
                continue
            if determinant is not None and cand.determinant() != determinant:
                continue
            return cand
    raise IsometryError("no even invariant lattice found within the search box")


# --- twist by a split prime ----------------------------------------------------


@dataclass(frozen=True)
class TwistSplitReport:
    passed: bool
    problems: tuple
    twisted: Lattice
    p_valuation: int
    determinant: int
    p_part_orders: tuple
    form_matches_hyperbolic: bool


def twist_split_certificate(L: Lattice, f: Isometry, t: TwistElement, n: int, p: int):
    """Check the split-prime twist: twisting by t^n multiplies |det| by p^(2n)
    and the p-primary discriminant form becomes hyperbolic of scale 1/p^n.

    Hypotheses are verified first: the characteristic polynomial is an
    irreducible Salem polynomial, t has norm +-p, and p divides neither 2,
    det L, nor disc s. Each violation is reported individually.
    """
    if n < 1:
        raise IsometryError("twist exponent must be >= 1")
    problems = []
    s = f.char_poly()
    try:
        is_salem(s)
    except NotSalemError as exc:
        problems.append(f"characteristic polynomial is not Salem: {exc.reason}")
    try:
        r = trace_polynomial(s)
        norm = t.norm_against(r)
        if abs(norm) != p:
            problems.append(f"twist element has norm {norm}, expected +-{p}")
    except NotSalemError:
        problems.append("no trace polynomial available")
    excluded = 2 * L.determinant() * discriminant(s)
    if excluded % p == 0:
        problems.append(f"p = {p} divides 2 * det L * disc s = {excluded}")
    if problems:
        return TwistSplitReport(False, tuple(problems), L, 0, L.determinant(), (), False)
    element = TwistElement(t.poly**n)
    twisted, f2 = twist(L, f, element)
    det = twisted.determinant()
    val = valuation(det, p)
    det_ok = val == 2 * n and abs(det) == abs(L.determinant()) * p ** (2 * n)
    if not det_ok:
        problems.append(
            f"determinant {det} does not carry exactly the p-part p^{2 * n}"
        )
    q = discriminant_form(twisted)
    part = q.p_primary_part(p)
    reference = hyperbolic_p_form(p, n)
    form_ok = part.orders == reference.orders and forms_isomorphic(part, reference)
    if not form_ok:
        problems.append("p-primary discriminant form is not hyperbolic of scale 1/p^n")
    return TwistSplitReport(
        passed=not problems,
        problems=tuple(problems),
        twisted=twisted,
        p_valuation=val,
        determinant=det,
        p_part_orders=part.orders,
        form_matches_hyperbolic=form_ok,
    )


# --- serialization --------------------------------------------------------------


def matrix_to_json(M):
    out = []
    for row in M:
        json_row = []
        for x in row:
            x = Fraction(x)
            json_row.append(str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}")
        out.append(json_row)
    return out


def matrix_from_json(data):
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ValueError("matrix JSON must be a list of rows")
    out = []
    for row in data:
        new_row = []
        for x in row:
            if not isinstance(x, str):
                raise ValueError("matrix entries must be strings like '3' or '3/2'")
            new_row.append(Fraction(x))
        out.append(tuple(new_row))
    return tuple(out)
