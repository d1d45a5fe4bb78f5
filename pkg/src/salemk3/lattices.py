"""Integer lattices, discriminant forms, gluing and overlattices.

A lattice is a free Z-module with a nondegenerate symmetric integer Gram
matrix. Discriminant groups are presented through the Smith normal form of
the Gram matrix; their Q/2Z-valued quadratic forms are stored exactly with
values normalized into [0, 2).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from . import linalg
from .numbertheory import factorize, is_prime, legendre, valuation
from .polynomials import IntPolynomial, count_real_roots


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class Lattice:
    """Free abelian group of finite rank with a nondegenerate integer form."""

    gram: tuple

    def __init__(self, gram):
        gram = tuple(tuple(int(x) for x in row) for row in gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise LatticeError("gram matrix must be square")
        if not linalg.is_symmetric(gram):
            raise LatticeError("gram matrix must be symmetric")
        if n and linalg.bareiss_det(gram) == 0:
            raise LatticeError("bilinear form must be non-degenerate")
        object.__setattr__(self, "gram", gram)

    @property
    def rank(self):
        return len(self.gram)

    def determinant(self):
        return linalg.bareiss_det(self.gram)

    def is_even(self):
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def is_unimodular(self):
        return abs(self.determinant()) == 1

    def signature(self):
        """(s_plus, s_minus), decided by Sturm counts on the characteristic polynomial.

        Eigenvalue multiplicities are recovered by peeling gcd(p, p') layers,
        since a Sturm chain only sees distinct roots.
        """
        if self.rank == 0:
            return (0, 0)
        from .polynomials import poly_gcd

        layer = IntPolynomial(linalg.charpoly(self.gram))
        pos = 0
        while layer.degree > 0:
            pos += count_real_roots(layer, Fraction(0), "inf")
            layer = poly_gcd(layer, layer.derivative())
        return (pos, self.rank - pos)

    def is_definite(self):
        s_plus, s_minus = self.signature()
        return s_plus == 0 or s_minus == 0

    def is_hyperbolic(self):
        s_plus, s_minus = self.signature()
        return s_plus == 1 and s_minus >= 1

    def inner(self, u, v):
        return linalg.dot(u, linalg.mat_vec(self.gram, v))

    def norm(self, v):
        return self.inner(v, v)

    def dual_basis(self):
        """Rows generate the dual lattice in lattice coordinates (= gram inverse)."""
        return linalg.rat_inverse(self.gram)

    def direct_sum(self, other):
        n, m = self.rank, other.rank
        gram = [[0] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                gram[i][j] = self.gram[i][j]
        for i in range(m):
            for j in range(m):
                gram[n + i][n + j] = other.gram[i][j]
        return Lattice(gram)

    def rescaled(self, c):
        return Lattice(linalg.mat_scale(c, self.gram))

    def sublattice(self, basis_rows):
        """Lattice on the given (independent) rows with the restricted form."""
        B = tuple(tuple(int(x) for x in row) for row in basis_rows)
        G = linalg.mat_mul(linalg.mat_mul(B, self.gram), linalg.transpose(B))
        return Lattice(G)


# --- standard lattices --------------------------------------------------------


def lattice_U():
    return Lattice(((0, 1), (1, 0)))


def lattice_E8():
    """E8, realized negative definite (signature (0, 8))."""
    # Dynkin diagram chain 1-2-3-4-5-6-7 with node 8 attached to node 5
    adj = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)]
    g = [[0] * 8 for _ in range(8)]
    for i in range(8):
        g[i][i] = -2
    for a, b in adj:
        g[a - 1][b - 1] = 1
        g[b - 1][a - 1] = 1
    return Lattice(g)


def lattice_E6():
    """E6, negative definite, determinant 3."""
    adj = [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6)]
    g = [[0] * 6 for _ in range(6)]
    for i in range(6):
        g[i][i] = -2
    for a, b in adj:
        g[a - 1][b - 1] = 1
        g[b - 1][a - 1] = 1
    return Lattice(g)


def lattice_A2(sign=-1):
    return Lattice(((2 * sign, -sign), (-sign, 2 * sign)))


NAMED_LATTICES = ("U", "E8", "3U", "U+E8", "3U+2E8")


def named_lattice(name):
    U, E8 = lattice_U(), lattice_E8()
    table = {
        "U": lambda: U,
        "E8": lambda: E8,
        "3U": lambda: U.direct_sum(U).direct_sum(U),
        "U+E8": lambda: U.direct_sum(E8),
        "3U+2E8": lambda: U.direct_sum(U).direct_sum(U).direct_sum(E8).direct_sum(E8),
    }
    if name not in table:
        raise LatticeError(f"unknown lattice name {name!r}; choose from {NAMED_LATTICES}")
    return table[name]()


# --- discriminant forms -------------------------------------------------------


def _mod2(x):
    return x - 2 * (x / 2).__floor__() if isinstance(x, Fraction) else Fraction(x) % 2


def _frac_mod(x, m):
    x = Fraction(x)
    return x - m * (x / m).__floor__()


class FiniteQuadraticForm:
    """Finite abelian group with a Q/2Z-valued quadratic form.

    Generators g_i have orders d_1 | d_2 | ...; values are stored exactly as
    q(g_i) in [0, 2) and b(g_i, g_j) in [0, 1). When the form arose from a
    lattice, rational lifts of the generators (rows, lattice coordinates) and
    the coordinate data needed to express arbitrary dual vectors are kept.
    """

    def __init__(self, orders, q_values, b_matrix, lifts=None, coord_data=None,
                 _check_chain=True):
        self.orders = tuple(int(d) for d in orders)
        if any(d < 2 for d in self.orders):
            raise LatticeError("generator orders must be >= 2")
        if _check_chain:
            for a, b in zip(self.orders, self.orders[1:]):
                if b % a != 0:
                    raise LatticeError("orders must form a divisibility chain")
        self.q_values = tuple(_frac_mod(v, 2) for v in q_values)
        self.b_matrix = tuple(
            tuple(_frac_mod(v, 1) for v in row) for row in b_matrix
        )
        self.lifts = None if lifts is None else tuple(tuple(Fraction(x) for x in v) for v in lifts)
        self._coord_data = coord_data  # (gram, U_matrix, kept_indices, snf_diagonal)
        k = len(self.orders)
        if len(self.q_values) != k or len(self.b_matrix) != k:
            raise LatticeError("value tables must match the number of generators")
        for i in range(k):
            if _frac_mod(self.q_values[i], 1) != self.b_matrix[i][i]:
                raise LatticeError("diagonal of b must be q reduced modulo Z")

    @property
    def ngens(self):
        return len(self.orders)

    def order(self):
        out = 1
        for d in self.orders:
            out *= d
        return out

    def is_trivial(self):
        return self.ngens == 0

    def q_of(self, coords):
        """q(sum coords_i g_i) in [0, 2)."""
        total = Fraction(0)
        k = self.ngens
        for i in range(k):
            a = coords[i]
            if a % self.orders[i] == 0:
                continue
            total += a * a * self.q_values[i]
            for j in range(i + 1, k):
                total += 2 * a * coords[j] * self.b_matrix[i][j]
        return _frac_mod(total, 2)

    def b_of(self, coords1, coords2):
        """b(x, y) in [0, 1)."""
        total = Fraction(0)
        k = self.ngens
        for i in range(k):
            for j in range(k):
                total += coords1[i] * coords2[j] * self.b_matrix[i][j]
        return _frac_mod(total, 1)

    def element_order(self, coords):
        out = 1
        for a, d in zip(coords, self.orders):
            out = lcm(out, d // gcd(a % d, d))
        return out

    def negated(self):
        return FiniteQuadraticForm(
            self.orders,
            [_frac_mod(-v, 2) for v in self.q_values],
            [[_frac_mod(-v, 1) for v in row] for row in self.b_matrix],
            lifts=self.lifts,
        )

    def direct_sum(self, other):
        # orders are concatenated, then renormalized through a divisibility chain
        combined = _regenerate(
            list(self.orders) + list(other.orders),
            _block_b(self, other),
            list(self.q_values) + list(other.q_values),
        )
        return combined

    def primes(self):
        out = set()
        for d in self.orders:
            out.update(factorize(d))
        return sorted(out)

    def p_primary_part(self, p):
        """Restriction to the p-Sylow subgroup (orthogonal summand)."""
        gens = []
        for i, d in enumerate(self.orders):
            e = valuation(d, p) if d % p == 0 else 0
            if e == 0:
                continue
            m = d // p**e
            coords = [0] * self.ngens
            coords[i] = m
            gens.append((coords, p**e))
        return self.subform(gens)

    def subform(self, gens):
        """Form on the subgroup generated by (coords, order) pairs.

        The generators must be independent with the stated orders and the
        divisibility chain is enforced by ordering.
        """
        gens = sorted(gens, key=lambda g: g[1])
        orders = [g[1] for g in gens]
        q_values = [self.q_of(g[0]) for g in gens]
        b_matrix = [
            [self.b_of(g1[0], g2[0]) for g2 in gens] for g1 in gens
        ]
        lifts = None
        if self.lifts is not None:
            lifts = [
                tuple(
                    sum(Fraction(c) * Fraction(x) for c, x in zip(g[0], col))
                    for col in zip(*self.lifts)
                )
                for g in gens
            ]
        return FiniteQuadraticForm(orders, q_values, b_matrix, lifts=lifts)

    def all_elements(self):
        """Iterate (coords, order) over every nonzero element; small groups only."""
        from itertools import product

        for coords in product(*[range(d) for d in self.orders]):
            if any(coords):
                yield coords, self.element_order(coords)

    def dual_coords(self, x):
        """Coordinates (mod orders) of a dual vector x in this form's generators."""
        if self._coord_data is None:
            raise LatticeError("no ambient coordinate data on this form")
        gram, U, kept, all_orders = self._coord_data
        y = linalg.mat_vec(gram, x)
        if any(Fraction(c).denominator != 1 for c in y):
            raise LatticeError("vector is not in the dual lattice")
        w = linalg.mat_vec(U, [int(c) for c in y])
        coords = []
        for idx, i in enumerate(kept):
            coords.append(w[i] % self.orders[idx])
        return tuple(coords)


def _block_b(f1, f2):
    k1, k2 = f1.ngens, f2.ngens
    out = [[Fraction(0)] * (k1 + k2) for _ in range(k1 + k2)]
    for i in range(k1):
        for j in range(k1):
            out[i][j] = f1.b_matrix[i][j]
    for i in range(k2):
        for j in range(k2):
            out[k1 + i][k1 + j] = f2.b_matrix[i][j]
    return out


def _regenerate(orders, b_matrix, q_values):
    """Renormalize a generating set into invariant-factor form.

    Presents the group with relation matrix diag(orders) and recomputes a
    divisibility-chain generating set through the Smith normal form.
    """
    k = len(orders)
    if k == 0:
        return FiniteQuadraticForm((), (), ())
    rel = tuple(
        tuple(orders[i] if i == j else 0 for j in range(k)) for i in range(k)
    )
    U, S, V = linalg.snf_with_transform(rel)
    # group = Z^k / rel Z^k with generators e_i; new generators = columns of U^-1
    Uinv = linalg.mat_to_int(linalg.rat_inverse(U))
    new_orders = [S[i][i] for i in range(k)]
    gens = []
    for i in range(k):
        if new_orders[i] >= 2:
            col = tuple(Uinv[r][i] for r in range(k))
            gens.append((col, new_orders[i]))
    helper = FiniteQuadraticForm(orders, q_values, b_matrix, _check_chain=False)
    return helper.subform(gens)


def discriminant_form(L: Lattice):
    """Discriminant group D_L = L^dual / L with its Q/2Z-valued form (L even)."""
    if not L.is_even():
        raise LatticeError("discriminant form is defined for even lattices only")
    n = L.rank
    if n == 0:
        return FiniteQuadraticForm((), (), ())
    U, S, V = linalg.snf_with_transform(L.gram)
    diag = [S[i][i] for i in range(n)]
    kept = [i for i in range(n) if diag[i] >= 2]
    lifts = []
    orders = []
    for i in kept:
        d = diag[i]
        col = tuple(Fraction(V[r][i], d) for r in range(n))
        lifts.append(col)
        orders.append(d)
    q_values = []
    b_matrix = []
    for i, gi in enumerate(lifts):
        row = []
        Ggi = linalg.mat_vec(L.gram, gi)
        for j, gj in enumerate(lifts):
            row.append(_frac_mod(linalg.dot(Ggi, gj), 1))
        b_matrix.append(row)
        q_values.append(_frac_mod(linalg.dot(Ggi, gi), 2))
    form = FiniteQuadraticForm(
        orders,
        q_values,
        b_matrix,
        lifts=lifts,
        coord_data=(L.gram, U, kept, diag),
    )
    if form.order() != abs(L.determinant()):
        raise AssertionError("discriminant group order must equal |det|")
    return form


def p_primary_part(form: FiniteQuadraticForm, p):
    if not is_prime(p):
        raise LatticeError("p-primary part needs a prime")
    return form.p_primary_part(p)


def discriminant_action(L: Lattice, form: FiniteQuadraticForm, F):
    """Matrix (columns = images) of the action induced on D_L by an integral isometry."""
    if form.lifts is None:
        raise LatticeError("form carries no generator lifts")
    cols = []
    for lift in form.lifts:
        image = linalg.mat_vec(F, lift)
        cols.append(form.dual_coords(image))
    k = form.ngens
    return tuple(tuple(cols[j][i] for j in range(k)) for i in range(k))


# --- overlattices and gluing --------------------------------------------------


@dataclass(frozen=True)
class GlueMap:
    """Anti-isometry between two discriminant forms.

    ``matrix`` columns give the image of the i-th source generator in target
    generator coordinates.
    """

    source: FiniteQuadraticForm
    target: FiniteQuadraticForm
    matrix: tuple

    def __init__(self, source, target, matrix):
        matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", matrix)
        problems = glue_map_problems(source, target, matrix)
        if problems:
            raise LatticeError("invalid glue map: " + "; ".join(problems))

    def image(self, coords):
        k = self.target.ngens
        return tuple(
            sum(self.matrix[i][j] * coords[j] for j in range(self.source.ngens))
            % self.target.orders[i]
            for i in range(k)
        )


def _subgroup_order(form, elements):
    """Order of the subgroup generated by coordinate vectors of a finite form."""
    k = form.ngens
    if k == 0:
        return 1
    rows = [tuple(form.orders[i] if i == j else 0 for j in range(k)) for i in range(k)]
    rows += [tuple(int(c) for c in e) for e in elements]
    H = linalg.hnf(tuple(rows))
    det = 1
    for i in range(k):
        det *= H[i][i]
    return form.order() // det


def glue_map_problems(source, target, matrix):
    """List of reasons the matrix is not a valid glue map (empty when valid)."""
    problems = []
    ks, kt = source.ngens, target.ngens
    if len(matrix) != kt or any(len(row) != ks for row in matrix):
        return ["matrix shape does not match generator counts"]
    if source.order() != target.order():
        problems.append("group orders differ")
    cols = [tuple(matrix[i][j] for i in range(kt)) for j in range(ks)]
    for j, col in enumerate(cols):
        # well-defined: order of source generator annihilates the image
        scaled = tuple(c * source.orders[j] for c in col)
        if any(s % d != 0 for s, d in zip(scaled, target.orders)):
            problems.append(f"image of generator {j} has too large an order")
    for j, col in enumerate(cols):
        if _frac_mod(target.q_of(col) + source.q_values[j], 2) != 0:
            problems.append(f"q not negated on generator {j}")
    for i in range(ks):
        for j in range(i + 1, ks):
            if _frac_mod(target.b_of(cols[i], cols[j]) + source.b_matrix[i][j], 1) != 0:
                problems.append(f"b not negated on generator pair ({i},{j})")
    if not problems and _subgroup_order(target, cols) != source.order():
        problems.append("map is not bijective")
    return problems


def _span_with_extra_rows(rank, extra_rows):
    """Integer basis (rows) of Z^rank + sum Z * extra (rational rows)."""
    den = 1
    for row in extra_rows:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    rows = [tuple(den if i == j else 0 for j in range(rank)) for i in range(rank)]
    for row in extra_rows:
        rows.append(tuple(int(Fraction(x) * den) for x in row))
    H = linalg.hnf(tuple(rows))
    return tuple(tuple(Fraction(x, den) for x in row) for row in H)


def glue(M: Lattice, N: Lattice, phi: GlueMap):
    """Overlattice of M + N generated by the graph of the glue map phi.

    Returns (L, basis) where basis rows give the new lattice in (M + N)
    coordinates. The result must come out integral and even; with
    |det M| = |det N| it is unimodular.
    """
    qM = discriminant_form(M)
    qN = discriminant_form(N)
    if phi.source.orders != qM.orders or phi.target.orders != qN.orders:
        raise LatticeError("glue map does not match the discriminant forms")
    ambient = M.direct_sum(N)
    extras = []
    for j in range(qM.ngens):
        lift_m = qM.lifts[j]
        img = phi.image(tuple(1 if i == j else 0 for i in range(qM.ngens)))
        lift_n = [Fraction(0)] * N.rank
        for i, c in enumerate(img):
            lift_n = [a + c * b for a, b in zip(lift_n, qN.lifts[i])]
        extras.append(tuple(lift_m) + tuple(lift_n))
    basis = _span_with_extra_rows(ambient.rank, extras)
    gram = linalg.mat_mul(linalg.mat_mul(basis, ambient.gram), linalg.transpose(basis))
    if not linalg.is_integral(gram):
        raise LatticeError("glue produced a non-integral overlattice (invalid glue map)")
    L = Lattice(linalg.mat_to_int(gram))
    if not L.is_even():
        raise LatticeError("glue produced an odd overlattice (invalid glue map)")
    expected = abs(M.determinant() * N.determinant())
    index_sq = expected // abs(L.determinant())
    if index_sq != qM.order() ** 2:
        raise AssertionError("index of the glued overlattice is off")
    return L, basis


def overlattice_from_isotropic(M: Lattice, subgroup_gens):
    """Even overlattice attached to an isotropic subgroup of D_M.

    ``subgroup_gens`` are coordinate vectors in the generators of D_M.
    """
    qM = discriminant_form(M)
    gens = [tuple(int(c) for c in g) for g in subgroup_gens]
    for g in gens:
        if qM.q_of(g) != 0:
            raise LatticeError(f"subgroup generator {g} is not isotropic (q = {qM.q_of(g)})")
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if qM.b_of(gens[i], gens[j]) != 0:
                raise LatticeError("subgroup is not isotropic (nonzero pairing)")
    extras = []
    for g in gens:
        lift = [Fraction(0)] * M.rank
        for i, c in enumerate(g):
            lift = [a + c * b for a, b in zip(lift, qM.lifts[i])]
        extras.append(tuple(lift))
    basis = _span_with_extra_rows(M.rank, extras)
    gram = linalg.mat_mul(linalg.mat_mul(basis, M.gram), linalg.transpose(basis))
    if not linalg.is_integral(gram):
        raise AssertionError("isotropic subgroup produced a non-integral overlattice")
    L = Lattice(linalg.mat_to_int(gram))
    if not L.is_even():
        raise AssertionError("isotropic subgroup produced an odd overlattice")
    h = _subgroup_order(qM, gens)
    if abs(L.determinant()) * h * h != abs(M.determinant()):
        raise AssertionError("overlattice determinant does not match subgroup order")
    return L, basis


def is_primitive_sublattice(L: Lattice, basis_rows):
    B = tuple(tuple(int(x) for x in row) for row in basis_rows)
    sat = linalg.saturation(B)
    return len(linalg.hnf(B)) == len(B) and linalg.hnf(B) == linalg.hnf(sat), sat


def orthogonal_complement(L: Lattice, basis_rows):
    """Orthogonal complement of a primitive nondegenerate sublattice.

    Returns (complement_lattice, complement_basis_rows).
    """
    B = tuple(tuple(int(x) for x in row) for row in basis_rows)
    if linalg.rank(B) != len(B):
        raise LatticeError("sublattice basis rows are dependent")
    sub_gram = linalg.mat_mul(linalg.mat_mul(B, L.gram), linalg.transpose(B))
    if linalg.bareiss_det(sub_gram) == 0:
        raise LatticeError("sublattice is degenerate; complement not supported")
    primitive, sat = is_primitive_sublattice(L, B)
    if not primitive:
        raise LatticeError(
            "sublattice is not primitive; its saturation has basis "
            + str([list(r) for r in sat])
        )
    # rows x with x G B^T = 0 pair to zero with every basis row
    GBt = linalg.mat_mul(L.gram, linalg.transpose(B))
    comp = linalg.int_row_kernel(GBt)
    comp_gram = linalg.mat_mul(linalg.mat_mul(comp, L.gram), linalg.transpose(comp))
    return Lattice(comp_gram), comp


def enumerate_vectors_of_norm(L: Lattice, m):
    """All v with <v, v> = m in a definite lattice, canonically sorted.

    A divisibility prefilter answers first when m misses the gcd of all
    attainable norms (this settles some indefinite twists without any
    enumeration); otherwise the lattice must be definite.
    """
    if m == 0:
        return []
    div = 0
    n = L.rank
    for i in range(n):
        div = gcd(div, L.gram[i][i])
        for j in range(i + 1, n):
            div = gcd(div, 2 * L.gram[i][j])
    if div and m % div != 0:
        return []
    s_plus, s_minus = L.signature()
    if s_plus and s_minus:
        raise LatticeError("enumeration requires a definite lattice")
    sign = 1 if s_minus == 0 else -1
    if sign * m < 0:
        return []
    G = linalg.mat_scale(sign, L.gram)
    found = linalg.qf_enumerate(G, sign * m)
    return sorted(v for v in found if L.norm(v) == m)


def roots(L: Lattice):
    return enumerate_vectors_of_norm(L, -2)


# --- isomorphism of finite quadratic forms -------------------------------------


def odd_diagonalize_tracked(form, p):
    """Diagonalize the p-primary part (p odd) of a finite quadratic form.

    Returns (part, entries) with entries a list of (e, unit, coords): an
    orthogonal generator of order p^e with beta-value unit / p^e (beta = q/2,
    polar form b), given by its coordinates over the part's generators.
    Exact Gram-Schmidt over the p-group; valid for odd p only.
    """
    part = form.p_primary_part(p)
    k = part.ngens
    if k == 0:
        return part, []
    max_steps = valuation(part.order(), p)
    # work with beta = q/2 (odd order makes division by 2 harmless)
    gens = [tuple(1 if i == j else 0 for i in range(k)) for j in range(k)]
    out = []

    def beta(x):
        return _frac_mod(part.q_of(x) / 2, 1)

    def order_of(x):
        return part.element_order(x)

    while gens:
        # candidate with beta-denominator equal to the largest generator order
        max_order = max(order_of(g) for g in gens)
        cand = None
        for g in gens:
            if order_of(g) == max_order and beta(g).denominator == max_order:
                cand = g
                break
        if cand is None:
            for gi in gens:
                for gj in gens:
                    if gi is gj:
                        continue
                    s = tuple((a + b) % d for a, b, d in zip(gi, gj, part.orders))
                    if order_of(s) == max_order and beta(s).denominator == max_order:
                        cand = s
                        break
                if cand:
                    break
        if cand is None:
            raise AssertionError("odd p-form without a norm generator; form degenerate?")
        e = valuation(max_order, p)
        unit = int(beta(cand) * max_order) % max_order
        out.append((e, unit % p**e, cand))
        bc_num = int(part.b_of(cand, cand) * max_order)
        inv = pow(bc_num, -1, max_order)
        new_gens = []
        for g in gens:
            c = int(part.b_of(cand, g) * max_order) % max_order
            coef = (c * inv) % max_order
            g2 = tuple((a - coef * b) % d for a, b, d in zip(g, cand, part.orders))
            if any(g2):
                new_gens.append(g2)
        # keep a generating set of the orthogonal complement
        gens = sorted(set(g for g in new_gens if order_of(g) > 1))
        if len(out) > max_steps:
            raise AssertionError("odd diagonalization failed to terminate")
    return part, sorted(out)


def _odd_jordan_invariants(form, p):
    """Multiset of (scale e, rank, determinant square class) for odd p."""
    _, diag = odd_diagonalize_tracked(form, p)
    by_scale = {}
    for e, unit, _ in diag:
        by_scale.setdefault(e, []).append(unit)
    out = []
    for e, units in sorted(by_scale.items()):
        det = 1
        for u in units:
            det = det * u % p
        out.append((e, len(units), legendre(det, p)))
    return tuple(out)


def forms_isomorphic(f1, f2, anti=False, small_bound=40000):
    """Decide isomorphism (or anti-isometry for anti=True) of finite forms.

    Odd p-primary parts are compared through Jordan invariants; the 2-primary
    parts go through explicit backtracking, which requires them to be small.
    """
    if f1.orders != f2.orders:
        return False
    primes = f1.primes()
    for p in primes:
        p1 = f1.p_primary_part(p)
        p2 = f2.p_primary_part(p)
        if anti:
            p2 = p2.negated()
        if p != 2:
            if _odd_jordan_invariants(p1, p) != _odd_jordan_invariants(p2, p):
                return False
        else:
            if p1.order() > small_bound:
                raise LatticeError("2-primary part too large for direct comparison")
            if find_form_isometry(p1, p2) is None:
                return False
    return True


def find_form_isometry(f1, f2, max_order=40000):
    """Explicit isomorphism matching q (backtracking); None if there is none.

    Only for small groups; the returned matrix has the image of the j-th
    generator of f1 in its j-th column.
    """
    if f1.orders != f2.orders:
        return None
    if f1.order() > max_order:
        raise LatticeError("group too large for backtracking search")
    if f1.ngens == 0:
        return ()
    elements = {}
    for coords, order in f2.all_elements():
        elements.setdefault((order, f2.q_of(coords)), []).append(coords)
    k = f1.ngens
    chosen = []

    def extend(j):
        if j == k:
            cols = chosen
            if _subgroup_order(f2, cols) != f1.order():
                return False
            return True
        key = (f1.orders[j], f1.q_values[j])
        for cand in elements.get(key, []):
            ok = all(
                f2.b_of(chosen[i], cand) == f1.b_matrix[i][j] for i in range(j)
            )
            if not ok:
                continue
            chosen.append(cand)
            if extend(j + 1):
                return True
            chosen.pop()
        return False

    if not extend(0):
        return None
    kt = f2.ngens
    return tuple(tuple(chosen[j][i] for j in range(k)) for i in range(kt))


def find_anti_isometry(f1, f2, max_order=40000):
    """Explicit anti-isometry f1 -> f2 for small groups, or None."""
    iso = find_form_isometry(f1, f2.negated(), max_order=max_order)
    return iso


def hyperbolic_p_form(p, n):
    """The scale-1/p^n hyperbolic form on (Z/p^n)^2."""
    pn = p**n
    return FiniteQuadraticForm(
        (pn, pn),
        (Fraction(0), Fraction(0)),
        ((Fraction(0), Fraction(1, pn)), (Fraction(1, pn), Fraction(0))),
    )


# --- serialization -------------------------------------------------------------


def lattice_to_json(L: Lattice):
    return {"rank": L.rank, "gram": [[str(x) for x in row] for row in L.gram]}


def lattice_from_json(data):
    if not isinstance(data, dict) or set(data) != {"rank", "gram"}:
        raise ValueError("lattice JSON must have exactly the fields 'rank' and 'gram'")
    gram = data["gram"]
    if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram):
        raise ValueError("lattice gram must be a list of rows")
    try:
        rows = [[int(x) for x in row] for row in gram]
    except (TypeError, ValueError):
        raise ValueError("lattice gram entries must be decimal integer strings") from None
    if data["rank"] != len(rows):
        raise ValueError("lattice rank does not match the gram matrix")
    return Lattice(rows)
