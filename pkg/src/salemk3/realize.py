"""Realizability decisions and machine-checkable certificates.

The decision side is a truth table over the degree, the second Betti number
and the square class of -s(1)s(-1). The witness side builds, for a curated
seed, an even unimodular lattice of K3 signature together with an integral
isometry whose dynamical degree is a power of the given Salem number: twist
the Salem block by a split-prime square, retwist a hyperbolic plane of the
fixed block to match discriminants, glue, and power the isometry until it
descends to the overlattice.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from . import linalg
from .isometries import (
    Isometry,
    TwistElement,
    matrix_from_json,
    matrix_to_json,
    twist,
)
from .lattices import (
    GlueMap,
    Lattice,
    LatticeError,
    discriminant_action,
    discriminant_form,
    find_anti_isometry,
    forms_isomorphic,
    glue,
    lattice_E6,
    lattice_E8,
    lattice_U,
    lattice_from_json,
    lattice_to_json,
    named_lattice,
    odd_diagonalize_tracked,
)
from .numbertheory import factorize, is_prime, legendre, sqrt_mod, valuation
from .polynomials import (
    IntPolynomial,
    NotSalemError,
    discriminant,
    is_salem,
    poly_from_json,
    poly_to_json,
    power_min_poly,
    square_class_test,
    trace_polynomial,
)
from .positivity import ObstructionReport, is_positive


class RealizeError(ValueError):
    pass


class SearchCapExceeded(RealizeError):
    pass


# --- surface classes -----------------------------------------------------------


@dataclass(frozen=True)
class SurfaceClass:
    kind: str
    b2: int
    h11: int
    lattice_name: str

    def lattice(self):
        return named_lattice(self.lattice_name)


# b2 is the second Betti number of the class, h11 the standard middle Hodge
# number (4 / 20 / 10 for torus / K3 / Enriques); the lattice is the second
# cohomology modulo torsion
SURFACE_CLASSES = {
    "torus": SurfaceClass("torus", 6, 4, "3U"),
    "k3": SurfaceClass("k3", 22, 20, "3U+2E8"),
    "enriques": SurfaceClass("enriques", 10, 10, "U+E8"),
}


def surface_class(kind):
    if kind not in SURFACE_CLASSES:
        raise RealizeError(f"unknown surface class {kind!r}")
    return SURFACE_CLASSES[kind]


@dataclass(frozen=True)
class Decision:
    answer: bool
    reason: str
    clause: object = None


def stable_realizable(s: IntPolynomial, kind, projective=False):
    """Does some power of the Salem number realize on the given surface class?

    Yes iff d < b2, or d = b2 and -s(1)s(-1) is a rational square; the
    projective refinement additionally needs d <= h^{1,1}.
    """
    K = surface_class(kind) if isinstance(kind, str) else kind
    is_salem(s)
    d = s.degree
    if d > K.b2:
        return Decision(False, f"degree {d} exceeds b2 = {K.b2}")
    if d == K.b2:
        if not square_class_test(s):
            return Decision(False, f"d = b2 = {K.b2} but -s(1)s(-1) is not a square", 2)
        base = Decision(True, "clause (2): d = b2 and -s(1)s(-1) is a square", 2)
    else:
        base = Decision(True, f"clause (1): d = {d} < b2 = {K.b2}", 1)
    if projective and d > K.h11:
        return Decision(
            False, f"projective case needs d <= h11 = {K.h11}, got d = {d}"
        )
    return base


@dataclass(frozen=True)
class RationalIsometryDecision:
    exists: bool
    reason: str
    clause: object = None
    hyperbolic_kernel_available: bool = False
    signature_3_kernel_available: bool = False


def rational_isometry_criterion(s: IntPolynomial, lattice_name):
    """Existence of a rational isometry with characteristic polynomial
    s(x)(x-1)^(rk - d); pure decision, no witness."""
    if lattice_name not in ("3U", "U+E8", "3U+2E8"):
        raise RealizeError("criterion applies to 3U, U+E8 and 3U+2E8 only")
    is_salem(s)
    L = named_lattice(lattice_name)
    rk = L.rank
    d = s.degree
    sig3 = L.signature()[0] == 3
    if d <= rk - 2:
        return RationalIsometryDecision(
            True,
            f"clause (1): d = {d} <= rank - 2 = {rk - 2}",
            1,
            hyperbolic_kernel_available=True,
            signature_3_kernel_available=sig3,
        )
    if d == rk:
        if square_class_test(s):
            return RationalIsometryDecision(
                True,
                "clause (2): d = rank and -s(1)s(-1) is a square",
                2,
                signature_3_kernel_available=sig3,
            )
        return RationalIsometryDecision(
            False, "d = rank but -s(1)s(-1) is not a square", 2
        )
    return RationalIsometryDecision(False, f"degree {d} does not fit rank {rk}")


def mod2_trivial(matrix):
    """True iff the integral matrix is congruent to the identity mod 2."""
    if not linalg.is_integral(matrix):
        raise RealizeError("mod-2 reduction needs an integral matrix")
    n = len(matrix)
    return all(
        (int(matrix[i][j]) - (1 if i == j else 0)) % 2 == 0
        for i in range(n)
        for j in range(n)
    )


# --- split primes and norm elements ----------------------------------------------


@dataclass(frozen=True)
class SplitPrimeEvidence:
    p: int
    trace_root: int  # simple root of the trace polynomial mod p
    unit_circle_sqrt: int  # square root of trace_root^2 - 4 mod p
    modulus: int  # the congruence 8 |det R| that p satisfies (1 when relaxed)


def _poly_mod_p(poly: IntPolynomial, p):
    return [c % p for c in poly.coeffs]


def _polyval_mod(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _poly_gcd_mod_p(f, g, p):
    f = [c % p for c in f]
    g = [c % p for c in g]

    def trim(h):
        while h and h[-1] == 0:
            h.pop()
        return h

    f, g = trim(f), trim(g)
    while g:
        inv = pow(g[-1], -1, p)
        while len(f) >= len(g):
            factor = f[-1] * inv % p
            shift = len(f) - len(g)
            for i, c in enumerate(g):
                f[shift + i] = (f[shift + i] - factor * c) % p
            trim(f)
            if not f:
                break
        f, g = g, f
    return f


def _synthetic_quotient_mod(coeffs, root, p):
    """(f / (y - root)) mod p for a root of f mod p."""
    out = []
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * root + c) % p
        out.append(acc)
    remainder = out.pop()
    if remainder % p:
        raise ArithmeticError("not a root")
    return list(reversed(out))


def find_split_prime(s: IntPolynomial, det_R, lower_bound=None, cap=2_000_000):
    """Smallest prime p = 1 mod 8|det_R| above the bound that is split for s.

    Split means: the trace polynomial has a simple root a mod p and
    x^2 - a x + 1 splits mod p (Legendre symbol of a^2 - 4 equals +1);
    primes dividing 2 disc(s) or disc(r) are skipped. Evidence carries the
    root and the square root of a^2 - 4.
    """
    if det_R == 0:
        raise RealizeError("det_R must be nonzero")
    is_salem(s)
    r = trace_polynomial(s)
    disc_s = discriminant(s)
    disc_r = discriminant(r) if r.degree >= 1 else 1
    modulus = 8 * abs(det_R)
    start = max(2, (lower_bound if lower_bound is not None else 2))
    p = 1 + modulus * ((start - 1) // modulus)
    while True:
        p += modulus
        if p > cap:
            raise SearchCapExceeded(f"no split prime found below {cap}")
        if p <= start or not is_prime(p):
            continue
        if (2 * disc_s) % p == 0 or disc_r % p == 0:
            continue
        rm = _poly_mod_p(r, p)
        rderiv = _poly_mod_p(r.derivative(), p)
        for a in range(p):
            if _polyval_mod(rm, a, p) != 0:
                continue
            if _polyval_mod(rderiv, a, p) == 0:
                continue
            d = (a * a - 4) % p
            if d == 0 or legendre(d, p) != 1:
                continue
            return SplitPrimeEvidence(p, a, sqrt_mod(d, p), modulus)


def check_split_prime(s: IntPolynomial, ev: SplitPrimeEvidence):
    """Independent re-check: s mod p has the root (a + sqrt(a^2-4))/2."""
    p, a, w = ev.p, ev.trace_root, ev.unit_circle_sqrt
    if (w * w - (a * a - 4)) % p != 0:
        return False
    b = (a + w) * pow(2, -1, p) % p
    return _polyval_mod(_poly_mod_p(s, p), b, p) == 0


def find_norm_element(s: IntPolynomial, ev: SplitPrimeEvidence, l_max=3, box=30):
    """Generator t of a power of the chosen degree-one split prime.

    Scans integer polynomials t(w) of degree < deg r with coefficients up to
    ``box`` for |Norm(t)| = p^l, t(a) = 0 mod p, and no vanishing at the
    other primes above p. Deterministic order; raises when the box is
    exhausted (a class-group obstruction would need a larger box or l_max).
    """
    r = trace_polynomial(s)
    m = r.degree
    p, a = ev.p, ev.trace_root
    if m == 1:
        return TwistElement(IntPolynomial([p])), 1
    rm = _poly_mod_p(r, p)
    cofactor = _synthetic_quotient_mod(rm, a, p)
    from itertools import product

    powers = {p**l: l for l in range(1, l_max + 1)}
    for radius in range(1, box + 1):
        for coeffs in sorted(product(range(-radius, radius + 1), repeat=m)):
            if max(abs(c) for c in coeffs) != radius:
                continue
            tp = IntPolynomial(coeffs)
            if tp.is_zero():
                continue
            t = TwistElement(tp)
            norm = abs(t.norm_against(r))
            if norm not in powers:
                continue
            if _polyval_mod(_poly_mod_p(tp, p), a, p) != 0:
                continue
            g = _poly_gcd_mod_p(_poly_mod_p(tp, p), cofactor, p)
            if len(g) > 1:
                continue
            return t, powers[norm]
    raise SearchCapExceeded("norm-element box exhausted")


def _sqrt_mod_prime_power(a, p, e):
    """Square root of a unit modulo p^e (odd p), or None."""
    a %= p**e
    root = sqrt_mod(a % p, p)
    if root is None or root == 0:
        return None
    pk = p
    for _ in range(e - 1):
        pk *= p
        # Hensel: root <- root - (root^2 - a) / (2 root)
        num = (root * root - a) % pk
        root = (root - num * pow(2 * root, -1, pk)) % pk
    return root


# --- seeds ----------------------------------------------------------------------


@dataclass(frozen=True)
class Seed:
    """Curated data realizing the Salem block inside the K3 lattice.

    ``S`` is an even hyperbolic lattice with integral isometry ``f_S`` whose
    characteristic polynomial is the Salem polynomial; the orthogonal
    complement inside 3U + 2E8 is U + R_rest with the identity isometry, and
    the U summand is the plane retwisted during certificate construction.
    """

    salem: IntPolynomial
    S: Lattice
    f_S: tuple
    R_rest: Lattice

    def R(self):
        return lattice_U().direct_sum(self.R_rest)


def _quartic_seed():
    s4 = IntPolynomial([1, -1, -1, -1, 1])
    S = Lattice(((-2, 1, 0, -2), (1, -2, 1, 0), (0, 1, -2, 1), (-2, 0, 1, -2)))
    f = ((0, 0, 0, -1), (1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1))
    R_rest = lattice_U().direct_sum(lattice_E8()).direct_sum(lattice_E6())
    return Seed(salem=s4, S=S, f_S=f, R_rest=R_rest)


_SEEDS = None


def seed_library():
    global _SEEDS
    if _SEEDS is None:
        _SEEDS = {(1, -1, -1, -1, 1): _quartic_seed()}
    return _SEEDS


def seed_for(s: IntPolynomial):
    return seed_library().get(tuple(s.coeffs))


def validate_seed(seed: Seed):
    cert = is_salem(seed.salem)
    if cert.quadratic_degenerate:
        raise RealizeError("quadratic Salem seeds are not supported for K3 witnesses")
    f = Isometry(seed.S, seed.f_S)
    if f.char_poly().coeffs != seed.salem.coeffs:
        raise RealizeError("seed isometry has the wrong characteristic polynomial")
    if not seed.S.is_even() or not seed.S.is_hyperbolic():
        raise RealizeError("seed Salem block must be even and hyperbolic")
    R = seed.R()
    if not R.is_even():
        raise RealizeError("seed complement must be even")
    if seed.S.rank + R.rank != 22:
        raise RealizeError("seed blocks must fill rank 22")
    total_sig = tuple(
        x + y for x, y in zip(seed.S.signature(), R.signature())
    )
    if total_sig != (3, 19):
        raise RealizeError("seed blocks must have total signature (3, 19)")
    if abs(seed.S.determinant()) != abs(R.determinant()):
        raise RealizeError("seed determinants do not match")
    if not forms_isomorphic(discriminant_form(seed.S), discriminant_form(R), anti=True):
        raise RealizeError("seed discriminant forms are not anti-isometric")
    return f


# --- glue-map construction --------------------------------------------------------


def _group_matrix_is_identity(A, orders):
    k = len(orders)
    return all(
        (A[i][j] - (1 if i == j else 0)) % orders[i] == 0
        for i in range(k)
        for j in range(k)
    )


def _group_matrix_mul(A, B, orders):
    k = len(orders)
    return tuple(
        tuple(sum(A[i][t] * B[t][j] for t in range(k)) % orders[i] for j in range(k))
        for i in range(k)
    )


def _p_part_action(A, orders, p):
    """Matrix of the automorphism restricted to the p-Sylow subgroup.

    With h_i = (d_i / p^{e_i}) g_i the coefficient of h_j in phi(h_i) is
    A[j][i] * cof_i * cof_j^{-1} mod p^{e_j}.
    """
    idx = [i for i, d in enumerate(orders) if d % p == 0]
    exps = [valuation(orders[i], p) for i in idx]
    cofs = [orders[i] // p ** e for i, e in zip(idx, exps)]
    mat = []
    for jj, j in enumerate(idx):
        pej = p ** exps[jj]
        row = []
        for ii, i in enumerate(idx):
            row.append(A[j][i] * cofs[ii] * pow(cofs[jj], -1, pej) % pej)
        mat.append(tuple(row))
    return tuple(mat), tuple(p ** e for e in exps)


def _action_order(A, orders, cap=10**7, brute_cap=200000):
    """Order of an automorphism of a finite abelian group.

    Homogeneous p-parts go through matrix-order computation modulo p^E;
    mixed-order p-parts (small in every use here) are iterated directly.
    """
    if not orders:
        return 1
    from .isometries import _matrix_order_mod

    primes = set()
    for d in orders:
        primes.update(factorize(d))
    order = 1
    for p in sorted(primes):
        Ap, sub_orders = _p_part_action(A, orders, p)
        if len(set(sub_orders)) == 1:
            o = _matrix_order_mod(Ap, sub_orders[0])
        else:
            o = 1
            power = Ap
            while not _group_matrix_is_identity(power, sub_orders):
                power = _group_matrix_mul(power, Ap, sub_orders)
                o += 1
                if o > brute_cap:
                    raise SearchCapExceeded("mixed-order action too large to iterate")
        order = lcm(order, o)
    if order > cap:
        raise SearchCapExceeded("discriminant action order exceeds the cap")
    if not _group_matrix_is_identity(_group_power(A, order, orders), orders):
        raise AssertionError("action order computation is inconsistent")
    return order


def _group_power(A, n, orders):
    k = len(orders)
    result = tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))
    base = A
    while n:
        if n & 1:
            result = _group_matrix_mul(result, base, orders)
        base = _group_matrix_mul(base, base, orders)
        n >>= 1
    return result


def _divisors_of(n):
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


def _represent_by_binary(c1, c2, target, p, e):
    """(x, y) with c1 x^2 + c2 y^2 = target mod p^e; units c1, c2, target, p odd."""
    pe = p**e
    inv_c2 = pow(c2, -1, p)
    for x0 in range(p):
        rest = (target - c1 * x0 * x0) * inv_c2 % p
        if rest == 0:
            y0 = 0
        else:
            y0 = sqrt_mod(rest, p)
            if y0 is None:
                continue
        if x0 % p == 0 and y0 % p == 0:
            continue
        x, y = x0, y0
        if x % p != 0:
            # lift x with y fixed
            pk = p
            for _ in range(e - 1):
                pk *= p
                num = (c1 * x * x + c2 * y * y - target) % pk
                x = (x - num * pow(2 * c1 * x, -1, pk)) % pk
        else:
            pk = p
            for _ in range(e - 1):
                pk *= p
                num = (c1 * x * x + c2 * y * y - target) % pk
                y = (y - num * pow(2 * c2 * y, -1, pk)) % pk
        if (c1 * x * x + c2 * y * y - target) % pe == 0:
            return x % pe, y % pe
    raise AssertionError("binary odd unimodular form failed to represent a unit")


def _odd_homogeneous_anti_map(part1, diag1, part2, diag2, p):
    """Anti-isometry between homogeneous odd p-parts from diagonal data.

    Both parts must have all generator orders equal to p^E. Returns the map
    matrix over the parts' own generators (columns = images).
    """
    E = valuation(part1.orders[0], p)
    pe = p**E
    if any(o != pe for o in part1.orders) or any(o != pe for o in part2.orders):
        raise LatticeError("constructive p-part matching needs homogeneous parts")
    src = sorted(diag1)
    avail = [(unit, coords) for (_, unit, coords) in sorted(diag2)]
    images = []  # images of the source diagonal generators, over part2 gens
    for (_, u, _) in src:
        target_val = (-u) % pe
        chosen = None
        for j, (c, gcoords) in enumerate(avail):
            ratio = target_val * pow(c, -1, pe) % pe
            t = _sqrt_mod_prime_power(ratio, p, E)
            if t is not None:
                chosen = tuple(t * x % pe for x in gcoords)
                del avail[j]
                break
        if chosen is None:
            if len(avail) < 2:
                raise LatticeError("p-part values cannot be matched")
            (c1, g1), (c2, g2) = avail[0], avail[1]
            x, y = _represent_by_binary(c1, c2, target_val, p, E)
            chosen = tuple((x * a + y * b) % pe for a, b in zip(g1, g2))
            # orthogonal complement of chosen inside span(g1, g2)
            bcc = int(part2.b_of(chosen, chosen) * pe) % pe
            inv = pow(bcc, -1, pe)
            h = None
            for g in (g1, g2):
                c = int(part2.b_of(chosen, g) * pe) % pe
                cand = tuple((a - c * inv * b) % pe for a, b in zip(g, chosen))
                if part2.element_order(cand) == pe:
                    bh = (part2.q_of(cand) / 2) % 1
                    if bh.denominator == pe:
                        h = (int(bh * pe) % pe, cand)
                        break
            if h is None:
                raise AssertionError("binary block complement degenerated")
            avail = [h] + avail[2:]
        images.append(chosen)
    if avail:
        raise AssertionError("block matching left unused generators")
    # express the part1 original generators through its diagonal generators
    W = tuple(tuple(coords[i] for (_, _, coords) in src) for i in range(part1.ngens))
    Winv = _invert_mod(W, pe)
    k1 = part1.ngens
    k2 = part2.ngens
    out = []
    for i in range(k2):
        row = []
        for j in range(k1):
            row.append(
                sum(Winv[t][j] * images[t][i] for t in range(len(src))) % pe
            )
        out.append(tuple(row))
    return tuple(out)


def _invert_mod(M, m):
    """Inverse of a square integer matrix modulo m (determinant a unit)."""
    n = len(M)
    det = linalg.bareiss_det(M)
    det_inv = pow(det % m, -1, m)
    _, adj = linalg.charpoly_and_adjugate(M)
    # adj(xI - M) at x = 0 gives adj(-M) = (-1)^(n-1) adj(M)
    adj0 = adj[0]
    sign = 1 if (n - 1) % 2 == 0 else -1
    return tuple(
        tuple(sign * adj0[i][j] * det_inv % m for j in range(n)) for i in range(n)
    )


def build_glue_map(q1, q2, small_bound=40000):
    """Anti-isometry q1 -> q2 assembled prime by prime.

    Small p-parts go through backtracking; large odd homogeneous parts use
    the constructive diagonal matching. The assembled map is validated by the
    GlueMap constructor, so any failure surfaces loudly.
    """
    if q1.orders != q2.orders:
        raise LatticeError("discriminant groups are not isomorphic")
    if q1.is_trivial():
        return GlueMap(q1, q2, ())
    primes = q1.primes()
    per_prime = {}
    for p in primes:
        part1 = q1.p_primary_part(p)
        part2 = q2.p_primary_part(p)
        if part1.order() <= small_bound:
            mat = find_anti_isometry(part1, part2, max_order=small_bound)
            if mat is None:
                raise LatticeError(f"no anti-isometry at p = {p}")
        elif p != 2:
            _, diag1 = odd_diagonalize_tracked(q1, p)
            _, diag2 = odd_diagonalize_tracked(q2, p)
            mat = _odd_homogeneous_anti_map(part1, diag1, part2, diag2, p)
        else:
            raise LatticeError("2-primary part too large for glue construction")
        per_prime[p] = mat
    # assemble on the original generators from their CRT components:
    # the p-component of g_j is u * h_j with h_j = (d_j / p^e) g_j and
    # u the inverse of that cofactor mod p^e
    k = q1.ngens
    kt = q2.ngens
    columns = []
    for j in range(k):
        d = q1.orders[j]
        total = [0] * kt
        for p in primes:
            if d % p != 0:
                continue
            e = valuation(d, p)
            pe = p**e
            u = pow(d // pe, -1, pe)
            src_gens = _p_part_generator_indices(q1, p)
            tgt_gens = _p_part_generator_indices(q2, p)
            jj = src_gens.index(j)
            mat = per_prime[p]
            for ii, gi in enumerate(tgt_gens):
                e_t = valuation(q2.orders[gi], p)
                cof_t = q2.orders[gi] // p**e_t
                coeff = u * mat[ii][jj] % (p**e_t)
                total[gi] = (total[gi] + coeff * cof_t) % q2.orders[gi]
        columns.append(total)
    matrix = tuple(tuple(columns[j][i] for j in range(k)) for i in range(kt))
    return GlueMap(q1, q2, matrix)


def _p_part_generator_indices(form, p):
    return [i for i, d in enumerate(form.orders) if d % p == 0]


# --- certificates ---------------------------------------------------------------


CERTIFICATE_FORMAT = "salemk3-certificate-1"


@dataclass(frozen=True)
class RealizationCertificate:
    """Machine-checkable witness that lambda^power is a dynamical degree.

    Every field is re-derivable: the ambient lattice is even unimodular of
    the class signature, the isometry is integral with characteristic
    polynomial s_n(x)(x-1)^(b2-d), the kernel rows embed the Salem block, and
    the kernel generator g satisfies g^power = h restricted to the kernel, so
    chamber preservation for g (cheap to check) transfers to h.
    """

    surface: str
    projective: bool
    salem: IntPolynomial
    power: int
    salem_power_poly: IntPolynomial
    lattice: Lattice
    isometry: tuple
    kernel_basis: tuple
    kernel_generator: tuple
    positivity: object = None  # ObstructionReport for the kernel generator
    mod2_identity: object = None  # bool for torus / enriques
    glue_evidence: object = None  # dict from the construction pipeline


def pipeline_split_prime(s: IntPolynomial, exclude, cap=100000, order_cap=400000):
    """Split prime for the certificate pipeline, keeping the powering small.

    Scans split primes coprime to ``exclude``, estimating the order of the
    induced discriminant action (the order of the Salem root mod p^2), and
    returns the evidence minimizing that order among the first few hits.
    """
    r = trace_polynomial(s)
    disc_r = discriminant(r) if r.degree >= 1 else 1
    best = None
    found = 0
    p = 2
    while p < cap:
        p += 1
        if not is_prime(p) or exclude % p == 0 or disc_r % p == 0:
            continue
        rm = _poly_mod_p(r, p)
        rderiv = _poly_mod_p(r.derivative(), p)
        for a in range(p):
            if _polyval_mod(rm, a, p) != 0 or _polyval_mod(rderiv, a, p) == 0:
                continue
            dd = (a * a - 4) % p
            if dd == 0 or legendre(dd, p) != 1:
                continue
            w = sqrt_mod(dd, p)
            b = (a + w) * pow(2, -1, p) % p
            o = _unit_order(b, p)
            o2 = o if pow(b, o, p * p) == 1 else o * p
            if best is None or o2 < best[0]:
                best = (o2, SplitPrimeEvidence(p, a, w, 1))
            found += 1
        if found >= 6 and best is not None and best[0] <= order_cap:
            return best[1]
    if best is None:
        raise SearchCapExceeded("no pipeline split prime found")
    return best[1]


def _unit_order(b, p):
    o = p - 1
    for q in factorize(p - 1):
        while o % q == 0 and pow(b, o // q, p) == 1:
            o //= q
    return o


def build_k3_certificate(s: IntPolynomial, seed=None, l_max=3, box=30,
                         prime_cap=100000, congruence_prime=False, stage_trace=None):
    """Projective-K3 realization certificate for a power of the Salem number.

    Pipeline: split prime, norm element, twist the Salem block by t^2 and the
    distinguished hyperbolic plane of the complement by p^(2l), glue along a
    constructed anti-isometry, power the isometry until it descends to the
    overlattice, and package the evidence. Raises RealizeError naming the
    failing stage; no partial certificates.
    """

    def trace(stage, **info):
        if stage_trace is not None:
            stage_trace.append((stage, info))

    if seed is None:
        seed = seed_for(s)
        if seed is None:
            raise RealizeError(
                "no curated seed for this Salem polynomial; decision remains "
                "available through stable_realizable"
            )
    try:
        f_seed = validate_seed(seed)
    except (RealizeError, NotSalemError, LatticeError) as exc:
        raise RealizeError(f"stage seed-validation: {exc}") from exc
    if tuple(seed.salem.coeffs) != tuple(s.coeffs):
        raise RealizeError("stage seed-validation: seed is for a different polynomial")

    S, R_rest = seed.S, seed.R_rest
    R = seed.R()
    d = s.degree
    disc_s = discriminant(s)
    det_R = R.determinant()
    try:
        if congruence_prime:
            ev = find_split_prime(s, det_R, lower_bound=abs(disc_s), cap=max(prime_cap, 2_000_000))
        else:
            ev = pipeline_split_prime(
                s, exclude=2 * S.determinant() * disc_s * det_R, cap=prime_cap
            )
    except SearchCapExceeded as exc:
        raise RealizeError(f"stage split-prime: {exc}") from exc
    if not check_split_prime(s, ev):
        raise RealizeError("stage split-prime: evidence failed the independent re-check")
    p = ev.p
    trace("split-prime", p=p, trace_root=ev.trace_root)

    try:
        t, l = find_norm_element(s, ev, l_max=l_max, box=box)
    except SearchCapExceeded as exc:
        raise RealizeError(f"stage norm-element: {exc}") from exc
    trace("norm-element", t=list(t.poly.coeffs), l=l)

    # stage: twist the Salem block by t^2
    S2, f2 = twist(S, f_seed, TwistElement(t.poly * t.poly))
    expected_det = abs(S.determinant()) * p ** (4 * l)
    if abs(S2.determinant()) != expected_det:
        raise RealizeError("stage twist: twisted determinant is off")
    if not S2.is_hyperbolic():
        raise RealizeError("stage twist: twisted block lost hyperbolicity")
    trace("twist", det=S2.determinant())

    # stage: retwist the distinguished hyperbolic plane of the complement
    R2 = lattice_U().rescaled(p ** (2 * l)).direct_sum(R_rest)
    if abs(R2.determinant()) != expected_det:
        raise RealizeError("stage retwist: complement determinant is off")

    # stage: glue along a constructed anti-isometry
    qS2 = discriminant_form(S2)
    qR2 = discriminant_form(R2)
    if not forms_isomorphic(qS2, qR2, anti=True):
        raise RealizeError("stage glue: twisted discriminant forms are not anti-isometric")
    try:
        phi = build_glue_map(qS2, qR2)
        L22, basis = glue(S2, R2, phi)
    except LatticeError as exc:
        raise RealizeError(f"stage glue: {exc}") from exc
    if not (L22.is_even() and L22.is_unimodular() and L22.signature() == (3, 19)):
        raise RealizeError("stage glue: overlattice is not an even unimodular (3,19) lattice")
    trace("glue", det=L22.determinant())

    # stage: positivity of the base generator on the twisted block
    if abs(S2.determinant()) <= 4 * abs(disc_s):
        raise RealizeError("stage positivity: determinant bound unavailable")
    report = is_positive(S2, f2)
    if not report.is_positive():
        raise RealizeError("stage positivity: twisted block is not chamber-preserving")
    trace("positivity", method=report.method)

    # stage: power the isometry until it descends to the overlattice
    action = discriminant_action(S2, qS2, f2.matrix)
    try:
        k = _action_order(action, qS2.orders)
    except SearchCapExceeded as exc:
        raise RealizeError(f"stage power: {exc}") from exc
    Fk = linalg.mat_pow(f2.matrix, k)
    block = _block_diag(Fk, linalg.identity(R2.rank))
    h = _conjugate_to_basis(block, basis)
    if not linalg.is_integral(h):
        raise RealizeError("stage power: powered isometry does not descend")
    h = linalg.mat_to_int(h)
    Isometry(L22, h)  # validates the descended map preserves the glued form
    trace("power", k=k)

    s_n = power_min_poly(s, k)
    if s_n.degree != d:
        raise RealizeError("stage power: Salem power degenerated in degree")

    # kernel data: row i of basis^-1 is the coordinate vector of ambient e_i,
    # so the first rank-S2 rows embed the twisted Salem block
    embed = linalg.rat_inverse(basis)
    kernel_rows = tuple(tuple(int(x) for x in row) for row in embed[: S2.rank])
    kernel_gram = linalg.mat_mul(
        linalg.mat_mul(kernel_rows, L22.gram), linalg.transpose(kernel_rows)
    )
    if kernel_gram != S2.gram:
        raise RealizeError("stage kernel: embedded block does not carry the twisted form")

    glue_evidence = {
        "p": p,
        "l": l,
        "t": [str(c) for c in t.poly.coeffs],
        "trace_root": ev.trace_root,
        "det_kernel": str(S2.determinant()),
        "det_complement": str(R2.determinant()),
        "legendre_minus_one": legendre(p - 1, p),
        "legendre_det_complement": legendre(abs(det_R) % p, p) if abs(det_R) % p else 0,
    }
    cert = RealizationCertificate(
        surface="k3",
        projective=True,
        salem=s,
        power=k,
        salem_power_poly=s_n,
        lattice=L22,
        isometry=tuple(tuple(row) for row in h),
        kernel_basis=kernel_rows,
        kernel_generator=tuple(tuple(row) for row in f2.matrix),
        positivity=report,
        mod2_identity=None,
        glue_evidence=glue_evidence,
    )
    ok, items = verify_certificate(cert)
    if not ok:
        failing = [name for name, passed, _ in items if not passed]
        raise RealizeError(f"stage self-verify: certificate failed {failing}")
    return cert


def _block_diag(A, B):
    n, m = len(A), len(B)
    out = [[0] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            out[i][j] = A[i][j]
    for i in range(m):
        for j in range(m):
            out[n + i][n + j] = B[i][j]
    return tuple(tuple(row) for row in out)


def _conjugate_to_basis(block, basis):
    """Matrix of the block map in the overlattice basis (column convention)."""
    Bt = linalg.transpose(basis)
    return linalg.mat_mul(linalg.mat_mul(linalg.rat_inverse(Bt), block), Bt)


def _restriction_to_rows(F, rows):
    """Column-convention matrix of F on the row span; raises if not invariant."""
    image = linalg.mat_mul(rows, linalg.transpose(F))
    _, pivots = linalg.rat_row_reduce(rows)
    Rp = tuple(tuple(r[j] for j in pivots) for r in rows)
    Ip = tuple(tuple(r[j] for j in pivots) for r in image)
    X = linalg.mat_mul(Ip, linalg.rat_inverse(Rp))
    if linalg.mat_mul(X, linalg.mat_to_fraction(rows)) != linalg.mat_to_fraction(image):
        raise RealizeError("rows are not invariant under the isometry")
    return linalg.transpose(X)


def verify_certificate(cert: RealizationCertificate):
    """Re-run every check the certificate claims; returns (ok, itemized list).

    The characteristic-polynomial shape is verified through the invariant
    splitting: the kernel rows carry an isometry equal to the power of the
    kernel generator (char poly s_n), and the orthogonal complement of the
    kernel is fixed pointwise, so char(h) = s_n(x) (x-1)^(b2 - d) without any
    large determinant computation.
    """
    items = []

    def item(name, passed, detail=""):
        items.append((name, bool(passed), detail))
        return passed

    try:
        K = surface_class(cert.surface)
    except RealizeError as exc:
        item("surface", False, str(exc))
        return False, tuple(items)
    item("surface", True, K.kind)

    try:
        is_salem(cert.salem)
        salem_ok = True
    except NotSalemError as exc:
        salem_ok = False
        item("salem", False, exc.reason)
    if salem_ok:
        power_ok = cert.power >= 1 and cert.salem_power_poly.coeffs == power_min_poly(
            cert.salem, cert.power
        ).coeffs
        item("salem", power_ok, f"power = {cert.power}")
    d = cert.salem_power_poly.degree

    L = cert.lattice
    item(
        "ambient_lattice",
        L.rank == K.b2
        and L.is_even()
        and L.is_unimodular()
        and L.signature() == ((3, K.b2 - 3) if K.kind != "enriques" else (1, 9)),
        f"rank {L.rank}, signature {L.signature()}",
    )

    from .isometries import is_isometry as _is_iso

    h = cert.isometry
    iso_ok = item(
        "isometry",
        linalg.is_integral(h) and _is_iso(L, h),
        "integral isometry of the ambient lattice",
    )

    rows = cert.kernel_basis
    kernel_ok = True
    try:
        sub_gram = linalg.mat_mul(linalg.mat_mul(rows, L.gram), linalg.transpose(rows))
        kernel_lat = Lattice(sub_gram)
        from .lattices import is_primitive_sublattice

        primitive, _ = is_primitive_sublattice(L, rows)
        kernel_ok &= primitive and len(rows) == d
        expected_sig = (1, d - 1) if cert.projective else (3, d - 3)
        kernel_ok &= kernel_lat.signature() == expected_sig
    except (LatticeError, ValueError) as exc:
        kernel_ok = False
        kernel_lat = None
        item("kernel", False, str(exc))
    if kernel_lat is not None:
        item(
            "kernel",
            kernel_ok,
            f"rank {len(rows)}, signature {kernel_lat.signature()}",
        )

    char_ok = False
    if iso_ok and kernel_lat is not None:
        try:
            restricted = _restriction_to_rows(h, rows)
            g = cert.kernel_generator
            g_iso = Isometry(kernel_lat, g)
            g_char_ok = g_iso.char_poly().coeffs == cert.salem.coeffs
            gk = linalg.mat_pow(g, cert.power)
            match_ok = all(
                Fraction(a) == Fraction(b)
                for ra, rb in zip(restricted, gk)
                for a, b in zip(ra, rb)
            )
            # complement of the kernel is fixed pointwise
            from .lattices import orthogonal_complement

            comp_lat, comp_rows = orthogonal_complement(L, rows)
            fixed_ok = linalg.mat_mul(comp_rows, linalg.transpose(h)) == tuple(
                tuple(x for x in row) for row in comp_rows
            )
            sn = cert.salem_power_poly
            snk = power_min_poly(cert.salem, cert.power) if salem_ok else sn
            char_ok = g_char_ok and match_ok and fixed_ok and sn.coeffs == snk.coeffs
            item(
                "char_poly",
                char_ok,
                "kernel block is g^power with char(g) = s, complement fixed "
                f"pointwise; char(h) = s_n (x-1)^{K.b2 - d}",
            )
        except (RealizeError, ValueError, ArithmeticError) as exc:
            item("char_poly", False, str(exc))
    else:
        item("char_poly", False, "skipped: isometry or kernel failed")

    if cert.surface == "k3" and cert.projective:
        if kernel_lat is not None and char_ok:
            g_iso = Isometry(kernel_lat, cert.kernel_generator)
            rep = is_positive(kernel_lat, g_iso)
            pos_ok = rep.is_positive()
            if cert.positivity is not None:
                pos_ok &= cert.positivity.status == rep.status
            item("positivity", pos_ok, f"method = {rep.method}")
        else:
            item("positivity", False, "skipped: kernel unavailable")
    if cert.surface in ("torus", "enriques"):
        try:
            m2 = mod2_trivial(h)
        except RealizeError as exc:
            m2 = False
        claimed = cert.mod2_identity if cert.mod2_identity is not None else True
        item("mod2", m2 and claimed == m2, "isometry is the identity mod 2")

    ok = all(passed for _, passed, _ in items)
    return ok, tuple(items)


def power_certificate(cert: RealizationCertificate, m: int):
    """Certificate for the m-th power of the certified isometry."""
    if m < 1:
        raise RealizeError("power must be >= 1")
    h = linalg.mat_pow(cert.isometry, m)
    return RealizationCertificate(
        surface=cert.surface,
        projective=cert.projective,
        salem=cert.salem,
        power=cert.power * m,
        salem_power_poly=power_min_poly(cert.salem, cert.power * m),
        lattice=cert.lattice,
        isometry=tuple(tuple(row) for row in h),
        kernel_basis=cert.kernel_basis,
        kernel_generator=cert.kernel_generator,
        positivity=cert.positivity,
        mod2_identity=cert.mod2_identity,
        glue_evidence=cert.glue_evidence,
    )


# --- certificate serialization -----------------------------------------------------


def _report_to_json(rep: ObstructionReport):
    return {
        "status": rep.status,
        "method": rep.method,
        "witnesses": [
            {"vector": [str(x) for x in vec], "kind": kind} for vec, kind in rep.witnesses
        ],
        "search_bound": None if rep.search_bound is None else str(rep.search_bound),
        "candidate_count": rep.candidate_count,
    }


def _report_from_json(data):
    allowed = {"status", "method", "witnesses", "search_bound", "candidate_count"}
    if set(data) != allowed:
        raise ValueError("positivity report has unexpected fields")
    witnesses = tuple(
        (tuple(int(x) for x in w["vector"]), w["kind"]) for w in data["witnesses"]
    )
    bound = data["search_bound"]
    return ObstructionReport(
        status=data["status"],
        witnesses=witnesses,
        method=data["method"],
        search_bound=None if bound is None else Fraction(bound),
        candidate_count=data["candidate_count"],
    )


def certificate_to_json(cert: RealizationCertificate):
    return {
        "format": CERTIFICATE_FORMAT,
        "surface": cert.surface,
        "projective": cert.projective,
        "salem_polynomial": poly_to_json(cert.salem),
        "power": cert.power,
        "salem_power_polynomial": poly_to_json(cert.salem_power_poly),
        "lattice": lattice_to_json(cert.lattice),
        "isometry": matrix_to_json(cert.isometry),
        "kernel_basis": matrix_to_json(cert.kernel_basis),
        "kernel_generator": matrix_to_json(cert.kernel_generator),
        "positivity": None if cert.positivity is None else _report_to_json(cert.positivity),
        "mod2_identity": cert.mod2_identity,
        "glue": cert.glue_evidence,
    }


_CERT_FIELDS = {
    "format",
    "surface",
    "projective",
    "salem_polynomial",
    "power",
    "salem_power_polynomial",
    "lattice",
    "isometry",
    "kernel_basis",
    "kernel_generator",
    "positivity",
    "mod2_identity",
    "glue",
}


def certificate_from_json(data):
    if not isinstance(data, dict):
        raise ValueError("certificate must be a JSON object")
    unknown = set(data) - _CERT_FIELDS
    if unknown:
        raise ValueError(f"certificate has unknown fields: {sorted(unknown)}")
    missing = _CERT_FIELDS - set(data)
    if missing:
        raise ValueError(f"certificate is missing fields: {sorted(missing)}")
    if data["format"] != CERTIFICATE_FORMAT:
        raise ValueError(f"unsupported certificate format {data['format']!r}")

    def int_matrix(rows):
        return tuple(tuple(int(Fraction(x)) for x in row) for row in matrix_from_json(rows))

    return RealizationCertificate(
        surface=data["surface"],
        projective=bool(data["projective"]),
        salem=poly_from_json(data["salem_polynomial"]),
        power=int(data["power"]),
        salem_power_poly=poly_from_json(data["salem_power_polynomial"]),
        lattice=lattice_from_json(data["lattice"]),
        isometry=int_matrix(data["isometry"]),
        kernel_basis=int_matrix(data["kernel_basis"]),
        kernel_generator=int_matrix(data["kernel_generator"]),
        positivity=None if data["positivity"] is None else _report_from_json(data["positivity"]),
        mod2_identity=data["mod2_identity"],
        glue_evidence=data["glue"],
    )
