"""Real algebraic number fields with certified sign determination.

A field is Q[x]/(m(x)) for an irreducible monic m together with an isolating
interval pinning down one real root. Elements are Fraction-coefficient
polynomials of degree < deg m. Signs and enclosures are decided by interval
evaluation, refining the isolating interval by exact bisection until the
enclosure excludes zero; this terminates for every nonzero element because
m is irreducible.
"""

from fractions import Fraction

from .polynomials import IntPolynomial, refine_interval

# intervals are (lo, hi) Fraction pairs


def _trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _polydiv(f, g):
    f = f[:]
    q = [Fraction(0)] * max(1, len(f) - len(g) + 1)
    while len(f) >= len(g):
        c = f[-1] / g[-1]
        k = len(f) - len(g)
        q[k] += c
        for i, gc in enumerate(g):
            f[k + i] -= c * gc
        _trim(f)
    return _trim(q), f


def _polymul(f, g):
    if not f or not g:
        return []
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _trim(out)


def _polysub(f, g):
    out = [Fraction(0)] * max(len(f), len(g))
    for i, a in enumerate(f):
        out[i] += a
    for i, b in enumerate(g):
        out[i] -= b
    return _trim(out)


def iv_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def iv_sub(a, b):
    return (a[0] - b[1], a[1] - b[0])


def iv_neg(a):
    return (-a[1], -a[0])


def iv_mul(a, b):
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(products), max(products))


def iv_scale(c, a):
    return (c * a[0], c * a[1]) if c >= 0 else (c * a[1], c * a[0])


def iv_contains_zero(a):
    return a[0] <= 0 <= a[1]


def iv_width(a):
    return a[1] - a[0]


class RealAlgebraicField:
    """Q[x]/(min_poly) embedded in R at the root isolated by ``interval``."""

    def __init__(self, min_poly: IntPolynomial, interval):
        if not min_poly.is_monic() or min_poly.degree < 1:
            raise ValueError("field modulus must be monic of degree >= 1")
        self.min_poly = min_poly
        self.degree = min_poly.degree
        self._interval = (Fraction(interval[0]), Fraction(interval[1]))
        self._modulus = [Fraction(c) for c in min_poly.coeffs]

    # --- element constructors ---

    def element(self, coeffs):
        """Element from a scalar or coefficient sequence (reduced mod min_poly)."""
        if isinstance(coeffs, (int, Fraction)):
            vec = [Fraction(coeffs)] + [Fraction(0)] * (self.degree - 1)
            return tuple(vec)
        vec = [Fraction(c) for c in coeffs]
        if len(vec) > self.degree:
            vec = self._reduce(vec)
        vec += [Fraction(0)] * (self.degree - len(vec))
        return tuple(vec[: self.degree])

    def zero(self):
        return self.element(0)

    def one(self):
        return self.element(1)

    def generator(self):
        if self.degree == 1:
            # x is congruent to the rational root
            return self.element(-self._modulus[0])
        return self.element([0, 1])

    # --- arithmetic ---

    def _reduce(self, vec):
        vec = vec[:]
        d = self.degree
        for k in range(len(vec) - 1, d - 1, -1):
            c = vec[k]
            if c:
                for i in range(d + 1):
                    vec[k - d + i] -= c * self._modulus[i]
        del vec[d:]
        return vec

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        out = [Fraction(0)] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        vec = self._reduce(out)
        vec += [Fraction(0)] * (self.degree - len(vec))
        return tuple(vec)

    def scale(self, c, a):
        c = Fraction(c)
        return tuple(c * x for x in a)

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def inv(self, a):
        """Inverse via the extended Euclidean algorithm on polynomials.

        Tracks s with s * a = r (mod min_poly); the loop ends with r a
        nonzero constant because the modulus is irreducible.
        """
        if self.is_zero(a):
            raise ZeroDivisionError("inverting zero field element")
        r0, r1 = self._modulus[:], _trim(list(a))
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while r1:
            q, rem = _polydiv(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _polysub(s0, _polymul(q, s1))
        if len(r0) != 1:
            raise ArithmeticError("element not invertible; modulus not irreducible?")
        c = r0[0]
        return self.element([x / c for x in s0])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one()
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def eval_poly(self, coeff_elements, point):
        """Horner evaluation of a polynomial whose coefficients are field elements."""
        acc = self.zero()
        for c in reversed(coeff_elements):
            acc = self.add(self.mul(acc, point), c)
        return acc

    # --- certified real data ---

    def refine(self, max_width):
        if self._interval[0] != self._interval[1]:
            self._interval = refine_interval(self.min_poly, self._interval, max_width)
        return self._interval

    def enclosure(self, a, max_width=None):
        """Rational interval certified to contain the real value of a."""
        iv = self._eval_interval(a)
        if max_width is None:
            return iv
        width = self._interval[1] - self._interval[0]
        while iv_width(iv) > max_width:
            if width == 0:
                return iv  # exact rational value
            width /= 2
            self.refine(width)
            iv = self._eval_interval(a)
        return iv

    def _eval_interval(self, a):
        x = self._interval
        acc = (Fraction(0), Fraction(0))
        for c in reversed(a):
            acc = iv_add(iv_mul(acc, x), (c, c))
        return acc

    def sign(self, a):
        """Exact sign of the real value of a: -1, 0 or +1."""
        if self.is_zero(a):
            return 0
        iv = self._eval_interval(a)
        width = self._interval[1] - self._interval[0]
        while iv_contains_zero(iv):
            if width == 0:
                v = iv[0]
                return (v > 0) - (v < 0)
            width /= 2
            self.refine(width)
            iv = self._eval_interval(a)
        return 1 if iv[0] > 0 else -1

    def abs_element(self, a):
        return a if self.sign(a) >= 0 else self.neg(a)

    def compare(self, a, b):
        return self.sign(self.sub(a, b))


# --- linear algebra over a field --------------------------------------------


def field_mat_from_rational(field, M):
    return tuple(tuple(field.element(Fraction(x)) for x in row) for row in M)


def field_mat_vec(field, M, v):
    out = []
    for row in M:
        acc = field.zero()
        for a, x in zip(row, v):
            acc = field.add(acc, field.mul(a, x))
        out.append(acc)
    return tuple(out)


def field_kernel(field, M):
    """Basis (rows) of the right kernel of a matrix with field-element entries."""
    m = len(M)
    n = len(M[0]) if m else 0
    rows = [list(row) for row in M]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if not field.is_zero(rows[i][col])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][col])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(m):
            if i != r and not field.is_zero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        v = [field.zero()] * n
        v[j] = field.one()
        for i, pc in enumerate(pivots):
            v[pc] = field.neg(rows[i][j])
        basis.append(tuple(v))
    return tuple(basis)
