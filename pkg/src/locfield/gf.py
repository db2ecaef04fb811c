"""Finite fields F_q, q = p^r, with integer-coded elements.

An element sum(c_i X^i) of F_p[X]/(modulus) is coded as the integer
sum(c_i p^i).  Codes are what the series / lattice kernels pass around;
arithmetic is table driven (full q x q tables for small q, log/exp above
that), so a field element costs one machine int.

The built-in modulus table follows the standard Conway polynomials for the
small fields this library meets in practice; any (p, r) outside the table
falls back to the lexicographically smallest irreducible polynomial, and a
caller can override the modulus explicitly.
"""

from __future__ import annotations

import random

from .errors import InputError

# Conway polynomials, stored as the tuple of non-leading coefficients
# (c_0, ..., c_{r-1}) of x^r + c_{r-1} x^{r-1} + ... + c_0 over F_p.
_CONWAY = {
    (2, 1): (1,),
    (2, 2): (1, 1),
    (2, 3): (1, 1, 0),
    (2, 4): (1, 1, 0, 0),
    (2, 5): (1, 0, 1, 0, 0),
    (2, 6): (1, 1, 0, 1, 1, 0),
    (2, 7): (1, 1, 0, 0, 0, 0, 0),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0),
    (3, 1): (1,),
    (3, 2): (2, 2),
    (3, 3): (1, 2, 0),
    (3, 4): (2, 0, 0, 2),
    (3, 5): (1, 2, 0, 0, 0),
    (3, 6): (2, 2, 1, 0, 2, 0),
    (5, 1): (3,),
    (5, 2): (2, 4),
    (5, 3): (3, 3, 0),
    (5, 4): (2, 4, 4, 0),
    (7, 1): (4,),
    (7, 2): (3, 6),
    (7, 3): (4, 0, 6),
    (11, 1): (9,),
    (13, 1): (11,),
}

_SMALL_TABLE_LIMIT = 256


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_mul_mod_p(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _poly_mod(a, modulus, p):
    # modulus: non-leading coefficients of a monic polynomial of degree r
    r = len(modulus)
    a = list(a)
    for i in range(len(a) - 1, r - 1, -1):
        c = a[i]
        if c:
            a[i] = 0
            for j in range(r):
                a[i - r + j] = (a[i - r + j] - c * modulus[j]) % p
    while len(a) > r:
        a.pop()
    while len(a) < r:
        a.append(0)
    return a


def _is_irreducible_mod_p(modulus, p):
    """Irreducibility of the monic polynomial with non-leading coeffs `modulus`.

    Tests x^(p^r) == x and gcd-freeness x^(p^d) - x for proper divisors d,
    all computed by repeated squaring modulo the candidate.
    """
    r = len(modulus)
    if r == 1:
        return True

    def xq_pow(e_levels):
        # x^(p^e) mod modulus, via e successive p-th powers
        cur = [0, 1] + [0] * (r - 2) if r >= 2 else [0]
        cur = _poly_mod(cur, modulus, p)
        for _ in range(e_levels):
            nxt = [0] * r
            acc = [1] + [0] * (r - 1)
            # cur^p by exponentiation
            base = cur
            e = p
            while e:
                if e & 1:
                    acc = _poly_mod(_poly_mul_mod_p(acc, base, p), modulus, p)
                e >>= 1
                if e:
                    base = _poly_mod(_poly_mul_mod_p(base, base, p), modulus, p)
            cur = acc
            del nxt
        return cur

    x_pr = xq_pow(r)
    if x_pr != _poly_mod([0, 1], modulus, p):
        return False
    for d in range(1, r):
        if r % d == 0:
            x_pd = xq_pow(d)
            # gcd(f, x^(p^d) - x) must be 1; since f has no root structure check
            # equivalently x^(p^d) != x for proper d when f irreducible
            if x_pd == _poly_mod([0, 1], modulus, p):
                return False
    return True


def _smallest_irreducible(p, r):
    # lexicographic search over (c_{r-1}, ..., c_0), constant term nonzero
    for code in range(p ** r):
        coeffs = []
        c = code
        for _ in range(r):
            coeffs.append(c % p)
            c //= p
        if coeffs[0] == 0:
            continue
        if _is_irreducible_mod_p(tuple(coeffs), p):
            return tuple(coeffs)
    raise InputError(f"no irreducible polynomial found for p={p}, r={r}")


class FiniteField:
    """F_q with q = p^r; elements are integer codes in [0, q)."""

    __slots__ = (
        "p", "r", "q", "modulus", "_mul_table", "_add_table", "_neg_table",
        "_inv_table", "_log", "_exp", "gen", "_coords_cache", "_frob_table",
    )

    def __init__(self, p, r, modulus):
        self.p = p
        self.r = r
        self.q = p ** r
        self.modulus = modulus
        self._coords_cache = None
        self._build_tables()

    # -- construction / coordinates ------------------------------------

    def coords(self, code):
        """Base-p digit vector (c_0, ..., c_{r-1}) of a code."""
        out = []
        for _ in range(self.r):
            out.append(code % self.p)
            code //= self.p
        return tuple(out)

    def from_coords(self, coords):
        if len(coords) > self.r:
            raise InputError("coordinate vector longer than field degree")
        code = 0
        for c in reversed(coords):
            code = code * self.p + (c % self.p)
        return code

    def from_int(self, n):
        """The image of an ordinary integer (prime-subfield element)."""
        return n % self.p

    # -- tables ---------------------------------------------------------

    def _build_tables(self):
        p, r, q = self.p, self.r, self.q
        all_coords = [self.coords(c) for c in range(q)]
        self._coords_cache = all_coords

        neg = [self.from_coords(tuple((-x) % p for x in all_coords[c])) for c in range(q)]
        self._neg_table = tuple(neg)

        def mul_codes(a, b):
            if r == 1:
                return (a * b) % p
            prod = _poly_mul_mod_p(all_coords[a], all_coords[b], p)
            return self.from_coords(tuple(_poly_mod(prod, self.modulus, p)))

        if q <= _SMALL_TABLE_LIMIT:
            add = []
            mul = []
            for a in range(q):
                ca = all_coords[a]
                row_a = [self.from_coords(tuple((x + y) % p for x, y in zip(ca, all_coords[b])))
                         for b in range(q)]
                add.extend(row_a)
                mul.extend(mul_codes(a, b) for b in range(q))
            self._add_table = tuple(add)
            self._mul_table = tuple(mul)
        else:
            self._add_table = None
            self._mul_table = None

        # multiplicative generator -> log/exp tables (always built; q is small here)
        gen = None
        order = q - 1
        factors = []
        m = order
        d = 2
        while d * d <= m:
            if m % d == 0:
                factors.append(d)
                while m % d == 0:
                    m //= d
            d += 1
        if m > 1:
            factors.append(m)
        for cand in range(1, q):
            ok = True
            for f in factors:
                if self._pow_raw(cand, order // f, mul_codes) == 1:
                    ok = False
                    break
            if ok:
                gen = cand
                break
        self.gen = gen

        exp = [1] * order
        for i in range(1, order):
            exp[i] = mul_codes(exp[i - 1], gen)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = tuple(exp)
        self._log = tuple(log)

        inv = [0] * q
        for a in range(1, q):
            inv[a] = exp[(order - log[a]) % order]
        self._inv_table = tuple(inv)

        # Frobenius x -> x^p as a table
        self._frob_table = tuple(self.pow(a, p) if a else 0 for a in range(q))

    @staticmethod
    def _pow_raw(a, e, mul_codes):
        acc = 1
        base = a
        while e:
            if e & 1:
                acc = mul_codes(acc, base)
            e >>= 1
            base = mul_codes(base, base)
        return acc

    # -- arithmetic on codes ---------------------------------------------

    def add(self, a, b):
        t = self._add_table
        if t is not None:
            return t[a * self.q + b]
        p = self.p
        ca, cb = self._coords_cache[a], self._coords_cache[b]
        return self.from_coords(tuple((x + y) % p for x, y in zip(ca, cb)))

    def neg(self, a):
        return self._neg_table[a]

    def sub(self, a, b):
        return self.add(a, self._neg_table[b])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        t = self._mul_table
        if t is not None:
            return t[a * self.q + b]
        order = self.q - 1
        return self._exp[(self._log[a] + self._log[b]) % order]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        return self._inv_table[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        order = self.q - 1
        return self._exp[(self._log[a] * e) % order]

    def frobenius(self, a):
        return self._frob_table[a]

    def pth_root(self, a):
        """Inverse of Frobenius (exists and is unique: the field is perfect)."""
        return self.pow(a, self.p ** (self.r - 1)) if a else 0

    def element_order_degree(self, a):
        """Degree over F_p of the subfield generated by a."""
        for d in range(1, self.r + 1):
            if self.r % d == 0 and self.pow(a, self.p ** d) == a:
                return d
        return self.r

    def __repr__(self):
        return f"GF({self.p}^{self.r})" if self.r > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return (isinstance(other, FiniteField)
                and (self.p, self.r, self.modulus) == (other.p, other.r, other.modulus))

    def __hash__(self):
        return hash((self.p, self.r, self.modulus))


_FIELD_CACHE = {}


def GF(p, r=1, modulus=None):
    """Field constructor with caching; `modulus` overrides the built-in table."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if r < 1:
        raise InputError("field degree must be >= 1")
    if modulus is None:
        if r == 1:
            modulus = (0,)
        elif (p, r) in _CONWAY:
            modulus = _CONWAY[(p, r)]
        else:
            modulus = _smallest_irreducible(p, r)
    else:
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != r:
            raise InputError("modulus must list the r non-leading coefficients")
        if r > 1 and not _is_irreducible_mod_p(modulus, p):
            raise InputError("modulus is reducible")
    key = (p, r, modulus)
    field = _FIELD_CACHE.get(key)
    if field is None:
        field = FiniteField(p, r, modulus)
        _FIELD_CACHE[key] = field
    return field


def GF_of_order(q, modulus=None):
    """GF(p, r) for q = p^r (q a prime power)."""
    for p in range(2, q + 1):
        if is_prime(p):
            r = 0
            m = q
            while m % p == 0:
                m //= p
                r += 1
            if m == 1 and r >= 1:
                return GF(p, r, modulus)
            if q % p == 0:
                break
    raise InputError(f"{q} is not a prime power")


_EMBED_CACHE = {}


def embedding(sub, sup):
    """Code table for the canonical embedding F_{p^a} -> F_{p^b}, a | b.

    The generator of `sub` is sent to the smallest-code root of `sub.modulus`
    in `sup`; the choice is deterministic, so repeated calls agree.
    """
    key = (sub, sup)
    table = _EMBED_CACHE.get(key)
    if table is not None:
        return table
    if sub.p != sup.p or sup.r % sub.r != 0:
        raise InputError("no embedding: degrees incompatible")
    if sub.r == 1:
        table = tuple(range(sub.p))
        _EMBED_CACHE[key] = table
        return table
    root = None
    # norm-compatible candidate first (exact for Conway-compatible moduli)
    cand = sup.pow(sup.gen, (sup.q - 1) // (sub.q - 1))
    for attempt in ([cand] if cand else []):
        if _eval_subpoly(sub, sup, attempt) == 0:
            root = attempt
            break
    if root is None:
        for a in range(sup.q):
            if _eval_subpoly(sub, sup, a) == 0:
                root = a
                break
    if root is None:
        raise InputError("embedding root not found (corrupt modulus?)")
    # power basis images
    powers = [1]
    for _ in range(sub.r - 1):
        powers.append(sup.mul(powers[-1], root))
    table = []
    for code in range(sub.q):
        coords = sub.coords(code)
        acc = 0
        for c, w in zip(coords, powers):
            if c:
                acc = sup.add(acc, sup.mul(sup.from_int(c), w))
        table.append(acc)
    table = tuple(table)
    _EMBED_CACHE[key] = table
    return table


_DECOMP_CACHE = {}


def kappa_decompose(sub, sup):
    """Decomposition table over the embedding sub -> sup.

    Returns a function code' -> tuple of f = sup.r/sub.r sub-codes c_j with
    code' = sum emb(c_j) * X^j, X the generator class of sup.
    """
    key = (sub, sup)
    fn = _DECOMP_CACHE.get(key)
    if fn is not None:
        return fn
    emb = embedding(sub, sup)
    p = sub.p
    f = sup.r // sub.r
    dim = sup.r
    # columns indexed by (j, t): emb(sub basis t) * X^j, as F_p coordinate vectors
    cols = []
    xpow = 1
    xgen = sup.from_coords(tuple([0, 1] + [0] * (sup.r - 2))) if sup.r > 1 else 1
    for j in range(f):
        for t in range(sub.r):
            base_code = sub.from_coords(tuple(1 if i == t else 0 for i in range(sub.r)))
            cols.append(sup.coords(sup.mul(emb[base_code], xpow)))
        xpow = sup.mul(xpow, xgen)
    # invert the dim x dim matrix over F_p
    mat = [[cols[c][rw] for c in range(dim)] for rw in range(dim)]
    inv = _invert_mod_p(mat, p)

    def decompose(code):
        vec = sup.coords(code)
        sol = [sum(inv[i][k] * vec[k] for k in range(dim)) % p for i in range(dim)]
        return tuple(sub.from_coords(tuple(sol[j * sub.r + t] for t in range(sub.r)))
                     for j in range(f))

    _DECOMP_CACHE[key] = decompose
    return decompose


def _invert_mod_p(mat, p):
    n = len(mat)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if aug[i][col] % p:
                piv = i
                break
        if piv is None:
            raise InputError("singular decomposition matrix (corrupt embedding)")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv_p = pow(aug[col][col], -1, p)
        aug[col] = [(x * inv_p) % p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] % p:
                c = aug[i][col]
                aug[i] = [(x - c * y) % p for x, y in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


def _eval_subpoly(sub, sup, x):
    """Evaluate sub.modulus (monic, with prime-field coefficients) at x in sup."""
    acc = 1  # leading coefficient
    for c in reversed(sub.modulus):
        acc = sup.add(sup.mul(acc, x), sup.from_int(c))
    return acc


# -- dense polynomials over F_q (coefficient code tuples, low degree first) --

def pol_trim(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return tuple(a[:i])


def pol_add(field, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append(field.add(x, y))
    return pol_trim(out)


def pol_neg(field, a):
    return tuple(field.neg(x) for x in a)


def pol_mul(field, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = field.add(out[i + j], field.mul(ai, bj))
    return pol_trim(out)


def pol_divmod(field, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    inv_lb = field.inv(lb)
    q = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and pol_trim(a):
        da = len(pol_trim(a)) - 1
        if da < db:
            break
        c = field.mul(a[da], inv_lb)
        q[da - db] = c
        for i in range(db + 1):
            a[da - db + i] = field.sub(a[da - db + i], field.mul(c, b[i]))
    return pol_trim(q), pol_trim(a)


def pol_ext_gcd(field, a, b):
    """(g, s, t) with s*a + t*b = g, g monic (or zero)."""
    r0, r1 = pol_trim(a), pol_trim(b)
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = pol_divmod(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, pol_add(field, s0, pol_neg(field, pol_mul(field, q, s1)))
        t0, t1 = t1, pol_add(field, t0, pol_neg(field, pol_mul(field, q, t1)))
    if r0:
        c = field.inv(r0[-1])
        r0 = tuple(field.mul(x, c) for x in r0)
        s0 = tuple(field.mul(x, c) for x in s0)
        t0 = tuple(field.mul(x, c) for x in t0)
    return r0, s0, t0


def pol_gcd(field, a, b):
    a, b = pol_trim(a), pol_trim(b)
    while b:
        _, a = pol_divmod(field, a, b)
        a, b = b, a
    if a:
        c = field.inv(a[-1])
        a = tuple(field.mul(x, c) for x in a)
    return a


def pol_pow_mod(field, a, e, m):
    acc = (1,)
    base = pol_divmod(field, a, m)[1]
    while e:
        if e & 1:
            acc = pol_divmod(field, pol_mul(field, acc, base), m)[1]
        e >>= 1
        if e:
            base = pol_divmod(field, pol_mul(field, base, base), m)[1]
    return acc


def pol_eval(field, a, x):
    acc = 0
    for c in reversed(a):
        acc = field.add(field.mul(acc, x), c)
    return acc


def pol_derivative(field, a):
    out = []
    for i in range(1, len(a)):
        out.append(field.mul(a[i], field.from_int(i)))
    return pol_trim(out)


def pol_monic(field, a):
    if not a:
        return a
    c = field.inv(a[-1])
    return tuple(field.mul(x, c) for x in a)


def _pol_pth_root(field, a):
    """p-th root of a polynomial in x^p (char p; coefficient roots exist)."""
    p = field.p
    out = []
    for i in range(0, len(a), p):
        out.append(field.pth_root(a[i]))
    return pol_trim(out)


def pol_squarefree_decomposition(field, a):
    """[(g_i, i)] with a = lc * prod g_i^i, g_i squarefree monic, pairwise coprime.

    Handles the char-p collapse a' = 0 by recursing on the p-th root.
    """
    a = pol_monic(field, a)
    if len(a) <= 1:
        return []
    result = {}

    def put(poly, mult):
        if mult in result:
            result[mult] = pol_mul(field, result[mult], poly)
        else:
            result[mult] = poly

    def rec(f, mult):
        if len(f) <= 1:
            return
        d = pol_derivative(field, f)
        if not d:
            rec(_pol_pth_root(field, f), mult * field.p)
            return
        g = pol_gcd(field, f, d)
        w = pol_divmod(field, f, g)[0]
        i = 1
        while len(w) > 1:
            y = pol_gcd(field, w, g)
            z = pol_divmod(field, w, y)[0]
            if len(z) > 1:
                put(z, mult * i)
            g = pol_divmod(field, g, y)[0]
            w = y
            i += 1
        if len(g) > 1:
            rec(g, mult)

    rec(a, 1)
    return sorted((pol_monic(field, g), m) for m, g in result.items())


_CZ_RNG = random.Random(0x5eed)


def pol_factor(field, a):
    """Monic irreducible factorization [(g, multiplicity)] of a over F_q.

    Distinct-degree then Cantor-Zassenhaus equal-degree splitting with a
    module-seeded RNG, so output order is deterministic.
    """
    a = pol_trim(a)
    if len(a) <= 1:
        return []
    factors = {}
    for g, mult in pol_squarefree_decomposition(field, a):
        for h in _factor_squarefree(field, g):
            factors[h] = factors.get(h, 0) + mult
    return sorted(factors.items())


def _factor_squarefree(field, f):
    q = field.q
    out = []
    x = (0, 1)
    h = x
    v = f
    d = 0
    while len(v) - 1 >= 2 * (d + 1):
        d += 1
        h = pol_pow_mod(field, h, q, v)
        g = pol_gcd(field, pol_add(field, h, pol_neg(field, x)), v)
        if len(g) > 1:
            out.extend(_equal_degree_split(field, g, d))
            v = pol_divmod(field, v, g)[0]
            h = pol_divmod(field, h, v)[1]
    if len(v) > 1:
        out.append(pol_monic(field, v))
    return out


def _equal_degree_split(field, f, d):
    n = len(f) - 1
    if n == d:
        return [pol_monic(field, f)]
    q = field.q
    while True:
        r = pol_trim(tuple(_CZ_RNG.randrange(q) for _ in range(n)))
        if len(r) < 2:
            continue
        if q % 2 == 1:
            e = (q ** d - 1) // 2
            g = pol_pow_mod(field, r, e, f)
            g = pol_add(field, g, pol_neg(field, (1,)))
        else:
            # trace map for char 2
            g = r
            acc = r
            for _ in range(d * field.r - 1):
                acc = pol_pow_mod(field, acc, 2, f)
                g = pol_add(field, g, acc)
        g = pol_gcd(field, g, f)
        if 0 < len(g) - 1 < n:
            return (_equal_degree_split(field, g, d)
                    + _equal_degree_split(field, pol_divmod(field, f, g)[0], d))


def pol_roots(field, a):
    """Roots in F_q of a polynomial, by direct scan (fields here are tiny)."""
    return [x for x in range(field.q) if pol_eval(field, a, x) == 0]
