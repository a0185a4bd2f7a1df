"""Weyl group elements: parsing, root actions, lengths, Bruhat order.

Elements of classical factors are stored as signed one-line words: the
entry at position i is +-a, meaning x_i maps to +-x_a.  G2 elements are
stored as the 2x2 integer matrix of their action on (a, b) root
coordinates; normal-form words over the generators {1, 2} (short, long)
are recovered from a precomputed table of the 12 elements.
"""

from __future__ import annotations

from .roots import Root, RootSystem

_G2_S1 = (-1, 3, 0, 1)   # row-major 2x2: action of the short-root reflection
_G2_S2 = (1, 0, 1, -1)   # action of the long-root reflection
_G2_ID = (1, 0, 0, 1)


def _g2_mul(m, k):
    return (m[0] * k[0] + m[1] * k[2], m[0] * k[1] + m[1] * k[3],
            m[2] * k[0] + m[3] * k[2], m[2] * k[1] + m[3] * k[3])


def _g2_table():
    """Map each of the 12 matrices to its shortest (lex-least) word."""
    words = {_G2_ID: ""}
    frontier = [_G2_ID]
    gens = {"1": _G2_S1, "2": _G2_S2}
    while frontier:
        nxt = []
        for m in frontier:
            for sym, g in sorted(gens.items()):
                k = _g2_mul(m, g)
                if k not in words:
                    words[k] = words[m] + sym
                    nxt.append(k)
        frontier = nxt
    assert len(words) == 12
    return words


_G2_WORDS = _g2_table()


class WeylParseError(ValueError):
    pass


class WeylElement:
    """Immutable group element of the Weyl group of a RootSystem."""

    __slots__ = ("rs", "data", "_inv_mask", "_hash")

    def __init__(self, rs: RootSystem, data: tuple):
        self.rs = rs
        self.data = data
        self._inv_mask = None
        self._hash = None

    def __eq__(self, other):
        return (isinstance(other, WeylElement)
                and (self.rs is other.rs or self.rs.spec == other.rs.spec)
                and self.data == other.data)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rs.spec, self.data))
        return self._hash

    def __repr__(self):
        return f"WeylElement({format_element(self)!r})"

    # -- action ------------------------------------------------------------

    def act_vector(self, component: int, vec: tuple) -> tuple:
        """Image of a weight vector of one factor under this element."""
        fam = self.rs.factors[component].family
        d = self.data[component]
        if fam == "G2":
            a, b = vec
            return (d[0] * a + d[1] * b, d[2] * a + d[3] * b)
        out = [0] * len(vec)
        for i, c in enumerate(vec):
            if c:
                p = d[i]
                if p > 0:
                    out[p - 1] += c
                else:
                    out[-p - 1] -= c
        return tuple(out)

    def act(self, root: Root):
        """Image root and sign: returns (root', +1) or (root', -1)."""
        img = self.act_vector(root.component, root.vector)
        r = self.rs.root_by_vector(root.component, img)
        if r is not None:
            return r, 1
        neg = tuple(-c for c in img)
        r = self.rs.root_by_vector(root.component, neg)
        if r is None:
            raise AssertionError("Weyl action left the root system")
        return r, -1

    def inversion_mask(self) -> int:
        if self._inv_mask is None:
            m = 0
            for r in self.rs.roots:
                _, sign = self.act(r)
                if sign < 0:
                    m |= 1 << r.id
            self._inv_mask = m
        return self._inv_mask

    def length(self) -> int:
        return self.inversion_mask().bit_count()

    def is_identity(self) -> bool:
        return all(d == _G2_ID if self.rs.factors[c].family == "G2"
                   else d == tuple(range(1, len(d) + 1))
                   for c, d in enumerate(self.data))


def identity(rs: RootSystem) -> WeylElement:
    data = []
    for f in rs.factors:
        if f.family == "G2":
            data.append(_G2_ID)
        else:
            data.append(tuple(range(1, f.dim + 1)))
    return WeylElement(rs, tuple(data))


def inversion_set(w: WeylElement):
    """The positive roots sent negative by w; size equals the length."""
    m = w.inversion_mask()
    return frozenset(w.rs.roots[i] for i in w.rs.mask_ids(m))


def compose(u: WeylElement, v: WeylElement) -> WeylElement:
    """Product uv, acting as 'apply v, then u'."""
    assert u.rs is v.rs
    data = []
    for c, f in enumerate(u.rs.factors):
        du, dv = u.data[c], v.data[c]
        if f.family == "G2":
            data.append(_g2_mul(du, dv))
        else:
            out = []
            for i in range(len(dv)):
                p = dv[i]
                q = du[abs(p) - 1]
                out.append(q if p > 0 else -q)
            data.append(tuple(out))
    return WeylElement(u.rs, tuple(data))


def inverse(u: WeylElement) -> WeylElement:
    data = []
    for c, f in enumerate(u.rs.factors):
        d = u.data[c]
        if f.family == "G2":
            det = d[0] * d[3] - d[1] * d[2]
            assert det in (1, -1)
            inv = (d[3] * det, -d[1] * det, -d[2] * det, d[0] * det)
            data.append(inv)
        else:
            out = [0] * len(d)
            for i, p in enumerate(d):
                if p > 0:
                    out[p - 1] = i + 1
                else:
                    out[-p - 1] = -(i + 1)
            data.append(tuple(out))
    return WeylElement(u.rs, tuple(data))


def long_element(rs: RootSystem) -> WeylElement:
    data = []
    for f in rs.factors:
        if f.family == "G2":
            data.append((-1, 0, 0, -1))
        elif f.family == "A":
            n = f.dim
            data.append(tuple(range(n, 0, -1)))
        elif f.family in ("B", "C"):
            data.append(tuple(-(i + 1) for i in range(f.dim)))
        else:  # D: negate an even number of coordinates
            n = f.dim
            if n % 2 == 0:
                data.append(tuple(-(i + 1) for i in range(n)))
            else:
                data.append(tuple([1] + [-(i + 1) for i in range(1, n)]))
    return WeylElement(rs, tuple(data))


def simple_reflection(rs: RootSystem, component: int, i: int) -> WeylElement:
    return reflection(rs, rs.simple_root(component, i))


def reflection(rs: RootSystem, root: Root) -> WeylElement:
    """The reflection in a positive root, as a group element."""
    data = []
    for c, f in enumerate(rs.factors):
        if c != root.component:
            data.append(identity(rs).data[c])
            continue
        if f.family == "G2":
            data.append(_g2_reflection(f, root.vector))
            continue
        n = f.dim
        d = list(range(1, n + 1))
        nz = [(k, v) for k, v in enumerate(root.vector) if v]
        if len(nz) == 1:
            k = nz[0][0]
            d[k] = -(k + 1)
        else:
            (a, ca), (b, _) = nz
            if ca == -1:
                d[a], d[b] = b + 1, a + 1
            else:
                d[a], d[b] = -(b + 1), -(a + 1)
        data.append(tuple(d))
    return WeylElement(rs, tuple(data))


def _g2_reflection(factor, vec):
    """Reflection matrix on (a, b) coordinates for a G2 root."""
    from fractions import Fraction
    v3 = factor.to_inner_space(vec)
    n2 = sum(c * c for c in v3)
    basis = ((1, 0), (0, 1))
    cols = []
    for e in basis:
        e3 = factor.to_inner_space(e)
        dot = sum(a * b for a, b in zip(e3, v3))
        coef = Fraction(2 * dot, n2)
        img3 = tuple(a - coef * b for a, b in zip(e3, v3))
        cols.append(_g2_from_inner(img3))
    # column images -> row-major matrix acting on column (a, b)
    return (int(cols[0][0]), int(cols[1][0]), int(cols[0][1]), int(cols[1][1]))


def _g2_from_inner(v3):
    """Solve a*short + b*long = v3 in the 3-coordinate model."""
    from fractions import Fraction
    # short=(1,-1,0), long=(-1,2,-1): solve first two coordinates.
    #  a - b = v0 ; -a + 2b = v1
    b = Fraction(v3[0] + v3[1])
    a = Fraction(v3[0]) + b
    assert -a + 2 * b == v3[1] and -b == v3[2]
    assert a.denominator == 1 and b.denominator == 1
    return (a, b)


def parse_element(rs: RootSystem, literal: str) -> WeylElement:
    """Parse a product element literal; factors separated by ';'.

    Type A factors take a one-line permutation (digit string for rank<=8,
    or comma-separated); B/C/D take comma-separated signed integers, a
    minus sign standing for an overbar; G2 takes a word over {1,2}.
    """
    parts = literal.split(";")
    if len(parts) != len(rs.factors):
        raise WeylParseError(
            f"expected {len(rs.factors)} factor literals, got {len(parts)}")
    data = []
    for c, (f, part) in enumerate(zip(rs.factors, parts)):
        part = part.strip()
        if f.family == "G2":
            if not all(ch in "12" for ch in part):
                raise WeylParseError(f"bad G2 word {part!r}")
            m = _G2_ID
            for ch in part:
                m = _g2_mul(m, _G2_S1 if ch == "1" else _G2_S2)
            data.append(m)
            continue
        n = f.dim
        if "," in part or "-" in part:
            try:
                vals = [int(tok) for tok in part.split(",")]
            except ValueError:
                raise WeylParseError(f"bad entry in {part!r}") from None
        else:
            vals = [int(ch) for ch in part]
        if len(vals) != n:
            raise WeylParseError(f"{part!r}: expected {n} entries")
        if sorted(abs(v) for v in vals) != list(range(1, n + 1)):
            raise WeylParseError(f"{part!r} is not a signed permutation of 1..{n}")
        if f.family == "A" and any(v < 0 for v in vals):
            raise WeylParseError("type A elements cannot carry bars")
        if f.family == "D" and sum(1 for v in vals if v < 0) % 2:
            raise WeylParseError(f"{part!r} violates the type D parity")
        data.append(tuple(vals))
    return WeylElement(rs, tuple(data))


def format_element(w: WeylElement) -> str:
    """Canonical literal reproducing the parse form."""
    parts = []
    for c, f in enumerate(w.rs.factors):
        d = w.data[c]
        if f.family == "G2":
            parts.append(_G2_WORDS[d])
        elif f.family == "A" and f.dim <= 9:
            parts.append("".join(str(v) for v in d))
        else:
            parts.append(",".join(str(v) for v in d))
    return ";".join(parts)


def all_elements(rs: RootSystem, max_size: int = 2_000_000):
    """Enumerate the Weyl group by BFS over right multiplication."""
    total = 1
    for f in rs.factors:
        total *= f.weyl_order()
    if total > max_size:
        raise ResourceWarning(f"group of order {total} exceeds {max_size}")
    simples = [simple_reflection(rs, c, i) for c, i in rs.simple_indices()]
    e = identity(rs)
    seen = {e.data: e}
    frontier = [e]
    while frontier:
        nxt = []
        for w in frontier:
            for s in simples:
                ws = compose(w, s)
                if ws.data not in seen:
                    seen[ws.data] = ws
                    nxt.append(ws)
        frontier = nxt
    assert len(seen) == total
    return list(seen.values())


def elements_of_length(rs: RootSystem, length: int):
    return [w for w in all_elements(rs) if w.length() == length]


def _descent(w: WeylElement):
    """Some (component, i) with l(w s_i) < l(w), or None at the identity."""
    for c, i in w.rs.simple_indices():
        root = w.rs.simple_root(c, i)
        _, sign = w.act(root)
        if sign < 0:
            return (c, i)
    return None


def bruhat_leq(u: WeylElement, v: WeylElement) -> bool:
    """Bruhat order via the standard descent recursion."""
    assert u.rs is v.rs
    rs = u.rs
    cache = getattr(rs, "_bruhat_cache", None)
    if cache is None:
        cache = {}
        rs._bruhat_cache = cache
    key = (u.data, v.data)
    if key in cache:
        return cache[key]
    stack_result = _bruhat_rec(u, v, cache)
    return stack_result


def _bruhat_rec(u, v, cache):
    key = (u.data, v.data)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if u.length() > v.length():
        cache[key] = False
        return False
    d = _descent(v)
    if d is None:
        res = u.is_identity()
        cache[key] = res
        return res
    s = simple_reflection(v.rs, *d)
    vs = compose(v, s)
    us = compose(u, s)
    if us.length() < u.length():
        res = _bruhat_rec(us, vs, cache)
    else:
        res = _bruhat_rec(u, vs, cache)
    cache[key] = res
    return res


def reduced_word(w: WeylElement):
    """A fixed reduced word, as (component, simple index) pairs.

    Chosen by repeatedly removing the first descent, so the word is
    deterministic for a given element.
    """
    word = []
    cur = w
    while True:
        d = _descent(cur)
        if d is None:
            break
        word.append(d)
        cur = compose(cur, simple_reflection(w.rs, *d))
    word.reverse()
    return word
