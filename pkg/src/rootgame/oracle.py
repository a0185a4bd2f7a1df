"""Exact Schubert calculus oracle: intersection numbers and branching.

Two independent computations back every intersection number: a ring
method that multiplies Schubert-basis vectors through precomputed
divisor (Chevalley) operators, and a polynomial method that represents
classes by exact polynomials and extracts coefficients with divided
differences.  Everything is over Fraction; floats never appear, since a
single rounding could flip a vanishing answer.

Polynomial variables are the ambient weight coordinates of each factor
(the G2 factor uses the integer 3-coordinate plane model), so classical
reflections act by signed variable permutations.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .embedding import Embedding
from .roots import RootSystem
from .weyl import (WeylElement, all_elements, compose, identity,
                   long_element, reduced_word, reflection, simple_reflection)


class OracleConsistencyError(RuntimeError):
    """The two oracle methods disagreed; aborting is the only safe move."""


class GroupTooLargeError(ValueError):
    pass


_W_LIMIT = 50_000

# ---------------------------------------------------------------------------
# Exact sparse polynomials

Monomial = Tuple[int, ...]


class ExactPolynomial:
    """Sparse exact-rational polynomial; no zero coefficient is stored."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[dict] = None):
        self.n = n
        self.terms = terms or {}

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def const(cls, n, c):
        c = Fraction(c)
        return cls(n, {(0,) * n: c} if c else {})

    @classmethod
    def variable(cls, n, i, c=1):
        mono = tuple(1 if j == i else 0 for j in range(n))
        return cls(n, {mono: Fraction(c)})

    @classmethod
    def linear(cls, n, coeffs):
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                mono = tuple(1 if j == i else 0 for j in range(n))
                terms[mono] = Fraction(c)
        return cls(n, terms)

    def is_zero(self):
        return not self.terms

    def constant_term(self):
        return self.terms.get((0,) * self.n, Fraction(0))

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return ExactPolynomial(self.n, out)

    def __sub__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) - c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return ExactPolynomial(self.n, out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ExactPolynomial(self.n)
            return ExactPolynomial(
                self.n, {m: c * other for m, c in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]
        return ExactPolynomial(self.n, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ExactPolynomial) and self.terms == other.terms

    def substitute_signed(self, mapping, n_out=None):
        """Fast substitution when every variable maps to +-variable or 0.

        ``mapping[i]`` is (j, sign) or None.
        """
        n_out = self.n if n_out is None else n_out
        out = {}
        for m, c in self.terms.items():
            mono = [0] * n_out
            coef = c
            dead = False
            for i, e in enumerate(m):
                if not e:
                    continue
                tgt = mapping[i]
                if tgt is None:
                    dead = True
                    break
                j, sign = tgt
                mono[j] += e
                if sign < 0 and e % 2:
                    coef = -coef
            if dead:
                continue
            key = tuple(mono)
            v = out.get(key, 0) + coef
            if v:
                out[key] = v
            else:
                del out[key]
        return ExactPolynomial(n_out, out)

    def substitute_linear(self, forms, n_out=None):
        """General substitution: variable i -> ExactPolynomial forms[i]."""
        n_out = self.n if n_out is None else n_out
        pow_cache: Dict[Tuple[int, int], ExactPolynomial] = {}

        def var_pow(i, e):
            key = (i, e)
            hit = pow_cache.get(key)
            if hit is not None:
                return hit
            if e == 1:
                res = forms[i]
            else:
                res = var_pow(i, e - 1) * forms[i]
            pow_cache[key] = res
            return res

        total = ExactPolynomial(n_out)
        for m, c in self.terms.items():
            part = ExactPolynomial.const(n_out, c)
            for i, e in enumerate(m):
                if e:
                    part = part * var_pow(i, e)
                    if part.is_zero():
                        break
            total = total + part
        return total

    def divide_linear(self, form):
        """Exact division by a linear form; raises if not divisible."""
        lead_var = None
        lead_coef = None
        for m, c in form.terms.items():
            i = next(k for k, e in enumerate(m) if e)
            if lead_var is None or i < lead_var:
                lead_var = i
                lead_coef = c
        if lead_var is None:
            raise ZeroDivisionError("division by the zero form")
        rem = dict(self.terms)
        out = {}

        def order_key(m):
            return (m[lead_var], m)

        while rem:
            m = max(rem, key=order_key)
            c = rem[m]
            if m[lead_var] == 0:
                raise ArithmeticError("polynomial not divisible by form")
            qm = tuple(e - 1 if i == lead_var else e for i, e in enumerate(m))
            qc = c / lead_coef
            out[qm] = out.get(qm, 0) + qc
            for fm, fc in form.terms.items():
                t = tuple(a + b for a, b in zip(qm, fm))
                v = rem.get(t, 0) - qc * fc
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return ExactPolynomial(self.n, {m: c for m, c in out.items() if c})

    def __repr__(self):
        items = sorted(self.terms.items())[:6]
        body = " + ".join(f"{c}*x^{m}" for m, c in items)
        more = "..." if len(self.terms) > 6 else ""
        return f"Poly({body}{more})"


class SchubertVector:
    """Schubert-basis vector, supported on elements of one length."""

    def __init__(self, rs: RootSystem, coeffs: dict, degree: int):
        self.rs = rs
        self.coeffs = {w: c for w, c in coeffs.items() if c}
        self.degree = degree
        for w in self.coeffs:
            assert w.length() == degree, "support off the stated degree"

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, w):
        return self.coeffs.get(w, 0)

    def items(self):
        return self.coeffs.items()

    def to_json(self):
        from .weyl import format_element
        return {format_element(w): int(c) for w, c in sorted(
            self.coeffs.items(), key=lambda kv: kv[0].data)}


# ---------------------------------------------------------------------------
# Borel-presentation (polynomial) model


class BorelModel:
    """Polynomial representatives and divided differences for one system."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.offsets = []
        acc = 0
        for f in rs.factors:
            self.offsets.append(acc)
            acc += f.dim
        self.n = acc
        self._simple_forms = {}
        self._reflection_subs = {}
        self._rep_cache = {}
        self._w0 = long_element(rs)

    def root_form(self, root) -> ExactPolynomial:
        f = self.rs.factors[root.component]
        vec = f.to_inner_space(root.vector)
        off = self.offsets[root.component]
        coeffs = [0] * self.n
        for i, c in enumerate(vec):
            coeffs[off + i] = c
        return ExactPolynomial.linear(self.n, coeffs)

    def _reflection_sub(self, c: int, i: int):
        key = (c, i)
        hit = self._reflection_subs.get(key)
        if hit is not None:
            return hit
        f = self.rs.factors[c]
        off = self.offsets[c]
        if f.family != "G2":
            s = reflection(self.rs, self.rs.simple_root(c, i))
            d = s.data[c]
            mapping = [(j, 1) for j in range(self.n)]
            for k, p in enumerate(d):
                mapping[off + k] = (off + abs(p) - 1, 1 if p > 0 else -1)
            sub = ("signed", mapping)
        elif i == 0:
            mapping = [(j, 1) for j in range(self.n)]
            mapping[off], mapping[off + 1] = (off + 1, 1), (off, 1)
            sub = ("signed", mapping)
        else:
            forms = [ExactPolynomial.variable(self.n, j) for j in range(self.n)]
            u = (-1, 2, -1)
            for k in range(3):
                coeffs = [0] * self.n
                for l in range(3):
                    coeffs[off + l] = Fraction(-2 * u[k] * u[l], 6)
                coeffs[off + k] += 1
                forms[off + k] = ExactPolynomial.linear(self.n, coeffs)
            sub = ("linear", forms)
        self._reflection_subs[key] = sub
        return sub

    def act_simple(self, c: int, i: int, f: ExactPolynomial) -> ExactPolynomial:
        kind, data = self._reflection_sub(c, i)
        if kind == "signed":
            return f.substitute_signed(data)
        return f.substitute_linear(data)

    def divided_difference(self, c: int, i: int,
                           f: ExactPolynomial) -> ExactPolynomial:
        num = f - self.act_simple(c, i, f)
        if num.is_zero():
            return num
        alpha = self.root_form(self.rs.simple_root(c, i))
        return num.divide_linear(alpha)

    def dd_word(self, word, f: ExactPolynomial) -> ExactPolynomial:
        """Compose divided differences along a word, rightmost first."""
        for c, i in reversed(word):
            if f.is_zero():
                break
            f = self.divided_difference(c, i, f)
        return f

    def dd_element(self, w: WeylElement, f: ExactPolynomial) -> ExactPolynomial:
        return self.dd_word(reduced_word(w), f)

    def top_representative(self) -> ExactPolynomial:
        """Representative of the point class.

        Type A factors use the classical monomial (product of x_i^(i-1) in
        this package's ascending convention); other factors use the
        product of their positive roots divided by the Weyl order.
        """
        out = ExactPolynomial.const(self.n, 1)
        for c, f in enumerate(self.rs.factors):
            off = self.offsets[c]
            if f.family == "A":
                mono = [0] * self.n
                for i in range(f.dim):
                    mono[off + i] = i
                out = out * ExactPolynomial(self.n, {tuple(mono): Fraction(1)})
            else:
                block = ExactPolynomial.const(self.n, Fraction(1, f.weyl_order()))
                for r in self.rs.roots:
                    if r.component == c:
                        block = block * self.root_form(r)
                out = out * block
        return out

    def schubert_representative(self, w: WeylElement) -> ExactPolynomial:
        """P_w with constant-term extraction dual to the Schubert basis."""
        key = w.data
        hit = self._rep_cache.get(key)
        if hit is not None:
            return hit
        if key == self._w0.data:
            rep = self.top_representative()
        else:
            asc = None
            for c, i in self.rs.simple_indices():
                root = self.rs.simple_root(c, i)
                _, sign = w.act(root)
                if sign > 0:
                    asc = (c, i)
                    break
            ws = compose(w, simple_reflection(self.rs, *asc))
            rep = self.divided_difference(*asc,
                                          self.schubert_representative(ws))
        self._rep_cache[key] = rep
        return rep


# ---------------------------------------------------------------------------
# Chevalley (ring) model


class CohomologyRing:
    """Schubert-basis multiplication driven by divisor operators."""

    def __init__(self, rs: RootSystem):
        total = 1
        for f in rs.factors:
            total *= f.weyl_order()
        if total > _W_LIMIT:
            raise GroupTooLargeError(
                f"Weyl group of order {total} exceeds the oracle limit")
        self.rs = rs
        self.elements = all_elements(rs)
        self.elements.sort(key=lambda w: (w.length(), w.data))
        self.index = {w.data: i for i, w in enumerate(self.elements)}
        self.lengths = [w.length() for w in self.elements]
        self.by_length: Dict[int, List[int]] = {}
        for i, l in enumerate(self.lengths):
            self.by_length.setdefault(l, []).append(i)
        self.top_length = rs.n
        self.w0 = long_element(rs)
        self.w0_idx = self.index[self.w0.data]
        self.simples = rs.simple_indices()
        self._build_operators()
        self._build_word_basis()
        self.pair_cache: Dict[Tuple[int, int], dict] = {}

    # -- Chevalley operators ------------------------------------------------

    def _build_operators(self):
        rs = self.rs
        refls = [(r, reflection(rs, r)) for r in rs.roots]
        norms = [rs.factors[r.component].norm2(r.vector) for r in rs.roots]
        simple_norms = {}
        simple_pos = {}
        for k, (c, i) in enumerate(self.simples):
            sr = rs.simple_root(c, i)
            simple_norms[(c, i)] = rs.factors[c].norm2(sr.vector)
            simple_pos[(c, i)] = k
        self.ops: List[Dict[int, list]] = [dict() for _ in self.simples]
        for idx, w in enumerate(self.elements):
            lw = self.lengths[idx]
            for r, s in refls:
                t = compose(w, s)
                tidx = self.index[t.data]
                if self.lengths[tidx] != lw + 1:
                    continue
                # <fundamental weight_i, coroot of r> for each simple i of
                # r's factor: coeff_i * |alpha_i|^2 / |r|^2.
                for local_i, coeff in enumerate(r.coeffs):
                    if not coeff:
                        continue
                    ci = (r.component, local_i)
                    val = Fraction(coeff * simple_norms[ci], norms[r.id])
                    assert val.denominator == 1
                    k = simple_pos[ci]
                    self.ops[k].setdefault(idx, []).append((tidx, int(val)))

    def apply_divisor(self, k: int, vec: dict) -> dict:
        out = {}
        op = self.ops[k]
        for idx, c in vec.items():
            for tidx, m in op.get(idx, ()):
                v = out.get(tidx, 0) + c * m
                if v:
                    out[tidx] = v
                else:
                    del out[tidx]
        return out

    # -- divisor-word basis ---------------------------------------------------

    def _build_word_basis(self):
        # Tree of divisor words: node 0 is the empty word at the identity.
        self.node_parent = [0]
        self.node_gen = [-1]
        self.node_len = [0]
        self.node_vec = [{self.index[identity(self.rs).data]: Fraction(1)}]
        self.expansions: Dict[int, dict] = {}
        eidx = self.index[identity(self.rs).data]
        self.expansions[eidx] = {0: Fraction(1)}
        frontier = [0]
        for length in range(1, self.top_length + 1):
            dim = len(self.by_length.get(length, ()))
            if dim == 0:
                break
            echelon = []  # (pivot_widx, vec, combo over node ids)
            chosen = []
            for parent in frontier:
                if len(chosen) == dim:
                    break
                for k in range(len(self.simples)):
                    if len(chosen) == dim:
                        break
                    vec = self.apply_divisor(k, self.node_vec[parent])
                    if not vec:
                        continue
                    red = dict(vec)
                    combo = {}
                    for pivot, evec, ecombo in echelon:
                        c = red.get(pivot)
                        if c:
                            lam = c / evec[pivot]
                            for m, v in evec.items():
                                nv = red.get(m, 0) - lam * v
                                if nv:
                                    red[m] = nv
                                else:
                                    red.pop(m, None)
                            for m, v in ecombo.items():
                                combo[m] = combo.get(m, 0) - lam * v
                    if not red:
                        continue
                    node = len(self.node_parent)
                    self.node_parent.append(parent)
                    self.node_gen.append(k)
                    self.node_len.append(length)
                    self.node_vec.append(vec)
                    combo[node] = Fraction(1)
                    pivot = min(red)
                    echelon.append((pivot, red, combo))
                    chosen.append(node)
            if len(chosen) != dim:
                raise OracleConsistencyError(
                    f"divisors fail to span degree {length} of {self.rs.spec}")
            # Solve the unit vector of every element of this length.
            for widx in self.by_length[length]:
                residual = {widx: Fraction(1)}
                coeffs = {}
                for pivot, evec, ecombo in echelon:
                    c = residual.get(pivot)
                    if c:
                        lam = c / evec[pivot]
                        for m, v in evec.items():
                            nv = residual.get(m, 0) - lam * v
                            if nv:
                                residual[m] = nv
                            else:
                                residual.pop(m, None)
                        for m, v in ecombo.items():
                            coeffs[m] = coeffs.get(m, 0) + lam * v
                if residual:
                    raise OracleConsistencyError("expansion solve failed")
                self.expansions[widx] = {m: v for m, v in coeffs.items() if v}
            frontier = chosen

    def _node_paths_apply(self, needed: Iterable[int], start_vec: dict) -> dict:
        """vecs[node] = (divisor word of node) applied to start_vec."""
        need = set(needed)
        for n in list(need):
            p = n
            while p and self.node_parent[p] not in need:
                need.add(self.node_parent[p])
                p = self.node_parent[p]
        vecs = {0: start_vec}
        for n in sorted(need, key=lambda n: self.node_len[n]):
            if n == 0:
                continue
            vecs[n] = self.apply_divisor(self.node_gen[n],
                                         vecs[self.node_parent[n]])
        return vecs

    def multiply_vec(self, vec: dict, v: WeylElement) -> dict:
        """Schubert expansion of (class with vector vec) * omega_v."""
        expn = self.expansions[self.index[v.data]]
        vecs = self._node_paths_apply(expn.keys(), vec)
        out = {}
        for node, c in expn.items():
            for widx, a in vecs[node].items():
                nv = out.get(widx, 0) + c * a
                if nv:
                    out[widx] = nv
                else:
                    del out[widx]
        return out

    def product(self, u: WeylElement, v: WeylElement) -> dict:
        """omega_u * omega_v as {element index: integer coefficient}."""
        ku, kv = self.index[u.data], self.index[v.data]
        # Multiply through the shorter factor's divisor words.
        if self.lengths[ku] < self.lengths[kv]:
            shorter, longer = u, kv
        else:
            shorter, longer = v, ku
        key = (min(ku, kv), max(ku, kv))
        hit = self.pair_cache.get(key)
        if hit is None:
            if self.lengths[ku] + self.lengths[kv] > self.top_length:
                hit = {}
            else:
                raw = self.multiply_vec({longer: Fraction(1)}, shorter)
                hit = {}
                for w, c in raw.items():
                    c = Fraction(c)
                    assert c.denominator == 1 and c >= 0
                    hit[w] = int(c)
            self.pair_cache[key] = hit
        return hit

    def product_vector(self, u: WeylElement, v: WeylElement) -> SchubertVector:
        prod = self.product(u, v)
        return SchubertVector(
            self.rs, {self.elements[i]: Fraction(c) for i, c in prod.items()},
            u.length() + v.length())

    def intersection_ring(self, pis) -> int:
        """Top intersection number by folded Schubert multiplication."""
        pis = list(pis)
        total = sum(p.length() for p in pis)
        if total != self.top_length:
            return 0
        if len(pis) == 1:
            return 1 if pis[0].data == self.w0.data else 0
        dual = compose(self.w0, pis[-1])
        didx = self.index[dual.data]
        if len(pis) == 2:
            return 1 if self.index[pis[0].data] == didx else 0
        vec = {i: Fraction(c) for i, c in self.product(pis[0], pis[1]).items()}
        for p in pis[2:-1]:
            vec = self.multiply_vec(vec, p)
        c = Fraction(vec.get(didx, 0))
        assert c.denominator == 1 and c >= 0
        return int(c)

    def chevalley_table(self):
        """The divisor operators, keyed by (component, simple index)."""
        out = {}
        for k, ci in enumerate(self.simples):
            table = {}
            for idx, targets in self.ops[k].items():
                table[self.elements[idx]] = [(self.elements[t], m)
                                             for t, m in targets]
            out[ci] = table
        return out


# ---------------------------------------------------------------------------
# Public oracle API

_RINGS: Dict[str, CohomologyRing] = {}
_MODELS: Dict[str, BorelModel] = {}


def ring_for(rs: RootSystem) -> CohomologyRing:
    ring = _RINGS.get(rs.spec)
    if ring is None or ring.rs is not rs:
        ring = _RINGS.get(rs.spec)
        if ring is None:
            ring = CohomologyRing(rs)
            _RINGS[rs.spec] = ring
        elif ring.rs is not rs:
            # Same spec, different instance: rebuild on that instance.
            ring = CohomologyRing(rs)
            _RINGS[rs.spec] = ring
    return ring


def model_for(rs: RootSystem) -> BorelModel:
    model = _MODELS.get(rs.spec)
    if model is None or model.rs is not rs:
        model = BorelModel(rs)
        _MODELS[rs.spec] = model
    return model


def divided_difference(rs: RootSystem, simple, f: ExactPolynomial):
    """Apply one divided-difference operator; exact division guaranteed.

    ``simple`` is a (component, index) pair, or a bare index into the
    concatenated simple list.
    """
    model = model_for(rs)
    if isinstance(simple, int):
        simple = rs.simple_indices()[simple]
    return model.divided_difference(simple[0], simple[1], f)


def chevalley_table(rs: RootSystem):
    return ring_for(rs).chevalley_table()


def intersection_bgg(rs: RootSystem, pis) -> int:
    """Top intersection number via polynomial representatives."""
    pis = list(pis)
    if sum(p.length() for p in pis) != rs.n:
        return 0
    model = model_for(rs)
    prod = ExactPolynomial.const(model.n, 1)
    for p in pis:
        prod = prod * model.schubert_representative(p)
    res = model.dd_element(long_element(rs), prod)
    c = res.constant_term()
    if res.degree() > 0:
        raise OracleConsistencyError("top extraction left positive degree")
    assert c.denominator == 1 and c >= 0
    return int(c)


def intersection_number(rs: RootSystem, pis) -> int:
    """Exact Schubert intersection number, cross-checked two ways.

    Returns 0 off top degree.  Raises OracleConsistencyError if the ring
    and polynomial computations ever disagree.
    """
    pis = list(pis)
    if sum(p.length() for p in pis) != rs.n:
        return 0
    a = ring_for(rs).intersection_ring(pis)
    b = intersection_bgg(rs, pis)
    if a != b:
        raise OracleConsistencyError(
            f"ring={a} vs polynomial={b} for {rs.spec}")
    return a


def _source_coordinate_forms(source, smodel: BorelModel):
    """Linear forms over the source polynomial variables, one per source
    root-vector coordinate (G2's (a, b) pair expands into its integer
    3-coordinate plane model)."""
    forms = []
    var_off = 0
    for f in source.factors:
        if f.family == "G2":
            for basis3 in ((1, -1, 0), (-1, 2, -1)):
                coeffs = [Fraction(0)] * smodel.n
                for l in range(3):
                    coeffs[var_off + l] = Fraction(basis3[l])
                forms.append(ExactPolynomial.linear(smodel.n, coeffs))
        else:
            for i in range(f.dim):
                coeffs = [Fraction(0)] * smodel.n
                coeffs[var_off + i] = Fraction(1)
                forms.append(ExactPolynomial.linear(smodel.n, coeffs))
        var_off += f.dim
    return forms


def _restriction_forms(e: Embedding, tmodel: BorelModel, smodel: BorelModel):
    """Target variable index -> linear form over source variables."""
    src_coord = _source_coordinate_forms(e.source, smodel)

    def through_block(block_row):
        out = ExactPolynomial.zero(smodel.n)
        for j, coef in enumerate(block_row):
            if coef:
                out = out + src_coord[j] * coef
        return out

    forms = []
    for c, f in enumerate(e.target.factors):
        block = e.restriction[c]
        if f.family == "G2":
            # The block maps (a, b) coordinates; target polynomial
            # variables are the 3-coordinate plane model, so express each
            # e_k as x*short3 + y*long3 + z*(1,1,1) and drop the gauge.
            q = Fraction
            s3 = (1, -1, 0)
            l3 = (-1, 2, -1)

            def plane_coords(k):
                a = [[q(s3[r]), q(l3[r]), q(1)] for r in range(3)]
                bvec = [q(1) if r == k else q(0) for r in range(3)]
                det = (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                       - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                       + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))

                def rep(col):
                    m = [row[:] for row in a]
                    for r in range(3):
                        m[r][col] = bvec[r]
                    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

                return rep(0) / det, rep(1) / det

            short_form = through_block(block[0])
            long_form = through_block(block[1])
            for k in range(3):
                x, y = plane_coords(k)
                forms.append(short_form * x + long_form * y)
        else:
            for i in range(f.dim):
                forms.append(through_block(block[i]))
    return forms


def branching_expand(e: Embedding, pi: WeylElement) -> SchubertVector:
    """Expand the pullback of a target Schubert class in source classes.

    Coefficients are extracted as constant terms of source divided
    differences applied to the restricted polynomial representative; they
    are checked to be nonnegative integers.
    """
    if e.restriction is None:
        raise ValueError("embedding carries no restriction map")
    if pi.rs is not e.target:
        raise ValueError("element must live in the target group")
    degree = pi.length()
    source = e.source
    if degree > source.n:
        return SchubertVector(source, {}, degree)
    tmodel = model_for(e.target)
    smodel = model_for(source)
    rep = tmodel.schubert_representative(pi)
    forms = _restriction_forms(e, tmodel, smodel)
    signed = _signed_mapping(forms, smodel.n)
    if signed is not None:
        f = rep.substitute_signed(signed, n_out=smodel.n)
    else:
        f = rep.substitute_linear(forms, n_out=smodel.n)
    coeffs = {}
    if not f.is_zero():
        dd_memo: Dict[tuple, ExactPolynomial] = {}

        def dd(w: WeylElement) -> ExactPolynomial:
            if w.is_identity():
                return f
            hit = dd_memo.get(w.data)
            if hit is not None:
                return hit
            word = reduced_word(w)
            c, i = word[0]
            tail = compose(simple_reflection(source, c, i), w)
            res = smodel.divided_difference(c, i, dd(tail))
            dd_memo[w.data] = res
            return res

        for v in all_elements(source):
            if v.length() != degree:
                continue
            c = dd(v).constant_term()
            assert c.denominator == 1 and c >= 0, \
                f"branching coefficient {c} is not a nonnegative integer"
            if c:
                coeffs[v] = int(c)
    return SchubertVector(source, coeffs, degree)


def _signed_mapping(forms, n_out):
    """Detect substitutions sending every variable to +-variable or 0."""
    mapping = []
    for form in forms:
        if form.is_zero():
            mapping.append(None)
            continue
        if len(form.terms) != 1:
            return None
        (mono, c), = form.terms.items()
        if sum(mono) != 1 or c not in (1, -1):
            return None
        j = mono.index(1)
        mapping.append((j, 1 if c == 1 else -1))
    return mapping


# ---------------------------------------------------------------------------
# Structure-constant cache files

_CACHE_MAGIC = b"RGORC1"


def _write_varint(out: bytearray, value: int):
    assert value >= 0
    while True:
        b = value & 0x7F
        value >>= 7
        if value:
            out.append(b | 0x80)
        else:
            out.append(b)
            return


def _read_varint(buf: bytes, pos: int):
    shift = 0
    value = 0
    while True:
        b = buf[pos]
        pos += 1
        value |= (b & 0x7F) << shift
        if not b & 0x80:
            return value, pos
        shift += 7


def cache_path(rs: RootSystem, cache_dir: Optional[str] = None) -> str:
    base = cache_dir or os.environ.get("ROOTGAME_CACHE_DIR") or \
        os.path.join(os.path.expanduser("~"), ".cache", "rootgame")
    os.makedirs(base, exist_ok=True)
    return os.path.join(base, f"structure_{rs.spec.replace('x', '_')}.rgorc")


def save_structure_cache(ring: CohomologyRing,
                         path: Optional[str] = None) -> str:
    """Persist every product computed so far as (u, v, w, c) varints."""
    path = path or cache_path(ring.rs)
    out = bytearray()
    out += _CACHE_MAGIC
    spec = ring.rs.spec.encode()
    _write_varint(out, len(spec))
    out += spec
    for (ku, kv), table in sorted(ring.pair_cache.items()):
        for w, c in sorted(table.items()):
            _write_varint(out, ku)
            _write_varint(out, kv)
            _write_varint(out, w)
            _write_varint(out, c)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(bytes(out))
    os.replace(tmp, path)
    return path


def load_structure_cache(ring: CohomologyRing,
                         path: Optional[str] = None) -> int:
    """Merge cached products into the ring; returns the pair count loaded."""
    path = path or cache_path(ring.rs)
    if not os.path.exists(path):
        return 0
    with open(path, "rb") as fh:
        buf = fh.read()
    if buf[:len(_CACHE_MAGIC)] != _CACHE_MAGIC:
        raise ValueError(f"{path}: bad cache magic")
    pos = len(_CACHE_MAGIC)
    n, pos = _read_varint(buf, pos)
    spec = buf[pos:pos + n].decode()
    pos += n
    if spec != ring.rs.spec:
        raise ValueError(f"{path}: cache is for {spec!r}")
    pairs = {}
    while pos < len(buf):
        ku, pos = _read_varint(buf, pos)
        kv, pos = _read_varint(buf, pos)
        w, pos = _read_varint(buf, pos)
        c, pos = _read_varint(buf, pos)
        pairs.setdefault((ku, kv), {})[w] = c
    # Pairs whose product is empty are representable but never stored;
    # only fully-stored pairs can be trusted, and any pair with at least
    # one quadruple is complete by construction.
    ring.pair_cache.update(pairs)
    return len(pairs)
