"""Combinatorial data of a group inclusion: the root map and weight restriction.

An Embedding packages, for an inclusion of a smaller group into a larger
one, the induced map from positive roots of the big group to positive
roots of the small group or zero, together with the exact-rational linear
map on weight coordinates that the cohomology oracle pulls polynomials
back along.  Built-in constructors cover diagonal products, the block
inclusion of SL(k) in SL(n), the (conjugated) orthogonal groups in SL(n),
and the long-root copy of SL(3) inside G2.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from .roots import Root, RootSystem, build_root_system


class EmbeddingSpecError(ValueError):
    pass


class Embedding:
    """phat: target positive roots -> source positive roots or None.

    ``restriction`` maps target weight coordinates of each factor to
    source weight coordinates: restriction[c] is a tuple (one entry per
    ambient coordinate of target factor c) of source-coordinate vectors
    with Fraction entries, or None when the atom has no linear model
    (raw tables).
    """

    def __init__(self, spec, source, target, phat, atoms, restriction):
        self.spec = spec
        self.source = source
        self.target = target
        self.phat = tuple(phat)
        self.atoms = tuple(atoms)
        self.restriction = restriction
        self.n_copies = len(target.factors)
        self._splitting_cache = None
        self._loss_cache = None
        self._pairs_cache = None
        self._check_consistency()

    # -- basic queries -----------------------------------------------------

    @property
    def diagonal_identity(self) -> bool:
        return all(kind == "id" for kind, _ in self.atoms)

    def phat_root(self, rid: int) -> Optional[Root]:
        s = self.phat[rid]
        return None if s is None else self.source.roots[s]

    def copy_of(self, rid: int) -> int:
        return self.target.roots[rid].component

    def target_rid(self, copy: int, source_rid: int) -> int:
        """Inverse of phat on one identity copy (diagonal embeddings)."""
        off = self.target.component_offsets[copy]
        return off + source_rid

    def _check_consistency(self):
        if self.restriction is None:
            return
        for r in self.target.roots:
            img = self.weight_restriction(r.component, r.vector)
            s = self.phat[r.id]
            if s is not None:
                assert img == self._source_vec(self.source.roots[s]), \
                    f"phat and restriction disagree at {r.name}"

    def _source_vec(self, root: Root):
        out = [Fraction(0)] * self._source_dim()
        off = self._source_offsets()[root.component]
        for i, c in enumerate(root.vector):
            out[off + i] = Fraction(c)
        return tuple(out)

    def _source_dim(self):
        return sum(f.vec_dim for f in self.source.factors)

    def _source_offsets(self):
        offs, acc = [], 0
        for f in self.source.factors:
            offs.append(acc)
            acc += f.vec_dim
        return offs

    def weight_restriction(self, component: int, vec) -> tuple:
        """Restrict a target-factor weight vector to source coordinates."""
        if self.restriction is None:
            raise ValueError("embedding has no restriction map")
        block = self.restriction[component]
        dim = self._source_dim()
        out = [Fraction(0)] * dim
        for i, c in enumerate(vec):
            if c:
                for j, e in enumerate(block[i]):
                    if e:
                        out[j] += c * e
        return tuple(out)

    # -- injectivity -------------------------------------------------------

    def phat_injective(self, token_mask: int):
        """Check the winning condition on a token mask.

        Returns (True, None) or (False, witness) where the witness is
        ('zero', rid) for a token mapped to zero or ('collision', rid, rid)
        for two tokens with equal images.
        """
        seen = {}
        m = token_mask
        while m:
            rid = (m & -m).bit_length() - 1
            m &= m - 1
            s = self.phat[rid]
            if s is None:
                return False, ("zero", rid)
            if s in seen:
                return False, ("collision", seen[s], rid)
            seen[s] = rid
        return True, None

    # -- precomputed masks for the game ------------------------------------

    def splitting_masks(self):
        """All splitting subsets, as (mask, image size) pairs.

        For diagonal embeddings of identity atoms these are exactly the
        source order ideals replicated across every copy; in general they
        are the target order ideals whose image is disjoint from the
        complement's image away from zero.
        """
        if self._splitting_cache is None:
            out = []
            if self.diagonal_identity:
                for m in self.source.ideal_masks():
                    tm = 0
                    for c in range(self.n_copies):
                        tm |= m << self.target.component_offsets[c]
                    out.append((tm, m.bit_count()))
            else:
                for tm in self.target.iter_ideal_masks():
                    img, cimg = self._image_sets(tm)
                    if not (img & cimg):
                        out.append((tm, len(img)))
            self._splitting_cache = tuple(out)
        return self._splitting_cache

    def _image_sets(self, mask: int):
        img = set()
        for rid in self.target.mask_ids(mask):
            s = self.phat[rid]
            if s is not None:
                img.add(s)
        cimg = set()
        for rid in self.target.mask_ids(self.target.full_mask & ~mask):
            s = self.phat[rid]
            if s is not None:
                cimg.add(s)
        return img, cimg

    def loss_masks(self):
        """Ideal subsets used for loss detection, as (mask, image size).

        Diagonal identity embeddings need only the equal-copy ideals: any
        violating product ideal stays violating after replacing every
        copy's ideal by their union, which fixes the image.
        """
        if self._loss_cache is None:
            if self.diagonal_identity:
                self._loss_cache = self.splitting_masks()
            else:
                out = []
                for tm in self.target.iter_ideal_masks():
                    img, _ = self._image_sets(tm)
                    out.append((tm, len(img)))
                self._loss_cache = tuple(out)
        return self._loss_cache

    def move_pairs(self):
        """For each root id beta: ((a_bit, b_bit), ...) with b = a + beta.

        Pairs are ordered by strictly decreasing height of a, matching the
        move rule's scan order.
        """
        if self._pairs_cache is None:
            rs = self.target
            table = []
            for beta in rs.roots:
                pairs = []
                for a in rs.roots:
                    if a.component != beta.component:
                        continue
                    b = rs.add_roots(a, beta)
                    if b is not None:
                        pairs.append((a, b))
                pairs.sort(key=lambda ab: -ab[0].height)
                table.append(tuple((1 << a.id, 1 << b.id) for a, b in pairs))
            self._pairs_cache = tuple(table)
        return self._pairs_cache

    def describe(self) -> str:
        """The phat table drawn in the board arrangement, for visual diffing."""
        from .board import render_phat_table
        return render_phat_table(self)

    def __repr__(self):
        return f"Embedding({self.spec!r})"


# -- atom constructors -----------------------------------------------------

def _atom_id(arg: str):
    src = build_root_system(arg)
    if len(src.factors) != 1:
        raise EmbeddingSpecError("id atom requires a simple group")
    dim = src.factors[0].vec_dim
    block = tuple(tuple(Fraction(1) if j == i else Fraction(0)
                        for j in range(dim)) for i in range(dim))
    return src.spec, src.spec, block


def _atom_slk_in_sln(arg: str):
    m = re.fullmatch(r"(\d+),(\d+)", arg)
    if not m:
        raise EmbeddingSpecError(f"slk-in-sln wants 'k,n', got {arg!r}")
    k, n = int(m.group(1)), int(m.group(2))
    if not 2 <= k < n:
        raise EmbeddingSpecError("slk-in-sln requires 2 <= k < n")
    block = []
    for i in range(n):
        row = [Fraction(0)] * k
        if i < k:
            row[i] = Fraction(1)
        block.append(tuple(row))
    return f"A{k - 1}", f"A{n - 1}", tuple(block)


def _atom_so_in_sl(arg: str):
    n = int(arg)
    if n < 4:
        raise EmbeddingSpecError("so-in-sl requires n >= 4")
    mrank = n // 2
    src_spec = f"D{mrank}" if n % 2 == 0 else f"B{mrank}"
    block = []
    if n % 2 == 0:
        m = mrank
        for i in range(1, n + 1):
            row = [Fraction(0)] * m
            if i <= m:
                row[m - i] = Fraction(-1)      # x_i -> -y_{m+1-i}
            else:
                row[i - m - 1] = Fraction(1)   # x_i -> y_{i-m}
            block.append(tuple(row))
    else:
        m = (n + 1) // 2
        for i in range(1, n + 1):
            row = [Fraction(0)] * mrank
            if i < m:
                row[m - i - 1] = Fraction(-1)  # x_i -> -y_{m-i}
            elif i > m:
                row[i - m - 1] = Fraction(1)   # x_i -> y_{i-m}
            block.append(tuple(row))           # middle coordinate -> 0
    return src_spec, f"A{n - 1}", tuple(block)


def _atom_sl3_in_g2():
    # Long simple root of G2 -> first simple root of A2; the other long
    # simple then lands on the second one.  In (a, b) coordinates:
    #   short -> (x1 - 2*x2 + x3)/3,  long -> x2 - x1.
    short = (Fraction(1, 3), Fraction(-2, 3), Fraction(1, 3))
    long_ = (Fraction(-1), Fraction(1), Fraction(0))
    return "A2", "G2", (short, long_)


_ATOMS = {
    "id": lambda arg: _atom_id(arg),
    "slk-in-sln": lambda arg: _atom_slk_in_sln(arg),
    "so-in-sl": lambda arg: _atom_so_in_sl(arg),
    "sl3-in-g2": lambda arg: _atom_sl3_in_g2(),
}


def _parse_atom(text: str):
    text = text.strip()
    if text == "sl3-in-g2":
        return ("sl3-in-g2", "")
    for name in ("id", "slk-in-sln", "so-in-sl"):
        if text.startswith(name + ":"):
            return (name, text[len(name) + 1:])
    raise EmbeddingSpecError(f"unknown embedding atom {text!r}")


def build_embedding(spec: str) -> Embedding:
    """Construct an Embedding from an embedding-spec string.

    Grammar: ``diag(atom, ...)`` or a single atom, where atoms are
    ``id:<Simple>``, ``slk-in-sln:<k>,<n>``, ``so-in-sl:<n>`` and
    ``sl3-in-g2``.  All atoms inside one diag must share a source.
    """
    spec = spec.strip()
    inner = spec
    if spec.startswith("diag(") and spec.endswith(")"):
        inner = spec[5:-1]
    elif spec.startswith("diag"):
        raise EmbeddingSpecError("diag(...) is not well formed")
    atom_texts = [t for t in inner.split(",")] if inner else []
    # slk-in-sln args contain a comma; re-join those fragments.
    merged = []
    for t in atom_texts:
        if merged and re.fullmatch(r"\s*\d+\s*", t) and \
                merged[-1].strip().startswith("slk-in-sln:"):
            merged[-1] += "," + t
        else:
            merged.append(t)
    if not merged:
        raise EmbeddingSpecError("empty embedding spec")
    parsed = [_parse_atom(t) for t in merged]

    built = [(kind, arg, _ATOMS[kind](arg)) for kind, arg in parsed]
    src_specs = {b[2][0] for b in built}
    if len(src_specs) != 1:
        raise EmbeddingSpecError(
            f"diag atoms must share one source, got {sorted(src_specs)}")
    source = build_root_system(built[0][2][0])
    target_spec = "x".join(b[2][1] for b in built)
    target = build_root_system(target_spec)

    restriction = tuple(b[2][2] for b in built)
    atoms = tuple((b[0], b[1]) for b in built)
    phat = [_restricted_root(source, restriction[r.component], r)
            for r in target.roots]
    return Embedding(spec, source, target, phat, atoms, restriction)


def _restricted_root(source: RootSystem, block, root: Root) -> Optional[int]:
    """Source root id whose weight equals the restricted target root, if any."""
    dim = sum(f.vec_dim for f in source.factors)
    img = [Fraction(0)] * dim
    for i, c in enumerate(root.vector):
        if c:
            for j, e in enumerate(block[i]):
                if e:
                    img[j] += c * e
    if all(c == 0 for c in img) or any(c.denominator != 1 for c in img):
        return None
    offs, acc = [], 0
    for f in source.factors:
        offs.append(acc)
        acc += f.vec_dim
    for c, f in enumerate(source.factors):
        vec = tuple(int(img[offs[c] + i]) for i in range(f.vec_dim))
        rest_zero = all(img[j] == 0 for j in range(dim)
                        if not offs[c] <= j < offs[c] + f.vec_dim)
        if rest_zero:
            r = source.root_by_vector(c, vec)
            return r.id if r is not None else None
    return None


def raw_table_embedding(source_spec: str, target_spec: str,
                        table: dict) -> Embedding:
    """Embedding from an explicit root-map table.

    ``table`` maps target root ids (0-based, as ints or strings) to
    either 0/null for the zero image or a 1-based source root id; the
    shift keeps 0 free to mean "maps to zero".  No check is made that an
    actual group inclusion realizes the table, and no restriction map is
    available, so the oracle cannot expand branching coefficients for it.
    """
    source = build_root_system(source_spec)
    target = build_root_system(target_spec)
    phat = []
    for r in target.roots:
        v = table.get(r.id, table.get(str(r.id), 0))
        if v in (0, None):
            phat.append(None)
        else:
            v = int(v)
            if not 1 <= v <= source.n:
                raise EmbeddingSpecError(f"bad source root id {v}")
            phat.append(v - 1)
    return Embedding(f"raw({source_spec}->{target_spec})", source, target,
                     phat, (("raw", ""),) * len(target.factors), None)
