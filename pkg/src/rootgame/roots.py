"""Finite crystallographic root systems (types A-D and G2) with board layouts.

A root system is specified by a string such as ``"A4"`` or ``"A4xB2"``.
Positive roots are generated by closing the simple roots under root
addition, then frozen in a fixed total order (component, height,
lexicographic vector) so that root ids, hashes and certificates are
deterministic.  Subsets of positive roots are manipulated as bitmasks
over root ids throughout the package.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

FAMILIES = ("A", "B", "C", "D", "G2")
MAX_RANK = 9

# G2 positive roots as (a, b) = a*(short simple) + b*(long simple).
_G2_POSITIVE = ((1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2))
# Embedding of the (a, b) basis into the integer 3-coordinate plane model,
# used wherever an inner product is needed.
_G2_SHORT_3D = (1, -1, 0)
_G2_LONG_3D = (-1, 2, -1)


class GroupSpecError(ValueError):
    """Group spec string could not be parsed."""

    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ResourceBudgetError(RuntimeError):
    """An enumeration exceeded its caller-supplied budget."""


@dataclass(frozen=True)
class IdealSubset:
    """An upward-closed set of positive roots of one system.

    ``members`` is the sorted tuple of root ids; ``mask`` the same set
    as a bitmask, which is what the game engine consumes.
    """

    members: tuple
    mask: int

    @classmethod
    def from_mask(cls, rs: "RootSystem", mask: int) -> "IdealSubset":
        return cls(members=tuple(rs.mask_ids(mask)), mask=mask)


@dataclass(frozen=True)
class Root:
    """One positive root: its factor index, coordinates and stable id.

    ``vector`` holds integer coordinates in the ambient basis of the
    factor (for G2 it is the (a, b) pair of simple-root coefficients).
    ``coeffs`` are the coefficients over the factor's simple roots.
    """

    component: int
    vector: tuple
    id: int
    height: int
    coeffs: tuple
    name: str

    def __repr__(self):
        return f"Root({self.name!r}, id={self.id})"


def parse_group_spec(spec: str):
    """Parse ``Simple ("x" Simple)*`` into a list of (family, rank) pairs."""
    factors = []
    pos = 0
    parts = spec.split("x")
    for part in parts:
        m = re.fullmatch(r"(A|B|C|D|G)(\d+)", part.strip())
        if not m:
            raise GroupSpecError(f"bad factor {part.strip()!r}", pos)
        family, rank = m.group(1), int(m.group(2))
        if family == "G":
            if rank != 2:
                raise GroupSpecError("only G2 is supported", pos)
            family = "G2"
        else:
            lo = {"A": 1, "B": 2, "C": 2, "D": 2}[family]
            if not lo <= rank <= MAX_RANK:
                raise GroupSpecError(
                    f"rank {rank} out of range for type {family}", pos)
        factors.append((family, rank))
        pos += len(part) + 1
    return factors


def _simple_roots(family: str, rank: int):
    """Simple roots in ambient coordinates, ascending-index convention."""
    if family == "G2":
        return [(1, 0), (0, 1)]
    n = rank + 1 if family == "A" else rank

    def unit(i, c=1):
        v = [0] * n
        v[i] = c
        return v

    simples = []
    if family == "A":
        for i in range(rank):
            v = unit(i + 1)
            v[i] = -1
            simples.append(tuple(v))
    elif family == "B":
        simples.append(tuple(unit(0)))
        for i in range(rank - 1):
            v = unit(i + 1)
            v[i] = -1
            simples.append(tuple(v))
    elif family == "C":
        simples.append(tuple(unit(0, 2)))
        for i in range(rank - 1):
            v = unit(i + 1)
            v[i] = -1
            simples.append(tuple(v))
    elif family == "D":
        v = unit(0)
        v[1] = 1
        simples.append(tuple(v))
        for i in range(rank - 1):
            v = unit(i + 1)
            v[i] = -1
            simples.append(tuple(v))
    return simples


def _is_positive_root(family: str, rank: int, vec) -> bool:
    """Closed-form membership test for positive roots of one factor."""
    if family == "G2":
        return tuple(vec) in _G2_POSITIVE
    nz = [(i, c) for i, c in enumerate(vec) if c]
    if family == "A":
        if len(nz) != 2:
            return False
        (i, ci), (j, cj) = nz
        return ci == -1 and cj == 1
    if family == "B":
        if len(nz) == 1:
            return nz[0][1] == 1
        if len(nz) == 2:
            (i, ci), (j, cj) = nz
            return cj == 1 and ci in (-1, 1)
        return False
    if family == "C":
        if len(nz) == 1:
            return nz[0][1] == 2
        if len(nz) == 2:
            (i, ci), (j, cj) = nz
            return cj == 1 and ci in (-1, 1)
        return False
    if family == "D":
        if len(nz) != 2:
            return False
        (i, ci), (j, cj) = nz
        return cj == 1 and ci in (-1, 1)
    raise ValueError(family)


def _root_name(family: str, rank: int, vec) -> str:
    if family == "G2":
        a, b = vec
        return f"{a}*s+{b}*l"
    nz = [(i + 1, c) for i, c in enumerate(vec) if c]
    if family == "A":
        (i, _), (j, _) = nz
        return f"α_{{{i},{j}}}"
    if family == "D":
        (i, ci), (j, _) = nz
        return f"β'_{{{i},{j}}}" if ci == 1 else f"β_{{{i},{j}}}"
    # B and C share the gamma naming; the C "diagonal" root is 2x_j.
    if len(nz) == 1:
        return f"γ°_{{{nz[0][0]}}}"
    (i, ci), (j, _) = nz
    return f"γ'_{{{i},{j}}}" if ci == 1 else f"γ_{{{i},{j}}}"


def _layout_cell(family: str, rank: int, vec):
    """Board coordinates (row, col) of one root within its factor."""
    n = rank
    if family == "G2":
        a, b = vec
        height = a + b
        if (a, b) == (0, 1):
            return (6, 1)
        order = {1: 5, 2: 4, 3: 3, 4: 2, 5: 1}
        return (order[height], 2)
    nz = [(i + 1, c) for i, c in enumerate(vec) if c]
    if family == "A":
        (i, _), (j, _) = nz
        return (i, j)
    if family == "D":
        (i, ci), (j, _) = nz
        return (n + 1 - i, j) if ci == 1 else (n + i, j)
    if len(nz) == 1:
        return (n + 1, nz[0][0])
    (i, ci), (j, _) = nz
    return (n + 1 - i, j) if ci == 1 else (n + 1 + i, j)


class _Factor:
    """One irreducible factor: positive roots, simples, and metadata."""

    def __init__(self, family: str, rank: int, component: int):
        self.family = family
        self.rank = rank
        self.component = component
        # dim: coordinates of the inner-product model (G2 uses the integer
        # 3-coordinate plane); vec_dim: length of stored root vectors
        # (G2 roots are (a, b) simple-coefficient pairs).
        self.dim = 3 if family == "G2" else (rank + 1 if family == "A" else rank)
        self.vec_dim = 2 if family == "G2" else self.dim
        self.simples = _simple_roots(family, rank)
        self._generate()

    def _generate(self):
        simples = self.simples
        heights = {tuple(s): 1 for s in simples}
        coeffs = {tuple(s): tuple(1 if k == i else 0 for k in range(len(simples)))
                  for i, s in enumerate(simples)}
        frontier = list(simples)
        while frontier:
            nxt = []
            for v in frontier:
                for i, s in enumerate(simples):
                    w = tuple(a + b for a, b in zip(v, s))
                    if w in heights:
                        continue
                    if _is_positive_root(self.family, self.rank, w):
                        heights[w] = heights[tuple(v)] + 1
                        c = list(coeffs[tuple(v)])
                        c[i] += 1
                        coeffs[w] = tuple(c)
                        nxt.append(w)
            frontier = nxt
        vecs = sorted(heights, key=lambda v: (heights[v], v))
        self.vectors = vecs
        self.heights = heights
        self.coeffs = coeffs
        self.names = {v: _root_name(self.family, self.rank, v) for v in vecs}

    def is_positive(self, vec) -> bool:
        return _is_positive_root(self.family, self.rank, tuple(vec))

    def to_inner_space(self, vec):
        """Coordinates in which the standard dot product is W-invariant."""
        if self.family != "G2":
            return tuple(vec)
        a, b = vec
        return tuple(a * s + b * l for s, l in zip(_G2_SHORT_3D, _G2_LONG_3D))

    def norm2(self, vec) -> int:
        w = self.to_inner_space(vec)
        return sum(c * c for c in w)

    def weyl_order(self) -> int:
        import math
        k = self.rank
        if self.family == "A":
            return math.factorial(k + 1)
        if self.family in ("B", "C"):
            return (1 << k) * math.factorial(k)
        if self.family == "D":
            return (1 << (k - 1)) * math.factorial(k)
        return 12


class RootSystem:
    """A product of simple factors with an ordered positive root list.

    Immutable after construction; safe to share.  Subsets of roots are
    represented as integer bitmasks indexed by ``Root.id``.
    """

    def __init__(self, spec: str):
        factor_specs = parse_group_spec(spec)
        self.spec = spec.strip()
        self.factors = tuple(_Factor(fam, rk, c)
                             for c, (fam, rk) in enumerate(factor_specs))
        roots = []
        self._by_vec = {}
        for f in self.factors:
            for v in f.vectors:
                name = f.names[v]
                if len(self.factors) > 1:
                    name = f"c{f.component + 1}:{name}"
                r = Root(component=f.component, vector=v, id=len(roots),
                         height=f.heights[v], coeffs=f.coeffs[v], name=name)
                roots.append(r)
                self._by_vec[(f.component, v)] = r
        self.roots = tuple(roots)
        self.n = len(roots)
        self.full_mask = (1 << self.n) - 1
        self._by_name = {r.name: r for r in roots}
        self.component_offsets = []
        off = 0
        for f in self.factors:
            self.component_offsets.append(off)
            off += len(f.vectors)
        self.component_masks = [
            (((1 << len(f.vectors)) - 1) << self.component_offsets[c])
            for c, f in enumerate(self.factors)]
        self._build_poset()
        self._ideal_cache = None

    # -- lookups ---------------------------------------------------------

    def root(self, rid: int) -> Root:
        return self.roots[rid]

    def root_by_vector(self, component: int, vec) -> Optional[Root]:
        return self._by_vec.get((component, tuple(vec)))

    def root_by_name(self, name: str) -> Root:
        return self._by_name[name]

    def simple_indices(self):
        """All (component, local simple index) pairs, in factor order."""
        out = []
        for c, f in enumerate(self.factors):
            out.extend((c, i) for i in range(len(f.simples)))
        return out

    def simple_root(self, component: int, i: int) -> Root:
        return self._by_vec[(component, tuple(self.factors[component].simples[i]))]

    # -- root arithmetic --------------------------------------------------

    def add_roots(self, a: Root, b: Root) -> Optional[Root]:
        """Return a+b when it is a positive root of the common factor."""
        if a.component != b.component:
            return None
        s = tuple(x + y for x, y in zip(a.vector, b.vector))
        return self._by_vec.get((a.component, s))

    def _build_poset(self):
        n = self.n
        raise_to = [0] * n
        for a in self.roots:
            for b in self.roots:
                if b.component != a.component or b.id == a.id:
                    continue
                c = self.add_roots(a, b)
                if c is not None:
                    raise_to[a.id] |= 1 << c.id
        # Transitive closure: above[i] = every root strictly above root i.
        above = list(raise_to)
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = above[i]
                m = acc
                while m:
                    j = (m & -m).bit_length() - 1
                    m &= m - 1
                    acc |= above[j]
                if acc != above[i]:
                    above[i] = acc
                    changed = True
        self.raise_to = raise_to
        self.above = above

    def closure_mask(self, mask: int) -> int:
        """Upward closure of a root-id mask under raising."""
        out = mask
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            out |= self.above[i]
        return out

    def is_ideal_mask(self, mask: int) -> bool:
        return self.closure_mask(mask) == mask

    def leq(self, a: Root, b: Root) -> bool:
        """Root poset order: a <= b iff b - a is a sum of positive roots."""
        return a.id == b.id or bool(self.above[a.id] >> b.id & 1)

    # -- order ideals ------------------------------------------------------

    def _factor_ideals(self, component: int):
        """All upward-closed subsets of one factor, as local masks."""
        f = self.factors[component]
        off = self.component_offsets[component]
        k = len(f.vectors)
        above = [self.above[off + i] >> off for i in range(k)]
        # Process roots from high to low height; a root may be included
        # only if everything above it is already in.
        order = sorted(range(k), key=lambda i: -f.heights[f.vectors[i]])
        out = []

        def rec(idx, mask):
            if idx == len(order):
                out.append(mask)
                return
            i = order[idx]
            rec(idx + 1, mask)
            if above[i] & ~mask == 0:
                rec(idx + 1, mask | (1 << i))

        rec(0, 0)
        return sorted(out)

    def ideal_masks(self):
        """All order ideals of the full (product) poset, as masks.

        Materialized and cached; total count is the product of the factor
        counts, so callers dealing with large diagonal boards should use
        the streaming enumerator or per-factor lists instead.
        """
        if self._ideal_cache is None:
            self._ideal_cache = tuple(sorted(self.iter_ideal_masks()))
        return self._ideal_cache

    def iter_ideal_masks(self, budget: Optional[int] = None) -> Iterator[int]:
        """Yield every order ideal exactly once (factor-lazy for products)."""
        per_factor = [self._factor_ideals(c) for c in range(len(self.factors))]
        offs = self.component_offsets
        count = 0

        def rec(c, acc):
            nonlocal count
            if c == len(per_factor):
                count += 1
                if budget is not None and count > budget:
                    raise ResourceBudgetError(
                        f"ideal enumeration exceeded budget {budget}")
                yield acc
                return
            for m in per_factor[c]:
                yield from rec(c + 1, acc | (m << offs[c]))

        yield from rec(0, 0)

    def ideal_count(self) -> int:
        n = 1
        for c in range(len(self.factors)):
            n *= len(self._factor_ideals(c))
        return n

    # -- layout ------------------------------------------------------------

    def layout(self):
        """Map root id -> (row, col, component) on the factor boards."""
        out = {}
        for r in self.roots:
            f = self.factors[r.component]
            row, col = _layout_cell(f.family, f.rank, r.vector)
            out[r.id] = (row, col, r.component)
        return out

    def board_shape(self, component: int):
        """(rows, cols) of one factor's board."""
        f = self.factors[component]
        if f.family == "G2":
            return (6, 2)
        if f.family == "A":
            return (f.rank, f.rank + 1)
        if f.family == "D":
            return (2 * f.rank, f.rank)
        return (2 * f.rank + 1, f.rank)

    def mask_ids(self, mask: int):
        out = []
        while mask:
            i = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            out.append(i)
        return out

    def ids_mask(self, ids) -> int:
        m = 0
        for i in ids:
            m |= 1 << i
        return m

    def __repr__(self):
        return f"RootSystem({self.spec!r}, {self.n} positive roots)"


def build_root_system(spec: str) -> RootSystem:
    """Construct the root system named by a group-spec string."""
    return RootSystem(spec)


def enumerate_order_ideals(rs: RootSystem, budget: Optional[int] = None):
    """Stream every upward-closed subset of the positive-root poset.

    Product systems are enumerated factor-lazily, so large diagonal
    boards stream without materializing the whole lattice.  Raises
    ResourceBudgetError if more than ``budget`` ideals would be produced.
    """
    for mask in rs.iter_ideal_masks(budget=budget):
        yield IdealSubset.from_mask(rs, mask)
