"""Game positions over an embedding: splitting, moves, merges, status.

A position is a partition of the target board into regions plus a token
mask, both over target root ids.  Every operation returns a new position
and records a replayable step, so histories double as certificates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .embedding import Embedding
from .weyl import WeylElement

TOP = "top"
FREE = "free"


class IllegalStepError(ValueError):
    """A step violates the rules; .reason carries a machine-readable cause."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class SplitStep:
    ideal: tuple

    def to_json(self):
        return {"kind": "split", "ideal": list(self.ideal)}


@dataclass(frozen=True)
class MoveStep:
    beta: int
    region: int

    def to_json(self):
        return {"kind": "move", "beta": self.beta, "region": self.region}


@dataclass(frozen=True)
class MergeStep:
    region: int
    k1: int
    k2: int

    def to_json(self):
        return {"kind": "merge", "region": self.region,
                "k1": self.k1, "k2": self.k2}


Step = Union[SplitStep, MoveStep, MergeStep]


def step_from_json(obj) -> Step:
    kind = obj.get("kind")
    if kind == "split":
        return SplitStep(tuple(int(i) for i in obj["ideal"]))
    if kind == "move":
        return MoveStep(int(obj["beta"]), int(obj["region"]))
    if kind == "merge":
        return MergeStep(int(obj["region"]), int(obj["k1"]), int(obj["k2"]))
    raise IllegalStepError(f"unknown step kind {kind!r}")


@dataclass(frozen=True)
class Status:
    verdict: str                     # 'won' | 'lost' | 'open'
    witness: Optional[tuple] = None  # violating ideal, as root ids

    @property
    def won(self):
        return self.verdict == "won"

    @property
    def lost(self):
        return self.verdict == "lost"


@dataclass(frozen=True)
class Position:
    embedding: Embedding
    mode: str
    regions: tuple        # masks, sorted by lowest contained root id
    tokens: int
    history: tuple = ()

    def region_ids(self):
        rs = self.embedding.target
        return [rs.mask_ids(m) for m in self.regions]

    def token_ids(self):
        return self.embedding.target.mask_ids(self.tokens)

    def key(self):
        """Canonical search key: the partition and tokens, not the history."""
        return (self.tokens, self.regions)

    def to_json(self):
        return {
            "embedding": self.embedding.spec,
            "mode": self.mode,
            "regions": self.region_ids(),
            "tokens": self.token_ids(),
            "history": [s.to_json() for s in self.history],
        }


def _sort_regions(masks) -> tuple:
    return tuple(sorted((m for m in masks if m),
                        key=lambda m: ((m & -m).bit_length(), m)))


def initial_position(e: Embedding, pi: WeylElement,
                     mode: Optional[str] = None) -> Position:
    """One full-board region with tokens on the inversion set of pi."""
    if pi.rs is not e.target:
        raise ValueError("element must live in the target Weyl group")
    ell = pi.length()
    top_length = e.source.n
    if mode is None:
        mode = TOP if ell == top_length else FREE
    if mode == TOP and ell != top_length:
        raise ValueError(
            f"top-degree game needs length {top_length}, got {ell}")
    if mode not in (TOP, FREE):
        raise ValueError(f"bad mode {mode!r}")
    return Position(embedding=e, mode=mode,
                    regions=(e.target.full_mask,),
                    tokens=pi.inversion_mask())


# -- splitting ---------------------------------------------------------------

def splitting_violation(e: Embedding, mask: int) -> Optional[str]:
    """Why a set cannot be split along, or None when it is legal."""
    if mask & ~e.target.full_mask:
        return "not a subset of the positive roots"
    if not e.target.is_ideal_mask(mask):
        return "not closed under raising"
    img, cimg = e._image_sets(mask)
    if img & cimg:
        return "image meets the complement's image away from zero"
    return None


def is_splitting_subset(e: Embedding, subset) -> bool:
    mask = subset if isinstance(subset, int) else e.target.ids_mask(subset)
    return splitting_violation(e, mask) is None


def split(pos: Position, subset) -> Position:
    """Refine every region along an ideal subset; a no-op split is legal."""
    e = pos.embedding
    mask = subset if isinstance(subset, int) else e.target.ids_mask(subset)
    reason = splitting_violation(e, mask)
    if reason is not None:
        raise IllegalStepError(reason)
    regions = split_masks(pos.regions, mask)
    step = SplitStep(tuple(e.target.mask_ids(mask)))
    return Position(e, pos.mode, regions, pos.tokens, pos.history + (step,))


def split_masks(regions, mask: int) -> tuple:
    out = []
    for r in regions:
        a = r & mask
        b = r & ~mask
        if a:
            out.append(a)
        if b:
            out.append(b)
    return _sort_regions(out)


def qualifying_splits(pos: Position):
    """Splitting subsets whose token count balances their image size.

    The balance rule decides exactly when splitting helps at top degree;
    the list is computable in any mode, but free play treats splitting
    as discretionary rather than filtering by it.
    """
    t = pos.tokens
    return [mask for mask, nimg in pos.embedding.splitting_masks()
            if (t & mask).bit_count() == nimg]


def split_maximally(pos: Position) -> Position:
    """Split along every qualifying subset (order-independent)."""
    cur = pos
    for mask in qualifying_splits(pos):
        if any((r & mask) and (r & ~mask) for r in cur.regions):
            cur = split(cur, mask)
    return cur


# -- moves -------------------------------------------------------------------

def move_tokens(pairs, region_mask: int, tokens: int) -> int:
    """Apply the token-shift scan of one move inside one region.

    ``pairs`` is the embedding's precomputed (a_bit, b_bit) list for the
    chosen root, ordered by decreasing height of a.
    """
    for a, b in pairs:
        ab = a | b
        if region_mask & ab == ab and tokens & a and not tokens & b:
            tokens ^= ab
    return tokens


def apply_move(pos: Position, beta: int, region_id: int) -> Position:
    e = pos.embedding
    if not 0 <= beta < e.target.n:
        raise IllegalStepError(f"no root with id {beta}")
    if not 0 <= region_id < len(pos.regions):
        raise IllegalStepError(f"no region {region_id}")
    tokens = move_tokens(e.move_pairs()[beta], pos.regions[region_id],
                         pos.tokens)
    step = MoveStep(beta, region_id)
    return Position(e, pos.mode, pos.regions, tokens, pos.history + (step,))


def legal_moves(pos: Position):
    """(beta, region_id) pairs whose move changes the token arrangement."""
    e = pos.embedding
    pairs_table = e.move_pairs()
    out = []
    for region_id, region in enumerate(pos.regions):
        for beta in range(e.target.n):
            pairs = pairs_table[beta]
            if not pairs:
                continue
            t = move_tokens(pairs, region, pos.tokens)
            if t != pos.tokens:
                out.append((beta, region_id))
    return out


# -- merges ------------------------------------------------------------------

def merge_violation(pos: Position, region_id: int, k1: int, k2: int):
    e = pos.embedding
    if not e.diagonal_identity:
        return "merges need a diagonal embedding with identity factors"
    s = e.n_copies
    if not (1 <= k1 <= s and 1 <= k2 <= s) or k1 == k2:
        return f"bad copy pair ({k1}, {k2})"
    if not 0 <= region_id < len(pos.regions):
        return f"no region {region_id}"
    region = pos.regions[region_id]
    off1 = e.target.component_offsets[k1 - 1]
    off2 = e.target.component_offsets[k2 - 1]
    src_full = (1 << e.source.n) - 1
    t1 = (pos.tokens >> off1) & (region >> off1) & src_full
    t2 = (pos.tokens >> off2) & (region >> off2) & src_full
    if t1 & t2:
        return "a square in the region carries tokens of both copies"
    return None


def apply_merge(pos: Position, region_id: int, k1: int, k2: int) -> Position:
    """Relabel every copy-k2 token in the region as a copy-k1 token."""
    reason = merge_violation(pos, region_id, k1, k2)
    if reason is not None:
        raise IllegalStepError(reason)
    e = pos.embedding
    region = pos.regions[region_id]
    off1 = e.target.component_offsets[k1 - 1]
    off2 = e.target.component_offsets[k2 - 1]
    src_full = (1 << e.source.n) - 1
    moving = (pos.tokens >> off2) & (region >> off2) & src_full
    target_side = moving << off1
    if region & target_side != target_side:
        raise IllegalStepError(
            "region is not copy-symmetric under the merge")
    tokens = (pos.tokens & ~(moving << off2)) | target_side
    step = MergeStep(region_id, k1, k2)
    return Position(e, pos.mode, pos.regions, tokens, pos.history + (step,))


def legal_merges(pos: Position):
    """(region_id, k1, k2) triples that are legal and move some token."""
    e = pos.embedding
    if not e.diagonal_identity:
        return []
    s = e.n_copies
    src_full = (1 << e.source.n) - 1
    out = []
    for region_id, region in enumerate(pos.regions):
        for k1 in range(1, s + 1):
            for k2 in range(1, s + 1):
                if k1 == k2:
                    continue
                off2 = e.target.component_offsets[k2 - 1]
                moving = (pos.tokens >> off2) & (region >> off2) & src_full
                if not moving:
                    continue
                if merge_violation(pos, region_id, k1, k2) is None:
                    out.append((region_id, k1, k2))
    return out


# -- status ------------------------------------------------------------------

def status_masks(e: Embedding, tokens: int) -> Status:
    """Won / lost / open for a bare token mask (partition-independent)."""
    ok, _ = e.phat_injective(tokens)
    if ok:
        return Status("won")
    for mask, nimg in e.loss_masks():
        if (tokens & mask).bit_count() > nimg:
            return Status("lost", tuple(e.target.mask_ids(mask)))
    return Status("open")


def status(pos: Position) -> Status:
    return status_masks(pos.embedding, pos.tokens)


def apply_step(pos: Position, step: Step) -> Position:
    if isinstance(step, SplitStep):
        return split(pos, step.ideal)
    if isinstance(step, MoveStep):
        return apply_move(pos, step.beta, step.region)
    if isinstance(step, MergeStep):
        return apply_merge(pos, step.region, step.k1, step.k2)
    raise IllegalStepError(f"unknown step {step!r}")


def position_from_json(obj, embedding_builder=None) -> Position:
    """Rebuild a position from its JSON form by replaying the history."""
    from .embedding import build_embedding
    builder = embedding_builder or build_embedding
    e = builder(obj["embedding"])
    regions = _sort_regions(e.target.ids_mask(ids) for ids in obj["regions"])
    tokens = e.target.ids_mask(obj["tokens"])
    history = tuple(step_from_json(s) for s in obj.get("history", []))
    return Position(e, obj.get("mode", TOP), regions, tokens, history)
