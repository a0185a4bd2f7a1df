"""Search for winning lines; verdicts carry replayable evidence.

The search is a depth-first walk over (partition, tokens) states with a
transposition memo.  In top-degree play every node is first normalized
by splitting maximally, which the balance rule makes choice-free; lost
states are pruned, which is sound because token counts over the ideals
used for loss detection never decrease under moves and are invariant
under merges and splits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .embedding import Embedding
from .game import (TOP, IllegalStepError, MergeStep, MoveStep, Position,
                   SplitStep, apply_step, initial_position, move_tokens,
                   split_masks, status, status_masks)
from .weyl import WeylElement

MAXIMAL = "maximal"
NONE = "none"
DISCRETIONARY = "discretionary"


@dataclass(frozen=True)
class SolverConfig:
    allow_merges: bool = False
    movable_copies: Optional[frozenset] = None   # 1-based copy indices
    splitting_policy: Optional[str] = None       # default: by game mode
    node_budget: int = 10_000_000
    transposition_memo: bool = True
    # Merges explode the reachable space, so winning lines are searched
    # with iterative deepening on the number of merges used; raise this
    # cap only if a certificate is suspected to need more.
    max_merges: int = 8

    def __post_init__(self):
        if self.node_budget <= 0:
            raise ValueError("node budget must be positive")


@dataclass(frozen=True)
class Verdict:
    kind: str                                    # doomed|won|not_winnable|unknown
    witness: Optional[tuple] = None
    certificate: Optional[tuple] = None
    nodes: int = 0

    @property
    def won(self):
        return self.kind == "won"

    def to_json(self):
        out = {"kind": self.kind, "nodes": self.nodes}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        if self.certificate is not None:
            out["certificate"] = [s.to_json() for s in self.certificate]
        return out


class ReplayError(ValueError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"illegal step at index {index}: {reason}")
        self.index = index
        self.reason = reason


class _BudgetExceeded(Exception):
    pass


_IN_PROGRESS = 0
_FAILED = 1


def solve(e: Embedding, pi: WeylElement, cfg: Optional[SolverConfig] = None,
          mode: Optional[str] = None) -> Verdict:
    """Decide a game: Doomed, Won (with certificate), NotWinnable, or Unknown."""
    cfg = cfg or SolverConfig()
    pos0 = initial_position(e, pi, mode)
    st0 = status(pos0)
    if st0.lost:
        return Verdict("doomed", witness=st0.witness)
    policy = cfg.splitting_policy
    if policy is None:
        policy = MAXIMAL if pos0.mode == TOP else DISCRETIONARY
    if policy not in (MAXIMAL, NONE, DISCRETIONARY):
        raise ValueError(f"bad splitting policy {policy!r}")
    if not (cfg.allow_merges and e.diagonal_identity):
        return _search(e, cfg, policy, pos0, merge_cap=0)
    # Iterative deepening over the number of merges in the line: shallow
    # merge counts almost always suffice and keep the memo small.
    total_nodes = 0
    for cap in range(cfg.max_merges + 1):
        v = _search(e, cfg, policy, pos0, merge_cap=cap)
        total_nodes += v.nodes
        if v.kind != "merge_capped":
            return Verdict(v.kind, v.witness, v.certificate, total_nodes)
    return Verdict("unknown", nodes=total_nodes)


def _search(e: Embedding, cfg: SolverConfig, policy: str,
            pos0: Position, merge_cap: int) -> Verdict:
    rs = e.target
    pairs_table = e.move_pairs()
    split_list = e.splitting_masks()
    offsets = rs.component_offsets
    src_full = (1 << e.source.n) - 1
    n_copies = e.n_copies
    do_merge = cfg.allow_merges and e.diagonal_identity
    move_betas = [b for b in range(rs.n)
                  if pairs_table[b]
                  and (cfg.movable_copies is None
                       or rs.roots[b].component + 1 in cfg.movable_copies)]
    memo = {} if cfg.transposition_memo else None
    nodes = 0
    budget = cfg.node_budget
    capped = False

    def normalize(regions, tokens):
        """Maximal splitting as a normal form; returns regions + split steps."""
        steps = []
        if policy == MAXIMAL:
            for mask, nimg in split_list:
                if (tokens & mask).bit_count() == nimg and \
                        any((r & mask) and (r & ~mask) for r in regions):
                    regions = split_masks(regions, mask)
                    steps.append(SplitStep(tuple(rs.mask_ids(mask))))
        return regions, steps

    def merge_children(regions, tokens):
        for region_id, region in enumerate(regions):
            for k1 in range(1, n_copies + 1):
                r1 = (region >> offsets[k1 - 1]) & src_full
                t1 = (tokens >> offsets[k1 - 1]) & r1
                for k2 in range(1, n_copies + 1):
                    if k1 == k2:
                        continue
                    r2 = (region >> offsets[k2 - 1]) & src_full
                    t2 = (tokens >> offsets[k2 - 1]) & r2
                    if not t2 or (t1 & t2) or (t2 & ~r1):
                        continue
                    nt = (tokens & ~(t2 << offsets[k2 - 1])) \
                        | (t2 << offsets[k1 - 1])
                    yield nt, MergeStep(region_id, k1, k2)

    def children(regions, tokens, merges_left):
        nonlocal capped
        for region_id, region in enumerate(regions):
            for beta in move_betas:
                nt = move_tokens(pairs_table[beta], region, tokens)
                if nt != tokens:
                    yield regions, nt, MoveStep(beta, region_id), merges_left
        if do_merge:
            for nt, step in merge_children(regions, tokens):
                if merges_left > 0:
                    yield regions, nt, step, merges_left - 1
                else:
                    capped = True
        if policy == DISCRETIONARY:
            for mask, _ in split_list:
                if any((r & mask) and (r & ~mask) for r in regions):
                    yield (split_masks(regions, mask), tokens,
                           SplitStep(tuple(rs.mask_ids(mask))), merges_left)

    def enter(regions, tokens, merges_left, entry_steps):
        """Normalize a state; returns ('won'|'dead'|'frame', payload)."""
        nonlocal nodes
        regions, extra = normalize(regions, tokens)
        entry_steps = entry_steps + extra
        key = (tokens, regions, merges_left)
        if memo is not None and key in memo:
            return "dead", None
        st = status_masks(e, tokens)
        if st.won:
            return "won", entry_steps
        if st.lost:
            if memo is not None:
                memo[key] = _FAILED
            return "dead", None
        nodes += 1
        if nodes > budget:
            raise _BudgetExceeded
        if memo is not None:
            memo[key] = _IN_PROGRESS
        return "frame", (key, regions, tokens, merges_left, entry_steps)

    try:
        kind, payload = enter(pos0.regions, pos0.tokens, merge_cap, [])
    except _BudgetExceeded:
        return Verdict("unknown", nodes=nodes)
    if kind == "won":
        return Verdict("won", certificate=tuple(payload), nodes=nodes)
    if kind == "dead":
        return Verdict("not_winnable", nodes=nodes)

    key, regions, tokens, merges_left, entry_steps = payload
    stack = [(key, entry_steps, children(regions, tokens, merges_left))]
    try:
        while stack:
            key, steps_here, it = stack[-1]
            advanced = False
            for nregions, ntokens, step, ml in it:
                res, payload = enter(nregions, ntokens, ml,
                                     steps_here + [step])
                if res == "won":
                    return Verdict("won", certificate=tuple(payload),
                                   nodes=nodes)
                if res == "frame":
                    k2, r2, t2, ml2, s2 = payload
                    stack.append((k2, s2, children(r2, t2, ml2)))
                    advanced = True
                    break
            if not advanced:
                if memo is not None:
                    memo[key] = _FAILED
                stack.pop()
    except _BudgetExceeded:
        return Verdict("unknown", nodes=nodes)
    if capped:
        return Verdict("merge_capped", nodes=nodes)
    return Verdict("not_winnable", nodes=nodes)


def solve_position(pos: Position, cfg: Optional[SolverConfig] = None) -> Verdict:
    """Search onward from an arbitrary position (used by hints).

    A currently-lost position reports kind 'lost' rather than 'doomed',
    since doom is a statement about the initial arrangement.
    """
    cfg = cfg or SolverConfig()
    st = status(pos)
    if st.lost:
        return Verdict("lost", witness=st.witness)
    e = pos.embedding
    policy = cfg.splitting_policy
    if policy is None:
        policy = MAXIMAL if pos.mode == TOP else DISCRETIONARY
    bare = Position(e, pos.mode, pos.regions, pos.tokens)
    if not (cfg.allow_merges and e.diagonal_identity):
        return _search(e, cfg, policy, bare, merge_cap=0)
    total = 0
    for cap in range(cfg.max_merges + 1):
        v = _search(e, cfg, policy, bare, merge_cap=cap)
        total += v.nodes
        if v.kind != "merge_capped":
            return Verdict(v.kind, v.witness, v.certificate, total)
    return Verdict("unknown", nodes=total)


def replay(e: Embedding, pi: WeylElement, steps,
           mode: Optional[str] = None):
    """Apply a certificate to the initial position; returns the final Status.

    Raises ReplayError at the first illegal step, so certificates are
    checkable independently of the search that produced them.
    """
    pos = initial_position(e, pi, mode)
    for idx, step in enumerate(steps):
        try:
            pos = apply_step(pos, step)
        except IllegalStepError as err:
            raise ReplayError(idx, err.reason) from None
    return status(pos)


def replay_position(e: Embedding, pi: WeylElement, steps,
                    mode: Optional[str] = None) -> Position:
    pos = initial_position(e, pi, mode)
    for idx, step in enumerate(steps):
        try:
            pos = apply_step(pos, step)
        except IllegalStepError as err:
            raise ReplayError(idx, err.reason) from None
    return pos
