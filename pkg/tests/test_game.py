"""Positions, splitting, moves, merges, and status verdicts."""

import json

import pytest

from rootgame import (FREE, TOP, IllegalStepError, apply_merge, apply_move,
                      apply_step, build_embedding, initial_position,
                      is_splitting_subset, legal_merges, legal_moves,
                      parse_element, qualifying_splits, split,
                      split_maximally, status)
from rootgame.game import position_from_json


def rid(e, name):
    return e.target.root_by_name(name).id


def token_names(pos):
    rs = pos.embedding.target
    return sorted(rs.roots[i].name for i in pos.token_ids())


def pi_of(e, lit):
    return parse_element(e.target, lit)


def move_by_name(pos, name):
    """Apply the move for a named root in the unique region it changes."""
    e = pos.embedding
    beta = rid(e, name)
    hits = [r for b, r in legal_moves(pos) if b == beta]
    assert len(set(hits)) == 1, f"{name} is live in regions {hits}"
    return apply_move(pos, beta, hits[0])


def test_initial_position_figure(diag_a4_3):
    pos = initial_position(diag_a4_3, pi_of(diag_a4_3, "21435;32154;24153"))
    assert len(pos.regions) == 1
    assert pos.regions[0] == diag_a4_3.target.full_mask
    assert token_names(pos) == sorted([
        "c1:α_{1,2}", "c1:α_{3,4}",
        "c2:α_{1,2}", "c2:α_{1,3}", "c2:α_{2,3}", "c2:α_{4,5}",
        "c3:α_{1,3}", "c3:α_{2,3}", "c3:α_{2,5}", "c3:α_{4,5}"])
    assert pos.mode == TOP


def test_initial_position_branching(branch5):
    pos = initial_position(branch5, pi_of(branch5, "23154;-1,2"))
    assert token_names(pos) == sorted(
        ["c1:α_{1,3}", "c1:α_{2,3}", "c1:α_{4,5}", "c2:γ°_{1}"])


def test_initial_identity_wins_free():
    e = build_embedding("diag(id:A3,id:A3)")
    pos = initial_position(e, pi_of(e, "1234;1234"), mode=FREE)
    assert pos.tokens == 0
    assert status(pos).won


def test_initial_top_length_check(diag_a4_3):
    with pytest.raises(ValueError):
        initial_position(diag_a4_3, pi_of(diag_a4_3, "21435;12345;12345"),
                         mode=TOP)


def test_winning_example_moves(diag_a4_3):
    e = diag_a4_3
    pos = initial_position(e, pi_of(e, "21435;32154;24153"))
    pos = apply_move(pos, rid(e, "c2:α_{3,4}"), 0)
    copy2 = [n for n in token_names(pos) if n.startswith("c2:")]
    assert copy2 == ["c2:α_{1,2}", "c2:α_{1,4}", "c2:α_{2,4}", "c2:α_{3,5}"]
    pos = apply_move(pos, rid(e, "c1:α_{2,5}"), 0)
    copy1 = [n for n in token_names(pos) if n.startswith("c1:")]
    assert copy1 == ["c1:α_{1,5}", "c1:α_{3,4}"]
    st = status(pos)
    assert st.won
    # every square of the source board is covered exactly once
    images = sorted(e.phat[i] for i in pos.token_ids())
    assert images == list(range(e.source.n))


def test_branching_single_move_win(branch5):
    e = branch5
    pos = initial_position(e, pi_of(e, "23154;-1,2"))
    assert not status(pos).won
    pos = apply_move(pos, rid(e, "c2:γ°_{2}"), 0)
    assert token_names(pos) == sorted(
        ["c1:α_{1,3}", "c1:α_{2,3}", "c1:α_{4,5}", "c2:γ'_{1,2}"])
    assert status(pos).won


def test_move_with_highest_root_is_noop(diag_a4_3):
    e = diag_a4_3
    pos = initial_position(e, pi_of(e, "21435;32154;24153"))
    pos2 = apply_move(pos, rid(e, "c1:α_{1,5}"), 0)
    assert pos2.tokens == pos.tokens


def test_doomed_witness(diag_a4_3):
    e = diag_a4_3
    pos = initial_position(e, pi_of(e, "23154;41235;13542"))
    st = status(pos)
    assert st.lost
    witness_sources = {e.source.roots[e.phat[i]].name for i in st.witness}
    assert witness_sources == {"α_{1,3}", "α_{1,4}", "α_{1,5}",
                               "α_{2,5}", "α_{3,5}", "α_{4,5}"}
    inside = [i for i in pos.token_ids() if (1 << i) &
              sum(1 << j for j in st.witness)]
    assert len(inside) == 7  # seven tokens in six squares


def test_doomed_by_zero_square():
    e = build_embedding("so-in-sl:6")
    pos = initial_position(e, parse_element(e.target, "612345"), mode=FREE)
    st = status(pos)
    assert st.lost


def test_splitting_subset_examples():
    d2 = build_embedding("diag(id:A2,id:A2)")
    full_copy1 = [r.id for r in d2.target.roots if r.component == 0]
    assert not is_splitting_subset(d2, full_copy1)
    both_top = [d2.target.root_by_name("c1:α_{1,3}").id,
                d2.target.root_by_name("c2:α_{1,3}").id]
    assert is_splitting_subset(d2, both_top)
    e8 = build_embedding("so-in-sl:8")
    a18 = e8.target.root_by_name("α_{1,8}")
    assert is_splitting_subset(e8, [a18.id])
    assert is_splitting_subset(e8, [r.id for r in e8.target.roots])
    # independent check of both conditions on every candidate subset
    roots = list(d2.target.roots)
    for bits in range(1 << len(roots)):
        ids = [r.id for k, r in enumerate(roots) if bits >> k & 1]
        mask = sum(1 << i for i in ids)
        ideal = d2.target.is_ideal_mask(mask)
        img = {d2.phat[i] for i in ids}
        comp = {d2.phat[r.id] for r in roots if not bits >> r.id & 1}
        disjoint = not (img & comp - {None})
        want = ideal and (not (img & comp) or (img & comp) <= {None})
        assert is_splitting_subset(d2, ids) == want


def test_split_and_idempotence(diag_a4_3):
    e = diag_a4_3
    pos = initial_position(e, pi_of(e, "21435;32154;24153"))
    top = [r.id for r in e.target.roots
           if e.source.roots[e.phat[r.id]].name == "α_{1,5}"]
    pos2 = split(pos, top)
    assert len(pos2.regions) == 2
    pos3 = split(pos2, top)
    assert pos3.regions == pos2.regions
    with pytest.raises(IllegalStepError) as err:
        split(pos, [rid(e, "c1:α_{1,2}")])
    assert "raising" in str(err.value)


def test_qualifying_splits_balance(diag_a4_3):
    e = diag_a4_3
    pos = initial_position(e, pi_of(e, "13425;41325;14352"))
    quals = qualifying_splits(pos)
    for mask in quals:
        nimg = len({e.phat[i] for i in e.target.mask_ids(mask)} - {None})
        assert (pos.tokens & mask).bit_count() == nimg
    # brute force: every splitting subset meeting the balance is present
    count = 0
    for mask, nimg in e.splitting_masks():
        if (pos.tokens & mask).bit_count() == nimg:
            count += 1
            assert mask in quals
    assert count == len(quals)


def test_qualifying_splits_small_diag():
    # Derived by enumerating splitting subsets and filtering the balance
    # equality; for (s1; s2) only the trivial empty subset balances.
    e = build_embedding("diag(id:A2,id:A2)")
    pos = initial_position(e, parse_element(e.target, "213;132"), mode=FREE)
    expected = []
    for mask, nimg in e.splitting_masks():
        if (pos.tokens & mask).bit_count() == nimg:
            expected.append(mask)
    assert sorted(qualifying_splits(pos)) == sorted(expected) == [0]


def test_general_example_script(diag_a4_3):
    # A three-move win with maximal splitting between moves; the last
    # move is forced to act inside one region, which is the point of
    # splitting first.
    e = diag_a4_3
    pos = initial_position(e, pi_of(e, "13425;41325;14352"))
    pos = split_maximally(pos)
    assert len(pos.regions) > 1
    pos = move_by_name(pos, "c1:α_{1,2}")
    pos = split_maximally(pos)
    pos = move_by_name(pos, "c2:α_{4,5}")
    pos = split_maximally(pos)
    pos = move_by_name(pos, "c2:α_{2,3}")
    assert status(pos).won


def test_move_errors(diag_a4_3):
    e = diag_a4_3
    pos = initial_position(e, pi_of(e, "21435;32154;24153"))
    with pytest.raises(IllegalStepError):
        apply_move(pos, 999, 0)
    with pytest.raises(IllegalStepError):
        apply_move(pos, 0, 5)


def test_merge_rules():
    e = build_embedding("diag(id:A2,id:A2)")
    pos = initial_position(e, parse_element(e.target, "231;213"))
    # copies have disjoint token sets, so merging 2 into 1 is legal
    pos2 = apply_merge(pos, 0, 1, 2)
    assert pos2.tokens.bit_count() == pos.tokens.bit_count()
    assert all(e.target.roots[i].component == 0 for i in pos2.token_ids())
    # merging back moves every token to copy 2
    pos3 = apply_merge(pos2, 0, 2, 1)
    assert all(e.target.roots[i].component == 1 for i in pos3.token_ids())
    # identical token sets collide square by square
    pos_same = initial_position(e, parse_element(e.target, "231;231"),
                                mode=FREE)
    with pytest.raises(IllegalStepError):
        apply_merge(pos_same, 0, 1, 2)
    # merging an empty copy is a legal no-op
    pos_empty = initial_position(e, parse_element(e.target, "231;123"),
                                 mode=FREE)
    pos4 = apply_merge(pos_empty, 0, 1, 2)
    assert pos4.tokens == pos_empty.tokens


def test_merge_requires_diagonal(branch5):
    pos = initial_position(branch5, pi_of(branch5, "23154;-1,2"))
    with pytest.raises(IllegalStepError):
        apply_merge(pos, 0, 1, 2)
    assert legal_merges(pos) == []


def test_status_open(diag_a4_3):
    pos = initial_position(diag_a4_3, pi_of(diag_a4_3, "21435;32154;24153"))
    st = status(pos)
    assert st.verdict == "open"
    assert st.witness is None


def test_token_count_invariant_under_steps(diag_a4_3):
    e = diag_a4_3
    pos = initial_position(e, pi_of(e, "13425;41325;14352"))
    n = pos.tokens.bit_count()
    pos = split_maximally(pos)
    assert pos.tokens.bit_count() == n
    for beta, region in legal_moves(pos)[:5]:
        nxt = apply_move(pos, beta, region)
        assert nxt.tokens.bit_count() == n


def test_json_round_trip(diag_a4_3):
    e = diag_a4_3
    pos = initial_position(e, pi_of(e, "13425;41325;14352"))
    pos = split_maximally(pos)
    pos = move_by_name(pos, "c1:α_{1,2}")
    blob = json.dumps(pos.to_json())
    back = position_from_json(json.loads(blob),
                              embedding_builder=lambda s: e)
    assert back.tokens == pos.tokens
    assert back.regions == pos.regions
    assert back.history == pos.history
    # histories replay to the same position
    replayed = initial_position(e, pi_of(e, "13425;41325;14352"))
    for step in back.history:
        replayed = apply_step(replayed, step)
    assert replayed.tokens == pos.tokens and replayed.regions == pos.regions


def test_render_contains_tokens(diag_a4_3):
    from rootgame.board import render_position
    pos = initial_position(diag_a4_3, pi_of(diag_a4_3, "21435;32154;24153"))
    text = render_position(pos)
    assert text.count("●") == 10
