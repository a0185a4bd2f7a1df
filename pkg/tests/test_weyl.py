"""Weyl elements: parsing, actions, inversion sets, Bruhat order."""

import random

import pytest

from rootgame import (WeylParseError, all_elements, bruhat_leq, build_root_system,
                      compose, format_element, identity, inverse,
                      inversion_set, long_element, parse_element,
                      reduced_word, simple_reflection)


def names(roots):
    return sorted(r.name for r in roots)


def test_parse_one_line(a4):
    w = parse_element(a4, "21435")
    assert names(inversion_set(w)) == ["α_{1,2}", "α_{3,4}"]
    assert format_element(w) == "21435"


def test_parse_signed(b3):
    w = parse_element(b3, "-1,3,2")
    assert w.length() == 2
    assert names(inversion_set(w)) == ["γ_{2,3}", "γ°_{1}"]
    assert format_element(w) == "-1,3,2"


def test_parse_g2_identity(g2):
    w = parse_element(g2, "")
    assert w.length() == 0
    assert w.is_identity()


def test_parse_rejects(a4, b3, g2):
    d4 = build_root_system("D4")
    with pytest.raises(WeylParseError):
        parse_element(a4, "21434")
    with pytest.raises(WeylParseError):
        parse_element(a4, "-1,2,3,4,5")
    with pytest.raises(WeylParseError):
        parse_element(d4, "-1,2,3,4")
    with pytest.raises(WeylParseError):
        parse_element(g2, "13")
    with pytest.raises(WeylParseError):
        parse_element(b3, "1,2")


def test_inversion_rule_matches_pair_counting(a4):
    # Independent rule: alpha_{ij} inverted exactly when pi(i) > pi(j).
    rng = random.Random(7)
    perms = [tuple(rng.sample(range(1, 6), 5)) for _ in range(50)]
    for p in perms:
        w = parse_element(a4, ",".join(str(x) for x in p))
        expect = set()
        for i in range(1, 6):
            for j in range(i + 1, 6):
                if p[i - 1] > p[j - 1]:
                    expect.add(f"α_{{{i},{j}}}")
        assert {r.name for r in inversion_set(w)} == expect
        assert w.length() == len(expect)


def test_inversion_examples(a4, b2):
    w = parse_element(a4, "32154")
    assert names(inversion_set(w)) == ["α_{1,2}", "α_{1,3}", "α_{2,3}",
                                       "α_{4,5}"]
    r = parse_element(b2, "-1,2")
    assert names(inversion_set(r)) == ["γ°_{1}"]


def test_long_element(a4, b3, g2):
    for rs in (a4, b3, g2, build_root_system("D4"), build_root_system("D5"),
               build_root_system("C3"), build_root_system("A2xB2")):
        w0 = long_element(rs)
        assert w0.length() == rs.n
        assert compose(w0, w0).is_identity()


def test_compose_action_231(a2):
    w = parse_element(a2, "231")
    inv = names(inversion_set(w))
    assert inv == ["α_{1,3}", "α_{2,3}"]
    a13 = a2.root_by_name("α_{1,3}")
    _, sign = w.act(a13)
    assert sign < 0


def test_compose_inverse_random():
    rng = random.Random(20260808)
    for spec in ("A4", "B3", "D4", "G2", "A2xG2"):
        rs = build_root_system(spec)
        elems = all_elements(rs)
        for _ in range(1000 if spec == "A4" else 200):
            u = rng.choice(elems)
            assert compose(inverse(u), u).is_identity()
            assert compose(u, inverse(u)).is_identity()


def test_length_subadditive_and_w0_complement(b2, g2):
    for rs in (b2, g2, build_root_system("A3")):
        elems = all_elements(rs)
        w0 = long_element(rs)
        for u in elems:
            assert compose(w0, u).length() == rs.n - u.length()
            for v in elems:
                assert compose(u, v).length() <= u.length() + v.length()


def test_action_preserves_roots(b3):
    for w in random.Random(3).sample(all_elements(b3), 12):
        for r in b3.roots:
            img, sign = w.act(r)
            assert sign in (1, -1)
            f = b3.factors[img.component]
            assert f.norm2(img.vector) == f.norm2(r.vector)


def brute_bruhat(rs):
    """Independent Bruhat order: transitive closure of reflection covers."""
    from rootgame import reflection
    elems = all_elements(rs)
    idx = {w.data: i for i, w in enumerate(elems)}
    n = len(elems)
    leq = [[False] * n for _ in range(n)]
    for i in range(n):
        leq[i][i] = True
    covers = [[] for _ in range(n)]
    for i, w in enumerate(elems):
        for r in rs.roots:
            t = compose(w, reflection(rs, r))
            if t.length() == w.length() + 1:
                covers[i].append(idx[t.data])
    order = sorted(range(n), key=lambda i: -elems[i].length())
    for i in order:
        for j in covers[i]:
            for k in range(n):
                if leq[j][k]:
                    leq[i][k] = True
    return elems, idx, leq


@pytest.mark.parametrize("spec", ["A3", "B2", "G2"])
def test_bruhat_matches_brute_force(spec):
    rs = build_root_system(spec)
    elems, idx, leq = brute_bruhat(rs)
    for u in elems:
        for v in elems:
            assert bruhat_leq(u, v) == leq[idx[u.data]][idx[v.data]], \
                (format_element(u), format_element(v))


def test_bruhat_examples(a3):
    e = identity(a3)
    for v in all_elements(a3):
        assert bruhat_leq(e, v)
        assert bruhat_leq(v, v)
    assert bruhat_leq(parse_element(a3, "1324"), parse_element(a3, "4231"))
    assert bruhat_leq(parse_element(a3, "2143"), parse_element(a3, "3412"))


def test_reduced_word_reconstructs(b3, g2):
    for rs in (b3, g2):
        for w in all_elements(rs):
            word = reduced_word(w)
            assert len(word) == w.length()
            acc = identity(rs)
            for c, i in word:
                acc = compose(acc, simple_reflection(rs, c, i))
            assert acc == w


def test_format_parse_roundtrip(b3, g2):
    for rs in (b3, g2, build_root_system("A3xB2")):
        elems = all_elements(rs)
        for w in random.Random(5).sample(elems, min(20, len(elems))):
            assert parse_element(rs, format_element(w)) == w
