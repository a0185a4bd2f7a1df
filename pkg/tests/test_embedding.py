"""Embedding constructors: the root map tables and the restriction map."""

import pytest

from rootgame import (EmbeddingSpecError, build_embedding,
                      raw_table_embedding)

# The SL(8) -> SO(8) table, square for square: image name by (i, j).
DA_TABLE = {
    (1, 2): "β_{3,4}", (1, 3): "β_{2,4}", (1, 4): "β_{1,4}",
    (1, 5): "β'_{1,4}", (1, 6): "β'_{2,4}", (1, 7): "β'_{3,4}", (1, 8): None,
    (2, 3): "β_{2,3}", (2, 4): "β_{1,3}", (2, 5): "β'_{1,3}",
    (2, 6): "β'_{2,3}", (2, 7): None, (2, 8): "β'_{3,4}",
    (3, 4): "β_{1,2}", (3, 5): "β'_{1,2}", (3, 6): None,
    (3, 7): "β'_{2,3}", (3, 8): "β'_{2,4}",
    (4, 5): None, (4, 6): "β'_{1,2}", (4, 7): "β'_{1,3}", (4, 8): "β'_{1,4}",
    (5, 6): "β_{1,2}", (5, 7): "β_{1,3}", (5, 8): "β_{1,4}",
    (6, 7): "β_{2,3}", (6, 8): "β_{2,4}",
    (7, 8): "β_{3,4}",
}

# The SL(7) -> SO(7) table.
BA_TABLE = {
    (1, 2): "γ_{2,3}", (1, 3): "γ_{1,3}", (1, 4): "γ°_{3}",
    (1, 5): "γ'_{1,3}", (1, 6): "γ'_{2,3}", (1, 7): None,
    (2, 3): "γ_{1,2}", (2, 4): "γ°_{2}", (2, 5): "γ'_{1,2}",
    (2, 6): None, (2, 7): "γ'_{2,3}",
    (3, 4): "γ°_{1}", (3, 5): None, (3, 6): "γ'_{1,2}", (3, 7): "γ'_{1,3}",
    (4, 5): "γ°_{1}", (4, 6): "γ°_{2}", (4, 7): "γ°_{3}",
    (5, 6): "γ_{1,2}", (5, 7): "γ_{1,3}",
    (6, 7): "γ_{2,3}",
}


@pytest.mark.parametrize("spec,table,n", [
    ("so-in-sl:8", DA_TABLE, 8),
    ("so-in-sl:7", BA_TABLE, 7),
])
def test_so_in_sl_tables(spec, table, n):
    e = build_embedding(spec)
    assert e.target.spec == f"A{n - 1}"
    for (i, j), expect in table.items():
        rid = e.target.root_by_name(f"α_{{{i},{j}}}").id
        img = e.phat_root(rid)
        if expect is None:
            assert img is None, (i, j)
        else:
            assert img is not None and img.name == expect, (i, j)


@pytest.mark.parametrize("n,zeros", [(8, 4), (7, 3), (6, 3), (5, 2)])
def test_so_in_sl_zero_count(n, zeros):
    e = build_embedding(f"so-in-sl:{n}")
    assert sum(1 for v in e.phat if v is None) == zeros


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_so_in_sl_antidiagonal_symmetry(n):
    e = build_embedding(f"so-in-sl:{n}")
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            a = e.target.root_by_name(f"α_{{{i},{j}}}")
            fi, fj = n + 1 - j, n + 1 - i
            b = e.target.root_by_name(f"α_{{{fi},{fj}}}")
            assert e.phat[a.id] == e.phat[b.id]


def test_sources():
    assert build_embedding("so-in-sl:8").source.spec == "D4"
    assert build_embedding("so-in-sl:7").source.spec == "B3"
    assert build_embedding("so-in-sl:6").source.spec == "D3"
    assert build_embedding("so-in-sl:5").source.spec == "B2"
    assert build_embedding("slk-in-sln:3,5").source.spec == "A2"
    assert build_embedding("sl3-in-g2").source.spec == "A2"


def test_slk_in_sln():
    e = build_embedding("slk-in-sln:3,5")
    for r in e.target.roots:
        i, j = [k + 1 for k, c in enumerate(r.vector) if c]
        img = e.phat_root(r.id)
        if j <= 3:
            assert img is not None and img.name == r.name
        else:
            assert img is None


def test_sl3_in_g2():
    e = build_embedding("sl3-in-g2")
    by_name = {r.name: e.phat_root(r.id) for r in e.target.roots}
    assert by_name["1*s+0*l"] is None
    assert by_name["1*s+1*l"] is None
    assert by_name["2*s+1*l"] is None
    assert by_name["0*s+1*l"].name == "α_{1,2}"
    assert by_name["3*s+1*l"].name == "α_{2,3}"
    assert by_name["3*s+2*l"].name == "α_{1,3}"


def test_diag_identity():
    e = build_embedding("diag(id:A4,id:A4,id:A4)")
    assert e.diagonal_identity
    assert e.target.spec == "A4xA4xA4"
    for r in e.target.roots:
        img = e.phat_root(r.id)
        assert img is not None
        assert r.name.endswith(img.name)


def test_diag_requires_shared_source():
    with pytest.raises(EmbeddingSpecError):
        build_embedding("diag(id:A4,id:A3)")
    with pytest.raises(EmbeddingSpecError):
        build_embedding("diag(sl3-in-g2,id:A3)")


def test_spec_errors():
    for bad in ("", "diag()", "id:", "so-in-sl:x", "slk-in-sln:5",
                "frobnicate:A2", "diag(id:A2", "so-in-sl:3"):
        with pytest.raises((EmbeddingSpecError, Exception)):
            build_embedding(bad)


def test_phat_injective_witnesses():
    e8 = build_embedding("so-in-sl:8")
    ok, wit = e8.phat_injective(0)
    assert ok and wit is None
    a18 = e8.target.root_by_name("α_{1,8}")
    ok, wit = e8.phat_injective(1 << a18.id)
    assert not ok and wit == ("zero", a18.id)
    d = build_embedding("diag(id:A2,id:A2)")
    r1 = d.target.root_by_name("c1:α_{1,2}")
    r2 = d.target.root_by_name("c2:α_{1,2}")
    ok, wit = d.phat_injective(1 << r1.id | 1 << r2.id)
    assert not ok and wit == ("collision", r1.id, r2.id)


def test_restriction_consistency():
    # Wherever the root map is nonzero the restriction must equal it as a
    # weight, and elsewhere it must miss the positive roots entirely.
    for spec in ("so-in-sl:5", "so-in-sl:6", "so-in-sl:7", "so-in-sl:8",
                 "slk-in-sln:2,4", "sl3-in-g2", "diag(so-in-sl:5,id:B2)"):
        e = build_embedding(spec)
        offs = e._source_offsets()
        for r in e.target.roots:
            img = e.weight_restriction(r.component, r.vector)
            s = e.phat[r.id]
            if s is None:
                found = None
                for c, f in enumerate(e.source.factors):
                    vec = tuple(img[offs[c] + k] for k in range(f.dim))
                    if all(x.denominator == 1 for x in vec):
                        cand = e.source.root_by_vector(
                            c, tuple(int(x) for x in vec))
                        rest = [img[t] for t in range(len(img))
                                if not offs[c] <= t < offs[c] + f.dim]
                        if cand is not None and all(x == 0 for x in rest):
                            found = cand
                assert found is None
            else:
                assert img == e._source_vec(e.source.roots[s])


def test_raw_table():
    from rootgame import branching_expand, parse_element
    ref = build_embedding("sl3-in-g2")
    table = {r.id: (0 if ref.phat[r.id] is None else ref.phat[r.id] + 1)
             for r in ref.target.roots}
    raw = raw_table_embedding("A2", "G2", table)
    assert raw.phat == ref.phat
    assert raw.splitting_masks() == ref.splitting_masks()
    with pytest.raises(ValueError):
        raw_table_embedding("A2", "G2", {0: 99})
    with pytest.raises(ValueError):
        branching_expand(raw, parse_element(raw.target, "1"))


def test_describe_mentions_zero_squares(so7):
    text = so7.describe()
    assert "γ°_{1}" in text and "." in text


def test_identity_atom_g2_copies():
    e = build_embedding("diag(id:G2,id:G2,id:G2)")
    assert e.diagonal_identity
    for r in e.target.roots:
        img = e.phat_root(r.id)
        assert img is not None
        assert r.name.endswith(img.name)
    ok, _ = e.phat_injective(sum(1 << r.id for r in e.target.roots
                                 if r.component == 2))
    assert ok
