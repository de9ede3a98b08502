import random

import pytest

from csakit.amalgam import (AmalgamPresentation, GogEdge, GraphOfGroups,
                            amalgam_csa_verdict_abelian,
                            fundamental_group_presentation, gog_predicates,
                            malnormal_persistence_check)
from csakit.errors import UnsupportedShapeError
from csakit.hnn import britton_reduce, normal_form
from csakit.words import free_reduce, power


def test_defining_relation_holds():
    P = AmalgamPresentation(2, 2, [(1,)], [(1, 1)])
    # a (left) equals its amalgamated image c^2 (right) in the extension
    left = P.embed_left((1,))
    right = P.embed_right((1, 1))
    diff = britton_reduce(left.mul(right.inv()), P.extension)
    assert diff.t_length == 0 and not diff.head


def test_alternating_word_nontrivial():
    P = AmalgamPresentation(2, 2, [(1,)], [(1, 1)])
    # g1 = b (not in A), h1 = d (not in B): t-length 2 after reduction
    w = P.embed((2,)).mul(P.embed_right((2,)))
    r = britton_reduce(w, P.extension)
    assert r.t_length == 2


def test_identity_maps_to_identity():
    P = AmalgamPresentation(2, 2, [(1,)], [(1, 1)])
    assert P.is_identity(())
    assert P.is_identity((1, -1))


def test_embedding_injective_on_syllable_forms():
    """Alternating products b^i d^j ... with distinct exponent sequences
    are distinct amalgam elements; their TWord normal forms must differ."""
    P = AmalgamPresentation(2, 2, [(1,)], [(1, 1)])
    rng = random.Random(13)
    seqs = set()
    while len(seqs) < 100:
        seqs.add(tuple(rng.choice((1, 2, 3, -1, -2))
                       for _ in range(rng.randrange(1, 5))))
    keys = set()
    for seq in seqs:
        word = []
        for pos, e in enumerate(seq):
            letter = 2 if pos % 2 == 0 else 4  # b then d, alternating
            word.extend(power((letter,), e))
        tw = P.embed(tuple(word))
        keys.add(normal_form(tw, P.extension))
    assert len(keys) == len(seqs)


def test_csa_verdicts():
    assert amalgam_csa_verdict_abelian(
        AmalgamPresentation(2, 2, [(1,)], [(1, 1)])) == \
        ("csa*", "Thm-amalgiff")
    assert amalgam_csa_verdict_abelian(
        AmalgamPresentation(2, 2, [(1, 1)], [(1, 1)])) == \
        ("not-csa", "Prop-MustMax")
    assert amalgam_csa_verdict_abelian(
        AmalgamPresentation(2, 2, [(1,)], [(1,)])) == \
        ("csa*", "Thm-amalgiff")
    with pytest.raises(ValueError):
        amalgam_csa_verdict_abelian(
            AmalgamPresentation(2, 2, [(1,), (2,)], [(1,), (2,)]))


def _gog(edges, **vertices):
    return GraphOfGroups(dict(vertices), edges)


def test_gog_quasi_malnormal_abelian():
    g = _gog([GogEdge("u", "v", ((1,),), ((1,),))], u=2, v=2)
    rep = gog_predicates(g)
    assert rep.quasi_malnormal is True
    assert rep.malnormal is True
    g2 = _gog([GogEdge("u", "v", ((1, 1),), ((1,),))], u=2, v=2)
    rep2 = gog_predicates(g2)
    assert rep2.quasi_malnormal is False


def test_gog_loop_separated():
    g = _gog([GogEdge("u", "u", ((1,),), ((1, 1),))], u=2)
    rep = gog_predicates(g)
    assert rep.separated is False


def test_gog_badtree_not_malnormal():
    g = _gog([GogEdge("u", "v", ((1,),), ((1, 1),)),
              GogEdge("u", "w", ((1,),), ((1, 1),))],
             u=2, v=2, w=2)
    rep = gog_predicates(g)
    assert rep.malnormal is False
    assert rep.quasi_malnormal is True
    tree = fundamental_group_presentation(g)
    assert tree.csa == "not-csa"
    assert tree.citation == "Prop-BadTree"


def test_tree_verdicts():
    single = _gog([GogEdge("u", "v", ((1,),), ((1, 1),))], u=2, v=2)
    tree = fundamental_group_presentation(single)
    assert tree.csa == "csa*" and tree.citation == "Thm-amalgiff"
    # matches the direct amalgam verdict
    P = AmalgamPresentation(2, 2, [(1,)], [(1, 1)])
    assert amalgam_csa_verdict_abelian(P)[0] == tree.csa

    both_max = _gog([GogEdge("u", "v", ((1,),), ((1,),)),
                     GogEdge("u", "w", ((2,),), ((1,),))],
                    u=2, v=2, w=2)
    assert fundamental_group_presentation(both_max).csa == "csa*"

    line = _gog([GogEdge("u", "v", ((1,),), ((1, 1),)),
                 GogEdge("v", "w", ((2,),), ((1, 1),))],
                u=2, v=2, w=2)
    t3 = fundamental_group_presentation(line)
    assert t3.csa == "csa*" and t3.citation == "Thm-GraphGroups"


def test_tree_presentation_relators():
    single = _gog([GogEdge("u", "v", ((1,),), ((1, 1),))], u=2, v=2)
    tree = fundamental_group_presentation(single)
    assert tree.generator_names == ["u_1", "u_2", "v_1", "v_2"]
    assert tree.relators == [free_reduce((1, -3, -3))]


def test_non_tree_rejected():
    loop = _gog([GogEdge("u", "u", ((1,),), ((2,),))], u=2)
    with pytest.raises(UnsupportedShapeError):
        fundamental_group_presentation(loop)


def test_persistence_checks():
    P = AmalgamPresentation(2, 2, [(1,)], [(1,)])
    ok, wit = malnormal_persistence_check(P, [(1,), (2,)], radius=2)
    assert ok and wit is None
    ok2, _ = malnormal_persistence_check(P, [(1,)], radius=3)
    assert ok2
    ok3, _ = malnormal_persistence_check(P, [], radius=2)
    assert ok3
    with pytest.raises(ValueError):
        malnormal_persistence_check(
            AmalgamPresentation(2, 2, [(1, 1)], [(1,)]), [(1,)])
