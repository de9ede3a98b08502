import pytest

from csakit import csa
from csakit.hnn import HnnPresentation
from csakit.wpengine import (FreeByCyclicSpec, FreeProductCyclicsSpec,
                             FreeSpec, HnnSpec)
from csakit.words import shortlex_key


def test_ball_free_group():
    b1 = csa.ball(FreeSpec(2), 1)
    assert b1 == [(1,), (-1,), (2,), (-2,)]
    b2 = csa.ball(FreeSpec(2), 2)
    assert len(b2) == 4 + 12
    keys = [shortlex_key(w) for w in b2]
    assert keys == sorted(keys)


def test_ball_dedupes_through_normal_form():
    spec = FreeProductCyclicsSpec((2, 0))
    b2 = csa.ball(spec, 2)
    # x^-1 collapses onto x, x^2 onto the identity
    assert (-1,) not in b2
    assert (1, 1) not in b2
    assert (1,) in b2 and (1, 2) in b2


def test_falsify_csa_hits_and_misses():
    assert csa.falsify_csa(FreeSpec(2), 3) is None
    b12 = csa.bs_spec(1, 2)
    w = csa.falsify_csa(b12, 1)
    assert (w.a, w.v) == ((1,), (2,))
    assert csa.verify_csa_witness(w, b12)
    wf = csa.falsify_csa(FreeByCyclicSpec(), 1)
    assert (wf.a, wf.v) == ((2,), (1,))
    klein = HnnSpec(HnnPresentation(1, [(1,)], [(-1,)]))
    assert csa.falsify_csa(klein, 2) is not None


def test_witness_validators_reject_garbage():
    b12 = csa.bs_spec(1, 2)
    assert not csa.verify_csa_witness(csa.CsaWitness((), (2,)), b12)
    assert not csa.verify_csa_witness(csa.CsaWitness((1,), (1,)), b12)
    spec = FreeProductCyclicsSpec((2, 0))
    assert not csa.verify_ct_witness(
        csa.CtWitness((1,), (1,), (1,)), spec)


def test_falsify_ct():
    spec = FreeProductCyclicsSpec((2, 0))
    assert csa.falsify_ct(spec, 3) is None
    wit = csa.falsify_ct(FreeByCyclicSpec(), 3)
    assert wit is not None
    assert csa.verify_ct_witness(wit, FreeByCyclicSpec())


def test_obstacle_dinf():
    host = FreeProductCyclicsSpec((2, 0))
    good = csa.ObstacleWitness(csa.OBSTACLE_DINF,
                               {1: (1,), 2: (-2, 1, 2)}, radius=4)
    assert csa.verify_obstacle(good, host)
    bad = csa.ObstacleWitness(csa.OBSTACLE_DINF,
                              {1: (1,), 2: (1,)}, radius=3)
    assert not csa.verify_obstacle(bad, host)
    # relator fails: y has infinite order
    bad2 = csa.ObstacleWitness(csa.OBSTACLE_DINF,
                               {1: (1,), 2: (2,)}, radius=2)
    assert not csa.verify_obstacle(bad2, host)


def test_obstacle_calb():
    spec = FreeByCyclicSpec()
    good = csa.ObstacleWitness(
        csa.OBSTACLE_CALB, {1: (3,), 2: (1, 3, -1), 3: (2,)}, radius=3)
    assert csa.verify_obstacle(good, spec)
    # center image must commute with both free images
    bad = csa.ObstacleWitness(
        csa.OBSTACLE_CALB, {1: (3,), 2: (1, 3, -1), 3: (1,)}, radius=2)
    assert not csa.verify_obstacle(bad, spec)


def test_obstacle_b1n():
    host = csa.bs_spec(1, 3)
    good = csa.ObstacleWitness(csa.OBSTACLE_B1N, {1: (1,), 2: (-2,)},
                               radius=3, n=3)
    assert csa.verify_obstacle(good, host)
    bad = csa.ObstacleWitness(csa.OBSTACLE_B1N, {1: (1,), 2: (2,)},
                              radius=3, n=3)
    assert not csa.verify_obstacle(bad, host)
    with pytest.raises(ValueError):
        csa.verify_obstacle(
            csa.ObstacleWitness(csa.OBSTACLE_B1N, {1: (1,), 2: (2,)}),
            host)


def test_power_conj_identity_grid():
    for m in (1, 2, -2):
        for n in (2, 3):
            for i in (1, 2):
                assert csa.power_conj_identity(m, n, i)
    with pytest.raises(ValueError):
        csa.power_conj_identity(2, 3, 0)
    with pytest.raises(OverflowError):
        csa.power_conj_identity(10, 10, 4)
    with pytest.raises(ValueError):
        csa.bs_spec(0, 2)


def test_abelianization():
    assert csa.abelianization_one_relator((2, 1, 1, -2, -1, -1, -1), 2) == \
        ((), 1)
    assert csa.abelianization_one_relator(
        (2, 1, 1, -2, -1, -1, -1, -1), 2) == ((2,), 1)
    from csakit.words import commutator
    r = commutator(commutator((1,), (2,)), (2,))
    assert csa.abelianization_one_relator(r, 2) == ((), 2)
    assert csa.abelianization_one_relator((1, 1, 1), 1) == ((3,), 0)


def test_residually_p():
    assert csa.residually_p_obstruction(2, 3, 2)
    assert not csa.residually_p_obstruction(2, 4, 2)
    assert csa.residually_p_obstruction(2, 4, 3)
    assert not csa.residually_p_obstruction(3, 3, 3)
    assert csa.residually_p_obstruction(3, 3, 2)
    with pytest.raises(ValueError):
        csa.residually_p_obstruction(2, 3, 4)
    with pytest.raises(ValueError):
        csa.residually_p_obstruction(0, 3, 2)
