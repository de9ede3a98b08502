import random

import pytest

from csakit.errors import UnsupportedBaseError
from csakit.hnn import HnnPresentation
from csakit.wpengine import (FBC_D, FBC_X, FBC_Y, AmalgamSpec,
                             FreeByCyclicSpec, FreeProductCyclicsSpec,
                             FreeSpec, HnnSpec, canonical_key, commutes,
                             equal, fc_mul, fc_normal_form, fpc_normal_form,
                             is_trivial, num_generators)
from csakit.amalgam import AmalgamPresentation
from csakit.words import commutator, concat, conjugate, free_reduce, power


def rand_word(rng, rank=2, max_len=6):
    w = []
    for _ in range(rng.randrange(max_len + 1)):
        w.append(rng.choice([g * s for g in range(1, rank + 1)
                             for s in (1, -1)]))
    return tuple(w)


def test_num_generators():
    assert num_generators(FreeSpec(3)) == 3
    assert num_generators(FreeProductCyclicsSpec((2, 0))) == 2
    assert num_generators(FreeByCyclicSpec()) == 3
    assert num_generators(
        HnnSpec(HnnPresentation(1, [(1,)], [(1, 1)]))) == 2


def test_fpc_normal_form():
    orders = (2, 0)
    assert fpc_normal_form((1, 1), orders) == ()
    assert fpc_normal_form((1, 1, 1), orders) == ((1, 1),)
    assert fpc_normal_form((2, 2, 2), orders) == ((2, 3),)
    assert fpc_normal_form((2, 1, 1, 2), orders) == ((2, 2),)
    assert fpc_normal_form((1, 2, -2, 1), orders) == ()


def test_fpc_is_trivial():
    spec = FreeProductCyclicsSpec((2, 3))
    assert is_trivial((1, 1), spec)
    assert is_trivial((2, 2, 2), spec)
    assert not is_trivial((1, 2), spec)
    assert is_trivial(concat(power((1,), 2), power((2,), 3)), spec)


def test_fc_normal_form_basics():
    y = (FBC_Y,)
    d = (FBC_D,)
    x = (FBC_X,)
    spec = FreeByCyclicSpec()
    assert is_trivial(commutator(y, d), spec)
    assert is_trivial(commutator(commutator(x, y), y), spec)
    assert not is_trivial(commutator(x, y), spec)
    assert fc_normal_form(()) == ((), 0)
    assert fc_normal_form(y) == ((), 1)


def test_fc_commuting_conjugates():
    spec = FreeByCyclicSpec()
    y = (FBC_Y,)
    y1 = conjugate(y, (FBC_X,))
    y2 = conjugate(y, power((FBC_X,), 2))
    assert commutes(y, y1, spec)
    assert not commutes(y, y2, spec)
    assert commutes(y, (FBC_D,), spec)


def test_fc_mul_is_homomorphic():
    rng = random.Random(31)
    for _ in range(500):
        w1 = rand_word(rng, 3)
        w2 = rand_word(rng, 3)
        lhs = fc_normal_form(tuple(w1) + tuple(w2))
        rhs = fc_mul(fc_normal_form(w1), fc_normal_form(w2))
        assert lhs == rhs


def test_canonical_key_matches_triviality():
    rng = random.Random(37)
    specs = [FreeSpec(2), FreeProductCyclicsSpec((2, 0)),
             HnnSpec(HnnPresentation(1, [(1,)], [(1, 1)])),
             FreeByCyclicSpec(),
             AmalgamSpec(AmalgamPresentation(1, 1, [(1,)], [(1, 1)]))]
    for spec in specs:
        n = num_generators(spec)
        key_id = canonical_key((), spec)
        for _ in range(100):
            u = rand_word(rng, n)
            v = rand_word(rng, n)
            assert (canonical_key(u, spec) == key_id) == is_trivial(u, spec)
            same = canonical_key(u, spec) == canonical_key(v, spec)
            assert same == equal(u, v, spec)


def test_hnn_spec_relation():
    spec = HnnSpec(HnnPresentation(1, [(1,)], [(1, 1)]))
    # z^-1 x z = x^2
    assert equal((-2, 1, 2), (1, 1), spec)
    assert not equal((1,), (1, 1), spec)


def test_unsupported_spec():
    with pytest.raises(UnsupportedBaseError):
        is_trivial((1,), object())
