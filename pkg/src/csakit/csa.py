"""Bounded falsifiers for the CSA and commutative-transitivity properties,
obstacle-witness verification, the power-conjugation identity in
Baumslag-Solitar groups, and the residually-p obstruction.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import wpengine, words
from .errors import CsakitError, UnsupportedBaseError
from .hnn import HnnPresentation
from .wpengine import (HnnSpec, canonical_key, commutes, is_trivial,
                       num_generators)
from .words import (commutator, concat, conjugate, free_reduce, gcd_many,
                    inverse, power, shortlex_key)

MAX_EXPONENT = 100_000


# -- ball enumeration -------------------------------------------------------


def ball(spec, radius, dedupe=True):
    """Freely reduced words of length <= radius over the displayed
    generators, in shortlex order, deduplicated through the group's
    canonical form when one exists.  The identity is omitted."""
    n = num_generators(spec)
    letters = [l for g in range(1, n + 1) for l in (g, -g)]
    out = []
    seen = {canonical_key((), spec)} if dedupe else set()
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for l in letters:
                if w and w[-1] == -l:
                    continue
                nxt.append(w + (l,))
        for w in nxt:
            if dedupe:
                key = canonical_key(w, spec)
                if key in seen:
                    continue
                seen.add(key)
            out.append(w)
        frontier = nxt
    return out


# -- CSA / CT falsifiers ----------------------------------------------------


@dataclass
class CsaWitness:
    a: tuple
    v: tuple


@dataclass
class CtWitness:
    a: tuple
    b: tuple
    c: tuple


def _search_context(elements, spec):
    """Indexed commutation tests over a fixed element list; HNN specs get
    a fast path working on pre-reduced TWords."""
    if isinstance(spec, HnnSpec):
        from .hnn import TWord, britton_reduce
        P = spec.pres
        t = spec.t_letter
        tws = [britton_reduce(TWord.from_word(w, t), P) for w in elements]
        invs = [tw.inv() for tw in tws]

        def is_id(tw):
            r = britton_reduce(tw, P)
            return r.t_length == 0 and not r.head

        def commutes_idx(i, j):
            return is_id(tws[i].mul(tws[j]).mul(invs[i]).mul(invs[j]))

        def conj_commutes(i, j):
            z = britton_reduce(invs[j].mul(tws[i]).mul(tws[j]), P)
            return is_id(tws[i].mul(z).mul(invs[i]).mul(z.inv()))

        return commutes_idx, conj_commutes

    def commutes_idx(i, j):
        return commutes(elements[i], elements[j], spec)

    def conj_commutes(i, j):
        return commutes(elements[i],
                        conjugate(elements[i], elements[j]), spec)

    return commutes_idx, conj_commutes


def _cached_pairwise(commutes_idx):
    cache = {}

    def comm(i, j):
        k = (i, j) if i < j else (j, i)
        r = cache.get(k)
        if r is None:
            r = cache[k] = commutes_idx(i, j)
        return r

    return comm


def verify_csa_witness(w: CsaWitness, spec) -> bool:
    if is_trivial(w.a, spec):
        return False
    return commutes(w.a, conjugate(w.a, w.v), spec) \
        and not commutes(w.a, w.v, spec)


def verify_ct_witness(w: CtWitness, spec) -> bool:
    if any(is_trivial(x, spec) for x in (w.a, w.b, w.c)):
        return False
    return commutes(w.a, w.b, spec) and commutes(w.b, w.c, spec) \
        and not commutes(w.a, w.c, spec)


def falsify_csa(spec, radius=3) -> Optional[CsaWitness]:
    """First pair (a, v) in shortlex order with a != 1, [a, a^v] = 1 and
    [a, v] != 1.  A hit disproves CSA; a miss proves nothing."""
    elements = [w for w in ball(spec, radius) if not is_trivial(w, spec)]
    commutes_idx, conj_commutes = _search_context(elements, spec)
    comm = _cached_pairwise(commutes_idx)
    index = {w: i for i, w in enumerate(elements)}
    # (a, v) is a hit iff (a, v^-1) is, so skip v whose literal inverse
    # occurs earlier in the scan
    skip = [index.get(inverse(w), len(elements)) < i
            for i, w in enumerate(elements)]
    for i in range(len(elements)):
        for j in range(len(elements)):
            if i == j or skip[j] or comm(i, j):
                continue
            if conj_commutes(i, j):
                return CsaWitness(elements[i], elements[j])
    return None


def falsify_ct(spec, radius=3) -> Optional[CtWitness]:
    """First triple with [a,b] = 1, [b,c] = 1 but [a,c] != 1."""
    elements = [w for w in ball(spec, radius) if not is_trivial(w, spec)]
    commutes_idx, _ = _search_context(elements, spec)
    comm = _cached_pairwise(commutes_idx)
    pairs = {i: [j for j in range(len(elements))
                 if j != i and comm(i, j)]
             for i in range(len(elements))}
    for i, a in enumerate(elements):
        for j in pairs[i]:
            for k in pairs[j]:
                if k != i and not comm(i, k):
                    return CtWitness(a, elements[j], elements[k])
    return None


# -- obstacle groups --------------------------------------------------------

OBSTACLE_DINF = "dinf"     # Z/2 * Z/2, generators u=1, w=2
OBSTACLE_CALB = "calb"     # F2 x Z, generators p=1, q=2, central z=3
OBSTACLE_B1N = "b1n"       # <x,y | y x y^-1 = x^n>, x=1, y=2


@dataclass
class ObstacleWitness:
    kind: str
    images: dict          # obstacle generator index -> host word
    radius: int = 3
    n: Optional[int] = None  # for b1n


def _obstacle_ball(kind, radius, n=None):
    """Pairwise distinct obstacle elements (as words over obstacle
    generators) of length <= radius, identity included."""
    if kind == OBSTACLE_DINF:
        out = [()]
        for first in (1, 2):
            w = []
            g = first
            for _ in range(radius):
                w.append(g)
                out.append(tuple(w))
                g = 3 - g
        return out
    if kind == OBSTACLE_CALB:
        out = []
        seen = set()
        for w in _raw_ball(3, radius):
            f2 = free_reduce([l for l in w if abs(l) != 3])
            m = sum(1 if l == 3 else -1 for l in w if abs(l) == 3)
            key = (f2, m)
            if key not in seen:
                seen.add(key)
                out.append(w)
        return out
    if kind == OBSTACLE_B1N:
        if n is None or n == 0:
            raise ValueError("b1n obstacle needs a nonzero n")
        out = []
        seen = set()
        for w in _raw_ball(2, radius):
            q, k = Fraction(0), 0
            for l in w:
                if abs(l) == 2:
                    k += 1 if l > 0 else -1
                else:
                    # y^k x y^-k acts as adding n^k
                    q += (1 if l > 0 else -1) * Fraction(n) ** k
            key = (q, k)
            if key not in seen:
                seen.add(key)
                out.append(w)
        return out
    raise ValueError(f"unknown obstacle kind {kind!r}")


def _raw_ball(num_gens, radius):
    letters = [l for g in range(1, num_gens + 1) for l in (g, -g)]
    out = [()]
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for l in letters:
                if w and w[-1] == -l:
                    continue
                nxt.append(w + (l,))
        out.extend(nxt)
        frontier = nxt
    return out


def _obstacle_relators(kind, n=None):
    if kind == OBSTACLE_DINF:
        return [(1, 1), (2, 2)]
    if kind == OBSTACLE_CALB:
        return [commutator((3,), (1,)), commutator((3,), (2,))]
    if kind == OBSTACLE_B1N:
        if n is None or n == 0:
            raise ValueError("b1n obstacle needs a nonzero n")
        return [concat((2,), (1,), (-2,), power((1,), -n))]
    raise ValueError(f"unknown obstacle kind {kind!r}")


def _map_word(word, images):
    out = []
    for l in word:
        img = images[abs(l)]
        out.extend(img if l > 0 else inverse(img))
    return free_reduce(out)


def verify_obstacle(witness: ObstacleWitness, host) -> bool:
    """Check (i) every obstacle relator maps to 1 in the host and (ii)
    distinct obstacle elements of length <= radius stay distinct.
    Bounded-radius evidence of an embedding, not a proof."""
    images = witness.images
    for rel in _obstacle_relators(witness.kind, witness.n):
        if not is_trivial(_map_word(rel, images), host):
            return False
    ball_words = _obstacle_ball(witness.kind, witness.radius, witness.n)
    host_images = [_map_word(w, images) for w in ball_words]
    keys = [canonical_key(w, host) for w in host_images]
    if all(k is not None for k in keys):
        return len(set(keys)) == len(keys)
    for i in range(len(host_images)):
        for j in range(i + 1, len(host_images)):
            if is_trivial(concat(host_images[i], inverse(host_images[j])),
                          host):
                return False
    return True


# -- Baumslag-Solitar arithmetic -------------------------------------------


def bs_spec(m, n):
    """B_{m,n} = <x, z | z^-1 x^m z = x^n> as an HNN extension of Z;
    displayed generators x=1, z=2."""
    if m == 0 or n == 0:
        raise ValueError("mn must be nonzero")
    return HnnSpec(HnnPresentation(1, [power((1,), m)], [power((1,), n)]))


def power_conj_identity(m, n, i):
    """Check x^((mn)^i) = (x^(m^(2i)))^(z^i) = (x^(n^(2i)))^(z^-i)
    in B_{m,n}."""
    if i < 1:
        raise ValueError("i must be >= 1")
    exps = (abs(m * n) ** i, abs(m) ** (2 * i), abs(n) ** (2 * i))
    if max(exps) > MAX_EXPONENT:
        raise OverflowError("exponent out of safe range")
    spec = bs_spec(m, n)
    x, z = (1,), (2,)
    lhs = power(x, (m * n) ** i)
    r1 = conjugate(power(x, m ** (2 * i)), power(z, i))
    r2 = conjugate(power(x, n ** (2 * i)), power(z, -i))
    return wpengine.equal(lhs, r1, spec) and wpengine.equal(lhs, r2, spec)


# -- abelianization and the residually-p obstruction ------------------------


def abelianization_one_relator(relator, num_gens):
    """Invariant factors of Z^num_gens modulo the exponent-sum row of the
    relator: (torsion_orders, free_rank)."""
    sums = [0] * num_gens
    for l in free_reduce(relator, num_gens):
        sums[abs(l) - 1] += 1 if l > 0 else -1
    d = gcd_many(sums)
    if d == 0:
        return (), num_gens
    torsion = (d,) if d > 1 else ()
    return torsion, num_gens - 1


def _is_prime(p):
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def residually_p_obstruction(m, n, p):
    """True iff the closed-form criterion blocks residual p-ness of
    B_{m,n}: p does not divide n - m (or, when m = n, p does not
    divide n)."""
    if m == 0 or n == 0:
        raise ValueError("mn must be nonzero")
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m == n:
        return n % p != 0
    blocked = (n - m) % p != 0
    # cross-check against the abelianization: for m != n the generator x
    # has order |n - m| in H1, so it dies in every p-quotient exactly
    # when p does not divide n - m.
    relator = concat((2,), power((1,), m), (-2,), power((1,), -n))
    torsion, free_rank = abelianization_one_relator(relator, 2)
    x_order = torsion[0] if torsion else (0 if free_rank == 2 else 1)
    if x_order == 0:
        x_dies_in_p = False
    else:
        x_dies_in_p = x_order % p != 0
    if x_dies_in_p != blocked:
        raise AssertionError("abelianization cross-check failed")
    return blocked
