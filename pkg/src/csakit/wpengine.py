"""Word-problem dispatch over the supported group classes.

Element expressions are words (tuples of nonzero ints) over a group's
displayed generators:

* free(rank): generators 1..rank
* free product of cyclics(orders): generators 1..k, order 0 = infinite
* hnn(P): base generators 1..rank, stable letter rank+1
* amalgam(P): left factor 1..rl, right factor rl+1..rl+rr
* free-by-cyclic: x=1, y=2, d=3 with y acting by x -> x d^-1, d -> d
"""

from dataclasses import dataclass

from . import hnn as hnn_mod
from .errors import UnsupportedBaseError
from .words import commutator, concat, free_reduce, inverse

FBC_X, FBC_Y, FBC_D = 1, 2, 3
# fiber alphabet of the free-by-cyclic group: d = 1, x = 2
FIB_D, FIB_X = 1, 2


@dataclass(frozen=True)
class FreeSpec:
    rank: int


@dataclass(frozen=True)
class FreeProductCyclicsSpec:
    orders: tuple  # per-generator order, 0 = infinite


class HnnSpec:
    def __init__(self, pres: "hnn_mod.HnnPresentation"):
        self.pres = pres

    @property
    def t_letter(self):
        return self.pres.base_rank + 1


class AmalgamSpec:
    def __init__(self, pres):
        self.pres = pres  # amalgam.AmalgamPresentation


@dataclass(frozen=True)
class FreeByCyclicSpec:
    pass


def num_generators(spec):
    if isinstance(spec, FreeSpec):
        return spec.rank
    if isinstance(spec, FreeProductCyclicsSpec):
        return len(spec.orders)
    if isinstance(spec, HnnSpec):
        return spec.pres.base_rank + 1
    if isinstance(spec, AmalgamSpec):
        return spec.pres.left_rank + spec.pres.right_rank
    if isinstance(spec, FreeByCyclicSpec):
        return 3
    raise UnsupportedBaseError(f"unsupported group spec {spec!r}")


# -- free products of cyclic groups ----------------------------------------


def fpc_normal_form(word, orders):
    """Syllable normal form with exponents reduced modulo the factor
    orders; finite factors use representatives in [0, order)."""
    syll = []
    for l in word:
        g = abs(l)
        e = 1 if l > 0 else -1
        if syll and syll[-1][0] == g:
            syll[-1][1] += e
        else:
            syll.append([g, e])
        while syll:
            g0, e0 = syll[-1]
            order = orders[g0 - 1]
            if order:
                e0 %= order
                syll[-1][1] = e0
            if e0 == 0:
                syll.pop()
                if len(syll) >= 2 and syll[-1][0] == syll[-2][0]:
                    g1, e1 = syll.pop()
                    syll[-1][1] += e1
                    continue
            break
    return tuple((g, e) for (g, e) in syll)


# -- the fixed free-by-cyclic group ----------------------------------------


def _fbc_twist(w, k):
    """Apply the k-th power of the defining automorphism (x -> x d^-1,
    d -> d) to a fiber word."""
    if k == 0:
        return w
    out = []
    push = out.append
    for l in w:
        if l == FIB_X:
            push(FIB_X)
            _push_power(out, FIB_D, -k)
        elif l == -FIB_X:
            _push_power(out, FIB_D, k)
            if out and out[-1] == FIB_X:
                out.pop()
            else:
                push(-FIB_X)
        else:
            if out and out[-1] == -l:
                out.pop()
            else:
                push(l)
    return free_reduce(out)


def _push_power(out, letter, k):
    step = letter if k > 0 else -letter
    for _ in range(abs(k)):
        if out and out[-1] == -step:
            out.pop()
        else:
            out.append(step)


def fc_mul(a, b):
    """Semidirect multiplication (w1, k1) * (w2, k2) =
    (w1 * twist^k1(w2), k1 + k2)."""
    (w1, k1), (w2, k2) = a, b
    return (concat(w1, _fbc_twist(w2, k1)), k1 + k2)


def fc_normal_form(word):
    """Unique (fiber word over {d=1, x=2}, y-exponent) for a word over
    the displayed generators x, y, d."""
    acc = ((), 0)
    for l in free_reduce(word, 3):
        g = abs(l)
        s = 1 if l > 0 else -1
        if g == FBC_X:
            acc = fc_mul(acc, ((s * FIB_X,), 0))
        elif g == FBC_D:
            acc = fc_mul(acc, ((s * FIB_D,), 0))
        else:
            acc = fc_mul(acc, ((), s))
    return acc


# -- amalgams via the stable-letter embedding ------------------------------


def amalgam_image(word, pres):
    """Image of an amalgam word in the HNN extension of the free product:
    left-factor letters go to their t-conjugates."""
    rl = pres.left_rank
    t = pres.free_product_rank + 1
    out = []
    for l in word:
        if abs(l) <= rl:
            out.extend((-t, l, t))
        else:
            out.append(l)
    return free_reduce(out)


# -- dispatch ---------------------------------------------------------------


def is_trivial(word, spec):
    """True iff the element expression equals the identity."""
    n = num_generators(spec)
    word = free_reduce(word, n)
    if isinstance(spec, FreeSpec):
        return not word
    if isinstance(spec, FreeProductCyclicsSpec):
        return not fpc_normal_form(word, spec.orders)
    if isinstance(spec, HnnSpec):
        tw = hnn_mod.TWord.from_word(word, spec.t_letter)
        return hnn_mod.is_identity(tw, spec.pres)
    if isinstance(spec, AmalgamSpec):
        pres = spec.pres
        img = amalgam_image(word, pres)
        ext = pres.extension
        tw = hnn_mod.TWord.from_word(img, pres.free_product_rank + 1)
        return hnn_mod.is_identity(tw, ext)
    if isinstance(spec, FreeByCyclicSpec):
        return fc_normal_form(word) == ((), 0)
    raise UnsupportedBaseError(f"unsupported group spec {spec!r}")


def canonical_key(word, spec):
    """Hashable key equal for words representing the same element, when a
    normal form is available; None when only pairwise testing exists."""
    n = num_generators(spec)
    word = free_reduce(word, n)
    if isinstance(spec, FreeSpec):
        return word
    if isinstance(spec, FreeProductCyclicsSpec):
        return fpc_normal_form(word, spec.orders)
    if isinstance(spec, HnnSpec):
        tw = hnn_mod.TWord.from_word(word, spec.t_letter)
        return hnn_mod.normal_form(tw, spec.pres)
    if isinstance(spec, AmalgamSpec):
        pres = spec.pres
        img = amalgam_image(word, pres)
        tw = hnn_mod.TWord.from_word(img, pres.free_product_rank + 1)
        return hnn_mod.normal_form(tw, pres.extension)
    if isinstance(spec, FreeByCyclicSpec):
        return fc_normal_form(word)
    return None


def commutes(u, v, spec):
    return is_trivial(commutator(u, v), spec)


def equal(u, v, spec):
    return is_trivial(concat(u, inverse(v)), spec)
