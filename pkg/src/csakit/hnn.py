"""HNN extensions over free bases: Britton reduction, lengths, separation
tests, and the classifier for cyclic associated subgroups.

An extension is <G, t | t^-1 a t = phi(a), a in A> with G free; A and B are
given by generator words and phi by the generator correspondence.  Elements
are TWords g0 t^e1 g1 ... t^en gn with base words between stable letters.
"""

from dataclasses import dataclass
from typing import Optional

from . import stallings, words
from .errors import UnsupportedBaseError
from .stallings import fold, conj_intersection_trivial, malnormal_closure
from .words import (concat, conjugating_element, free_reduce, inverse,
                    is_proper_power, cyclic_reduce)


class HnnPresentation:
    """HNN extension of a free group of rank base_rank.

    The generator tuples must each be a free basis of the subgroup they
    generate (checked via the folded graphs), so that phi extends to an
    isomorphism A -> B.
    """

    def __init__(self, base_rank, a_gens, b_gens):
        if len(a_gens) != len(b_gens):
            raise ValueError("associated subgroup generator counts differ")
        self.base_rank = base_rank
        self.a_gens = tuple(free_reduce(g, base_rank) for g in a_gens)
        self.b_gens = tuple(free_reduce(g, base_rank) for g in b_gens)
        self.A = fold(self.a_gens, base_rank)
        self.B = fold(self.b_gens, base_rank)
        for a, b in zip(self.a_gens, self.b_gens):
            if bool(a) != bool(b):
                raise ValueError("phi cannot pair a trivial generator with "
                                 "a nontrivial one")
        # expression indices refer to the nontrivial generators only, in
        # input order (matching the folded graphs)
        self._a_basis = tuple(a for a in self.a_gens if a)
        self._b_basis = tuple(b for b in self.b_gens if b)
        n_a = len(self._a_basis)
        if self.A.free_rank != n_a or self.B.free_rank != n_a:
            raise ValueError("associated subgroup generators are not a basis")

    def phi(self, a):
        """Image of a in B; a must lie in A."""
        expr = self.A.express(a)
        if expr is None:
            raise ValueError(f"{a} is not in the associated subgroup A")
        return concat(*(self._b_basis[i - 1] if i > 0
                        else inverse(self._b_basis[-i - 1]) for i in expr)) \
            if expr else ()

    def phi_inv(self, b):
        expr = self.B.express(b)
        if expr is None:
            raise ValueError(f"{b} is not in the associated subgroup B")
        return concat(*(self._a_basis[i - 1] if i > 0
                        else inverse(self._a_basis[-i - 1]) for i in expr)) \
            if expr else ()


@dataclass(frozen=True)
class TWord:
    """Alternating form g0 t^e1 g1 ... t^en gn; head = g0,
    tail = ((e1, g1), ..., (en, gn))."""
    head: tuple
    tail: tuple = ()

    @property
    def t_length(self):
        return len(self.tail)

    def inv(self):
        if not self.tail:
            return TWord(inverse(self.head))
        segs = []
        prev = inverse(self.tail[-1][1])
        for i in range(len(self.tail) - 1, -1, -1):
            e = -self.tail[i][0]
            g = inverse(self.tail[i - 1][1]) if i > 0 else inverse(self.head)
            segs.append((e, g))
        return TWord(prev, tuple(segs))

    def mul(self, other):
        if not self.tail:
            return TWord(concat(self.head, other.head), other.tail)
        last_e, last_g = self.tail[-1]
        merged = self.tail[:-1] + ((last_e, concat(last_g, other.head)),)
        return TWord(self.head, merged + other.tail)

    def conjugate(self, v):
        """v^-1 * self * v."""
        return v.inv().mul(self).mul(v)

    def pow(self, n):
        if n < 0:
            return self.inv().pow(-n)
        out = TWord(())
        for _ in range(n):
            out = out.mul(self)
        return out

    def flatten(self, t_letter):
        """Back to a single word with the stable letter as t_letter."""
        out = list(self.head)
        for (e, g) in self.tail:
            out.append(e * t_letter)
            out.extend(g)
        return free_reduce(out)

    @staticmethod
    def from_word(word, t_letter):
        """Split a word over base letters plus +-t_letter into a TWord."""
        head = []
        tail = []
        cur = head
        for l in word:
            if abs(l) == t_letter:
                tail.append([1 if l > 0 else -1, []])
                cur = tail[-1][1]
            else:
                cur.append(l)
        return TWord(free_reduce(head),
                     tuple((e, free_reduce(g)) for (e, g) in tail))


def britton_reduce(w: TWord, P: HnnPresentation) -> TWord:
    """Remove every pinch t^-1 a t (a in A) and t b t^-1 (b in B)."""
    head = w.head
    tail = list(w.tail)
    changed = True
    while changed:
        changed = False
        for i in range(len(tail) - 1):
            e1, g = tail[i]
            e2 = tail[i + 1][0]
            if e1 == -1 and e2 == 1 and P.A.member(g):
                mid = P.phi(g)
            elif e1 == 1 and e2 == -1 and P.B.member(g):
                mid = P.phi_inv(g)
            else:
                continue
            rest = concat(mid, tail[i + 1][1])
            if i == 0:
                head = concat(head, rest)
            else:
                pe, pg = tail[i - 1]
                tail[i - 1] = (pe, concat(pg, rest))
            del tail[i:i + 2]
            changed = True
            break
    return TWord(head, tuple(tail))


def hnn_length(w: TWord, P: HnnPresentation) -> int:
    return britton_reduce(w, P).t_length


def is_identity(w: TWord, P: HnnPresentation) -> bool:
    r = britton_reduce(w, P)
    return r.t_length == 0 and not r.head


def equal(u: TWord, v: TWord, P: HnnPresentation) -> bool:
    return is_identity(u.mul(v.inv()), P)


def normal_form(w: TWord, P: HnnPresentation) -> tuple:
    """Canonical form: after Britton reduction, replace each base segment
    (right to left) by its canonical coset representative, hopping the
    subgroup part leftward across the adjacent stable letter.

    Two TWords are equal in the extension iff their normal forms match.
    """
    r = britton_reduce(w, P)
    head = r.head
    tail = list(r.tail)
    for i in range(len(tail) - 1, -1, -1):
        e, g = tail[i]
        # t * b = phi^-1(b) * t ; t^-1 * a = phi(a) * t^-1
        if e == 1:
            rep = P.B.coset_rep(g)
            hop = P.phi_inv(concat(g, inverse(rep)))
        else:
            rep = P.A.coset_rep(g)
            hop = P.phi(concat(g, inverse(rep)))
        tail[i] = (e, rep)
        if i == 0:
            head = concat(head, hop)
        else:
            pe, pg = tail[i - 1]
            tail[i - 1] = (pe, concat(pg, hop))
    return (head, tuple(tail))


def hnn_cyclic_reduce(w: TWord, P: HnnPresentation):
    """Return (c, conj) with w = conj * c * conj^-1 and c cyclically
    reduced in the HNN sense (no pinch across the wrap)."""
    c = britton_reduce(w, P)
    conj = TWord(())
    while c.t_length >= 1:
        e1 = c.tail[0][0]
        en, gn = c.tail[-1]
        wrap = concat(gn, c.head)
        pinch = (en == -1 and e1 == 1 and P.A.member(wrap)) or \
                (en == 1 and e1 == -1 and P.B.member(wrap))
        if not pinch:
            break
        # conjugate by g0 t^{e1}: the wrap pinch becomes internal and cancels
        u = TWord(c.head, ((e1, ()),))
        c = britton_reduce(c.conjugate(u), P)
        conj = conj.mul(u)
    if c.t_length == 0:
        core, p = cyclic_reduce(c.head)
        return TWord(core), conj.mul(TWord(p))
    if c.head:
        # absorb the leading base word into the conjugator
        u = TWord(c.head)
        c = TWord((), c.tail[:-1] + ((c.tail[-1][0],
                                      concat(c.tail[-1][1], c.head)),))
        conj = conj.mul(u)
    return c, conj


@dataclass
class SeparationReport:
    verdict: bool
    witness: Optional[tuple] = None  # (g, h) with 1 != h in A cap g^-1 B g

    def __bool__(self):
        return self.verdict


def is_separated(P: HnnPresentation) -> SeparationReport:
    ok, wit = conj_intersection_trivial(P.A, P.B)
    return SeparationReport(ok, wit)


def is_strictly_separated(P: HnnPresentation, cap=32) -> SeparationReport:
    B1 = malnormal_closure(P.B, cap)
    ok, wit = conj_intersection_trivial(P.A, B1)
    return SeparationReport(ok, wit)


def separated_iff_strict_for_abelian(P: HnnPresentation, cap=32) -> bool:
    if len(P.a_gens) != 1 or len(P.b_gens) != 1:
        raise ValueError("associated subgroups must be cyclic")
    sep = is_separated(P).verdict
    strict = is_strictly_separated(P, cap).verdict
    if sep != strict:
        raise AssertionError(
            "separated and strictly separated verdicts disagree on "
            "abelian associated subgroups")
    return sep


CASE1_SEPARATED = "CASE1-SEPARATED"
CASE2_CENTRALIZER_EXT = "CASE2-CENTRALIZER-EXT"
CASE3 = "CASE3"
CASE4 = "CASE4"
NOT_MAXIMAL_A = "NOT-MAXIMAL(A)"
FREE_PRODUCT = "FREE-PRODUCT"


@dataclass
class Classification:
    case: str
    csa: str              # "csa*", "not-csa" or "unknown"
    conjugator: Optional[tuple] = None  # s with u^s = phi(u), for case 2


def classify_abelian_hnn(P: HnnPresentation) -> Classification:
    """Sort an extension with cyclic associated subgroups <u> -> <v> into
    the four mutually exclusive cases and predict the CSA verdict."""
    if len(P.a_gens) != 1 or len(P.b_gens) != 1:
        raise ValueError("classifier needs cyclic associated subgroups")
    u, v = P.a_gens[0], P.b_gens[0]
    if not u or not v:
        return Classification(FREE_PRODUCT, "csa*")
    cu, _ = cyclic_reduce(u)
    cv, _ = cyclic_reduce(v)
    if is_proper_power(cu):
        verdict = "not-csa" if is_proper_power(cv) else "unknown"
        return Classification(NOT_MAXIMAL_A, verdict)
    meets = not conj_intersection_trivial(fold([u], P.base_rank),
                                          fold([v], P.base_rank))[0]
    if not meets:
        return Classification(CASE1_SEPARATED, "csa*")
    s = conjugating_element(u, v)
    if s is not None:
        return Classification(CASE2_CENTRALIZER_EXT, "csa*", conjugator=s)
    if is_proper_power(cv):
        return Classification(CASE4, "not-csa")
    return Classification(CASE3, "not-csa")
