"""Amalgamated products of free groups through their stable-letter
embedding, plus the oriented graph-of-groups model with its
quasi-malnormal / malnormal / separated predicates and CSA verdicts.
"""

from dataclasses import dataclass, field
from typing import Optional

from . import hnn as hnn_mod, stallings, words
from .errors import CapExceededError, UnsupportedBaseError, UnsupportedShapeError
from .hnn import HnnPresentation, TWord, britton_reduce
from .stallings import (conj_intersection_trivial, fold, is_malnormal,
                        malnormal_closure, pointed_intersection_nontrivial)
from .words import (concat, free_reduce, inverse, is_maximal_abelian_in_free,
                    shortlex_key)


def shift_word(word, offset):
    return tuple(l + offset if l > 0 else l - offset for l in word)


class AmalgamPresentation:
    """G *_phi H with both factors free; A lives in the left factor,
    B in the right (local letters each starting at 1)."""

    def __init__(self, left_rank, right_rank, a_gens, b_gens):
        if len(a_gens) != len(b_gens):
            raise ValueError("amalgamated subgroup generator counts differ")
        self.left_rank = left_rank
        self.right_rank = right_rank
        self.a_gens = tuple(free_reduce(g, left_rank) for g in a_gens)
        self.b_gens = tuple(free_reduce(g, right_rank) for g in b_gens)
        self.free_product_rank = left_rank + right_rank
        self.extension = HnnPresentation(
            self.free_product_rank,
            self.a_gens,
            tuple(shift_word(g, left_rank) for g in self.b_gens))

    # embedding into the extension <G*H, t | t^-1 a t = phi(a)>:
    # left-factor words map to their t-conjugates, right-factor words to
    # themselves (re-indexed after the left factor).

    def embed_left(self, word):
        t = self.free_product_rank + 1
        out = []
        for l in word:
            out.extend((-t, l, t))
        return TWord.from_word(free_reduce(out), t)

    def embed_right(self, word):
        return TWord.from_word(shift_word(free_reduce(word, self.right_rank),
                                          self.left_rank),
                               self.free_product_rank + 1)

    def embed(self, word):
        """Word over the amalgam's displayed generators (left 1..rl, then
        right) into the extension."""
        t = self.free_product_rank + 1
        out = []
        for l in word:
            if abs(l) <= self.left_rank:
                out.extend((-t, l, t))
            else:
                out.append(l)
        return TWord.from_word(free_reduce(out), t)

    def is_identity(self, word):
        return hnn_mod.is_identity(self.embed(word), self.extension)


def amalgam_csa_verdict_abelian(P: AmalgamPresentation):
    """(verdict, tag): "csa*" iff at least one amalgamated subgroup is
    maximal abelian in its factor; otherwise "not-csa"."""
    if len(P.a_gens) != 1 or len(P.b_gens) != 1:
        raise ValueError("verdict requires cyclic amalgamated subgroups")
    u, v = P.a_gens[0], P.b_gens[0]
    a_max = bool(u) and is_maximal_abelian_in_free(u)
    b_max = bool(v) and is_maximal_abelian_in_free(v)
    if a_max or b_max:
        return "csa*", "Thm-amalgiff"
    return "not-csa", "Prop-MustMax"


# -- graphs of groups -------------------------------------------------------


@dataclass
class GogEdge:
    src: str
    dst: str
    gens: tuple    # edge subgroup generators, words in G(src)
    images: tuple  # their monomorphism images, words in G(dst)


@dataclass
class GraphOfGroups:
    vertices: dict  # name -> free rank (vertex groups are free)
    edges: list     # of GogEdge

    def __post_init__(self):
        for e in self.edges:
            if e.src not in self.vertices or e.dst not in self.vertices:
                raise ValueError(f"edge {e.src}->{e.dst} references "
                                 "an unknown vertex")
            if len(e.gens) != len(e.images):
                raise ValueError("edge subgroup generator counts differ")


@dataclass
class EdgeReport:
    malnormal_in_src: Optional[bool]
    normal_in_closure: Optional[bool]
    malnormal_in_dst: Optional[bool]
    separated: Optional[bool]      # loops only, else None
    witness: Optional[tuple] = None


@dataclass
class GogReport:
    quasi_malnormal: Optional[bool]
    malnormal: Optional[bool]
    separated: Optional[bool]
    per_edge: dict


def _normal_in_closure(images_graph, closure, sub_gens, rank):
    for g in closure.generators:
        for b in sub_gens:
            if not images_graph.member(words.conjugate(b, g)):
                return False
            if not images_graph.member(words.conjugate(b, inverse(g))):
                return False
    return True


def gog_predicates(gog: GraphOfGroups, cap=32) -> GogReport:
    per_edge = {}
    for idx, e in enumerate(gog.edges):
        r_src, r_dst = gog.vertices[e.src], gog.vertices[e.dst]
        E = fold(e.gens, r_src)
        im = fold(e.images, r_dst)
        mal_src = is_malnormal(E)
        mal_dst = is_malnormal(im)
        witness = mal_src.witness or mal_dst.witness
        try:
            closure = malnormal_closure(im, cap)
            normal = _normal_in_closure(im, closure,
                                        [free_reduce(w, r_dst)
                                         for w in e.images], r_dst)
        except CapExceededError:
            normal = None
        separated = None
        if e.src == e.dst:
            ok, wit = conj_intersection_trivial(E, im)
            separated = ok
            witness = witness or wit
        per_edge[idx] = EdgeReport(mal_src.verdict, normal,
                                   mal_dst.verdict, separated, witness)

    def agg(vals):
        if any(v is False for v in vals):
            return False
        if any(v is None for v in vals):
            return None
        return True

    quasi = agg([r.malnormal_in_src for r in per_edge.values()]
                + [r.normal_in_closure for r in per_edge.values()])
    mal = agg([quasi] + [r.malnormal_in_dst for r in per_edge.values()])
    sep = agg([r.separated for r in per_edge.values()
               if r.separated is not None] or [True])
    return GogReport(quasi, mal, sep, per_edge)


# -- fundamental groups of finite trees and lines ---------------------------


@dataclass
class TreePresentation:
    generator_names: list
    relators: list        # words over the combined alphabet
    csa: str              # "csa*", "not-csa" or "unknown"
    citation: Optional[str] = None
    offsets: dict = field(default_factory=dict)


def _underlying_is_tree(gog):
    seen = {}
    parent = {v: v for v in gog.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in gog.edges:
        a, b = find(e.src), find(e.dst)
        if a == b:
            return False  # cycle (or multi-edge)
        parent[a] = b
    roots = {find(v) for v in gog.vertices}
    return len(roots) == 1


def _is_oriented_line(gog):
    outdeg, indeg = {}, {}
    for e in gog.edges:
        outdeg[e.src] = outdeg.get(e.src, 0) + 1
        indeg[e.dst] = indeg.get(e.dst, 0) + 1
    return all(outdeg.get(v, 0) <= 1 and indeg.get(v, 0) <= 1
               for v in gog.vertices)


def fundamental_group_presentation(gog: GraphOfGroups, cap=32):
    """Presentation of the fundamental group of a finite tree (or line) of
    free groups by iterated amalgamation, with a CSA verdict when all edge
    groups are cyclic."""
    if not _underlying_is_tree(gog):
        raise UnsupportedShapeError("underlying graph must be a finite tree")

    names = sorted(gog.vertices)
    offsets, gen_names = {}, []
    total = 0
    for v in names:
        offsets[v] = total
        rank = gog.vertices[v]
        gen_names.extend(f"{v}_{i + 1}" for i in range(rank))
        total += rank
    relators = []
    for e in gog.edges:
        for g, im in zip(e.gens, e.images):
            relators.append(concat(shift_word(free_reduce(g), offsets[e.src]),
                                   inverse(shift_word(free_reduce(im),
                                                      offsets[e.dst]))))

    csa, cite = _tree_csa_verdict(gog, cap)
    return TreePresentation(gen_names, relators, csa, cite, offsets)


def _tree_csa_verdict(gog, cap):
    cyclic = all(len(e.gens) == 1 for e in gog.edges)
    if not cyclic:
        return "unknown", None

    def maxab(w, rank):
        w = free_reduce(w, rank)
        return bool(w) and is_maximal_abelian_in_free(w)

    edge_data = [(e, maxab(e.gens[0], gog.vertices[e.src]),
                  maxab(e.images[0], gog.vertices[e.dst]))
                 for e in gog.edges]

    if len(gog.edges) == 1:
        e, src_max, dst_max = edge_data[0]
        if src_max or dst_max:
            return "csa*", "Thm-amalgiff"
        return "not-csa", "Prop-MustMax"

    if all(src_max and dst_max for (_e, src_max, dst_max) in edge_data):
        return "csa*", "Prop-TreeProdAb"

    if _is_oriented_line(gog) and all(src_max for (_e, src_max, _d)
                                      in edge_data):
        return "csa*", "Thm-GraphGroups"

    # two coincident maximal abelian edge groups at a common initial
    # vertex, with neither image maximal abelian
    for i, (e1, s1, d1) in enumerate(edge_data):
        for (e2, s2, d2) in edge_data[i + 1:]:
            if e1.src != e2.src or not (s1 and s2) or d1 or d2:
                continue
            rank = gog.vertices[e1.src]
            u1 = fold([e1.gens[0]], rank)
            u2 = fold([e2.gens[0]], rank)
            if pointed_intersection_nontrivial(u1, u2):
                return "not-csa", "Prop-BadTree"
    return "unknown", None


# -- persistence of malnormality through an amalgam -------------------------


def malnormal_persistence_check(P: AmalgamPresentation, h_gens, radius=3):
    """Search for a violation of malnormality of H <= right factor inside
    the amalgam; a violation on valid inputs indicates a bug.

    Preconditions (verified): A malnormal in the left factor, H malnormal
    in the right factor.  Returns (True, None) or (False, witness).
    """
    A = fold(P.a_gens, P.left_rank)
    if not is_malnormal(A).verdict:
        raise ValueError("A is not malnormal in the left factor")
    H = fold(h_gens, P.right_rank)
    if not is_malnormal(H).verdict:
        raise ValueError("H is not malnormal in the right factor")
    if H.is_trivial:
        return True, None

    ext = P.extension
    t = P.free_product_rank + 1

    def in_H(tword):
        r = britton_reduce(tword, ext)
        if r.t_length:
            return False
        w = r.head
        if any(abs(l) <= P.left_rank for l in w):
            return False
        return H.member(shift_word(w, -P.left_rank))

    # ball of H elements (as loops in its core graph)
    h_ball = _loop_ball(H, 4)
    h_imgs = [P.embed_right(h) for h in h_ball]

    # conjugator candidates: alternating products of single letters
    letters = [l for g in range(1, P.free_product_rank + 1)
               for l in (g, -g)]
    candidates = [()]
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for l in letters:
                if w and w[-1] == -l:
                    continue
                nxt.append(w + (l,))
        candidates.extend(nxt)
        frontier = nxt
    for x in candidates:
        xt = P.embed(x)
        if in_H(xt):
            continue
        xt_inv = xt.inv()
        for h, ht in zip(h_ball, h_imgs):
            z = britton_reduce(xt_inv.mul(ht).mul(xt), ext)
            if z.t_length == 0 and not z.head:
                continue
            if in_H(z):
                return False, (x, h)
    return True, None


def _loop_ball(H, max_len):
    """Nontrivial basepoint loops of length <= max_len, deduplicated."""
    out = []
    seen = set()
    stack = [((), 0)]
    while stack:
        path, v = stack.pop()
        if len(path) >= max_len:
            continue
        for l in sorted({l for (u, l) in H.succ if u == v},
                        key=words.letter_key):
            if path and l == -path[-1]:
                continue
            w = H.succ[(v, l)][0]
            p2 = path + (l,)
            if w == 0 and p2 not in seen:
                seen.add(p2)
                out.append(p2)
            stack.append((p2, w))
    out.sort(key=shortlex_key)
    return out
