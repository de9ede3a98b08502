"""Folded core graphs for finitely generated subgroups of free groups.

Folding keeps expression tags on every edge, so a basepoint loop can be
rewritten as a product of the original generators (needed to transport
elements through a subgroup isomorphism).  Tags are words over the
abstract alphabet 1..k indexing the input generator list.
"""

from collections import deque

from . import words
from .words import concat, conjugate, free_reduce, inverse, shortlex_key


class _Edge:
    __slots__ = ("src", "letter", "dst", "tag", "alive")

    def __init__(self, src, letter, dst, tag):
        self.src = src          # vertex id
        self.letter = letter    # positive generator index
        self.dst = dst
        self.tag = tag          # expression word contributed by src->dst traversal
        self.alive = True


class CoreGraph:
    """Folded, trimmed Stallings automaton with basepoint 0.

    ``succ[(v, letter)] -> (w, tag)`` for letters of both signs; the tag is
    the expression-word contribution of traversing that edge.
    """

    def __init__(self, rank, num_vertices, succ, generators):
        self.rank = rank
        self.num_vertices = num_vertices
        self.succ = succ
        self.generators = generators  # input generator words (reduced, nontrivial)
        self._tree_paths = None

    # -- basic automaton queries -------------------------------------------

    def transition(self, v, letter):
        hit = self.succ.get((v, letter))
        return None if hit is None else hit[0]

    def walk(self, word, start=0):
        """Follow word from start; returns end vertex or None."""
        v = start
        for l in word:
            hit = self.succ.get((v, l))
            if hit is None:
                return None
            v = hit[0]
        return v

    def member(self, word):
        word = free_reduce(word, self.rank)
        return self.walk(word) == 0

    def express(self, word):
        """Rewrite a basepoint loop as a word over the generator alphabet
        (1..len(generators)); None if word is not in the subgroup."""
        word = free_reduce(word, self.rank)
        v = 0
        expr = []
        for l in word:
            hit = self.succ.get((v, l))
            if hit is None:
                return None
            v, tag = hit
            for t in tag:
                if expr and expr[-1] == -t:
                    expr.pop()
                else:
                    expr.append(t)
        return tuple(expr) if v == 0 else None

    @property
    def num_edges(self):
        return sum(1 for (v, l) in self.succ if l > 0)

    @property
    def free_rank(self):
        if self.num_vertices == 0:
            return 0
        return self.num_edges - self.num_vertices + 1

    @property
    def is_trivial(self):
        return self.num_edges == 0

    # -- spanning tree ------------------------------------------------------

    def tree_paths(self):
        """BFS path word from the basepoint to each vertex (deterministic
        letter order)."""
        if self._tree_paths is None:
            paths = {0: ()}
            queue = deque([0])
            letters = sorted(
                {l for (_, l) in self.succ}, key=words.letter_key)
            while queue:
                v = queue.popleft()
                for l in letters:
                    hit = self.succ.get((v, l))
                    if hit is not None and hit[0] not in paths:
                        paths[hit[0]] = paths[v] + (l,)
                        queue.append(hit[0])
            self._tree_paths = paths
        return self._tree_paths

    def coset_rep(self, word):
        """Canonical representative of the right coset H*word.

        Reads word through the graph, spilling into a spur once it leaves;
        the rep is tree-path-to-exit plus the unread tail.
        """
        word = free_reduce(word, self.rank)
        v = 0
        for i, l in enumerate(word):
            hit = self.succ.get((v, l))
            if hit is None:
                return concat(self.tree_paths()[v], word[i:])
            v = hit[0]
        return self.tree_paths()[v]


def fold(generators, rank):
    """Fold the flower on the given generator words into a core graph."""
    gens = []
    for g in generators:
        r = free_reduce(g, rank)
        if r:
            gens.append(r)
    gens = tuple(gens)

    parent = [0]
    incident = [[]]  # per vertex: list of _Edge

    def find(v):
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def new_vertex():
        parent.append(len(parent))
        incident.append([])
        return len(parent) - 1

    def add_edge(src, letter, dst, tag):
        if letter < 0:
            src, dst = dst, src
            letter = -letter
            tag = inverse(tag)
        e = _Edge(src, letter, dst, tag)
        incident[src].append(e)
        if dst != src:
            incident[dst].append(e)
        return e

    for i, g in enumerate(gens):
        v = 0
        for j, l in enumerate(g):
            nxt = 0 if j == len(g) - 1 else new_vertex()
            tag = (i + 1,) if j == len(g) - 1 else ()
            add_edge(v, l, nxt, tag)
            v = nxt

    def absorb(keep, gone, delta):
        """Merge vertex gone into keep; out-edge tags of gone are
        premultiplied by delta."""
        for e in incident[gone]:
            if not e.alive:
                continue
            if e.src == gone and e.dst == gone:
                e.tag = concat(delta, e.tag, inverse(delta))
                e.src = e.dst = keep
            elif e.src == gone:
                e.tag = concat(delta, e.tag)
                e.src = keep
            else:
                e.tag = concat(e.tag, inverse(delta))
                e.dst = keep
            incident[keep].append(e)
        incident[gone] = []
        parent[gone] = keep

    work = deque(range(len(parent)))
    queued = set(work)
    while work:
        v = work.popleft()
        queued.discard(v)
        if find(v) != v:
            continue
        # group live incident edges by out-label at v
        by_label = {}
        dirty = True
        while dirty:
            dirty = False
            by_label.clear()
            live = []
            live_ids = set()
            for e in incident[v]:
                if e.alive and (e.src == v or e.dst == v) and id(e) not in live_ids:
                    live.append(e)
                    live_ids.add(id(e))
            incident[v] = live
            for e in live:
                if e.src == v:
                    key = e.letter
                    out = (e.dst, e.tag)
                    if key in by_label:
                        first = by_label[key]
                        _merge_pair(first, out, e, find, absorb,
                                    work, queued, v)
                        dirty = True
                        break
                    by_label[key] = (out, e)
                if e.dst == v and e.src != v:
                    key = -e.letter
                    out = (e.src, inverse(e.tag))
                    if key in by_label:
                        first = by_label[key]
                        _merge_pair(first, out, e, find, absorb,
                                    work, queued, v)
                        dirty = True
                        break
                    by_label[key] = (out, e)
                elif e.dst == v and e.src == v:
                    key = -e.letter
                    out = (e.src, inverse(e.tag))
                    if key in by_label:
                        first = by_label[key]
                        _merge_pair(first, out, e, find, absorb,
                                    work, queued, v)
                        dirty = True
                        break
                    by_label[key] = (out, e)

    return _finish(parent, incident, find, rank, gens)


def _merge_pair(first, second, second_edge, find, absorb, work, queued, v):
    (w1, t1), _e1 = first
    (w2, t2) = second
    w1, w2 = find(w1), find(w2)
    if w1 == w2:
        second_edge.alive = False
    else:
        delta = concat(inverse(t1), t2)
        if w2 == 0 or (w1 != 0 and w2 < w1):
            w1, w2 = w2, w1
            delta = inverse(delta)
        second_edge.alive = False
        # re-add the second edge's contribution through the kept edge:
        # nothing to add; paths now route through e1 with corrected tags.
        absorb(w1, w2, delta)
        for u in (v, w1):
            if u not in queued:
                work.append(u)
                queued.add(u)


def _finish(parent, incident, find, rank, gens):
    # collect live edges with canonical endpoints
    edges = []
    seen = set()
    for lst in incident:
        for e in lst:
            if e.alive and id(e) not in seen:
                seen.add(id(e))
                edges.append((find(e.src), e.letter, find(e.dst), e.tag))

    # trim non-basepoint vertices of degree <= 1
    base = find(0)
    while True:
        deg = {}
        for (a, _l, b, _t) in edges:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        removable = {v for v, d in deg.items() if d <= 1 and v != base}
        if not removable:
            break
        edges = [e for e in edges
                 if e[0] not in removable and e[2] not in removable]

    # canonical BFS renumbering from the basepoint
    adj = {}
    for (a, l, b, t) in edges:
        adj.setdefault(a, {})[l] = (b, t)
        adj.setdefault(b, {})[-l] = (a, inverse(t))
    order = {base: 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for l in sorted(adj.get(v, ()), key=words.letter_key):
            w = adj[v][l][0]
            if w not in order:
                order[w] = len(order)
                queue.append(w)

    succ = {}
    for (a, l, b, t) in edges:
        if a not in order or b not in order:
            continue  # disconnected junk cannot occur for flowers; belt and braces
        succ[(order[a], l)] = (order[b], t)
        succ[(order[b], -l)] = (order[a], inverse(t))
    n = len(order) if order else 1
    return CoreGraph(rank, n, succ, gens)


# -- fiber products ---------------------------------------------------------


def _components(A, B):
    """Components of the unpointed fiber product of A and B.

    Yields (vertices, edges) with vertices a sorted list of pairs and
    edges a list of ((u1, v1), letter>0, (u2, v2))."""
    pairs = [(u, v) for u in range(A.num_vertices)
             for v in range(B.num_vertices)]
    seen = set()
    for start in pairs:
        if start in seen:
            continue
        comp = []
        comp_edges = []
        queue = deque([start])
        seen.add(start)
        while queue:
            (u, v) = queue.popleft()
            comp.append((u, v))
            for l in range(1, max(A.rank, B.rank) + 1):
                for sl in (l, -l):
                    a = A.succ.get((u, sl))
                    b = B.succ.get((v, sl))
                    if a is None or b is None:
                        continue
                    tgt = (a[0], b[0])
                    if sl > 0:
                        comp_edges.append(((u, v), sl, tgt))
                    if tgt not in seen:
                        seen.add(tgt)
                        queue.append(tgt)
        yield sorted(comp), comp_edges


def _component_witnesses(A, B, comp, comp_edges):
    """Witness words from a cycle-carrying fiber component.

    Yields (g, h) with h != 1, h in A and g h g^-1 in B, one per
    fundamental cycle of the component."""
    root = comp[0]
    tree = {root: ()}
    queue = deque([root])
    adj = {}
    for (p, l, q) in comp_edges:
        adj.setdefault(p, []).append((l, q))
        adj.setdefault(q, []).append((-l, p))
    while queue:
        p = queue.popleft()
        for (l, q) in sorted(adj.get(p, ()), key=lambda x: words.letter_key(x[0])):
            if q not in tree:
                tree[q] = tree[p] + (l,)
                queue.append(q)
    pa = A.tree_paths()
    pb = B.tree_paths()
    for (p, l, q) in comp_edges:
        cyc = free_reduce(tree[p] + (l,) + inverse(tree[q]))
        if not cyc:
            continue  # tree edge
        u, v = root
        h = concat(pa[u], cyc, inverse(pa[u]))
        g = concat(pb[v], inverse(pa[u]))
        if h:
            yield (g, h)


def conj_intersection_trivial(A, B):
    """Decide whether A cap g^-1 B g = 1 for every g in the ambient free
    group.  Returns (True, None) or (False, (g, h)) with
    1 != h in A cap g^-1 B g (equivalently g h g^-1 in B)."""
    if A.is_trivial or B.is_trivial:
        return True, None
    best = None
    for comp, comp_edges in _components(A, B):
        for (g, h) in _component_witnesses(A, B, comp, comp_edges):
            # h in A and g h g^-1 in B, so h in A cap B^g with B^g = g^-1 B g
            key = (shortlex_key(h), shortlex_key(g))
            if best is None or key < best[0]:
                best = (key, (g, h))
    if best is None:
        return True, None
    return False, best[1]


class MalnormalityReport:
    def __init__(self, verdict, witness=None):
        self.verdict = verdict
        self.witness = witness  # (g, h): h in H, g^-1 h g in H, g not in H

    def __bool__(self):
        return self.verdict

    def __repr__(self):
        return f"MalnormalityReport({self.verdict}, {self.witness})"


def is_malnormal(H):
    """H cap H^g = 1 for every g outside H, via the self fiber product
    with the diagonal component ignored."""
    if H.is_trivial:
        return MalnormalityReport(True)
    best = None
    for comp, comp_edges in _components(H, H):
        if comp[0][0] == comp[0][1]:
            continue  # the diagonal is a full component
        for (g, h) in _component_witnesses(H, H, comp, comp_edges):
            gp = words.inverse(g)
            if H.member(gp):
                continue
            key = (shortlex_key(h), shortlex_key(gp))
            if best is None or key < best[0]:
                best = (key, (gp, h))
    if best is None:
        return MalnormalityReport(True)
    g, h = best[1]
    return MalnormalityReport(False, (g, h))


def malnormal_closure(H, cap=32):
    """Join malnormality witnesses until the subgroup is malnormal.

    Raises CapExceededError after cap joins."""
    from .errors import CapExceededError

    if cap < 1:
        raise ValueError("cap must be >= 1")
    for _ in range(cap):
        report = is_malnormal(H)
        if report.verdict:
            return H
        g, _h = report.witness
        H = fold(H.generators + (g,), H.rank)
    if is_malnormal(H).verdict:
        return H
    raise CapExceededError(cap)


def pointed_intersection_nontrivial(A, B):
    """True iff A cap B != 1 (basepoint component of the pullback has a
    cycle)."""
    if A.is_trivial or B.is_trivial:
        return False
    for comp, comp_edges in _components(A, B):
        if (0, 0) not in comp:
            continue
        nv = len(comp)
        ne = len(comp_edges)
        return ne - nv + 1 >= 1
    return False
