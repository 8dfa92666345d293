"""The graph category: label strings as objects, graphs up to homotopy as morphisms.

A connected graph with K source ends and L target ends is determined up to
homotopy (rel. ends) by its first Betti number, so a morphism is stored as a
partition of the end slots into components together with a loop rank for each.
"""

from dataclasses import dataclass


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class GraphObject:
    labels: tuple = ()

    def __init__(self, labels=()):
        object.__setattr__(self, "labels", tuple(labels))

    def __len__(self):
        return len(self.labels)

    def __add__(self, other):
        return GraphObject(self.labels + other.labels)


@dataclass(frozen=True)
class GraphComponent:
    sourceSlots: frozenset
    targetSlots: frozenset
    loopRank: int = 0

    def __init__(self, sourceSlots=(), targetSlots=(), loopRank=0):
        if loopRank < 0:
            raise GraphError("negative loop rank")
        object.__setattr__(self, "sourceSlots", frozenset(sourceSlots))
        object.__setattr__(self, "targetSlots", frozenset(targetSlots))
        object.__setattr__(self, "loopRank", int(loopRank))

    @property
    def K(self):
        return len(self.sourceSlots)

    @property
    def L(self):
        return len(self.targetSlots)

    def sort_key(self):
        big = float("inf")
        return (min(self.sourceSlots, default=big), min(self.targetSlots, default=big),
                sorted(self.sourceSlots), sorted(self.targetSlots), self.loopRank)


class GraphMorphism:
    """A morphism of the graph category in canonical form."""

    def __init__(self, source, target, components):
        source = source if isinstance(source, GraphObject) else GraphObject(source)
        target = target if isinstance(target, GraphObject) else GraphObject(target)
        comps = sorted(components, key=GraphComponent.sort_key)
        seen_s = [c for comp in comps for c in comp.sourceSlots]
        seen_t = [c for comp in comps for c in comp.targetSlots]
        if sorted(seen_s) != list(range(len(source))):
            raise GraphError("components do not partition the source slots")
        if sorted(seen_t) != list(range(len(target))):
            raise GraphError("components do not partition the target slots")
        self.source = source
        self.target = target
        self.components = tuple(comps)

    @property
    def beta1(self):
        return sum(c.loopRank for c in self.components)

    @property
    def beta0(self):
        return len(self.components)

    def signature(self):
        return sorted((c.K, c.L, c.loopRank) for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, GraphMorphism):
            return NotImplemented
        return (self.source, self.target, self.components) == \
            (other.source, other.target, other.components)

    def __hash__(self):
        return hash((self.source, self.target, self.components))

    def __repr__(self):
        parts = ["%s->%s:%d" % (sorted(c.sourceSlots), sorted(c.targetSlots), c.loopRank)
                 for c in self.components]
        return "GraphMorphism(%s -> %s; %s)" % (list(self.source.labels),
                                                 list(self.target.labels), ", ".join(parts))

    def to_json(self):
        return {
            "source": list(self.source.labels),
            "target": list(self.target.labels),
            "components": [{"src": sorted(c.sourceSlots), "tgt": sorted(c.targetSlots),
                            "beta1": c.loopRank} for c in self.components],
        }

    @classmethod
    def from_json(cls, data):
        comps = [GraphComponent(c.get("src", ()), c.get("tgt", ()), c.get("beta1", 0))
                 for c in data.get("components", ())]
        return cls(data.get("source", ()), data.get("target", ()), comps)


def identity_graph(obj):
    obj = obj if isinstance(obj, GraphObject) else GraphObject(obj)
    return GraphMorphism(obj, obj, [GraphComponent([i], [i]) for i in range(len(obj))])


def spider(source, target, loops=0):
    """The connected morphism joining every end, with the given loop rank."""
    source = source if isinstance(source, GraphObject) else GraphObject(source)
    target = target if isinstance(target, GraphObject) else GraphObject(target)
    return GraphMorphism(source, target,
                         [GraphComponent(range(len(source)), range(len(target)), loops)])


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # order by (type, repr) so mixed vertex labels still give a stable root
            lo, hi = sorted((ra, rb), key=lambda v: (type(v).__name__, repr(v)))
            self.parent[hi] = lo

    def groups(self, items):
        out = {}
        for x in items:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


def canonicalize(source, target, edges, vertices=()):
    """Canonical morphism of a raw 1-complex.

    External vertices are written ('s', i) and ('t', j); any other hashable is an
    internal vertex.  Every external vertex must have valency one.  Isolated
    internal vertices can be passed through ``vertices``.
    """
    source = source if isinstance(source, GraphObject) else GraphObject(source)
    target = target if isinstance(target, GraphObject) else GraphObject(target)
    externals = [("s", i) for i in range(len(source))] + [("t", j) for j in range(len(target))]
    ext_set = set(externals)

    def is_external(v):
        return isinstance(v, tuple) and len(v) == 2 and v[0] in ("s", "t") \
            and isinstance(v[1], int)

    valency = {}
    verts = set(vertices)
    uf = _UnionFind()
    for a, b in edges:
        for v in (a, b):
            if is_external(v) and v not in ext_set:
                raise GraphError("dangling reference to endpoint %r" % (v,))
            valency[v] = valency.get(v, 0) + 1
            verts.add(v)
        uf.union(a, b)
    for v in externals:
        if valency.get(v, 0) == 0:
            raise GraphError("dangling endpoint %r has no edge" % (v,))
        if valency[v] > 1:
            raise GraphError("endpoint %r labeled twice" % (v,))
    for v in verts:
        uf.find(v)
    ecount = {}
    for a, b in edges:
        r = uf.find(a)
        ecount[r] = ecount.get(r, 0) + 1
    comps = []
    for group in uf.groups(sorted(verts, key=repr)):
        r = uf.find(group[0])
        beta1 = ecount.get(r, 0) - len(group) + 1
        src = [v[1] for v in group if is_external(v) and v[0] == "s"]
        tgt = [v[1] for v in group if is_external(v) and v[0] == "t"]
        comps.append(GraphComponent(src, tgt, beta1))
    return GraphMorphism(source, target, comps)


def compose_graphs(g2, g1):
    """Return (g2 o g1, mu0) where mu0 = b1(g2 o g1) - b1(g1) - b1(g2)."""
    if g1.target != g2.source:
        raise GraphError("object mismatch: %r vs %r" % (g1.target.labels, g2.source.labels))
    uf = _UnionFind()
    members = [("1", k) for k in range(len(g1.components))] + \
              [("2", k) for k in range(len(g2.components))]
    slot_owner1 = {s: ("1", k) for k, c in enumerate(g1.components) for s in c.targetSlots}
    slot_owner2 = {s: ("2", k) for k, c in enumerate(g2.components) for s in c.sourceSlots}
    for m in members:
        uf.find(m)
    for s in range(len(g1.target)):
        uf.union(slot_owner1[s], slot_owner2[s])
    comps = []
    mu0 = 0
    for group in uf.groups(members):
        parts = [(g1 if w == "1" else g2).components[k] for w, k in group]
        middle = sum(len(g1.components[k].targetSlots) for w, k in group if w == "1")
        mu = middle - (len(group) - 1)
        mu0 += mu
        src = [s for w, k in group if w == "1" for s in g1.components[k].sourceSlots]
        tgt = [t for w, k in group if w == "2" for t in g2.components[k].targetSlots]
        comps.append(GraphComponent(src, tgt, sum(p.loopRank for p in parts) + mu))
    return GraphMorphism(g1.source, g2.target, comps), mu0


def tensor_graphs(g1, g2):
    ns, nt = len(g1.source), len(g1.target)
    shifted = [GraphComponent([s + ns for s in c.sourceSlots], [t + nt for t in c.targetSlots],
                              c.loopRank) for c in g2.components]
    return GraphMorphism(g1.source + g2.source, g1.target + g2.target,
                         list(g1.components) + shifted)


def permutation_graph(pi, obj):
    """Graph sending source position i to target position pi[i]."""
    obj = obj if isinstance(obj, GraphObject) else GraphObject(obj)
    pi = list(pi)
    if sorted(pi) != list(range(len(obj))):
        raise GraphError("permutation of size %d does not fit object of size %d"
                         % (len(pi), len(obj)))
    labels = [None] * len(obj)
    for i, j in enumerate(pi):
        labels[j] = obj.labels[i]
    return GraphMorphism(obj, labels, [GraphComponent([i], [pi[i]]) for i in range(len(obj))])


def graph_leq(g1, g2):
    """Partial order: g2 is obtained from g1 by adding loops to components."""
    if g1.source != g2.source or g1.target != g2.target:
        return False
    open1 = {(c.sourceSlots, c.targetSlots): c.loopRank for c in g1.components if c.K + c.L}
    open2 = {(c.sourceSlots, c.targetSlots): c.loopRank for c in g2.components if c.K + c.L}
    if open1.keys() != open2.keys():
        return False
    if any(open1[k] > open2[k] for k in open1):
        return False
    closed1 = sorted(c.loopRank for c in g1.components if not c.K + c.L)
    closed2 = sorted(c.loopRank for c in g2.components if not c.K + c.L)
    if len(closed1) != len(closed2):
        return False
    return all(a <= b for a, b in zip(closed1, closed2))
