"""Framed tangle diagrams as Morse words, their moves, and Hennings evaluation.

A diagram is drawn in a strip.  The source groups sit on the top line and the
target groups on the bottom line; the word is read from top to bottom.  At
each level one elementary event acts on the current row of strands:

    cap(i)   a maximum; two new strands appear at positions i, i+1
    cup(i)   a minimum; strands i and i+1 are joined and disappear
    x+(i)    strands i, i+1 cross; the strand coming from i+1 passes over
    x-(i)    strands i, i+1 cross; the strand coming from i passes over

With this convention x+ is a positive crossing whenever both strands run in
the same vertical direction, and x+ followed by x- on the same position is a
Reidemeister II pair.  Each strand component carries an integer framing;
for closed components it is the framing of the surgery link.
"""

from dataclasses import dataclass
from fractions import Fraction
import json
import re

from .exactlin import Matrix, abelian_group_of_presentation


class DiagramError(ValueError):
    pass


KINDS = ("cap", "cup", "x+", "x-")
SOURCE_RIBBON = "source-ribbon"
TARGET_RIBBON = "target-ribbon"
CLOSED = "closed"
THROUGH_PAIR = "through-pair"

_EVENT_RE = re.compile(r"^\s*(cap|cup|x\+|x-)\s*\(\s*(\d+)\s*\)\s*$")


@dataclass(frozen=True)
class Event:
    kind: str
    pos: int

    def __str__(self):
        return "%s(%d)" % (self.kind, self.pos)

    @classmethod
    def parse(cls, text):
        m = _EVENT_RE.match(text)
        if not m:
            raise DiagramError("malformed event %r" % text)
        return cls(m.group(1), int(m.group(2)))


def _as_event(e):
    if isinstance(e, Event):
        return e
    if isinstance(e, str):
        return Event.parse(e)
    kind, pos = e
    if kind not in KINDS:
        raise DiagramError("unknown event kind %r" % kind)
    return Event(kind, int(pos))


# ---------------------------------------------------------------------------
# tracing


@dataclass
class Segment:
    """A vertical strand piece at a fixed slot between two attachments."""
    sid: int
    upper: tuple      # ("top", position) or ("ev", level)
    lower: tuple = None
    slot_above: int = 0   # position at the level where it starts
    slot_below: int = 0   # position at the level where it ends


@dataclass
class Trace:
    segments: list
    components: list          # list of lists of (segment id, direction) in traversal order
    kinds: list
    closed: list              # bool per component
    crossings: dict           # level -> (over segment pair, under segment pair)
    top_ends: list            # segment id per top endpoint
    bottom_ends: list
    levels: list              # level -> list of segment ids of the row *above* the event
    final_row: list
    component_of: dict        # segment id -> component index
    tops_of: list             # per component: sorted top endpoint positions
    bottoms_of: list


def _build_segments(top_count, events):
    segs = []

    def new(upper, slot):
        s = Segment(len(segs), upper, None, slot, slot)
        segs.append(s)
        return s.sid

    row = [new(("top", i), i) for i in range(top_count)]
    top_ends = list(row)
    levels = []
    links = []   # (kind, level, data)
    for k, ev in enumerate(events):
        levels.append(list(row))
        n = len(row)
        i = ev.pos
        if ev.kind == "cap":
            if i > n:
                raise DiagramError("cap(%d) at level %d outside %d strands" % (i, k, n))
            a, b = new(("ev", k), i), new(("ev", k), i + 1)
            row = row[:i] + [a, b] + row[i:]
        elif ev.kind == "cup":
            if i + 1 >= n:
                raise DiagramError("cup(%d) at level %d needs two strands, have %d" % (i, k, n))
            for s, slot in ((row[i], i), (row[i + 1], i + 1)):
                segs[s].lower = ("ev", k)
                segs[s].slot_below = slot
            row = row[:i] + row[i + 2:]
        else:
            if i + 1 >= n:
                raise DiagramError("%s at level %d needs two strands, have %d" % (ev, k, n))
            for s, slot in ((row[i], i), (row[i + 1], i + 1)):
                segs[s].lower = ("ev", k)
                segs[s].slot_below = slot
            left, right = new(("ev", k), i), new(("ev", k), i + 1)
            row = row[:i] + [left, right] + row[i + 2:]
        # positions of untouched strands can shift; slot_above records the
        # position at creation which is all the traversal needs
    for pos, s in enumerate(row):
        segs[s].lower = ("bottom", pos)
        segs[s].slot_below = pos
    return segs, top_ends, levels, row


def trace_diagram(top_count, bottom_count, events):
    events = [_as_event(e) for e in events]
    segs, top_ends, levels, final = _build_segments(top_count, events)
    if len(final) != bottom_count:
        raise DiagramError("word ends with %d strands but the bottom has %d endpoints"
                           % (len(final), bottom_count))
    # connectivity at events: per level, the four (or two) attached segments
    above = {}
    below = {}
    for s in segs:
        if s.lower and s.lower[0] == "ev":
            above.setdefault(s.lower[1], []).append(s.sid)
        if s.upper[0] == "ev":
            below.setdefault(s.upper[1], []).append(s.sid)
    for k in above:
        above[k].sort(key=lambda sid: segs[sid].slot_below)
    for k in below:
        below[k].sort(key=lambda sid: segs[sid].slot_above)

    crossings = {}

    def step(sid, direction):
        """Follow the strand out of segment ``sid`` moving ``direction``.

        Returns (next segment, next direction, event info) or None at a boundary."""
        s = segs[sid]
        if direction == "down":
            end = s.lower
            if end[0] == "bottom":
                return None
            k = end[1]
            ev = events[k]
            if ev.kind == "cup":
                a, b = above[k]
                return (b if sid == a else a), "up", ("ext", k, "ccw" if sid == a else "cw")
            a, b = above[k]
            c, d = below[k]
            # x+: strand from upper right (b) goes to lower left (c) over
            nxt = d if sid == a else c
            over = (sid == b) if ev.kind == "x+" else (sid == a)
            return nxt, "down", ("x", k, "over" if over else "under")
        end = s.upper
        if end[0] == "top":
            return None
        k = end[1]
        ev = events[k]
        if ev.kind == "cap":
            a, b = below[k]
            return (b if sid == a else a), "down", ("ext", k, "cw" if sid == a else "ccw")
        a, b = above[k]
        c, d = below[k]
        nxt = b if sid == c else a
        over = (sid == c) if ev.kind == "x+" else (sid == d)
        return nxt, "up", ("x", k, "over" if over else "under")

    seen = set()
    comps, kinds, closed, tops_of, bottoms_of = [], [], [], [], []
    top_pos = {sid: i for i, sid in enumerate(top_ends)}
    bottom_pos = {sid: i for i, sid in enumerate(final)}

    def walk(start, direction):
        path = [("seg", start, direction)]
        seen.add(start)
        sid, d = start, direction
        while True:
            nx = step(sid, d)
            if nx is None:
                return path, False
            nsid, nd, info = nx
            path.append(info)
            if nsid == start and nd == direction:
                return path, True
            path.append(("seg", nsid, nd))
            seen.add(nsid)
            sid, d = nsid, nd

    # arcs from the top, then arcs from the bottom, then closed loops
    for sid in top_ends:
        if sid in seen:
            continue
        path, _ = walk(sid, "down")
        comps.append(path)
        closed.append(False)
    for sid in final:
        if sid in seen:
            continue
        path, _ = walk(sid, "up")
        comps.append(path)
        closed.append(False)
    # closed loops start at their first maximum, heading down its left leg
    for k, ev in enumerate(events):
        if ev.kind != "cap":
            continue
        a, b = below[k]
        if a in seen:
            continue
        path, is_loop = walk(a, "down")
        if not is_loop:
            raise DiagramError("internal: loop tracing failed at level %d" % k)
        comps.append(path)
        closed.append(True)
    if len(seen) != len(segs):
        raise DiagramError("internal: untraced strand pieces")
    component_of = {}
    for c, path in enumerate(comps):
        for item in path:
            if item[0] == "seg":
                component_of[item[1]] = c
    for c, path in enumerate(comps):
        segids = [it[1] for it in path if it[0] == "seg"]
        tops_of.append(sorted(top_pos[s] for s in segids if s in top_pos))
        bottoms_of.append(sorted(bottom_pos[s] for s in segids if s in bottom_pos))
    for k, ev in enumerate(events):
        if ev.kind in ("x+", "x-"):
            a, b = above[k]
            c, d = below[k]
            if ev.kind == "x+":
                crossings[k] = ((b, c), (a, d))
            else:
                crossings[k] = ((a, d), (b, c))
    return Trace(segs, comps, kinds, closed, crossings, top_ends, final, levels, final,
                 component_of, tops_of, bottoms_of)


# ---------------------------------------------------------------------------
# diagrams


def _group_slots(sizes):
    """Map endpoint position -> (group, index in group)."""
    out = []
    for g, s in enumerate(sizes):
        out.extend((g, j) for j in range(s))
    return out


class FramedDiagram:
    """A framed tangle in Morse form between endpoint groups.

    ``top`` and ``bottom`` are the group sizes (each even); ``events`` the Morse
    word; ``framings`` one integer per strand component in canonical order
    (arcs by first top endpoint, then arcs by first bottom endpoint, then
    closed components by their topmost maximum)."""

    def __init__(self, top=(), bottom=(), events=(), framings=None, check=True):
        self.top = tuple(int(s) for s in top)
        self.bottom = tuple(int(s) for s in bottom)
        self.events = tuple(_as_event(e) for e in events)
        self._trace = trace_diagram(sum(self.top), sum(self.bottom), self.events)
        ncomp = len(self._trace.components)
        if framings is None:
            framings = [0] * ncomp
        framings = [int(f) for f in framings]
        if len(framings) != ncomp:
            raise DiagramError("%d framings given for %d components" % (len(framings), ncomp))
        self.framings = tuple(framings)
        self.kinds = self._classify()
        if check:
            self.validate()

    # -- structure -------------------------------------------------------------
    @property
    def trace(self):
        return self._trace

    @property
    def ncomponents(self):
        return len(self._trace.components)

    @property
    def is_closed(self):
        return not self.top and not self.bottom or all(self._trace.closed)

    def closed_components(self):
        return [c for c in range(self.ncomponents) if self._trace.closed[c]]

    def _classify(self):
        t = self._trace
        kinds = []
        for c in range(self.ncomponents):
            if t.closed[c]:
                kinds.append(CLOSED)
            elif len(t.tops_of[c]) == 2:
                kinds.append(SOURCE_RIBBON)
            elif len(t.bottoms_of[c]) == 2:
                kinds.append(TARGET_RIBBON)
            else:
                kinds.append(THROUGH_PAIR)
        return kinds

    def validate(self):
        for side, sizes in (("top", self.top), ("bottom", self.bottom)):
            if any(s % 2 or s < 0 for s in sizes):
                raise DiagramError("%s group sizes must be even: %s" % (side, list(sizes)))
        t = self._trace
        tslots = _group_slots(self.top)
        bslots = _group_slots(self.bottom)

        def is_pair(slots, a, b):
            (g1, j1), (g2, j2) = slots[a], slots[b]
            return g1 == g2 and j1 // 2 == j2 // 2 and j1 != j2

        through_top = {}
        for c, kind in enumerate(self.kinds):
            if kind == SOURCE_RIBBON and not is_pair(tslots, *t.tops_of[c]):
                raise DiagramError("source ribbon %d does not connect a pair of one group" % c)
            if kind == TARGET_RIBBON and not is_pair(bslots, *t.bottoms_of[c]):
                raise DiagramError("target ribbon %d does not connect a pair of one group" % c)
            if kind == THROUGH_PAIR:
                through_top[t.tops_of[c][0]] = t.bottoms_of[c][0]
        # through strands must come in pairs: pair at the top maps to a pair at the bottom
        for a, b in through_top.items():
            g, j = tslots[a]
            partner = a + 1 if j % 2 == 0 else a - 1
            if partner not in through_top:
                raise DiagramError("through strand at top position %d has no partner" % a)
            if not is_pair(bslots, b, through_top[partner]):
                raise DiagramError("through strands at top %d,%d do not end in a pair"
                                   % (a, partner))
        return True

    # -- serialization ------------------------------------------------------------
    def to_text(self):
        lines = ["top: " + " ".join(map(str, self.top)),
                 "bottom: " + " ".join(map(str, self.bottom)),
                 "framing: " + " ".join(map(str, self.framings))]
        lines.extend(str(e) for e in self.events)
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {"top": list(self.top), "bottom": list(self.bottom),
                "events": [str(e) for e in self.events], "framings": list(self.framings),
                "componentKinds": list(self.kinds)}

    @classmethod
    def from_json(cls, data):
        return cls(data.get("top", ()), data.get("bottom", ()), data.get("events", ()),
                   data.get("framings"))

    def __eq__(self, other):
        return isinstance(other, FramedDiagram) and self.to_text() == other.to_text()

    def __hash__(self):
        return hash(self.to_text())

    def __repr__(self):
        return "FramedDiagram(%s)" % " ".join(map(str, self.events))

    # -- invariants ------------------------------------------------------------------
    def orientation_signs(self):
        """Per crossing level: (component over, component under, sign) using traversal
        orientations."""
        t = self._trace
        direction = {}
        for path in t.components:
            for it in path:
                if it[0] == "seg":
                    direction[it[1]] = it[2]
        out = {}
        for k, ((o_in, _), (u_in, _)) in t.crossings.items():
            # horizontal step of each strand when moving down; x+ over runs right to left
            o_dx = -1 if self.events[k].kind == "x+" else 1
            u_dx = -o_dx
            o = (o_dx, -1) if direction[o_in] == "down" else (-o_dx, 1)
            u = (u_dx, -1) if direction[u_in] == "down" else (-u_dx, 1)
            cross = o[0] * u[1] - o[1] * u[0]
            out[k] = (t.component_of[o_in], t.component_of[u_in], 1 if cross > 0 else -1)
        return out

    def writhes(self):
        w = [0] * self.ncomponents
        for k, (a, b, s) in self.orientation_signs().items():
            if a == b:
                w[a] += s
        return w

    def linking_matrix(self, components=None):
        comps = list(range(self.ncomponents)) if components is None else list(components)
        idx = {c: i for i, c in enumerate(comps)}
        m = len(comps)
        L = [[Fraction(0)] * m for _ in range(m)]
        for k, (a, b, s) in self.orientation_signs().items():
            if a != b and a in idx and b in idx:
                L[idx[a]][idx[b]] += Fraction(s, 2)
                L[idx[b]][idx[a]] += Fraction(s, 2)
        for c in comps:
            L[idx[c]][idx[c]] = Fraction(self.framings[c])
        return Matrix([[int(x) if x.denominator == 1 else x for x in row] for row in L], m)

    def surgery_homology(self):
        """(free rank, torsion coefficients) of H1 of the surgered manifold."""
        if not all(self._trace.closed):
            raise DiagramError("surgery homology needs a closed diagram")
        L = self.linking_matrix()
        return abelian_group_of_presentation(L, L.nrows)

    def h1_order(self):
        """|H1| = |det L|, or 0 for infinite first homology."""
        free, torsion = self.surgery_homology()
        if free:
            return 0
        out = 1
        for t in torsion:
            out *= t
        return out


def parse_diagram(text):
    """Parse the line format: header lines ``top:``, ``bottom:``, ``framing:``,
    then one event per line.  Blank lines and ``#`` comments are ignored."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return FramedDiagram.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise DiagramError("bad diagram JSON: %s" % exc) from None
    top, bottom, framings, events = [], [], None, []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line:
            key, _, rest = line.partition(":")
            nums = rest.split()
            try:
                vals = [int(x) for x in nums]
            except ValueError:
                raise DiagramError("non-integer entry in %r" % raw) from None
            key = key.strip().lower()
            if key == "top":
                top = vals
            elif key == "bottom":
                bottom = vals
            elif key in ("framing", "framings"):
                framings = vals
            else:
                raise DiagramError("unknown header %r" % key)
        else:
            events.extend(Event.parse(tok) for tok in re.findall(r"[^\s,;]+\([^)]*\)", line)
                          or [line])
    return FramedDiagram(top, bottom, events, framings)


def build_diagram(spec):
    """Build from a dict (JSON form) or from text."""
    if isinstance(spec, FramedDiagram):
        return spec
    if isinstance(spec, str):
        return parse_diagram(spec)
    return FramedDiagram.from_json(spec)


# ---------------------------------------------------------------------------
# Hennings evaluation
#
# Beads: at a crossing the over strand carries the second tensor factor of R
# (of R^-1 at x-) and the under strand the first.  Walking a closed component
# along its traversal orientation, each bead multiplies the word from the left,
# with S applied when the strand runs upward.  A counterclockwise minimum
# contributes the pivot G and a clockwise maximum G^-1.  This is the bead form
# of the functorial evaluation in the module category, so replacing the
# closing functional by a trace on a module reproduces the usual quantum
# invariant.  Hennings closes with the symmetric form x -> lambda(G x).


def _sparse(v):
    return {i: c for i, c in enumerate(v) if c}


def _rank_decomposition(A, T):
    """Write an n x n table T as sum_j s_j (x) t_j with the minimal number of terms."""
    from .exactlin import rref
    n = A.n
    M = Matrix([[T[p][q] for q in range(n)] for p in range(n)], n)
    Rr, piv = rref(M)
    firsts = [[M[p, q] for p in range(n)] for q in piv]
    seconds = [[Rr[j, q] for q in range(n)] for j in range(len(piv))]
    return list(zip(firsts, seconds))


class HenningsData:
    """Ribbon data prepared for evaluating closed framed diagrams.

    ``twist`` is the ribbon element v, ``pivot`` the grouplike G with
    v = G^-1 u, and ``cointegral`` a right cointegral.  The closing form
    x -> lambda(G x) must be symmetric; if it is not, the left cointegral with
    G^-1 is tried before giving up."""

    def __init__(self, A, R, twist, pivot, cointegral, name=None, left_cointegral=None):
        from .hopfalg import r_inverse
        self.A = A
        self.name = name or A.name
        self.terms = {1: _rank_decomposition(A, R), -1: _rank_decomposition(A, r_inverse(A, R))}
        self._mult = A.mult
        self._cache = {}
        self.twist = twist
        self.pivot = pivot
        self.pivot_inv = A.inverse_element(pivot)
        self.form = None
        for lam, g in ((cointegral, pivot), (left_cointegral, self.pivot_inv)):
            if lam is None:
                continue
            form = [sum((c * l for c, l in zip(A.mul(g, A.basis(i)), lam)), A.zero_scalar)
                    for i in range(A.n)]
            if self._symmetric(form):
                self.form = form
                break
        if self.form is None:
            raise DiagramError("no symmetric closing form lambda(G x) for %s" % self.name)

    def _symmetric(self, form):
        A = self.A
        for i in range(A.n):
            for j in range(i + 1, A.n):
                x, y = A.mul(A.basis(i), A.basis(j)), A.mul(A.basis(j), A.basis(i))
                if sum((f * (a - b) for f, a, b in zip(form, x, y)), A.zero_scalar):
                    return False
        return True

    # sparse arithmetic ------------------------------------------------------------
    def mul(self, x, y):
        out = {}
        mult = self._mult
        for i, a in x.items():
            row = mult[i]
            for j, b in y.items():
                ab = a * b
                for k, c in row[j].items():
                    out[k] = out.get(k, 0) + ab * c
        return {k: c for k, c in out.items() if c}

    def close(self, x):
        form = self.form
        return sum((c * form[i] for i, c in x.items()), self.A.zero_scalar)

    def power(self, base, k):
        key = (base, k)
        if key not in self._cache:
            A = self.A
            x = self.twist if base == "v" else self.pivot
            if k < 0:
                x = A.inverse_element(x)
            self._cache[key] = _sparse(A.power(x, abs(k)))
        return self._cache[key]

    def bead(self, sign, j, over, upward):
        key = (sign, j, over, upward)
        if key not in self._cache:
            x = self.terms[sign][j][1 if over else 0]
            self._cache[key] = _sparse(self.A.S(x) if upward else x)
        return self._cache[key]

    def rank(self, sign):
        return len(self.terms[sign])


def _component_items(d, path):
    """Bead slots of one component in traversal order."""
    items = []
    prev = None
    for it in path:
        if it[0] == "seg":
            prev = it
        elif it[0] == "x":
            items.append(("x", it[1], it[2] == "over", prev[2] == "up"))
        else:
            kind = d.events[it[1]].kind
            if kind == "cup" and it[2] == "ccw":
                items.append(("g", 1))
            elif kind == "cap" and it[2] == "cw":
                items.append(("g", -1))
    return items


def _component_table(data, items, signs, tail):
    """Map crossing labels -> closed value, skipping labels that give zero."""
    ks = []
    for it in items:
        if it[0] == "x" and it[1] not in ks:
            ks.append(it[1])
    table = {}
    labels = {}

    def rec(pos, word):
        if not word:
            return
        if pos == len(items):
            val = data.close(data.mul(tail, word))
            if val:
                table[tuple(labels[k] for k in ks)] = val
            return
        it = items[pos]
        if it[0] == "g":
            rec(pos + 1, data.mul(data.power("G", it[1]), word))
            return
        _, k, over, up = it
        s = signs[k]
        if k in labels:
            rec(pos + 1, data.mul(data.bead(s, labels[k], over, up), word))
            return
        for j in range(data.rank(s)):
            labels[k] = j
            rec(pos + 1, data.mul(data.bead(s, j, over, up), word))
        del labels[k]

    rec(0, _sparse(data.A.one()))
    return ks, table


def hennings_unnormalized(d, data):
    """Sum over crossing labels of the product over components of the closed words."""
    d = build_diagram(d)
    if not all(d.trace.closed):
        raise DiagramError("Hennings evaluation needs a closed diagram")
    t = d.trace
    signs = {k: (1 if d.events[k].kind == "x+" else -1) for k in t.crossings}
    writhe = d.writhes()
    tables = []
    for c, path in enumerate(t.components):
        corr = d.framings[c] - writhe[c]
        tail = data.power("v", -corr)
        tables.append(_component_table(data, _component_items(d, path), signs, tail))
    # join the sparse tables; components sharing many crossings first
    tables.sort(key=lambda kt: (len(kt[1]), -len(kt[0])))
    zero = data.A.zero_scalar
    one = data.A.one_scalar
    partial = {(): one}
    keys = ()
    for ks, table in tables:
        shared = [k for k in ks if k in keys]
        new_keys = keys + tuple(k for k in ks if k not in keys)
        pos_in_old = {k: i for i, k in enumerate(keys)}
        pos_in_tab = {k: i for i, k in enumerate(ks)}
        fresh = [pos_in_tab[k] for k in ks if k not in pos_in_old]
        index = {}
        for lab, val in table.items():
            index.setdefault(tuple(lab[pos_in_tab[k]] for k in shared), []).append((lab, val))
        nxt = {}
        for plab, pval in partial.items():
            key = tuple(plab[pos_in_old[k]] for k in shared)
            for lab, val in index.get(key, ()):
                nl = plab + tuple(lab[i] for i in fresh)
                nxt[nl] = nxt.get(nl, zero) + pval * val
        partial = {k: v for k, v in nxt.items() if v}
        keys = new_keys
        if not partial:
            return zero
    return sum(partial.values(), zero)


def signature_counts(L):
    """(b+, b-, b0) of a symmetric rational matrix by congruence diagonalization."""
    n = L.nrows
    M = [[Fraction(L[i, j]) for j in range(n)] for i in range(n)]
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if M[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and M[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # replace e_i by e_i + e_j: the new diagonal entry is 2 M[i][j] + M[j][j] = 2 M[i][j]
            for r in range(n):
                M[r][i] += M[r][j]
            for c in range(n):
                M[i][c] += M[j][c]
            piv = i
        p = M[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            f = M[i][piv] / p
            if f:
                for c in range(n):
                    M[i][c] -= f * M[piv][c]
                for r in range(n):
                    M[r][i] -= f * M[r][piv]
    return pos, neg, n - pos - neg


_UNKNOT = ("cap(0)", "cup(0)")


def hennings_normalizers(data):
    """(r+, r-): the unnormalized values of the +1 and -1 framed unknots."""
    key = ("normalizers",)
    if key not in data._cache:
        data._cache[key] = tuple(
            hennings_unnormalized(FramedDiagram((), (), _UNKNOT, [f]), data) for f in (1, -1))
    return data._cache[key]


def hennings_evaluate(d, data):
    """Normalized Hennings value: Z / (r+^b+ r-^b-) with b+- from the linking matrix."""
    d = build_diagram(d)
    if not all(d.trace.closed):
        raise DiagramError("Hennings evaluation needs a closed diagram; found %d open strands"
                           % sum(1 for c in d.trace.closed if not c))
    if not d.events:
        return data.A.one_scalar
    bp, bm, _ = signature_counts(d.linking_matrix())
    rp, rm = hennings_normalizers(data)
    if (bp and not rp) or (bm and not rm):
        raise DiagramError("vanishing normalizers for %s (r+ = %s, r- = %s)"
                           % (data.name, rp, rm))
    z = hennings_unnormalized(d, data)
    return z / (rp ** bp * rm ** bm) if (bp or bm) else z


def hennings_data(name):
    """Prepared Hennings data for a builtin ribbon algebra.

    Names: d-z2, d-z3, d-s3 (doubles of group algebras), uqsl2 (ell = 3) and
    d-sweedler (the double of Sweedler's algebra made ribbon by adjoining a
    central grouplike, since the double itself has no ribbon element)."""
    from . import hopfalg as h
    key = name.lower()
    if key in _HDATA:
        return _HDATA[key]
    if key in ("d-z2", "d-z3", "d-s3"):
        H = h.group_algebra(int(key[-1])) if key != "d-s3" else h.symmetric_group_algebra(3)
        D, rib = h.drinfeld_double(H)
    elif key == "d-sweedler":
        D, rib = h.drinfeld_double(h.sweedler(), extend=True)
    elif key in ("uqsl2", "uq", "u_q(sl2)"):
        D, rib = h.quantum_sl2_ribbon(3)
    else:
        raise DiagramError("unknown Hennings algebra %r; known: %s" % (name, ", ".join(HENNINGS_NAMES)))
    I = h.integrals_of(D)
    data = HenningsData(D, rib.R, rib.ribbonV, rib.pivot, I.rightCointegral, key,
                        left_cointegral=I.cointegral)
    _HDATA[key] = data
    return data


HENNINGS_NAMES = ("d-z2", "d-z3", "d-s3", "d-sweedler", "uqsl2")
_HDATA = {}


# ---------------------------------------------------------------------------
# moves

MOVE_KINDS = ("isotopySlide", "o2Slide", "zeroHopfAddRemove", "tauMove", "sigmaMove")


class MoveKind:
    """A move together with its site parameters.

    isotopySlide(rule, level, pos, inverse)    a local isotopy rewrite, see ISOTOPY_RULES
    o2Slide(a, b, side, site)                  slide component a over the closed component b
    zeroHopfAddRemove(op, level, pos, framing) add or remove an isolated Hopf link
    tauMove(end, group, level)                 push a strand across a group near the boundary
    sigmaMove(end, group, pair, inverse)       replace a pair by arc, annulus, arc
    """

    def __init__(self, kind, **params):
        if kind not in MOVE_KINDS:
            raise DiagramError("unknown move kind %r" % kind)
        self.kind = kind
        self.params = dict(params)

    def get(self, key, default=None):
        return self.params.get(key, default)

    def to_json(self):
        return {"kind": self.kind, **self.params}

    @classmethod
    def from_json(cls, data):
        data = dict(data)
        return cls(data.pop("kind"), **data)

    def __repr__(self):
        args = ", ".join("%s=%r" % kv for kv in sorted(self.params.items()))
        return "%s(%s)" % (self.kind, args)


def _rows(d):
    """Component index of every strand, row by row (row k sits above event k)."""
    t = d.trace
    comp = t.component_of
    return [[comp[s] for s in row] for row in list(t.levels) + [t.final_row]]


def _component_labels(d):
    """Old component of each endpoint and each extremum event."""
    t = d.trace
    ext = {}
    for c, path in enumerate(t.components):
        for it in path:
            if it[0] == "ext":
                ext[it[1]] = c
    return ext


def _rebuild(old, events, origins, new_labels, framing_of=None):
    """Assemble a diagram after a rewrite.

    ``origins[k]`` is the old level an event came from (or None);
    ``new_labels[k]`` labels fresh extrema.  Arcs keep the label of their old
    endpoint.  ``framing_of`` maps label -> framing and defaults to the old
    framings."""
    trial = FramedDiagram(old.top, old.bottom, events, None, check=False)
    t, ot = trial.trace, old.trace
    old_ext = _component_labels(old)
    top_owner = {p: c for c in range(old.ncomponents) for p in ot.tops_of[c]}
    bot_owner = {p: c for c in range(old.ncomponents) for p in ot.bottoms_of[c]}
    labels = []
    for c, path in enumerate(t.components):
        lab = None
        if t.tops_of[c]:
            lab = top_owner[t.tops_of[c][0]]
        elif t.bottoms_of[c]:
            lab = bot_owner[t.bottoms_of[c][0]]
        else:
            for it in path:
                if it[0] != "ext":
                    continue
                k = it[1]
                if k in new_labels:
                    lab = new_labels[k]
                    break
                if origins[k] is not None:
                    lab = old_ext[origins[k]]
                    break
        if lab is None:
            raise DiagramError("internal: unlabeled component after rewrite")
        labels.append(lab)
    table = dict(enumerate(old.framings))
    if framing_of:
        table.update(framing_of)
    try:
        framings = [table[lab] for lab in labels]
    except KeyError as exc:
        raise DiagramError("internal: no framing for component %r" % exc.args[0]) from None
    return FramedDiagram(old.top, old.bottom, events, framings)


def _replace(d, start, stop, new, new_labels=None):
    """Replace events[start:stop] by ``new`` and rebuild with labels tracked."""
    new = [_as_event(e) for e in new]
    events = list(d.events[:start]) + new + list(d.events[stop:])
    origins = list(range(start)) + [None] * len(new) + list(range(stop, len(d.events)))
    labels = {start + j: lab for j, lab in (new_labels or {}).items()}
    return _rebuild(d, events, origins, labels)


# Local isotopy rewrites.  Each rule is (lhs, rhs) as functions of a position i;
# the forward direction replaces lhs by rhs.  Comments name the strand geometry.
def _ev(kind, pos):
    return Event(kind, pos)


ISOTOPY_RULES = {
    # Reidemeister II and III
    "r2+": (lambda i: [], lambda i: [_ev("x+", i), _ev("x-", i)]),
    "r2-": (lambda i: [], lambda i: [_ev("x-", i), _ev("x+", i)]),
    "r3+": (lambda i: [_ev("x+", i), _ev("x+", i + 1), _ev("x+", i)],
            lambda i: [_ev("x+", i + 1), _ev("x+", i), _ev("x+", i + 1)]),
    "r3-": (lambda i: [_ev("x-", i), _ev("x-", i + 1), _ev("x-", i)],
            lambda i: [_ev("x-", i + 1), _ev("x-", i), _ev("x-", i + 1)]),
    # zigzags on the strand at i
    "zigzagRight": (lambda i: [], lambda i: [_ev("cap", i + 1), _ev("cup", i)]),
    "zigzagLeft": (lambda i: [], lambda i: [_ev("cap", i), _ev("cup", i + 1)]),
    # curls on the strand at i (framing integers are carried separately)
    "kinkRight+": (lambda i: [], lambda i: [_ev("cap", i + 1), _ev("x+", i), _ev("cup", i + 1)]),
    "kinkRight-": (lambda i: [], lambda i: [_ev("cap", i + 1), _ev("x-", i), _ev("cup", i + 1)]),
    "kinkLeft+": (lambda i: [], lambda i: [_ev("cap", i), _ev("x+", i + 1), _ev("cup", i)]),
    "kinkLeft-": (lambda i: [], lambda i: [_ev("cap", i), _ev("x-", i + 1), _ev("cup", i)]),
    # a strand passes over/under a maximum from the left or from the right
    "capOverFromLeft": (lambda i: [_ev("cap", i)],
                        lambda i: [_ev("cap", i + 1), _ev("x-", i), _ev("x-", i + 1)]),
    "capUnderFromLeft": (lambda i: [_ev("cap", i)],
                         lambda i: [_ev("cap", i + 1), _ev("x+", i), _ev("x+", i + 1)]),
    "capOverFromRight": (lambda i: [_ev("cap", i + 1)],
                         lambda i: [_ev("cap", i), _ev("x+", i + 1), _ev("x+", i)]),
    "capUnderFromRight": (lambda i: [_ev("cap", i + 1)],
                          lambda i: [_ev("cap", i), _ev("x-", i + 1), _ev("x-", i)]),
    # ... and over/under a minimum
    "cupOverFromLeft": (lambda i: [_ev("cup", i + 1)],
                        lambda i: [_ev("x-", i), _ev("x-", i + 1), _ev("cup", i)]),
    "cupUnderFromLeft": (lambda i: [_ev("cup", i + 1)],
                         lambda i: [_ev("x+", i), _ev("x+", i + 1), _ev("cup", i)]),
    "cupOverFromRight": (lambda i: [_ev("cup", i)],
                         lambda i: [_ev("x+", i + 1), _ev("x+", i), _ev("cup", i + 1)]),
    "cupUnderFromRight": (lambda i: [_ev("cup", i)],
                          lambda i: [_ev("x-", i + 1), _ev("x-", i), _ev("cup", i + 1)]),
}


def _width_change(ev):
    return {"cap": 2, "cup": -2}.get(ev.kind, 0)


def _far_commute(e1, e2):
    """Swap two consecutive events acting on disjoint strands; None if they touch."""
    # strands of the row between the two events that each event uses
    used1 = {e1.pos, e1.pos + 1} if e1.kind != "cup" else set()
    used2 = {e2.pos, e2.pos + 1} if e2.kind != "cap" else set()
    if used1 & used2:
        return None
    if e1.kind == "cup":
        # the cup leaves a seam between positions pos-1 and pos
        if e2.kind == "cap" and e2.pos == e1.pos:
            return None
        if e2.kind != "cap" and e2.pos < e1.pos < e2.pos + 2:
            return None
        right = e2.pos >= e1.pos
    else:
        lo = e1.pos
        if e2.kind == "cap":
            if e2.pos == lo + 1:
                return None
            right = e2.pos > lo + 1
        else:
            right = e2.pos > lo
    if right:
        n2 = Event(e2.kind, e2.pos - _width_change(e1))
        n1 = Event(e1.kind, e1.pos)
    else:
        n2 = Event(e2.kind, e2.pos)
        n1 = Event(e1.kind, e1.pos + _width_change(e2))
    if n2.pos < 0 or n1.pos < 0:
        return None
    return n2, n1


def _isotopy(d, rule, level, pos=None, inverse=False):
    ev = list(d.events)
    k = int(level)
    if rule == "commute":
        if not 0 <= k < len(ev) - 1:
            raise DiagramError("commute needs events at levels %d and %d" % (k, k + 1))
        pair = _far_commute(ev[k], ev[k + 1])
        if pair is None:
            raise DiagramError("events at levels %d and %d share a strand" % (k, k + 1))
        events = ev[:k] + list(pair) + ev[k + 2:]
        origins = list(range(len(ev)))
        origins[k], origins[k + 1] = k + 1, k
        return _rebuild(d, events, origins, {})
    if rule not in ISOTOPY_RULES:
        raise DiagramError("unknown isotopy rule %r" % rule)
    lhs, rhs = ISOTOPY_RULES[rule]
    if inverse:
        lhs, rhs = rhs, lhs
    if pos is None:
        raise DiagramError("isotopy rule %r needs a position" % rule)
    i = int(pos)
    if i < 0:
        raise DiagramError("negative position")
    old, new = lhs(i), rhs(i)
    if ev[k:k + len(old)] != old or k > len(ev):
        raise DiagramError("rule %r%s does not match at level %d" %
                           (rule, " (inverse)" if inverse else "", k))
    rows = _rows(d)
    old_ext = _component_labels(d)
    owner = [old_ext[k + j] for j, e in enumerate(old) if e.kind in ("cap", "cup")]
    if owner:
        lab = owner[0]
    elif k < len(rows) and i < len(rows[k]):
        lab = rows[k][i]
    else:
        lab = None
    labels = {j: lab for j, e in enumerate(new) if e.kind in ("cap", "cup")}
    if labels and lab is None:
        raise DiagramError("no strand at position %d of level %d" % (i, k))
    return _replace(d, k, k + len(old), new, labels)


def _double_component(d, b, side):
    """Blackboard parallel of closed component b.

    Returns (events, origins, ext labels) where fresh extrema of the copy are
    labelled 'copy' and those of b itself keep b."""
    t = d.trace
    direction = {}
    for path in t.components:
        for it in path:
            if it[0] == "seg":
                direction[it[1]] = it[2]

    def copy_right(sid):
        return (direction[sid] == "down") == (side > 0)

    events, origins, labels = [], [], {}
    for k, ev in enumerate(d.events):
        row = t.levels[k]
        isb = [t.component_of[s] == b for s in row]

        def newpos(j):
            return j + sum(isb[:j])

        i = ev.pos
        P = newpos(i)
        if ev.kind == "cap":
            below = [s for s in t.segments if s.upper == ("ev", k)]
            below.sort(key=lambda s: s.slot_above)
            if t.component_of[below[0].sid] == b:
                outer_is_copy = not copy_right(below[0].sid)
                for j, outer in ((0, True), (1, False)):
                    labels[len(events)] = "copy" if outer == outer_is_copy else b
                    events.append(Event("cap", P + j))
                    origins.append(None)
            else:
                events.append(Event("cap", P))
                origins.append(k)
        elif ev.kind == "cup":
            if isb[i]:
                outer_is_copy = not copy_right(row[i])
                for j, outer in ((1, False), (0, True)):
                    labels[len(events)] = "copy" if outer == outer_is_copy else b
                    events.append(Event("cup", P + j))
                    origins.append(None)
            else:
                events.append(Event("cup", P))
                origins.append(k)
        else:
            kind = ev.kind
            lb, rb = isb[i], isb[i + 1]
            if lb and rb:
                seq = [P + 1, P, P + 2, P + 1]
            elif lb:
                seq = [P + 1, P]
            elif rb:
                seq = [P, P + 1]
            else:
                seq = [P]
            for p in seq:
                events.append(Event(kind, p))
                origins.append(k if len(seq) == 1 else None)
    return events, origins, labels


def _o2_slide(d, a, b, side=1, site=0):
    a, b, side, site = int(a), int(b), int(side), int(site)
    n = d.ncomponents
    if not (0 <= a < n and 0 <= b < n) or a == b:
        raise DiagramError("o2Slide needs two distinct components, got %d and %d" % (a, b))
    if not d.trace.closed[b]:
        raise DiagramError("o2Slide can only slide over a closed component")
    if side not in (1, -1):
        raise DiagramError("o2Slide side must be +1 or -1")
    events, origins, labels = _double_component(d, b, side)
    wr = d.writhes()
    twist = d.framings[b] - wr[b]
    # full twists between b and its copy, just inside the first maximum of b
    outer = min(k for k in labels if events[k].kind == "cap")
    x = "x+" if twist > 0 else "x-"
    extra = [Event(x, events[outer].pos)] * (2 * abs(twist))
    cut = outer + 2
    events = events[:cut] + extra + events[cut:]
    origins = origins[:cut] + [None] * len(extra) + origins[cut:]
    labels = {(k + len(extra) if k >= cut else k): lab for k, lab in labels.items()}
    # find a row where a and the copy of b sit side by side
    trial = FramedDiagram(d.top, d.bottom, events, None, check=False)
    tt = trial.trace
    lab = [_label_of(trial, c, d, origins, labels) for c in range(trial.ncomponents)]
    rows = _rows(trial)
    sites = []
    for k, row in enumerate(rows):
        for q in range(len(row) - 1):
            if {lab[row[q]], lab[row[q + 1]]} == {a, "copy"}:
                sites.append((k, q))
    if not sites:
        raise DiagramError("component %d never runs next to the parallel of %d; "
                           "try the other side" % (a, b))
    if not 0 <= site < len(sites):
        raise DiagramError("o2Slide site %d out of range (%d available)" % (site, len(sites)))
    k, q = sites[site]
    events = events[:k] + [Event("cup", q), Event("cap", q)] + events[k:]
    origins = origins[:k] + [None, None] + origins[k:]
    labels = {(j + 2 if j >= k else j): v for j, v in labels.items()}
    labels[k] = labels[k + 1] = "copy"
    # the copy joins a; its framing follows from the writhe bookkeeping
    labels = {j: (a if v == "copy" else v) for j, v in labels.items()}
    provisional = _rebuild(d, events, origins, labels)
    new_wr = provisional.writhes()
    slid = [c for c in range(provisional.ncomponents)
            if _label_of(provisional, c, d, origins, labels) == a][0]
    fa = new_wr[slid] + (d.framings[a] - wr[a]) + twist
    return _rebuild(d, events, origins, labels, {a: fa})


def _label_of(new, c, old, origins, labels):
    t = new.trace
    if t.tops_of[c]:
        return next(o for o in range(old.ncomponents) if t.tops_of[c][0] in old.trace.tops_of[o])
    if t.bottoms_of[c]:
        return next(o for o in range(old.ncomponents)
                    if t.bottoms_of[c][0] in old.trace.bottoms_of[o])
    old_ext = _component_labels(old)
    for it in t.components[c]:
        if it[0] == "ext":
            k = it[1]
            return labels[k] if k in labels else old_ext[origins[k]]
    return None


def _hopf_pattern(pos, sign):
    x = "x+" if sign > 0 else "x-"
    return [Event("cap", pos), Event("cap", pos + 2), Event(x, pos + 1), Event(x, pos + 1),
            Event("cup", pos + 2), Event("cup", pos)]


def _zero_hopf(d, op="add", level=0, pos=0, framing=0, sign=1):
    k, i = int(level), int(pos)
    if op == "add":
        if int(framing) not in (0, 1):
            raise DiagramError("the second Hopf component must have framing 0 or 1")
        if not 0 <= k <= len(d.events):
            raise DiagramError("level %d outside the word" % k)
        width = len(_rows(d)[k])
        if not 0 <= i <= width:
            raise DiagramError("position %d outside a row of %d strands" % (i, width))
        new = _hopf_pattern(i, 1 if int(sign) > 0 else -1)
        return _rebuild(d, list(d.events[:k]) + new + list(d.events[k:]),
                        list(range(k)) + [None] * 6 + list(range(k, len(d.events))),
                        {k: ("hopf", 0), k + 1: ("hopf", 1), k + 4: ("hopf", 1),
                         k + 5: ("hopf", 0)},
                        {("hopf", 0): 0, ("hopf", 1): int(framing)})
    if op != "remove":
        raise DiagramError("zeroHopfAddRemove op must be 'add' or 'remove'")
    block = list(d.events[k:k + 6])
    if len(block) < 6:
        raise DiagramError("no Hopf link at level %d" % k)
    i = block[0].pos
    if block not in (_hopf_pattern(i, 1), _hopf_pattern(i, -1)):
        raise DiagramError("no isolated Hopf link at level %d" % k)
    ext = _component_labels(d)
    f = sorted(d.framings[ext[k + j]] for j in (0, 1))
    if f not in ([0, 0], [0, 1]):
        raise DiagramError("Hopf link at level %d has framings %s" % (k, f))
    return _replace(d, k, k + 6, [])


def _group_offset(sizes, g):
    if not 0 <= g < len(sizes):
        raise DiagramError("no group %d (have %d)" % (g, len(sizes)))
    return sum(sizes[:g]), sizes[g]


def _first_touch(events, lo, size):
    """Walk the word from the boundary keeping track of a block of ``size``
    strands starting at ``lo``; return (level, lo) of the first event that
    touches the block."""
    for k, e in enumerate(events):
        if e.kind == "cap":
            if lo < e.pos < lo + size:
                return k, lo
            if e.pos <= lo:
                lo += 2
        elif e.pos + 1 >= lo and e.pos < lo + size:
            return k, lo
        elif e.kind == "cup" and e.pos < lo:
            lo -= 2
    return None, lo


def _tau(d, end="source", group=0, level=None):
    """Flip a run of crossings that carries one strand across a whole group
    right next to the boundary."""
    g = int(group)
    ev = list(d.events)
    if end == "source":
        off, size = _group_offset(d.top, g)
        walk = ev
    elif end == "target":
        off, size = _group_offset(d.bottom, g)
        # read bottom-up: maxima and minima trade places
        swap = {"cap": "cup", "cup": "cap", "x+": "x+", "x-": "x-"}
        walk = [Event(swap[e.kind], e.pos) for e in reversed(ev)]
    else:
        raise DiagramError("tauMove end must be 'source' or 'target'")
    if size == 0:
        raise DiagramError("group %d is empty" % g)
    start, lo = _first_touch(walk, off, size)
    if start is None:
        raise DiagramError("nothing crosses group %d" % g)
    run = walk[start:start + size]
    if len(run) < size or any(e.kind not in ("x+", "x-") for e in run):
        raise DiagramError("no strand passes across group %d" % g)
    if len({e.kind for e in run}) != 1:
        raise DiagramError("the strand does not pass entirely over or under group %d" % g)
    positions = [e.pos for e in run]
    if positions not in (list(range(lo - 1, lo - 1 + size)),
                         list(range(lo + size - 1, lo - 1, -1))):
        raise DiagramError("the crossings next to group %d do not sweep the group" % g)
    levels = range(start, start + size) if end == "source" else \
        range(len(ev) - 1 - start, len(ev) - 1 - start - size, -1)
    if level is not None and int(level) not in levels:
        raise DiagramError("the run at group %d does not include level %s" % (g, level))
    new = list(ev)
    for j in levels:
        new[j] = Event("x-" if ev[j].kind == "x+" else "x+", ev[j].pos)
    return _rebuild(d, new, list(range(len(ev))), {})


def _sigma_pattern(p):
    return [Event("cap", p + 2), Event("x+", p + 1), Event("x+", p + 1), Event("cup", p),
            Event("cap", p), Event("x+", p + 1), Event("x+", p + 1), Event("cup", p + 2)]


def _sigma(d, end="source", group=0, pair=0, inverse=False):
    g, nu = int(group), int(pair)
    sizes = d.top if end == "source" else d.bottom
    if end not in ("source", "target"):
        raise DiagramError("sigmaMove end must be 'source' or 'target'")
    off, size = _group_offset(sizes, g)
    if not 0 <= 2 * nu < size:
        raise DiagramError("group %d has no pair %d" % (g, nu))
    p = off + 2 * nu
    pattern = _sigma_pattern(p)
    k = 0 if end == "source" else len(d.events) - (8 if inverse else 0)
    if inverse:
        if list(d.events[k:k + 8]) != pattern:
            raise DiagramError("no sigma pattern at pair %d of group %d" % (nu, g))
        return _replace(d, k, k + 8, [])
    return _rebuild(d, list(d.events[:k]) + pattern + list(d.events[k:]),
                    list(range(k)) + [None] * 8 + list(range(k, len(d.events))),
                    {k: ("annulus",), k + 7: ("annulus",)}, {("annulus",): 0})


def apply_move(d, move):
    """Apply a move and return the new diagram; raises DiagramError when the
    site does not fit."""
    if isinstance(move, dict):
        move = MoveKind.from_json(move)
    p = move.params
    try:
        if move.kind == "isotopySlide":
            return _isotopy(d, p["rule"], p.get("level", 0), p.get("pos"), p.get("inverse", False))
        if move.kind == "o2Slide":
            return _o2_slide(d, p["a"], p["b"], p.get("side", 1), p.get("site", 0))
        if move.kind == "zeroHopfAddRemove":
            return _zero_hopf(d, p.get("op", "add"), p.get("level", 0), p.get("pos", 0),
                              p.get("framing", 0), p.get("sign", 1))
        if move.kind == "tauMove":
            return _tau(d, p.get("end", "source"), p.get("group", 0), p.get("level"))
        return _sigma(d, p.get("end", "source"), p.get("group", 0), p.get("pair", 0),
                      p.get("inverse", False))
    except KeyError as exc:
        raise DiagramError("%s is missing parameter %s" % (move.kind, exc.args[0])) from None


def inverse_move(d, move):
    """A move undoing ``move`` applied to d, when one exists syntactically.

    Slides have no syntactic inverse (sliding back gives an isotopic but
    different word); None is returned for them."""
    p = dict(move.params)
    if move.kind == "isotopySlide":
        if p["rule"] == "commute":
            return move
        p["inverse"] = not p.get("inverse", False)
        return MoveKind("isotopySlide", **p)
    if move.kind == "zeroHopfAddRemove":
        if p.get("op", "add") == "add":
            return MoveKind("zeroHopfAddRemove", op="remove", level=p.get("level", 0))
        return None
    if move.kind == "tauMove":
        return move
    if move.kind == "sigmaMove":
        p["inverse"] = not p.get("inverse", False)
        return MoveKind("sigmaMove", **p)
    return None


# ---------------------------------------------------------------------------
# connecting tangles, tables and suites


def _annulus_around(offset, width):
    """Zero-framed annulus encircling strands offset..offset+width-1."""
    ev = [Event("cap", offset)]
    ev += [Event("x-", offset + 1 + j) for j in range(width)]
    ev += [Event("x-", offset + width - j) for j in range(width)]
    ev.append(Event("cup", offset))
    return ev


def connecting_tangle(kind, genera):
    """Pi (K groups to one), PiDagger (one to K) or Lambda (one to one, with
    K-1 zero-framed annuli around the first K-1 blocks)."""
    genera = [int(g) for g in genera]
    if not genera or any(g < 0 for g in genera):
        raise DiagramError("genera must be a non-empty list of non-negative integers")
    sizes = [2 * g for g in genera]
    total = sum(sizes)
    if kind == "Pi":
        return FramedDiagram(sizes, [total] if total else [], ())
    if kind == "PiDagger":
        return FramedDiagram([total] if total else [], sizes, ())
    if kind != "Lambda":
        raise DiagramError("unknown connecting tangle %r" % kind)
    events, off = [], 0
    for s in sizes[:-1]:
        events += _annulus_around(off, s)
        off += s
    d = FramedDiagram([total] if total else [], [total] if total else [], events)
    return FramedDiagram(d.top, d.bottom, d.events, [0] * d.ncomponents)


def lens_diagram(p):
    """The p-framed unknot, a surgery picture of L(p,1)."""
    return FramedDiagram((), (), _UNKNOT, [int(p)])


def _scalar_json(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    return str(x)


def lens_table(data, pmax=6):
    """Rows p, |H1|, value and value/|H1| for L(p,1), p = 1..pmax.

    When the normalizers vanish the unnormalized value is reported instead."""
    rows = []
    for p in range(1, pmax + 1):
        d = lens_diagram(p)
        h1 = d.h1_order()
        try:
            val, status = hennings_evaluate(d, data), "normalized"
        except DiagramError:
            val, status = hennings_unnormalized(d, data), "unnormalized"
        ratio = val / h1 if h1 else None
        rows.append({"p": p, "h1": h1, "value": _scalar_json(val),
                     "ratio": None if ratio is None else _scalar_json(ratio), "status": status})
    return rows


def move_invariance_suite(pairs, data):
    """Apply each move sequence and compare values exactly after every step."""
    report = []
    for d, moves in pairs:
        d = build_diagram(d)
        before = hennings_evaluate(d, data)
        cur = d
        steps = []
        ok = True
        for m in moves:
            m = m if isinstance(m, MoveKind) else MoveKind.from_json(m)
            cur = apply_move(cur, m)
            val = hennings_evaluate(cur, data)
            same = val == before
            ok = ok and same
            steps.append({"move": m.to_json(), "value": _scalar_json(val), "equal": same})
        report.append({"diagram": d.to_json()["events"], "framings": list(d.framings),
                       "value": _scalar_json(before), "steps": steps, "ok": ok})
    return report


def _w(text):
    return text.split()


def curated_move_suite():
    """Closed diagrams with move sequences covering slides, Hopf moves and isotopies."""
    hopf = "cap(0) cap(2) x+(1) x+(1) cup(2) cup(0)"
    nested = "cap(0) cap(1) x+(2) x+(2) cup(1) cup(0)"
    chain = "cap(0) cap(2) cap(4) x+(1) x+(1) x+(3) x+(3) cup(4) cup(2) cup(0)"
    I = lambda rule, level, pos, inverse=False: MoveKind(
        "isotopySlide", rule=rule, level=level, pos=pos, inverse=inverse)
    O = lambda a, b, side=1, site=0: MoveKind("o2Slide", a=a, b=b, side=side, site=site)
    H = lambda level=0, pos=0, framing=0: MoveKind("zeroHopfAddRemove", op="add",
                                                   level=level, pos=pos, framing=framing)
    HR = lambda level: MoveKind("zeroHopfAddRemove", op="remove", level=level)
    D = lambda w, f: FramedDiagram((), (), _w(w), f)
    return [
        (D("cap(0) cup(0)", [2]), [I("zigzagRight", 1, 0)]),
        (D("cap(0) cup(0)", [3]), [I("kinkLeft+", 1, 0)]),
        (D("cap(0) cup(0)", [-2]), [I("kinkRight-", 1, 0), I("kinkRight-", 1, 0, True)]),
        (D(hopf, [2, 1]), [I("r2+", 2, 0)]),
        (D(hopf, [2, 1]), [I("r2-", 2, 0), I("r2-", 2, 0, True)]),
        (D(hopf, [3, 0]), [I("capOverFromRight", 1, 1)]),
        (D(hopf, [2, -1]), [I("zigzagLeft", 3, 1)]),
        (D(nested, [2, 0]), [I("r2-", 3, 1)]),
        (D(chain, [2, 0, 2]), [I("commute", 2, 0)]),
        (D(chain, [1, 2, 1]), [I("r2+", 3, 2), I("r2+", 3, 2, True)]),
        (D("cap(0) cup(0)", [2]), [H(1, 0)]),
        (D("cap(0) cup(0)", [3]), [H(0, 0, 1)]),
        (D(hopf, [2, 1]), [H(3, 0)]),
        (D(hopf, [2, 1]), [H(6, 0), HR(6)]),
        (D(hopf, [1, 2]), [O(0, 1, 1)]),
        (D(hopf, [1, 2]), [O(0, 1, -1)]),
        (D(hopf, [1, 2]), [O(1, 0, 1)]),
        (D(hopf, [2, -1]), [O(0, 1, 1)]),
        (D(hopf, [2, -1]), [O(1, 0, -1)]),
        (D(hopf, [3, 0]), [O(0, 1, 1)]),
        (D(nested, [2, 2]), [O(0, 1, 1)]),
        (D(chain, [2, 0, 2]), [O(0, 1, 1)]),
        (D("cap(0) cap(2) cup(2) cup(0)", [2, 3]), [O(0, 1, 1)]),
        (D(hopf, [2, 2]), [O(1, 0, 1), H(0, 0)]),
    ]


def diagram_to_cobordism(d):
    """The closed manifold presented by a closed diagram as a one-piece datum
    with H1 = Z^m / (linking matrix)."""
    from .cobord import CobordismDatum, Piece
    from .exactlin import rank
    d = build_diagram(d)
    if not all(d.trace.closed):
        raise DiagramError("only closed diagrams present closed manifolds")
    m = d.ncomponents
    L = d.linking_matrix() if m else Matrix.zeros(0, 0)
    h1 = m - (rank(L) if m else 0)
    piece = Piece((), (), h1, Matrix.zeros(h1, 0), 0, None, m, L, Matrix.zeros(m, 0))
    return CobordismDatum((), (), [piece])
