"""Finite ordered topological spaces.

An `OrderedSpace` is a finite point set with a preorder (stored reflexive-
transitively closed, as per-point cone bitmasks) and a finite topology
(a realized `FiniteFrame`).  Pointwise cones, separation predicates, the
three induced orders on opens, and the chain-based causal coverage live
here; everything localic is in `olocale`.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Optional, Sequence

from . import lattice as lat
from . import olocale as ol
from .errors import ValidationError
from .lattice import FiniteFrame, PointSet, bits, mask_of_iter
from .olocale import CheckReport, OrderedLocale


class OrderedSpace:
    """Finite point set + preorder + topology."""

    def __init__(self, n: int, up_rows: list[int], frame: FiniteFrame,
                 labels=None, name: str = ""):
        self.n = n
        self.up = up_rows                        # up[p] = point mask of {q : p <= q}
        self.down = [0] * n
        for p in range(n):
            for q in bits(up_rows[p]):
                self.down[q] |= 1 << p
        self.frame = frame
        self.labels = labels or frame.labels or [str(i) for i in range(n)]
        frame.labels = self.labels
        self.name = name
        self._cone_cache = {}

    # -- construction ------------------------------------------------------

    @classmethod
    def build(cls, n: int, order: Iterable[tuple[int, int]] = (),
              opens="discrete", labels=None, name: str = "",
              order_matrix: Optional[Sequence[Sequence[bool]]] = None
              ) -> "OrderedSpace":
        """Space from order generator pairs (closure is applied) and a
        topology.  A full boolean matrix goes in `order_matrix` instead.

        `opens` is "discrete", "codiscrete", or an explicit family of point
        masks / PointSets (validated for closure).
        """
        rows = [0] * n
        if order_matrix is not None:
            for i in range(n):
                rows[i] = mask_of_iter(j for j in range(n) if order_matrix[i][j])
        for a, b in order:
            rows[a] |= 1 << b
        rows = lat.transitive_closure_rows(rows)
        frame = _topology(n, opens, labels)
        return cls(n, rows, frame, labels=labels, name=name)

    def leq_points(self, p: int, q: int) -> bool:
        return bool(self.up[p] >> q & 1)

    # -- cones ---------------------------------------------------------------

    def up_mask(self, pmask: int) -> int:
        out = 0
        for p in bits(pmask):
            out |= self.up[p]
        return out

    def down_mask(self, pmask: int) -> int:
        out = 0
        for p in bits(pmask):
            out |= self.down[p]
        return out

    def point_set(self, members: Iterable[int]) -> PointSet:
        return PointSet.from_members(self.n, members)

    def pretty_points(self, pmask: int) -> str:
        return "{" + ",".join(str(self.labels[p]) for p in bits(pmask)) + "}"


def _topology(n, opens, labels) -> FiniteFrame:
    if opens == "discrete":
        return lat.frame_from_topology(n, range(1 << n), labels=labels)
    if opens == "codiscrete":
        return lat.frame_from_topology(n, [0, (1 << n) - 1], labels=labels)
    masks = [o.mask if isinstance(o, PointSet) else int(o) for o in opens]
    return lat.frame_from_topology(n, masks, labels=labels)


def up_cone(space: OrderedSpace, a: PointSet) -> PointSet:
    """Future cone of a point set: everything above some point of it."""
    return PointSet(space.n, space.up_mask(a.mask))


def down_cone(space: OrderedSpace, a: PointSet) -> PointSet:
    return PointSet(space.n, space.down_mask(a.mask))


def has_open_cones(space: OrderedSpace) -> CheckReport:
    """Are the pointwise cones of every open again open?

    On failure the witness is (open id, direction) for the smallest
    failing open in element-id order.
    """
    f = space.frame
    if f.kind == "powerset":
        return CheckReport("open-cones", "pass", None,
                           "discrete topology: every subset is open")
    for i in f.elements():
        e = f.mask_of(i)
        if not f.has_mask(space.up_mask(e)):
            return CheckReport("open-cones", "fail", (i, "up"),
                               f"up cone of {f.pretty(i)} is "
                               f"{space.pretty_points(space.up_mask(e))}, not open")
        if not f.has_mask(space.down_mask(e)):
            return CheckReport("open-cones", "fail", (i, "down"),
                               f"down cone of {f.pretty(i)} is not open")
    return CheckReport("open-cones", "pass", None, "exhaustive over opens")


def _cone_maps(space: OrderedSpace) -> tuple[list[int], list[int]]:
    """Pointwise cone of every open, as frame elements (interiors taken)."""
    cached = space._cone_cache.get("maps")
    if cached is not None:
        return cached
    f = space.frame
    if f.kind == "powerset":
        m = f.m
        upt = [0] * m
        dnt = [0] * m
        for s in range(1, m):
            low = s & -s
            r = s ^ low
            upt[s] = upt[r] | space.up[low.bit_length() - 1]
            dnt[s] = dnt[r] | space.down[low.bit_length() - 1]
        maps = (upt, dnt)   # identity interior: all subsets open
    else:
        up_map, down_map = [], []
        for i in f.elements():
            e = f.mask_of(i)
            up_map.append(f.interior(space.up_mask(e)))
            down_map.append(f.interior(space.down_mask(e)))
        maps = (up_map, down_map)
    space._cone_cache["maps"] = maps
    return maps


def induced_locale(space: OrderedSpace, variant: str = "em") -> OrderedLocale:
    """Ordered locale on the topology frame; variant em | upper | lower.

    The causal order comes from the monad pair (interior of the pointwise
    cone, with one side replaced by the constant-top map for the upper and
    lower variants), which reproduces
      em:    U <= V  iff  V inside upcone(U) and U inside downcone(V)
      upper: U <= V  iff  V inside upcone(U)
      lower: U <= V  iff  U inside downcone(V)
    """
    f = space.frame
    up_map, down_map = _cone_maps(space)
    top_const = [f.top] * f.m
    oc = has_open_cones(space).ok
    if variant == "em":
        pair = ol.ConePair(f, list(up_map), list(down_map))
        pointwise = oc
    elif variant == "upper":
        pair = ol.ConePair(f, list(up_map), top_const)
        pointwise = False
    elif variant == "lower":
        pair = ol.ConePair(f, top_const, list(down_map))
        pointwise = False
    else:
        raise ValidationError(f"unknown variant {variant!r}")
    # interiors of pointwise cones are always monads on the open-set lattice;
    # run the full validation only where it is not structural
    validated = pointwise and f.kind == "powerset"
    loc = ol.ordered_locale_from_monads(pair, validated=validated,
                                        cones_pointwise=pointwise,
                                        meta={"variant": variant,
                                              "space": space.name})
    rep = ol.check_axiom(loc, "V")
    if not rep.ok:
        raise ValidationError(f"induced locale lost join closure: {rep.pretty(f)}")
    return loc


# -- separation ---------------------------------------------------------------


def _open_ids_containing(space: OrderedSpace, p: int) -> int:
    """Bitmask over frame element ids of the opens containing p."""
    f = space.frame
    out = 0
    for i in f.elements():
        if f.mask_of(i) >> p & 1:
            out |= 1 << i
    return out


def is_T0(space: OrderedSpace) -> bool:
    if space.frame.kind == "powerset":
        return True
    seen = {}
    for p in range(space.n):
        key = _open_ids_containing(space, p)
        if key in seen:
            return False
        seen[key] = p
    return True


def closure_of_point(space: OrderedSpace, p: int) -> int:
    """Topological closure of {p} as a point mask."""
    if space.frame.kind == "powerset":
        return 1 << p
    mine = _open_ids_containing(space, p)
    out = 0
    for q in range(space.n):
        if _open_ids_containing(space, q) & ~mine == 0:
            out |= 1 << q
    return out


def specialisation_order(frame: FiniteFrame) -> list[int]:
    """x <= y iff every open containing x contains y; rows of point masks."""
    if not frame.realized:
        raise ValidationError("specialisation order needs a realization")
    n = frame.base_size
    if frame.kind == "powerset":
        return [1 << p for p in range(n)]
    containing = []
    for p in range(n):
        out = 0
        for i in frame.elements():
            if frame.mask_of(i) >> p & 1:
                out |= 1 << i
        containing.append(out)
    rows = []
    for x in range(n):
        row = 0
        for y in range(n):
            if containing[x] & ~containing[y] == 0:
                row |= 1 << y
        rows.append(row)
    return rows


def is_sober(space: OrderedSpace) -> bool:
    """Every prime open is the complement of a unique point closure.

    Implemented by the prime-open definition; the finite shortcut
    (sober iff T0) stays a test oracle.
    """
    f = space.frame
    full = (1 << space.n) - 1
    complements = {}
    for p in range(space.n):
        complements.setdefault(full & ~closure_of_point(space, p), []).append(p)
    for pr in f.primes():
        pts = complements.get(f.mask_of(pr), [])
        if len(pts) != 1:
            return False
    return True


def is_T0_ordered(space: OrderedSpace) -> CheckReport:
    """For x not<= y some open separates: U containing x with y outside
    upcone(U), or V containing y with x outside downcone(V)."""
    f = space.frame
    if f.kind == "powerset":
        return CheckReport("T0-ordered", "pass", None,
                           "discrete topology: singleton opens separate")
    for x in range(space.n):
        for y in range(space.n):
            if space.leq_points(x, y):
                continue
            found = False
            for i in f.elements():
                e = f.mask_of(i)
                if e >> x & 1 and not space.up_mask(e) >> y & 1:
                    found = True
                    break
                if e >> y & 1 and not space.down_mask(e) >> x & 1:
                    found = True
                    break
            if not found:
                return CheckReport("T0-ordered", "fail", (x, y),
                                   f"points {space.labels[x]} and {space.labels[y]} "
                                   "are order-inseparable")
    return CheckReport("T0-ordered", "pass", None, "exhaustive over point pairs")


# -- convexity ----------------------------------------------------------------


def is_pointwise_convex(space: OrderedSpace, c: PointSet | int) -> bool:
    mask = c.mask if isinstance(c, PointSet) else c
    return space.up_mask(mask) & space.down_mask(mask) & ~mask == 0


def is_convex_space(space: OrderedSpace) -> CheckReport:
    """Pointwise convex opens form a basis."""
    f = space.frame
    if f.m > 4096:
        convex_opens = None
    else:
        convex_opens = [f.mask_of(i) for i in f.elements()
                        if is_pointwise_convex(space, f.mask_of(i))]
    if convex_opens is None:
        # discrete big frame: singletons are open and convex iff order antisymmetric
        for p in range(space.n):
            if not is_pointwise_convex(space, 1 << p):
                return CheckReport("convex-space", "fail", (p,),
                                   "a singleton is not convex (order not "
                                   "antisymmetric)")
        return CheckReport("convex-space", "pass", None,
                           "discrete topology with convex singletons")
    for i in f.elements():
        e = f.mask_of(i)
        acc = 0
        for c in convex_opens:
            if c & ~e == 0:
                acc |= c
        if acc != e:
            return CheckReport("convex-space", "fail", (i,),
                               f"{f.pretty(i)} is not a union of convex opens")
    return CheckReport("convex-space", "pass", None,
                       f"exhaustive; {len(convex_opens)} convex opens form a basis")


# -- chain coverage -----------------------------------------------------------


def _bad_chain(space: OrderedSpace, amask: int, umask: int) -> Optional[list[int]]:
    """A <=-chain ending in U that avoids A and cannot be extended into A.

    Exact digraph search: start points have pasts disjoint from A; edges
    stay inside the complement of A.
    """
    full = (1 << space.n) - 1
    comp = full & ~amask
    starts = [p for p in bits(comp) if space.down[p] & amask == 0]
    parent = {}
    queue = deque()
    for s in starts:
        if s not in parent:
            parent[s] = None
            queue.append(s)
    target = umask & comp
    hit = None
    for s in starts:
        if target >> s & 1:
            hit = s
            break
    while hit is None and queue:
        x = queue.popleft()
        for y in bits(space.up[x] & comp):
            if y not in parent:
                parent[y] = x
                if target >> y & 1:
                    hit = y
                    queue.clear()
                    break
                queue.append(y)
    if hit is None:
        return None
    chain = [hit]
    while parent[chain[-1]] is not None:
        chain.append(parent[chain[-1]])
    chain.reverse()
    return chain


def chain_covers_below(space: OrderedSpace, a: PointSet | int, u: PointSet | int,
                       strict_past: bool = True) -> CheckReport:
    """Does A cover U from below along <=-chains?

    Fails exactly when some chain ending in U avoids A and starts at a
    point whose past misses A; the witness is such a chain.
    """
    amask = a.mask if isinstance(a, PointSet) else a
    umask = u.mask if isinstance(u, PointSet) else u
    pre_bad = strict_past and amask & ~space.down_mask(umask) != 0
    chain = _bad_chain(space, amask, umask)
    if chain is not None:
        note = "witness chain avoids A with past-blind start"
        if pre_bad:
            note = "precondition: A is not inside the past of U; " + note
        return CheckReport("chain-cover", "fail", tuple(chain), note)
    if pre_bad:
        extra = amask & ~space.down_mask(umask)
        return CheckReport("chain-cover", "fail", tuple(bits(extra)),
                           "precondition: A is not inside the past of U")
    return CheckReport("chain-cover", "pass", None, "digraph reachability, exact")


def pointwise_domain_of_dependence(space: OrderedSpace, a: PointSet | int,
                                   direction: str = "future") -> PointSet:
    """Largest point set every chain into which must come from A."""
    amask = a.mask if isinstance(a, PointSet) else a
    if direction == "past":
        flipped = OrderedSpace(space.n, list(space.down), space.frame,
                               labels=space.labels)
        return PointSet(space.n,
                        pointwise_domain_of_dependence(flipped, amask, "future").mask)
    out = 0
    reach = space.up_mask(amask) | amask
    for y in range(space.n):
        if not reach >> y & 1:
            continue
        if _bad_chain(space, amask, 1 << y) is None:
            out |= 1 << y
    return PointSet(space.n, out)


def is_monotone_fn(src: OrderedSpace, tgt: OrderedSpace, g: Sequence[int]) -> bool:
    return all(tgt.leq_points(g[x], g[y])
               for x in range(src.n) for y in bits(src.up[x]))


def monotone_via_cones(src: OrderedSpace, tgt: OrderedSpace, g: Sequence[int]) -> bool:
    """upcone(g^{-1}(A)) inside g^{-1}(upcone(A)) for all subsets A (and dual)."""
    for amask in range(1 << tgt.n):
        pre = mask_of_iter(x for x in range(src.n) if amask >> g[x] & 1)
        pre_up = mask_of_iter(x for x in range(src.n)
                              if tgt.up_mask(amask) >> g[x] & 1)
        if src.up_mask(pre) & ~pre_up:
            return False
        pre_dn = mask_of_iter(x for x in range(src.n)
                              if tgt.down_mask(amask) >> g[x] & 1)
        if src.down_mask(pre) & ~pre_dn:
            return False
    return True
