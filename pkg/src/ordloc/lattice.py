"""Finite frames (complete Heyting algebras) and frame maps.

Elements are dense integer ids 0..m-1.  Two storage strategies share one
interface:

* mask-backed: the frame is a family of point sets closed under union and
  intersection (a finite topology).  Meets/joins are bit operations on the
  extent masks, so even the full powerset on 16 points (65536 opens) stays
  cheap.  The full-powerset case is detected and element ids then literally
  equal extent masks.
* table-backed: an abstract finite lattice given by its order; meet/join
  tables are precomputed and the lattice + distributive laws are verified
  eagerly at construction.

Subsets of points and subsets of element ids are both carried as Python
int bitmasks throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    MissingBottomOrTop,
    NotAFrameMap,
    NotALattice,
    NotClosedUnderJoin,
    NotClosedUnderMeet,
    NotDistributive,
    ValidationError,
)

# Exhaustive-scan budget: frames at or below this size get the full
# O(m^2)/O(m^3) law checks, larger mask frames rely on set-theoretic
# structure (their ops *are* set ops).
TABLE_LIMIT = 700


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int):
    """Iterate the set bit positions of x in increasing order."""
    while x:
        b = x & -x
        yield b.bit_length() - 1
        x ^= b


def mask_of_iter(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class PointSet:
    """A subset of a fixed finite base, stored as a bitmask."""

    base_size: int
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.base_size:
            raise ValidationError(f"point ids out of range for base {self.base_size}")

    @classmethod
    def from_members(cls, base_size: int, members: Iterable[int]) -> "PointSet":
        return cls(base_size, mask_of_iter(members))

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(bits(self.mask))

    def __contains__(self, p: int) -> bool:
        return bool(self.mask >> p & 1)

    def __len__(self) -> int:
        return popcount(self.mask)


class FiniteFrame:
    """A finite frame: bounded distributive lattice with all (finite) joins.

    Do not call the constructor directly; use `frame_from_topology`,
    `frame_from_poset_downsets`, `frame_from_order` or `subframe`.
    """

    def __init__(self, *, kind, m, bottom, top, ext=None, base_size=None,
                 meet_t=None, join_t=None, down_rows=None, labels=None, meta=None):
        self.kind = kind                  # "powerset" | "mask" | "table"
        self.m = m
        self.bottom = bottom
        self.top = top
        self.base_size = base_size
        self._ext = ext                   # list: element id -> point mask
        self._id_of = None if ext is None else {v: i for i, v in enumerate(ext)}
        self._meet_t = meet_t             # list of lists (table frames)
        self._join_t = join_t
        self._down_rows = down_rows       # element-id bitmask rows, lazy for mask frames
        self._up_rows = None
        self._neg = {}
        self._interior_cache = {}
        self._covers = None
        self._primes = None
        self._coprimes = None
        self._atoms = None
        self.labels = labels              # optional point names
        self.meta = dict(meta or {})

    # -- basic protocol -------------------------------------------------

    def elements(self) -> range:
        return range(self.m)

    def mask_of(self, i: int) -> int:
        """Extent of element i as a point mask (realized frames only)."""
        if self.kind == "powerset":
            return i
        if self._ext is None:
            raise ValidationError("frame has no pointset realization")
        return self._ext[i]

    @property
    def realized(self) -> bool:
        return self.kind == "powerset" or self._ext is not None

    def id_of_mask(self, mask: int) -> int:
        if self.kind == "powerset":
            if mask < 0 or mask >= self.m:
                raise KeyError(mask)
            return mask
        return self._id_of[mask]

    def has_mask(self, mask: int) -> bool:
        if self.kind == "powerset":
            return 0 <= mask < self.m
        return self._id_of is not None and mask in self._id_of

    def leq(self, i: int, j: int) -> bool:
        if self.kind == "powerset":
            return i & ~j == 0
        if self.kind == "mask":
            return self._ext[i] & ~self._ext[j] == 0
        return bool(self._down_rows[j] >> i & 1)

    def meet(self, i: int, j: int) -> int:
        if self.kind == "powerset":
            return i & j
        if self.kind == "mask":
            return self._id_of[self._ext[i] & self._ext[j]]
        return self._meet_t[i][j]

    def join(self, i: int, j: int) -> int:
        if self.kind == "powerset":
            return i | j
        if self.kind == "mask":
            return self._id_of[self._ext[i] | self._ext[j]]
        return self._join_t[i][j]

    def join_all(self, ids: Iterable[int]) -> int:
        if self.kind == "powerset":
            out = 0
            for i in ids:
                out |= i
            return out
        if self.kind == "mask":
            out = 0
            for i in ids:
                out |= self._ext[i]
            return self._id_of[out]
        out = self.bottom
        for i in ids:
            out = self._join_t[out][i]
        return out

    def meet_all(self, ids: Iterable[int]) -> int:
        out = self.top
        for i in ids:
            out = self.meet(out, i)
        return out

    def join_of_idmask(self, idmask: int) -> int:
        """Join of the element set given as an id-bitmask."""
        return self.join_all(bits(idmask))

    # -- order rows (element-id bitmasks) --------------------------------

    def down_row(self, i: int) -> int:
        """Bitmask of {j : j <= i} over element ids."""
        if self._down_rows is None:
            self._down_rows = [None] * self.m
        r = self._down_rows[i]
        if r is None:
            if self.kind == "powerset":
                # subsets of i: enumerate submasks
                r = 0
                s = i
                while True:
                    r |= 1 << s
                    if s == 0:
                        break
                    s = (s - 1) & i
            else:
                e = self._ext[i]
                r = 0
                for j in range(self.m):
                    if self._ext[j] & ~e == 0:
                        r |= 1 << j
            self._down_rows[i] = r
        return r

    def up_row(self, i: int) -> int:
        if self._up_rows is None:
            self._up_rows = [None] * self.m
        r = self._up_rows[i]
        if r is None:
            if self.kind == "table":
                r = 0
                for j in range(self.m):
                    if self._down_rows[j] >> i & 1:
                        r |= 1 << j
            elif self.kind == "powerset":
                r = 0
                full = self.m - 1
                s = free = full & ~i
                while True:
                    r |= 1 << (i | s)
                    if s == 0:
                        break
                    s = (s - 1) & free
            else:
                e = self._ext[i]
                r = 0
                for j in range(self.m):
                    if e & ~self._ext[j] == 0:
                        r |= 1 << j
            self._up_rows[i] = r
        return r

    # -- covers / irreducibles -------------------------------------------

    def upper_covers(self, i: int) -> list[int]:
        if self.kind == "powerset":
            full = self.m - 1
            return [i | (1 << b) for b in bits(full & ~i)]
        if self._covers is None:
            self._covers = [None] * self.m
        c = self._covers[i]
        if c is None:
            strict_up = self.up_row(i) & ~(1 << i)
            c = []
            for j in bits(strict_up):
                between = strict_up & (self.down_row(j) & ~(1 << j))
                if between == 0:
                    c.append(j)
            self._covers[i] = c
        return c

    def lower_covers(self, i: int) -> list[int]:
        if self.kind == "powerset":
            return [i & ~(1 << b) for b in bits(i)]
        strict_down = self.down_row(i) & ~(1 << i)
        out = []
        for j in bits(strict_down):
            between = strict_down & (self.up_row(j) & ~(1 << j))
            if between == 0:
                out.append(j)
        return out

    def primes(self) -> list[int]:
        """Meet-irreducible elements != top.

        In a finite distributive lattice these are exactly the primes
        (p != T with a&b <= p implying a <= p or b <= p); the quantifier
        form is kept as a test oracle.
        """
        if self._primes is None:
            if self.kind == "powerset":
                full = self.m - 1
                self._primes = [full & ~(1 << b) for b in range(self.base_size)]
            else:
                self._primes = [i for i in self.elements()
                                if i != self.top and len(self.upper_covers(i)) == 1]
        return self._primes

    def coprimes(self) -> list[int]:
        """Join-irreducible (nonzero) elements."""
        if self._coprimes is None:
            if self.kind == "powerset":
                self._coprimes = [1 << b for b in range(self.base_size)]
            else:
                self._coprimes = [i for i in self.elements()
                                  if i != self.bottom and len(self.lower_covers(i)) == 1]
        return self._coprimes

    def atoms(self) -> list[int]:
        if self._atoms is None:
            if self.kind == "powerset":
                self._atoms = [1 << b for b in range(self.base_size)]
            else:
                self._atoms = self.upper_covers(self.bottom)
        return self._atoms

    def is_atomistic(self) -> bool:
        """Every element is the join of the atoms below it."""
        if self.kind == "powerset":
            return True
        amask = mask_of_iter(self.atoms())
        for i in self.elements():
            if self.join_of_idmask(self.down_row(i) & amask) != i:
                return False
        return True

    # -- Heyting structure -------------------------------------------------

    def heyting(self, a: int, b: int) -> int:
        """Heyting implication a -> b = join{w : a & w <= b}."""
        if self.kind == "powerset":
            return b | (self.m - 1) & ~a
        if self.kind == "mask":
            # largest open inside b | complement(a)
            full = self._ext[self.top]
            return self.interior(self._ext[b] | (full & ~self._ext[a]))
        out = self.bottom
        for w in self.elements():
            if self.leq(self._meet_t[a][w], b):
                out = self._join_t[out][w]
        return out

    def neg(self, a: int) -> int:
        r = self._neg.get(a)
        if r is None:
            r = self.heyting(a, self.bottom)
            self._neg[a] = r
        return r

    def is_boolean(self) -> bool:
        return all(self.neg(self.neg(x)) == x for x in self.elements())

    def interior(self, point_mask: int) -> int:
        """Largest element whose extent is contained in the point mask."""
        if self.kind == "powerset":
            return point_mask
        r = self._interior_cache.get(point_mask)
        if r is None:
            acc = 0
            for e in self._ext:
                if e & ~point_mask == 0:
                    acc |= e
            r = self._id_of[acc]
            self._interior_cache[point_mask] = r
        return r

    # -- misc ---------------------------------------------------------------

    def pretty(self, i: int) -> str:
        if self.realized:
            mask = self.mask_of(i)
            if self.labels:
                names = [str(self.labels[b]) for b in bits(mask)]
            else:
                names = [str(b) for b in bits(mask)]
            return "{" + ",".join(names) + "}"
        return f"e{i}"

    def __repr__(self):
        return f"FiniteFrame({self.kind}, m={self.m})"


# -- constructors ------------------------------------------------------------


def frame_from_topology(base_size: int, opens: Sequence[PointSet | int],
                        labels=None) -> FiniteFrame:
    """Frame of an explicit finite topology, ordered by inclusion.

    Validates closure under pairwise intersection/union and membership of
    the empty set and the full base.  The full powerset is detected and
    stored without tables.
    """
    masks = []
    for o in opens:
        masks.append(o.mask if isinstance(o, PointSet) else int(o))
    masks = sorted(set(masks))
    full = (1 << base_size) - 1
    if not masks or masks[0] != 0:
        raise MissingBottomOrTop("the empty set")
    if masks[-1] != full:
        raise MissingBottomOrTop("the full base")
    if len(masks) == 1 << base_size:
        f = FiniteFrame(kind="powerset", m=len(masks), bottom=0, top=full,
                        base_size=base_size, labels=labels)
        return f
    mset = set(masks)
    for i, a in enumerate(masks):
        for b in masks[i + 1:]:
            if a & b not in mset:
                raise NotClosedUnderMeet(a, b)
            if a | b not in mset:
                raise NotClosedUnderJoin(a, b)
    return FiniteFrame(kind="mask", m=len(masks), bottom=0, top=len(masks) - 1,
                       ext=masks, base_size=base_size, labels=labels)


def close_family_under_union_intersection(base_size: int, gens: Iterable[int]) -> list[int]:
    """Smallest family containing gens, 0 and the full base, closed under & and |."""
    full = (1 << base_size) - 1
    fam = {0, full} | set(gens)
    work = list(fam)
    while work:
        a = work.pop()
        for b in list(fam):
            for c in (a & b, a | b):
                if c not in fam:
                    fam.add(c)
                    work.append(c)
    return sorted(fam)


def transitive_closure_rows(rows: list[int]) -> list[int]:
    """Reflexive-transitive closure of a relation given as successor bitmask rows."""
    n = len(rows)
    rows = [rows[i] | (1 << i) for i in range(n)]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = rows[i]
            new = acc
            for j in bits(acc):
                new |= rows[j]
            if new != acc:
                rows[i] = new
                changed = True
    return rows


def frame_from_poset_downsets(order: Sequence[Sequence[bool]] | list[int],
                              labels=None) -> FiniteFrame:
    """Birkhoff-style frame of down-closed subsets of a finite preorder.

    The input preorder is antisymmetrized internally (strongly connected
    points collapse to one).
    """
    if order and isinstance(order[0], int):
        rows = list(order)
        n = len(rows)
    else:
        n = len(order)
        rows = [mask_of_iter(j for j in range(n) if order[i][j]) for i in range(n)]
    rows = transitive_closure_rows(rows)
    # collapse strongly connected components
    reps = []
    rep_of = [-1] * n
    for i in range(n):
        for r in reps:
            if rows[i] >> r & 1 and rows[r] >> i & 1:
                rep_of[i] = r
                break
        else:
            rep_of[i] = i
            reps.append(i)
    k = len(reps)
    idx = {r: a for a, r in enumerate(reps)}
    up = [0] * k
    for a, r in enumerate(reps):
        for j in bits(rows[r]):
            up[a] |= 1 << idx[rep_of[j]]
    # enumerate downsets by DFS over point inclusion
    down_pts = [0] * k
    for a in range(k):
        for b in range(k):
            if up[b] >> a & 1:
                down_pts[a] |= 1 << b
    downsets = {0}
    work = [0]
    while work:
        s = work.pop()
        for a in range(k):
            if not s >> a & 1:
                t = s | down_pts[a]
                if t not in downsets:
                    downsets.add(t)
                    work.append(t)
    fam = sorted(downsets)
    if labels is None:
        labels = [str(reps[a]) for a in range(k)]
    return frame_from_topology(k, fam, labels=labels)


def frame_from_order(items: Sequence, leq_fn: Callable, *, ext=None,
                     base_size=None, labels=None, validate=True,
                     meta=None) -> FiniteFrame:
    """Table-backed frame from an abstract order on `items`.

    leq_fn(a, b) decides the order between items.  Meet/join tables are
    computed as greatest lower / least upper bounds and the lattice +
    binary distributive laws are verified (sufficient for finite frames).
    """
    m = len(items)
    down = [0] * m
    for i in range(m):
        for j in range(m):
            if leq_fn(items[j], items[i]):
                down[i] |= 1 << j
    return _table_frame(down, ext=ext, base_size=base_size, labels=labels,
                        validate=validate, meta=meta)


def _table_frame(down_rows: list[int], *, ext=None, base_size=None, labels=None,
                 validate=True, meta=None) -> FiniteFrame:
    m = len(down_rows)
    # antisymmetry
    for i in range(m):
        for j in bits(down_rows[i]):
            if j != i and down_rows[j] >> i & 1:
                raise NotALattice(f"order not antisymmetric at ({i},{j})")
    bottoms = [i for i in range(m) if down_rows[i] == 1 << i]
    top_candidates = [i for i in range(m) if popcount(down_rows[i]) == m]
    if len(bottoms) != 1 or len(top_candidates) != 1:
        raise NotALattice("order lacks a unique bottom or top")
    bottom, top = bottoms[0], top_candidates[0]

    meet_t = [[0] * m for _ in range(m)]
    join_t = [[0] * m for _ in range(m)]
    up_rows = [0] * m
    for i in range(m):
        for j in bits(down_rows[i]):
            up_rows[j] |= 1 << i
    desc = sorted(range(m), key=lambda i: -popcount(down_rows[i]))
    asc = sorted(range(m), key=lambda i: popcount(down_rows[i]))
    for i in range(m):
        di, ui = down_rows[i], up_rows[i]
        mrow, jrow = meet_t[i], join_t[i]
        for j in range(m):
            lb = di & down_rows[j]
            for k in desc:
                if lb >> k & 1 and lb & ~down_rows[k] == 0:
                    mrow[j] = k
                    break
            else:
                raise NotALattice(f"no meet for ({i},{j})")
            ub = ui & up_rows[j]
            for k in asc:
                if ub >> k & 1 and ub & ~up_rows[k] == 0:
                    jrow[j] = k
                    break
            else:
                raise NotALattice(f"no join for ({i},{j})")
    f = FiniteFrame(kind="table", m=m, bottom=bottom, top=top, ext=ext,
                    base_size=base_size, meet_t=meet_t, join_t=join_t,
                    down_rows=list(down_rows), labels=labels, meta=meta)
    f._up_rows = up_rows
    if validate:
        validate_distributivity(f)
    return f


def validate_distributivity(frame: FiniteFrame) -> None:
    """Binary distributive law a & (b | c) == (a & b) | (a & c), exhaustively.

    Sufficient for finite lattices; vectorized so table frames of a few
    hundred elements validate in well under a second.
    """
    if frame.kind != "table":
        return  # set-theoretic ops are distributive
    m = frame.m
    M = np.asarray(frame._meet_t, dtype=np.int32)
    J = np.asarray(frame._join_t, dtype=np.int32)
    for a in range(m):
        left = M[a][J]                    # (m, m): a & (b|c)
        right = J[np.ix_(M[a], M[a])]     # (m, m): (a&b) | (a&c)
        if not np.array_equal(left, right):
            b, c = map(int, np.argwhere(left != right)[0])
            raise NotDistributive(f"a&(b|c) != (a&b)|(a&c) at {(a, b, c)}")


def subframe(ambient: FiniteFrame, elem_ids: Iterable[int], *, validate=True,
             meta=None) -> tuple[FiniteFrame, list[int]]:
    """Frame on a subset of ambient elements, ordered by the ambient order.

    Meets and joins are recomputed as bounds *within* the subset (never
    inherited blindly): e.g. joins of regular elements differ from ambient
    joins.  Returns (frame, inclusion) where inclusion[i] is the ambient id
    of subframe element i.
    """
    ids = sorted(set(elem_ids))
    ext = [ambient.mask_of(i) for i in ids] if ambient.realized else None
    f = frame_from_order(ids, ambient.leq, ext=ext, base_size=ambient.base_size,
                         labels=ambient.labels, validate=validate, meta=meta)
    return f, ids


# -- frame maps ---------------------------------------------------------------


@dataclass
class FrameMap:
    """A locale map source -> target carried by its frame map `preimage`.

    preimage[v] is the source element f^{-1}(V) for each target element V.
    """

    source: FiniteFrame
    target: FiniteFrame
    preimage: list[int]

    def validate(self) -> None:
        src, tgt, pre = self.source, self.target, self.preimage
        if len(pre) != tgt.m:
            raise NotAFrameMap("preimage must be total on the target frame")
        if pre[tgt.bottom] != src.bottom:
            raise NotAFrameMap("preimage does not preserve bottom")
        if pre[tgt.top] != src.top:
            raise NotAFrameMap("preimage does not preserve top")
        for a in range(tgt.m):
            for b in range(a, tgt.m):
                if pre[tgt.meet(a, b)] != src.meet(pre[a], pre[b]):
                    raise NotAFrameMap(f"meet not preserved at {(a, b)}")
                if pre[tgt.join(a, b)] != src.join(pre[a], pre[b]):
                    raise NotAFrameMap(f"join not preserved at {(a, b)}")

    def direct_image(self, u: int) -> int:
        return right_adjoint(self, u)


def identity_map(frame: FiniteFrame) -> FrameMap:
    return FrameMap(frame, frame, list(frame.elements()))


def right_adjoint(fmap: FrameMap, u: int) -> int:
    """f_*(u) = join{V in target : f^{-1}(V) <= u}."""
    tgt, src, pre = fmap.target, fmap.source, fmap.preimage
    return tgt.join_all(v for v in tgt.elements() if src.leq(pre[v], u))


def galois_law_holds(fmap: FrameMap) -> bool:
    """f^{-1}(V) <= U  iff  V <= f_*(U), over all pairs."""
    src, tgt = fmap.source, fmap.target
    for u in src.elements():
        fu = right_adjoint(fmap, u)
        for v in tgt.elements():
            if src.leq(fmap.preimage[v], u) != tgt.leq(v, fu):
                return False
    return True


# -- derived frames -----------------------------------------------------------


def double_negation_frame(frame: FiniteFrame) -> tuple[FiniteFrame, FrameMap]:
    """Frame of regular elements (fixed points of double negation).

    Returns the Boolean subframe together with the sublocale map
    X_regular >-> X, whose frame map sends U to not-not-U.
    """
    regular = [x for x in frame.elements() if frame.neg(frame.neg(x)) == x]
    if len(regular) == frame.m:
        # Boolean frame: the sublocale is the identity
        fmap = identity_map(frame)
        return frame, fmap
    sub, incl = subframe(frame, regular, meta={"construction": "double-negation"})
    pos = {amb: i for i, amb in enumerate(incl)}
    pre = [pos[frame.neg(frame.neg(u))] for u in frame.elements()]
    fmap = FrameMap(source=sub, target=frame, preimage=pre)
    fmap.validate()
    if not sub.is_boolean():
        raise ValidationError("double-negation frame failed to be Boolean")
    return sub, fmap


def ideal_frame(frame: FiniteFrame) -> tuple[FiniteFrame, list[int]]:
    """Frame of ideals of a finite frame, with the principal-ideal iso.

    In a finite lattice every ideal is principal (an ideal is closed under
    finite joins, so it contains its own join), hence Idl(L) is just L
    again; the returned witness maps x to the element of Idl(L) carrying
    the ideal down(x).  Verified by construction: the ideal frame is built
    from the principal-ideal extents over the base L.
    """
    m = frame.m
    ideals = [frame.down_row(x) for x in frame.elements()]
    down = [0] * m
    for i in range(m):
        for j in range(m):
            if ideals[j] & ~ideals[i] == 0:
                down[i] |= 1 << j
    f = _table_frame(down, ext=ideals, base_size=m,
                     labels=[f"e{i}" for i in range(m)],
                     validate=(m <= TABLE_LIMIT),
                     meta={"construction": "ideals"})
    witness = list(range(m))
    for x in frame.elements():
        if f.mask_of(witness[x]) != frame.down_row(x):
            raise ValidationError("principal ideal iso broke")
    return f, witness


def all_ideals_bruteforce(frame: FiniteFrame) -> list[int]:
    """All ideals by scanning every subset; test oracle for small frames."""
    if frame.m > 20:
        raise ValidationError("brute force ideal scan capped at 20 elements")
    out = []
    for s in range(1, 1 << frame.m):
        members = list(bits(s))
        if frame.bottom not in members:
            continue
        ok = all(s >> frame.join(a, b) & 1 for a in members for b in members)
        if ok:
            ok = all(frame.down_row(x) & ~s == 0 for x in members)
        if ok:
            out.append(s)
    return out


# -- spec-level operation aliases --------------------------------------------


def heyting(frame: FiniteFrame, a: int, b: int) -> int:
    return frame.heyting(a, b)


def primes(frame: FiniteFrame) -> list[int]:
    return frame.primes()


def coprimes(frame: FiniteFrame) -> list[int]:
    return frame.coprimes()


def atoms(frame: FiniteFrame) -> list[int]:
    return frame.atoms()


def primes_by_definition(frame: FiniteFrame) -> list[int]:
    """Primes via the defining quantifier; oracle, O(m^3)."""
    out = []
    for p in frame.elements():
        if p == frame.top:
            continue
        if all(not frame.leq(frame.meet(a, b), p) or frame.leq(a, p) or frame.leq(b, p)
               for a in frame.elements() for b in frame.elements()):
            out.append(p)
    return out


def coprimes_by_definition(frame: FiniteFrame) -> list[int]:
    out = []
    for d in frame.elements():
        if d == frame.bottom:
            continue
        if all(not frame.leq(d, frame.join(a, b)) or frame.leq(d, a) or frame.leq(d, b)
               for a in frame.elements() for b in frame.elements()):
            out.append(d)
    return out
