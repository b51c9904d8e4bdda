"""Finite groups given by generators: permutations, matrices, projective matrices.

Every group is handled through a faithful permutation action.  Permutation
groups act on their points; matrix groups act on the orbit of the standard
basis vectors (projective groups on the orbit of the basis lines together
with the line of the all-ones vector).  A base and strong generating set is
built by deterministic Schreier-Sims on that action, and each strong
generator carries its original element so that subgroups computed through
the permutation action keep their matrix form.

Composition is left to right: ``g * h`` means "first g, then h", and points
(or row vectors) are acted on from the right.
"""

from __future__ import annotations

import functools
import math
import random
import re
from collections import deque

import numpy as np

from .gf import FieldSpec, Matrix, GF, array_matmul, mat_inv, normalize_projective, parse_matrix

DEFAULT_ELEMENT_CAP = 10 ** 7


class GroupError(RuntimeError):
    pass


class ResourceError(GroupError):
    """A configured size or search budget was exceeded."""


# -- permutations --------------------------------------------------------------

class Perm:
    """Permutation of {0..n-1} stored as an image array."""

    __slots__ = ("a", "_key")

    def __init__(self, images):
        a = np.asarray(images, dtype=np.int32)
        if a.ndim != 1 or not np.array_equal(np.sort(a), np.arange(a.size)):
            raise ValueError("image array is not a permutation")
        a.setflags(write=False)
        self.a = a
        self._key = None

    @classmethod
    def _wrap(cls, a):
        p = cls.__new__(cls)
        a.setflags(write=False)
        p.a = a
        p._key = None
        return p

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls._wrap(np.arange(n, dtype=np.int32))

    @classmethod
    def from_cycles(cls, n: int, cycles) -> "Perm":
        a = np.arange(n, dtype=np.int32)
        for cyc in cycles:
            cyc = list(cyc)
            for i, x in enumerate(cyc):
                a[x] = cyc[(i + 1) % len(cyc)]
        return cls(a)

    @classmethod
    def parse(cls, text: str, n: int) -> "Perm":
        text = text.strip()
        if text in ("()", ""):
            return cls.identity(n)
        cycles = []
        for m in re.finditer(r"\(([^()]*)\)", text):
            pts = [int(x) for x in re.split(r"[,\s]+", m.group(1).strip()) if x]
            cycles.append(pts)
        if re.sub(r"\(([^()]*)\)", "", text).strip():
            raise ValueError(f"bad cycle notation: {text!r}")
        return cls.from_cycles(n, cycles)

    @property
    def degree(self) -> int:
        return self.a.size

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm._wrap(other.a[self.a])

    def inverse(self) -> "Perm":
        inv = np.empty_like(self.a)
        inv[self.a] = np.arange(self.a.size, dtype=np.int32)
        return Perm._wrap(inv)

    def __pow__(self, n: int) -> "Perm":
        if n < 0:
            return self.inverse() ** (-n)
        result = Perm.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, i: int) -> int:
        return int(self.a[i])

    def key(self) -> bytes:
        if self._key is None:
            self._key = self.a.tobytes()
        return self._key

    def __eq__(self, other):
        return isinstance(other, Perm) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.a, np.arange(self.a.size)))

    def order(self) -> int:
        seen = np.zeros(self.a.size, dtype=bool)
        o = 1
        for i in range(self.a.size):
            if not seen[i]:
                j, ln = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = self.a[j]
                    ln += 1
                o = o * ln // math.gcd(o, ln)
        return o

    def cycles(self):
        seen = set()
        out = []
        for i in range(self.a.size):
            if i in seen or self.a[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = int(self.a[i])
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = int(self.a[j])
            out.append(cyc)
        return out

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def __str__(self):
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"

    __repr__ = __str__


# -- element kinds ---------------------------------------------------------------

class PermKind:
    name = "perm"

    def __init__(self, degree: int):
        self.degree = degree

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def identity(self):
        return Perm.identity(self.degree)

    def key(self, a):
        return a.key()

    def check(self, a):
        if not isinstance(a, Perm) or a.degree != self.degree:
            raise TypeError(f"expected a permutation of degree {self.degree}")

    def __eq__(self, other):
        return isinstance(other, PermKind) and other.degree == self.degree


class MatKind:
    """Invertible matrices; projective=True identifies scalar multiples."""

    def __init__(self, field: FieldSpec, degree: int, projective: bool = False):
        self.field = field
        self.degree = degree
        self.projective = projective
        self.name = "projmat" if projective else "mat"

    def normalize(self, m: Matrix) -> Matrix:
        if not self.projective:
            return m
        a, _ = normalize_projective(self.field, m.a)
        return m if a is m.a else Matrix._wrap(self.field, a)

    def mul(self, a, b):
        return self.normalize(Matrix._wrap(self.field, array_matmul(self.field, a.a, b.a)))

    def inv(self, a):
        return self.normalize(mat_inv(a))

    def identity(self):
        return Matrix.identity(self.field, self.degree)

    def key(self, a):
        return a.key()

    def check(self, a):
        if not isinstance(a, Matrix) or a.field is not self.field or a.shape != (self.degree, self.degree):
            raise TypeError(f"expected a {self.degree}x{self.degree} matrix over {self.field}")

    def __eq__(self, other):
        return (isinstance(other, MatKind) and other.field is self.field
                and other.degree == self.degree and other.projective == self.projective)


class ProductKind:
    """Pairs (x, y) from two kinds; used for graphs of homomorphisms."""
    name = "product"

    def __init__(self, k1, k2):
        self.k1, self.k2 = k1, k2

    def mul(self, a, b):
        return (self.k1.mul(a[0], b[0]), self.k2.mul(a[1], b[1]))

    def inv(self, a):
        return (self.k1.inv(a[0]), self.k2.inv(a[1]))

    def identity(self):
        return (self.k1.identity(), self.k2.identity())

    def key(self, a):
        return self.k1.key(a[0]) + b"|" + self.k2.key(a[1])

    def check(self, a):
        self.k1.check(a[0])
        self.k2.check(a[1])


# -- permutation actions ---------------------------------------------------------

class _Action:
    """Faithful action of a kind on a finite domain, as numpy permutations."""

    def __init__(self, kind, gens):
        self.kind = kind
        if isinstance(kind, PermKind):
            self.size = kind.degree
        elif isinstance(kind, MatKind):
            self._init_matrix(gens)
        elif isinstance(kind, ProductKind):
            self.left = _Action(kind.k1, [g[0] for g in gens])
            self.right = _Action(kind.k2, [g[1] for g in gens])
            self.size = self.left.size + self.right.size
        else:
            raise TypeError(kind)

    def _encode(self, vecs: np.ndarray) -> np.ndarray:
        return vecs @ self._weights

    def _init_matrix(self, gens):
        kind = self.kind
        field, n = kind.field, kind.degree
        self._weights = np.array([field.q ** i for i in range(n)], dtype=np.int64)
        if field.q ** n >= 2 ** 62:
            raise ResourceError("vector encoding overflow")
        seeds = [np.eye(n, dtype=np.int64)[i] for i in range(n)]
        if kind.projective:
            seeds.append(np.ones(n, dtype=np.int64))
        mats = [g.a for g in gens]
        codes = {}
        vecs = []
        frontier = []
        for s in seeds:
            s = self._norm(s[None, :])[0]
            c = int(self._encode(s))
            if c not in codes:
                codes[c] = len(vecs)
                vecs.append(s)
                frontier.append(s)
        cap = DEFAULT_ELEMENT_CAP
        while frontier:
            block = np.array(frontier)
            frontier = []
            for m in mats:
                img = self._norm(array_matmul(field, block, m))
                enc = self._encode(img)
                for j, c in enumerate(enc.tolist()):
                    if c not in codes:
                        codes[c] = len(vecs)
                        vecs.append(img[j])
                        frontier.append(img[j])
            if len(vecs) > cap:
                raise ResourceError(f"permutation domain exceeds {cap} points")
        self.vectors = np.array(vecs)
        self.size = len(vecs)
        order = np.argsort(np.array(list(codes.keys()), dtype=np.int64))
        self._sorted_codes = np.array(list(codes.keys()), dtype=np.int64)[order]
        self._sorted_index = np.array(list(codes.values()), dtype=np.int64)[order]

    def _norm(self, vecs):
        if not self.kind.projective:
            return vecs
        field = self.kind.field
        idx = np.argmax(vecs != 0, axis=1)
        lead = vecs[np.arange(vecs.shape[0]), idx]
        return field.mul(vecs, field.inv(lead)[:, None])

    def perm_array(self, x):
        """Image array of element x on the domain, or None if x does not preserve it."""
        kind = self.kind
        if isinstance(kind, PermKind):
            return x.a
        if isinstance(kind, ProductKind):
            a = self.left.perm_array(x[0])
            b = self.right.perm_array(x[1])
            if a is None or b is None:
                return None
            return np.concatenate([a, b + self.left.size]).astype(np.int32)
        img = self._norm(array_matmul(kind.field, self.vectors, x.a))
        enc = self._encode(img)
        pos = np.searchsorted(self._sorted_codes, enc)
        pos = np.minimum(pos, self._sorted_codes.size - 1)
        if not np.array_equal(self._sorted_codes[pos], enc):
            return None
        return self._sorted_index[pos].astype(np.int32)


# -- base and strong generating set ------------------------------------------------

def _pmul(a, b):
    return b[a]


def _pinv(a):
    inv = np.empty_like(a)
    inv[a] = np.arange(a.size, dtype=a.dtype)
    return inv


class _Level:
    __slots__ = ("point", "gens", "parent", "label", "orbit", "checked")

    def __init__(self, point):
        self.point = point
        self.gens = []          # indices into the strong generator list
        self.parent = {point: point}
        self.label = {}
        self.orbit = [point]
        self.checked = set()


class _Thunk:
    """Deferred payload; Schreier generators only need their matrices on demand."""

    __slots__ = ("fn",)

    def __init__(self, fn):
        self.fn = fn


class BSGS:
    """Deterministic Schreier-Sims on (perm array, payload) pairs.

    ``base_prefix`` fixes the first base points (used to get chains adapted
    to one side of a direct product).
    """

    def __init__(self, kind, size: int, gens=(), base_prefix=(), payload=True):
        self.kind = kind
        self.size = size
        self.payload = payload
        self.perms = []     # strong generators
        self.invs = []
        self.objs = []
        self.levels: list[_Level] = [_Level(int(b)) for b in base_prefix]
        self._ident = np.arange(size, dtype=np.int32)
        for p, o in gens:
            self.add_generator(p, o)

    def _trace(self, lvl: _Level, pt: int, want_obj: bool):
        """u with point^u = pt (as perm, and payload if wanted)."""
        path = []
        while pt != lvl.point:
            g = lvl.label[pt]
            path.append(g)
            pt = lvl.parent[pt]
        perm = self._ident
        obj = self.kind.identity() if (want_obj and self.payload) else None
        for g in reversed(path):
            perm = self.perms[g][perm]
            if obj is not None:
                obj = self.kind.mul(obj, self.obj(g))
        return perm, obj

    def obj(self, g: int):
        o = self.objs[g]
        if isinstance(o, _Thunk):
            o = o.fn()
            self.objs[g] = o
        return o

    def _schreier_obj(self, lvl, pt, g, img):
        kind = self.kind
        _, uo = self._trace(lvl, pt, True)
        _, vo = self._trace(lvl, img, True)
        return kind.mul(kind.mul(uo, self.obj(g)), kind.inv(vo))

    def _sifted_obj(self, obj, steps):
        kind = self.kind
        o = obj.fn() if isinstance(obj, _Thunk) else obj
        for lvl, pt in steps:
            o = kind.mul(o, kind.inv(self._trace(lvl, pt, True)[1]))
        return o

    def _extend_orbit(self, lvl: _Level):
        q = deque(lvl.orbit)
        parent, label, perms = lvl.parent, lvl.label, self.perms
        gens = [(g, perms[g]) for g in lvl.gens]
        while q:
            pt = q.popleft()
            for g, pg in gens:
                im = int(pg[pt])
                if im not in parent:
                    parent[im] = pt
                    label[im] = g
                    lvl.orbit.append(im)
                    q.append(im)

    def strip(self, perm, obj, start=0):
        """Sift; returns (residue perm, residue obj, level reached)."""
        lazy = isinstance(obj, _Thunk)
        want = obj is not None and not lazy
        steps = []
        reached = len(self.levels)
        for i in range(start, len(self.levels)):
            lvl = self.levels[i]
            pt = int(perm[lvl.point])
            if pt not in lvl.parent:
                reached = i
                break
            if pt == lvl.point:
                continue
            u, uo = self._trace(lvl, pt, want)
            perm = _pinv(u)[perm]
            if want:
                obj = self.kind.mul(obj, self.kind.inv(uo))
            elif lazy:
                steps.append((lvl, pt))
        if lazy and steps:
            obj = _Thunk(functools.partial(self._sifted_obj, obj, steps))
        return perm, obj, reached

    def contains_perm(self, perm) -> bool:
        res, _, _ = self.strip(perm, None)
        return bool(np.array_equal(res, self._ident))

    def _add_strong(self, perm, obj) -> int:
        """Add a strong generator to every level whose earlier base points it fixes.

        Returns the deepest level index it was added to."""
        idx = len(self.perms)
        self.perms.append(perm)
        self.invs.append(_pinv(perm))
        self.objs.append(obj)
        depth = 0
        while depth < len(self.levels) and perm[self.levels[depth].point] == self.levels[depth].point:
            depth += 1
        if depth == len(self.levels):
            moved = np.flatnonzero(perm != self._ident)
            self.levels.append(_Level(int(moved[0])))
        for j in range(depth + 1):
            self.levels[j].gens.append(idx)
            self._extend_orbit(self.levels[j])
        return depth

    def add_generator(self, perm, obj=None) -> bool:
        if self.contains_perm(perm):
            return False
        self._add_strong(perm, obj)
        self._schreier_sims()
        return True

    def _schreier_sims(self):
        i = len(self.levels) - 1
        while i >= 0:
            lvl = self.levels[i]
            restart = None
            for pt in list(lvl.orbit):
                for g in list(lvl.gens):
                    if (pt, g) in lvl.checked:
                        continue
                    lvl.checked.add((pt, g))
                    img = int(self.perms[g][pt])
                    u, _ = self._trace(lvl, pt, False)
                    v, _ = self._trace(lvl, img, False)
                    sg = _pinv(v)[self.perms[g][u]]
                    if np.array_equal(sg, self._ident):
                        continue
                    so = _Thunk(functools.partial(self._schreier_obj, lvl, pt, g, img)) if self.payload else None
                    res, robj, j = self.strip(sg, so, i + 1)
                    if j < len(self.levels) or not np.array_equal(res, self._ident):
                        restart = self._add_strong(res, robj)
                        break
                if restart is not None:
                    break
            i = restart if restart is not None else i - 1

    def order(self) -> int:
        o = 1
        for lvl in self.levels:
            o *= len(lvl.orbit)
        return o

    @property
    def base(self):
        return [lvl.point for lvl in self.levels]

    def random_perm(self, rng: random.Random, want_obj=False):
        perm = self._ident
        obj = self.kind.identity() if (want_obj and self.payload) else None
        for lvl in reversed(self.levels):
            pt = lvl.orbit[rng.randrange(len(lvl.orbit))]
            u, uo = self._trace(lvl, pt, want_obj)
            perm = u[perm]
            if obj is not None:
                obj = self.kind.mul(obj, uo)
        return perm, obj

    def all_perms(self):
        """Enumerate all elements as perm arrays (small groups only)."""
        elems = [self._ident]
        for lvl in reversed(self.levels):
            trans = [self._trace(lvl, pt, False)[0] for pt in lvl.orbit]
            elems = [u[e] for e in elems for u in trans]
        return elems


# -- groups --------------------------------------------------------------------

class Group:
    """A finite group given by generators of one element kind.

    ``kind`` is a PermKind or MatKind instance; projective matrix groups store
    elements with first nonzero entry equal to 1.
    """

    def __init__(self, kind, gens, name: str = "", cap: int = DEFAULT_ELEMENT_CAP, _action=None):
        self.kind = kind
        gens = [kind.normalize(g) if isinstance(kind, MatKind) else g for g in gens]
        for g in gens:
            kind.check(g)
        self.gens = list(gens)
        self.name = name
        self.cap = cap
        self._action = _action
        self._bsgs = None

    # construction helpers
    @classmethod
    def perm(cls, degree: int, gens, name=""):
        gens = [g if isinstance(g, Perm) else Perm.parse(g, degree) if isinstance(g, str) else Perm(g)
                for g in gens]
        return cls(PermKind(degree), gens, name)

    @classmethod
    def matrix(cls, field: FieldSpec, degree: int, gens, projective=False, name=""):
        gens = [g if isinstance(g, Matrix) else Matrix(field, g) for g in gens]
        return cls(MatKind(field, degree, projective), gens, name)

    @property
    def degree(self):
        return self.kind.degree

    def __repr__(self):
        return f"<Group {self.name or '?'} kind={self.kind.name} gens={len(self.gens)}>"

    # permutation action
    @property
    def action(self) -> _Action:
        if self._action is None:
            self._action = _Action(self.kind, self.gens)
        return self._action

    def perm_of(self, x):
        a = self.action.perm_array(x)
        if a is None:
            return None
        return a.astype(np.int32)

    def bsgs(self) -> BSGS:
        if self._bsgs is None:
            payload = not isinstance(self.kind, PermKind)
            b = BSGS(self.kind, self.action.size, payload=payload)
            for g in self.gens:
                p = self.perm_of(g)
                if not np.array_equal(p, b._ident):
                    b.add_generator(p, g)
                if b.order() > self.cap:
                    raise ResourceError(f"group order exceeds element cap {self.cap}")
            self._bsgs = b
        return self._bsgs

    def _obj_from_perm(self, perm):
        """Original element with the given permutation image (perm must be in the group)."""
        if isinstance(self.kind, PermKind):
            return Perm._wrap(np.asarray(perm, dtype=np.int32))
        b = self.bsgs()
        obj = self.kind.identity()
        res = perm
        for lvl in b.levels:
            pt = int(res[lvl.point])
            if pt == lvl.point:
                continue
            u, uo = b._trace(lvl, pt, True)
            res = _pinv(u)[res]
            obj = self.kind.mul(uo, obj)
        return obj

    # basic queries
    def identity(self):
        return self.kind.identity()

    def mul(self, a, b):
        return self.kind.mul(a, b)

    def inv(self, a):
        return self.kind.inv(a)

    def conj(self, a, g):
        """a^g = g^-1 a g."""
        return self.kind.mul(self.kind.mul(self.kind.inv(g), a), g)

    def comm(self, a, b):
        """[a, b] = a^-1 b^-1 a b."""
        k = self.kind
        return k.mul(k.mul(k.inv(a), k.inv(b)), k.mul(a, b))

    def eq(self, a, b):
        return self.kind.key(a) == self.kind.key(b)

    def is_identity(self, a):
        return self.kind.key(a) == self.kind.key(self.kind.identity())

    def power(self, a, n: int):
        k = self.kind
        if n < 0:
            a, n = k.inv(a), -n
        result = k.identity()
        while n:
            if n & 1:
                result = k.mul(result, a)
            a = k.mul(a, a)
            n >>= 1
        return result

    def element_order(self, a) -> int:
        if isinstance(self.kind, PermKind):
            return a.order()
        p = self.perm_of(a)
        if p is None:
            raise GroupError("element does not act on the group's domain")
        return Perm._wrap(p).order()

    def order(self) -> int:
        """Exact order via Schreier-Sims."""
        return self.bsgs().order()

    def contains(self, x) -> bool:
        self.kind.check(x)
        if isinstance(self.kind, MatKind):
            x = self.kind.normalize(x)
        p = self.perm_of(x)
        if p is None:
            return False
        if not self.bsgs().contains_perm(p):
            return False
        if isinstance(self.kind, PermKind):
            return True
        # the action is faithful on the group, check x is the matching element
        return self.eq(self._obj_from_perm(p), x)

    __contains__ = contains

    def subgroup(self, gens, name="") -> "Group":
        return Group(self.kind, list(gens), name, self.cap, _action=self._action_for_subgroups())

    def _action_for_subgroups(self):
        return self.action

    def is_trivial(self) -> bool:
        return all(self.is_identity(g) for g in self.gens)

    def is_subgroup_of(self, other: "Group") -> bool:
        return all(other.contains(g) for g in self.gens)

    def is_normal_in(self, other: "Group") -> bool:
        return all(self.contains(self.conj(n, g)) for n in self.gens for g in other.gens)

    def is_abelian(self) -> bool:
        return all(self.is_identity(self.comm(a, b)) for i, a in enumerate(self.gens)
                   for b in self.gens[i + 1:])

    def elements(self, limit: int = 10 ** 6):
        if self.order() > limit:
            raise ResourceError(f"group of order {self.order()} too large to enumerate")
        return [self._obj_from_perm(p) for p in self.bsgs().all_perms()]

    def closure_elements(self, limit: int = 10 ** 5):
        """Naive closure by breadth-first multiplication (independent of BSGS)."""
        ident = self.identity()
        seen = {self.kind.key(ident): ident}
        q = deque([ident])
        while q:
            x = q.popleft()
            for g in self.gens:
                y = self.kind.mul(x, g)
                k = self.kind.key(y)
                if k not in seen:
                    seen[k] = y
                    q.append(y)
                    if len(seen) > limit:
                        raise ResourceError("closure limit exceeded")
        return list(seen.values())

    def uniform_random(self, rng: random.Random):
        """Uniformly random element via the stabilizer chain."""
        b = self.bsgs()
        perm, obj = b.random_perm(rng, want_obj=True)
        if isinstance(self.kind, PermKind):
            return Perm._wrap(perm.astype(np.int32))
        return obj

    def random_element(self, seed: int = 0):
        """Seeded product-replacement random element."""
        return ProductReplacement(self, seed).next()

    # subgroup constructions
    def normal_closure(self, seeds, within: "Group | None" = None) -> "Group":
        """Smallest subgroup normal in self (or in ``within``) containing seeds."""
        over = within if within is not None else self
        gens = [s for s in seeds if not self.is_identity(s)]
        n = self.subgroup(gens)
        if not gens:
            return n
        b = n.bsgs()
        queue = deque(gens)
        while queue:
            x = queue.popleft()
            for g in over.gens:
                y = self.conj(x, g)
                py = self.perm_of(y)
                if not b.contains_perm(py):
                    n.gens.append(y)
                    b.add_generator(py, y)
                    queue.append(y)
                    if b.order() > self.cap:
                        raise ResourceError("normal closure exceeds element cap")
        return n

    def derived_subgroup(self) -> "Group":
        comms = [self.comm(a, b) for i, a in enumerate(self.gens) for b in self.gens[i + 1:]]
        return self.normal_closure(comms)

    def derived_series(self):
        series = [self]
        while True:
            d = series[-1].derived_subgroup()
            if d.order() == series[-1].order():
                return series
            series.append(d)
            if d.order() == 1:
                return series

    def is_soluble(self) -> bool:
        return self.derived_series()[-1].order() == 1

    def centralizer_of(self, x) -> "Group":
        """C_self(x) via orbit-stabilizer on the conjugation action."""
        return self.stabilizer(x, lambda y, g: self.conj(y, g), key=self.kind.key)

    def center(self) -> "Group":
        c = self
        for g in self.gens:
            c = c.centralizer_of(g)
        return c

    def stabilizer(self, point, act, key=None, seed: int = 1) -> "Group":
        """Stabilizer of ``point`` under ``act(point, g)``.

        The orbit is enumerated with a transversal; random Schreier generators
        are added until the order equals |G| / |orbit|.
        """
        key = key or (lambda z: z)
        k0 = key(point)
        trans = {k0: (point, self.identity())}
        q = deque([k0])
        while q:
            k = q.popleft()
            pt, t = trans[k]
            for g in self.gens:
                im = act(pt, g)
                ki = key(im)
                if ki not in trans:
                    trans[ki] = (im, self.kind.mul(t, g))
                    q.append(ki)
                    if len(trans) > self.cap:
                        raise ResourceError("orbit exceeds element cap")
        target = self.order() // len(trans)
        stab = self.subgroup([])
        rng = random.Random(seed)
        tries = 0
        while stab.order() < target:
            r = self.uniform_random(rng)
            im = act(point, r)
            _, t = trans[key(im)]
            s = self.kind.mul(r, self.kind.inv(t))
            if not stab.contains(s):
                stab.gens.append(s)
                stab._bsgs = None
            tries += 1
            if tries > 10000:
                raise ResourceError("stabilizer search did not converge")
        return stab

    def orbit(self, point, act, key=None):
        key = key or (lambda z: z)
        seen = {key(point): point}
        q = deque([point])
        while q:
            pt = q.popleft()
            for g in self.gens:
                im = act(pt, g)
                k = key(im)
                if k not in seen:
                    seen[k] = im
                    q.append(im)
        return list(seen.values())

    def p_part(self, x, p: int):
        o = self.element_order(x)
        m = o
        while m % p == 0:
            m //= p
        return self.power(x, m)

    def normalizer_of(self, sub: "Group", seed: int = 1) -> "Group":
        elems = sub.elements()
        key = lambda s: frozenset(self.kind.key(e) for e in s)
        act = lambda s, g: [self.conj(e, g) for e in s]
        return self.stabilizer(elems, act, key=key, seed=seed)

    def sylow_subgroup(self, p: int, seed: int = 0) -> "Group":
        """A Sylow p-subgroup, grown inside successive normalizers."""
        n = self.order()
        target = 1
        while n % p == 0:
            n //= p
            target *= p
        rng = random.Random(seed)
        P = self.subgroup([])
        budget = 2000
        while P.order() < target:
            N = self if P.order() == 1 else self.normalizer_of(P, seed=rng.randrange(1 << 30))
            for _ in range(budget):
                y = N.p_part(N.uniform_random(rng), p)
                if not P.contains(y):
                    P = self.subgroup(P.gens + [y])
                    break
            else:
                raise ResourceError("Sylow search exhausted its retry budget")
        return P

    def soluble_radical(self, seed: int = 0, exhaustive_limit: int = 20000) -> "Group":
        """Largest soluble normal subgroup.

        Accumulates normal closures of p-element seeds whose closure (together
        with the radical so far) stays soluble.  Groups of order up to
        ``exhaustive_limit`` test every element; larger ones sample.
        """
        R = self.subgroup([])
        order = self.order()
        if order <= exhaustive_limit:
            candidates = self.elements()
        else:
            rng = random.Random(seed)
            candidates = [self.uniform_random(rng) for _ in range(400)]
        primes = prime_factors(order)
        changed = True
        while changed:
            changed = False
            for x in candidates:
                for p in primes:
                    y = self.p_part(x, p)
                    if self.is_identity(y) or R.contains(y):
                        continue
                    trial = self.normal_closure(R.gens + [y])
                    if trial.is_soluble():
                        R = trial
                        changed = True
        return R

    def conjugacy_class_reps(self, limit: int = 10 ** 5):
        """Class representatives by enumeration (small groups only)."""
        elems = self.elements(limit)
        seen = set()
        reps = []
        for x in elems:
            k = self.kind.key(x)
            if k in seen:
                continue
            reps.append(x)
            for y in self.orbit(x, lambda a, g: self.conj(a, g), key=self.kind.key):
                seen.add(self.kind.key(y))
        return reps


def prime_factors(n: int):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def factorize(n: int) -> dict:
    out = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class ProductReplacement:
    """Product replacement random elements with a fixed seed."""

    def __init__(self, group: Group, seed: int = 0, slots: int = 10, warmup: int = 50):
        self.group = group
        self.rng = random.Random(seed)
        gens = group.gens or [group.identity()]
        self.state = [gens[i % len(gens)] for i in range(max(slots, len(gens)))]
        self.acc = group.identity()
        for _ in range(warmup):
            self.next()

    def next(self):
        k = self.group.kind
        s = self.state
        i, j = self.rng.sample(range(len(s)), 2)
        if self.rng.random() < 0.5:
            s[i] = k.mul(s[i], s[j] if self.rng.random() < 0.5 else k.inv(s[j]))
        else:
            s[i] = k.mul(s[j] if self.rng.random() < 0.5 else k.inv(s[j]), s[i])
        self.acc = k.mul(self.acc, s[i])
        return self.acc


# -- homomorphisms -------------------------------------------------------------------

class Homomorphism:
    """Map from source generators to given images in a target group.

    Well-definedness is checked through the graph subgroup of
    source x target: the map is a homomorphism iff the graph meets
    1 x target trivially.
    """

    def __init__(self, source: Group, target: Group, images, check: bool = True):
        if len(images) != len(source.gens):
            raise ValueError("need one image per source generator")
        self.source = source
        self.target = target
        self.images = list(images)
        self._graph = None
        self._chains = {}
        if check and not self.is_well_defined():
            raise GroupError("generator images do not define a homomorphism")

    @property
    def graph(self) -> Group:
        if self._graph is None:
            kind = ProductKind(self.source.kind, self.target.kind)
            gens = list(zip(self.source.gens, self.images))
            self._graph = Group(kind, gens, "graph", max(self.source.cap, self.target.cap))
        return self._graph

    def _chain(self, first: str) -> BSGS:
        """Graph BSGS whose base starts with a base of the source (or target)."""
        if first not in self._chains:
            g = self.graph
            n1 = g.action.left.size
            if first == "source":
                prefix = self.source.bsgs().base
            else:
                prefix = [n1 + b for b in self.target.bsgs().base]
            b = BSGS(g.kind, g.action.size, base_prefix=prefix, payload=True)
            for x in g.gens:
                p = g.perm_of(x)
                if not np.array_equal(p, b._ident):
                    b.add_generator(p, x)
            self._chains[first] = (b, len(prefix))
        return self._chains[first]

    def is_well_defined(self) -> bool:
        return self.graph.order() == self.source.order()

    def __call__(self, x):
        """Image of a source element."""
        g = self.graph
        b, depth = self._chain("source")
        n1 = g.action.left.size
        px = self.source.perm_of(x)
        if px is None:
            raise GroupError("element not in source")
        perm = np.concatenate([px, np.arange(n1, g.action.size, dtype=np.int32)])
        obj = (x, self.target.identity())
        for lvl in b.levels[:depth]:
            pt = int(perm[lvl.point])
            if pt == lvl.point:
                continue
            if pt not in lvl.parent:
                raise GroupError("element not in source")
            u, uo = b._trace(lvl, pt, True)
            perm = _pinv(u)[perm]
            obj = g.kind.mul(obj, g.kind.inv(uo))
        if not np.array_equal(perm[:n1], np.arange(n1)):
            raise GroupError("element not in source")
        return self.target.inv(obj[1])

    def preimage(self, y):
        """Some source element mapping to y (which must lie in the image)."""
        g = self.graph
        b, depth = self._chain("target")
        n1 = g.action.left.size
        py = self.target.perm_of(y)
        if py is None:
            raise GroupError("element not in target")
        perm = np.concatenate([np.arange(n1, dtype=np.int32), py + n1])
        obj = (self.source.identity(), self.target.identity())
        for lvl in b.levels[:depth]:
            pt = int(perm[lvl.point])
            if pt == lvl.point:
                continue
            if pt not in lvl.parent:
                raise GroupError("element not in image")
            u, uo = b._trace(lvl, pt, True)
            perm = _pinv(u)[perm]
            obj = g.kind.mul(obj, g.kind.inv(uo))
        if not np.array_equal(perm[n1:], np.arange(n1, g.action.size)):
            raise GroupError("element not in image")
        return self.source.inv(obj[0])

    def kernel(self) -> Group:
        """Exact kernel, from a graph stabilizer chain with target base points first."""
        b, depth = self._chain("target")
        gens = []
        if depth < len(b.levels):
            gens = [b.obj(i)[0] for i in b.levels[depth].gens]
        return self.source.subgroup(gens)

    def image(self) -> Group:
        return self.target.subgroup(self.images)


class ImageMap:
    """Evaluate the map defined by generator images without acting on the target.

    Elements are sifted through a source stabilizer chain whose strong
    generators carry their images, so the target only needs multiplication.
    The caller is responsible for the images satisfying the source relations.
    """

    def __init__(self, source: Group, images, target_kind):
        if len(images) != len(source.gens):
            raise ValueError("need one image per source generator")
        self.source = source
        self.target_kind = target_kind
        self.kind = ProductKind(source.kind, target_kind)
        self.chain = BSGS(self.kind, source.action.size, base_prefix=source.bsgs().base)
        for x, y in zip(source.gens, images):
            p = source.perm_of(x)
            if not np.array_equal(p, self.chain._ident):
                self.chain.add_generator(p, (x, y))

    def __call__(self, x):
        perm = self.source.perm_of(x)
        if perm is None:
            raise GroupError("element not in source")
        res, obj, _ = self.chain.strip(perm, (x, self.target_kind.identity()))
        if not np.array_equal(res, self.chain._ident):
            raise GroupError("element not in source")
        return self.target_kind.inv(obj[1])


# -- .grp text format ---------------------------------------------------------------

_GRP_HEADER = re.compile(r"^\s*group\s+(\S+)\s+kind\s+(perm|mat|projmat)\s+degree\s+(\d+)(?:\s+over\s+(\d+)\^(\d+))?\s*$")


def parse_group(text: str) -> Group:
    lines = [ln for ln in text.splitlines()]
    i = 0
    while i < len(lines) and (not lines[i].strip() or lines[i].lstrip().startswith("#")):
        i += 1
    m = _GRP_HEADER.match(lines[i]) if i < len(lines) else None
    if not m:
        raise ValueError(f"line {i + 1}: expected 'group <name> kind <perm|mat|projmat> degree <n> [over p^e]'")
    name, kind, degree = m.group(1), m.group(2), int(m.group(3))
    i += 1
    if kind == "perm":
        gens = []
        for ln in lines[i:]:
            s = ln.strip()
            if s and not s.startswith("#"):
                gens.append(Perm.parse(s, degree))
        return Group(PermKind(degree), gens, name)
    if m.group(4) is None:
        raise ValueError("matrix group header needs 'over p^e'")
    field = GF(int(m.group(4)), int(m.group(5)))
    gens = []
    body = [ln for ln in lines[i:] if not ln.lstrip().startswith("#")]
    j = 0
    while j < len(body):
        if not body[j].strip():
            j += 1
            continue
        mat, j = parse_matrix(body, j)
        if mat.field is not field or mat.shape != (degree, degree):
            raise ValueError(f"generator block shape/field mismatch in group {name}")
        gens.append(mat)
    return Group(MatKind(field, degree, kind == "projmat"), gens, name)


def format_group(g: Group) -> str:
    k = g.kind
    if isinstance(k, PermKind):
        lines = [f"group {g.name or 'G'} kind perm degree {k.degree}"]
        lines += [str(x) for x in g.gens]
        return "\n".join(lines) + "\n"
    lines = [f"group {g.name or 'G'} kind {k.name} degree {k.degree} over {k.field.p}^{k.field.e}"]
    out = "\n".join(lines) + "\n"
    for x in g.gens:
        out += x.to_text()
    return out


# -- named small groups ----------------------------------------------------------------

def symmetric_group(n: int) -> Group:
    gens = [Perm.from_cycles(n, [list(range(n))]), Perm.from_cycles(n, [[0, 1]])] if n > 1 else []
    return Group(PermKind(max(n, 1)), gens, f"S{n}")


def alternating_group(n: int) -> Group:
    if n < 3:
        return Group(PermKind(max(n, 1)), [], f"A{n}")
    gens = [Perm.from_cycles(n, [[i, i + 1, i + 2]]) for i in range(n - 2)]
    return Group(PermKind(n), gens, f"A{n}")


def direct_product(groups, name="") -> Group:
    """Direct product of permutation groups acting on disjoint point sets."""
    total = sum(g.degree for g in groups)
    gens = []
    offset = 0
    for g in groups:
        for x in g.gens:
            a = np.arange(total, dtype=np.int32)
            a[offset:offset + g.degree] = x.a + offset
            gens.append(Perm(a))
        offset += g.degree
    return Group(PermKind(total), gens, name)


def as_perm_group(g: Group, name="") -> Group:
    """The permutation group induced on the faithful domain."""
    if isinstance(g.kind, PermKind):
        return g
    return Group(PermKind(g.action.size), [Perm._wrap(g.perm_of(x)) for x in g.gens], name or g.name)
