"""Modules of finite groups over finite fields.

Matrices act on row vectors from the right, matching the right action
used by ``groupcore``: the matrix of ``g*h`` is ``M_g @ M_h``.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf import (FieldSpec, GF, Matrix, array_matmul, left_nullspace_array, mat_inv,
                 nullspace_array, parse_matrix, row_space, _rref_array, gf2_rref)
from .groupcore import Group, ImageMap, MatKind, ResourceError

MEATAXE_BUDGET = 200
EXHAUSTIVE_LIMIT = 2 ** 16
LINES_LIMIT = 2 ** 12


class ModuleError(ValueError):
    pass


# -- polynomials over a FieldSpec (coefficient lists, low degree first) -----------

def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(F, a, b):
    n = max(len(a), len(b))
    a = np.array(list(a) + [0] * (n - len(a)), dtype=np.int64)
    b = np.array(list(b) + [0] * (n - len(b)), dtype=np.int64)
    return _ptrim(int(x) for x in F.add(a, b)) if n else []


def _psub(F, a, b):
    return _padd(F, a, [int(F.neg(x)) for x in b])


def _pmul(F, a, b):
    if not a or not b:
        return []
    if F.e == 1:
        return _ptrim(int(x) for x in np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64)) % F.p)
    res = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    bb = np.array(b, dtype=np.int64)
    for i, c in enumerate(a):
        if c:
            res[i:i + len(b)] = F.add(res[i:i + len(b)], F.mul(bb, int(c)))
    return _ptrim(int(x) for x in res)


def _pdivmod(F, a, b):
    a = list(a)
    b = _ptrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = int(F.inv(b[-1]))
    q = [0] * max(len(a) - len(b) + 1, 0)
    bb = np.array(b, dtype=np.int64)
    arr = np.array(a, dtype=np.int64)
    for i in range(len(a) - len(b), -1, -1):
        c = int(arr[i + len(b) - 1])
        if c:
            f = int(F.mul(c, inv_lead))
            q[i] = f
            arr[i:i + len(b)] = F.sub(arr[i:i + len(b)], F.mul(bb, f))
    return _ptrim(q), _ptrim(int(x) for x in arr[:len(b) - 1])


def _pmod(F, a, b):
    return _pdivmod(F, a, b)[1]


def _pmonic(F, a):
    a = _ptrim(a)
    if not a or a[-1] == 1:
        return a
    inv = int(F.inv(a[-1]))
    return [int(F.mul(x, inv)) for x in a]


def _pgcd(F, a, b):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _pmod(F, a, b)
    return _pmonic(F, a)


def _ppowmod(F, base, n, mod):
    result = [1]
    base = _pmod(F, base, mod)
    while n:
        if n & 1:
            result = _pmod(F, _pmul(F, result, base), mod)
        base = _pmod(F, _pmul(F, base, base), mod)
        n >>= 1
    return result


def _edf(F, g, k, rng):
    """Split a product of distinct degree-k irreducibles into its factors."""
    if len(g) - 1 == k:
        return [g]
    n = len(g) - 1
    while True:
        r = _ptrim([rng.randrange(F.q) for _ in range(n)])
        if len(r) < 2:
            continue
        if F.p == 2:
            t = r
            acc = r
            for _ in range(F.e * k - 1):
                t = _pmod(F, _pmul(F, t, t), g)
                acc = _padd(F, acc, t)
            h = _pgcd(F, g, acc)
        else:
            h = _pgcd(F, g, _psub(F, _ppowmod(F, r, (F.q ** k - 1) // 2, g), [1]))
        if 0 < len(h) - 1 < n:
            return _edf(F, h, k, rng) + _edf(F, _pdivmod(F, g, h)[0], k, rng)


def irreducible_factors(F: FieldSpec, f, max_degree=None, seed=0):
    """Distinct monic irreducible factors of f, in order of increasing degree."""
    f = _pmonic(F, f)
    rng = random.Random(seed)
    x = [0, 1]
    xq = x
    k = 0
    while len(f) > 1:
        k += 1
        if max_degree is not None and k > max_degree:
            return
        if 2 * k > len(f) - 1:
            yield f
            return
        xq = _ppowmod(F, xq, F.q, f)
        g = _pgcd(F, f, _psub(F, xq, x))
        if len(g) > 1:
            for fac in _edf(F, g, k, rng):
                yield fac
            while True:
                h = _pgcd(F, f, g)
                if len(h) <= 1:
                    break
                f = _pdivmod(F, f, h)[0]
            xq = _pmod(F, xq, f) if len(f) > 1 else xq


# -- dense linear algebra helpers --------------------------------------------------

def _eval_poly_matrix(F, poly, A):
    d = A.shape[0]
    R = np.zeros((d, d), dtype=np.int64)
    eye = np.eye(d, dtype=np.int64)
    for c in reversed(poly):
        R = array_matmul(F, R, A)
        if c:
            R = F.add(R, F.mul(eye, int(c)))
    return R


class _Echelon:
    """Incrementally built row space; rows reduced against all earlier rows."""

    def __init__(self, F, d):
        self.F = F
        self.d = d
        self.rows = []
        self.piv = []

    def reduce(self, v, track=None):
        F = self.F
        v = np.array(v, dtype=np.int64)
        for i, (r, pc) in enumerate(zip(self.rows, self.piv)):
            c = int(v[pc])
            if c:
                v = F.sub(v, F.mul(r, c))
                if track is not None:
                    track.append((i, c))
        return v

    def add(self, v):
        """Add an already reduced nonzero vector; returns the scale used."""
        nz = np.flatnonzero(v)
        pc = int(nz[0])
        inv = int(self.F.inv(int(v[pc])))
        self.rows.append(self.F.mul(v, inv))
        self.piv.append(pc)
        return inv

    def __len__(self):
        return len(self.rows)


def charpoly(F: FieldSpec, A: np.ndarray):
    """Characteristic polynomial (monic, low degree first) via Krylov blocks."""
    d = A.shape[0]
    ech = _Echelon(F, d)
    total = [1]
    for i in range(d):
        if len(ech) == d:
            break
        w = np.zeros(d, dtype=np.int64)
        w[i] = 1
        if not ech.reduce(w).any():
            continue
        start = len(ech)
        coefs = []      # polynomial (in x) of each block row, as lists
        power = 0
        while True:
            track = []
            r = ech.reduce(w, track)
            poly = [0] * power + [1]
            for idx, c in track:
                if idx >= start:
                    poly = _psub(F, poly, [int(F.mul(c, x)) for x in coefs[idx - start]])
            if not r.any():
                total = _pmul(F, total, poly)
                break
            s = ech.add(r)
            coefs.append([int(F.mul(x, s)) for x in poly])
            w = array_matmul(F, w[None, :], A)[0]
            power += 1
    return total


# -- modules ------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GModule:
    field: FieldSpec
    mats: tuple
    group: Group | None = None
    name: str = ""
    dimension: int | None = None

    def __post_init__(self):
        mats = []
        for m in self.mats:
            a = np.array(m.a if isinstance(m, Matrix) else m, dtype=np.int64)
            a.setflags(write=False)
            mats.append(a)
        object.__setattr__(self, "mats", tuple(mats))
        if mats:
            d = mats[0].shape[0]
            if any(m.shape != (d, d) for m in mats):
                raise ModuleError("generator matrices must be square of one size")
            object.__setattr__(self, "dimension", d)
        elif self.dimension is None:
            raise ModuleError("dimension required when there are no generators")

    @property
    def dim(self) -> int:
        return self.dimension

    @classmethod
    def trivial(cls, field, ngens, dim=1, group=None, name="trivial"):
        return cls(field, tuple(np.eye(dim, dtype=np.int64) for _ in range(ngens)), group, name, dim)

    @classmethod
    def natural(cls, g: Group, name=""):
        k = g.kind
        if not isinstance(k, MatKind) or k.projective:
            raise ModuleError("natural module needs a linear matrix group")
        return cls(k.field, tuple(x.a for x in g.gens), g, name or g.name)

    def check_invertible(self) -> bool:
        from .gf import determinant
        return all(determinant(Matrix._wrap(self.field, m)) != 0 for m in self.mats)

    def word_matrix(self, word):
        F = self.field
        out = np.eye(self.dim, dtype=np.int64)
        invs = {}
        for g, e in word:
            if e == 1:
                m = self.mats[g]
            else:
                if g not in invs:
                    invs[g] = mat_inv(Matrix._wrap(F, self.mats[g])).a
                m = invs[g]
            out = array_matmul(F, out, m)
        return out

    def image_map(self) -> ImageMap:
        if self.group is None:
            raise ModuleError("module has no attached group")
        return ImageMap(self.group, [Matrix._wrap(self.field, m) for m in self.mats],
                        MatKind(self.field, self.dim))

    def matrix_of(self, x):
        return self.image_map()(x).a

    def restrict(self, sub: Group, name="") -> "GModule":
        """Restriction to a subgroup of the attached group."""
        im = self.image_map()
        return GModule(self.field, tuple(im(h).a for h in sub.gens), sub, name or self.name + "|")

    def with_group(self, g: Group) -> "GModule":
        return GModule(self.field, self.mats, g, self.name)

    def image_group(self) -> Group:
        return Group.matrix(self.field, self.dim, [Matrix._wrap(self.field, m) for m in self.mats])

    def is_faithful(self) -> bool:
        if self.group is None:
            raise ModuleError("module has no attached group")
        return self.image_group().order() == self.group.order()

    def __repr__(self):
        return f"GModule({self.name or '?'}, dim={self.dim}, over {self.field})"


def direct_sum(a: GModule, b: GModule) -> GModule:
    F = a.field
    mats = []
    for x, y in zip(a.mats, b.mats):
        m = np.zeros((a.dim + b.dim,) * 2, dtype=np.int64)
        m[:a.dim, :a.dim] = x
        m[a.dim:, a.dim:] = y
        mats.append(m)
    return GModule(F, tuple(mats), a.group, f"{a.name}+{b.name}")


def conjugate_module(m: GModule, X: np.ndarray) -> GModule:
    """Module with matrices X M X^-1 (change of basis)."""
    F = m.field
    Xi = mat_inv(Matrix._wrap(F, X)).a
    return GModule(F, tuple(array_matmul(F, array_matmul(F, X, a), Xi) for a in m.mats), m.group, m.name)


def tensor(a: GModule, b: GModule) -> GModule:
    F = a.field
    if b.field is not F:
        raise ModuleError("tensor factors over different fields")
    mats = []
    for x, y in zip(a.mats, b.mats):
        if F.e == 1:
            k = np.kron(x, y) % F.p
        else:
            k = F.mul(x[:, None, :, None], y[None, :, None, :]).reshape(a.dim * b.dim, a.dim * b.dim)
        mats.append(k)
    return GModule(F, tuple(mats), a.group, f"{a.name}x{b.name}")


def exterior_square(a: GModule) -> GModule:
    F = a.field
    I, J = np.triu_indices(a.dim, 1)
    mats = []
    for A in a.mats:
        AI, AJ = A[I], A[J]
        m = F.sub(F.mul(AI[:, I], AJ[:, J]), F.mul(AI[:, J], AJ[:, I]))
        mats.append(m)
    return GModule(F, tuple(mats), a.group, f"L2({a.name})")


def dual(a: GModule) -> GModule:
    F = a.field
    mats = tuple(np.ascontiguousarray(mat_inv(Matrix._wrap(F, A)).a.T) for A in a.mats)
    return GModule(F, mats, a.group, f"{a.name}*")


def permutation_module(g: Group, F: FieldSpec, name="") -> GModule:
    """Permutation module on the points of the group's faithful action."""
    n = g.action.size
    mats = []
    for x in g.gens:
        p = g.perm_of(x)
        m = np.zeros((n, n), dtype=np.int64)
        m[np.arange(n), p] = 1
        mats.append(m)
    return GModule(F, tuple(mats), g, name or f"perm({g.name})")


# -- spinning and sub/quotient modules ---------------------------------------------

def spin(F, vectors, mats, track=False):
    """Submodule spanned by the images of ``vectors``.

    Returns raw basis rows (in discovery order); with ``track`` also the
    list of (parent row, generator) pairs, parent -1 marking seed vectors.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
    d = vectors.shape[1]
    ech = _Echelon(F, d)
    basis = []
    words = []
    for k, v in enumerate(vectors):
        r = ech.reduce(v)
        if r.any():
            ech.add(r)
            basis.append(v)
            words.append((-1, k))
    i = 0
    while i < len(basis) and len(basis) < d:
        imgs = [array_matmul(F, basis[i][None, :], m)[0] for m in mats]
        for g, w in enumerate(imgs):
            r = ech.reduce(w)
            if r.any():
                ech.add(r)
                basis.append(w)
                words.append((i, g))
                if len(basis) == d:
                    break
        i += 1
    B = np.array(basis, dtype=np.int64).reshape(len(basis), d)
    return (B, words) if track else B


def replay_spin(F, seeds, words, mats):
    """Apply a recorded spin to new seed vectors."""
    seeds = np.atleast_2d(seeds)
    rows = []
    for parent, g in words:
        if parent < 0:
            rows.append(seeds[g])
        else:
            rows.append(array_matmul(F, rows[parent][None, :], mats[g])[0])
    return np.array(rows, dtype=np.int64)


def _echelon_basis(F, S):
    e, r, piv = (gf2_rref(S) if F.q == 2 and S.size > 4096 else _rref_array(F, S))
    return e[:r], list(piv[:r])


def submodule(m: GModule, S, name="") -> GModule:
    F = m.field
    E, piv = _echelon_basis(F, np.asarray(S, dtype=np.int64))
    mats = tuple(array_matmul(F, E, A)[:, piv] for A in m.mats)
    return GModule(F, mats, m.group, name or m.name + ".sub")


def quotient(m: GModule, S, name="") -> GModule:
    F = m.field
    E, piv = _echelon_basis(F, np.asarray(S, dtype=np.int64))
    rest = [c for c in range(m.dim) if c not in set(piv)]
    mats = []
    for A in m.mats:
        rows = A[rest]
        if piv:
            rows = F.sub(rows, array_matmul(F, rows[:, piv], E))
        mats.append(rows[:, rest])
    return GModule(F, tuple(mats), m.group, name or m.name + ".quo")


def is_submodule(m: GModule, S) -> bool:
    F = m.field
    E, _ = _echelon_basis(F, np.asarray(S, dtype=np.int64))
    k = E.shape[0]
    for A in m.mats:
        if row_space(F, np.vstack([E, array_matmul(F, E, A)])).shape[0] != k:
            return False
    return True


# -- random algebra elements ---------------------------------------------------------

class _Sampler:
    """Seeded random elements of the enveloping algebra, replayable on other modules."""

    def __init__(self, F, ngens, rng):
        self.F = F
        self.rng = rng
        self.ngens = ngens
        self.ops = []      # ('mul', i, j) extends the product pool
        self.pool = ngens

    def next_recipe(self):
        rng = self.rng
        if self.pool < self.ngens + 8:
            i = rng.randrange(self.pool)
            j = rng.randrange(self.pool)
            self.ops.append((i, j))
            self.pool += 1
        k = rng.randint(1, min(3, self.pool))
        terms = rng.sample(range(self.pool), k)
        coefs = [rng.randrange(1, self.F.p) for _ in terms]
        return (len(self.ops), list(zip(terms, coefs)))

    def build_pool(self, mats, nops):
        pool = list(mats)
        for i, j in self.ops[:nops]:
            pool.append(array_matmul(self.F, pool[i], pool[j]))
        return pool

    def evaluate(self, recipe, mats, pool_cache=None):
        nops, combo = recipe
        pool = self.build_pool(mats, nops)
        F = self.F
        d = mats[0].shape[0]
        out = np.zeros((d, d), dtype=np.int64)
        for t, c in combo:
            out = F.add(out, F.mul(pool[t], c))
        return out


@dataclass
class MeatAxeResult:
    irreducible: bool
    submodule: np.ndarray | None = None
    method: str = "norton"
    attempts: int = 0


def meataxe(m: GModule, seed: int = 0, budget: int = MEATAXE_BUDGET) -> MeatAxeResult:
    """Norton irreducibility test with a proper-submodule witness when reducible."""
    F = m.field
    d = m.dim
    if d == 0:
        raise ModuleError("zero module")
    if d == 1:
        return MeatAxeResult(True, None, "trivial-dim", 0)
    if not m.mats:
        return MeatAxeResult(False, np.eye(d, dtype=np.int64)[:1], "no-generators", 0)
    rng = random.Random(seed)
    sampler = _Sampler(F, len(m.mats), rng)
    mats = list(m.mats)
    matsT = [np.ascontiguousarray(A.T) for A in mats]
    for attempt in range(1, budget + 1):
        recipe = sampler.next_recipe()
        theta = sampler.evaluate(recipe, mats)
        cp = charpoly(F, theta)
        for p in irreducible_factors(F, cp, max_degree=max(2, d // 4), seed=attempt):
            P = _eval_poly_matrix(F, p, theta)
            N = left_nullspace_array(F, P)
            S = spin(F, N[:1], mats)
            if S.shape[0] < d:
                return MeatAxeResult(False, S, "norton", attempt)
            if N.shape[0] == len(p) - 1:
                NT = nullspace_array(F, P)
                ST = spin(F, NT[:1], matsT)
                if ST.shape[0] < d:
                    return MeatAxeResult(False, nullspace_array(F, ST), "norton-dual", attempt)
                return MeatAxeResult(True, None, "norton", attempt)
            if F.q ** N.shape[0] <= LINES_LIMIT:
                # N is a vector space over K = F[x]/(p); test every K-line of N and of N^T
                NT = nullspace_array(F, P)
                bad = _first_proper_line(F, N, theta, len(p) - 1, mats)
                if bad is not None:
                    return MeatAxeResult(False, bad, "norton-lines", attempt)
                bad = _first_proper_line(F, NT, np.ascontiguousarray(theta.T), len(p) - 1, matsT)
                if bad is not None:
                    return MeatAxeResult(False, nullspace_array(F, bad), "norton-lines-dual", attempt)
                return MeatAxeResult(True, None, "norton-lines", attempt)
    if F.q ** d <= EXHAUSTIVE_LIMIT:
        return _exhaustive_irreducible(m)
    raise ResourceError(f"MeatAxe budget of {budget} random elements exhausted (dim {d})")


def _first_proper_line(F, N, theta, deg, mats):
    """Spin one vector from each K-line of the row space N; first proper submodule or None."""
    d = N.shape[1]
    k = N.shape[0]
    w = np.array([F.q ** i for i in range(d)], dtype=object)
    covered = set()
    for coeffs in itertools.product(range(F.q), repeat=k):
        if not any(coeffs):
            continue
        v = array_matmul(F, np.array(coeffs, dtype=np.int64)[None, :], N)[0]
        if int(v @ w) in covered:
            continue
        S = spin(F, v[None, :], mats)
        if S.shape[0] < d:
            return S
        powers = [v]
        for _ in range(deg - 1):
            powers.append(array_matmul(F, powers[-1][None, :], theta)[0])
        P = np.array(powers)
        for c in itertools.product(range(F.q), repeat=deg):
            u = array_matmul(F, np.array(c, dtype=np.int64)[None, :], P)[0]
            covered.add(int(u @ w))
    return None


def _exhaustive_irreducible(m: GModule) -> MeatAxeResult:
    F = m.field
    d = m.dim
    for t in itertools.product(range(F.q), repeat=d):
        nz = [x for x in t if x]
        if not nz or nz[0] != 1:
            continue
        S = spin(F, np.array(t)[None, :], list(m.mats))
        if S.shape[0] < d:
            return MeatAxeResult(False, S, "exhaustive", 0)
    return MeatAxeResult(True, None, "exhaustive", 0)


def is_irreducible(m: GModule, seed: int = 0, witness: bool = False):
    res = meataxe(m, seed)
    return (res.irreducible, res.submodule) if witness else res.irreducible


# -- homomorphisms, isomorphism, endomorphisms ----------------------------------------

def _good_null(m: GModule, seed: int, tries: int = 40):
    """Algebra element (recipe, factor) with small nonzero nullity on m."""
    F = m.field
    rng = random.Random(seed)
    sampler = _Sampler(F, len(m.mats), rng)
    best = None
    for attempt in range(tries):
        recipe = sampler.next_recipe()
        theta = sampler.evaluate(recipe, list(m.mats))
        cp = charpoly(F, theta)
        for p in irreducible_factors(F, cp, max_degree=max(2, m.dim // 4), seed=attempt):
            N = left_nullspace_array(F, _eval_poly_matrix(F, p, theta))
            if best is None or N.shape[0] < best[3].shape[0]:
                best = (recipe, p, theta, N)
            if N.shape[0] == len(p) - 1:
                return sampler, best
            break
    if best is None:
        raise ResourceError("no singular algebra element found")
    return sampler, best


def hom_space(a: GModule, b: GModule, seed: int = 0):
    """Basis of Hom(a, b) as matrices X with A_g X = X B_g; a must be irreducible."""
    F = a.field
    if b.field is not F or len(a.mats) != len(b.mats):
        raise ModuleError("modules over different fields or generator counts")
    sampler, (recipe, p, theta, Na) = _good_null(a, seed)
    thb = sampler.evaluate(recipe, list(b.mats))
    Nb = left_nullspace_array(F, _eval_poly_matrix(F, p, thb))
    if Nb.shape[0] == 0:
        return []
    V, words = spin(F, Na[:1], list(a.mats), track=True)
    if V.shape[0] != a.dim:
        raise ModuleError("first module is reducible")
    Vi = mat_inv(Matrix._wrap(F, V)).a
    phis = [array_matmul(F, Vi, replay_spin(F, n[None, :], words, list(b.mats))) for n in Nb]
    cols = []
    for phi in phis:
        eqs = [F.sub(array_matmul(F, A, phi), array_matmul(F, phi, B)).reshape(-1)
               for A, B in zip(a.mats, b.mats)]
        cols.append(np.concatenate(eqs))
    system = np.array(cols, dtype=np.int64).T
    X = nullspace_array(F, system)
    out = []
    for x in X:
        h = np.zeros((a.dim, b.dim), dtype=np.int64)
        for c, phi in zip(x, phis):
            if c:
                h = F.add(h, F.mul(phi, int(c)))
        out.append(h)
    return out


def _hom_space_linear(a: GModule, b: GModule):
    F = a.field
    da, db = a.dim, b.dim
    if da * db > 1024:
        raise ResourceError("linear hom-space solve too large")
    blocks = []
    Ib = np.eye(db, dtype=np.int64)
    Ia = np.eye(da, dtype=np.int64)
    for A, B in zip(a.mats, b.mats):
        # vec(A X) - vec(X B) with row-major vec
        if F.e == 1:
            left = np.kron(A, Ib) % F.p
            right = np.kron(Ia, B.T) % F.p
        else:
            left = F.mul(A[:, None, :, None], Ib[None, :, None, :]).reshape(da * db, da * db)
            right = F.mul(Ia[:, None, :, None], B.T[None, :, None, :]).reshape(da * db, da * db)
        blocks.append(F.sub(left, right))
    N = nullspace_array(F, np.vstack(blocks))
    return [n.reshape(da, db) for n in N]


def module_iso(a: GModule, b: GModule, seed: int = 0):
    """Invertible P with P @ a_g == b_g @ P for every generator, or None."""
    F = a.field
    if a.dim != b.dim or b.field is not F or len(a.mats) != len(b.mats):
        return None
    for A, B in zip(a.mats, b.mats):
        if charpoly(F, A) != charpoly(F, B):
            return None
    if meataxe(a, seed).irreducible:
        homs = hom_space(a, b, seed)
        if not homs:
            return None
        phi = homs[0]
    else:
        homs = _hom_space_linear(a, b)
        phi = _invertible_combination(F, homs, seed)
        if phi is None:
            return None
    try:
        P = mat_inv(Matrix._wrap(F, phi)).a
    except ZeroDivisionError:
        return None
    return P


def _invertible_combination(F, homs, seed, tries=200):
    from .gf import determinant
    if not homs:
        return None
    rng = random.Random(seed)
    k = len(homs)
    cands = homs if k == 1 else None
    for t in range(tries):
        if cands is not None and t < len(cands):
            h = cands[t]
        else:
            h = np.zeros_like(homs[0])
            for x in homs:
                c = rng.randrange(F.q)
                if c:
                    h = F.add(h, F.mul(x, c))
        if determinant(Matrix._wrap(F, h)) != 0:
            return h
        if k == 1:
            return None
    return None


def endo_field_degree(m: GModule, seed: int = 0) -> int:
    """Dimension of End(m) over the module's field (m irreducible)."""
    if not meataxe(m, seed).irreducible:
        raise ModuleError("endo_field_degree needs an irreducible module")
    return len(hom_space(m, m, seed))


# -- chopping ---------------------------------------------------------------------------

def chop(m: GModule, seed: int = 0):
    """Composition factors as a list of (irreducible module, multiplicity)."""
    stack = [m]
    factors = []
    step = 0
    while stack:
        x = stack.pop()
        res = meataxe(x, seed + step)
        step += 1
        if res.irreducible:
            factors.append(x)
        else:
            stack.append(quotient(x, res.submodule))
            stack.append(submodule(x, res.submodule))
    return group_isomorphic(factors, seed)


def group_isomorphic(mods, seed=0):
    out = []
    for f in mods:
        for entry in out:
            if module_iso(entry[0], f, seed) is not None:
                entry[1] += 1
                break
        else:
            out.append([f, 1])
    return [(f, k) for f, k in out]


def composition_dims(m: GModule, seed: int = 0):
    return sorted(f.dim for f, k in chop(m, seed) for _ in range(k))


# -- forms -----------------------------------------------------------------------------

@dataclass
class BilinearForm:
    field: FieldSpec
    gram: np.ndarray

    def value(self, u, v) -> int:
        F = self.field
        return int(array_matmul(F, array_matmul(F, np.atleast_2d(u), self.gram), np.atleast_2d(v).T)[0, 0])

    def is_alternating(self) -> bool:
        F = self.field
        return bool((np.diag(self.gram) == 0).all() and (F.add(self.gram, self.gram.T) == 0).all())

    def is_invariant(self, mats) -> bool:
        F = self.field
        return all(np.array_equal(array_matmul(F, array_matmul(F, A, self.gram), A.T), self.gram) for A in mats)

    def is_nondegenerate(self) -> bool:
        return Matrix._wrap(self.field, self.gram).rank() == self.gram.shape[0]


@dataclass
class QuadraticForm:
    """Q(x) = x U x^T with U upper triangular over GF(2)."""
    field: FieldSpec
    upper: np.ndarray
    sign: int | None = None

    @property
    def polar(self) -> np.ndarray:
        return (self.upper + self.upper.T) % 2 if self.field.q == 2 else self.field.add(self.upper, self.upper.T)

    def value(self, x) -> int:
        x = np.asarray(x, dtype=np.int64)
        return int(x @ self.upper @ x) % 2

    def values(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.int64)
        return np.einsum("ni,ij,nj->n", X, self.upper, X) % 2

    def is_invariant(self, mats) -> bool:
        return all(np.array_equal(_upper_reduce(array_matmul(self.field, array_matmul(self.field, A, self.upper), A.T)),
                                  self.upper) for A in mats)


def _upper_reduce(M):
    """Upper-triangular representative of the quadratic form x M x^T over GF(2)."""
    U = np.triu((M + M.T) % 2, 1)
    U[np.diag_indices_from(U)] = np.diag(M) % 2
    return U


def _lex_least(F, basis, build, accept, max_enum=4096):
    """Least (row-major) accepted matrix among combinations of a solution basis."""
    k = len(basis)
    if k == 0:
        return None
    best = None
    if F.q ** k <= max_enum:
        for coeffs in itertools.product(range(F.q), repeat=k):
            if not any(coeffs):
                continue
            vec = np.zeros_like(basis[0])
            for c, b in zip(coeffs, basis):
                if c:
                    vec = F.add(vec, F.mul(b, c))
            M = build(vec)
            if accept(M) and (best is None or tuple(M.reshape(-1)) < tuple(best.reshape(-1))):
                best = M
        return best
    rng = random.Random(0)
    for _ in range(max_enum):
        vec = np.zeros_like(basis[0])
        for b in basis:
            c = rng.randrange(F.q)
            if c:
                vec = F.add(vec, F.mul(b, c))
        M = build(vec)
        if accept(M) and (best is None or tuple(M.reshape(-1)) < tuple(best.reshape(-1))):
            best = M
    return best


def _solve_system(F, blocks, nunk):
    system = np.vstack(blocks) if blocks else np.zeros((0, nunk), dtype=np.int64)
    return list(nullspace_array(F, system))


def invariant_alternating_forms(m: GModule):
    """Basis (as Gram matrices) of invariant alternating forms: A B A^T = B."""
    F = m.field
    d = m.dim
    I, J = np.triu_indices(d, 1)
    npairs = I.size
    blocks = []
    for A in m.mats:
        Ai = A[:, I]
        Aj = A[:, J]
        # (A E_ij A^T)[k, l] = A[k,i] A[l,j] - A[k,j] A[l,i], read at k < l
        img = F.sub(F.mul(Ai[I], Aj[J]), F.mul(Aj[I], Ai[J]))
        img = F.sub(img, np.eye(npairs, dtype=np.int64))
        blocks.append(img)
    sols = _solve_system(F, blocks, npairs)

    def build(vec):
        B = np.zeros((d, d), dtype=np.int64)
        B[I, J] = vec
        B[J, I] = F.neg(vec)
        return B
    return [build(s) for s in sols], build


def invariant_alternating_form(m: GModule) -> BilinearForm | None:
    F = m.field
    if m.dim % 2:
        return None
    basis, build = invariant_alternating_forms(m)
    if not basis:
        return None
    I, J = np.triu_indices(m.dim, 1)
    vecs = [b[I, J] for b in basis]
    best = _lex_least(F, vecs, build, lambda B: Matrix._wrap(F, B).rank() == m.dim)
    return None if best is None else BilinearForm(F, best)


def invariant_quadratic_form(m: GModule) -> QuadraticForm | None:
    F = m.field
    if F.q != 2:
        raise ModuleError("quadratic forms are implemented over GF(2)")
    d = m.dim
    if d % 2:
        return None
    I, J = np.triu_indices(d)
    nunk = I.size
    blocks = []
    eye = np.eye(nunk, dtype=np.int64)
    for A in m.mats:
        Ai = A[:, I]
        Aj = A[:, J]
        # x A E_ij A^T x^T = (xA)_i (xA)_j; coefficient of x_k x_l (k<=l)
        prod = (Ai[I] * Aj[J] + np.where((I < J)[:, None], Ai[J] * Aj[I], 0)) % 2
        blocks.append((prod + eye) % 2)
    sols = _solve_system(F, blocks, nunk)

    def build(vec):
        U = np.zeros((d, d), dtype=np.int64)
        U[I, J] = vec
        return U
    best = _lex_least(F, sols, build, lambda U: Matrix._wrap(F, (U + U.T) % 2).rank() == d)
    if best is None:
        return None
    q = QuadraticForm(F, best)
    q.sign = quadratic_sign(best)
    return q


def symplectic_basis(F, B):
    """Pairs (e_i, f_i) with B(e_i, f_j) = delta_ij for nondegenerate alternating B."""
    d = B.shape[0]
    rest = [np.eye(d, dtype=np.int64)[i] for i in range(d)]
    pairs = []

    def bf(u, v):
        return int(array_matmul(F, array_matmul(F, u[None, :], B), v[:, None])[0, 0])
    while rest:
        e = rest.pop(0)
        fi = next((i for i, v in enumerate(rest) if bf(e, v)), None)
        if fi is None:
            raise ModuleError("form is degenerate")
        f = rest.pop(fi)
        f = F.mul(f, int(F.inv(bf(e, f))))
        new = []
        for v in rest:
            # v - B(v,f) e + B(v,e) f  (projection onto <e,f>-perp)
            v2 = F.sub(v, F.mul(e, bf(v, f)))
            v2 = F.add(v2, F.mul(f, bf(v, e)))
            new.append(v2)
        rest = [v for v in new if v.any()]
        pairs.append((e, f))
    return pairs


def arf_invariant(upper: np.ndarray) -> int:
    F = GF(2)
    B = (upper + upper.T) % 2
    Q = QuadraticForm(F, upper)
    return sum(Q.value(e) * Q.value(f) for e, f in symplectic_basis(F, B)) % 2


def quadratic_sign(upper: np.ndarray) -> int:
    return 1 if arf_invariant(upper) == 0 else -1


def count_zeros(upper: np.ndarray) -> int:
    d = upper.shape[0]
    X = np.array(list(itertools.product((0, 1), repeat=d)), dtype=np.int64)
    return int(np.count_nonzero(np.einsum("ni,ij,nj->n", X, upper, X) % 2 == 0))


# -- fields of definition ---------------------------------------------------------------

def subfield_embedding(big: FieldSpec, small: FieldSpec) -> np.ndarray:
    """Array mapping codes of ``small`` to codes of the copy inside ``big``."""
    if big.p != small.p or big.e % small.e:
        raise ModuleError("not a subfield")
    if small.e == big.e:
        return np.arange(big.q)
    if small.q == small.p:
        return np.arange(small.q)
    step = (big.q - 1) // (small.q - 1)
    poly = small.poly
    for k in range(1, small.q - 1):
        lam = int(big.exp[(k * step) % (big.q - 1)])
        acc = 0
        for c in reversed(poly):
            acc = int(big.add(big.mul(acc, lam), c))
        if acc == 0:
            break
    else:
        raise ModuleError("no root of the subfield polynomial")
    emb = np.zeros(small.q, dtype=np.int64)
    for code in range(small.q):
        digits = [(code // small.p ** i) % small.p for i in range(small.e)]
        acc = 0
        for c in reversed(digits):
            acc = int(big.add(big.mul(acc, lam), c))
        emb[code] = acc
    return emb


def _restrict_codes(big, small, arr):
    emb = subfield_embedding(big, small)
    back = {int(v): i for i, v in enumerate(emb)}
    flat = arr.reshape(-1)
    if not all(int(x) in back for x in np.unique(flat)):
        return None
    return np.array([back[int(x)] for x in flat], dtype=np.int64).reshape(arr.shape)


def extend_scalars(m: GModule, big: FieldSpec) -> GModule:
    emb = subfield_embedding(big, m.field)
    return GModule(big, tuple(emb[A] for A in m.mats), m.group, m.name)


def write_over_subfield(m: GModule, f: int, seed: int = 0, tries: int = 60) -> GModule | None:
    """Conjugate module with entries in GF(p^f), or None."""
    F = m.field
    if F.e % f:
        raise ModuleError(f"{f} does not divide {F.e}")
    small = GF(F.p, f)
    direct = [_restrict_codes(F, small, A) for A in m.mats]
    if all(x is not None for x in direct):
        return GModule(small, tuple(direct), m.group, m.name)
    sub_codes = set(int(x) for x in subfield_embedding(F, small))
    rng = random.Random(seed)
    sampler = _Sampler(F, len(m.mats), rng)
    for attempt in range(tries):
        recipe = sampler.next_recipe()
        theta = sampler.evaluate(recipe, list(m.mats))
        cp = charpoly(F, theta)
        if any(c not in sub_codes for c in cp):
            return None
        for lam in sorted(sub_codes):
            val = 0
            for c in reversed(cp):
                val = int(F.add(F.mul(val, lam), c))
            if val:
                continue
            P = F.sub(theta, F.mul(np.eye(m.dim, dtype=np.int64), lam))
            N = left_nullspace_array(F, P)
            if N.shape[0] != 1:
                continue
            V = spin(F, N, list(m.mats))
            if V.shape[0] < m.dim:
                raise ModuleError("write_over_subfield expects an irreducible module")
            conj = conjugate_module(m, V)
            mats = [_restrict_codes(F, small, A) for A in conj.mats]
            if all(x is not None for x in mats):
                return GModule(small, tuple(mats), m.group, m.name)
            return None
    return None


# -- catalogue of irreducibles -----------------------------------------------------------

@dataclass
class IrreducibleCatalogue:
    modules: list
    certificate: dict = dc_field(default_factory=dict)

    def dims(self, nontrivial=False):
        out = []
        for m in self.modules:
            if nontrivial and _is_trivial(m):
                continue
            out.append(m.dim)
        return sorted(out)


def _is_trivial(m: GModule) -> bool:
    return m.dim == 1 and all((A == 1).all() for A in m.mats)


def all_irreducibles_up_to_dim(g: Group, F: FieldSpec, dmax: int, start: GModule | None = None,
                               seed: int = 0, tensor_cap: int = 100, max_rounds: int = 8) -> IrreducibleCatalogue:
    """Irreducibles of dimension <= dmax from tensor closure of a faithful module."""
    if start is None:
        start = permutation_module(g, F)
    known = [GModule.trivial(F, len(start.mats), group=g)]
    sizes_seen = []

    def absorb(mod, step):
        new_small = False
        for fac, _ in chop(mod, seed + step):
            fac = fac.with_group(g)
            if not any(module_iso(k, fac, seed) is not None for k in known if k.dim == fac.dim):
                known.append(fac)
                if fac.dim <= dmax:
                    new_small = True
        return new_small

    absorb(start, 0)
    tried = set()
    stable = 0
    rounds = 0
    while stable < 2 and rounds < max_rounds:
        rounds += 1
        new_small = False
        snapshot = list(known)
        for i, j in itertools.combinations_with_replacement(range(len(snapshot)), 2):
            a, b = snapshot[i], snapshot[j]
            if a.dim == 1 and _is_trivial(a) or b.dim == 1 and _is_trivial(b):
                continue
            if a.dim * b.dim > tensor_cap or (i, j) in tried:
                continue
            tried.add((i, j))
            if absorb(tensor(a, b), 1000 * rounds + len(tried)):
                new_small = True
        sizes_seen.append(len(known))
        stable = 0 if new_small else stable + 1
    small = [k for k in known if k.dim <= dmax]
    cert = {
        "level": "stable (heuristic)" if stable >= 2 else "incomplete",
        "rounds": rounds,
        "stable_rounds": stable,
        "tensor_cap": tensor_cap,
        "start_dim": start.dim,
        "irreducibles_found": sorted(k.dim for k in known),
        "endo_weighted_total": sum(k.dim for k in small),
    }
    return IrreducibleCatalogue(small, cert)


# -- .mod text format -------------------------------------------------------------------

_MOD_HEADER = re.compile(r"^\s*module\s+(\S+)\s+dim\s+(\d+)\s+over\s+(\d+)\^(\d+)\s+group\s+(\S+)\s*$")


def format_module(m: GModule, group_name: str | None = None) -> str:
    F = m.field
    gname = group_name or (m.group.name if m.group is not None and m.group.name else "G")
    out = f"module {m.name or 'M'} dim {m.dim} over {F.p}^{F.e} group {gname}\n"
    for A in m.mats:
        out += Matrix._wrap(F, A).to_text()
    return out


def parse_module(text: str, group: Group | None = None) -> GModule:
    lines = [ln for ln in text.splitlines() if not ln.lstrip().startswith("#")]
    i = 0
    while i < len(lines) and not lines[i].strip():
        i += 1
    mh = _MOD_HEADER.match(lines[i]) if i < len(lines) else None
    if not mh:
        raise ModuleError(f"line {i + 1}: expected 'module <name> dim <d> over <p>^<e> group <name>'")
    name, d, p, e = mh.group(1), int(mh.group(2)), int(mh.group(3)), int(mh.group(4))
    F = GF(p, e)
    mats = []
    j = i + 1
    while j < len(lines):
        if not lines[j].strip():
            j += 1
            continue
        mat, j = parse_matrix(lines, j)
        if mat.shape != (d, d) or mat.field is not F:
            raise ModuleError(f"module {name}: matrix block shape or field mismatch")
        mats.append(mat.a)
    if group is not None and len(group.gens) != len(mats):
        raise ModuleError(f"module {name}: {len(mats)} matrices for {len(group.gens)} generators")
    return GModule(F, tuple(mats), group, name)
