"""Second cohomology with coefficients in a GF(p)-module, and split tests.

Modules are right modules (row vectors, m.g = m @ M_g).  A normalized
2-cocycle on S satisfies

    alpha(ab, c) + alpha(a, b).c = alpha(a, bc) + alpha(b, c),

which is the associativity of (m, a)(n, b) = (m.b + n + alpha(a, b), ab).
Coboundaries are (d phi)(a, b) = phi(a).b + phi(b) - phi(ab).
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf import FieldSpec, GF, Matrix, array_matmul, gf2_nullspace_packed, gf2_pack, nullspace_array, row_space
from .groupcore import Group, ResourceError
from .modrep import GModule, meataxe
from .presentations import (Presentation, evaluate_word, fox_coefficients, todd_coxeter,
                            invert_word, reduce_word)


class CohomologyError(RuntimeError):
    pass


# -- enumerated small groups ------------------------------------------------------------

@dataclass
class EnumeratedGroup:
    """Elements (identity first), multiplication table and words in the generators."""
    group: Group
    elements: list
    index: dict
    table: np.ndarray
    inverse: np.ndarray
    words: list
    gen_index: list

    @classmethod
    def build(cls, g: Group, gens=None, limit: int = 4096):
        kind = g.kind
        gens = list(g.gens if gens is None else gens)
        ident = kind.identity()
        elems = [ident]
        index = {kind.key(ident): 0}
        words = [()]
        q = deque([0])
        while q:
            i = q.popleft()
            for j, x in enumerate(gens):
                y = kind.mul(elems[i], x)
                k = kind.key(y)
                if k not in index:
                    if len(elems) >= limit:
                        raise ResourceError(f"group larger than {limit} elements")
                    index[k] = len(elems)
                    elems.append(y)
                    words.append(words[i] + ((j, 1),))
                    q.append(index[k])
        N = len(elems)
        table = np.empty((N, N), dtype=np.int32)
        for i in range(N):
            for j in range(N):
                table[i, j] = index[kind.key(kind.mul(elems[i], elems[j]))]
        inverse = np.argmax(table == 0, axis=1).astype(np.int32)
        gen_index = [index[kind.key(x)] for x in gens]
        return cls(g, elems, index, table, inverse, words, gen_index)

    @property
    def order(self) -> int:
        return len(self.elements)

    def find(self, x):
        return self.index.get(self.group.kind.key(x))


def _module_matrices(enum: EnumeratedGroup, M: GModule, gen_mats=None) -> np.ndarray:
    """Matrix of every enumerated element, from the generator matrices along BFS words."""
    F = M.field
    gm = list(M.mats if gen_mats is None else gen_mats)
    N, d = enum.order, M.dim
    out = np.zeros((N, d, d), dtype=np.int64)
    out[0] = np.eye(d, dtype=np.int64)
    for i in range(1, N):
        w = enum.words[i]
        parent = enum.index[enum.group.kind.key(_word_element(enum, w[:-1]))]
        out[i] = array_matmul(F, out[parent], gm[w[-1][0]])
    return out


def _word_element(enum: EnumeratedGroup, word):
    kind = enum.group.kind
    x = kind.identity()
    for g, _ in word:
        x = kind.mul(x, enum.elements[enum.gen_index[g]])
    return x


def minimal_generators(g: Group, modulo: Group | None = None):
    """Greedy subset of the generators that still generates (together with ``modulo``)."""
    base = list(modulo.gens) if modulo is not None else []
    target = g.order()
    chosen = []
    for x in g.gens:
        if g.subgroup(base + chosen).order() == target:
            break
        if not g.subgroup(base + chosen).contains(x):
            chosen.append(x)
    return chosen


# -- cocycle spaces ------------------------------------------------------------------------

@dataclass
class CocycleSpace:
    group: EnumeratedGroup
    module: GModule
    mats: np.ndarray = dc_field(repr=False)
    Z: np.ndarray = dc_field(repr=False)        # rows in the normalized layout
    B: np.ndarray = dc_field(repr=False)
    H: np.ndarray = dc_field(repr=False)        # Z rows completing a basis of B
    elapsed_ms: int = 0

    @property
    def field(self) -> FieldSpec:
        return self.module.field

    @property
    def dim_z2(self) -> int:
        return self.Z.shape[0]

    @property
    def dim_b2(self) -> int:
        return self.B.shape[0]

    @property
    def dim_h2(self) -> int:
        return self.dim_z2 - self.dim_b2

    def full(self, row: np.ndarray) -> np.ndarray:
        """Expand a normalized cochain row to an N x N x d array."""
        N, d = self.group.order, self.module.dim
        out = np.zeros((N, N, d), dtype=np.int64)
        out[1:, 1:] = row.reshape(N - 1, N - 1, d)
        return out

    def verify_cocycles(self, rows=None) -> bool:
        """Exhaustive identity check over all |S|^3 triples."""
        rows = self.Z if rows is None else rows
        return all(cocycle_defect(self.group, self.mats, self.field, self.full(r)) == 0 for r in rows)


def cocycle_defect(enum: EnumeratedGroup, mats, F: FieldSpec, alpha: np.ndarray) -> int:
    """Number of triples (a, b, c) at which the cocycle identity fails."""
    T = enum.table
    N = enum.order
    bad = 0
    for c in range(N):
        lhs = F.add(alpha[T, c], _act(F, alpha, mats[c]))
        rhs = F.add(alpha[:, T[:, c]], alpha[None, :, c])
        bad += int(np.count_nonzero((lhs != rhs).any(axis=2)))
    return bad


def _act(F: FieldSpec, arr: np.ndarray, m: np.ndarray) -> np.ndarray:
    shape = arr.shape
    flat = arr.reshape(-1, shape[-1])
    return array_matmul(F, flat, m).reshape(shape)


def _layout(N, d):
    def u(a, b, i=0):
        return ((a - 1) * (N - 1) + (b - 1)) * d + i
    return u


def _coboundary_rows(enum: EnumeratedGroup, mats, F: FieldSpec, d: int) -> np.ndarray:
    """Images of the basis cochains phi = e_i at a (a != 1) under d."""
    N = enum.order
    T = enum.table
    u = _layout(N, d)
    rows = np.zeros(((N - 1) * d, (N - 1) ** 2 * d), dtype=np.int64)
    for a in range(1, N):
        for i in range(d):
            r = rows[(a - 1) * d + i]
            # phi(a).b at (a, b)
            for b in range(1, N):
                base = u(a, b)
                r[base:base + d] = F.add(r[base:base + d], mats[b][i])
            # + phi(b) at (x, a) for x != 1
            for x in range(1, N):
                r[u(x, a, i)] = int(F.add(int(r[u(x, a, i)]), 1))
            # - phi(xy) where xy = a
            for x in range(1, N):
                y = int(T[enum.inverse[x], a])
                if y != 0:
                    r[u(x, y, i)] = int(F.sub(int(r[u(x, y, i)]), 1))
    return rows


def _cocycle_equations(enum: EnumeratedGroup, mats, F: FieldSpec, d: int, gens, all_c: bool = False):
    """Rows of the linear system (one per (a, b, c, coordinate)), yielded in chunks."""
    N = enum.order
    T = enum.table
    u = _layout(N, d)
    ncols = (N - 1) ** 2 * d
    cs = range(1, N) if all_c else gens
    chunk = []
    for a in range(1, N):
        for c in cs:
            rows = np.zeros((N - 1, d, ncols), dtype=np.int64)
            Mc = mats[c]
            for b in range(1, N):
                R = rows[b - 1]
                ab = int(T[a, b])
                bc = int(T[b, c])
                j = np.arange(d)
                if ab != 0:
                    R[j, u(ab, c, 0) + j] = F.add(R[j, u(ab, c, 0) + j], 1)
                # alpha(a,b).c: coefficient Mc[i, j] on unknown u(a,b,i)
                base = u(a, b)
                R[:, base:base + d] = F.add(R[:, base:base + d], Mc.T)
                if bc != 0:
                    R[j, u(a, bc, 0) + j] = F.sub(R[j, u(a, bc, 0) + j], 1)
                R[j, u(b, c, 0) + j] = F.sub(R[j, u(b, c, 0) + j], 1)
            chunk.append(rows.reshape(-1, ncols))
        if sum(x.shape[0] for x in chunk) > 4096 or a == N - 1:
            yield np.concatenate(chunk)
            chunk = []


def _solve_kernel(F: FieldSpec, chunks, ncols: int) -> np.ndarray:
    if F.q == 2:
        packed = np.concatenate([gf2_pack(c % 2) for c in chunks])
        return gf2_nullspace_packed(packed, ncols)
    return nullspace_array(F, np.concatenate(list(chunks)))


def _complement_rows(F: FieldSpec, B: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Rows of Z that extend a basis of span(B) to one of span(Z)."""
    base = row_space(F, B) if B.shape[0] else B
    rank = base.shape[0]
    chosen = []
    cur = base
    for z in Z:
        trial = row_space(F, np.vstack([cur, z[None, :]])) if cur.shape[0] else row_space(F, z[None, :])
        if trial.shape[0] > rank:
            chosen.append(z)
            cur, rank = trial, trial.shape[0]
    return np.array(chosen, dtype=np.int64).reshape(len(chosen), Z.shape[1])


def h2_sylow(S: Group, M: GModule, all_triples: bool = False, limit: int = 256) -> CocycleSpace:
    """Z^2, B^2 and H^2 of a small group S with coefficients in M (a module for S.gens).

    Equations are imposed for c in a generating set; the exhaustive identity
    check on the basis is available as ``verify_cocycles``.  ``all_triples``
    imposes every (a, b, c) instead, which serves as an oracle."""
    t0 = time.perf_counter()
    if S.order() > limit:
        raise ResourceError(f"|S| = {S.order()} exceeds the cocycle limit {limit}")
    F = M.field
    if F.e != 1:
        raise CohomologyError("coefficients must be over a prime field")
    enum = EnumeratedGroup.build(S)
    mats = _module_matrices(enum, M)
    N, d = enum.order, M.dim
    ncols = (N - 1) ** 2 * d
    if N == 1 or d == 0:
        z = np.zeros((0, max(ncols, 0)), dtype=np.int64)
        return CocycleSpace(enum, M, mats, z, z, z, 0)
    gens = sorted(set(i for i in enum.gen_index if i != 0))
    Z = _solve_kernel(F, _cocycle_equations(enum, mats, F, d, gens, all_triples), ncols)
    B = row_space(F, _coboundary_rows(enum, mats, F, d))
    H = _complement_rows(F, B, Z)
    ms = int((time.perf_counter() - t0) * 1000)
    return CocycleSpace(enum, M, mats, Z, B, H, ms)


def h2_unnormalized(S: Group, M: GModule) -> int:
    """dim H^2 from all cochains S x S -> M (identity rows included); oracle path."""
    F = M.field
    enum = EnumeratedGroup.build(S)
    mats = _module_matrices(enum, M)
    N, d = enum.order, M.dim
    T = enum.table
    ncols = N * N * d

    def u(a, b):
        return (a * N + b) * d
    chunks = []
    for a in range(N):
        rows = np.zeros((N * N, d, ncols), dtype=np.int64)
        j = np.arange(d)
        for b in range(N):
            for c in range(N):
                R = rows[b * N + c]
                ab, bc = int(T[a, b]), int(T[b, c])
                R[j, u(ab, c) + j] = F.add(R[j, u(ab, c) + j], 1)
                R[:, u(a, b):u(a, b) + d] = F.add(R[:, u(a, b):u(a, b) + d], mats[c].T)
                R[j, u(a, bc) + j] = F.sub(R[j, u(a, bc) + j], 1)
                R[j, u(b, c) + j] = F.sub(R[j, u(b, c) + j], 1)
        chunks.append(rows.reshape(-1, ncols))
    Z = _solve_kernel(F, chunks, ncols)
    cob = np.zeros((N * d, ncols), dtype=np.int64)
    for x in range(N):
        for i in range(d):
            r = cob[x * d + i]
            for b in range(N):
                r[u(x, b):u(x, b) + d] = F.add(r[u(x, b):u(x, b) + d], mats[b][i])
                r[u(b, x) + i] = int(F.add(int(r[u(b, x) + i]), 1))
                y = int(T[enum.inverse[b], x])
                r[u(b, y) + i] = int(F.sub(int(r[u(b, y) + i]), 1))
    B = row_space(F, cob)
    return Z.shape[0] - B.shape[0]


# -- stable elements ----------------------------------------------------------------------

def double_coset_reps(G: Group, S: Group, limit: int = 100000):
    """Representatives of S\\G/S (identity first), via S-orbits on right cosets S g."""
    kind = G.kind
    s_elems = S.elements()

    def key(g):
        return min(kind.key(kind.mul(s, g)) for s in s_elems)
    ident = G.identity()
    cosets = {key(ident): ident}
    q = deque([ident])
    while q:
        g = q.popleft()
        for x in G.gens:
            y = kind.mul(g, x)
            k = key(y)
            if k not in cosets:
                cosets[k] = y
                q.append(y)
                if len(cosets) > limit:
                    raise ResourceError("too many cosets of the Sylow subgroup")
    if len(cosets) * S.order() != G.order():
        raise CohomologyError("coset enumeration disagrees with |G|/|S|")
    seen = set()
    reps = []
    for k, g in cosets.items():
        if k in seen:
            continue
        reps.append(g)
        q = deque([g])
        seen.add(k)
        while q:
            y = q.popleft()
            for s in S.gens:
                z = kind.mul(y, s)
                kz = key(z)
                if kz not in seen:
                    seen.add(kz)
                    q.append(z)
    return reps


def stable_subspace(G: Group, S: Group, M: GModule, cs: CocycleSpace, seed: int = 0):
    """dim H^2(G, M) as the stable part of H^2(S, M|S).  M is a module for G.gens.

    Returns (dimension, certificate dict)."""
    t0 = time.perf_counter()
    F = M.field
    enum = cs.group
    N, d = enum.order, M.dim
    kind = G.kind
    reps = double_coset_reps(G, S)
    imap = M.image_map()
    if cs.dim_z2 == 0:
        return 0, {"double_cosets": len(reps), "dim_h2_sylow": 0}
    Zfull = [cs.full(z) for z in cs.Z]
    blocks = []
    for g in reps:
        if enum.find(g) is not None:
            continue
        ginv = kind.inv(g)
        # I = S meet g^-1 S g, with x -> g x g^-1 in S
        I, conj = [], []
        for x in range(N):
            y = enum.find(kind.mul(kind.mul(g, enum.elements[x]), ginv))
            if y is not None:
                I.append(x)
                conj.append(y)
        if len(I) == 1:
            continue
        Mg = imap(g).a
        pos = {x: k for k, x in enumerate(I)}
        n = len(I)
        # columns: (x, y) in (I \ 1)^2, coordinates d
        sel_x = np.array(I[1:])
        sel_c = np.array(conj[1:])
        rows = []
        for A in Zfull:
            res = A[np.ix_(sel_x, sel_x)]
            cj = _act(F, A[np.ix_(sel_c, sel_c)], Mg)
            rows.append(F.sub(res, cj).reshape(-1))
        V = np.array(rows, dtype=np.int64)
        # coboundaries on I
        T = enum.table
        cob = np.zeros(((n - 1) * d, (n - 1) ** 2 * d), dtype=np.int64)
        for ka, a in enumerate(I[1:]):
            for i in range(d):
                r = cob[ka * d + i].reshape(n - 1, n - 1, d)
                for kb, b in enumerate(I[1:]):
                    r[ka, kb] = F.add(r[ka, kb], cs.mats[b][i])
                    r[kb, ka, i] = int(F.add(int(r[kb, ka, i]), 1))
                    y = int(T[enum.inverse[b], a])
                    if y != 0:
                        r[kb, pos[y] - 1, i] = int(F.sub(int(r[kb, pos[y] - 1, i]), 1))
        blocks.append((V, row_space(F, cob)))
    k = cs.dim_z2
    if not blocks:
        return cs.dim_h2, {"double_cosets": len(reps), "dim_h2_sylow": cs.dim_h2}
    extra = sum(b.shape[0] for _, b in blocks)
    width = sum(v.shape[1] for v, _ in blocks)
    big = np.zeros((k + extra, width), dtype=np.int64)
    col = 0
    row = k
    for V, Bi in blocks:
        w = V.shape[1]
        big[:k, col:col + w] = V
        big[row:row + Bi.shape[0], col:col + w] = Bi
        col += w
        row += Bi.shape[0]
    left = nullspace_array(F, np.ascontiguousarray(big.T))
    stable = row_space(F, left[:, :k]) if left.shape[0] else np.zeros((0, k), dtype=np.int64)
    dim = stable.shape[0] - cs.dim_b2
    cert = {"double_cosets": len(reps), "dim_z2_sylow": k, "dim_b2_sylow": cs.dim_b2,
            "dim_h2_sylow": cs.dim_h2, "stable_z2": int(stable.shape[0]),
            "elapsed_ms": int((time.perf_counter() - t0) * 1000)}
    return dim, cert


def h2_group(G: Group, M: GModule, p: int, seed: int = 0):
    """dim H^2(G, M) through a Sylow p-subgroup; returns (dim, certificate)."""
    t0 = time.perf_counter()
    S = G.sylow_subgroup(p, seed)
    gens = minimal_generators(S)
    S = G.subgroup(gens, name="Sylow")
    MS = M.restrict(S)
    cs = h2_sylow(S, MS)
    dim, cert = stable_subspace(G, S, M, cs, seed)
    cert.update({"sylow_order": S.order(), "seed": seed, "dim_h2": dim,
                 "elapsed_ms": int((time.perf_counter() - t0) * 1000)})
    return dim, cert


# -- extensions from tails -----------------------------------------------------------------

@dataclass
class ExtensionSpec:
    """Quotient presentation, module matrices per quotient generator, tail per relator.

    The extension is <x_i, m_j | r = t_r, x^-1 m x = m.M_x, m_j^p, [m_j, m_k]>."""
    presentation: Presentation
    mats: list
    tails: list
    field: FieldSpec

    def extension_presentation(self) -> Presentation:
        P = self.presentation
        F = self.field
        d = self.mats[0].shape[0]
        ng = P.ngens
        names = list(P.gens) + [f"m{j}" for j in range(d)]

        def vec_word(v):
            w = []
            for j, c in enumerate(np.asarray(v) % F.p):
                w += [(ng + j, 1)] * int(c)
            return w
        rels = []
        for r, t in zip(P.relators, self.tails):
            rels.append(reduce_word(list(r) + invert_word(vec_word(t))))
        for j in range(d):
            rels.append([(ng + j, 1)] * F.p)
            for k in range(j + 1, d):
                rels.append([(ng + j, -1), (ng + k, -1), (ng + j, 1), (ng + k, 1)])
            for x in range(ng):
                img = self.mats[x][j]
                rels.append(reduce_word([(x, -1), (ng + j, 1), (x, 1)] + invert_word(vec_word(img))))
        rels = [r for r in rels if r]
        return Presentation(names, rels, name=(P.name or "Q") + "_ext")

    def instantiate(self, cap: int = 10 ** 6):
        """Coset enumeration of the extension; returns (order, permutation group)."""
        E = self.extension_presentation()
        T = todd_coxeter(E, [], cap)
        return T.index, T.permutation_group()


def regular_presentation(enum: EnumeratedGroup, names=None) -> Presentation:
    """Presentation on the generators from the Cayley table: w_a x = w_{ax}."""
    ng = len(enum.gen_index)
    names = names or [f"s{i}" for i in range(ng)]
    rels = []
    seen = set()
    for a in range(enum.order):
        for j, g in enumerate(enum.gen_index):
            b = int(enum.table[a, g])
            r = reduce_word(list(enum.words[a]) + [(j, 1)] + invert_word(enum.words[b]))
            if r and tuple(r) not in seen:
                seen.add(tuple(r))
                rels.append(r)
    return Presentation(names, rels, name="regular")


def cocycle_extension_spec(cs: CocycleSpace, row: np.ndarray) -> ExtensionSpec:
    """Tails of the cocycle on the regular presentation of S."""
    enum = cs.group
    F = cs.field
    P = regular_presentation(enum)
    alpha = cs.full(row)
    T = enum.table
    d = cs.module.dim

    def mul(x, y):
        (m, a), (n, b) = x, y
        return (F.add(F.add(array_matmul(F, m[None, :], cs.mats[b])[0], n), alpha[a, b]), int(T[a, b]))

    def inv(x):
        m, a = x
        ai = int(enum.inverse[a])
        # (m, a)(n, ai) = (m.ai + n + alpha(a, ai), 1) = 0
        n = F.neg(F.add(array_matmul(F, m[None, :], cs.mats[ai])[0], alpha[a, ai]))
        return (n, ai)
    ident = (np.zeros(d, dtype=np.int64), 0)
    lifts = [(np.zeros(d, dtype=np.int64), g) for g in enum.gen_index]
    tails = []
    for r in P.relators:
        v, a = evaluate_word(r, lifts, mul, inv, ident)
        if a != 0:
            raise CohomologyError("relator does not evaluate to the module")
        tails.append(v)
    gen_mats = [cs.mats[g] for g in enum.gen_index]
    return ExtensionSpec(P, gen_mats, tails, F)


# -- split test ------------------------------------------------------------------------------

def _kernel_coordinates(E: Group, K: Group, p: int):
    """Basis of the elementary abelian K and a dict key -> coordinate vector."""
    kind = E.kind
    basis = []
    table = {kind.key(kind.identity()): ()}
    for x in K.gens:
        if kind.key(x) in table:
            continue
        basis.append(x)
        table = {}
        for coeffs in itertools.product(range(p), repeat=len(basis)):
            y = kind.identity()
            for bx, c in zip(basis, coeffs):
                for _ in range(c):
                    y = kind.mul(y, bx)
            table[kind.key(y)] = coeffs
    if len(table) != K.order() or len(table) != p ** len(basis):
        raise CohomologyError("kernel is not elementary abelian of the expected order")
    return basis, {k: np.array(v, dtype=np.int64) for k, v in table.items()}


def kernel_module(E: Group, K: Group, lifts, p: int):
    """K as a GF(p)-module for the lifts acting by conjugation (row convention)."""
    kind = E.kind
    basis, coords = _kernel_coordinates(E, K, p)
    d = len(basis)

    def coord(x):
        v = coords.get(kind.key(x))
        if v is None:
            raise CohomologyError("element not in the kernel")
        return v
    mats = []
    for x in lifts:
        xi = kind.inv(x)
        mats.append(np.array([coord(kind.mul(kind.mul(xi, bx), x)) for bx in basis],
                             dtype=np.int64).reshape(d, d))
    return basis, coord, GModule(GF(p), tuple(mats), None, "kernel", d)


@dataclass
class SplitResult:
    splits: bool
    complement: list | None
    certificate: dict


def split_check(E: Group, K: Group, pres: Presentation, lifts, p: int | None = None) -> SplitResult:
    """Search for a complement to the elementary abelian normal K.

    ``lifts`` are elements of E mapping to the generators of ``pres`` (a
    verified presentation of E/K).  Corrections delta_x in K solve the
    linear system given by Fox coefficients; a solution is certified by
    evaluating the relators and computing the complement's order."""
    t0 = time.perf_counter()
    kind = E.kind
    if not K.is_abelian():
        raise CohomologyError("kernel must be abelian")
    q = K.order()
    p = p or next(r for r in range(2, q + 1) if q % r == 0)
    F = GF(p)
    basis, coord, kmod = kernel_module(E, K, lifts, p)
    mats = list(kmod.mats)
    d = len(basis)

    def element(v):
        y = kind.identity()
        for b, c in zip(basis, v):
            for _ in range(int(c) % p):
                y = kind.mul(y, b)
        return y
    ng = len(lifts)
    A_rows = []
    rhs = []
    for r in pres.relators:
        val = evaluate_word(r, lifts, kind.mul, kind.inv, kind.identity())
        t = coord(val)
        C = fox_coefficients(r, mats, F)
        # sum_x delta_x C_x = -t   ->   unknown layout (x, i)
        block = np.concatenate([C[x] for x in range(ng)], axis=0)   # (ng d) x d
        A_rows.append(block.T)
        rhs.append(F.neg(t))
    A = np.concatenate(A_rows, axis=0) if A_rows else np.zeros((0, ng * d), dtype=np.int64)
    b = np.concatenate(rhs) if rhs else np.zeros(0, dtype=np.int64)
    from .gf import solve_linear
    sol = solve_linear(Matrix._wrap(F, A), b) if A.shape[0] else np.zeros(ng * d, dtype=np.int64)
    cert = {"kernel_order": q, "p": p, "unknowns": ng * d, "equations": int(A.shape[0])}
    if sol is None:
        cert["elapsed_ms"] = int((time.perf_counter() - t0) * 1000)
        cert["reason"] = "inhomogeneous Fox system inconsistent"
        return SplitResult(False, None, cert)
    comp = [kind.mul(x, element(sol[i * d:(i + 1) * d])) for i, x in enumerate(lifts)]
    for r in pres.relators:
        if not kind.key(evaluate_word(r, comp, kind.mul, kind.inv, kind.identity())) == kind.key(kind.identity()):
            raise CohomologyError("corrected lifts violate a relator (Fox convention bug)")
    C = E.subgroup(comp, name="complement")
    co = C.order()
    # the lifts generate E modulo K, so CK = E and |C meet K| = |C||K|/|E|
    inter = co * q == E.order()
    cert.update({"complement_order": co, "quotient_order": E.order() // q,
                 "trivial_intersection": bool(inter),
                 "elapsed_ms": int((time.perf_counter() - t0) * 1000)})
    if co != E.order() // q or not inter:
        raise CohomologyError("complement certificate failed")
    return SplitResult(True, comp, cert)


def quotient_lifts(E: Group, K: Group):
    """Generators of E that, with K, still generate E."""
    return minimal_generators(E, K)


def minimal_extension_check(E: Group, K: Group, lifts=None, pres: Presentation | None = None,
                            exhaustive_limit: int = 10 ** 4):
    """Is E a minimal extension of E/K (no proper subgroup covers E/K)?

    Exhaustive over corrected lift tuples (x_i k_i) when |K|^t is small;
    otherwise, for abelian K with a presentation of E/K, a complement
    disproves minimality.  Returns (bool, certificate)."""
    kind = E.kind
    lifts = list(lifts) if lifts is not None else quotient_lifts(E, K)
    t = len(lifts)
    q = K.order()
    target = E.order()
    if pres is not None and K.is_abelian():
        res = split_check(E, K, pres, lifts)
        if res.splits:
            return False, {"method": "complement", **res.certificate}
    if q ** t <= exhaustive_limit:
        kel = K.elements()
        for choice in itertools.product(kel, repeat=t):
            gens = [kind.mul(x, k) for x, k in zip(lifts, choice)]
            o = E.subgroup(gens).order()
            if o < target:
                return False, {"method": "exhaustive", "witness_order": o, "checked": None}
        return True, {"method": "exhaustive", "checked": q ** t}
    if pres is not None and K.is_abelian():
        q_ = K.order()
        p = next(r for r in range(2, q_ + 1) if q_ % r == 0)
        _, _, kmod = kernel_module(E, K, lifts, p)
        if meataxe(kmod).irreducible:
            return True, {"method": "complement", "reason": "no complement and K irreducible"}
    raise CohomologyError("unsupported shape: need a presentation of E/K and irreducible K")
