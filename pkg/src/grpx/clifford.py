"""Clifford decomposition relative to a normal subgroup and the Feit-Tits reduction."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf import GF, Matrix, array_matmul, mat_inv, normalize_projective, row_space
from .groupcore import Group, MatKind, ResourceError
from .modrep import GModule, chop, hom_space, meataxe


class CliffordError(RuntimeError):
    pass


@dataclass
class Component:
    basis: np.ndarray          # rows spanning the component
    multiplicity: int          # m1
    irr_dim: int               # m2
    irreducible: GModule       # the M-type


@dataclass
class CliffordDecomposition:
    module: GModule
    normal: Group
    components: list
    action: list               # per H-generator, list: component index -> image index

    @property
    def k(self) -> int:
        return len(self.components)

    def is_transitive(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for perm in self.action:
                j = perm[i]
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == self.k


def _span_contains(F, basis, v) -> bool:
    r = basis.shape[0]
    return row_space(F, np.vstack([basis, v[None, :]])).shape[0] == r


def homogeneous_components(V: GModule, M: Group, seed: int = 0) -> CliffordDecomposition:
    """Isotypic components of V restricted to the normal subgroup M of V.group."""
    H = V.group
    if H is None:
        raise CliffordError("module needs its group attached")
    if not M.is_normal_in(H):
        raise CliffordError("M is not normal in H")
    F = V.field
    VM = V.restrict(M)
    types = [f for f, _ in chop(VM, seed)]
    comps = []
    for W in types:
        homs = hom_space(W, VM, seed)
        if not homs:
            continue
        rows = row_space(F, np.vstack(homs))
        dimc = rows.shape[0]
        comps.append(Component(rows, dimc // W.dim, W.dim, W))
    total = sum(c.basis.shape[0] for c in comps)
    if total != V.dim:
        raise CliffordError(f"restriction is not semisimple (components span {total} of {V.dim})")
    action = []
    for A in V.mats:
        perm = []
        for c in comps:
            img = array_matmul(F, c.basis, A)
            hit = [j for j, d in enumerate(comps)
                   if d.basis.shape[0] == img.shape[0] and all(_span_contains(F, d.basis, v) for v in img)]
            if len(hit) != 1:
                raise CliffordError("a generator does not permute the components")
            perm.append(hit[0])
        action.append(perm)
    return CliffordDecomposition(V, M, comps, action)


def imprimitivity_witness(dec: CliffordDecomposition):
    """Component subspaces as a block system when k > 1, else None."""
    if dec.k <= 1:
        return None
    F = dec.module.field
    blocks = [c.basis for c in dec.components]
    for A in dec.module.mats:
        for b in blocks:
            img = array_matmul(F, b, A)
            if not any(all(_span_contains(F, c, v) for v in img) for c in blocks):
                raise CliffordError("block system is not preserved")
    return blocks


@dataclass
class TensorFactorization:
    m1: int
    m2: int
    change_of_basis: np.ndarray     # rows (i, r) -> vectors of V
    factors: list                   # per H-generator (U_h, W_h), projectively normalized
    degenerate: bool = False


def _kron(F, a, b):
    out = F.mul(a[:, None, :, None], b[None, :, None, :])
    return out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])


def _split_kron(F, C, m1, m2):
    """(U, W) with C = U (x) W, or None."""
    blocks = C.reshape(m1, m2, m1, m2).transpose(0, 2, 1, 3)
    nz = np.argwhere(blocks.reshape(m1, m1, -1).any(axis=2))
    if not len(nz):
        return None
    i0, j0 = nz[0]
    W, _ = normalize_projective(F, blocks[i0, j0].copy())
    pos = np.flatnonzero(W.reshape(-1))[0]
    U = np.zeros((m1, m1), dtype=np.int64)
    for i in range(m1):
        for j in range(m1):
            U[i, j] = int(blocks[i, j].reshape(-1)[pos])
    if not np.array_equal(_kron(F, U, W), C):
        return None
    return U, W


def tensor_factorize(V: GModule, M: Group, dec: CliffordDecomposition | None = None, seed: int = 0):
    """V = U (x) W with W an irreducible M-module, when V|M is homogeneous."""
    F = V.field
    dec = dec or homogeneous_components(V, M, seed)
    if dec.k != 1:
        raise CliffordError("restriction to M is not homogeneous")
    W = dec.components[0].irreducible
    VM = V.restrict(M)
    homs = hom_space(W, VM, seed)
    m2 = W.dim
    m1 = len(homs)
    if m1 * m2 != V.dim:
        raise CliffordError("M-type is not absolutely irreducible; tensor split needs a field extension")
    P = np.vstack(homs)
    if m1 == 1 or m2 == 1:
        return TensorFactorization(m1, m2, P, [], degenerate=True)
    Pi = mat_inv(Matrix._wrap(F, P)).a
    factors = []
    for A in V.mats:
        C = array_matmul(F, array_matmul(F, P, A), Pi)
        uw = _split_kron(F, C, m1, m2)
        if uw is None:
            raise CliffordError("generator action is not a Kronecker product in the Clifford basis")
        U, Wh = uw
        factors.append((normalize_projective(F, U)[0], Wh))
    return TensorFactorization(m1, m2, P, factors)


# -- Feit-Tits reduction -------------------------------------------------------------------

def lower_central_series(g: Group, limit: int = 64):
    series = [g]
    while len(series) < limit:
        A = series[-1]
        comms = [g.comm(a, b) for a in A.gens for b in g.gens]
        nxt = g.normal_closure(comms, within=g) if comms else g.subgroup([])
        if nxt.order() == A.order():
            break
        series.append(nxt)
        if nxt.order() == 1:
            break
    return series


def is_nilpotent(g: Group) -> bool:
    return lower_central_series(g)[-1].order() == 1


def _ordered(clauses):
    return {k: clauses[k] for k in ("i", "ii", "iii", "iv") if k in clauses}


@dataclass
class FeitTitsResult:
    r: int
    n: int
    kind: str
    images: list                 # per H-generator, matrix over GF(r)
    form: np.ndarray
    image_order: int
    quotient_order: int
    faithful: bool
    irreducible: bool
    preserves_form: bool
    clauses: dict
    e0_order: int
    seed: int
    elapsed_ms: int = 0

    def to_dict(self) -> dict:
        return {"r": self.r, "n": self.n, "kind": self.kind, "image_order": self.image_order,
                "quotient_order": self.quotient_order, "faithful": self.faithful,
                "irreducible": self.irreducible, "preserves_form": self.preserves_form,
                "m_equals_r_pow_n": True, "e0_order": self.e0_order, "clauses": _ordered(self.clauses),
                "seed": self.seed}


@dataclass
class FeitTitsFailure:
    clause: str
    reason: str
    clauses: dict = dc_field(default_factory=dict)

    def to_dict(self):
        return {"failed_clause": self.clause, "reason": self.reason, "clauses": _ordered(self.clauses)}


def _linear_lift(G: Group, extra=()):
    k = G.kind
    if not isinstance(k, MatKind):
        raise CliffordError("Feit-Tits reduction needs a (projective) matrix group")
    return Group.matrix(k.field, k.degree, [Matrix._wrap(k.field, x.a) for x in G.gens] + list(extra),
                        name=G.name + "^")


def feit_tits_reduce(H: Group, N: Group, seed: int = 0, element_limit: int = 4096):
    """Executable version of the reduction: returns FeitTitsResult or FeitTitsFailure."""
    from .symtype import classify_R
    t0 = time.perf_counter()
    kind = H.kind
    F = kind.field
    m = kind.degree
    clauses = {}
    if not N.is_normal_in(H):
        return FeitTitsFailure("setup", "N is not normal in H", clauses)
    scal = []
    if F.p != 2:
        if (F.q - 1) % 4:
            clauses["ii"] = "fail"
            return FeitTitsFailure("ii", f"GF({F.q}) has no scalar of order 4", clauses)
        z4 = int(F.root_of_unity(4))
        scal = [Matrix._wrap(F, F.mul(np.eye(m, dtype=np.int64), z4))]
    Hh = _linear_lift(H, scal)
    Nh = _linear_lift(N, scal)
    clauses["ii"] = "pass" if F.p != 2 else "n/a (characteristic 2)"
    if not is_nilpotent(Nh):
        clauses["i"] = "fail"
        return FeitTitsFailure("i", "N is not nilpotent", clauses)
    clauses["i"] = "pass"
    Nmod = GModule(F, tuple(x.a for x in Nh.gens), Nh)
    if not meataxe(Nmod, seed).irreducible:
        clauses["iii"] = "fail"
        return FeitTitsFailure("iii", "N is reducible on the module", clauses)
    clauses["iii"] = "pass"
    if Nh.order() > element_limit:
        raise ResourceError("N too large for the element-wise normal subgroup search")
    def central(x):
        return all(Hh.eq(Hh.mul(x, g), Hh.mul(g, x)) for g in Hh.gens)

    def orbit_reps(elements):
        # one element per H-conjugacy orbit among the noncentral ones
        pool = {Hh.kind.key(x): x for x in elements}
        seen, reps = set(), []
        for kx, x in pool.items():
            if kx in seen or central(x):
                continue
            reps.append(x)
            seen.add(kx)
            stack = [x]
            while stack:
                y = stack.pop()
                for g in Hh.gens:
                    z = Hh.conj(y, g)
                    kz = Hh.kind.key(z)
                    if kz not in seen:
                        seen.add(kz)
                        stack.append(z)
        return reps

    candidates = {}
    for x in orbit_reps(Nh.elements()):
        C = Hh.normal_closure([x])
        candidates.setdefault(C.order(), C)
    # clause (iv) on every normal closure of a single element of N
    for o, C in sorted(candidates.items()):
        mod = GModule(F, tuple(y.a for y in C.gens), C)
        if not meataxe(mod, seed).irreducible:
            clauses["iv"] = "fail"
            return FeitTitsFailure("iv", f"normal subgroup of order {o} in N is reducible and noncentral", clauses)
    clauses["iv"] = "pass on normal closures of elements of N (not all normal subgroups)"
    if not candidates:
        return FeitTitsFailure("iv", "N is central", clauses)
    E0 = candidates[min(candidates)]
    for x in orbit_reps(E0.elements()):
        if Hh.normal_closure([x]).order() != E0.order():
            raise CliffordError("E0 is not minimal")
    o = E0.order()
    r = next(p for p in range(2, o + 1) if o % p == 0)
    if o != r ** round(np.log(o) / np.log(r)):
        return FeitTitsFailure("i", "minimal normal subgroup is not of prime power order", clauses)
    E = Hh.subgroup(E0.gens + (scal if r == 2 else []), name="E")
    cls = classify_R(E, r)
    if cls is None:
        return FeitTitsFailure("classify", "E is not of symplectic type", clauses)
    ekind, n = cls
    if m != r ** n:
        raise CliffordError(f"dimension law fails: m = {m}, r^n = {r ** n}")
    # coordinates on E / Z(E)
    ZE = E.center()
    zs = ZE.elements()
    zr = next(z for z in zs if E.element_order(z) == r)
    logs = {}
    acc = E.identity()
    for i in range(r):
        logs[E.kind.key(acc)] = i
        acc = E.mul(acc, zr)
    basis = []
    sub = ZE
    for x in E.gens + E.elements():
        if len(basis) == 2 * n:
            break
        if not sub.contains(x):
            basis.append(x)
            sub = E.subgroup(ZE.gens + basis)
    coords = {}
    for cs in itertools.product(range(r), repeat=2 * n):
        y = E.identity()
        for b, c in zip(basis, cs):
            for _ in range(c):
                y = E.mul(y, b)
        for z in zs:
            coords[E.kind.key(E.mul(y, z))] = cs
    Fr = GF(r)
    f = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i in range(2 * n):
        for j in range(2 * n):
            f[i, j] = logs[E.kind.key(E.comm(basis[i], basis[j]))]
    images = []
    for h in H.gens:
        hm = Matrix._wrap(F, h.a)
        rows = [coords[E.kind.key(Hh.conj(b, hm))] for b in basis]
        images.append(np.array(rows, dtype=np.int64))
    preserves = all(np.array_equal(array_matmul(Fr, array_matmul(Fr, x, f), x.T), f) for x in images)
    img = Group.matrix(Fr, 2 * n, [Matrix._wrap(Fr, x) for x in images], name="mu")
    quotient = H.order() // N.order()
    io = img.order()
    irreducible = meataxe(GModule(Fr, tuple(images)), seed).irreducible
    return FeitTitsResult(r, n, ekind, images, f, io, quotient, io == quotient, irreducible,
                          preserves, clauses, E0.order(), seed,
                          int((time.perf_counter() - t0) * 1000))
