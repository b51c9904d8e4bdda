"""Symplectic-type r-groups, their Weil representations and normalizers.

Elements of R are pairs (v, a) with v in GF(r)^d and a in GF(r), multiplied by
(u, a)(v, b) = (u + v, a + b + beta(u, v)).  For r = 2, beta is upper
triangular with diagonal Q; for odd r, beta = f/2.  In the defect-one case
the radical vector z0 has Q(z0) = 1 and Z(R) is cyclic of order 4.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf import GF, FieldSpec, Matrix, array_matmul, mat_inv, nullspace_array, normalize_projective
from .groupcore import Group, GroupError, Homomorphism, Perm, PermKind, ResourceError, factorize
from .modrep import GModule, hom_space, meataxe, symplectic_basis, quadratic_sign

KINDS = ("extraspecial", "plus", "minus", "central4")


class FormError(ValueError):
    pass


def sp_order(n: int, q: int) -> int:
    o = q ** (n * n)
    for i in range(1, n + 1):
        o *= q ** (2 * i) - 1
    return o


def orthogonal_order(n: int, eps: int, q: int = 2) -> int:
    """|O^eps_{2n}(q)| for even q."""
    o = 2 * q ** (n * (n - 1)) * (q ** n - eps)
    for i in range(1, n):
        o *= q ** (2 * i) - 1
    return o


@dataclass
class FormData:
    r: int
    f: np.ndarray
    Q: np.ndarray | None = None

    def __post_init__(self):
        self.f = np.asarray(self.f, dtype=np.int64) % self.r
        if self.Q is not None:
            self.Q = np.triu(np.asarray(self.Q, dtype=np.int64) % 2)
        self.validate()

    @property
    def d(self) -> int:
        return self.f.shape[0]

    @property
    def field(self) -> FieldSpec:
        return GF(self.r)

    def radical(self) -> np.ndarray:
        return nullspace_array(self.field, self.f)

    @property
    def n(self) -> int:
        return (self.d - self.radical().shape[0]) // 2

    def Qvalue(self, v) -> int:
        v = np.asarray(v, dtype=np.int64)
        return int(v @ self.Q @ v) % 2

    def fvalue(self, u, v) -> int:
        return int(np.asarray(u) @ self.f @ np.asarray(v)) % self.r

    @property
    def case(self) -> str:
        rad = self.radical().shape[0]
        if self.r != 2:
            return "1"
        return "2a" if rad == 0 else "2b"

    def validate(self):
        r, f = self.r, self.f
        F = GF(r)
        if f.ndim != 2 or f.shape[0] != f.shape[1]:
            raise FormError("Gram matrix must be square")
        if (np.diag(f) % r).any() or ((f + f.T) % r).any():
            raise FormError("f is not alternating")
        rad = nullspace_array(F, f).shape[0]
        if r != 2:
            if rad:
                raise FormError("odd r needs a nondegenerate form")
            return
        if self.Q is None:
            raise FormError("r = 2 needs a quadratic form")
        if not np.array_equal((self.Q + self.Q.T) % 2 * (1 - np.eye(self.d, dtype=np.int64)), f):
            raise FormError("Q does not polarize to f")
        if rad > 1:
            raise FormError("defect of f must be 0 or 1")
        if rad == 1:
            z = nullspace_array(F, f)[0]
            if self.Qvalue(z) != 1:
                raise FormError("Q vanishes on the radical (degenerate)")

    def kind(self) -> str:
        if self.r != 2:
            return "extraspecial"
        if self.case == "2b":
            return "central4"
        return "plus" if quadratic_sign(self.Q) == 1 else "minus"

    @classmethod
    def standard(cls, r: int, n: int, kind: str) -> "FormData":
        if kind not in KINDS:
            raise FormError(f"unknown kind {kind!r}")
        if (r == 2) == (kind == "extraspecial"):
            raise FormError(f"kind {kind} does not match r = {r}")
        d = 2 * n + (1 if kind == "central4" else 0)
        f = np.zeros((d, d), dtype=np.int64)
        for i in range(n):
            f[i, n + i] = 1
            f[n + i, i] = r - 1
        if r != 2:
            return cls(r, f)
        Q = np.zeros((d, d), dtype=np.int64)
        for i in range(n):
            Q[i, n + i] = 1
        if kind == "minus":
            if n < 1:
                raise FormError("minus type needs n >= 1")
            Q[n - 1, n - 1] = 1
            Q[2 * n - 1, 2 * n - 1] = 1
        if kind == "central4":
            Q[d - 1, d - 1] = 1
        return cls(2, f, Q)


class SymplecticTypeGroup:
    def __init__(self, fd: FormData, kind: str):
        self.fd = fd
        self.kind = kind
        self.r = fd.r
        self.d = fd.d
        self.n = fd.n
        if fd.kind() != kind:
            raise FormError(f"form data has kind {fd.kind()}, not {kind}")
        if self.r == 2:
            self.beta = fd.Q.copy()
        else:
            self.beta = (fd.f * ((self.r + 1) // 2)) % self.r
        self._group = None

    @property
    def order(self) -> int:
        return self.r ** (self.d + 1)

    @property
    def center_order(self) -> int:
        return 4 if self.kind == "central4" else self.r

    def b(self, u, v) -> int:
        return int(np.asarray(u) @ self.beta @ np.asarray(v)) % self.r

    def mul(self, x, y):
        (u, a), (v, b) = x, y
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        return ((u + v) % self.r, (a + b + self.b(u, v)) % self.r)

    def inv(self, x):
        u, a = x
        u = np.asarray(u, dtype=np.int64)
        return ((-u) % self.r, (-a + self.b(u, u)) % self.r)

    def identity(self):
        return (np.zeros(self.d, dtype=np.int64), 0)

    def power(self, x, k: int):
        out = self.identity()
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def comm(self, x, y):
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    def encode(self, x) -> int:
        u, a = x
        code = 0
        for c in reversed(list(np.asarray(u) % self.r)):
            code = code * self.r + int(c)
        return code + (self.r ** self.d) * int(a)

    def decode(self, code: int):
        a, rest = divmod(code, self.r ** self.d)
        u = np.array([(rest // self.r ** i) % self.r for i in range(self.d)], dtype=np.int64)
        return (u, a)

    def all_arrays(self):
        """All elements as (U, A) arrays, in code order."""
        N = self.order
        codes = np.arange(N)
        V = np.stack([(codes // self.r ** i) % self.r for i in range(self.d)], axis=1) if self.d else np.zeros((N, 0), dtype=np.int64)
        A = codes // self.r ** self.d
        return V.astype(np.int64), A.astype(np.int64)

    def _codes(self, V, A):
        w = self.r ** np.arange(self.d, dtype=np.int64)
        return (V % self.r) @ w + (self.r ** self.d) * (A % self.r)

    def generators(self):
        """Lifts (e_i, 0) of the coordinate basis."""
        gens = []
        for i in range(self.d):
            e = np.zeros(self.d, dtype=np.int64)
            e[i] = 1
            gens.append((e, 0))
        if self.d == 0:
            gens.append((np.zeros(0, dtype=np.int64), 1))
        return gens

    def as_group(self) -> Group:
        """Right regular permutation representation on the generators."""
        if self._group is None:
            if self.order > 3 ** 8:
                raise ResourceError("symplectic-type group too large for the regular representation")
            V, A = self.all_arrays()
            perms = []
            for (g, c) in self.generators():
                nv = (V + g) % self.r
                na = (A + c + (V @ self.beta @ g)) % self.r
                perms.append(Perm(self._codes(nv, na)))
            self._group = Group(PermKind(self.order), perms, f"R_{self.kind}_{self.r}_{self.n}")
        return self._group

    def element_perm(self, x) -> Perm:
        V, A = self.all_arrays()
        g, c = x
        g = np.asarray(g, dtype=np.int64)
        return Perm(self._codes((V + g) % self.r, (A + c + (V @ self.beta @ g)) % self.r))

    def check_laws(self, exhaustive_limit: int = 2 ** 10, samples: int = 10000, seed: int = 0) -> dict:
        """[x,y] = (0, f(u,v)); x^r = 1 (odd r) or x^2 = (0, Q(u)); centre cyclic."""
        r = self.r
        V, A = self.all_arrays()
        N = self.order
        if N <= exhaustive_limit:
            I, J = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
            I, J = I.reshape(-1), J.reshape(-1)
            mode = "exhaustive"
        else:
            rng = np.random.default_rng(seed)
            I = rng.integers(0, N, samples)
            J = rng.integers(0, N, samples)
            mode = f"random {samples}"
        U, a = V[I], A[I]
        W, b = V[J], A[J]
        bt = self.beta

        def bil(x, y):
            return np.einsum("ni,ij,nj->n", x, bt, y) % r

        def mul(x, y):
            return ((x[0] + y[0]) % r, (x[1] + y[1] + bil(x[0], y[0])) % r)

        def inv(x):
            return ((-x[0]) % r, (-x[1] + bil(x[0], x[0])) % r)
        X, Y = (U, a), (W, b)
        c = mul(mul(inv(X), inv(Y)), mul(X, Y))
        fuv = np.einsum("ni,ij,nj->n", U, self.fd.f, W) % r
        comm_ok = bool((c[0] == 0).all() and np.array_equal(c[1], fuv))
        p = X
        for _ in range(r - 1):
            p = mul(p, X)
        if r == 2:
            power_ok = bool((p[0] == 0).all() and np.array_equal(p[1], np.einsum("ni,ij,nj->n", U, self.fd.Q, U) % 2))
        else:
            power_ok = bool((p[0] == 0).all() and (p[1] == 0).all())
        assoc = mul(mul(X, Y), X)
        assoc2 = mul(X, mul(Y, X))
        assoc_ok = bool((assoc[0] == assoc2[0]).all() and (assoc[1] == assoc2[1]).all())
        return {"mode": mode, "commutator": comm_ok, "power": power_ok, "associative": assoc_ok,
                "order": N, "center_order": self.center_order}


def construct_R(fd: FormData, kind: str | None = None) -> SymplecticTypeGroup:
    return SymplecticTypeGroup(fd, kind or fd.kind())


# -- classification -----------------------------------------------------------------

def _element_of_order(g: Group, k: int):
    for x in g.elements():
        if g.element_order(x) == k:
            return x
    return None


def classify_R(g: Group, r: int):
    """(kind, n) when g is symplectic-type with cyclic centre of order r or 4; else None."""
    N = g.order()
    fac = factorize(N)
    if N == 1 or set(fac) != {r}:
        return None
    if N > 2 ** 14:
        raise ResourceError("classify_R is limited to groups of order <= 2^14")
    if g.is_abelian():
        return None
    Z = g.center()
    zo = Z.order()
    if zo not in ((r,) if r != 2 else (2, 4)):
        return None
    zgen = _element_of_order(Z, zo)
    if zgen is None:
        return None
    D = g.derived_subgroup()
    if D.order() != r or not D.is_subgroup_of(Z):
        return None
    for x in g.gens:
        if not Z.contains(g.power(x, r)):
            return None
    quot = N // zo
    k = 0
    while r ** k < quot:
        k += 1
    if r ** k != quot or k % 2:
        return None
    n = k // 2
    if r != 2:
        if any(g.element_order(x) not in (1, r) for x in g.elements()):
            return None
        return ("extraspecial", n)
    if zo == 4:
        return ("central4", n)
    # Q(xZ) = x^2 on the 2n-space g/Z; sign via the Arf invariant.
    z = zgen
    basis = []
    sub = Z
    for x in g.gens + [g.uniform_random(random.Random(s)) for s in range(64)]:
        if len(basis) == k:
            break
        if not sub.contains(x):
            basis.append(x)
            sub = g.subgroup(Z.gens + basis)
    if len(basis) != k:
        return None

    def log(y):
        return 0 if g.is_identity(y) else (1 if g.eq(y, z) else None)
    U = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        U[i, i] = log(g.power(basis[i], 2))
        for j in range(i + 1, k):
            U[i, j] = log(g.comm(basis[i], basis[j]))
    return ("plus" if quadratic_sign(U) == 1 else "minus", n)


# -- isometry groups ------------------------------------------------------------------

def _target_order(fd: FormData) -> int:
    n = fd.n
    if fd.r != 2 or fd.case == "2b":
        return sp_order(n, fd.r)
    return orthogonal_order(n, 1 if fd.kind() == "plus" else -1)


def is_isometry(fd: FormData, x) -> bool:
    F = fd.field
    x = np.asarray(x.a if isinstance(x, Matrix) else x, dtype=np.int64)
    if not np.array_equal(array_matmul(F, array_matmul(F, x, fd.f), x.T), fd.f):
        return False
    if fd.r == 2:
        for i in range(fd.d):
            if fd.Qvalue(x[i]) != fd.Q[i, i] % 2:
                return False
    return True


def isometry_group_generators(fd: FormData) -> Group:
    """Matrix group over GF(r) generating the full isometry group of f (and Q)."""
    F = fd.field
    d = fd.d
    target = _target_order(fd)
    cands = []
    for v in itertools.product(range(fd.r), repeat=d):
        v = np.array(v, dtype=np.int64)
        if not v.any():
            continue
        nz = v[np.flatnonzero(v)[0]]
        if nz != 1:
            continue
        if fd.r == 2 and fd.Qvalue(v) != 1:
            continue
        t = (np.eye(d, dtype=np.int64) + np.outer(fd.f @ v, v)) % fd.r
        if np.array_equal(t, np.eye(d, dtype=np.int64)):
            continue
        cands.append(t)
    gens = []
    group = Group.matrix(F, d, [], name="Isom")
    for t in sorted(cands, key=lambda m: int(np.count_nonzero(m - np.eye(d, dtype=np.int64)))):
        m = Matrix._wrap(F, t)
        if group.contains(m):
            continue
        gens.append(m)
        group = Group.matrix(F, d, gens, name="Isom")
        if group.order() == target:
            break
    if group.order() != target and d <= 4:
        for flat in itertools.product(range(fd.r), repeat=d * d):
            x = np.array(flat, dtype=np.int64).reshape(d, d)
            if is_isometry(fd, x) and Matrix._wrap(F, x).rank() == d:
                m = Matrix._wrap(F, x)
                if not group.contains(m):
                    gens.append(m)
                    group = Group.matrix(F, d, gens, name="Isom")
                    if group.order() == target:
                        break
    if group.order() != target:
        raise GroupError(f"isometry generators reach order {group.order()}, expected {target}")
    return group


# -- Weil representation -----------------------------------------------------------------

def _adapted_basis(fd: FormData):
    """Basis rows with roles: hyperbolic pairs, an anisotropic pair, the radical."""
    F = fd.field
    d = fd.d
    if fd.r != 2:
        pairs = symplectic_basis(F, fd.f)
        return [("pair", e, f) for e, f in pairs]
    rad = fd.radical()
    z0 = rad[0] if rad.shape[0] else None
    # complement of the radical
    if z0 is not None:
        piv = int(np.flatnonzero(z0)[-1])
        space = [np.eye(d, dtype=np.int64)[i] for i in range(d) if i != piv]
    else:
        space = [np.eye(d, dtype=np.int64)[i] for i in range(d)]
    out = []

    def bf(u, v):
        return int(u @ fd.f @ v) % 2
    while space:
        span = []
        for coeffs in itertools.product((0, 1), repeat=len(space)):
            if any(coeffs):
                span.append(sum(c * s for c, s in zip(coeffs, space)) % 2)
        e = next((v for v in span if fd.Qvalue(v) == 0), None)
        if e is None or len(space) == 2 and all(fd.Qvalue(v) == 1 for v in span):
            e = space[0]
            f_ = next(v for v in space[1:] if bf(e, v))
            if z0 is not None:
                e = (e + z0) % 2
                f_ = (f_ + z0) % 2
                out.append(("pair", e, f_))
            else:
                out.append(("aniso", e, f_))
            rest = []
        else:
            f1 = next(v for v in span if bf(e, v))
            f_ = (f1 + fd.Qvalue(f1) * e) % 2
            rest = []
            for v in space:
                v2 = (v + bf(v, f_) * e + bf(v, e) * f_) % 2
                if v2.any():
                    rest.append(v2)
            out.append(("pair", e, f_))
        # re-basis the orthogonal complement
        if rest:
            ech = np.array(rest)
            from .gf import row_space
            space = list(row_space(F, ech))
        else:
            space = []
    if z0 is not None:
        out.append(("rad", z0, None))
    return out


@dataclass
class WeilRep:
    R: SymplecticTypeGroup
    field: FieldSpec
    module: GModule
    central_scalar: int
    basis: np.ndarray = dc_field(repr=False)
    blocks: list = dc_field(repr=False, default_factory=list)

    @property
    def dim(self) -> int:
        return self.blocks[0].shape[0] if self.blocks else 1

    def tau(self, x) -> np.ndarray:
        """Matrix of the element (v, a) of R."""
        R, F = self.R, self.field
        v, a = x
        Fr = GF(R.r)
        coords = array_matmul(Fr, np.asarray(v, dtype=np.int64)[None, :], self._basis_inv)[0]
        mat = np.eye(self.dim, dtype=np.int64)
        acc = R.identity()
        for k, c in enumerate(coords):
            for _ in range(int(c)):
                mat = array_matmul(F, mat, self.blocks[k])
                acc = R.mul(acc, (self.basis[k], 0))
        shift = (int(a) - int(acc[1])) % R.r
        if shift:
            mat = F.mul(mat, int(F.power(self.central_scalar, shift)))
        return mat

    def __post_init__(self):
        Fr = GF(self.R.r)
        self._basis_inv = mat_inv(Matrix._wrap(Fr, self.basis)).a


def _quaternion_pair(F: FieldSpec):
    """2x2 matrices X, Y with X^2 = Y^2 = -1 and XY = -YX."""
    m1 = int(F.neg(1))
    X = np.array([[0, 1], [m1, 0]], dtype=np.int64)
    for a in range(F.q):
        for b in range(F.q):
            if int(F.add(F.mul(a, a), F.mul(b, b))) == m1:
                Y = np.array([[a, b], [b, int(F.neg(a))]], dtype=np.int64)
                return X, Y
    raise FormError("no quaternion pair")


def _kron_all(F, mats):
    out = np.ones((1, 1), dtype=np.int64)
    for m in mats:
        out = F.mul(out[:, None, :, None], m[None, :, None, :]).reshape(out.shape[0] * m.shape[0], -1)
    return out


def weil_rep(R: SymplecticTypeGroup, k: FieldSpec) -> WeilRep:
    """Faithful irreducible representation of dimension r^n over k."""
    r = R.r
    if (k.q - 1) % r or k.p == r:
        raise FormError(f"GF({k.q}) lacks primitive {r}-th roots of unity")
    if R.kind == "central4" and (k.q - 1) % 4:
        raise FormError(f"case 2b needs 4 | q - 1; GF({k.q}) fails")
    adapted = _adapted_basis(R.fd)
    n = R.n
    pairs = [b for b in adapted if b[0] in ("pair", "aniso")]
    rows = []
    blocks = []
    eye_r = np.eye(r, dtype=np.int64)

    def at(i, m):
        return _kron_all(k, [m if j == i else eye_r for j in range(n)])
    if r == 2:
        m1 = int(k.neg(1))
        T = np.array([[0, 1], [1, 0]], dtype=np.int64)
        M = np.array([[1, 0], [0, m1]], dtype=np.int64)
    else:
        w = k.root_of_unity(r)
        T = np.roll(np.eye(r, dtype=np.int64), 1, axis=1)
        M = np.diag([int(k.power(w, x)) for x in range(r)]).astype(np.int64)
    es, fs = [], []
    for i, (role, e, f_) in enumerate(pairs):
        if role == "aniso":
            X, Y = _quaternion_pair(k)
            es.append((e, at(i, X)))
            fs.append((f_, at(i, Y)))
        else:
            es.append((e, at(i, T)))
            fs.append((f_, at(i, M)))
    for v, m in es + fs:
        rows.append(v)
        blocks.append(m)
    for role, v, _ in adapted:
        if role == "rad":
            rows.append(v)
            blocks.append(k.mul(np.eye(r ** n, dtype=np.int64), k.root_of_unity(4)))
    basis = np.array(rows, dtype=np.int64) % r
    if n:
        e0, f0 = es[0][1], fs[0][1]
        Fm = Matrix._wrap(k, e0)
        Gm = Matrix._wrap(k, f0)
        c = (Fm.inverse() @ Gm.inverse() @ Fm @ Gm).a
        z = int(c[0, 0])
        # commutator of the lifts equals (0, f(e, f)) in R
        fe = R.fd.fvalue(pairs[0][1], pairs[0][2])
        z = int(k.power(z, pow(fe, -1, r))) if fe != 1 else z
    else:
        z = int(k.neg(1)) if r == 2 else k.root_of_unity(r)
    wr = WeilRep(R, k, None, z, basis, blocks)
    mats = tuple(wr.tau(g) for g in R.generators())
    wr.module = GModule(k, mats, R.as_group() if R.order <= 3 ** 8 else None, f"weil_{R.kind}_{r}_{n}")
    return wr


def verify_weil(w: WeilRep, seed: int = 0) -> dict:
    """Dimension law, exhaustive kernel check and irreducibility."""
    R = w.R
    m = w.module
    V, A = R.all_arrays()
    ident = np.eye(m.dim, dtype=np.int64)
    kernel = 0
    for v, a in zip(V, A):
        if np.array_equal(w.tau((v, int(a))), ident):
            kernel += 1
    return {"dim": m.dim, "expected_dim": R.r ** R.n, "kernel_order": kernel,
            "faithful": kernel == 1, "irreducible": meataxe(m, seed).irreducible}


# -- lifting isometries -----------------------------------------------------------------

def automorphism_cochain(R: SymplecticTypeGroup, x: np.ndarray):
    """Correction c with alpha(v, a) = (v x, a + c(v)) an automorphism fixing Z(R).

    Returns (C, lam): c(v) = v C v^T + lam . v with C strictly upper (r = 2)
    or C = D/2 (odd r)."""
    r = R.r
    beta = R.beta
    D = (x @ beta @ x.T - beta) % r
    if r == 2:
        C = np.triu(D, 1) % 2
    else:
        C = (D * ((r + 1) // 2)) % r
    lam = np.zeros(R.d, dtype=np.int64)
    if R.kind == "central4":
        z0 = R.fd.radical()[0]
        cz = int(z0 @ C @ z0) % 2
        if cz:
            lam[int(np.flatnonzero(z0)[-1])] = 1
    return C, lam


def apply_automorphism(R, x, C, lam, elt):
    v, a = elt
    v = np.asarray(v, dtype=np.int64)
    return ((v @ x) % R.r, (int(a) + int(v @ C @ v) + int(lam @ v)) % R.r)


def lift_isometry(w: WeilRep, x) -> np.ndarray:
    """Projectively normalized P with P^-1 tau(g) P = tau(alpha(g))."""
    R = w.R
    x = np.asarray(x.a if isinstance(x, Matrix) else x, dtype=np.int64) % R.r
    if not is_isometry(R.fd, x):
        raise FormError("matrix is not an isometry of the form data")
    C, lam = automorphism_cochain(R, x)
    gens = R.generators()
    twisted = GModule(w.field, tuple(w.tau(apply_automorphism(R, x, C, lam, g)) for g in gens))
    homs = hom_space(w.module, twisted)
    if len(homs) != 1:
        raise FormError(f"intertwiner space has dimension {len(homs)}, expected 1")
    P, _ = normalize_projective(w.field, homs[0])
    return P


@dataclass
class NormalizerExtension:
    group: Group
    hom: Homomorphism
    kernel: Group
    weil: WeilRep
    quotient: Group


def normalizer_extension(w: WeilRep, S) -> NormalizerExtension:
    """Projective group generated by tau(R) and lifts of S, mapped onto S."""
    R = w.R
    k = w.field
    m = w.dim
    Sg = S if isinstance(S, Group) else Group.matrix(GF(R.r), R.d, list(S), name="S")
    rgens = [Matrix._wrap(k, w.tau(g)) for g in R.generators()]
    lifts = [Matrix._wrap(k, lift_isometry(w, x)) for x in Sg.gens]
    H = Group.matrix(k, m, rgens + lifts, projective=True, name="H")
    images = [Sg.identity()] * len(rgens) + list(Sg.gens)
    hom = Homomorphism(H, Sg, images, check=True)
    K = hom.kernel()
    return NormalizerExtension(H, hom, K, w, Sg)


def defect_one_lift(x6: np.ndarray, fd: FormData) -> np.ndarray:
    """Extend an isometry of the nondegenerate part to the defect-one space.

    Assumes the standard central4 coordinates (radical vector last)."""
    d = fd.d
    x6 = np.asarray(x6, dtype=np.int64) % 2
    if x6.shape != (d - 1, d - 1):
        raise FormError("shape mismatch for defect-one lift")
    out = np.zeros((d, d), dtype=np.int64)
    out[:d - 1, :d - 1] = x6
    for i in range(d - 1):
        e = np.zeros(d, dtype=np.int64)
        e[i] = 1
        img = np.zeros(d, dtype=np.int64)
        img[:d - 1] = x6[i]
        out[i, d - 1] = (fd.Qvalue(img) + fd.Qvalue(e)) % 2
    out[d - 1, d - 1] = 1
    return out
