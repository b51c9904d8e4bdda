"""Headline invariants P(G), n_G, n'_G and the subdirect / multiplicativity checks."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

import numpy as np

from .gf import GF, Matrix, field_of_order
from .groupcore import Group, GroupError, Homomorphism, Perm, PermKind, alternating_group, as_perm_group
from .modrep import (GModule, all_irreducibles_up_to_dim, format_module, invariant_alternating_form,
                     is_irreducible, parse_module)
from .presentations import CosetTable, Presentation, low_index_subgroups


class InvariantError(RuntimeError):
    pass


@dataclass
class InvariantReport:
    group: str
    kind: str                   # "P", "n" or "n_prime"
    value: int | None           # None means "> bound"
    certificate: dict
    seed: int = 0
    elapsed_ms: int = 0

    def to_dict(self) -> dict:
        return {"group": self.group, "kind": self.kind, "value": self.value,
                "certificate": self.certificate, "seed": self.seed, "elapsed_ms": self.elapsed_ms}


def _ms(t0):
    return int((time.perf_counter() - t0) * 1000)


# -- P(G) ------------------------------------------------------------------------------------

def perm_degree(pres: Presentation, cap: int, name: str = "", budget_secs=None) -> InvariantReport:
    """Least index of a proper subgroup, searched exhaustively up to cap."""
    t0 = time.perf_counter()
    tables = low_index_subgroups(pres, cap, budget_secs=budget_secs)
    proper = sorted((t for t in tables if t.index > 1), key=lambda t: t.index)
    cert = {"bound": cap, "indices": sorted({t.index for t in tables}), "exhaustive": True}
    value = None
    if proper:
        value = proper[0].index
        cert["witness_table"] = [list(map(int, row)) for row in proper[0].table]
    return InvariantReport(name or pres.name, "P", value, cert, 0, _ms(t0))


def validate_perm_witness(pres: Presentation, report: InvariantReport) -> bool:
    if report.value is None:
        return "witness_table" not in report.certificate
    t = CosetTable(pres, [], report.certificate["witness_table"])
    return t.index == report.value and t.check() and t.permutation_group().order() > 1 \
        and report.certificate["bound"] >= report.value


# -- exhaustiveness oracle for GF(q)-irreducibles ---------------------------------------------

def brauer_count(g: Group, q: int, limit: int = 10 ** 5) -> int:
    """Number of irreducible GF(q)G-modules: p-regular classes modulo x -> x^q."""
    p = field_of_order(q).p
    cls = {}
    reps = []
    for x in g.elements(limit):
        k = g.kind.key(x)
        if k in cls:
            continue
        cid = len(reps)
        reps.append(x)
        for y in g.orbit(x, lambda a, h: g.conj(a, h), key=g.kind.key):
            cls[g.kind.key(y)] = cid
    regular = [i for i, x in enumerate(reps) if g.element_order(x) % p]
    parent = {i: i for i in regular}

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i in regular:
        j = cls[g.kind.key(g.power(reps[i], q))]
        a, b = find(i), find(j)
        if a != b:
            parent[a] = b
    return len({find(i) for i in regular})


# -- n_G and n'_G ----------------------------------------------------------------------------

def _catalogue(g: Group, dmax_dim: int, start, seed: int, tensor_cap: int):
    F = GF(2)
    cat = all_irreducibles_up_to_dim(g, F, dmax_dim, start=start, seed=seed, tensor_cap=tensor_cap)
    found = len(cat.certificate["irreducibles_found"])
    try:
        expected = brauer_count(g, 2)
    except GroupError:
        expected = None
    level = "exhaustive (oracle)" if expected == found else cat.certificate["level"]
    return cat, {"level": level, "brauer_count": expected, "found": found,
                 "dims_found": cat.certificate["irreducibles_found"]}


def _faithful(m: GModule) -> bool:
    return m.is_faithful()


def _least_even(g, dmax, start, seed, tensor_cap, symplectic):
    t0 = time.perf_counter()
    cat, cert = _catalogue(g, 2 * dmax, start, seed, tensor_cap)
    best = None
    for m in sorted(cat.modules, key=lambda m: m.dim):
        if m.dim % 2 or m.dim > 2 * dmax or not _faithful(m):
            continue
        form = None
        if symplectic:
            form = invariant_alternating_form(m)
            if form is None:
                continue
        best = m
        break
    cert["bound"] = dmax
    cert["nontrivial_dims"] = sorted(m.dim for m in cat.modules if not _is_trivial(m))
    value = None
    if best is not None:
        value = best.dim // 2
        cert["witness_module"] = format_module(best, g.name or "G")
    return value, cert, _ms(t0)


def _is_trivial(m):
    return m.dim == 1 and all((A == 1).all() for A in m.mats)


def n_prime(g: Group, dmax: int, start: GModule | None = None, seed: int = 0,
            tensor_cap: int = 100) -> InvariantReport:
    """Least n with a faithful irreducible GF(2)G-module of dimension 2n (n <= dmax)."""
    value, cert, ms = _least_even(g, dmax, start, seed, tensor_cap, False)
    return InvariantReport(g.name, "n_prime", value, cert, seed, ms)


def n_symplectic(g: Group, dmax: int, start: GModule | None = None, seed: int = 0,
                 tensor_cap: int = 100) -> InvariantReport:
    """As n_prime, also requiring a nondegenerate invariant alternating form."""
    value, cert, ms = _least_even(g, dmax, start, seed, tensor_cap, True)
    return InvariantReport(g.name, "n", value, cert, seed, ms)


def validate_module_witness(g: Group, report: InvariantReport, seed: int = 0) -> bool:
    """Re-check a serialized n / n' witness: dimension, irreducibility, faithfulness, form."""
    if report.value is None:
        return True
    m = parse_module(report.certificate["witness_module"], g)
    if m.dim != 2 * report.value or not is_irreducible(m, seed) or not m.is_faithful():
        return False
    if report.kind == "n":
        return invariant_alternating_form(m) is not None
    return True


# -- subdirect products ----------------------------------------------------------------------

def _concat(perms, sizes):
    out, off = [], 0
    for p, s in zip(perms, sizes):
        out.append(np.asarray(p.a, dtype=np.int32) + off)
        off += s
    return Perm(np.concatenate(out))


def _block(x: Perm, start: int, size: int) -> Perm:
    return Perm(np.asarray(x.a[start:start + size], dtype=np.int32) - start)


@dataclass
class SubdirectInstance:
    factors: list          # H_1..H_r as permutation groups
    quotients: list        # pi_i: H_i -> T_i, surjective with soluble kernel
    group: Group           # H inside the product, on concatenated point sets
    t_order: int
    normal: Group | None = None
    ell: int | None = None
    ells: list = field(default_factory=list)

    @property
    def offsets(self):
        offs, o = [], 0
        for h in self.factors:
            offs.append(o)
            o += h.degree
        return offs

    def project(self, x, i):
        return _block(x, self.offsets[i], self.factors[i].degree)

    def projection_images(self, i):
        return [self.project(x, i) for x in self.group.gens]


# Orders only (Schreier-Sims on a few hundred points), never element lists.
SUBDIRECT_CAP = 10 ** 12


def _log_exact(n: int, base: int) -> int | None:
    if n == 1:
        return 0
    k = round(math.log(n) / math.log(base))
    return k if base ** k == n else None


def _perfect_mod(g: Group, n: Group) -> bool:
    """G = G'N."""
    d = g.derived_subgroup()
    return g.subgroup(d.gens + n.gens).order() == g.order()


def fiber_product(h1, h2: Group, q1: Homomorphism, q2: Homomorphism, pi2: Homomorphism | None = None):
    """{(a, b) : q1(a) = q2(b)} inside H1 x H2.

    h1 may itself be a SubdirectInstance (then q1 is defined on its group), which
    gives iterated fiber products with three or more factors.
    """
    if q1.target.order() != q2.target.order() or q1.image().order() != q1.target.order() \
            or q2.image().order() != q2.target.order():
        raise InvariantError("quotient mismatch: maps must be onto one common quotient")
    if q1.target.degree != q2.target.degree or any(
            not np.array_equal(a.a, b.a) for a, b in zip(q1.target.gens, q2.target.gens)):
        raise InvariantError("quotient mismatch: targets differ")
    if isinstance(h1, SubdirectInstance):
        base, factors, quots, t_order = h1.group, list(h1.factors), list(h1.quotients), h1.t_order
    else:
        base, factors, quots, t_order = h1, [h1], [], None
    sizes = [base.degree, h2.degree]
    one2 = h2.identity()
    gens = [_concat([a, q2.preimage(img)], sizes) for a, img in zip(base.gens, q1.images)]
    gens += [_concat([base.identity(), k], sizes) for k in q2.kernel().gens]
    H = Group(PermKind(sum(sizes)), [g for g in gens if not g.is_identity()] or [_concat([base.identity(), one2], sizes)],
              "fiber", cap=SUBDIRECT_CAP)
    if pi2 is not None:
        quots.append(pi2)
    factors.append(h2)
    return SubdirectInstance(factors, quots, H, t_order or (pi2.target.order() if pi2 else 0))


def solve_subdirect(inst: SubdirectInstance) -> SubdirectInstance:
    """Compute N = ker(H -> prod T_i), l and the l_i."""
    H = inst.group
    if len(inst.quotients) != len(inst.factors):
        raise InvariantError("every factor needs its quotient map onto T")
    tgroups = [q.target for q in inst.quotients]
    T = Group(PermKind(sum(t.degree for t in tgroups)),
              [_concat([q(inst.project(x, i)) for i, q in enumerate(inst.quotients)],
                       [t.degree for t in tgroups]) for x in H.gens], "prodT", cap=SUBDIRECT_CAP)
    phi = Homomorphism(H, T, list(T.gens))
    N = phi.kernel()
    if not N.is_soluble():
        raise InvariantError("N is not soluble")
    ell = _log_exact(H.order() // N.order(), inst.t_order)
    ells = []
    for i, h in enumerate(inst.factors):
        Ni = h.subgroup([inst.project(x, i) for x in N.gens])
        ells.append(_log_exact(h.order() // Ni.order(), inst.t_order))
    inst.normal, inst.ell, inst.ells = N, ell, ells
    return inst


def check_subdirect(inst: SubdirectInstance) -> dict:
    """Verify the instance shape and that sum(l_i) >= l."""
    if inst.normal is None:
        solve_subdirect(inst)
    H, N = inst.group, inst.normal
    out = {"surjective": True, "n_soluble": N.is_soluble(), "n_normal": N.is_normal_in(H)}
    for i, h in enumerate(inst.factors):
        if h.subgroup(inst.projection_images(i)).order() != h.order():
            out["surjective"] = False
    out["perfect_mod_n"] = _perfect_mod(H, N)
    factor_ok = []
    for i, h in enumerate(inst.factors):
        Ni = h.subgroup([inst.project(x, i) for x in N.gens])
        factor_ok.append(Ni.is_normal_in(h) and _perfect_mod(h, Ni))
    out["factor_quotients_perfect"] = all(factor_ok)
    out["ell"], out["ells"] = inst.ell, list(inst.ells)
    shape = (out["surjective"] and out["n_soluble"] and out["n_normal"] and out["perfect_mod_n"]
             and out["factor_quotients_perfect"] and inst.ell is not None and None not in inst.ells)
    out["shape_ok"] = bool(shape)
    out["holds"] = bool(shape and sum(inst.ells) >= inst.ell)
    return out


# -- standard building blocks ------------------------------------------------------------------

def psl2_5_on_lines() -> tuple[Group, Group, Homomorphism]:
    """(SL2(5) on 24 vectors, A5 = PSL2(5) on 6 lines, the natural quotient map)."""
    F = GF(5)
    a = Matrix(F, [[1, 1], [0, 1]])
    b = Matrix(F, [[0, 1], [4, 0]])
    vecs = [(x, y) for x in range(5) for y in range(5) if (x, y) != (0, 0)]
    vidx = {v: i for i, v in enumerate(vecs)}
    lines = []
    for v in vecs:
        inv = pow(next(c for c in v if c), -1, 5)
        lines.append(tuple((c * inv) % 5 for c in v))
    lreps = sorted(set(lines))
    lidx = {l: i for i, l in enumerate(lreps)}

    def act(m, v):
        return tuple(int(sum(v[i] * int(m.a[i, j]) for i in range(2)) % 5) for j in range(2))

    sl = Group(PermKind(24), [Perm([vidx[act(m, v)] for v in vecs]) for m in (a, b)], "SL2(5)")
    psl_gens = []
    for m in (a, b):
        img = []
        for l in lreps:
            w = act(m, l)
            inv = pow(next(c for c in w if c), -1, 5)
            img.append(lidx[tuple((c * inv) % 5 for c in w)])
        psl_gens.append(Perm(img))
    T = Group(PermKind(6), psl_gens, "A5")
    return sl, T, Homomorphism(sl, T, list(T.gens))


def _cyclic(n: int) -> Group:
    return Group(PermKind(n), [Perm([(i + 1) % n for i in range(n)])], f"C{n}")


def _decoration(rng: random.Random, maxorder: int) -> Group:
    """A random soluble group of order <= maxorder as a permutation group."""
    choice = rng.choice(["cyclic", "dihedral", "elementary", "trivial"])
    if choice == "trivial":
        return Group(PermKind(1), [], "1")
    if choice == "cyclic":
        return _cyclic(rng.randint(2, maxorder))
    if choice == "dihedral":
        m = rng.randint(3, max(3, maxorder // 2))
        return Group(PermKind(m), [Perm([(i + 1) % m for i in range(m)]), Perm([(-i) % m for i in range(m)])],
                     f"D{2 * m}")
    k = rng.randint(1, max(1, int(math.log2(maxorder))))
    gens = []
    for i in range(k):
        a = list(range(2 * k))
        a[2 * i], a[2 * i + 1] = a[2 * i + 1], a[2 * i]
        gens.append(Perm(a))
    return Group(PermKind(2 * k), gens, f"2^{k}")


def decorated_factor(kind: str, decoration: Group):
    """(H_i, pi_i) with H_i = X x D for X in {A5, SL2(5)}, pi_i onto A5."""
    sl, T, pi = psl2_5_on_lines()
    base = T if kind == "A5" else sl
    sizes = [base.degree, decoration.degree]
    gens = [_concat([x, decoration.identity()], sizes) for x in base.gens]
    gens += [_concat([base.identity(), d], sizes) for d in decoration.gens]
    H = Group(PermKind(sum(sizes)), gens, f"{base.name}x{decoration.name}")
    imgs = [x if kind == "A5" else pi(x) for x in base.gens] + [T.identity()] * len(decoration.gens)
    return H, Homomorphism(H, T, imgs), T


def random_subdirect(seed: int, max_decoration: int = 16) -> SubdirectInstance:
    """Iterated fiber product of 2 or 3 decorated A5 factors, each linked to the previous
    ones over A5 or over the trivial group."""
    rng = random.Random(seed)
    r = rng.choice([2, 2, 3])
    parts = []
    for _ in range(r):
        kind = rng.choice(["A5", "SL2(5)"])
        dec = _decoration(rng, max_decoration if kind == "A5" else max_decoration // 2)
        parts.append(decorated_factor(kind, dec))
    H1, pi1, T = parts[0]
    inst = SubdirectInstance([H1], [pi1], H1, T.order())
    for H2, pi2, _ in parts[1:]:
        base = inst.group
        link = rng.random() < 0.6
        if link:
            q1 = Homomorphism(base, T, [pi1(inst.project(x, 0)) for x in base.gens])
            q2 = pi2
        else:
            triv = Group(PermKind(1), [], "1")
            q1 = Homomorphism(base, triv, [triv.identity()] * len(base.gens))
            q2 = Homomorphism(H2, triv, [triv.identity()] * len(H2.gens))
        inst = fiber_product(inst, H2, q1, q2, pi2)
    return solve_subdirect(inst)


# -- multiplicativity ------------------------------------------------------------------------

def power_group(T: Group, ell: int) -> Group:
    T = as_perm_group(T)
    gens = []
    for i in range(ell):
        for x in T.gens:
            gens.append(_concat([x if j == i else T.identity() for j in range(ell)], [T.degree] * ell))
    return Group(PermKind(T.degree * ell), gens, f"{T.name}^{ell}")


def check_multiplicative(T: Group, ell: int, dmax: int, claimed_nT: int | None = None, seed: int = 0) -> dict:
    """n'_{T^l} >= n'_T * 2^(l-1), with n'_T computed unless claimed."""
    nT = claimed_nT if claimed_nT is not None else n_prime(T, dmax, seed=seed).value
    G = power_group(T, ell)
    rep = n_prime(G, dmax * 2 ** (ell - 1) if claimed_nT is None else max(dmax, nT) * 2 ** (ell - 1),
                  seed=seed)
    bound = None if nT is None else nT * 2 ** (ell - 1)
    holds = rep.value is not None and bound is not None and rep.value >= bound
    return {"T": T.name, "ell": ell, "n_prime_T": nT, "n_prime_power": rep.value, "bound": bound,
            "holds": bool(holds), "equality": bool(holds and rep.value == bound),
            "certificate_level": rep.certificate["level"]}


def a5() -> Group:
    g = alternating_group(5)
    g.name = "A5"
    return g


def d_p_instance_check(m_dims, ell: int, d_p: int = 2) -> bool:
    """Instance check of m_j >= d_p(T)^l_j >= 2^l_j (A5 in characteristic 2: d_p = 2)."""
    return all(m >= d_p ** ell >= 2 ** ell for m in m_dims)


__all__ = [
    "InvariantError", "InvariantReport", "perm_degree", "validate_perm_witness", "brauer_count",
    "n_prime", "n_symplectic", "validate_module_witness", "SubdirectInstance", "fiber_product",
    "solve_subdirect", "check_subdirect", "psl2_5_on_lines", "decorated_factor", "random_subdirect",
    "power_group", "check_multiplicative", "a5", "d_p_instance_check",
]
