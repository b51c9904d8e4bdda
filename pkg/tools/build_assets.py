"""Regenerate src/grpx/assets deterministically.

Every group is written together with its provenance; presentations are
verified by coset enumeration before anything is written.  Generator
pairs matching a presentation are found by a seeded random search inside
an independently constructed copy of the group.

    python3 tools/build_assets.py [--out DIR]
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from grpx.bundle import MANIFEST, sha256  # noqa: E402
from grpx.gf import GF, Matrix  # noqa: E402
from grpx.groupcore import Group, Perm, alternating_group, as_perm_group, format_group, symmetric_group  # noqa: E402
from grpx.invariants import psl2_5_on_lines  # noqa: E402
from grpx.modrep import (GModule, chop, format_module, invariant_alternating_form, permutation_module,  # noqa: E402
                         symplectic_basis)
from grpx.gf import array_matmul, mat_inv  # noqa: E402
from grpx.presentations import evaluate_in_group, parse_presentation, verify_presentation  # noqa: E402
from grpx.symtype import FormData, construct_R, isometry_group_generators, weil_rep  # noqa: E402

PRES = {
    "s3": "gens a b / rel a^2 / rel b^3 / rel (a b)^2",
    "a5": "gens a b / rel a^2 / rel b^3 / rel (a b)^5",
    "sl2_5": "gens a b / rel a^3 b^-5 / rel (a b)^2 a^-3",
    # Sp4(2) = S6 and O4-(2) = S5: two-generator Coxeter-Moser presentations of S_n
    "sp4_2": "gens a b / rel a^2 / rel b^6 / rel (a b)^5 / rel [a,b]^3 / rel [a,b^2]^2 / rel [a,b^3]^2",
    "o4m_2": "gens a b / rel a^2 / rel b^5 / rel (a b)^4 / rel [a,b]^3 / rel [a,b^2]^2",
    # O4+(2) = S3 wr 2
    "o4p_2": "gens a b / rel a^2 / rel b^4 / rel (a b)^6 / rel (a b a b^-1)^2",
    "psl2_17": "gens x y / rel x^17 / rel y^2 / rel (x y)^3 / rel (x^4 y x^9 y)^2",
    "psp4_3": "gens a b / rel a^2 / rel b^5 / rel (a b)^9 / rel [a,b]^3 / rel [a, b a b]^2",
    "psu3_3": "gens a b / rel a^2 / rel b^6 / rel (a b)^7 / rel [a,b]^3 / rel (a b a b^2 a b a b^3)^3"
              " / rel (a b^3)^4 / rel (a b a b^2 a b^3)^3",
}

# subgroup <w> with w^k a relator, used to shorten the verifying enumeration
VERIFY_SUB = {"psl2_17": "x", "psp4_3": "b", "psu3_3": "b"}

PSU33_A = "(0 9)(1 17)(2 8)(4 11)(5 23)(7 16)(12 15)(13 27)(14 20)(18 26)(19 21)(24 25)"
PSU33_B = "(0 8 19 18 22 23)(1 11 13)(2 20 27 10 3 17)(4 25 7 12 21 24)(5 6 9 16 14 26)"

PROVENANCE = {
    "s3": "Sym(3) on 3 points; presentation by generator search",
    "a5": "Alt(5) on 5 points; (2,3,5) triangle presentation",
    "sl2_5": "SL2(5) acting on the 24 nonzero vectors of GF(5)^2; binary icosahedral presentation",
    "sp4_2": "Sp4(2) as 4x4 symplectic matrices over GF(2) generated by transvections; isomorphic to S6",
    "o4p_2": "isometry group of the plus-type quadratic form on GF(2)^4 (from symtype); S3 wr 2",
    "o4m_2": "isometry group of the minus-type quadratic form on GF(2)^4 (from symtype); isomorphic to S5",
    "psl2_17": "PSL2(17) on the projective line, x -> x+1 and x -> -1/x",
    "psp4_3": "PSp4(3) on the 40 points of PG(3,3) from the symplectic form [[0,I],[-I,0]]",
    "psu3_3": "PSU3(3) on 28 points; generators and presentation found by relator search, verified by enumeration",
    "psu3_3_sp6": "PSU3(3) in Sp6(2): the 6-dim GF(2) constituent of the 28-point permutation module written "
                  "in a symplectic basis of its invariant alternating form",
    "m8_psl2_17": "8-dim GF(2) constituent of the 18-point permutation module of PSL2(17)",
    "m6_psu3_3": "6-dim GF(2) constituent of the 28-point permutation module of PSU3(3)",
}


def find_pair(G: Group, pres_text: str, seed: int, tries: int = 200000):
    """Seeded search for (a, b) in G satisfying the relators and generating G."""
    p = parse_presentation(pres_text)
    rng = random.Random(seed)
    n = G.order()
    oa = next((len(r) for r in p.relators if all(x == (0, 1) for x in r)), None)
    ob = next((len(r) for r in p.relators if all(x == (1, 1) for x in r)), None)
    for _ in range(tries):
        a = G.uniform_random(rng)
        if oa and G.element_order(a) != oa:
            continue
        b = G.uniform_random(rng)
        if ob and G.element_order(b) != ob:
            continue
        H = G.subgroup([a, b])
        if all(H.is_identity(evaluate_in_group(r, H)) for r in p.relators) and H.order() == n:
            return a, b
    raise RuntimeError(f"no generating pair found for {pres_text}")


def sp4_2() -> Group:
    F = GF(2)
    J = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    gens = []
    for v in itertools.product(range(2), repeat=4):
        v = np.array(v)
        if v.any():
            gens.append(Matrix._wrap(F, (np.eye(4, dtype=np.int64) + np.outer(J @ v, v)) % 2))
    return Group.matrix(F, 4, gens)


def psp4_3() -> Group:
    F = GF(3)
    J = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [2, 0, 0, 0], [0, 2, 0, 0]])
    gens = []
    for vals in itertools.product(range(3), repeat=6):
        M = np.eye(4, dtype=np.int64)
        M[0, 1], M[0, 2], M[0, 3], M[1, 2], M[1, 3], M[2, 3] = vals
        if (array_matmul(F, array_matmul(F, M, J), M.T) == J).all():
            gens.append(Matrix._wrap(F, M))
    gens = gens[1:6] + [Matrix._wrap(F, J)]
    return as_perm_group(Group.matrix(F, 4, gens, projective=True))


def psl2_17() -> Group:
    q = 17
    pts = list(range(q)) + ["inf"]
    idx = {p: i for i, p in enumerate(pts)}

    def img(f):
        return Perm([idx[f(p)] for p in pts])

    x = img(lambda t: "inf" if t == "inf" else (t + 1) % q)
    y = img(lambda t: 0 if t == "inf" else ("inf" if t == 0 else (-pow(t, -1, q)) % q))
    return Group.perm(18, [x, y])


def constituent(g: Group, dim: int, seed: int = 0) -> GModule:
    for f, _ in chop(permutation_module(g, GF(2)), seed):
        if f.dim == dim:
            return f.with_group(g)
    raise RuntimeError(f"no {dim}-dim constituent")


def symplectic_coords(m: GModule) -> list:
    F = m.field
    pairs = symplectic_basis(F, invariant_alternating_form(m).gram)
    C = np.array([e for e, _ in pairs] + [f for _, f in pairs])
    Ci = mat_inv(Matrix._wrap(F, C)).a
    return [array_matmul(F, array_matmul(F, C, A), Ci) for A in m.mats]


SYMTYPE_FIELDS = {"plus": (3, 1), "minus": (3, 1), "central4": (5, 1), "extraspecial": (2, 2)}


def build(out: Path):
    out.mkdir(parents=True, exist_ok=True)
    for f in out.iterdir():
        if f.is_file():
            f.unlink()
    entries = []

    def write(fname, text):
        (out / fname).write_text(text)
        return fname

    def add_group(name, g: Group, order: int, pres_text=None):
        g.name = name
        files = {"grp": write(f"{name}.grp", format_group(g))}
        e = {"name": name, "kind": "group", "order": order, "files": files,
             "provenance": PROVENANCE.get(name, "")}
        if pres_text:
            p = parse_presentation(pres_text)
            p.name = name
            files["pres"] = write(f"{name}.pres", p.to_text())
            sub = VERIFY_SUB.get(name)
            if sub:
                e["verify_sub"] = sub
            ok = verify_presentation(p, g, sub=[p.word(sub)] if sub else None)
            if not ok:
                raise RuntimeError(f"{name}: presentation does not verify")
        if g.order() != order:
            raise RuntimeError(f"{name}: order {g.order()} != {order}")
        entries.append(e)
        print(f"{name}: order {order}", flush=True)

    def add_module(name, m: GModule, group_name):
        m = GModule(m.field, m.mats, m.group, name)
        files = {"mod": write(f"{name}.mod", format_module(m, group_name))}
        entries.append({"name": name, "kind": "module", "group": group_name, "dim": m.dim,
                        "irreducible": True, "files": files, "provenance": PROVENANCE.get(name, "")})
        print(f"{name}: dim {m.dim}", flush=True)

    s3 = symmetric_group(3)
    add_group("s3", Group.perm(3, find_pair(s3, PRES["s3"], 1)), 6, PRES["s3"])
    a5 = alternating_group(5)
    add_group("a5", Group.perm(5, find_pair(a5, PRES["a5"], 2)), 60, PRES["a5"])
    sl, _, _ = psl2_5_on_lines()
    add_group("sl2_5", Group.perm(24, find_pair(sl, PRES["sl2_5"], 3)), 120, PRES["sl2_5"])
    sp = sp4_2()
    add_group("sp4_2", Group.matrix(GF(2), 4, find_pair(sp, PRES["sp4_2"], 4)), 720, PRES["sp4_2"])
    for nm, kind, order in (("o4p_2", "plus", 72), ("o4m_2", "minus", 120)):
        O = isometry_group_generators(FormData.standard(2, 2, kind))
        add_group(nm, Group.matrix(GF(2), 4, find_pair(O, PRES[nm], 5)), order, PRES[nm])
    L = psl2_17()
    add_group("psl2_17", L, 2448, PRES["psl2_17"])
    P = psp4_3()
    add_group("psp4_3", Group.perm(P.degree, find_pair(P, PRES["psp4_3"], 6)), 25920, PRES["psp4_3"])
    U = Group.perm(28, [Perm.parse(PSU33_A, 28), Perm.parse(PSU33_B, 28)])
    add_group("psu3_3", U, 6048, PRES["psu3_3"])
    m8 = constituent(L, 8)
    add_module("m8_psl2_17", m8, "psl2_17")
    m6 = constituent(U, 6)
    add_module("m6_psu3_3", m6, "psu3_3")
    S6 = Group.matrix(GF(2), 6, [Matrix._wrap(GF(2), x) for x in symplectic_coords(m6)])
    add_group("psu3_3_sp6", S6, 6048, PRES["psu3_3"])
    for kind, (p, e) in SYMTYPE_FIELDS.items():
        r = 3 if kind == "extraspecial" else 2
        for n in (1, 2, 3):
            R = construct_R(FormData.standard(r, n, kind))
            w = weil_rep(R, GF(p, e))
            g = Group.matrix(GF(p, e), w.dim, [Matrix._wrap(GF(p, e), x) for x in w.module.mats])
            nm = f"symtype_{kind}_{n}"
            PROVENANCE[nm] = (f"Weil representation of the symplectic-type group ({kind}, n={n}) over "
                              f"GF({p}^{e}), images of the standard generators")
            add_group(nm, g, R.order, None)
    hashes = {f.name: sha256(f) for f in sorted(out.iterdir()) if f.is_file()}
    manifest = {"schema": 1, "assets": entries, "hashes": hashes}
    (out / MANIFEST).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"{len(entries)} assets written to {out}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(ROOT / "src" / "grpx" / "assets"))
    build(Path(ap.parse_args().out))


if __name__ == "__main__":
    main()
