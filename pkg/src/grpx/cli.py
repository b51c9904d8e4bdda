"""grpx command-line interface.  Exit codes: 0 pass, 1 a claim failed, 2 input or asset error."""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .bundle import AssetError, Bundle, verify_entry
from .reproduce import CLAIMS, Certificate, RunConfig, default_claims, run_claim

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(RuntimeError):
    pass


def _config(args) -> RunConfig:
    return RunConfig(seed=args.seed, budget_secs=args.budget_secs, jobs=args.jobs, extended=args.extended)


def _emit(args, payload: dict):
    text = json.dumps(payload, sort_keys=True, indent=2)
    if args.json:
        Path(args.json).write_text(text + "\n")
    return text


def _field(q: int):
    from .gf import field_of_order
    return field_of_order(q)


def _load_group(spec: str, bundle: Bundle | None = None):
    """A bundled asset name or a path to a .grp file."""
    from .groupcore import parse_group
    p = Path(spec)
    if p.suffix == ".grp" or p.exists():
        if not p.exists():
            raise InputError(f"no such file {spec}")
        g = parse_group(p.read_text())
        return g
    return (bundle or Bundle.open()).group(spec)


def _run_claims(ids, cfg: RunConfig, b: Bundle):
    if cfg.jobs > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            futs = [ex.submit(run_claim, i, cfg, None) for i in ids]
            return [f.result() for f in futs]
    return [run_claim(i, cfg, b) for i in ids]


def _report(args, certs) -> int:
    for c in certs:
        line = f"{c.verdict:7s} {c.claim}  ({c.elapsed_ms} ms)"
        if c.diff:
            line += "  diff: " + json.dumps(c.diff, sort_keys=True)[:300]
        print(line)
    _emit(args, {"schema_version": 1, "seed": args.seed, "certificates": [c.to_dict() for c in certs],
                 "determinism": {c.claim: c.determinism_hash() for c in certs}})
    return EXIT_FAIL if any(c.verdict == "FAIL" for c in certs) else EXIT_OK


# -- subcommands ----------------------------------------------------------------------------

def cmd_reproduce_all(args) -> int:
    b = Bundle.open()
    bad = b.hash_failures()
    if bad:
        for msg in bad:
            print(f"asset error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    return _report(args, _run_claims(default_claims(args.extended), _config(args), b))


def cmd_verify_table(args) -> int:
    b = Bundle.open()
    cfg = _config(args)
    certs = []
    for cid in default_claims(args.extended, tag="table"):
        try:
            certs.append(run_claim(cid, cfg, b))
        except AssetError as e:
            certs.append(Certificate(cid, {}, {}, "FAIL", cfg.seed, 0, {"asset": str(e)}))
    return _report(args, certs)


def cmd_invariants(args) -> int:
    from .invariants import n_prime, n_symplectic, perm_degree
    b = Bundle.open()
    t0 = time.perf_counter()
    if args.kind == "P":
        rep = perm_degree(b.presentation(args.group), args.cap, args.group, budget_secs=args.budget_secs)
    else:
        g = _load_group(args.group, b)
        fn = n_symplectic if args.kind == "n" else n_prime
        rep = fn(g, args.cap, seed=args.seed)
    rep.seed = args.seed
    rep.elapsed_ms = int((time.perf_counter() - t0) * 1000)
    print(f"{args.kind}({args.group}) = {rep.value if rep.value is not None else '> ' + str(args.cap)}")
    _emit(args, rep.to_dict())
    return EXIT_OK


def cmd_h2(args) -> int:
    from .cohomology import h2_group
    from .modrep import parse_module
    b = Bundle.open()
    g = _load_group(args.group, b)
    mp = Path(args.module)
    m = parse_module(mp.read_text(), g) if mp.exists() else b.module(args.module, g)
    d, cert = h2_group(g, m, args.p, args.seed)
    out = {"dim_h2": d, "dim_h2_sylow": cert["dim_h2_sylow"], "dim_h2_stable": d, "seed": args.seed,
           "elapsed_ms": cert["elapsed_ms"], "certificate": cert}
    print(f"dim H^2 = {d}  (Sylow: {cert['dim_h2_sylow']}, {cert['elapsed_ms']} ms)")
    _emit(args, out)
    return EXIT_OK


def cmd_split(args) -> int:
    from .cohomology import split_check
    from .presentations import parse_presentation
    if args.builtin:
        cert = run_claim("split.psu3_3", _config(args))
        return _report(args, [cert])
    if not (args.ext and args.kernel and args.pres):
        raise InputError("split needs --ext, --kernel and --pres (or --builtin)")
    E = _load_group(args.ext)
    Kg = _load_group(args.kernel)
    K = E.subgroup(Kg.gens)
    pres = parse_presentation(Path(args.pres).read_text())
    lifts = E.gens[len(E.gens) - pres.ngens:]
    res = split_check(E, K, pres, lifts)
    print("splits" if res.splits else "does not split")
    _emit(args, {"splits": res.splits, "certificate": res.certificate, "seed": args.seed})
    return EXIT_OK


def cmd_feit_tits(args) -> int:
    from .clifford import FeitTitsResult, feit_tits_reduce
    if args.builtin:
        return _report(args, [run_claim(f"feittits.{args.builtin}", _config(args))])
    if not (args.group and args.normal):
        raise InputError("feit-tits needs --group and --normal (or --builtin)")
    H = _load_group(args.group)
    Ng = _load_group(args.normal)
    N = H.subgroup(Ng.gens)
    res = feit_tits_reduce(H, N, seed=args.seed)
    d = res.to_dict()
    if isinstance(res, FeitTitsResult):
        print(f"r = {res.r}, n = {res.n}, image order {res.image_order}, faithful {res.faithful}, "
              f"irreducible {res.irreducible}")
        _emit(args, d)
        return EXIT_OK
    print(f"hypothesis ({res.clause}) fails: {res.reason}")
    _emit(args, d)
    return EXIT_FAIL


def cmd_symtype_build(args) -> int:
    from .gf import Matrix
    from .groupcore import Group, format_group
    from .modrep import format_module
    from .symtype import FormData, construct_R, verify_weil, weil_rep
    F = _field(args.field)
    fd = FormData.standard(args.r, args.n, args.kind)
    R = construct_R(fd)
    w = weil_rep(R, F)
    name = f"R_{args.kind}_{args.r}_{args.n}"
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    g = Group.matrix(F, w.dim, [Matrix._wrap(F, A) for A in w.module.mats], name=name)
    (out / f"{name}.grp").write_text(format_group(g))
    (out / f"{name}.mod").write_text(format_module(w.module, name))
    v = verify_weil(w, args.seed)
    print(f"wrote {name}.grp and {name}.mod: |R| = {R.order}, dim {v['dim']}, "
          f"faithful {v['faithful']}, irreducible {v['irreducible']}")
    _emit(args, {"order": R.order, "seed": args.seed, **{k: v[k] for k in sorted(v)}})
    return EXIT_OK


def cmd_clifford(args) -> int:
    from .clifford import homogeneous_components, imprimitivity_witness, tensor_factorize
    from .modrep import GModule, parse_module
    H = _load_group(args.group)
    M = H.subgroup(_load_group(args.normal).gens)
    V = parse_module(Path(args.module).read_text(), H) if args.module else GModule.natural(H)
    dec = homogeneous_components(V, M, args.seed)
    out = {"k": dec.k, "components": [[c.multiplicity, c.irr_dim] for c in dec.components],
           "transitive": dec.is_transitive(), "imprimitive": imprimitivity_witness(dec) is not None}
    if dec.k == 1:
        tf = tensor_factorize(V, M, dec, args.seed)
        out["tensor"] = {"m1": tf.m1, "m2": tf.m2, "degenerate": tf.degenerate}
    print(json.dumps(out, sort_keys=True))
    _emit(args, out)
    return EXIT_OK


def cmd_subdirect(args) -> int:
    from .invariants import check_subdirect, random_subdirect
    bad = 0
    rows = []
    for s in range(args.count):
        c = check_subdirect(random_subdirect(args.seed * 1000 + s))
        rows.append({"instance": s, "ell": c["ell"], "ells": c["ells"], "holds": c["holds"]})
        bad += not c["holds"]
    print(f"{args.count - bad}/{args.count} instances satisfy sum(l_i) >= l")
    _emit(args, {"seed": args.seed, "instances": rows})
    return EXIT_FAIL if bad else EXIT_OK


def cmd_asset_verify(args) -> int:
    b = Bundle.open()
    bad_hash = b.hash_failures()
    for msg in bad_hash:
        print(f"CORRUPT {msg}")
    if bad_hash:
        return EXIT_INPUT
    failed = 0
    names = [e["name"] for e in b.manifest["assets"]]
    for name in names:
        ok, msg = verify_entry(b, name, args.seed)
        failed += not ok
        print(f"{'ok' if ok else 'FAIL':4s} {name}: {msg}")
    print(f"{len(names)} assets in manifest, {len(b.manifest['hashes'])} files hashed, {failed} failed")
    _emit(args, {"assets": len(names), "failed": failed})
    return EXIT_FAIL if failed else EXIT_OK


def cmd_explain(args) -> int:
    c = CLAIMS.get(args.claim)
    if c is None:
        raise InputError(f"unknown claim {args.claim!r}; known: {', '.join(sorted(CLAIMS))}")
    print(f"{c.id}: {c.statement}")
    print(f"  assets: {', '.join(c.assets) if c.assets else '(constructed in code)'}")
    print(f"  extended only: {c.extended}")
    print(f"  check: {(c.run.__doc__ or '').strip() or 'recomputed and compared with the stated values'}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def flags(suppress):
        # global flags are accepted before or after the subcommand; the subcommand
        # copies use SUPPRESS so they do not overwrite values given earlier
        c = argparse.ArgumentParser(add_help=False)
        dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        c.add_argument("--seed", type=int, default=dflt(0))
        c.add_argument("--jobs", type=int, default=dflt(1))
        c.add_argument("--budget-secs", type=float, default=dflt(None))
        c.add_argument("--extended", action="store_true", default=dflt(False))
        c.add_argument("--json", metavar="PATH", default=dflt(None))
        return c
    ap = argparse.ArgumentParser(prog="grpx", parents=[flags(False)], description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)
    common = flags(True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        p.set_defaults(fn=fn)
        return p

    add("reproduce-all", cmd_reproduce_all, help="run every default claim")
    add("verify-table", cmd_verify_table, help="recompute the P / n table")
    p = add("invariants", cmd_invariants, help="compute P, n or n' for a bundled group")
    p.add_argument("--group", required=True)
    p.add_argument("--kind", choices=["P", "n", "nprime"], required=True)
    p.add_argument("--cap", type=int, required=True)
    p = add("h2", cmd_h2, help="dim H^2(G, M) via Sylow + stable elements")
    p.add_argument("--group", required=True)
    p.add_argument("--module", required=True)
    p.add_argument("--p", type=int, default=2)
    p = add("split", cmd_split, help="complement search for an abelian normal subgroup")
    p.add_argument("--ext")
    p.add_argument("--kernel")
    p.add_argument("--pres")
    p.add_argument("--builtin", action="store_true", help="the 2^6.PSU3(3) < PGL8(9) pipeline")
    p = add("feit-tits", cmd_feit_tits, help="Feit-Tits reduction of a projective group")
    p.add_argument("--group")
    p.add_argument("--normal")
    p.add_argument("--module")
    p.add_argument("--builtin", choices=["sp4_2", "psu3_3"])
    st = add("symtype", lambda a: cmd_symtype_build(a) if a.action == "build" else EXIT_INPUT,
             help="symplectic-type groups")
    st.add_argument("action", choices=["build"])
    st.add_argument("--r", type=int, required=True)
    st.add_argument("--n", type=int, required=True)
    st.add_argument("--kind", required=True, choices=["extraspecial", "plus", "minus", "central4"])
    st.add_argument("--field", type=int, required=True)
    st.add_argument("--out", default=".")
    p = add("clifford", cmd_clifford, help="homogeneous components relative to a normal subgroup")
    p.add_argument("--group", required=True)
    p.add_argument("--normal", required=True)
    p.add_argument("--module")
    p = add("subdirect", cmd_subdirect, help="seeded subdirect-product checks")
    p.add_argument("--count", type=int, default=100)
    add("asset-verify", cmd_asset_verify, help="hash and verify every bundled asset")
    p = add("explain", cmd_explain, help="describe a claim")
    p.add_argument("claim")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _config(args)
        return args.fn(args)
    except (AssetError, InputError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
