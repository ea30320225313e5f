"""Command-line interface: ``qgcat <subcommand> ...``.

Exit codes: 0 success, 1 predicate mismatch (check, sweep, split-check,
kirby-check, verify), 2 input or cap error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .alcove import AlcoveError, WallError, make_spec
from .checks import check_all, classify, cross_validate, gprime_orbit_of_zero, predicted_flags
from .cyclotomic import CyclotomicError
from .modular import DEFAULT_WORK_CAP, GradedModularData, ModularDataError, block_dimension, build_modular_data
from .rootsys import RootSystemError, build_root_system
from .surgery import (
    CapExceeded,
    PlumbingForest,
    SurgeryError,
    admissible_leaves,
    blow_down,
    class_count,
    cohomology_classes,
    linking_matrix,
    load_plumbing,
    parse_class,
    random_forest,
    split_vanishing_check,
    tau,
)
from .rootsys import CenterGroup

WORK_CAP_ENV = "QGCAT_WORK_CAP"

DEFAULT_SWEEP = "A1:3-12,A2:4-10,B2:6-12,G2:7-12"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _work_cap(args) -> int:
    if getattr(args, "cap", None):
        return args.cap
    env = os.environ.get(WORK_CAP_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{WORK_CAP_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_WORK_CAP


def _spec(args):
    cartan = args.type or args.cartan
    r = args.r_opt if args.r_opt is not None else args.r
    if cartan is None or r is None:
        raise UsageError("a Cartan type and r are required (positional 'A1 6' or --type A1 --r 6)")
    return make_spec(cartan, int(r), args.zeta)


def _data(args):
    return build_modular_data(_spec(args), _work_cap(args))


def _emit(args, doc: dict, lines: list[str]) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _tuple(t) -> str:
    return "(" + ",".join(str(x) for x in t) + ")"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_info(args) -> int:
    spec = _spec(args)
    rs = spec.root_system
    c = rs.constants
    doc = {
        "cartan": str(rs.cartan_type),
        "d": c.d,
        "D": c.D,
        "G": list(c.center_invariants),
        "h": c.h,
        "h_dual": c.h_dual,
        "weyl_order": rs.weyl_order,
        "r": spec.r,
        "N": spec.N,
        "case": spec.case.value,
        "k": spec.k,
        "alcove_size": len(spec.simples),
        "gprime": list(spec.gprime_group.invariants),
    }
    lines = [
        f"type={doc['cartan']} d={c.d} D={c.D} G={rs.center} h={c.h} h_dual={c.h_dual} |W|={rs.weyl_order}",
        f"r={spec.r} N={spec.N} case={spec.case.value} k={spec.k}",
        f"alcove_size={len(spec.simples)} G'={spec.gprime_group}",
    ]
    _emit(args, doc, lines)
    return 0


def cmd_alcove(args) -> int:
    spec = _spec(args)
    orbit = []
    for g in spec.gprime:
        try:
            img = spec.gprime_dot(g, (0,) * spec.root_system.rank)
        except WallError:
            img = None
        orbit.append({"g": list(g.cls), "lift": [str(x) for x in g.lift], "g_dot_0": list(img) if img else None})
    doc = {
        "simples": [{"mu": list(mu), "grade": list(spec.grades[mu])} for mu in spec.simples],
        "gprime": orbit,
    }
    lines = [spec.alcove_dump()]
    for o in orbit:
        lines.append(f"g={_tuple(o['g'])} lift=({','.join(o['lift'])}) g.0={_tuple(o['g_dot_0']) if o['g_dot_0'] else 'wall'}")
    _emit(args, doc, lines)
    return 0


def _modular_lines(data: GradedModularData) -> list[str]:
    lines = [data.label, "mu grade qdim qdim~ twist_exp"]
    for i, mu in enumerate(data.simples):
        q = data.qdims[i]
        lines.append(f"{_tuple(mu)} {_tuple(data.grades[i])} [{q}] {q.to_complex().real:.12f} {data.twist_exps[i]}")
    lines.append("S-matrix:")
    for i, mu in enumerate(data.simples):
        lines.append(f"{_tuple(mu)}: " + " | ".join(str(x) for x in data.smat[i]))
    for g in data.group_elements:
        lines.append(
            f"grade {_tuple(g)}: Delta=[{data.delta[g]}] Delta+=[{data.delta_plus[g]}] Delta-=[{data.delta_minus[g]}]"
        )
    return lines


def cmd_modular_data(args) -> int:
    data = _data(args)
    doc = data.to_json()
    doc["block_dimension"] = {str(n): str(block_dimension(data, n)) for n in (1, 2)}
    _emit(args, doc, _modular_lines(data))
    return 0


def _report_lines(rep, extra: list[str]) -> list[str]:
    lines = [
        f"weakly_nondegenerate={str(rep.weakly_nondegenerate).lower()}",
        f"regular={str(rep.regular).lower()}",
        f"g_modular={str(rep.g_modular).lower()}",
        f"ungraded_modular={str(rep.ungraded_modular).lower()}",
        "transparent=" + " ".join(_tuple(mu) for mu in rep.transparent_simples),
    ]
    if rep.predicted:
        p = rep.predicted
        lines.append(
            f"predicted: weakly_nondegenerate={str(p.weakly_nondegenerate).lower()} "
            f"regular={str(p.regular).lower()} g_modular={str(p.g_modular).lower()} k={p.k}"
        )
    for key, val in rep.witnesses.items():
        lines.append(f"witness {key}={val}")
    return lines + extra


def cmd_check(args) -> int:
    spec = _spec(args)
    data = build_modular_data(spec, _work_cap(args))
    cv = cross_validate(spec, data)
    identities = check_all(data) if args.identities else {}
    failed = {k: v for k, v in identities.items() if v}
    doc = cv.computed.as_dict()
    doc["mismatches"] = cv.mismatches
    doc["identity_failures"] = failed
    extra = [f"mismatch {m}" for m in cv.mismatches]
    extra += [f"identity {k} failed: {v[:3]}" for k, v in failed.items()]
    extra.append("status=" + ("ok" if cv.ok and not failed else "mismatch"))
    _emit(args, doc, _report_lines(cv.computed, extra))
    return 0 if cv.ok and not failed else 1


def parse_sweep(text: str) -> list[tuple[str, int]]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            cartan, rng = part.split(":")
            if "-" in rng:
                lo, hi = (int(x) for x in rng.split("-"))
            else:
                lo = hi = int(rng)
        except ValueError:
            raise UsageError(f"bad sweep item {part!r}; expected TYPE:LO-HI") from None
        out.extend((cartan.strip(), r) for r in range(lo, hi + 1))
    return out


def _sweep_one(item):
    cartan, r, zeta, cap, identities = item
    try:
        spec = make_spec(cartan, r, zeta)
    except AlcoveError as exc:
        return {"spec": f"{cartan} r={r}", "skipped": str(exc)}
    data = build_modular_data(spec, cap)
    cv = cross_validate(spec, data)
    rep = cv.computed
    failed = {k: len(v) for k, v in check_all(data).items() if v} if identities else {}
    return {
        "spec": f"{cartan} r={r}",
        "case": spec.case.value,
        "simples": len(data.simples),
        "weakly_nondegenerate": rep.weakly_nondegenerate,
        "regular": rep.regular,
        "g_modular": rep.g_modular,
        "ungraded_modular": rep.ungraded_modular,
        "mismatches": cv.mismatches,
        "identity_failures": failed,
    }


def cmd_sweep(args) -> int:
    items = [(c, r, args.zeta, _work_cap(args), args.identities) for c, r in parse_sweep(args.specs)]
    if args.parallelism > 1:
        with ProcessPoolExecutor(max_workers=args.parallelism) as pool:
            results = list(pool.map(_sweep_one, items))
    else:
        results = []
        for it in items:
            print(f"sweep: {it[0]} r={it[1]}", file=sys.stderr)
            results.append(_sweep_one(it))
    bad = [res for res in results if res.get("mismatches") or res.get("identity_failures")]
    lines = []
    for res in results:
        if "skipped" in res:
            lines.append(f"{res['spec']}: skipped ({res['skipped']})")
            continue
        flags = " ".join(f"{k}={str(res[k]).lower()}" for k in ("weakly_nondegenerate", "regular", "g_modular", "ungraded_modular"))
        status = "ok" if res not in bad else f"MISMATCH {res['mismatches']} {res['identity_failures']}"
        lines.append(f"{res['spec']} {res['case']} n={res['simples']} {flags} {status}")
    lines.append(f"mismatching specs: {len(bad)}")
    _emit(args, {"results": results, "mismatching": len(bad)}, lines)
    return 1 if bad else 0


def _forest(args) -> PlumbingForest:
    if not args.plumbing:
        raise UsageError("--plumbing FILE is required")
    return load_plumbing(args.plumbing)


def cmd_tau(args) -> int:
    forest = _forest(args)
    data = _data(args)
    G = CenterGroup(data.group_invariants)
    xi = parse_class(args.cls or "", G)
    res = tau(forest, xi, data)
    doc = res.as_dict()
    doc["class"] = [list(a) for a in xi]
    z = res.value.to_complex()
    lines = [
        f"tau = {res.value}",
        f"decimal = {z.real:.12f} {z.imag:+.12f}i",
        f"sigma_plus={res.sigma_plus} sigma_minus={res.sigma_minus} b1={res.b1}",
    ]
    _emit(args, doc, lines)
    return 0


def cmd_classes(args) -> int:
    forest = _forest(args)
    cartan = args.type or args.cartan
    if cartan is None:
        raise UsageError("a Cartan type is required")
    rs = build_root_system(cartan)
    B = linking_matrix(forest)
    classes = cohomology_classes(B, rs.center, args.class_cap)
    expected = class_count(B, rs.center)
    doc = {"G": list(rs.center.invariants), "count": len(classes), "smith_count": expected,
           "classes": [[list(a) for a in c] for c in classes]}
    lines = [f"G={rs.center} classes={len(classes)} smith_count={expected}"]
    lines += [" ".join(_tuple(a) for a in c) for c in classes]
    _emit(args, doc, lines)
    return 0 if expected == len(classes) else 1


def cmd_split_check(args) -> int:
    forest = _forest(args)
    data = _data(args)
    rep = split_vanishing_check(forest, data, cap=args.class_cap)
    doc = {"regular": rep.regular_expected, "checked": rep.checked,
           "nonzero": [{"alpha": [list(a) for a in al], "value": str(v)} for al, v in rep.nonzero]}
    lines = [f"regular={str(rep.regular_expected).lower()} off_kernel_classes={rep.checked} nonzero={len(rep.nonzero)}"]
    for al, v in rep.nonzero[:10]:
        lines.append(f"nonzero alpha={' '.join(_tuple(a) for a in al)} value=[{v}]")
    if not rep.regular_expected:
        lines.append("note: data is not regular; nonzero values are expected")
    _emit(args, doc, lines)
    return 0 if rep.ok or not rep.regular_expected else 1


def kirby_check(data: GradedModularData, count: int, max_m: int, seed: int, framing_range: int = 3):
    """Random forests: tau invariant under every blow-down and a random relabeling."""
    rng = np.random.default_rng(seed)
    G = CenterGroup(data.group_invariants)
    stats = {"forests": 0, "blowdowns": 0, "relabelings": 0, "failures": []}
    while stats["forests"] < count:
        forest = random_forest(rng, int(rng.integers(1, max_m + 1)), framing_range)
        classes = cohomology_classes(linking_matrix(forest), G)
        xi = classes[int(rng.integers(0, len(classes)))]
        base = tau(forest, xi, data).value
        stats["forests"] += 1
        perm = [int(x) for x in rng.permutation(forest.m)]
        xi_p = [None] * forest.m
        for i, a in enumerate(xi):
            xi_p[perm[i]] = a
        stats["relabelings"] += 1
        if tau(forest.relabel(perm), xi_p, data).value != base:
            stats["failures"].append({"forest": forest.to_json(), "class": xi, "move": f"relabel {perm}"})
        for v in admissible_leaves(forest):
            f2, xi2 = blow_down(forest, v, xi)
            stats["blowdowns"] += 1
            if tau(f2, xi2, data).value != base:
                stats["failures"].append({"forest": forest.to_json(), "class": xi, "move": f"blow_down {v}"})
    return stats


def cmd_kirby_check(args) -> int:
    data = _data(args)
    stats = kirby_check(data, args.count, args.max_m, args.seed)
    lines = [
        f"forests={stats['forests']} blowdowns={stats['blowdowns']} relabelings={stats['relabelings']} "
        f"failures={len(stats['failures'])} seed={args.seed}"
    ]
    lines += [f"failure {f}" for f in stats["failures"][:10]]
    _emit(args, stats, lines)
    return 0 if not stats["failures"] else 1


def cmd_verify(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ModularDataError(f"cannot read {args.file}: {exc}") from exc
    data = GradedModularData.from_json(doc)
    rep = classify(data)
    extra = []
    status = 0
    if data.spec is not None:
        fresh = classify(build_modular_data(data.spec, _work_cap(args)))
        same = fresh.as_dict() == rep.as_dict()
        extra.append("roundtrip=" + ("identical" if same else "DIFFERENT"))
        status = 0 if same else 1
    doc = rep.as_dict()
    _emit(args, doc, _report_lines(rep, extra))
    return status


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qgcat", description="Modular data of quantum-group G-categories and plumbed 3-manifold invariants.")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["table", "json"], default="table")
    common.add_argument("--zeta", type=int, default=1, help="zeta = zeta_N ** ZETA, coprime to N")
    common.add_argument("--cap", type=int, default=None, help=f"work cap for S-matrix builds (env {WORK_CAP_ENV})")
    common.add_argument("--parallelism", type=int, default=1)
    common.add_argument("--seed", type=int, default=20240611)
    common.add_argument("--type", default=None, help="Cartan type (alternative to the positional)")
    common.add_argument("--r", dest="r_opt", type=int, default=None)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def spec_cmd(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("cartan", nargs="?")
        sp.add_argument("r", nargs="?", type=int)
        sp.set_defaults(fn=fn)
        return sp

    spec_cmd("info", cmd_info, "root-system constants, case and alcove size")
    spec_cmd("alcove", cmd_alcove, "simple objects with grades and the G' orbit of 0")
    spec_cmd("modular-data", cmd_modular_data, "qdims, twists, S-matrix and Gauss sums")
    sc = spec_cmd("check", cmd_check, "classify and compare with the arithmetic criteria")
    sc.add_argument("--identities", action="store_true", help="also run every exact identity check")
    sw = sub.add_parser("sweep", parents=[common], help="cross-validate a range of specs")
    sw.add_argument("specs", nargs="?", default=DEFAULT_SWEEP, help="e.g. 'A1:3-12,A2:4-10'")
    sw.add_argument("--identities", action="store_true")
    sw.set_defaults(fn=cmd_sweep)
    for name, fn, help_ in (
        ("tau", cmd_tau, "surgery invariant of a plumbing with a cohomology class"),
        ("classes", cmd_classes, "enumerate H^1(M; G) for a plumbing"),
        ("split-check", cmd_split_check, "omega brackets vanish off the kernel of B"),
    ):
        sp = spec_cmd(name, fn, help_)
        sp.add_argument("--plumbing", required=False)
        sp.add_argument("--class", dest="cls", default=None)
        sp.add_argument("--class-cap", type=int, default=10**6)
    kc = spec_cmd("kirby-check", cmd_kirby_check, "random blow-down and relabeling invariance of tau")
    kc.add_argument("--count", type=int, default=200)
    kc.add_argument("--max-m", type=int, default=6)
    vf = sub.add_parser("verify", parents=[common], help="re-ingest modular-data JSON and classify")
    vf.add_argument("file")
    vf.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "fn", None):
            raise UsageError("missing subcommand; see --help")
        return args.fn(args)
    except UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"error[cap]: {exc}", file=sys.stderr)
        return 2
    except SurgeryError as exc:
        print(f"error[plumbing]: {exc}", file=sys.stderr)
        return 2
    except (RootSystemError, AlcoveError) as exc:
        print(f"error[spec]: {exc}", file=sys.stderr)
        return 2
    except ModularDataError as exc:
        msg = str(exc)
        prefix = "cap" if "cap" in msg else "data"
        print(f"error[{prefix}]: {exc}", file=sys.stderr)
        return 2
    except CyclotomicError as exc:
        print(f"error[arith]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
