"""``nervecheck`` command-line tool.

Every subcommand builds a :class:`~nervecheck.report.RunReport` and prints
it as text (default) or JSON (``--json``).  Exit status: 0 when every
check passes, 1 when a check fails, 2 for unreadable input or bad usage.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Callable, Sequence

import numpy as np

from .covers import (
    Cover,
    lebesgue_number,
    mesh,
    nerve,
    order,
    refines,
    star_refines,
)
from .equivariant import (
    closed_star,
    component_count_check,
    distinguished_families,
    lemma5_dichotomy,
    lemma7_bruteforce,
    lemma7_family_sums,
    lemma7_sampled,
    make_action,
    newman_probe,
    orbit_quotient,
    verify_fiber_structure,
)
from .errors import NerveCheckError, ParseError, RegularityError
from .formats import (
    digest,
    load_tower,
    parse_complex,
    parse_cover,
    parse_generator,
    parse_manifest,
    parse_metric,
    read_text,
)
from .field import PrimeContext
from .homology import HomologyGroup
from .report import EXIT_INPUT, RunReport
from .simplicial import Chain, SimplicialComplex, boundary_matrix
from .tower import finite_inverse_limit, lemma6_support_check, verify_diagram

__all__ = ["main", "build_parser", "run"]


class UsageError(NerveCheckError):
    """Bad combination of command-line arguments."""


def _chain_summary(c: Chain) -> list:
    return [[list(s), int(a)] for s, a in c.items()]


class _Inputs:
    """Reads input files once and records their digests in argument order."""

    def __init__(self, report: RunReport):
        self.report = report

    def text(self, path: str) -> str:
        t = read_text(path)
        self.report.inputs[path] = digest(t)
        return t


def _complex_input(inputs: _Inputs, path: str, p_flag: int | None) -> tuple[int, SimplicialComplex]:
    p, K = parse_complex(inputs.text(path), path)
    if p_flag is not None:
        p = PrimeContext(p_flag).p
    return p, K


# -- homology ---------------------------------------------------------------


def cmd_homology(args) -> RunReport:
    rep = RunReport("homology")
    inputs = _Inputs(rep)
    p, K = _complex_input(inputs, args.complex, args.p)
    n = args.n
    rep.params.update(n=n, p=p)
    H = HomologyGroup(K, n, p)
    rep.results["f_vector"] = list(K.f_vector())
    rep.results["rank"] = H.rank
    rep.results["basis"] = [_chain_summary(z) for z in H.representative_chains()]
    dd_ok = all(
        not np.any((boundary_matrix(K, m, p) @ boundary_matrix(K, m + 1, p)).data) for m in range(1, K.dim + 1)
    )
    rep.check("boundary_squared_zero", dd_ok, f"all degrees 1..{K.dim}", "simplicial.boundary_matrix")
    reps_ok = all(H.is_cycle_vector(v) for v in H.representatives)
    rep.check("representatives_are_cycles", reps_ok, f"{H.rank} representative(s)", "homology.HomologyGroup")
    return rep


# -- lemma7 -----------------------------------------------------------------


def cmd_lemma7(args) -> RunReport:
    rep = RunReport("lemma7")
    if args.p is None:
        raise UsageError("lemma7 needs --p")
    mode = args.mode
    rep.params.update(p=args.p, k=args.k, mode=mode)
    t0 = time.perf_counter()
    if mode == "exhaustive":
        r = lemma7_bruteforce(args.p, args.k, workers=args.workers)
    else:
        rep.params.update(samples=args.samples, seed=args.seed)
        r = lemma7_sampled(args.p, args.k, samples=args.samples, seed=args.seed)
    elapsed = time.perf_counter() - t0
    rep.results.update(
        vector_length=args.p**args.k,
        scanned=r.scanned,
        zero_solutions=r.zero_solutions,
        fixed_solutions=r.fixed_solutions,
        zero_space_rank=r.zero_space_rank,
        fixed_space_rank=r.fixed_space_rank,
        counterexample_count=len(r.counterexamples),
    )
    rep.check(
        "coefficient_sum_vanishes",
        not r.counterexamples,
        f"{len(r.counterexamples)} counterexample(s)",
        f"equivariant.lemma7_{'bruteforce' if mode == 'exhaustive' else 'sampled'}",
    )
    rep.check(
        "sigma_zero_congruences",
        not r.congruence_violations,
        f"{len(r.congruence_violations)} violation(s)",
        "equivariant.lemma7_bruteforce",
    )
    rep.check(
        "counts_match_ranks",
        r.counts_match_ranks if mode == "exhaustive" else None,
        "solution counts equal p**rank" if mode == "exhaustive" else "sampled mode",
        "equivariant.Lemma7Report",
    )
    rep.counterexamples = r.counterexamples + r.congruence_violations
    rep._elapsed = {"scan": elapsed}
    return rep


# -- action -----------------------------------------------------------------


def cmd_action(args) -> RunReport:
    rep = RunReport("action")
    inputs = _Inputs(rep)
    p, K = _complex_input(inputs, args.complex, args.p)
    gen = parse_generator(args.generator, K)
    if not args.generator.startswith("shift:"):
        rep.inputs[args.generator] = digest(read_text(args.generator))
    rep.params.update(generator=args.generator, order=args.order, j=args.j, p=p)
    space = None
    if args.metric:
        space = parse_metric(inputs.text(args.metric), args.metric)
    a = make_action(K, gen, args.order, p, regular=False)
    rep.results["k"] = a.k
    n = K.dim if args.n is None else args.n
    rep.params["n"] = n

    try:
        model = orbit_quotient(a, args.j)
    except RegularityError as exc:
        model = None
        rep.results["quotient"] = f"not simplicial: {exc}"
        rep.check("quotient_simplicial", None, str(exc), "equivariant.orbit_quotient")

    if model is not None:
        Q = model.quotient
        rep.results["quotient_f_vector"] = list(Q.f_vector())
        fams = distinguished_families(model, n)
        rep.results["families"] = [
            [list(img), [list(s) for s in mem]] for img, mem in fams.families.items()
        ]
        sizes = sorted(set(fams.cardinalities().values()))
        rep.results["family_sizes"] = sizes
        subgroup_order = len(a.subgroup(args.j))
        rep.check(
            "families_are_orbits",
            sizes == [subgroup_order],
            f"{len(fams.families)} families of size {subgroup_order}",
            "equivariant.distinguished_families",
        )
        fiber_ok = True
        fiber_rows = []
        count_rows = []
        for s in Q.all_simplices():
            base = closed_star(Q, s)
            fr = verify_fiber_structure(model, base)
            fiber_rows.append([list(s), fr.count, fr.exponent])
            fiber_ok &= fr.ok
            cc = component_count_check(model, s, base)
            if cc.status != "inapplicable":
                count_rows.append([list(s), cc.m_x, cc.m_y, cc.expected, cc.meet_counts, cc.status])
        rep.results["fiber_components"] = fiber_rows
        rep.results["component_counts"] = count_rows
        rep.check("fiber_structure", fiber_ok, f"{len(fiber_rows)} closed stars", "equivariant.verify_fiber_structure")
        rep.check(
            "component_meeting_counts",
            all(r[-1] == "ok" for r in count_rows) if count_rows else None,
            f"{len(count_rows)} pair(s)",
            "equivariant.component_count_check",
        )
    else:
        fams = None

    H = HomologyGroup(K, n, p)
    dich = []
    dich_ok = True
    sums_ok: bool | None = None
    for i, z in enumerate(H.representative_chains()):
        res = lemma5_dichotomy(z, a)
        dich.append([i, res.verdict, res.homology_branch])
        dich_ok &= res.verdict != "neither" and res.consistent is not False
        if fams is not None and args.j == 1 and res.verdict == "zero":
            sums = lemma7_family_sums(z, fams)
            zero = all(v == 0 for v in sums.values())
            sums_ok = zero if sums_ok is None else (sums_ok and zero)
            rep.results.setdefault("family_sums", []).append([i, [[list(s), v] for s, v in sums.items()]])
    rep.results["homology_rank"] = H.rank
    rep.results["sigma_dichotomy"] = dich
    rep.check("sigma_dichotomy", dich_ok if dich else None, f"{len(dich)} generator(s)", "equivariant.lemma5_dichotomy")
    rep.check(
        "family_sums_vanish",
        sums_ok,
        "sigma z = 0 generators, j = 1" if sums_ok is not None else "needs j = 1 and a sigma z = 0 generator",
        "equivariant.lemma7_family_sums",
    )

    if space is not None:
        diam, arg = newman_probe(a, space, args.j)
        rep.results["newman_probe"] = {"max_fiber_diameter": diam, "vertex": arg}
    return rep


# -- tower ------------------------------------------------------------------


def cmd_tower(args) -> RunReport:
    rep = RunReport("tower")
    text = read_text(args.manifest)
    rep.inputs[args.manifest] = digest(text)
    man = parse_manifest(text, args.manifest)
    p = man.p if args.p is None else args.p
    n = args.n if args.n is not None else (man.n if man.n is not None else 1)
    t, digests = load_tower(man, strict=False)
    rep.inputs.update(digests)
    depth = t.depth if args.depth is None else args.depth
    rep.params.update(n=n, p=p, depth=min(max(1, depth), t.depth))
    t = t.truncate(depth)
    diag = verify_diagram(t, n, p)
    rep.results["orders"] = t.orders()
    for c in diag.cells:
        rep.check(f"stage{c.stage}: {c.name}", c.ok, "", "tower.verify_diagram")
    if t.mismatches:
        rep.results["factorization_mismatches"] = {m: v[:10] for m, v in sorted(t.mismatches.items())}
    lim = finite_inverse_limit(t, n, p)
    rep.results["stage_ranks"] = lim.stage_ranks
    rep.results["limit_rank"] = lim.limit_rank
    rep.results["thread_space_rank"] = lim.thread_space_rank
    rep.results["rank_by_depth"] = lim.rank_by_depth
    rep.results["threads"] = [
        [[int(x) for x in c] for c in th.coordinates] for th in lim.threads
    ]
    rep.results["thread_supports"] = [[len(z.support()) for z in th.cycles] for th in lim.threads]
    rep.check("threads_compatible", all(lim.compatible(th) for th in lim.threads), "", "tower.finite_inverse_limit")
    if lim.limit_rank == 1 and p > 2:
        th = lim.threads[0]
        doubled = th.scale(2)
        ok = all(lemma6_support_check(th, doubled, m) for m in range(t.depth) if not th.is_zero_at(m))
        rep.check("lemma6_support", ok, "generator thread against its double", "tower.lemma6_support_check")
    else:
        rep.check("lemma6_support", None, f"limit rank {lim.limit_rank}, p={p}", "tower.lemma6_support_check")
    return rep


# -- nerve / cover-check -------------------------------------------------------


def _cover_input(inputs: _Inputs, path: str, space) -> Cover:
    return parse_cover(inputs.text(path), path, space)


def cmd_nerve(args) -> RunReport:
    rep = RunReport("nerve")
    inputs = _Inputs(rep)
    space = parse_metric(inputs.text(args.metric), args.metric) if args.metric else None
    c = _cover_input(inputs, args.cover, space)
    N = nerve(c)
    rep.params["p"] = args.p if args.p is not None else 2
    rep.results["names"] = list(N.names)
    rep.results["order"] = order(c)
    rep.results["f_vector"] = list(N.complex.f_vector())
    rep.results["maximal_simplices"] = [list(s) for s in N.complex.maximal_simplices()]
    rep.results["betti"] = [HomologyGroup(N.complex, m, rep.params["p"]).rank for m in range(N.complex.dim + 1)]
    if space is not None:
        rep.results["mesh"] = mesh(c)
        rep.results["lebesgue_number"] = lebesgue_number(c)
    return rep


def cmd_cover_check(args) -> RunReport:
    rep = RunReport("cover-check")
    inputs = _Inputs(rep)
    space = parse_metric(inputs.text(args.metric), args.metric) if args.metric else None
    fine = _cover_input(inputs, args.cover, space)
    rep.results["order"] = order(fine)
    if space is not None:
        rep.results["mesh"] = mesh(fine)
        rep.results["lebesgue_number"] = lebesgue_number(fine)
    if args.coarse:
        coarse = _cover_input(inputs, args.coarse, space)
        sr = star_refines(fine, coarse)
        rep.results["star_witness"] = sr.witness
        rep.results["refines"] = refines(fine, coarse)
        rep.check(
            "star_refines",
            sr.ok,
            f"{len(sr.failures)} element(s) without a witness" if sr.failures else "",
            "covers.star_refines",
        )
        if space is not None:
            rep.results["coarse_lebesgue_number"] = lebesgue_number(coarse)
            rep.results["coarse_mesh"] = mesh(coarse)
    return rep


# -- driver -----------------------------------------------------------------

COMMANDS: dict[str, Callable] = {
    "homology": cmd_homology,
    "lemma7": cmd_lemma7,
    "action": cmd_action,
    "tower": cmd_tower,
    "nerve": cmd_nerve,
    "cover-check": cmd_cover_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=None, help="prime (overrides a file header)")
    common.add_argument("--json", action="store_true", help="print a machine-readable JSON report")
    common.add_argument("--timings", action="store_true", help="append wall-clock timings (not reproducible)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    parser = argparse.ArgumentParser(prog="nervecheck", description="Finite checks of the Z_p machinery behind a free p-adic action argument.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("homology", parents=[common], help="H_n of a complex over Z_p")
    s.add_argument("complex")
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("lemma7", parents=[common], help="circulant sigma scan")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--samples", type=int, default=100_000)

    s = sub.add_parser("action", parents=[common], help="analyse a cyclic action")
    s.add_argument("complex")
    s.add_argument("--generator", required=True, help="'shift:<s>' or a vertex-map file")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--j", type=int, default=1, help="quotient by the subgroup of order p**j")
    s.add_argument("--n", type=int, default=None, help="degree (default: complex dimension)")
    s.add_argument("--metric", default=None)

    s = sub.add_parser("tower", parents=[common], help="diagram and finite inverse limit of a tower")
    s.add_argument("manifest")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--depth", type=int, default=None)

    s = sub.add_parser("nerve", parents=[common], help="nerve of a cover")
    s.add_argument("cover")
    s.add_argument("--metric", default=None)

    s = sub.add_parser("cover-check", parents=[common], help="order, Lebesgue number, mesh, star refinement")
    s.add_argument("cover")
    s.add_argument("--coarse", default=None)
    s.add_argument("--metric", default=None)
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Run one command; returns (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (int(exc.code or 0), "", "")
    t0 = time.perf_counter()
    try:
        rep = COMMANDS[args.command](args)
    except ParseError as exc:
        return EXIT_INPUT, "", f"nervecheck: parse error: {exc}\n"
    except NerveCheckError as exc:
        return EXIT_INPUT, "", f"nervecheck: {type(exc).__name__}: {exc}\n"
    if args.timings:
        rep.timings = dict(getattr(rep, "_elapsed", {}))
        rep.timings["total"] = time.perf_counter() - t0
    out = rep.to_json() if args.json else rep.to_text()
    return rep.exit_code, out, ""


def main(argv: Sequence[str] | None = None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
