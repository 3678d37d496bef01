"""All checks for one convex proximity graph, as flat result rows."""
from __future__ import annotations

from .bounds import crossing_sweep, dnc_edge_bound
from .decompose import Decomposition, NotPathRestrictedError, decompose_full
from .obg import STRUCTURE_LEMMAS, is_prbg, verify_structure
from .proximity import GeoGraph
from .udg import MODULE_LEMMAS, DISTANCE_WITNESS, detect_forbidden_udg_patterns, detect_modules, verify_module_lemma

PASS, FAIL, NA, INFO = "pass", "fail", "n/a", "info"


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def witness_bundle(g: GeoGraph, reason: str, decomposition: Decomposition | None = None, **extra) -> dict:
    from .io import bundle_dict

    return bundle_dict(g, reason, decomposition, **extra)


def _geometry_maps(d: Decomposition, which: int):
    """Index maps from an OBG of the decomposition back to source points."""
    us, vs = list(d.u_map), list(d.v_map)
    if which == 2:
        us, vs = us[::-1], vs[::-1]
    return us, vs


def check_instance(g: GeoGraph, is_udg: bool):
    """Run the whole pipeline; returns (rows, bundles, counters).

    Each row is (check, value, bound, status). Counters tally separator
    checks and pattern occurrences for corpus-level criteria.
    """
    rows: list[tuple] = []
    bundles: list[dict] = []
    counters = {"instances": 1, "separator_checks": 0, "pattern_occurrences": 0, "prbgs": 0}
    n = g.n
    if is_udg:
        rows.append(("edges<=3n", len(g.edges), 3 * n, _status(len(g.edges) <= 3 * n)))
    try:
        d = decompose_full(g, check=False)
    except Exception as exc:  # noqa: BLE001 - any pipeline crash is a reportable failure
        rows.append(("decompose", type(exc).__name__, None, FAIL))
        bundles.append(witness_bundle(g, f"decompose raised {exc}"))
        return rows, bundles, counters
    rows.append(("noncrossing_dropped<=2n", len(d.noncrossing_dropped), 2 * n, _status(len(d.noncrossing_dropped) <= 2 * n)))
    rows.append(("total_dropped<=3n", d.total_dropped, 3 * n, _status(d.total_dropped <= 3 * n)))
    rows.append(("edge_accounting", len(d.accounted_edges()), len(g.edges),
                 _status(d.accounted_edges() == sorted(g.edges))))
    for which, h in ((1, d.g1), (2, d.g2)):
        tag = f"g{which}"
        res = is_prbg(h)
        rows.append((f"{tag}.prbg", len(h.edges), None, _status(res.ok)))
        if not res:
            bundles.append(witness_bundle(g, f"{tag} is not path restricted", d, graph=tag,
                                          path=[str(x) for x in res.path], back_edge=res.back_edge))
            continue
        counters["prbgs"] += 1
        for lemma in STRUCTURE_LEMMAS:
            rep = verify_structure(h, lemma, assume_prbg=True)
            rows.append((f"{tag}.{lemma}", rep.checks, None, _status(rep.passed)))
            if not rep.passed:
                bundles.append(witness_bundle(g, f"{tag} {lemma} failed", d, graph=tag,
                                              counterexample=repr(rep.counterexample)))
        sweep = crossing_sweep(h)
        counters["separator_checks"] += sweep.checks
        rows.append((f"{tag}.crossing", sweep.checks, None, _status(sweep.passed)))
        if not sweep.passed:
            bundles.append(witness_bundle(g, f"{tag} separator bound failed", d, graph=tag,
                                          counterexample=sweep.failures[:10]))
        cert = dnc_edge_bound(h, check=False)
        rows.append((f"{tag}.certificate_sound", cert.total_bound, cert.actual_edges, _status(cert.sound)))
        rows.append((f"{tag}.certificate<=nlogn+4n", cert.total_bound, round(cert.reference, 3),
                     _status(cert.within_reference)))
        patterns = detect_forbidden_udg_patterns(h)
        counters["pattern_occurrences"] += len(patterns)
        if is_udg:
            rows.append((f"{tag}.forbidden_patterns", len(patterns), 0, _status(not patterns)))
            if patterns:
                bundles.append(witness_bundle(g, f"{tag} contains a forbidden pattern", d, graph=tag,
                                              counterexample=patterns[:10]))
            split = detect_modules(h, check=False)
            rows.append((f"{tag}.modules", len(split.modules), None, INFO))
            us, vs = _geometry_maps(d, which)
            for lemma in MODULE_LEMMAS:
                extra = {"points": g.points, "u_points": us, "v_points": vs} if lemma == DISTANCE_WITNESS else {}
                rep = verify_module_lemma(h, split, lemma, **extra)
                value = rep.value if rep.value is not None else rep.checks
                rows.append((f"{tag}.{lemma}", value, None, _status(rep.passed)))
                if not rep.passed:
                    bundles.append(witness_bundle(g, f"{tag} {lemma} failed", d, graph=tag,
                                                  counterexample=repr(rep.counterexample)))
        else:
            rows.append((f"{tag}.patterns", len(patterns), None, INFO))
    return rows, bundles, counters
