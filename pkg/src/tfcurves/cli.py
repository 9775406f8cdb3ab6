"""Batch command-line surface.

Every command prints machine-readable records to stdout (JSON by
default, one object per line; CSV with --format csv) and diagnostics
to stderr.  All randomness sits behind --seed (default 1), so every
invocation is reproducible from its command line alone.  Exit codes:
0 success, 1 verification mismatch, 2 usage error, 3 resource cap.

Census/sample targets are comma-separated intersections of atoms,
each optionally negated with a leading '!':

  tL[:j]     restriction to line j is not squarefree (default j=0)
  sQ[:i]     singular at rational point i (default i=0)
  tLP[:j:i]  tangent to line j at rational point i (must be incident;
             default: line 0 at its first point)
  aL[:j:i]   tangent to line j at point i but smooth there
  a0[:i]     tangent to no line at rational point i
  TF         no line is transverse
  smooth     smooth curve (excludes the zero form)
  F          smooth and transverse-free
  all        every form

Indices refer to the deterministic global enumeration order of points
and lines (see the pg2 module).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import curve_tests, density, forms, gf, levi, pg2, synth
from .gf import CapExceeded

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_CAP = 3

_PERMANENTS = {2: 24, 3: 3852, 4: 18534400, 5: 4598378639550}
_DEFAULT_SEED = 1


def _emit(records, fmt: str) -> None:
    if not isinstance(records, list):
        records = [records]
    if fmt == "json":
        for rec in records:
            print(json.dumps(rec, sort_keys=True))
        return
    cols: list[str] = []
    for rec in records:
        for key in rec:
            if key not in cols:
                cols.append(key)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols, restval="")
    writer.writeheader()
    for rec in records:
        writer.writerow({k: _csv_cell(v) for k, v in rec.items()})
    sys.stdout.write(buf.getvalue())


def _csv_cell(v):
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return v


def _point(ctx, i: int) -> pg2.ProjPoint:
    pts = pg2.enumerate_points(ctx)
    if not 0 <= i < len(pts):
        raise ValueError(f"point index {i} out of range 0..{len(pts) - 1}")
    return pts[i]


def _line(ctx, j: int) -> pg2.ProjLine:
    lines = pg2.enumerate_lines(ctx)
    if not 0 <= j < len(lines):
        raise ValueError(f"line index {j} out of range 0..{len(lines) - 1}")
    return lines[j]


def parse_target(q: int, d: int, text: str) -> density.CurveSet:
    """Build the predicate named by a target string (see module help)."""
    ctx = gf.ctx_for_q(q)
    parts = []
    for raw in text.split(","):
        raw = raw.strip()
        if not raw:
            raise ValueError("empty target atom")
        negate = raw.startswith("!")
        atom = raw[1:] if negate else raw
        fields = atom.split(":")
        name, idx = fields[0], fields[1:]
        try:
            idx = [int(v) for v in idx]
        except ValueError:
            raise ValueError(f"non-integer index in target atom {raw!r}")
        if name == "tL" and len(idx) <= 1:
            part = density.non_transverse(ctx, d, _line(ctx, *(idx or [0])))
        elif name == "sQ" and len(idx) <= 1:
            part = density.singular_at(ctx, d, _point(ctx, *(idx or [0])))
        elif name in ("tLP", "aL") and len(idx) in (0, 2):
            if idx:
                line, point = _line(ctx, idx[0]), _point(ctx, idx[1])
            else:
                line = _line(ctx, 0)
                point = next(P for P in pg2.enumerate_points(ctx)
                             if pg2.incident(P, line))
            if not pg2.incident(point, line):
                raise ValueError(f"target {raw!r}: point is not on the line")
            maker = (density.tangent_at if name == "tLP"
                     else density.tangent_only_to)
            part = maker(ctx, d, line, point)
        elif name == "a0" and len(idx) <= 1:
            part = density.untangent_all_lines_at(ctx, d,
                                                  _point(ctx, *(idx or [0])))
        elif name == "TF" and not idx:
            part = density.transverse_free(ctx, d)
        elif name == "smooth" and not idx:
            part = density.SmoothSet(ctx, d)
        elif name == "F" and not idx:
            part = density.smooth_transverse_free(ctx, d)
        elif name == "all" and not idx:
            part = density.Everything(ctx, d)
        else:
            raise ValueError(f"unknown target atom {raw!r}")
        parts.append(density.Not(part) if negate else part)
    return parts[0] if len(parts) == 1 else density.And(*parts)


# ---------------------------------------------------------------------------
# commands


def cmd_permanent(args) -> tuple[list[dict], int]:
    if args.q not in _PERMANENTS:
        raise ValueError("permanent supports q in {2, 3, 4, 5}")
    if args.q == 5 and not args.allow_long:
        raise ValueError(
            "q=5 is a long run (minutes to an hour); pass --allow-long, "
            "optionally with --checkpoint FILE to make it resumable")
    im = levi.incidence_matrix(args.q)
    t0 = time.perf_counter()
    value = levi.permanent_ryser(im, threads=args.threads,
                                 checkpoint=args.checkpoint)
    elapsed = (time.perf_counter() - t0) * 1000
    n, k = im.n, args.q + 1
    rec = {
        "kind": "permanent",
        "q": args.q,
        "n": n,
        "permanent": value,
        "schrijver_bound": float(levi.schrijver_bound(n, k)),
        "euler_bound": float(levi.euler_bound(n, k)),
        "elapsed_ms": round(elapsed, 3),
    }
    return [rec], EXIT_OK


def cmd_census(args) -> tuple[list[dict], int]:
    predicate = parse_target(args.q, args.d, args.target)
    try:
        est = density.census(args.q, args.d, predicate,
                             threads=args.threads)
    except CapExceeded as exc:
        raise CapExceeded(
            f"{exc}; use the sample command (Monte Carlo) instead")
    return [est.to_record()], EXIT_OK


def cmd_sample(args) -> tuple[list[dict], int]:
    predicate = parse_target(args.q, args.d, args.target)
    est = density.monte_carlo(args.q, args.d, predicate, args.samples,
                              args.seed)
    return [est.to_record()], EXIT_OK


def cmd_bounds(args) -> tuple[list[dict], int]:
    return [density.bounds_report(args.q).to_record()], EXIT_OK


def cmd_inequalities(args) -> tuple[list[dict], int]:
    reports = density.inequality_suite(args.q_max)
    records = [r.to_record() for r in reports]
    code = EXIT_OK if all(r.ok for r in reports) else EXIT_MISMATCH
    return records, code


def cmd_synth(args) -> tuple[list[dict], int]:
    im = levi.incidence_matrix(args.q)
    found = list(levi.enumerate_matchings(im, limit=args.matching + 1))
    if len(found) <= args.matching:
        raise ValueError(
            f"only {len(found)} matchings exist; index {args.matching} "
            "is out of range")
    rec = synth.synth_record(args.q, args.d, found[args.matching],
                             args.seed, args.max_attempts)
    return [rec], EXIT_OK


# ---------------------------------------------------------------------------
# verify: the whole known-value suite


def _checked(name: str, ok: bool, **extra) -> dict:
    rec = {"check": name, "ok": bool(ok)}
    rec.update(extra)
    return rec


def _verify_checks(threads):
    t = time.perf_counter

    t0 = t()
    for q in (2, 3, 4):
        value = levi.permanent_ryser(levi.incidence_matrix(q),
                                     threads=threads)
        yield _checked(f"permanent q={q}", value == _PERMANENTS[q],
                       got=value, want=_PERMANENTS[q],
                       elapsed_ms=round((t() - t0) * 1000, 1))
        t0 = t()

    for q in (2, 3):
        ctx = gf.ctx_for_q(q)
        ok = (forms.count_nonsquarefree(ctx, 1) == 1
              and forms.count_nonsquarefree(ctx, 2) == q * q)
        yield _checked(f"non-squarefree base counts q={q}", ok)
        for d in (3, 4, 5):
            got = forms.count_nonsquarefree(ctx, d)
            want = q ** d + q ** (d - 1) - q ** (d - 2)
            yield _checked(f"non-squarefree count q={q} d={d}", got == want,
                           got=got, want=want)

    for q, d in ((2, 3), (2, 4), (3, 3)):
        ctx = gf.ctx_for_q(q)
        line = pg2.enumerate_lines(ctx)[0]
        t0 = t()
        est = density.census(q, d, density.non_transverse(ctx, d, line),
                             threads=threads)
        want = density.tangency_density_limit(q)
        yield _checked(f"single-line tangency census q={q} d={d}",
                       est.estimate == want,
                       got=f"{est.hits}/{est.total}", want=str(want),
                       elapsed_ms=round((t() - t0) * 1000, 1))

    # two tangent lines at their crossing = singular there (q=2, d=3)
    ctx = gf.ctx_for_q(2)
    Q = pg2.enumerate_points(ctx)[0]
    ls = pg2.lines_through(Q)
    total = 2 ** forms.num_coeffs(3)
    block = density._Block.from_indices(ctx, 3, 0, total)
    sing = density.singular_at(ctx, 3, Q).mask(block)
    ok = True
    for a in range(len(ls)):
        for b in range(a + 1, len(ls)):
            both = density.And(density.tangent_at(ctx, 3, ls[a], Q),
                               density.tangent_at(ctx, 3, ls[b], Q))
            if not (both.mask(block) == sing).all():
                ok = False
    yield _checked("crossing-tangency identity q=2 d=3", ok,
                   forms_checked=total)

    suite = density.inequality_suite(9)
    by_q = {r.q: r for r in suite}
    yield _checked("inequality suite q<=9", all(r.ok for r in suite))
    yield _checked("h(2) exact", by_q[2].h == Fraction(91854, 78125),
                   got=str(by_q[2].h))
    yield _checked("xi(2) prefix", f"{float(by_q[2].xi):.7f}" == "7.4915409",
                   got=f"{float(by_q[2].xi):.7f}")

    b2, b3 = density.bounds_report(2), density.bounds_report(3)
    yield _checked("bertini prefix q=2",
                   f"{float(b2.bertini_lower):.4f}" == "0.1485",
                   got=f"{float(b2.bertini_lower):.4f}")
    yield _checked("bertini prefix q=3",
                   str(float(b3.bertini_lower))[:10] == "0.99988803",
                   got=str(float(b3.bertini_lower))[:12])
    yield _checked("bound ordering q=2",
                   float(b2.lower) <= b2.upper_precise <= b2.upper75)

    for q in (2, 3):
        lim = float(density.tangency_density_limit(q))
        prev, ok = -1.0, True
        for r in range(1, 21):
            v = float(density.truncated_tangency_product(q, r))
            if not prev < v < lim:
                ok = False
            prev = v
        yield _checked(f"truncated product q={q}",
                       ok and lim - prev < 1e-6,
                       r20_gap=f"{lim - prev:.2e}")

    t0 = t()
    im = levi.incidence_matrix(2)
    matching = next(iter(levi.enumerate_matchings(im, limit=1)))
    out = synth.sample_transverse_free(2, 4, matching, seed=_DEFAULT_SEED)
    ok = (isinstance(out, forms.TernaryForm)
          and curve_tests.is_transverse_free(out)
          and curve_tests.is_smooth(out, degree_cap=4, q_cap=4))
    yield _checked("synth round-trip q=2 d=4", ok,
                   form=forms.serialize(out) if ok else None,
                   elapsed_ms=round((t() - t0) * 1000, 1))


def cmd_verify(args) -> tuple[list[dict], int]:
    records = list(_verify_checks(args.threads))
    code = EXIT_OK if all(r["ok"] for r in records) else EXIT_MISMATCH
    return records, code


# ---------------------------------------------------------------------------
# argument plumbing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfcurves",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--format", choices=("json", "csv"), default="json",
                        help="output format (default json)")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for censuses and permanents "
                             "(default: TFCURVES_THREADS or cpu count); "
                             "never changes results")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("permanent", help="exact incidence-matrix permanent")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--allow-long", action="store_true",
                   help="permit the q=5 run (minutes to an hour)")
    p.add_argument("--checkpoint", default=None,
                   help="resumable partial-sum file for long runs")
    p.set_defaults(handler=cmd_permanent)

    p = sub.add_parser("census", help="exact density over all forms")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--target", default="tL")
    p.set_defaults(handler=cmd_census)

    p = sub.add_parser("sample", help="Monte Carlo density estimate")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--target", default="tL")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=_DEFAULT_SEED)
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("bounds", help="closed-form density bounds at one q")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("inequalities",
                       help="h/psi/xi values and claims for q <= q-max")
    p.add_argument("--q-max", type=int, default=9)
    p.set_defaults(handler=cmd_inequalities)

    p = sub.add_parser("synth",
                       help="sample a smooth curve tangent to every line")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=_DEFAULT_SEED)
    p.add_argument("--matching", type=int, default=0,
                   help="index into the matching enumeration (default 0)")
    p.add_argument("--max-attempts", type=int, default=1000)
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("verify",
                       help="run the whole known-value suite")
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        records, code = args.handler(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(records, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
