"""Command-line front end: classification, attractor reports, orbit dumps,
parameter-plane rasters, verification suites, and boundary-curve tables.

Exit codes: 0 success, 1 usage or I/O error, 2 boundary or degenerate
parameters (or unmet region prerequisites), 3 verification failure.

Raster output is binary PPM (P6, maxval 255) with a fixed, versioned
palette written to a sidecar legend file; pixel centers are classified,
with k increasing left to right and r increasing bottom to top.  All
CSV uses a header row, comma separator, '.' decimal, LF line endings.
The environment variable SKEWTENT_THREADS caps raster row parallelism.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .attractors import Attractor, AttractorKind, attractor as build_attractor
from .core import MapParams, iterate_f, trapping_interval
from .errors import (
    DepthOverflow,
    InvalidMap,
    NoBoundedOrbit,
    NotClassified,
    NotReducible,
    OutOfDomain,
    PrecisionLoss,
    WrongRegion,
)
from .regions import (
    DEFAULT_P_MAX,
    DEFAULT_TAU,
    K_threshold,
    K_wall,
    L_curve,
    N_curve,
    Region,
    RegionTag,
    alpha_threshold,
    beta_threshold,
    classify,
    gamma_threshold,
    rho,
    t_poly,
)
from .verify import basin_experiment, check_invariance, covering_test, CoveredAt, lyapunov

PALETTE_VERSION = "v1"

_BASE_PALETTE = {
    "Trivial": (0, 0, 0),
    "FixedPoint": (128, 128, 128),
    "TwoCycle": (0, 158, 115),
    "FullIntervalChaos": (0, 114, 178),
    "EscapeCantor": (240, 240, 240),
    "Boundary": (255, 255, 255),
}
_WINDOW_PALETTE = {
    "R1": (240, 210, 60),
    "R2": (86, 119, 233),
    "R3": (217, 83, 79),
    "R4": (60, 170, 85),
}


def palette_rgb(tag: RegionTag) -> tuple[int, int, int]:
    """Fixed region -> RGB table; cascade depth shades the red channel."""
    if tag.region is Region.CASCADE:
        shade = min(tag.p - 1, 8)
        return (213 - 15 * shade, 36 + 10 * shade, 36)
    if tag.region is Region.WINDOW:
        return _WINDOW_PALETTE[tag.sub]
    return _BASE_PALETTE[tag.region.value]


def _legend_text() -> str:
    lines = [f"skewtent raster palette {PALETTE_VERSION}",
             "pixel centers: k = kmin + (col+0.5)*dk, r = rmax - (row+0.5)*dr"]
    for name, rgb in _BASE_PALETTE.items():
        lines.append(f"{name}: {rgb[0]},{rgb[1]},{rgb[2]}")
    lines.append("Cascade p: (213-15*s, 36+10*s, 36) with s = min(p-1, 8)")
    for sub, rgb in _WINDOW_PALETTE.items():
        lines.append(f"Window {sub}: {rgb[0]},{rgb[1]},{rgb[2]}")
    return "\n".join(lines) + "\n"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on bad flags, not argparse's default 2
        raise UsageError(message)


def describe(tag: RegionTag) -> str:
    if tag.region is Region.FIXED_POINT:
        return "FixedPoint (attracting fixed point)"
    if tag.region is Region.TWO_CYCLE:
        return "TwoCycle (attracting period-2 orbit)"
    if tag.region is Region.FULL_CHAOS:
        return "FullIntervalChaos (chaotic on [1-k,1])"
    if tag.region is Region.ESCAPE:
        return "EscapeCantor (almost every orbit escapes; chaotic Cantor repeller)"
    if tag.region is Region.CASCADE:
        capped = "" if tag.terminal else ", depth capped"
        return f"Cascade p={tag.p} (chaotic band attractor, {2 ** tag.p} bands{capped})"
    if tag.region is Region.WINDOW:
        m = tag.m
        blurb = {
            "R1": f"attracting period-{m + 1} orbit",
            "R2": f"chaotic band attractor, {m + 1} bands",
            "R3": f"chaotic band attractor, {2 * m + 2} bands",
            "R4": "chaotic on [1-k,1]",
        }[tag.sub]
        return f"Window m={m} sub={tag.sub} ({blurb})"
    return f"Boundary[{tag.which}]"


def _region_payload(tag: RegionTag) -> dict:
    payload = {"tag": tag.region.value}
    if tag.region is Region.CASCADE:
        payload["p"] = tag.p
        payload["terminal"] = tag.terminal
    elif tag.region is Region.WINDOW:
        payload["m"] = tag.m
        payload["sub"] = tag.sub
    elif tag.region is Region.BOUNDARY:
        payload["which"] = tag.which
    return payload


def _boundary_distances(params: MapParams, tag: RegionTag) -> dict:
    """Signed distances to the defining curves, in a fixed key order."""
    k, r = params.k, params.r
    out = {"k-1": k - 1.0, "r-1/k": r - 1.0 / k}
    if k > 1.0:
        out["r-rho_0(k)"] = r - rho(0, k)
        out["r-k/(k-1)"] = r - k / (k - 1.0)
    if tag.region is Region.CASCADE:
        out[f"t_{tag.p - 1}"] = t_poly(tag.p - 1, k, r)
        out[f"t_{tag.p}"] = t_poly(tag.p, k, r)
    if tag.region is Region.WINDOW:
        m = tag.m
        out[f"k-K_{m}(r)"] = k - K_wall(m, r)
        out[f"K_{m + 1}(r)-k"] = K_wall(m + 1, r) - k
        out[f"k*r^{m}-1"] = k * r**m - 1.0
        out[f"r^{m}*k^2-k-r"] = r**m * k * k - k - r
        out[f"r^{2 * m}*k^3-k-r"] = r ** (2 * m) * k**3 - k - r
    return out


def _params(args) -> MapParams:
    return MapParams(k=args.k, r=args.r)


# -- classify ---------------------------------------------------------------


def cmd_classify(args) -> int:
    params = _params(args)
    tag = classify(params, tau=args.tau, p_max=args.p_max)
    if args.json:
        record: dict = {"k": params.k, "r": params.r, "region": _region_payload(tag)}
        if tag.region in (Region.FIXED_POINT, Region.TWO_CYCLE):
            record["x_star"] = 1.0 / (params.k + 1.0)
        record["boundary_distances"] = _boundary_distances(params, tag)
        print(json.dumps(record))
    else:
        print(describe(tag))
        for name, value in _boundary_distances(params, tag).items():
            print(f"  {name} = {value:.6g}")
    return 2 if tag.region is Region.BOUNDARY else 0


# -- attractor --------------------------------------------------------------


def _fmt_interval(pair) -> str:
    return f"[{pair[0]:.6g},{pair[1]:.6g}]"


def _attractor_text(attr: Attractor) -> str:
    if attr.kind is AttractorKind.POINT:
        return f"Point x*={attr.point:.6f}"
    if attr.kind is AttractorKind.CYCLE:
        pts = ", ".join(f"{x:.6f}" for x in attr.cycle.points)
        line = f"Cycle period {attr.cycle.period}: {pts}; multiplier {attr.cycle.multiplier:.6g}"
        if attr.exceptional.cantor is not None:
            line += "; exceptional Cantor repeller"
        elif attr.exceptional.points:
            line += f"; exceptional fixed point {attr.exceptional.points[0]:.6g}"
        return line
    if attr.kind is AttractorKind.BANDS:
        bands = " ".join(_fmt_interval(b) for b in attr.bands)
        if attr.region.region is Region.CASCADE:
            head = f"Bands p={attr.region.p} ({len(attr.bands)} bands): {bands}"
            gaps = ", ".join(f"{x:.6g}" for x in attr.exceptional.points)
            return f"{head}; unstable gap points: {gaps}"
        head = f"Bands m={attr.region.m} sub={attr.region.sub} ({len(attr.bands)} bands): {bands}"
        extra = "; exceptional Cantor repeller"
        if attr.exceptional.orbits:
            extra += " and repelling orbit"
        return head + extra
    if attr.kind is AttractorKind.FULL_INTERVAL:
        return f"FullInterval {_fmt_interval(attr.interval)} (chaotic)"
    lo, hi = attr.interval
    return f"NoneEscape; Cantor repeller on [{lo:.6g}, {hi:.6g}]"


def _attractor_payload(attr: Attractor) -> dict:
    payload: dict = {"kind": attr.kind.value}
    if attr.kind is AttractorKind.POINT:
        payload["point"] = attr.point
    elif attr.kind is AttractorKind.CYCLE:
        payload["points"] = list(attr.cycle.points)
        payload["period"] = attr.cycle.period
        payload["multiplier"] = attr.cycle.multiplier
        payload["stable"] = attr.cycle.stable
    elif attr.kind is AttractorKind.BANDS:
        payload["bands"] = [list(b) for b in attr.bands]
    else:
        payload["interval"] = list(attr.interval)
    exceptional: dict = {}
    if attr.exceptional.points:
        exceptional["points"] = list(attr.exceptional.points)
    if attr.exceptional.orbits:
        exceptional["orbits"] = [list(o.points) for o in attr.exceptional.orbits]
    if attr.exceptional.cantor is not None:
        system = attr.exceptional.cantor
        exceptional["cantor"] = {
            "kind": system.kind.value,
            "m": system.m,
            "frame": list(system.frame_interval()),
        }
    if attr.exceptional.note:
        exceptional["note"] = attr.exceptional.note
    payload["exceptional"] = exceptional
    return payload


def cmd_attractor(args) -> int:
    params = _params(args)
    attr = build_attractor(params)
    if args.json:
        record = {"k": params.k, "r": params.r, "region": _region_payload(attr.region),
                  "attractor": _attractor_payload(attr)}
        print(json.dumps(record))
    else:
        print(_attractor_text(attr))
    return 0


# -- orbit ------------------------------------------------------------------


def cmd_orbit(args) -> int:
    params = _params(args)
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    orbit = iterate_f(params, args.x0, args.n)
    lines = ["step,x,branch"]
    for i, x in enumerate(orbit.points):
        if i == 0:
            branch = ""
        else:
            branch = orbit.branches[i - 1]
        if orbit.escaped and i == len(orbit.points) - 1:
            branch = "ESC"
        lines.append(f"{i},{x!r},{branch}")
    print("\n".join(lines))
    return 0


# -- raster -----------------------------------------------------------------


def _raster_tags(args) -> tuple[list[list[RegionTag]], float, float]:
    width, height = args.width, args.height
    dk = (args.kmax - args.kmin) / width
    dr = (args.rmax - args.rmin) / height

    def row_tags(row: int) -> list[RegionTag]:
        r = args.rmax - (row + 0.5) * dr
        out = []
        for col in range(width):
            k = args.kmin + (col + 0.5) * dk
            out.append(classify(MapParams(k=k, r=r), p_max=args.p_max))
        return out

    threads = int(os.environ.get("SKEWTENT_THREADS", "1"))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row_tags, range(height)))
    else:
        rows = [row_tags(j) for j in range(height)]
    return rows, dk, dr


def cmd_raster(args) -> int:
    if args.width < 1 or args.height < 1:
        raise UsageError("width and height must be >= 1")
    if not (0.0 < args.kmin < args.kmax and 0.0 < args.rmin < args.rmax):
        raise UsageError("ranges must be positive and ordered")
    rows, dk, dr = _raster_tags(args)
    if args.format == "ppm":
        body = bytearray()
        for row in rows:
            for tag in row:
                body.extend(palette_rgb(tag))
        header = f"P6\n{args.width} {args.height}\n255\n".encode("ascii")
        with open(args.out, "wb") as fh:
            fh.write(header + bytes(body))
        with open(args.out + ".legend.txt", "w", encoding="ascii") as fh:
            fh.write(_legend_text())
    else:
        lines = ["k,r,tag,m_or_p,sub"]
        for j, row in enumerate(rows):
            r = args.rmax - (j + 0.5) * dr
            for i, tag in enumerate(row):
                k = args.kmin + (i + 0.5) * dk
                m_or_p = tag.m if tag.m is not None else (tag.p if tag.p is not None else "")
                sub = tag.sub or ""
                lines.append(f"{k!r},{r!r},{tag.region.value},{m_or_p},{sub}")
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0


# -- verify -----------------------------------------------------------------


def cmd_verify(args) -> int:
    params = _params(args)
    suite = args.suite
    details: dict = {}
    passed: bool

    if suite == "basin":
        n = args.samples or 10_000
        attr = build_attractor(params)
        stats = basin_experiment(params, n_samples=n, seed=args.seed)
        details = {
            "n_samples": stats.n_samples,
            "n_to_attractor": stats.n_to_attractor,
            "n_escaped": stats.n_escaped,
            "n_undecided": stats.n_undecided,
            "median_landing_time": stats.median_landing_time,
            "rng": stats.rng,
            "threshold": "99% attracted (escaped in the escape region)",
        }
        if attr.kind is AttractorKind.NONE_ESCAPE:
            passed = stats.n_escaped >= 0.99 * stats.n_samples
        else:
            passed = stats.n_to_attractor >= 0.99 * stats.n_samples
    elif suite == "invariance":
        attr = build_attractor(params)
        support = attr.support()
        if support is None:
            print("error: no invariant attractor support in the escape region", file=sys.stderr)
            return 2
        defect = check_invariance(support, params)
        details = {"defect": defect, "threshold": 1e-9}
        passed = defect <= 1e-9
    elif suite == "lyapunov":
        n = args.samples or 100_000
        attr = build_attractor(params)
        est = lyapunov(params, n=max(n, 1000), seed=args.seed)
        details = {"lambda": est.lam, "stderr": est.stderr, "n": est.n, "rng": est.rng}
        if attr.kind is AttractorKind.POINT:
            expected = math.log(params.k)
            details["expected"] = expected
            details["threshold"] = 1e-3
            passed = abs(est.lam - expected) <= 1e-3
        elif attr.kind is AttractorKind.CYCLE and attr.cycle.stable:
            expected = math.log(abs(attr.cycle.multiplier)) / attr.cycle.period
            details["expected"] = expected
            details["threshold"] = 1e-3
            passed = abs(est.lam - expected) <= 1e-3
        else:
            details["threshold"] = "lambda > 0"
            passed = est.lam > 0.0
    elif suite == "covering":
        attr = build_attractor(params)
        support = attr.support()
        if attr.kind not in (AttractorKind.BANDS, AttractorKind.FULL_INTERVAL):
            print("error: covering applies only to interval attractors", file=sys.stderr)
            return 2
        widest = max(support.intervals, key=lambda ab: ab[1] - ab[0])
        center = 0.5 * (widest[0] + widest[1])
        result = covering_test(params, power=1, start=(center - 5e-4, center + 5e-4), target=support, horizon=200)
        details = {"start_width": 1e-3, "horizon": 200, "threshold": "covered within 200 steps"}
        passed = isinstance(result, CoveredAt)
        if passed:
            details["covered_at"] = result.n
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown suite {suite}")

    if args.json:
        print(json.dumps({"k": params.k, "r": params.r, "suite": suite, "pass": passed, "details": details}))
    else:
        print(f"{'PASS' if passed else 'FAIL'} {suite} at (k={params.k}, r={params.r})")
        for key, value in details.items():
            print(f"  {key} = {value}")
    return 0 if passed else 3


# -- boundaries -------------------------------------------------------------


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise UsageError(f"bad index range {text}")
        return list(range(lo, hi + 1))
    return [int(text)]


def cmd_boundaries(args) -> int:
    samples = args.samples
    rows: list[tuple[float, float]] = []
    curve = args.curve
    if curve == "rho":
        if args.p is None:
            raise UsageError("--curve rho needs --p")
        idx = _parse_range(args.p)
        if len(idx) != 1:
            raise UsageError("--curve rho takes a single --p")
        p = idx[0]
        kmin = args.kmin if args.kmin is not None else 1.5
        kmax = args.kmax if args.kmax is not None else 2.5
        for i in range(samples):
            k = kmin + (kmax - kmin) * i / max(samples - 1, 1)
            rows.append((k, rho(p, k)))
    elif curve == "Kp":
        if args.p is None:
            raise UsageError("--curve Kp needs --p")
        for p in _parse_range(args.p):
            rows.append((float(p), K_threshold(p)))
    elif curve in ("Km", "Lm", "Nm"):
        if args.m is None:
            raise UsageError(f"--curve {curve} needs --m")
        idx = _parse_range(args.m)
        if len(idx) != 1:
            raise UsageError(f"--curve {curve} takes a single --m")
        m = idx[0]
        rmin = args.rmin if args.rmin is not None else 0.1
        rmax = args.rmax if args.rmax is not None else 0.9
        fn = {"Km": K_wall, "Lm": L_curve, "Nm": N_curve}[curve]
        for i in range(samples):
            r = rmin + (rmax - rmin) * i / max(samples - 1, 1)
            rows.append((r, fn(m, r)))
    else:  # alpha | beta | gamma, indexed by m only
        if args.m is None:
            raise UsageError(f"--curve {curve} needs --m")
        fn = {"alpha": alpha_threshold, "beta": beta_threshold, "gamma": gamma_threshold}[curve]
        for m in _parse_range(args.m):
            rows.append((float(m), fn(m)))

    lines = ["param,value"] + [f"{param:.6g},{value:.6f}" for param, value in rows]
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    return 0


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="skewtent", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_kr(p):
        p.add_argument("--k", type=float, required=True, help="magnitude of the falling slope")
        p.add_argument("--r", type=float, required=True, help="rising slope")

    p = sub.add_parser("classify", help="region tag of a slope pair")
    add_kr(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--tau", type=float, default=DEFAULT_TAU, help="relative boundary tolerance")
    p.add_argument("--p-max", type=int, default=DEFAULT_P_MAX, help="cascade depth cap")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("attractor", help="attractor report in line coordinates")
    add_kr(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_attractor)

    p = sub.add_parser("orbit", help="CSV orbit dump: step,x,branch")
    add_kr(p)
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=["csv"], default="csv")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("raster", help="parameter-plane raster (PPM P6 or CSV)")
    p.add_argument("--kmin", type=float, required=True)
    p.add_argument("--kmax", type=float, required=True)
    p.add_argument("--rmin", type=float, required=True)
    p.add_argument("--rmax", type=float, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["ppm", "csv"], default="ppm")
    p.add_argument("--p-max", type=int, default=DEFAULT_P_MAX)
    p.set_defaults(func=cmd_raster)

    p = sub.add_parser("verify", help="run a verification suite against documented thresholds")
    add_kr(p)
    p.add_argument("--suite", choices=["basin", "invariance", "lyapunov", "covering"], required=True)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("boundaries", help="CSV table of a boundary curve")
    p.add_argument("--curve", choices=["rho", "Kp", "Km", "Lm", "Nm", "alpha", "beta", "gamma"], required=True)
    p.add_argument("--p", type=str, default=None, help="curve index or range lo..hi")
    p.add_argument("--m", type=str, default=None, help="window index or range lo..hi")
    p.add_argument("--samples", type=int, default=41)
    p.add_argument("--kmin", type=float, default=None)
    p.add_argument("--kmax", type=float, default=None)
    p.add_argument("--rmin", type=float, default=None)
    p.add_argument("--rmax", type=float, default=None)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_boundaries)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (InvalidMap, NotClassified, WrongRegion, OutOfDomain, NotReducible,
            NoBoundedOrbit, DepthOverflow, PrecisionLoss) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:  # console-script hook
    sys.exit(main())


if __name__ == "__main__":
    entry()
