"""Command line interface emitting the package's datasets.

Table subcommands write CSV (JSON on request) with a leading metadata
comment block: tool version, the full configuration, the seed, and the
wall time.  Data sections are deterministic functions of the
configuration, so identical invocations produce byte-identical data
lines; only the wall-time metadata line varies.

Exit codes: 0 on success, 1 on validation errors (bad flags, bad
ranges, budget violations), 2 when a numerical invariant fails.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__, dirichlet, fourier, harper, mixing, special, walks
from .errors import NumericalCheckError
from .harper import build_general, build_harper, spectrum


class _UsageError(ValueError):
    """Raised by the parser instead of exiting, so run() can map it."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise _UsageError(f"expected a range a:b, got {text!r}") from None
    if lo > hi:
        raise _UsageError(f"empty range {text!r}")
    return lo, hi


def _parse_floats(text: str) -> list[float]:
    try:
        vals = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise _UsageError(f"expected comma-separated reals, got {text!r}") from None
    if not vals:
        raise _UsageError("empty grid")
    return vals


class Section:
    """One named table: a header row plus data rows.

    ``record`` marks a single-row section whose JSON form is one flat
    object keyed by the header instead of a header/rows table.
    """

    def __init__(self, name: str, header: list[str], record: bool = False):
        self.name = name
        self.header = header
        self.record = record
        self.rows: list[list] = []

    def add(self, *values) -> None:
        self.rows.append(list(values))

    def csv_lines(self) -> list[str]:
        out = [",".join(self.header)]
        out.extend(",".join(_fmt(v) for v in row) for row in self.rows)
        return out


# -- subcommand handlers --------------------------------------------------


def _cmd_spectrum(ns) -> list[Section]:
    if ns.xi_range is not None:
        lo, hi = _parse_range(ns.xi_range)
        xis = range(lo, hi + 1)
    else:
        xis = None
    sweep = harper.spectrum_sweep(ns.n, xis, alpha=ns.alpha)
    table = Section("sweep", ["xi", "beta_top", "beta_bottom", "beta_star"])
    for xi, top, bottom, star in sweep.rows:
        table.add(xi, top, bottom, star)
    base = Section("m1", ["index", "eigenvalue"])
    for i, val in enumerate(sweep.base_spectrum):
        base.add(i, float(val))
    return [table, base]


def _cmd_mix(ns) -> list[Section]:
    if (ns.kmax is None) == (ns.eta_grid is None):
        raise _UsageError("mix needs exactly one of --kmax or --eta-grid")
    table = Section(
        "mix", ["n", "k", "eta", "tv_exact", "ub_fourier", "lb_projection"]
    )
    if ns.kmax is not None:
        for pt in mixing.exact_tv_curve(ns.n, ns.kmax):
            table.add(pt.n, pt.k, pt.eta, pt.tv_exact, pt.ub_fourier, pt.lb_projection)
        return [table]
    etas = _parse_floats(ns.eta_grid)
    ks = [math.ceil(eta * ns.n * ns.n) for eta in etas]
    tvs = mixing.hybrid_tv(ns.n, ks)
    ubs = mixing.fourier_upper_bounds(ns.n, ks)
    lbs = mixing.projection_lower_bounds(ns.n, ks)
    for eta, k, tv, ub, lb in zip(etas, ks, tvs, ubs, lbs):
        table.add(ns.n, k, eta, float(tv), float(ub), float(lb))
    return [table]


def _cmd_bound(ns) -> list[Section]:
    if ns.profile not in (None, "cosine"):
        diag = np.loadtxt(ns.profile, ndmin=1)
        bound = dirichlet.upper_bound_from_profile(diag)
        top = float(spectrum(build_general(diag))[0])
        table = Section("bound", ["n", "bound_upper", "beta1_exact", "gap_ratio"])
        table.add(
            diag.size, bound.value, top, (1.0 - bound.value) / (1.0 - top)
        )
        return [table]
    if ns.n is None:
        raise _UsageError("bound needs --n unless --profile gives a file")
    if ns.xi_range is not None:
        lo, hi = _parse_range(ns.xi_range)
    else:
        lo, hi = 1, (ns.n - 1) // 2
    table = Section(
        "bound",
        [
            "n",
            "xi",
            "bound_upper",
            "beta1_exact",
            "gap_ratio",
            "bound_lower",
            "betamin_exact",
        ],
    )
    for xi in range(lo, hi + 1):
        rep = dirichlet.bound_report(ns.n, xi)
        table.add(*(rep[key] for key in table.header))
    return [table]


def _cmd_center(ns) -> list[Section]:
    law = mixing.center_distribution(ns.p, ns.k)
    table = Section("center", ["z", "probability"])
    for z, prob in enumerate(law):
        table.add(z, float(prob))
    return [table]


def _cmd_repcheck(ns) -> list[Section]:
    irreps = fourier.enumerate_irreps(ns.n)
    total = sum(irr.m * irr.m for irr in irreps)
    if total != ns.n**3:
        raise NumericalCheckError(
            f"irrep table is incomplete: sum of squared dimensions {total} "
            f"!= {ns.n**3}"
        )
    table = Section("irreps", ["m", "a", "b", "c", "dim"])
    for irr in irreps:
        table.add(irr.m, irr.a, irr.b, irr.c, irr.m)
    sections = [table]
    if ns.n <= fourier.DEFAULT_GRAM_CAP:
        gram = fourier.character_gram(ns.n)
        resid = float(np.abs(gram - np.eye(gram.shape[0])).max())
        if resid > 1e-9:
            raise NumericalCheckError(
                f"character gram deviates from the identity by {resid:.3e}"
            )
        check = Section("gram", ["labels", "gram_residual"])
        check.add(gram.shape[0], resid)
        sections.append(check)
    if ns.kmax is not None:
        bounds = Section("bounds", ["n", "k", "term_I", "term_II", "bound_tv"])
        for k in range(ns.kmax + 1):
            term_one, term_two = fourier.ub_lemma_bound(ns.n, k)
            bounds.add(
                ns.n, k, term_one, term_two, 0.5 * math.sqrt(term_one + term_two)
            )
        sections.append(bounds)
    return sections


def _cmd_simulate(ns) -> list[Section]:
    table = Section(
        "simulate",
        ["k", "trials", "seed", "estimate", "stderr", "k2_scaled", "c_conjectured"],
        record=True,
    )
    constant = special.conjectured_constant()
    if ns.experiment == "return":
        est, err = walks.return_probability(ns.k, ns.trials, ns.seed, ns.jobs)
        table.add(ns.k, ns.trials, ns.seed, est, err, ns.k * ns.k * est, constant)
    else:
        rep = walks.zn_limit_test(ns.k, ns.trials, ns.seed, ns.jobs)
        table.add(ns.k, ns.trials, ns.seed, rep.ks, None, None, constant)
    return [table]


# -- output plumbing -------------------------------------------------------


def _metadata(ns, started: float) -> list[str]:
    skip = {"func", "out", "format"}
    pairs = ", ".join(
        f"{key}={vars(ns)[key]!r}"
        for key in sorted(vars(ns))
        if key not in skip and vars(ns)[key] is not None
    )
    return [
        f"# tool: hmix {__version__}",
        f"# config: {pairs}",
        f"# seed: {getattr(ns, 'seed', 'none')}",
        f"# wall_time_s: {time.perf_counter() - started:.3f}",
    ]


def _sibling_path(out: str, name: str) -> str:
    stem, dot, ext = out.rpartition(".")
    if not dot:
        return f"{out}-{name}"
    return f"{stem}-{name}.{ext}"


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _emit(ns, sections: list[Section], started: float) -> None:
    meta = _metadata(ns, started)
    if ns.format == "json":
        payload = {
            "metadata": {
                "tool": f"hmix {__version__}",
                "config": meta[1][len("# config: ") :],
                "seed": getattr(ns, "seed", None),
                "wall_time_s": float(meta[3].rsplit(" ", 1)[1]),
            },
            "data": (
                dict(zip(sections[0].header, sections[0].rows[0]))
                if len(sections) == 1 and sections[0].record
                else {
                    sec.name: {"header": sec.header, "rows": sec.rows}
                    for sec in sections
                }
            ),
        }
        _write_text(ns.out, json.dumps(payload, sort_keys=True, indent=1) + "\n")
        return
    primary, extras = sections[0], sections[1:]
    if ns.out is None:
        chunks = meta + primary.csv_lines()
        for sec in extras:
            chunks.append(f"# section: {sec.name}")
            chunks.extend(sec.csv_lines())
        _write_text(None, "\n".join(chunks) + "\n")
        return
    _write_text(ns.out, "\n".join(meta + primary.csv_lines()) + "\n")
    for sec in extras:
        _write_text(
            _sibling_path(ns.out, sec.name), "\n".join(meta + sec.csv_lines()) + "\n"
        )


# -- parser ----------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="hmix", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, fmt_default="csv"):
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=fmt_default)

    p = sub.add_parser("spectrum", help="band-matrix eigenvalue sweep")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--xi-range", dest="xi_range")
    common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("mix", help="exact mixing curve with matching bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kmax", type=int)
    p.add_argument("--eta-grid", dest="eta_grid")
    common(p)
    p.set_defaults(func=_cmd_mix)

    p = sub.add_parser("bound", help="path bounds next to exact eigenvalues")
    p.add_argument("--n", type=int)
    p.add_argument("--xi-range", dest="xi_range")
    p.add_argument(
        "--profile",
        help="'cosine' (default) or a file with one diagonal entry per line",
    )
    common(p)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("center", help="law of the central coordinate")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_center)

    p = sub.add_parser("repcheck", help="representation table and its checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kmax", type=int)
    common(p)
    p.set_defaults(func=_cmd_repcheck)

    p = sub.add_parser("simulate", help="Monte Carlo experiments")
    p.add_argument("experiment", choices=("return", "levy"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    common(p, fmt_default="json")
    p.set_defaults(func=_cmd_simulate)

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    started = time.perf_counter()
    try:
        ns = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        sections = ns.func(ns)
        _emit(ns, sections, started)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalCheckError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))
