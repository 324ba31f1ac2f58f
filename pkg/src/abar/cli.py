"""Command line entry point: ``abar <subcommand> [options]``.

Subcommands: coeffs, certify, density, hecke, scan, oracle.
Exit codes: 0 success, 1 validation error (or a certificate that is not
holomorphic: 3), 2 precision or validity shortfall.
Output is deterministic; integers in JSON are decimal strings.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .density import (
    DEFAULT_CHECKPOINTS,
    LARGE_CHECKPOINT,
    StreamCache,
    congruence_scan,
    density_report,
    density_reports,
    primitive_candidates,
)
from .hecke import estimate_c, nilpotency_probe, verify_cong1_instance
from .modform_cert import (
    CertificationError,
    build_family,
    certify,
    level_conditions,
    stated_level,
    stated_weight_times_2,
)
from .partition_funcs import (
    brute_tcore_count,
    coeffs_abar,
    coeffs_ct,
    partition_series,
)
from .series_core import EtaQuotient, PrecisionError, one, phi_neg, ps_div

EXIT_OK, EXIT_INVALID, EXIT_PRECISION, EXIT_NOT_HOLOMORPHIC = 0, 1, 2, 3


SCHEMA_NAMES = ("coeffs", "certify", "density", "hecke", "scan", "oracle")


def load_schema(name: str) -> dict:
    """JSON schema for the output of subcommand ``name`` (shipped with the package)."""
    if name not in SCHEMA_NAMES + ("series",):
        raise KeyError(name)
    return json.loads(resources.files("abar").joinpath("schemas", f"{name}.json").read_text())


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="abar", description="q-series, eta-quotient certificates and densities for abar_t(n)")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--config", help="file of key=value lines used as defaults")
        sp.add_argument("--workers", type=int, default=1)

    c = sub.add_parser("coeffs", help="coefficient stream of a generating function")
    c.add_argument("--fn", choices=("abar", "ct", "p", "overpartition"), required=True)
    c.add_argument("--t", type=int)
    c.add_argument("--P", type=int, default=20)
    c.add_argument("--M", type=int, help="reduce modulo M (residue backend)")
    c.add_argument("--form", choices=("f", "phi", "both"), default="f")
    common(c)

    c = sub.add_parser("certify", help="certify an eta quotient or a B/D family member")
    c.add_argument("--family", choices=("B", "D"))
    c.add_argument("--alpha", type=int)
    c.add_argument("--m", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--quotient", help='JSON eta quotient, e.g. {"terms": {"24": -2}}')
    c.add_argument("--input", help="file holding the JSON quotient or family spec")
    c.add_argument("--level", type=int, help="certify at this level instead of the minimal one")
    common(c)

    c = sub.add_parser("density", help="residue-class counts of abar_t mod M")
    c.add_argument("--t", type=int, required=True)
    c.add_argument("--M", type=_int_list, required=True, help="modulus or comma list")
    c.add_argument("--r", type=int, default=0)
    c.add_argument("--checkpoints", type=_int_list, default=list(DEFAULT_CHECKPOINTS))
    c.add_argument("--large", action="store_true", help=f"add X = {LARGE_CHECKPOINT}")
    c.add_argument("--mode", choices=("exploratory", "theorem"), default="exploratory")
    c.add_argument("--cache-dir")
    common(c)

    c = sub.add_parser("hecke", help="Hecke nilpotency probe or congruence instances on B_{1,1,k}")
    c.add_argument("--mode", choices=("probe", "cong1", "estimate-c"), default="probe")
    c.add_argument("--k", type=int, help="B_{1,1,k}; default 1 (probe) or max(1, d-1)")
    c.add_argument("--primes", type=_int_list, default=[5])
    c.add_argument("--exponent", type=int, default=1, help="work modulo 2^exponent (probe)")
    c.add_argument("--P", type=int, default=10**4)
    c.add_argument("--d", type=int, default=1)
    c.add_argument("--n-range", type=int, default=500)
    c.add_argument("--max-len", type=int, default=8)
    common(c)

    c = sub.add_parser("scan", help="search arithmetic progressions An+B with abar_t(An+B) = 0 mod M")
    c.add_argument("--t", type=int, required=True)
    c.add_argument("--M", type=int, required=True)
    c.add_argument("--A-max", type=int, default=24)
    c.add_argument("--X", type=int, default=5 * 10**4)
    c.add_argument("--verified-only", action="store_true")
    c.add_argument("--primitive", action="store_true", help="drop verified progressions implied by others")
    common(c)

    c = sub.add_parser("oracle", help="brute-force t-core counts")
    c.add_argument("--t", type=int, required=True)
    c.add_argument("--n", type=int, default=20, help="count for 0..n")
    c.add_argument("--golden", help="plain-text golden file: written if absent, compared if present")
    common(c)
    return p


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    if "--config" not in argv:
        return
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise UsageError("--config needs a file name")
    path = Path(argv[i + 1])
    if not path.exists():
        raise UsageError(f"config file {path} not found")
    command = next((a for a in argv if not a.startswith("-")), None)
    sub = parser._subparsers._group_actions[0].choices.get(command) if command else None
    if sub is None:
        raise UsageError("--config needs a subcommand")
    by_dest = {a.dest: a for a in sub._actions}
    defaults = {}
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"bad config line: {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        dest = key.lstrip("-").replace("-", "_")
        action = by_dest.get(dest)
        if action is None:
            raise UsageError(f"unknown config key {key!r}")
        if action.nargs == 0:
            defaults[dest] = value.lower() in ("1", "true", "yes")
        else:
            try:
                defaults[dest] = action.type(value) if action.type else value
            except ValueError:
                raise UsageError(f"config key {key!r}: cannot read {value!r}") from None
            if action.choices is not None and defaults[dest] not in action.choices:
                raise UsageError(f"config key {key!r}: {value!r} is not one of {sorted(action.choices)}")
        # a value from the file satisfies a required flag
        action.required = False
    sub.set_defaults(**defaults)


def _config_of(args) -> dict:
    skip = {"config"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        out[k] = v if (v is None or isinstance(v, (bool, str))) else (
            [str(x) for x in v] if isinstance(v, list) else str(v)
        )
    return out


def _stringify(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    return str(obj)


def _emit(args, result, rows=None, header=None, out=sys.stdout):
    config = _config_of(args)
    if args.format == "json":
        payload = {"config": config, "result": _stringify(result)}
        out.write(json.dumps(payload, indent=2, sort_keys=True))
        out.write("\n")
        return
    buf = io.StringIO()
    for k, v in config.items():
        buf.write(f"# {k}={v}\n")
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    for row in rows or []:
        w.writerow(row)
    out.write(buf.getvalue())


def _need_t(t):
    if t is None or t < 2:
        raise ValueError(f"--t must be an integer >= 2, got {t}")


def cmd_coeffs(args, out):
    if args.P < 1:
        raise ValueError("--P must be >= 1")
    if args.M is not None and args.M < 2:
        raise ValueError("--M must be >= 2")
    if args.fn == "abar":
        _need_t(args.t)
        s = coeffs_abar(args.t, args.P, form=args.form, modulus=args.M)
    elif args.fn == "ct":
        _need_t(args.t)
        s = coeffs_ct(args.t, args.P, modulus=args.M)
    elif args.fn == "p":
        s = partition_series(args.P, args.M)
    else:
        s = ps_div(one(args.P, args.M), phi_neg(1, args.P, args.M))
    values = s.tolist()
    _emit(args, {"fn": args.fn, "values": [str(v) for v in values]},
          rows=[(n, v) for n, v in enumerate(values)], header=("n", "value"), out=out)
    return EXIT_OK


def _load_certify_input(args):
    spec = None
    if args.input:
        spec = json.loads(Path(args.input).read_text())
    elif args.quotient:
        spec = json.loads(args.quotient)
    if spec is not None and "family" in spec:
        return None, (spec["family"], int(spec["alpha"]), int(spec["m"]), int(spec["k"]))
    if spec is not None:
        terms = spec.get("terms", spec)
        return EtaQuotient({int(d): int(r) for d, r in terms.items()}), None
    if args.family:
        if None in (args.alpha, args.m, args.k):
            raise ValueError("--family needs --alpha, --m and --k")
        return None, (args.family, args.alpha, args.m, args.k)
    raise ValueError("certify needs --family/--alpha/--m/--k, --quotient or --input")


def cmd_certify(args, out):
    E, fam = _load_certify_input(args)
    extra = {}
    if fam is not None:
        family, alpha, m, k = fam
        E = build_family(family, alpha, m, k)
        N = stated_level(family, alpha, m)
        extra = {
            "family": family.upper(),
            "alpha": str(alpha),
            "m": str(m),
            "k": str(k),
            "stated_level": str(N),
            "stated_level_admissible": all(level_conditions(E, N)),
            "stated_weight_matches": stated_weight_times_2(family, alpha, m, k) == sum(E.terms.values()),
        }
    cert = certify(E, args.level)
    result = cert.to_dict()
    if extra:
        result["family"] = extra
    rows = [(c["d"], c["order24N"], c["order"], c["nonnegative"]) for c in result["cusps"]]
    _emit(args, result, rows=rows, header=("d", "order24N", "order", "nonnegative"), out=out)
    return EXIT_OK if cert.holomorphic else EXIT_NOT_HOLOMORPHIC


def cmd_density(args, out):
    _need_t(args.t)
    checkpoints = list(args.checkpoints)
    if args.large and LARGE_CHECKPOINT not in checkpoints:
        checkpoints.append(LARGE_CHECKPOINT)
    for M in args.M:
        if M < 2:
            raise ValueError("--M values must be >= 2")
    if args.cache_dir:
        cache = StreamCache(args.cache_dir)
        reports = [density_report(args.t, M, args.r, checkpoints, mode=args.mode, cache=cache) for M in args.M]
    else:
        if args.mode == "theorem":
            for M in args.M:
                density_report(args.t, M, args.r, [1], mode="theorem")
        reports = density_reports([(args.t, M) for M in args.M], args.r, checkpoints, workers=args.workers)
    rows = [(r.modulus, X, c, dec) for r in reports for X, c, dec in r.csv_rows()]
    _emit(args, {"reports": [r.to_dict() for r in reports]}, rows=rows,
          header=("M", "X", "count", "ratio"), out=out)
    return EXIT_OK


def cmd_hecke(args, out):
    if args.mode == "probe":
        rep = nilpotency_probe(args.k or 1, args.primes, args.exponent, args.P)
        result = rep.to_dict()
        rows = [(s["prime"], s["valid_through"], s["nonzero_coeff_count"]) for s in rep.steps]
        _emit(args, result, rows=rows, header=("prime", "valid_through", "nonzero_coeff_count"), out=out)
        return EXIT_PRECISION if rep.verdict == "window_exhausted" else EXIT_OK
    if args.mode == "cong1":
        rep = verify_cong1_instance(args.primes, args.d, args.n_range, args.k)
        result = rep.to_dict()
        _emit(args, result, rows=[(rep.checked, rep.failures, rep.window_exhausted)],
              header=("checked", "failures", "window_exhausted"), out=out)
        return EXIT_PRECISION if rep.window_exhausted else EXIT_OK
    res = estimate_c(args.d, args.n_range, args.k, args.max_len)
    rows = [(len(r["primes"]), r["checked"], r["failures"], r["window_exhausted"]) for r in res["runs"]]
    _emit(args, res, rows=rows, header=("length", "checked", "failures", "window_exhausted"), out=out)
    return EXIT_OK


def cmd_scan(args, out):
    _need_t(args.t)
    if args.M < 2:
        raise ValueError("--M must be >= 2")
    cands = congruence_scan(args.t, args.M, args.A_max, args.X)
    if args.primitive:
        cands = primitive_candidates(cands)
    elif args.verified_only:
        cands = [c for c in cands if c.verified]
    rows = [(c.A, c.B, c.status) for c in cands]
    _emit(args, {"candidates": [c.to_dict() for c in cands]}, rows=rows, header=("A", "B", "status"), out=out)
    return EXIT_OK


def cmd_oracle(args, out):
    _need_t(args.t)
    if args.n < 0:
        raise ValueError("--n must be >= 0")
    counts = [brute_tcore_count(n, args.t) for n in range(args.n + 1)]
    lines = [f"{args.t} {n} {c}" for n, c in enumerate(counts)]
    golden_status = None
    if args.golden:
        path = Path(args.golden)
        if path.exists():
            stored = {}
            for line in path.read_text().splitlines():
                if line.strip() and not line.startswith("#"):
                    t, n, c = (int(x) for x in line.split())
                    stored[(t, n)] = c
            bad = [n for n, c in enumerate(counts) if (args.t, n) in stored and stored[(args.t, n)] != c]
            golden_status = "mismatch" if bad else "match"
        else:
            path.write_text("# t n c_t(n), brute-force hook-length enumeration\n" + "\n".join(lines) + "\n")
            golden_status = "written"
    result = {"t": str(args.t), "counts": [str(c) for c in counts], "golden": golden_status}
    _emit(args, result, rows=list(enumerate(counts)), header=("n", "count"), out=out)
    return EXIT_INVALID if golden_status == "mismatch" else EXIT_OK


COMMANDS = {
    "coeffs": cmd_coeffs,
    "certify": cmd_certify,
    "density": cmd_density,
    "hecke": cmd_hecke,
    "scan": cmd_scan,
    "oracle": cmd_oracle,
}


def main(argv=None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except PrecisionError as e:
        print(f"precision shortfall: {e}", file=sys.stderr)
        return EXIT_PRECISION
    except (ValueError, CertificationError, KeyError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
