"""Command-line front end.

Each subcommand builds one JSON request and posts it to the service app --
in-process over an ASGI transport by default, or to a remote server with
--server.  Output is JSON or CSV on stdout (or --out); errors print to
stderr and map to exit codes: 2 invalid arguments, 3 budget exceeded,
4 convergence failure (verify: 1 on any failing invariant).
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from fractions import Fraction

import httpx

from .exactmath import parse_rational

EXIT_CODES = {"invalid-argument": 2, "resource-limit": 3, "convergence": 4}

BUDGET_FLAGS = [
    "max_family",
    "max_pairwise",
    "max_box_width",
    "max_dense",
    "power_tol",
    "power_max_iters",
]


def _post(server: str | None, path: str, payload: dict) -> dict | list:
    async def go():
        if server:
            async with httpx.AsyncClient(base_url=server, timeout=None) as client:
                return await client.post(path, json=payload)
        from .service import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://sievelab", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    resp = asyncio.run(go())
    if resp.status_code >= 400:
        detail = resp.json().get("detail", {})
        if isinstance(detail, dict) and "kind" in detail:
            kind, message = detail["kind"], detail["message"]
        else:
            kind, message = "invalid-argument", json.dumps(detail)
        print(f"error ({kind}): {message}", file=sys.stderr)
        raise SystemExit(EXIT_CODES.get(kind, 2))
    return resp.json()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _json_out(data, args):
    _emit(json.dumps(data, indent=2, sort_keys=False), args.out)


def _csv_rows(rows: list, columns: list) -> str:
    import csv
    import io

    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, restval="")
    w.writeheader()
    for r in rows:
        w.writerow({c: r.get(c, "") for c in columns})
    return buf.getvalue()


def _budget_payload(args) -> dict:
    return {
        name: getattr(args, f"budget_{name}")
        for name in BUDGET_FLAGS
        if getattr(args, f"budget_{name}", None) is not None
    }


# -- subcommands -------------------------------------------------------


def cmd_enumerate(args) -> int:
    data = _post(
        args.server,
        "/enumerate",
        {"k": args.k, "qmin": args.qmin, "qmax": args.qmax, "budgets": _budget_payload(args)},
    )
    if args.format == "csv":
        _emit(_csv_rows(data["points"], ["k", "q", "a", "value"]), args.out)
    else:
        _json_out(data, args)
    return 0


def cmd_mnq(args) -> int:
    data = _post(
        args.server,
        "/mnq",
        {
            "k": args.k,
            "qmin": args.qmin,
            "qmax": args.qmax,
            "n": args.n,
            "budgets": _budget_payload(args),
        },
    )
    _json_out(data, args)
    return 0


def cmd_boxcount(args) -> int:
    data = _post(
        args.server,
        "/boxcount",
        {
            "coefficients": [int(c) for c in args.coeffs.split(",")],
            "modulus": args.modulus,
            "K": args.K,
            "H": args.H,
            "L": args.L,
            "R": args.R,
            "legacy_j": args.legacy_j,
            "budgets": _budget_payload(args),
        },
    )
    if args.format == "csv":
        cols = ["k", "m", "H", "R", "K", "L", "count", "bound", "ratio"]
        _emit(_csv_rows([data], cols), args.out)
    else:
        _json_out(data, args)
    return 0


def cmd_delta_star(args) -> int:
    data = _post(
        args.server,
        "/delta-star",
        {
            "k": args.k,
            "qmin": args.qmin,
            "qmax": args.qmax,
            "n": args.n,
            "offset": args.offset,
            "tol": args.tol,
            "max_iters": args.max_iters,
            "budgets": _budget_payload(args),
        },
    )
    _json_out(data, args)
    return 0


def cmd_bounds(args) -> int:
    data = _post(
        args.server,
        "/bounds",
        {
            "ids": args.bounds.split(",") if args.bounds else None,
            "k": args.k,
            "Q": args.Q,
            "N": args.n,
            "eps": args.eps,
            "theta": str(parse_rational(args.theta)) if args.theta else None,
        },
    )
    if args.format == "csv":
        _emit(_csv_rows(data, ["id", "value", "in_range", "exponent"]), args.out)
    else:
        _json_out(data, args)
    return 0


def cmd_crossover(args) -> int:
    data = _post(args.server, "/crossover", {"a": args.a, "b": args.b, "k": args.k})
    _json_out(data, args)
    return 0


def cmd_regime_map(args) -> int:
    data = _post(
        args.server,
        "/regime-map",
        {"k": args.k, "ids": args.bounds.split(",") if args.bounds else None},
    )
    if args.format == "csv":
        cols = ["k", "theta_lo", "theta_hi", "winner_id", "exponent_expression"]
        _emit(_csv_rows(data, cols), args.out)
    else:
        _json_out(data, args)
    return 0


def cmd_partition(args) -> int:
    data = _post(
        args.server,
        "/partition",
        {"k": args.k, "Q": args.Q, "n": args.n, "budgets": _budget_payload(args)},
    )
    _json_out(data, args)
    return 0


def _parse_grid(args) -> list | None:
    """Explicit grid from --k/--q/--theta lists; None means the default grid."""
    if not (args.k_list or args.q_list or args.theta_list):
        return None
    if not (args.k_list and args.q_list):
        raise SystemExit("survey needs both --k-list and --q-list (or neither)")
    ks = [int(v) for v in args.k_list.split(",")]
    qs = [int(v) for v in args.q_list.split(",")]
    grid = []
    for k in ks:
        thetas = (
            [parse_rational(t) for t in args.theta_list.split(",")]
            if args.theta_list
            else [Fraction(k) + Fraction(j, 2) for j in range(2 * k + 1)]
        )
        for Q in qs:
            for t in thetas:
                grid.append([str(k), str(Q), str(t)])
    return grid


def cmd_survey(args) -> int:
    payload = {
        "grid": _parse_grid(args),
        "eps": args.eps,
        "bounds": args.bounds.split(",") if args.bounds else None,
        "tol": args.tol,
        "max_iters": args.max_iters,
        "workers": args.workers,
        "seed": args.seed,
        "budgets": _budget_payload(args),
    }
    data = _post(args.server, "/survey", payload)
    if args.format == "json":
        _json_out(data["rows"], args)
    else:
        _emit(data["csv"], args.out)
    return 0


def cmd_verify(args) -> int:
    data = _post(args.server, "/verify", {"quick": args.quick})
    width = max(len(c["name"]) for c in data["checks"])
    lines = []
    for c in data["checks"]:
        mark = "PASS" if c["ok"] else "FAIL"
        line = f"{c['name']:<{width}}  {mark}"
        if c["detail"]:
            line += f"  {c['detail']}"
        lines.append(line)
    _emit("\n".join(lines), args.out)
    return 0 if data["passed"] else 1


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# -- parser ------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--out", default=None, help="write output to this path instead of stdout")
    p.add_argument("--server", default=None, help="base URL of a running service; default in-process")
    for name in BUDGET_FLAGS:
        flag = "--budget-" + name.replace("_", "-")
        typ = float if name == "power_tol" else int
        p.add_argument(flag, dest=f"budget_{name}", type=typ, default=None)


def _add_family(p: argparse.ArgumentParser):
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--qmin", type=int, required=True)
    p.add_argument("--qmax", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sievelab",
        description="Exact spacing statistics, sieve constants and bound comparisons "
        "for families of fractions with power denominators.",
    )
    parser.add_argument("--config", default=None, help="key = value file of flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="dump a family as k,q,a,value rows")
    _add_family(p)
    _add_common(p)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("mnq", help="clustering statistic M for a family and window 1/2n")
    _add_family(p)
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_mnq)

    p = sub.add_parser("boxcount", help="polynomial congruence solutions in a box")
    p.add_argument("--coeffs", required=True, help="comma-separated, ascending degree")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--K", type=int, default=0)
    p.add_argument("--H", type=int, required=True)
    p.add_argument("--L", type=int, default=0)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--legacy-j", action="store_true", dest="legacy_j")
    _add_common(p)
    p.set_defaults(fn=cmd_boxcount)

    p = sub.add_parser("delta-star", help="optimal sieve constant by power iteration")
    _add_family(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--offset", type=int, default=0, help="window start M; coefficients on M+1..M+N")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-iters", type=int, default=None, dest="max_iters")
    _add_common(p)
    p.set_defaults(fn=cmd_delta_star)

    p = sub.add_parser("bounds", help="evaluate catalog formulas at one (k, Q, N)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--Q", type=float, required=True)
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--bounds", default=None, help="comma-separated catalog ids; default all")
    p.add_argument("--theta", default=None, help='optional exact "p/q"; adds exponent column')
    _add_common(p)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("crossover", help="exact theta where two exponent profiles cross")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--k", type=int, required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_crossover)

    p = sub.add_parser("regime-map", help="which bound wins on each theta segment")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bounds", default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_regime_map)

    p = sub.add_parser("partition", help="dyadic spaced-partition certificate for q <= Q")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_partition)

    p = sub.add_parser("survey", help="grid survey comparing Delta* against every bound")
    p.add_argument("--k-list", default=None, help="comma-separated k values")
    p.add_argument("--q-list", default=None, help="comma-separated Q values (family q in [Q, 2Q])")
    p.add_argument("--theta-list", default=None, help='comma-separated thetas ("5/2" or "2.5")')
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--bounds", default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-iters", type=int, default=None, dest="max_iters")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(fn=cmd_survey)

    p = sub.add_parser("verify", help="run the cross-module invariant suite")
    p.add_argument("--quick", action="store_true")
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def _apply_config(argv: list) -> list:
    """Strip --config PATH from argv and splice the file's key = value lines
    in right after the subcommand, so explicit flags (which come later) win.
    The flag is accepted anywhere on the command line.
    """
    cfg_path = None
    rest = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--config" and i + 1 < len(argv):
            cfg_path = argv[i + 1]
            i += 2
            continue
        if tok.startswith("--config="):
            cfg_path = tok.split("=", 1)[1]
            i += 1
            continue
        rest.append(tok)
        i += 1
    if not cfg_path:
        return rest
    extra = []
    with open(cfg_path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            key = key.strip().replace("_", "-")
            value = value.strip()
            if value.lower() in ("true", "yes"):
                extra.append(f"--{key}")
            else:
                extra.extend([f"--{key}", value])
    for i, tok in enumerate(rest):
        if not tok.startswith("-"):  # first positional is the subcommand
            return rest[: i + 1] + extra + rest[i + 1 :]
    return rest + extra


def main(argv: list | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    argv = _apply_config(argv)
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as e:  # _post signals mapped service errors this way
        return e.code if isinstance(e.code, int) else 2
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
