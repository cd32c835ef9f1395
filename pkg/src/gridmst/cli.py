"""Command-line client for the gridmst service.

Every command sends one request to the HTTP app (in process by default,
or a remote base URL via --server) and renders the response. Outputs
embed {seed, version, config} and are byte-identical across reruns of
the same configuration; CSV schemas carry a versioned comment line.

Exit codes: 0 success, 2 usage error, 3 enumeration-guard refusal,
4 internal failure. Seeds come only from flags or --config, never the
environment.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Any, Optional

from . import __version__


class UsageError(Exception):
    pass


def _client(server: Optional[str]):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=600.0)
    warnings.filterwarnings(
        "ignore", message="Using `httpx` with `starlette.testclient`"
    )
    from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    if not isinstance(obj, dict):
        raise UsageError("config file must hold a JSON object")
    return obj


def _resolve(args, config: dict, defaults: dict[str, Any]) -> dict[str, Any]:
    unknown = set(config) - set(defaults)
    if unknown:
        raise UsageError(f"config keys not used by this command: {sorted(unknown)}")
    merged = {}
    for key, default in defaults.items():
        flag = getattr(args, key, None)
        merged[key] = flag if flag is not None else config.get(key, default)
    return merged


def _post(client, path: str, payload: dict) -> tuple[int, Any]:
    try:
        resp = client.post(path, json=payload)
    except Exception as exc:  # connection-level failure
        print(f"error: request failed: {exc}", file=sys.stderr)
        return 4, None
    if resp.status_code == 200:
        return 0, resp.json()
    try:
        detail = resp.json().get("detail")
    except ValueError:
        detail = resp.text
    print(f"error ({resp.status_code}): {detail}", file=sys.stderr)
    if resp.status_code in (400, 422):
        return 2, None
    if resp.status_code == 409:
        return 3, None
    return 4, None


def _emit(text: str, out: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _compact(config: dict) -> str:
    return json.dumps(config, sort_keys=True, separators=(",", ":"))


def _wrap_json(command: str, seed: Optional[int], config: dict, result) -> str:
    return json.dumps(
        {
            "command": command,
            "version": __version__,
            "seed": seed,
            "config": config,
            "result": result,
        },
        sort_keys=True,
        indent=2,
    )


def _csv_header(schema: str, seed: Optional[int], config: dict) -> str:
    shown = "null" if seed is None else seed
    return f"# gridmst {__version__} schema={schema} seed={shown} config={_compact(config)}"


def _fmt(v: float) -> str:
    return f"{v:.10g}"


def _cmd_tree(args) -> int:
    cfg = _resolve(
        args,
        _load_config(args.config),
        {"family": None, "n": None, "k": None, "seed": None, "format": "json"},
    )
    if cfg["family"] is None:
        raise UsageError("tree needs --family")
    if cfg["format"] not in ("json", "ascii"):
        raise UsageError("tree format must be json or ascii")
    payload = {
        "family": cfg["family"],
        "n": cfg["n"],
        "k": cfg["k"],
        "seed": cfg["seed"],
        "include_ascii": cfg["format"] == "ascii",
    }
    code, data = _post(_client(args.server), "/tree", payload)
    if code:
        return code
    if cfg["format"] == "ascii":
        header = _csv_header("tree-ascii-1", cfg["seed"], cfg)
        _emit(header + "\n" + data["ascii_art"], args.out)
    else:
        _emit(_wrap_json("tree", cfg["seed"], cfg, data), args.out)
    return 0


def _cmd_prob(args) -> int:
    cfg = _resolve(
        args,
        _load_config(args.config),
        {
            "tree": None,
            "family": None,
            "n": None,
            "k": None,
            "family_seed": None,
            "mode": "exact",
            "samples": 10000,
            "seed": 0,
            "max_exact_m": 12,
            "max_exact_n": 12,
        },
    )
    payload: dict[str, Any] = {
        "mode": cfg["mode"],
        "max_exact_m": cfg["max_exact_m"],
        "max_exact_n": cfg["max_exact_n"],
    }
    if cfg["tree"] is not None:
        try:
            with open(cfg["tree"], "r", encoding="utf-8") as fh:
                payload["tree"] = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read tree file: {exc}")
    elif cfg["family"] is not None:
        payload["family"] = {
            "family": cfg["family"],
            "n": cfg["n"],
            "k": cfg["k"],
            "seed": cfg["family_seed"],
        }
    else:
        raise UsageError("prob needs --tree FILE or --family")
    seed = None
    if cfg["mode"] == "estimate":
        payload["samples"] = cfg["samples"]
        payload["seed"] = seed = cfg["seed"]
    code, data = _post(_client(args.server), "/prob", payload)
    if code:
        return code
    embed = {k: v for k, v in cfg.items() if v is not None}
    _emit(_wrap_json("prob", seed, embed, data), args.out)
    return 0


def _cmd_scatter(args) -> int:
    cfg = _resolve(
        args,
        _load_config(args.config),
        {
            "n": None,
            "trees_per_sampler": 100,
            "samples": 10000,
            "seed": 0,
            "format": "csv",
        },
    )
    if cfg["n"] is None:
        raise UsageError("scatter needs --n")
    payload = {k: cfg[k] for k in ("n", "trees_per_sampler", "samples", "seed")}
    code, data = _post(_client(args.server), "/scatter", payload)
    if code:
        return code
    if cfg["format"] == "json":
        _emit(_wrap_json("scatter", cfg["seed"], cfg, data), args.out)
        return 0
    lines = [
        _csv_header("scatter-1", cfg["seed"], cfg),
        f"# pearson={_fmt(data['pearson'])}",
        "sampler,avg_stretch,log_prob_estimate",
    ]
    for row in data["rows"]:
        lines.append(
            f"{row['sampler']},{_fmt(row['avg_stretch'])},{_fmt(row['log_prob_estimate'])}"
        )
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_decay(args) -> int:
    cfg = _resolve(
        args,
        _load_config(args.config),
        {"family": None, "d_max": None, "format": "json", "points": 101},
    )
    if cfg["family"] is None:
        raise UsageError("decay needs --family")
    payload = {
        "family": cfg["family"],
        "d_max": cfg["d_max"],
        "include_series": cfg["format"] == "csv",
        "series_points": cfg["points"],
    }
    code, data = _post(_client(args.server), "/decay", payload)
    if code:
        return code
    embed = {k: v for k, v in cfg.items() if v is not None}
    if cfg["format"] == "json":
        _emit(_wrap_json("decay", None, embed, data), args.out)
        return 0
    lines = [
        _csv_header("decay-series-1", None, embed),
        f"# f_bar={_fmt(data['f_bar'])} e_f_bar={_fmt(data['e_f_bar'])}"
        f" q_lower={_fmt(data['q_lower'])}",
        "x,f",
    ]
    for x, fx in data["series"]:
        lines.append(f"{_fmt(x)},{_fmt(fx)}")
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_conjecture(args) -> int:
    cfg = _resolve(
        args,
        _load_config(args.config),
        {
            "family": None,
            "sizes": None,
            "samples": 1000,
            "seed": 0,
            "format": "csv",
        },
    )
    if cfg["family"] is None or cfg["sizes"] is None:
        raise UsageError("conjecture-probe needs --family and --sizes")
    sizes = cfg["sizes"]
    if isinstance(sizes, str):
        try:
            sizes = [int(part) for part in sizes.split(",") if part.strip()]
        except ValueError:
            raise UsageError(f"bad sizes list: {cfg['sizes']!r}")
    cfg["sizes"] = sizes
    payload = {
        "family": cfg["family"],
        "sizes": sizes,
        "samples": cfg["samples"],
        "seed": cfg["seed"],
    }
    code, data = _post(_client(args.server), "/conjecture", payload)
    if code:
        return code
    if cfg["format"] == "json":
        _emit(_wrap_json("conjecture-probe", cfg["seed"], cfg, data), args.out)
        return 0
    lines = [
        _csv_header("conjecture-1", cfg["seed"], cfg),
        "n,mean_log_a,sigma_sq,n_sq_sigma_half,implied_ratio",
    ]
    for row in data["rows"]:
        lines.append(
            ",".join(
                (
                    str(row["n"]),
                    _fmt(row["mean_log_a"]),
                    _fmt(row["sigma_sq"]),
                    _fmt(row["scaled_half_variance"]),
                    _fmt(row["implied_ratio"]),
                )
            )
        )
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridmst",
        description="Spanning-tree MST probability toolkit for square grids",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--server", help="remote service base URL (default: in process)")
        p.add_argument("--config", help="JSON file with default parameter values")
        p.add_argument("--out", help="write output to this path instead of stdout")

    p = sub.add_parser("tree", help="generate a family tree with summary statistics")
    common(p)
    p.add_argument("--family")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["json", "ascii"])
    p.set_defaults(handler=_cmd_tree)

    p = sub.add_parser("prob", help="exact or estimated MST probability of a tree")
    common(p)
    p.add_argument("--tree", help="path to a tree JSON file {n, branches}")
    p.add_argument("--family")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--family-seed", type=int, dest="family_seed")
    p.add_argument("--mode", choices=["exact", "exact-dual", "estimate"])
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-exact-m", type=int, dest="max_exact_m")
    p.add_argument("--max-exact-n", type=int, dest="max_exact_n")
    p.set_defaults(handler=_cmd_prob)

    p = sub.add_parser("scatter", help="stretch vs log-probability scatter data")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--trees-per-sampler", type=int, dest="trees_per_sampler")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["csv", "json"])
    p.set_defaults(handler=_cmd_scatter)

    p = sub.add_parser("decay", help="geometric-mean decay bound for a family")
    common(p)
    p.add_argument("--family")
    p.add_argument("--d-max", type=int, dest="d_max")
    p.add_argument("--points", type=int)
    p.add_argument("--format", choices=["json", "csv"])
    p.set_defaults(handler=_cmd_decay)

    p = sub.add_parser(
        "conjecture-probe", help="variance growth of ln A across family sizes"
    )
    common(p)
    p.add_argument("--family")
    p.add_argument("--sizes", help="comma-separated grid sides, e.g. 10,20,30")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["csv", "json"])
    p.set_defaults(handler=_cmd_conjecture)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = getattr(args, "handler", None)
    if handler is None:
        parser.print_help()
        return 2
    try:
        return handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
