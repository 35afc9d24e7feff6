"""Command-line front end.

Every library computation is exposed as a subcommand emitting JSON (or CSV
for tabular data) on stdout, with diagnostics on stderr.  Output is
deterministic: key order is fixed and floats are printed with 17
significant digits, so identical invocations produce byte-identical bytes.

Exit codes: 0 success, 2 usage/parse errors, 3 accuracy errors (a requested
tolerance cannot be certified), 4 domain errors (input outside an
operation's domain, including divergent integrals).
"""
from __future__ import annotations

import argparse
import io
import json
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import calculus, composition, fock, quadrature, symbols
from .errors import AccuracyError, DomainError

__all__ = ["main", "RunConfig", "parse_complex", "render_json"]

ENV_TOL = "FOCK_TOEPLITZ_TOL"


class UsageError(Exception):
    """Malformed invocation: bad symbol JSON, bad scalar, bad config."""


@dataclass(frozen=True)
class RunConfig:
    truncation: int = 64
    tol: float = 1e-10
    fmt: str = "json"
    output: str | None = None
    x_samples: tuple[float, ...] = composition.DEFAULT_X_SAMPLES
    tol_explicit: bool = False
    truncation_explicit: bool = False

    def __post_init__(self) -> None:
        if self.truncation < 2:
            raise UsageError(f"truncation must be >= 2, got {self.truncation}")
        if not (self.tol > 0):
            raise UsageError(f"tol must be positive, got {self.tol}")
        if self.fmt not in ("json", "csv"):
            raise UsageError(f"format must be json or csv, got {self.fmt!r}")


# ---------------------------------------------------------------------------
# deterministic output rendering


def _fmt_float(x: float) -> str:
    return f"{float(x):.17g}"


def render_json(obj) -> str:
    """Fixed-order JSON with floats at 17 significant digits."""
    pieces: list[str] = []
    _render(obj, pieces)
    return "".join(pieces)


def _render(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)))
            out.append(":")
            _render(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _render(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot render {type(obj).__name__} deterministically")


def _render_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt_float(v) if isinstance(v, float) else str(v) for v in row))
        buf.write("\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# input parsing


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` (or plain ``a``, ``bi``); spaces are tolerated."""
    compact = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(compact)
    except ValueError as exc:
        raise UsageError(f"cannot parse complex scalar {text!r}; expected forms like 1.28+0.96i") from exc


def _load_symbol(spec_text: str) -> symbols.Symbol:
    """Symbol from an inline JSON string or ``@path`` to a JSON file."""
    if spec_text.startswith("@"):
        try:
            with open(spec_text[1:], "r", encoding="utf-8") as fh:
                spec_text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read symbol file {spec_text[1:]!r}: {exc}") from exc
    try:
        obj = json.loads(spec_text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"symbol is not valid JSON: {exc}") from exc
    try:
        return symbols.symbol_from_json(obj)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _parse_x_samples(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise UsageError(f"bad x-samples list {text!r}; expected comma-separated numbers") from exc
    if not values:
        raise UsageError("x-samples list is empty")
    return values


_CONFIG_KEYS = {"truncation", "tol", "format", "output", "x_samples"}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, environment, config file, and flags (in rising priority)."""
    cfg = RunConfig()

    env_tol = os.environ.get(ENV_TOL)
    if env_tol is not None:
        try:
            cfg = replace(cfg, tol=float(env_tol), tol_explicit=True)
        except ValueError as exc:
            raise UsageError(f"bad {ENV_TOL} value {env_tol!r}") from exc

    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config!r}: {exc}") from exc
        if not isinstance(raw, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(raw) - _CONFIG_KEYS
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        if "truncation" in raw:
            cfg = replace(cfg, truncation=int(raw["truncation"]), truncation_explicit=True)
        if "tol" in raw:
            cfg = replace(cfg, tol=float(raw["tol"]), tol_explicit=True)
        if "format" in raw:
            cfg = replace(cfg, fmt=str(raw["format"]))
        if "output" in raw:
            cfg = replace(cfg, output=raw["output"])
        if "x_samples" in raw:
            if not isinstance(raw["x_samples"], list):
                raise UsageError("config x_samples must be a list of numbers")
            cfg = replace(cfg, x_samples=tuple(float(x) for x in raw["x_samples"]))

    if args.truncation is not None:
        cfg = replace(cfg, truncation=args.truncation, truncation_explicit=True)
    if args.tol is not None:
        cfg = replace(cfg, tol=args.tol, tol_explicit=True)
    if args.fmt is not None:
        cfg = replace(cfg, fmt=args.fmt)
    if args.output is not None:
        cfg = replace(cfg, output=args.output)
    if getattr(args, "x_samples", None) is not None:
        cfg = replace(cfg, x_samples=_parse_x_samples(args.x_samples))
    return cfg


# ---------------------------------------------------------------------------
# subcommand implementations; each returns the rendered output text


def _cmd_gamma(args, cfg: RunConfig) -> str:
    symbol = _load_symbol(args.symbol)
    seq = quadrature.gamma_sequence(symbol, cfg.truncation, tol=cfg.tol, method=args.method)
    if cfg.fmt == "csv":
        rows = [
            [n, float(v.real), float(v.imag), float(e)]
            for n, (v, e) in enumerate(zip(seq.values, seq.abs_err))
        ]
        return _render_csv(["n", "re", "im", "abs_err"], rows)
    return render_json(seq.to_json())


def _cmd_matrix(args, cfg: RunConfig) -> str:
    symbol = _load_symbol(args.symbol)
    op = fock.toeplitz_matrix(symbol, cfg.truncation, tol=cfg.tol)
    if cfg.fmt == "csv":
        rows = [
            [m, n, float(op.entries[m, n].real), float(op.entries[m, n].imag)]
            for m in range(op.dim)
            for n in range(op.dim)
        ]
        return _render_csv(["m", "n", "re", "im"], rows)
    flat = [
        [float(v.real), float(v.imag)] for v in op.entries.reshape(-1)
    ]  # row-major complex pairs
    return render_json({"symbol": symbols.symbol_to_json(symbol), "dim": op.dim, "entries": flat})


def _cmd_compose(args, cfg: RunConfig) -> str:
    phi = _load_symbol(args.phi)
    psi = _load_symbol(args.psi)
    report = composition.compose_radial(
        phi, psi, n_entries=cfg.truncation, x_samples=cfg.x_samples, tol=cfg.tol
    )
    _require_json(cfg, "compose")
    return render_json(report.to_json())


def _cmd_diamond(args, cfg: RunConfig) -> str:
    phi = _load_symbol(args.phi)
    psi = _load_symbol(args.psi)
    result = calculus.diamond(phi, psi)
    _require_json(cfg, "diamond")
    return render_json(
        {
            "phi": symbols.symbol_to_json(phi),
            "psi": symbols.symbol_to_json(psi),
            "result": symbols.symbol_to_json(result),
        }
    )


def _cmd_wick(args, cfg: RunConfig) -> str:
    symbol = _load_symbol(args.symbol)
    seq = quadrature.gamma_sequence(symbol, cfg.truncation, tol=cfg.tol)
    radii = np.linspace(0.0, args.r_max, args.points)
    values = [calculus.wick_from_gamma(seq, float(r), tol=cfg.tol) for r in radii]
    if cfg.fmt == "csv":
        rows = [[float(r), v.real, v.imag] for r, v in zip(radii, values)]
        return _render_csv(["r", "re", "im"], rows)
    return render_json(
        {
            "symbol": symbols.symbol_to_json(symbol),
            "points": [
                {"r": float(r), "re": v.real, "im": v.imag} for r, v in zip(radii, values)
            ],
        }
    )


def _cmd_heat(args, cfg: RunConfig) -> str:
    symbol = _load_symbol(args.symbol)
    result = calculus.heat_transform(symbol, args.t)
    _require_json(cfg, "heat")
    return render_json(
        {
            "t": args.t,
            "input": symbols.symbol_to_json(symbol),
            "result": symbols.symbol_to_json(result),
        }
    )


def _cmd_spectrum(args, cfg: RunConfig) -> str:
    symbol = _load_symbol(args.symbol)
    seq = quadrature.gamma_sequence(symbol, cfg.truncation, tol=cfg.tol)
    prefix = fock.spectrum_radial(seq)
    _require_json(cfg, "spectrum")
    return render_json(
        {
            "symbol": symbols.symbol_to_json(symbol),
            "label": prefix.label,
            "points": [{"re": p.real, "im": p.imag} for p in prefix.points],
        }
    )


def _cmd_classify(args, cfg: RunConfig) -> str:
    theta = parse_complex(args.theta)
    tol = cfg.tol if cfg.tol_explicit else 1e-9
    verdict = composition.classify_obstruction(theta, tol=tol)
    _require_json(cfg, "classify")
    return render_json(verdict.to_json())


def _cmd_verify_example(args, cfg: RunConfig) -> str:
    n = cfg.truncation if cfg.truncation_explicit else 40
    report = composition.audit_worked_example(n_entries=n, tol=min(cfg.tol, 1e-12))
    _require_json(cfg, "verify-paper-example")
    return render_json(report.to_json())


def _require_json(cfg: RunConfig, command: str) -> None:
    if cfg.fmt != "json":
        raise UsageError(f"command {command!r} only supports --format json")


# ---------------------------------------------------------------------------
# argument parsing and entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-N", "--truncation", type=int, default=None, help="truncation dimension")
    common.add_argument("--tol", type=float, default=None, help="tolerance")
    common.add_argument(
        "--format", dest="fmt", choices=["json", "csv"], default=None, help="output format"
    )
    common.add_argument("-o", "--output", default=None, help="write output to this path")
    common.add_argument("--config", default=None, help="JSON config file")

    parser = argparse.ArgumentParser(
        prog="fock-toeplitz",
        description="Toeplitz-operator calculus on the Segal-Bargmann space",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma", parents=[common], help="gamma sequence of a radial symbol")
    p.add_argument("--symbol", required=True, help="symbol JSON (inline or @file)")
    p.add_argument(
        "--method", choices=["auto", "closed", "quadrature"], default="auto",
        help="computation path",
    )
    p.set_defaults(run=_cmd_gamma)

    p = sub.add_parser("matrix", parents=[common], help="truncated Toeplitz matrix")
    p.add_argument("--symbol", required=True)
    p.set_defaults(run=_cmd_matrix)

    p = sub.add_parser("compose", parents=[common], help="composition report for T_phi T_psi")
    p.add_argument("--phi", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--x-samples", dest="x_samples", default=None, help="comma-separated x values")
    p.set_defaults(run=_cmd_compose)

    p = sub.add_parser("diamond", parents=[common], help="diamond product of polynomial symbols")
    p.add_argument("--phi", required=True)
    p.add_argument("--psi", required=True)
    p.set_defaults(run=_cmd_diamond)

    p = sub.add_parser("wick", parents=[common], help="Wick symbol of T_symbol on a radius grid")
    p.add_argument("--symbol", required=True)
    p.add_argument("--r-max", dest="r_max", type=float, default=2.0)
    p.add_argument("--points", type=int, default=25)
    p.set_defaults(run=_cmd_wick)

    p = sub.add_parser("heat", parents=[common], help="heat transform H_t of a symbol")
    p.add_argument("--symbol", required=True)
    p.add_argument("--t", type=float, required=True)
    p.set_defaults(run=_cmd_heat)

    p = sub.add_parser("spectrum", parents=[common], help="prefix spectrum of a radial operator")
    p.add_argument("--symbol", required=True)
    p.set_defaults(run=_cmd_spectrum)

    p = sub.add_parser("classify", parents=[common], help="obstruction classification of theta")
    p.add_argument("--theta", required=True, help="complex scalar, e.g. 1.28+0.96i")
    p.set_defaults(run=_cmd_classify)

    p = sub.add_parser(
        "verify-paper-example", parents=[common],
        help="run the built-in worked example end to end",
    )
    p.set_defaults(run=_cmd_verify_example)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        text = args.run(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 4

    if cfg.output is not None:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
