"""Command-line surface.

Subcommands:
    mixvol FILE              evaluate a body tuple from a file
    shephard                 build and check a k = 1 matrix (random or file)
    fedotov construct        run the counterexample pipeline
    fedotov search           randomized direct hunt for violations
    fedotov verify FILE      independently re-verify a certificate
    hodge primitive          primitive-space basis, dimensions, form values
    selftest                 run every property suite

Exit status: 0 success, 1 verification failure, 2 usage error. Output for a
fixed command line (including --seed) is byte-identical across runs and
independent of --threads.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from math import comb
from typing import Optional

from .boxes import BoxBody, unit_cube
from .diffop import (
    apply_op,
    h_vector_cube,
    hr_form,
    op_to_json,
    pairing_matrix,
    primitive_space_basis,
    volume_polynomial,
)
from .exactlin import rank, rat_from_str, rat_to_str
from .fedotov import (
    certificate_to_json,
    construct_counterexample,
    load_certificate,
    random_search,
    shephard_verify,
    verify_certificate,
    build_matrix,
)
from .hypmat import CoreTooLargeError
from .mixvol import BodyTuple, mixed_volume, mixed_volume_via_derivatives
from .selftest import random_box, run_all


class UsageError(Exception):
    """Bad flags or parameter bounds; maps to exit status 2."""


@dataclass
class RunConfig:
    """Validated parameters of a single invocation."""

    command: str
    n: Optional[int] = None
    k: Optional[int] = None
    m: Optional[int] = None
    trials: Optional[int] = None
    seed: int = 0
    max_core_size: Optional[int] = None
    format: str = "text"
    output: Optional[str] = None
    threads: int = 1
    path: Optional[str] = None
    scale: int = 1

    def require_degree_bounds(self) -> None:
        if self.n is None or self.k is None:
            raise UsageError("--n and --k are required")
        if self.k < 1 or 2 * self.k > self.n:
            raise UsageError(f"need 1 <= k <= n/2, got n={self.n}, k={self.k}")


def _emit(payload: str, config: RunConfig) -> None:
    if config.output:
        with open(config.output, "w", encoding="utf-8") as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)


def _print(line: str) -> None:
    sys.stdout.write(line + "\n")


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _box_from_entry(n: int, entry: dict) -> BoxBody:
    widths = tuple(rat_from_str(w) for w in entry["widths"])
    offset = entry.get("offset")
    if offset is not None:
        offset = tuple(rat_from_str(o) for o in offset)
    return BoxBody(n, widths, offset)


def cmd_mixvol(config: RunConfig) -> int:
    data = _load_json(config.path)
    n = int(data["n"])
    entries = tuple(
        (_box_from_entry(n, e), int(e.get("multiplicity", 1))) for e in data["bodies"]
    )
    t = BodyTuple(n, entries)
    value = mixed_volume(t)
    cross = mixed_volume_via_derivatives(t)
    if value != cross:  # pragma: no cover - would indicate an engine bug
        _print(f"INTERNAL ERROR: evaluation paths disagree: {value} vs {cross}")
        return 1
    if config.format == "json":
        _emit(json.dumps({"n": n, "mixed_volume": rat_to_str(value)}, indent=2) + "\n", config)
    else:
        _emit(f"mixed volume = {rat_to_str(value)}\n", config)
    return 0


def cmd_shephard(config: RunConfig) -> int:
    if config.path:
        data = _load_json(config.path)
        n = int(data["n"])
        instances = [
            (
                [_box_from_entry(n, e) for e in data["bodies"]],
                [_box_from_entry(n, e) for e in data["c_bodies"]],
            )
        ]
    else:
        if config.n is None or config.m is None:
            raise UsageError("--n and --m are required without --file")
        if config.n < 2:
            raise UsageError("need n >= 2")
        if config.m < 1:
            raise UsageError("need m >= 1")
        instances = []
        for trial in range(config.trials or 1):
            rng = random.Random(f"boxcert:{config.seed}:{trial}")
            instances.append(
                (
                    [random_box(rng, config.n) for _ in range(config.m)],
                    [random_box(rng, config.n) for _ in range(config.n - 2)],
                )
            )
    results = []
    all_ok = True
    for index, (bodies, c_bodies) in enumerate(instances):
        fm = build_matrix(bodies, 1, c_bodies, threads=config.threads)
        report = shephard_verify(fm)
        all_ok &= report.ok
        results.append(
            {
                "instance": index,
                "ok": report.ok,
                "subsets_checked": report.subsets_checked,
                "det": rat_to_str(report.determinant),
                "violations": [v.to_json() for v in report.violations],
            }
        )
    if config.format == "json":
        _emit(json.dumps({"ok": all_ok, "instances": results}, indent=2) + "\n", config)
    else:
        lines = [
            f"instance {r['instance']}: {'ok' if r['ok'] else 'VIOLATION'} "
            f"({r['subsets_checked']} minors, det = {r['det']})"
            for r in results
        ]
        lines.append("all minor signs consistent" if all_ok else "MINOR SIGN VIOLATION")
        _emit("\n".join(lines) + "\n", config)
    return 0 if all_ok else 1


def cmd_fedotov_construct(config: RunConfig) -> int:
    config.require_degree_bounds()
    if config.k < 2:
        raise UsageError("the k = 1 family is hyperbolic; need k >= 2")
    try:
        cert = construct_counterexample(
            config.n,
            config.k,
            threads=config.threads,
            max_core_size=config.max_core_size,
        )
    except CoreTooLargeError as exc:
        _print(f"construction aborted: {exc}")
        return 1
    report = verify_certificate(cert)
    payload = certificate_to_json(cert)
    if config.output:
        _emit(payload, config)
        summary = (
            f"certificate: n={cert.n} k={cert.k} m={len(cert.bodies)} "
            f"subset={list(cert.subset)} det={rat_to_str(cert.subset_det)}"
        )
        _print(summary)
        _print(f"independent verification: {'ok' if report.ok else 'FAILED'}")
    elif config.format == "json":
        sys.stdout.write(payload)
    else:
        _print(
            f"certificate: n={cert.n} k={cert.k} m={len(cert.bodies)} "
            f"subset={list(cert.subset)} det={rat_to_str(cert.subset_det)}"
        )
        _print(f"<x,My> = {rat_to_str(cert.pair_xy)}, <x,Mx> = {rat_to_str(cert.pair_xx)}")
        _print(f"independent verification: {'ok' if report.ok else 'FAILED'}")
    return 0 if report.ok else 1


def cmd_fedotov_search(config: RunConfig) -> int:
    config.require_degree_bounds()
    if config.m is None or config.m < 1:
        raise UsageError("--m is required and must be >= 1")
    trials = config.trials if config.trials is not None else 100
    cert, stats = random_search(
        config.n,
        config.k,
        config.m,
        trials,
        config.seed,
        threads=config.threads,
    )
    ok = True
    if cert is not None:
        ok = bool(verify_certificate(cert))
        if config.output:
            _emit(certificate_to_json(cert), config)
    if config.format == "json":
        result = {
            "trials": stats.trials,
            "found": stats.found,
            "found_trial": stats.found_trial,
            "verified": ok if cert is not None else None,
        }
        sys.stdout.write(json.dumps(result, indent=2) + "\n")
    else:
        if cert is None:
            _print(f"no violation in {stats.trials} trials (absence is not evidence)")
        else:
            _print(
                f"violation at trial {stats.found_trial}: subset="
                f"{list(cert.subset)} det={rat_to_str(cert.subset_det)} "
                f"verified={'ok' if ok else 'FAILED'}"
            )
    return 0 if ok else 1


def cmd_fedotov_verify(config: RunConfig) -> int:
    try:
        cert = load_certificate(config.path)
    except OSError as exc:
        raise UsageError(f"cannot read {config.path}: {exc}") from exc
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        if config.format == "json":
            sys.stdout.write(
                json.dumps({"ok": False, "reason": f"malformed certificate: {exc}"}, indent=2)
                + "\n"
            )
        else:
            _print(f"certificate INVALID: malformed: {exc}")
        return 1
    report = verify_certificate(cert)
    if config.format == "json":
        sys.stdout.write(
            json.dumps({"ok": report.ok, "reason": report.reason}, indent=2) + "\n"
        )
    else:
        if report.ok:
            _print(
                f"certificate OK: n={cert.n} k={cert.k} m={len(cert.bodies)} "
                f"subset={list(cert.subset)} det={rat_to_str(cert.subset_det)}"
            )
        else:
            _print(f"certificate INVALID: {report.reason}")
    return 0 if report.ok else 1


def cmd_hodge_primitive(config: RunConfig) -> int:
    config.require_degree_bounds()
    n, k = config.n, config.k
    cube = unit_cube(n)
    c_bodies = [cube] * (n - 2 * k)
    basis = primitive_space_basis(k, cube, c_bodies)
    expected_dim = comb(n, k) - comb(n, k - 1)
    pairing_rank = rank(pairing_matrix(n, k))
    v_poly = volume_polynomial(n)
    elements = []
    for op in basis:
        value = hr_form(op, op, c_bodies)
        elements.append(
            {
                "operator": op_to_json(op),
                "form_value": rat_to_str(value),
                "signed_value_nonneg": (-1) ** k * value >= 0,
                "kills_volume_polynomial": apply_op(op, v_poly).is_zero,
            }
        )
    ok = len(basis) == expected_dim and pairing_rank == comb(n, k)
    result = {
        "n": n,
        "k": k,
        "h_vector": h_vector_cube(n),
        "dimension": len(basis),
        "expected_dimension": expected_dim,
        "pairing_rank": pairing_rank,
        "expected_pairing_rank": comb(n, k),
        "ok": ok,
        "basis": elements,
    }
    if config.format == "json":
        _emit(json.dumps(result, indent=2) + "\n", config)
    else:
        lines = [
            f"h-vector: {result['h_vector']}",
            f"primitive space dimension: {len(basis)} (expected {expected_dim})",
            f"pairing rank: {pairing_rank} (expected {comb(n, k)})",
        ]
        for idx, element in enumerate(elements):
            lines.append(
                f"basis[{idx}]: form value {element['form_value']}, "
                f"signed sign ok: {element['signed_value_nonneg']}"
            )
        lines.append("all counts consistent" if ok else "COUNT MISMATCH")
        _emit("\n".join(lines) + "\n", config)
    return 0 if ok else 1


def cmd_selftest(config: RunConfig) -> int:
    results = run_all(seed=config.seed, scale=config.scale)
    all_ok = all(ok for _, ok, _ in results)
    if config.format == "json":
        payload = {
            "ok": all_ok,
            "suites": [
                {"name": name, "ok": ok, "detail": detail}
                for name, ok, detail in results
            ],
        }
        _emit(json.dumps(payload, indent=2) + "\n", config)
    else:
        lines = [
            f"{'PASS' if ok else 'FAIL'} {name} - {detail}"
            for name, ok, detail in results
        ]
        lines.append("selftest passed" if all_ok else "selftest FAILED")
        _emit("\n".join(lines) + "\n", config)
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxcert",
        description="Exact mixed volumes of boxes and minor-sign certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, n=False, k=False, m=False, trials=False, seed=False):
        if n:
            p.add_argument("--n", type=int, help="ambient dimension")
        if k:
            p.add_argument("--k", type=int, help="repetition degree")
        if m:
            p.add_argument("--m", type=int, help="number of bodies")
        if trials:
            p.add_argument("--trials", type=int, help="number of instances")
        if seed:
            p.add_argument("--seed", type=int, default=0, help="deterministic seed")
        p.add_argument(
            "--format", choices=("text", "json"), default="text", help="output format"
        )
        p.add_argument("--output", help="write the payload to this path")
        p.add_argument(
            "--threads", type=int, default=1, help="worker cap (does not affect results)"
        )

    p_mix = sub.add_parser("mixvol", help="evaluate a body tuple from a file")
    p_mix.add_argument("file", help="JSON file with n and bodies")
    add_common(p_mix)

    p_she = sub.add_parser("shephard", help="build and check a k=1 matrix")
    p_she.add_argument("--file", help="explicit instance file")
    add_common(p_she, n=True, m=True, trials=True, seed=True)

    p_fed = sub.add_parser("fedotov", help="counterexample pipeline")
    fed_sub = p_fed.add_subparsers(dest="subcommand", required=True)

    p_con = fed_sub.add_parser("construct", help="build a certified violation")
    add_common(p_con, n=True, k=True)
    p_con.add_argument(
        "--max-core-size", type=int, help="fail if the violating subset is larger"
    )

    p_sea = fed_sub.add_parser("search", help="randomized direct search")
    add_common(p_sea, n=True, k=True, m=True, trials=True, seed=True)

    p_ver = fed_sub.add_parser("verify", help="re-verify a certificate file")
    p_ver.add_argument("file", help="certificate path")
    add_common(p_ver)

    p_hod = sub.add_parser("hodge", help="primitive spaces and form values")
    hod_sub = p_hod.add_subparsers(dest="subcommand", required=True)
    p_pri = hod_sub.add_parser("primitive", help="basis, dimension, form values")
    add_common(p_pri, n=True, k=True)

    p_self = sub.add_parser("selftest", help="run every property suite")
    p_self.add_argument("--scale", type=int, default=1, help="instance count multiplier")
    add_common(p_self, seed=True)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    command = args.command
    if getattr(args, "subcommand", None):
        command = f"{args.command} {args.subcommand}"
    config = RunConfig(
        command=command,
        n=getattr(args, "n", None),
        k=getattr(args, "k", None),
        m=getattr(args, "m", None),
        trials=getattr(args, "trials", None),
        seed=getattr(args, "seed", 0),
        max_core_size=getattr(args, "max_core_size", None),
        format=args.format,
        output=getattr(args, "output", None),
        threads=getattr(args, "threads", 1),
        path=getattr(args, "file", None),
        scale=getattr(args, "scale", 1),
    )
    if config.threads < 1:
        raise UsageError("--threads must be at least 1")
    if config.trials is not None and config.trials < 0:
        raise UsageError("--trials must be nonnegative")
    return config


_DISPATCH = {
    "mixvol": cmd_mixvol,
    "shephard": cmd_shephard,
    "fedotov construct": cmd_fedotov_construct,
    "fedotov search": cmd_fedotov_search,
    "fedotov verify": cmd_fedotov_verify,
    "hodge primitive": cmd_hodge_primitive,
    "selftest": cmd_selftest,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return _DISPATCH[config.command](config)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
