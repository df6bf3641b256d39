"""Command line surface binding the library into reproducible runs.

Exit codes: 0 success or positive verdict, 2 well-formed input with a
negative verdict (infeasible, not normal, not decodable at the requested
delay), 1 malformed input or usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from typing import Dict, List, Optional, Sequence

from . import decoder as dec
from .encoder import NotNormalError, classify, derive_geks, gek_at_sink
from .field import Matrix
from .generate import random_instance, random_source_stream
from .network import CncInstance, acyclicity, encoding_topology
from .simulator import NotFeasibleError, received_at, simulate
from .textio import (
    ParseError,
    format_stream,
    parse_document,
    render_document,
    render_field,
)

OK, NEGATIVE, INPUT_ERROR = 0, 2, 1


class _CliParser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are input errors, exit 1
        self.print_usage(sys.stderr)
        raise SystemExit(INPUT_ERROR)


def default_horizon(n: int, max_delay: int) -> int:
    """Derivation depth covering the recursion plus the deepest delay probe."""
    return 2 * n + max_delay


def _matrix_text(m: Matrix) -> str:
    return ";".join(",".join(str(x) for x in row) for row in m.data)


def _digest(matrices: Sequence[Matrix]) -> str:
    h = hashlib.sha256("|".join(_matrix_text(m) for m in matrices).encode())
    return h.hexdigest()[:12]


class Report:
    """Sorted key=value report, the machine-readable run record."""

    def __init__(self) -> None:
        self.pairs: Dict[str, str] = {}

    def put(self, key: str, value) -> None:
        if isinstance(value, bool):
            value = "true" if value else "false"
        self.pairs[key] = str(value)

    def machine(self) -> str:
        return "\n".join(f"{k}={self.pairs[k]}" for k in sorted(self.pairs)) + "\n"

    def text(self) -> str:
        width = max((len(k) for k in self.pairs), default=0)
        return "\n".join(f"{k.ljust(width)}  {self.pairs[k]}" for k in sorted(self.pairs)) + "\n"


def _emit(report: Report, args) -> None:
    body = report.machine() if args.format == "machine" else report.text()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _read_document(path: str):
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _describe_instance(instance: CncInstance, report: Report) -> None:
    g = instance.graph
    report.put("field", render_field(instance.field))
    report.put("omega", g.omega)
    report.put("channels", g.n)
    report.put("nodes", len(g.nodes))
    report.put("sinks", ",".join(g.sinks) if g.sinks else "-")


def _describe_classification(instance: CncInstance, report: Report):
    fr = classify(instance)
    report.put("et_k0_acyclic", fr.et_k0_acyclic)
    report.put("k0_nilpotent", fr.k0_nilpotent)
    report.put("k0_nilpotency_index", fr.k0_nilpotency_index if fr.k0_nilpotent else "-")
    report.put("i_minus_k0_invertible", fr.i_minus_k0_invertible)
    report.put("normal", fr.normal)
    report.put("practically_feasible", fr.practically_feasible)
    report.put("et_kz_cyclic", not acyclicity(encoding_topology(instance, "kz")).acyclic)
    if fr.k0_nilpotent and not fr.et_k0_acyclic:
        report.put("note", "algebraically normal, physical realizability not guaranteed")
    return fr


def cmd_classify(args) -> int:
    doc = parse_document(_read_document(args.document))
    report = Report()
    _describe_instance(doc.instance, report)
    fr = _describe_classification(doc.instance, report)
    _emit(report, args)
    return OK if fr.practically_feasible else NEGATIVE


def cmd_derive(args) -> int:
    doc = parse_document(_read_document(args.document))
    instance = doc.instance
    horizon = args.horizon if args.horizon is not None else default_horizon(instance.graph.n, 0)
    report = Report()
    _describe_instance(instance, report)
    report.put("horizon", horizon)
    try:
        transfer = derive_geks(instance, horizon)
    except NotNormalError as exc:
        report.put("normal", False)
        report.put("error", str(exc))
        _emit(report, args)
        return NEGATIVE
    report.put("normal", True)
    for t, coeff in enumerate(transfer.coeffs):
        report.put(f"gek.t{t}", _matrix_text(coeff))
    for sink in instance.graph.sinks:
        restricted = gek_at_sink(transfer, instance, sink)
        report.put(f"sink.{sink}.gek.digest", _digest(restricted.coeffs))
    _emit(report, args)
    return OK


def cmd_check(args) -> int:
    doc = parse_document(_read_document(args.document))
    instance = doc.instance
    if not instance.graph.sinks:
        raise ParseError("check needs at least one declared sink")
    max_delay = args.max_delay if args.max_delay is not None else instance.graph.n
    horizon = args.horizon if args.horizon is not None else default_horizon(instance.graph.n, max_delay)
    report = Report()
    _describe_instance(instance, report)
    fr = _describe_classification(instance, report)
    if not fr.normal:
        report.put("error", "not normal: no unique transfer matrix")
        _emit(report, args)
        return NEGATIVE
    transfer = derive_geks(instance, horizon)
    all_ok = True
    for sink in instance.graph.sinks:
        restricted = gek_at_sink(transfer, instance, sink)
        minimal = dec.minimal_delay(restricted, max_delay)
        key = f"sink.{sink}"
        report.put(f"{key}.minimal_delay", "-" if minimal is None else minimal)
        probe = args.delay if args.delay is not None else minimal
        if probe is None:
            all_ok = False
            continue
        verdict = dec.check_decodable(restricted, probe)
        report.put(f"{key}.delay", probe)
        report.put(f"{key}.necessary_ok", verdict.necessary_ok)
        report.put(f"{key}.rank_l", verdict.rank_l)
        report.put(f"{key}.rank_lminus1", verdict.rank_lminus1)
        report.put(f"{key}.decodable", verdict.decodable)
        if verdict.decodable:
            matrix = dec.build_decoding_matrix(restricted, probe)
            report.put(f"{key}.decoding_digest", _digest(matrix.blocks))
        else:
            report.put(
                f"{key}.reason",
                f"rank step {verdict.rank_l - verdict.rank_lminus1} < omega {verdict.omega}",
            )
            all_ok = False
    _emit(report, args)
    return OK if all_ok else NEGATIVE


def _source_stream(doc, args, omega, field):
    if doc.source_stream is not None:
        return list(doc.source_stream)
    if args.seed is None:
        raise ParseError("document has no input lines; supply --seed for a random stream")
    slots = (args.horizon if args.horizon is not None else default_horizon(0, 8)) + 1
    return list(random_source_stream(args.seed, field, omega, slots))


def cmd_simulate(args) -> int:
    doc = parse_document(_read_document(args.document))
    instance = doc.instance
    stream_in = _source_stream(doc, args, instance.graph.omega, instance.field)
    horizon = args.horizon if args.horizon is not None else len(stream_in) - 1
    stream_in = stream_in[: horizon + 1]
    try:
        stream = simulate(instance, stream_in, horizon)
    except NotFeasibleError as exc:
        sys.stderr.write(f"infeasible: {exc}\n")
        return NEGATIVE
    sys.stdout.write(format_stream(stream))
    return OK


def cmd_decode(args) -> int:
    doc = parse_document(_read_document(args.document))
    instance = doc.instance
    if not instance.graph.sinks:
        raise ParseError("decode needs at least one declared sink")
    stream_in = _source_stream(doc, args, instance.graph.omega, instance.field)
    horizon = args.horizon if args.horizon is not None else len(stream_in) - 1
    stream_in = stream_in[: horizon + 1]
    max_delay = args.max_delay if args.max_delay is not None else instance.graph.n
    max_delay = min(max_delay, horizon)  # the window cannot outgrow the stream
    report = Report()
    _describe_instance(instance, report)
    try:
        stream = simulate(instance, stream_in, horizon)
    except NotFeasibleError as exc:
        report.put("error", f"infeasible: {exc}")
        _emit(report, args)
        return NEGATIVE
    transfer = derive_geks(instance, horizon)
    all_ok = True
    for sink in instance.graph.sinks:
        key = f"sink.{sink}"
        restricted = gek_at_sink(transfer, instance, sink)
        delay = args.delay if args.delay is not None else dec.minimal_delay(restricted, max_delay)
        if delay is None or not dec.check_decodable(restricted, delay).decodable:
            report.put(f"{key}.decodable", False)
            all_ok = False
            continue
        matrix = dec.build_decoding_matrix(restricted, delay)
        decoded = dec.sequential_decode(restricted, matrix, received_at(stream, instance, sink))
        report.put(f"{key}.delay", delay)
        expected = stream_in[: len(decoded)]
        report.put(f"{key}.recovered_slots", len(decoded))
        report.put(f"{key}.roundtrip", list(map(tuple, expected)) == decoded)
        for t, vec in enumerate(decoded):
            report.put(f"{key}.x{t}", ",".join(str(v) for v in vec))
        if list(map(tuple, expected)) != decoded:
            all_ok = False
    _emit(report, args)
    return OK if all_ok else NEGATIVE


def cmd_random(args) -> int:
    from .field import Field

    field = Field(args.order)
    instance = random_instance(
        args.seed,
        field,
        omega=args.omega,
        relays=args.relays,
        extra_channels=args.extra_channels,
        sinks=args.sinks,
        cycle_density=args.cycle_density,
        feasible=not args.allow_infeasible,
    )
    sys.stdout.write(render_document(instance))
    if args.max_delay is None:
        return OK
    horizon = default_horizon(instance.graph.n, args.max_delay)
    transfer = derive_geks(instance, horizon)
    ok = True
    for sink in instance.graph.sinks:
        restricted = gek_at_sink(transfer, instance, sink)
        minimal = dec.minimal_delay(restricted, args.max_delay)
        sys.stderr.write(f"# sink {sink}: minimal delay {minimal}\n")
        ok = ok and minimal is not None
    return OK if ok else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = _CliParser(prog="convnc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, document=True):
        if document:
            p.add_argument("document", help="instance file, or - for stdin")
        p.add_argument("--horizon", type=int, default=None, help="series truncation depth T")
        p.add_argument("--delay", type=int, default=None, help="decoding delay L to probe")
        p.add_argument("--max-delay", type=int, default=None, help="largest delay to scan")
        p.add_argument("--seed", type=int, default=None, help="seed for generated randomness")
        p.add_argument("--report", default=None, help="write the report to this path")
        p.add_argument("--format", choices=("text", "machine"), default="text")

    for name, fn in (
        ("classify", cmd_classify),
        ("derive", cmd_derive),
        ("check", cmd_check),
        ("simulate", cmd_simulate),
        ("decode", cmd_decode),
    ):
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("random", help="emit a reproducible random instance document")
    common(p, document=False)
    p.add_argument("--order", type=int, default=2, help="field order")
    p.add_argument("--omega", type=int, default=2)
    p.add_argument("--relays", type=int, default=3)
    p.add_argument("--extra-channels", type=int, default=5)
    p.add_argument("--sinks", type=int, default=1)
    p.add_argument("--cycle-density", type=float, default=0.3)
    p.add_argument("--allow-infeasible", action="store_true")
    p.set_defaults(fn=cmd_random)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "random" and args.seed is None:
        sys.stderr.write("random needs an explicit --seed\n")
        return INPUT_ERROR
    try:
        return args.fn(args)
    except ParseError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return INPUT_ERROR
    except ValueError as exc:
        sys.stderr.write(f"invalid request: {exc}\n")
        return INPUT_ERROR
    except OSError as exc:
        sys.stderr.write(f"io error: {exc}\n")
        return INPUT_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
