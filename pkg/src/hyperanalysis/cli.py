"""Command-line front end: ``hyperanalysis run|verify|tables|expand``.

Exit codes: 0 success, 1 decode or verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .circuits import CircuitKind, run_hbsa, run_hgsa
from .decoder import decode_hbsa, decode_hgsa
from .elements import detector_port
from .errors import NonCanonicalLabel
from .hilbert import (
    BellLabel,
    GhzLabel,
    HyperBellLabel,
    HyperGhzLabel,
    canonicalize_ghz,
    make_hyper_bell,
    make_hyper_ghz,
)
from .oracle import expand_in_spbsm_basis, verify_all
from .tables import render

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_VERIFY_PHOTONS = 8


class UsageError(Exception):
    pass


def _photons(args) -> int:
    if args.mode == "bell":
        if args.photons not in (None, 2):
            raise UsageError("--mode bell works on exactly 2 photons")
        return 2
    n = 3 if args.photons is None else args.photons
    if n < 2:
        raise UsageError("--photons must be at least 2")
    return n


def _ghz_label(text: str, n: int) -> GhzLabel:
    label = GhzLabel.parse(text)
    if label.n != n:
        raise UsageError(f"GHZ label {text!r} has {label.n} bits but --photons is {n}")
    if not label.is_canonical:
        raise NonCanonicalLabel(label, canonicalize_ghz(label.sign, label.bits))
    return label


def _label(args, n: int):
    if args.mode == "bell":
        return HyperBellLabel(BellLabel.parse(args.pol or "Phi+"), BellLabel.parse(args.spatial or "Phi+"))
    zeros = "+:" + "0" * n
    return HyperGhzLabel(_ghz_label(args.pol or zeros, n), _ghz_label(args.spatial or zeros, n))


def _state(label, n: int):
    return make_hyper_bell(label, 2) if isinstance(label, HyperBellLabel) else make_hyper_ghz(label)


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print(text)


def cmd_run(args) -> int:
    n = _photons(args)
    label = _label(args, n)
    rng = np.random.default_rng(args.seed)
    if args.mode == "bell":
        record, _ = run_hbsa(_state(label, n), rng)
        decoded = decode_hbsa(record)
    else:
        record, _ = run_hgsa(_state(label, n), n, rng)
        decoded = decode_hgsa(record)
    ok = decoded == label
    data = {
        "input": str(label),
        "probes": [str(p) for p in record.probe_outcomes],
        "spbsm": [str(o) for o in record.spbsm_outcomes],
        "ports": [str(detector_port(o)) for o in record.spbsm_outcomes],
        "decoded": str(decoded),
        "seed": args.seed,
        "pass": ok,
    }
    text = "\n".join([
        f"input:   {data['input']}",
        f"probes:  {' '.join(data['probes'])}",
        f"spbsm:   {' '.join(data['spbsm'])}",
        f"ports:   {' '.join(data['ports'])}",
        f"decoded: {data['decoded']}",
        f"seed:    {data['seed']}",
        f"pass:    {'true' if ok else 'false'}",
    ])
    _emit(args, text, data)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    n = _photons(args)
    if not 2 <= n <= MAX_VERIFY_PHOTONS:
        raise UsageError(f"--photons must lie in [2, {MAX_VERIFY_PHOTONS}] for verify")
    report = verify_all(CircuitKind.HBSA if args.mode == "bell" else CircuitKind.HGSA, n)
    text = "\n".join([report.summary(), *report.failures()])
    data = report.to_dict()
    # timing goes to stderr so stdout stays reproducible
    data.pop("wall_time")
    _emit(args, text, data)
    print(f"verified in {report.wall_time:.2f} s", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_tables(args) -> int:
    text, data = render(args.which)
    _emit(args, text, {"table": args.which, "rows": data})
    return EXIT_OK


def _amplitude_text(a: complex) -> str:
    if abs(a.imag) < 1e-12:
        return f"{a.real:+.4f}"
    return f"{a.real:+.4f}{a.imag:+.4f}j"


def cmd_expand(args) -> int:
    n = _photons(args)
    label = _label(args, n)
    dist = expand_in_spbsm_basis(_state(label, n))
    rows = [
        {"outcome": [str(k) for k in combo], "amplitude": [a.real, a.imag], "probability": abs(a) ** 2}
        for combo, a in dist.entries.items()
    ]
    lines = [f"input: {label}"]
    lines += [f"{' '.join(r['outcome'])}  {_amplitude_text(a)}  {r['probability']:.4f}"
              for r, a in zip(rows, dist.entries.values())]
    _emit(args, "\n".join(lines), {"input": str(label), "entries": rows})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperanalysis",
        description="Simulate and verify complete hyperentangled Bell/GHZ state analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, labels=True):
        p.add_argument("--mode", choices=("bell", "ghz"), default="bell")
        p.add_argument("--photons", type=int, default=None,
                       help="photon count (bell: 2; ghz: default 3)")
        if labels:
            p.add_argument("--pol", help="polarization label, e.g. Phi+ or -:100")
            p.add_argument("--spatial", help="spatial-mode label, e.g. Psi- or +:010")
        p.add_argument("--format", choices=("text", "json"), default="text")

    run = sub.add_parser("run", help="one sampled analyzer run")
    common(run)
    run.add_argument("--seed", type=int, default=0)
    run.set_defaults(func=cmd_run)

    verify = sub.add_parser("verify", help="exhaustive verification over all labels")
    common(verify, labels=False)
    verify.set_defaults(func=cmd_verify)

    tables = sub.add_parser("tables", help="print a generated lookup table")
    tables.add_argument("--which", choices=("I", "II", "III"), required=True)
    tables.add_argument("--format", choices=("text", "json"), default="text")
    tables.set_defaults(func=cmd_tables)

    expand = sub.add_parser("expand", help="expand a state in the product SPBSM basis")
    common(expand)
    expand.set_defaults(func=cmd_expand)
    return parser


_LABEL_FLAGS = ("--pol", "--spatial")


def _glue_label_values(argv: list[str]) -> list[str]:
    """Rewrite ``--pol -:100`` as ``--pol=-:100`` so argparse keeps negative labels."""
    out: list[str] = []
    it = iter(argv)
    for token in it:
        if token in _LABEL_FLAGS:
            value = next(it, None)
            out.append(token if value is None else f"{token}={value}")
        else:
            out.append(token)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_label_values(argv))
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
