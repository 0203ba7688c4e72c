"""Command-line front end: demo, attack, verify, experiment.

Exit codes: 0 success, 1 the run completed but the attack/verification
failed, 2 usage errors (unknown preset, malformed files, unwritable output).
Reports and transcripts are JSON; human summaries go to stdout.  The
environment variable TRIDECOMP_OUT_DIR sets the default output directory.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import __version__
from .attack import AttackConfig, AttackUsageError, run_attack
from .experiment import (
    ExperimentSpec,
    default_out_dir,
    normalize_report,
    run_experiment,
    save_report,
    summarize_point,
)
from .identities import verify_preset
from .protocol import (
    PRESETS,
    UnknownPreset,
    default_params,
    load_transcript,
    run_session,
    save_transcript,
    transcript_to_dict,
)

USAGE_ERROR = 2
FAILURE = 1


def _out_path(arg: str | None, default_name: str) -> str | None:
    if arg is None:
        return None
    if arg == "-":
        return "-"
    if os.path.isdir(arg):
        return os.path.join(arg, default_name)
    return arg


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out in (None, "-"):
        print(text)
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _cmd_demo(args: argparse.Namespace) -> int:
    try:
        params = default_params(args.preset, args.seed)
    except UnknownPreset as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if args.secret_length is not None:
        params = dataclasses.replace(params, secret_length=args.secret_length)
    session = run_session(params, args.seed)
    doc = transcript_to_dict(session, include_honest=True)
    for name in "uvwpqr":
        print(f"{name} = {doc['messages'][name]}")
    print(f"alice key digest = {session.alice_key.digest}")
    print(f"bob   key digest = {session.bob_key.digest}")
    agree = session.alice_key == session.bob_key
    print(f"keys agree: {str(agree).lower()}")
    if args.out:
        out = _out_path(args.out, f"transcript-{args.preset}-{args.seed}.json")
        save_transcript(session, out, include_honest=not args.public_only)
        print(f"transcript written to {out}")
    return 0 if agree else FAILURE


def _attack_config(args: argparse.Namespace) -> AttackConfig:
    base: dict = {}
    if args.config:
        with open(args.config) as fh:
            base = json.load(fh)
    for name in (
        "solver", "k1", "k2", "k3", "k4", "probe_length",
        "brute_max_len", "brute_cap", "burau_p", "burau_t0", "seed",
    ):
        val = getattr(args, name, None)
        if val is not None:
            base[name] = val
    if args.k is not None:
        base.update({"k1": args.k, "k2": args.k, "k3": args.k, "k4": args.k})
    return AttackConfig(**base)


def _cmd_attack(args: argparse.Namespace) -> int:
    try:
        if args.transcript:
            transcript, params, honest_key = load_transcript(args.transcript)
        else:
            if not args.preset:
                print("error: need --preset or --transcript", file=sys.stderr)
                return USAGE_ERROR
            params = default_params(args.preset, args.params_seed)
            if args.secret_length is not None:
                params = dataclasses.replace(params, secret_length=args.secret_length)
            session = run_session(params, args.seed if args.seed is not None else 0)
            transcript, honest_key = session.transcript, session.key.key
        config = _attack_config(args)
    except (UnknownPreset, AttackUsageError, OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON: {exc}", file=sys.stderr)
        return USAGE_ERROR
    report = run_attack(transcript, params, config, honest_key=honest_key)
    out = _out_path(args.out, "attack-report.json")
    _emit(report.to_dict(), out)
    if report.success:
        return 0
    if report.key_recovered == "candidate-unverified":
        return 0
    return FAILURE


def _cmd_verify(args: argparse.Namespace) -> int:
    try:
        report = verify_preset(args.preset, args.trials, args.seed)
    except UnknownPreset as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    for name, passed in sorted(report.per_identity.items()):
        print(f"{name}: {passed}/{report.trials}")
    print(
        f"{report.preset}: {report.checks} checks on {report.trials} sessions, "
        f"{len(report.failures)} failures"
    )
    if args.out:
        _emit(report.to_dict(), _out_path(args.out, f"verify-{args.preset}.json"))
    return 0 if report.all_passed else FAILURE


def _cmd_experiment(args: argparse.Namespace) -> int:
    try:
        if args.spec:
            with open(args.spec) as fh:
                spec = ExperimentSpec.from_dict(json.load(fh))
        else:
            if not args.preset:
                print("error: need --spec or --preset", file=sys.stderr)
                return USAGE_ERROR
            spec = ExperimentSpec(
                preset=args.preset,
                trials=args.trials,
                base_seed=args.seed or 0,
                solver=args.solver or "bruteforce",
                secret_length=args.secret_length,
            )
        report = run_experiment(spec, jobs=args.jobs)
    except (UnknownPreset, OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON: {exc}", file=sys.stderr)
        return USAGE_ERROR
    for point in report["points"]:
        print(summarize_point(point))
    out = args.out or spec.out
    if out:
        path = _out_path(out, f"experiment-{spec.preset}.json")
        if path == "-":
            _emit(report, "-")
        else:
            try:
                save_report(
                    normalize_report(report) if args.strip_timings else report, path
                )
            except OSError as exc:
                print(f"error: cannot write {path}: {exc}", file=sys.stderr)
                return USAGE_ERROR
            print(f"report written to {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tridecomp",
        description="Triple-decomposition key exchange: demos, attacks, "
        "identity verification and batch experiments.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    demo = sub.add_parser("demo", help="run one honest exchange")
    demo.add_argument("--preset", required=True, help=f"one of {', '.join(PRESETS)}")
    demo.add_argument("--seed", type=int, default=0)
    demo.add_argument("--secret-length", dest="secret_length", type=int)
    demo.add_argument("--out", help="write the transcript JSON here")
    demo.add_argument(
        "--public-only", action="store_true",
        help="omit the honest-key block from the written transcript",
    )
    demo.set_defaults(func=_cmd_demo)

    attack = sub.add_parser("attack", help="attack a session or transcript file")
    attack.add_argument("--preset")
    attack.add_argument("--transcript", help="transcript JSON produced by demo")
    attack.add_argument("--seed", type=int, help="session seed (with --preset)")
    attack.add_argument("--params-seed", dest="params_seed", type=int, default=0)
    attack.add_argument("--secret-length", dest="secret_length", type=int)
    attack.add_argument("--config", help="attack-config JSON file")
    attack.add_argument(
        "--solver", choices=["bruteforce", "linear", "permutation"]
    )
    attack.add_argument("--k", type=int, help="set all probe counts at once")
    for name in ("k1", "k2", "k3", "k4"):
        attack.add_argument(f"--{name}", dest=name, type=int)
    attack.add_argument("--probe-length", dest="probe_length", type=int)
    attack.add_argument("--brute-max-len", dest="brute_max_len", type=int)
    attack.add_argument("--brute-cap", dest="brute_cap", type=int)
    attack.add_argument("--burau-p", dest="burau_p", type=int)
    attack.add_argument("--burau-t0", dest="burau_t0", type=int)
    attack.add_argument("--out", help="write the attack report here ('-' = stdout)")
    attack.set_defaults(func=_cmd_attack)

    verify = sub.add_parser("verify", help="run the algebraic identity suite")
    verify.add_argument("--preset", required=True)
    verify.add_argument("--trials", type=int, default=100)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--out")
    verify.set_defaults(func=_cmd_verify)

    exp = sub.add_parser("experiment", help="batch attack trials with a report")
    exp.add_argument("--spec", help="experiment spec JSON file")
    exp.add_argument("--preset")
    exp.add_argument("--trials", type=int, default=10)
    exp.add_argument("--seed", type=int)
    exp.add_argument("--solver", choices=["bruteforce", "linear", "permutation"])
    exp.add_argument("--secret-length", dest="secret_length", type=int)
    exp.add_argument("--jobs", type=int, default=1)
    exp.add_argument(
        "--strip-timings", action="store_true",
        help="normalise the written report for byte-for-byte comparisons",
    )
    exp.add_argument("--out", default=None)
    exp.set_defaults(func=_cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
