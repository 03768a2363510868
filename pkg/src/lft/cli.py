"""Command-line front end.

Subcommands: ``transform`` (run one of the three local Fourier transforms),
``verify`` (re-derive a transformed document through the matrix/Hensel path
and report per-identity status), ``info`` (slope/irregularity/rank), and
``canon`` (normal form).  Output is deterministic JSON; exit codes are 0 on
success, 1 on validation errors, 2 on verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .connections import Connection, canonicalize_connection, invariants
from .errors import LftError, ValidationError
from .oracle import verify_transform
from .rings import backend_from_spec
from .serialize import connection_from_doc, connection_to_doc
from .transforms import TransformKind, transform_connection

Q = Fraction

KINDS = [k.value for k in TransformKind]


@dataclass
class JobSpec:
    command: str
    input_path: str
    output_path: str | None = None
    kind: str | None = None
    precision: int | None = None
    branch: str = "auto"
    backend: str | None = None
    against_path: str | None = None


def _load_doc(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {path}: {exc}") from exc


def _load_connection(job: JobSpec, path: str):
    ring = backend_from_spec(job.backend) if job.backend else None
    return connection_from_doc(_load_doc(path), ring)


def _check_precision(job: JobSpec, conn: Connection):
    if job.precision is None:
        raise ValidationError("this command needs --prec")
    for idx, piece in enumerate(conn.pieces):
        if job.precision < piece.order + 1:
            raise ValidationError(
                f"precision {job.precision} is below the floor {piece.order + 1} "
                f"required by piece {idx}"
            )


def run(job: JobSpec) -> tuple[int, dict]:
    """Execute a job; returns (exit code, output document)."""
    conn, ring = _load_connection(job, job.input_path)
    if job.command == "info":
        rows = []
        for piece in conn.pieces:
            slope, irr, rank = invariants(piece)
            rows.append({"slope": str(slope), "irregularity": irr, "rank": rank})
        return 0, {
            "pieces": rows,
            "total": {"irregularity": conn.irregularity, "rank": conn.rank},
        }
    if job.command == "canon":
        return 0, connection_to_doc(canonicalize_connection(conn), ring)
    kind = TransformKind.parse(job.kind)
    _check_precision(job, conn)
    if job.command == "transform":
        out, witnesses = transform_connection(conn, kind, job.precision, job.branch)
        meta = {
            "kind": kind.value,
            "precision": job.precision,
            "pieces": [
                {
                    "branch": ring.format(w.branch),
                    "shift": str(Q(w.order, 2)),
                    "galois_reduced": ring.has_root_of_unity(
                        w.order + w.ram_in if kind is TransformKind.ZERO_TO_INF
                        else abs(w.ram_in - w.order)
                    ),
                }
                for w in witnesses
            ],
        }
        return 0, connection_to_doc(out, ring, meta)
    if job.command == "verify":
        against_conn, _ = _load_connection(job, job.against_path)
        if len(against_conn.pieces) != len(conn.pieces):
            raise ValidationError(
                "transformed document has a different number of pieces than the input"
            )
        reports = [
            verify_transform(p_in, p_out, kind, job.precision, job.branch)
            for p_in, p_out in zip(conn.pieces, against_conn.pieces)
        ]
        ok = all(r.ok for r in reports)
        doc = {"ok": ok, "reports": [r.to_doc() for r in reports]}
        return (0 if ok else 2), doc
    raise ValidationError(f"unknown command {job.command!r}")


def _emit(doc: dict, path: str | None):
    text = json.dumps(doc, indent=2) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lft",
        description="Exact local Fourier transforms of formal connections.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_kind):
        p.add_argument("-i", "--input", required=True, help="input connection JSON")
        p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
        p.add_argument("--backend", default=None, help="'rational' or 'extension(N,m,a)'")
        if needs_kind:
            p.add_argument("--kind", required=True, choices=KINDS)
            p.add_argument("--prec", required=True, type=int, help="output precision")
            p.add_argument("--branch", default="auto", help="explicit root, or 'auto'")

    common(sub.add_parser("transform", help="apply a local Fourier transform"), True)
    p_verify = sub.add_parser("verify", help="cross-check a transformed document")
    common(p_verify, True)
    p_verify.add_argument(
        "--against", required=True, help="transformed connection JSON to verify"
    )
    common(sub.add_parser("info", help="slope, irregularity and rank per piece"), False)
    common(sub.add_parser("canon", help="canonicalize a connection"), False)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = JobSpec(
        command=args.command,
        input_path=args.input,
        output_path=args.output,
        kind=getattr(args, "kind", None),
        precision=getattr(args, "prec", None),
        branch=getattr(args, "branch", "auto"),
        backend=args.backend,
        against_path=getattr(args, "against", None),
    )
    try:
        code, doc = run(job)
    except LftError as exc:
        err = {"error": {"code": exc.code, "message": str(exc)}}
        sys.stderr.write(json.dumps(err) + "\n")
        return 1
    _emit(doc, job.output_path)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
