"""Command-line front end.

Examples::

    qfclique omega --ring gf:5 --form diag:1,1,2 --scalar 1
    qfclique count --ring gf:5 --form diag:1,1,2 --scalar 1 --format json
    qfclique local-global --ring q --form diag:1,2,3,-7 --scalar 1
    qfclique verify --suite char2

Exit codes: 0 success, 1 verification mismatch, 2 parse error,
3 mathematical precondition violated, 4 oracle size cap or time budget hit.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

import sympy

from qfclique import charzero
from qfclique.algebra import FiniteField, FiniteRing, ResidueRing, is_prime, make_field, make_residue_ring
from qfclique.cliques import classify_case, count_max_cliques
from qfclique.construct import construct_max_clique
from qfclique.errors import InconsistencyError, OracleLimitError, PreconditionError
from qfclique.oracle import DEFAULT_CAP, build_graph
from qfclique.qform import QForm, invariants_ff, is_nondegenerate, make_form, reduce_residue_form
from qfclique.verify import SUITE_NAMES, run_suite, verify_instance

EXIT_MISMATCH = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_ORACLE = 4


class ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


# -- spec parsing -------------------------------------------------------------


@dataclass(frozen=True)
class RingSpec:
    kind: str  # gf, zmod, q, qp, r
    p: int = 0
    k: int = 1

    def __str__(self):
        if self.kind in ("gf", "zmod"):
            return f"{self.kind}:{self.p}" + (f"^{self.k}" if self.k > 1 or self.kind == "zmod" else "")
        return f"qp:{self.p}" if self.kind == "qp" else self.kind

    @property
    def finite(self) -> bool:
        return self.kind in ("gf", "zmod")

    def ring(self) -> FiniteRing:
        return make_field(self.p, self.k) if self.kind == "gf" else make_residue_ring(self.p, self.k)


def parse_ring(text: str) -> RingSpec:
    t = text.strip().lower()
    if t in ("q", "r"):
        return RingSpec(t)
    m = re.fullmatch(r"(gf|zmod|qp):(\d+)(?:\^(\d+))?", t)
    if not m:
        raise ParseError(f"bad ring spec {text!r}; expected gf:p[^k], zmod:p^k, q, qp:p or r")
    kind, p, k = m.group(1), int(m.group(2)), int(m.group(3) or 1)
    if kind == "gf" and not m.group(3) and p > 1 and not is_prime(p):
        # gf:q for a prime power q
        factors = sympy.factorint(p)
        if len(factors) == 1:
            (p, k), = factors.items()
    if not is_prime(p):
        raise ParseError(f"{p} is not prime")
    if kind == "qp" and m.group(3):
        raise ParseError("qp takes a prime, not a prime power")
    if kind == "zmod" and p == 2:
        raise ParseError("zmod needs an odd prime")
    return RingSpec(kind, p, k)


_T = sympy.Symbol("t")


def parse_element(ring: FiniteRing, token: str) -> int:
    """Integer (mapped through Z) or, over GF(p^k), a polynomial in t."""
    tok = token.strip()
    if re.fullmatch(r"[+-]?\d+", tok):
        return ring.from_int(int(tok))
    if isinstance(ring, FiniteField) and ring.k > 1 and re.fullmatch(r"[0-9t+\-*^ ]+", tok):
        try:
            poly = sympy.Poly(sympy.sympify(tok.replace("^", "**")), _T)
        except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
            raise ParseError(f"bad field element {token!r}") from exc
        coeffs = [int(c) % ring.p for c in reversed(poly.all_coeffs())]
        return ring.from_poly(coeffs)
    raise ParseError(f"bad element {token!r} for {ring}")


def parse_rational(token: str) -> Fraction:
    try:
        return Fraction(token.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {token!r}") from exc


def _matrix_rows(body: str) -> list[list[str]]:
    body = body.strip()
    if not (body.startswith("[[") and body.endswith("]]")):
        raise ParseError(f"matrix must look like [[..],[..]], got {body!r}")
    rows = re.findall(r"\[([^\[\]]*)\]", body)
    return [[c for c in r.split(",")] for r in rows]


def parse_form_parts(text: str) -> tuple[str, object]:
    kind, sep, body = text.partition(":")
    kind = kind.strip().lower()
    if not sep or kind not in ("diag", "upper", "gram"):
        raise ParseError(f"bad form spec {text!r}; expected diag:, upper: or gram:")
    if kind == "diag":
        items = [c for c in body.split(",") if c.strip()]
        if not items:
            raise ParseError("empty diagonal")
        return kind, items
    return kind, _matrix_rows(body)


def parse_form(ring: FiniteRing, text: str) -> QForm:
    kind, data = parse_form_parts(text)
    if kind == "diag":
        return make_form(ring, diag=[parse_element(ring, c) for c in data])
    mat = [[parse_element(ring, c) for c in row] for row in data]
    return make_form(ring, **{kind: mat})


def parse_rational_form(text: str) -> charzero.RationalForm:
    kind, data = parse_form_parts(text)
    if kind == "diag":
        return charzero.RationalForm.of([parse_rational(c) for c in data])
    mat = [[parse_rational(c) for c in row] for row in data]
    return charzero.form_from_upper(mat) if kind == "upper" else charzero.form_from_gram(mat)


def parse_scalar(ring: FiniteRing, text: str) -> int:
    return parse_element(ring, text)


# -- output -------------------------------------------------------------------


def _text_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (list, tuple)):
        return ",".join(_text_value(x) for x in v)
    return str(v)


def emit(report: dict, fmt: str, text_keys: list[str], lines: list[str] | None = None, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(report, sort_keys=True) + "\n")
        return
    buf = []
    if text_keys:
        buf.append(" ".join(f"{k}={_text_value(report[k])}" for k in text_keys))
    buf.extend(lines or [])
    buf.extend(f"warning: {w}" for w in report.get("warnings", []))
    out.write("".join(line + "\n" for line in buf))


def _base(args, ring_spec: RingSpec) -> dict:
    return {"command": args.command, "ring": str(ring_spec), "form": args.form, "scalar": args.scalar, "warnings": []}


# -- commands -----------------------------------------------------------------


def _finite_instance(args):
    spec = parse_ring(args.ring)
    if not spec.finite:
        raise PreconditionError(f"command {args.command!r} needs a finite ring (gf or zmod)")
    ring = spec.ring()
    q = parse_form(ring, args.form)
    a = parse_scalar(ring, args.scalar)
    return spec, q, a


def cmd_omega(args) -> int:
    spec = parse_ring(args.ring)
    if spec.finite:
        ring = spec.ring()
        q = parse_form(ring, args.form)
        case = classify_case(q, parse_scalar(ring, args.scalar))
        rep = _base(args, spec)
        rep.update(
            omega=case.omega, case=case.label, family=case.family, k=case.k, extra=case.extra,
            table_omega=case.table_omega, witt_index=case.witt_index, warnings=list(case.warnings),
        )
        emit(rep, args.format, ["omega", "case", "k", "extra"])
        return 0
    form = parse_rational_form(args.form)
    a = parse_rational(args.scalar)
    rep = _base(args, spec)
    if spec.kind == "r":
        if a == 0:
            raise PreconditionError("a = 0 gives infinite cliques over the reals")
        rep.update(omega=charzero.real_omega(form.signature, 1 if a > 0 else -1), signature=list(form.signature))
        emit(rep, args.format, ["omega", "signature"])
    elif spec.kind == "qp":
        rep.update(omega=charzero.local_omega(form, a, spec.p), place=spec.p)
        emit(rep, args.format, ["omega", "place"])
    else:
        res = charzero.rational_omega(form, a)
        rep.update(omega=res.omega, d=res.d)
        emit(rep, args.format, ["omega", "d"])
    return 0


def cmd_count(args) -> int:
    spec, q, a = _finite_instance(args)
    r = count_max_cliques(q, a)
    rep = _base(args, spec)
    tc = r.table_count
    rep.update(
        omega=r.omega, count=r.omega_max, o_order=r.o_order, iso_order=r.iso_order, alpha=r.alpha,
        case=r.case.label, orbits=[{"stabiliser": s, "size": v} for s, v in r.orbits],
        table_count=str(tc.numerator) if tc.denominator == 1 else f"{tc.numerator}/{tc.denominator}",
        warnings=list(r.warnings),
    )
    rep["|O|"], rep["|iso|"] = r.o_order, r.iso_order
    emit(rep, args.format, ["count", "|O|", "|iso|"])
    return 0


def cmd_construct(args) -> int:
    spec, q, a = _finite_instance(args)
    c = construct_max_clique(q, a)
    rep = _base(args, spec)
    rep.update(size=c.size, k=c.k, extra=c.extra, vertices=[list(v) for v in c.vertices], valid=True)
    emit(rep, args.format, ["size", "k", "extra"], [",".join(str(x) for x in v) for v in c.vertices])
    return 0


def cmd_classify(args) -> int:
    spec, q, a = _finite_instance(args)
    field_form = reduce_residue_form(q) if isinstance(q.ring, ResidueRing) else q
    inv = invariants_ff(field_form) if is_nondegenerate(q) else None
    case = classify_case(q, a)
    rep = _base(args, spec)
    rep.update(
        n=q.n, nondegenerate=inv is not None, det_class=inv.det_class, arf=inv.arf,
        witt_index=inv.witt_index, hyperbolic=inv.hyperbolic, case=case.label, family=case.family,
        k=case.k, extra=case.extra, omega=case.omega, warnings=list(case.warnings),
    )
    emit(rep, args.format, ["n", "det_class", "arf", "witt_index", "hyperbolic", "case", "k", "extra"])
    return 0


def cmd_local_global(args) -> int:
    spec = parse_ring(args.ring)
    if spec.kind != "q":
        raise PreconditionError("local-global needs --ring q")
    res = charzero.rational_omega(parse_rational_form(args.form), parse_rational(args.scalar))
    rep = _base(args, spec)
    blocking = [charzero.place_name(v) for v in res.blocking_places]
    rep.update(
        omega=res.omega, d=res.d, blocked_at=res.blocked_at,
        place=blocking[0] if blocking else None, blocking_places=blocking,
        profile={charzero.place_name(v): i for v, i in res.profile.items()},
    )
    emit(rep, args.format, ["omega", "d", "blocked_at", "place"])
    return 0


def cmd_graph(args) -> int:
    spec, q, a = _finite_instance(args)
    g = build_graph(q, a, args.mode, cap=args.cap)
    text = g.export(args.export)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        sys.stdout.write(f"vertices={g.order} mode={args.mode} written={args.output}\n")
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    if args.suite:
        records, elapsed = run_suite(args.suite, workers=args.workers, cap=args.cap)
        bad = [r for r in records if not r.ok]
        warned = [r for r in records if r.warnings]
        rep = {
            "command": "verify", "suite": args.suite, "instances": len(records), "mismatches": len(bad),
            "table_discrepancies": len(warned), "seconds": round(elapsed, 3),
            "failures": [r.as_dict() for r in bad],
            "warnings": sorted({w for r in warned for w in r.warnings}),
        }
        emit(rep, args.format, ["suite", "instances", "mismatches", "table_discrepancies"])
        return EXIT_MISMATCH if bad else 0
    if not (args.ring and args.form and args.scalar is not None):
        raise ParseError("verify needs --suite or all of --ring, --form, --scalar")
    spec, q, a = _finite_instance(args)
    rec = verify_instance(q, a, workers=args.workers, cap=args.cap)
    rep = _base(args, spec)
    rep.update({k: v for k, v in rec.as_dict().items() if k not in ("ring", "form", "scalar")})
    emit(rep, args.format, ["ok", "omega", "oracle_omega", "count", "oracle_count"])
    return 0 if rec.ok else EXIT_MISMATCH


COMMANDS = {
    "omega": cmd_omega,
    "count": cmd_count,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "graph": cmd_graph,
    "classify": cmd_classify,
    "local-global": cmd_local_global,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qfclique", description="Cliques in representation graphs of quadratic forms.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        required = name != "verify"
        sp.add_argument("--ring", required=required, help="gf:p[^k], zmod:p^k, q, qp:p or r")
        sp.add_argument("--form", required=required, help="diag:a,b,..., upper:[[..]] or gram:[[..]]")
        sp.add_argument("--scalar", required=required, help="the represented value a")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest graph the oracle may build")
        sp.add_argument("--workers", type=int, default=1)
        if name == "verify":
            sp.add_argument("--suite", choices=SUITE_NAMES)
        if name == "graph":
            sp.add_argument("--mode", choices=("full", "reduced"), default="full")
            sp.add_argument("--export", choices=("edge-list", "dot"), default="edge-list")
            sp.add_argument("--output")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except ParseError as exc:
        print(f"qfclique: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OracleLimitError as exc:
        print(f"qfclique: oracle limit: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except PreconditionError as exc:
        print(f"qfclique: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InconsistencyError as exc:
        print(f"qfclique: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
