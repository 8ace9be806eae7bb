"""Command-line interface: ``charnum <command> [options]``.

Every command prints a JSON run record (or aligned text with ``--format text``).
Exit status: 0 success, 1 a verification check failed, 2 bad input,
3 engine or resource error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable

from . import __version__
from .algebra import (
    AlgebraError,
    FiniteAlgebra,
    NotLocalError,
    SpecError,
    direct_sum,
    family,
    from_quotient,
    from_spec,
    maximal_ideal,
    parse_family_shorthand,
    socle,
)
from .charnum import (
    CharSequence,
    EngineConfig,
    EngineError,
    IndexError_,
    characteristic_number,
    characteristic_sequence,
    classify_complete_intersection,
    classify_gorenstein,
    join_sequence,
    multidegree,
)
from .closedforms import (
    ClosedFormError,
    binomial_sequence,
    bound_report,
    cw_closed_form,
    mixed_eulerian,
    mixed_eulerian_table,
    trivial_closed_form,
)
from .fieldpoly import PolynomialSyntaxError, PrimeField, UnknownVariableError
from .groebner import ResourceLimitError
from .pencil import (
    PencilError,
    PreconditionError,
    SymmetricPencil,
    det_monomial_check,
    det_monomial_decomposable,
    generic_rank,
    pencil_from_algebra,
    pencil_from_matrices,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_ENGINE = 0, 1, 2, 3

INPUT_ERRORS = (SpecError, AlgebraError, IndexError_, ClosedFormError, PencilError,
                PolynomialSyntaxError, UnknownVariableError, PreconditionError)
ENGINE_ERRORS = (EngineError, ResourceLimitError)

EXAMPLE_QUOTIENT = {"type": "quotient", "vars": ["x", "y", "z"],
                    "ideal": ["x^2", "y^2", "x*z", "y*z", "z^2 - x*y"]}


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# spec handling


def load_spec(text: str | None) -> dict:
    """``--spec`` value: inline JSON, ``family:name(d)`` shorthand, or a JSON file path."""
    if text is None:
        raise InputError("a spec is required (--spec FILE|JSON|family:name(d))")
    t = text.strip()
    if t.startswith("{"):
        try:
            return json.loads(t)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid inline JSON spec: {exc}") from None
    fam = parse_family_shorthand(t)
    if fam is not None:
        return fam
    if os.path.exists(t):
        try:
            with open(t, encoding="utf-8") as fh:
                return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON in {t}: {exc}") from None
    raise InputError(f"spec {text!r} is neither JSON, a family shorthand, nor a file")


def build_object(spec: dict) -> FiniteAlgebra | SymmetricPencil:
    """Algebra from an AlgebraSpec, or a pencil from ``{"type":"pencil","matrices":[...]}``."""
    if isinstance(spec, dict) and spec.get("type") == "pencil":
        mats = spec.get("matrices")
        if not isinstance(mats, list) or not mats:
            raise InputError("pencil spec needs a nonempty 'matrices' list")
        return pencil_from_matrices(mats, provenance="matrices")
    return from_spec(spec)


def spec_digest(spec) -> str:
    canon = json.dumps(spec, sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canon.encode()).hexdigest()


def parse_index(text: str | None) -> tuple[int, ...]:
    if text is None:
        raise InputError("--index is required")
    t = text.strip()
    if not t:
        return ()
    try:
        return tuple(int(x) for x in t.split(","))
    except ValueError:
        raise InputError(f"--index must be comma-separated integers, got {text!r}") from None


def parse_primes(text: str | None):
    if text is None:
        return "random:2"
    t = text.strip()
    if t.startswith("random:"):
        try:
            k = int(t.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad --prime value {text!r}") from None
        if k < 1:
            raise InputError("random:K needs K >= 1")
        return t
    try:
        primes = tuple(int(x) for x in t.split(","))
    except ValueError:
        raise InputError(f"bad --prime value {text!r}") from None
    for p in primes:
        try:
            PrimeField(p)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    return primes


def resolve_seed(arg) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("CHARNUM_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"CHARNUM_SEED must be an integer, got {env!r}") from None
    return 0


def engine_config(args) -> EngineConfig:
    seed = resolve_seed(getattr(args, "seed", None))
    if not 0 <= seed < 2**64:
        raise InputError("--seed must be an unsigned 64-bit integer")
    return EngineConfig(
        seed=seed,
        primes=parse_primes(getattr(args, "prime", None)),
        validate=getattr(args, "validate", "shallow") or "shallow",
        jobs=max(1, getattr(args, "jobs", 1) or 1),
    )


def _pencil_of(obj) -> SymmetricPencil:
    return obj if isinstance(obj, SymmetricPencil) else pencil_from_algebra(obj)


def _algebra_only(obj, command: str) -> FiniteAlgebra:
    if not isinstance(obj, FiniteAlgebra):
        raise InputError(f"{command} needs an algebra spec, not a bare pencil")
    return obj


def _signed_constants(A: FiniteAlgebra):
    return [[i, j, k, str(A.field.signed(c))] for i, j, k, c in A.constants()]


# ---------------------------------------------------------------------------
# commands


def cmd_info(spec: dict, cfg: EngineConfig) -> dict:
    obj = build_object(spec)
    if isinstance(obj, SymmetricPencil):
        import random

        return {
            "kind": "pencil",
            "size": obj.size,
            "parameters": obj.nparams,
            "generic_rank": generic_rank(obj, random.Random(f"info:{cfg.seed}")),
            "pencil": obj.to_json(),
        }
    A = obj
    P = pencil_from_algebra(A)
    det = P.determinant()
    out = {
        "kind": "algebra",
        "dimension": A.dim,
        "basis": list(A.labels),
        "unit": [str(A.field.signed(c)) for c in A.unit],
        "constants": _signed_constants(A),
        "field": str(A.field.p),
        "local": A.is_local(),
        "gorenstein": not det.is_zero(),
        "determinant": str(det),
        "pencil": P.to_json(),
    }
    if out["local"]:
        out["socle_dimension"] = len(socle(A))
    return out


def cmd_charnum(spec: dict, index, cfg: EngineConfig) -> dict:
    obj = build_object(spec)
    return characteristic_number(_pencil_of(obj), index, cfg).to_json()


def cmd_sequence(spec: dict, cfg: EngineConfig) -> dict:
    return characteristic_sequence(_pencil_of(build_object(spec)), cfg).to_json()


def cmd_multidegree(spec: dict, cfg: EngineConfig) -> dict:
    return multidegree(_pencil_of(build_object(spec)), cfg).to_json()


def cmd_eulerian(n: int | None, index) -> dict:
    if index is not None:
        return {"index": list(index), "value": str(mixed_eulerian(index))}
    if n is None:
        raise InputError("eulerian needs N or --index")
    table = mixed_eulerian_table(n)
    return {"n": n, "values": [{"index": list(a), "value": str(v)} for a, v in table.items()]}


def cmd_classify(spec: dict, cfg: EngineConfig) -> dict:
    A = _algebra_only(build_object(spec), "classify")
    g = classify_gorenstein(A, cfg)
    out = {"gorenstein": g.gorenstein, "routes": g.routes, "evidence": g.evidence}
    try:
        maximal_ideal(A)
        local = True
    except NotLocalError:
        local = False
    out["local"] = local
    if local:
        ci = classify_complete_intersection(A, cfg)
        out["complete_intersection"] = {
            "verdict": ci.complete_intersection,
            "index": list(ci.index),
            "value": None if ci.value is None else str(ci.value),
            "bound": str(ci.bound),
            **({"note": ci.note} if ci.note else {}),
        }
    return out


# verification -------------------------------------------------------------


@dataclass
class Check:
    name: str
    anchor: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {"name": self.name, "anchor": self.anchor, "passed": self.passed, "detail": self.detail}


def _is_line_algebra(A: FiniteAlgebra, spec: dict) -> bool:
    """Algebras known to be quotients of k[x] (so their sequence is binomial)."""
    if spec.get("type") == "family" and spec.get("name") in ("chain", "smooth"):
        return True
    if spec.get("type") == "quotient" and len(spec.get("vars", [])) == 1:
        return True
    return False


def _smoothable_known(spec: dict) -> bool:
    t = spec.get("type")
    if t == "family":
        return spec.get("name") in ("chain", "smooth")
    if t == "quotient":
        return len(spec.get("vars", [])) == 1
    if t == "sum":
        return all(_smoothable_known(s) for s in spec.get("parts", []))
    return False


def verify_algebra(spec: dict, cfg: EngineConfig, label: str | None = None,
                   full_table_dim: int = 5) -> list[Check]:
    A = _algebra_only(build_object(spec), "verify")
    label = label or A.name or spec_digest(spec)[:16]
    checks: list[Check] = []

    def add(name, anchor, passed, **detail):
        checks.append(Check(f"{label}: {name}", anchor, bool(passed), detail))

    g = classify_gorenstein(A, cfg)
    seq = characteristic_sequence(pencil_from_algebra(A), cfg)
    vals = seq.values
    add("gorenstein routes agree", "gorenstein-characterization", len(set(g.routes.values())) == 1,
        routes=g.routes)
    add("sequence starts with 1 and is nonnegative", "sequence-normalization",
        vals[0] == 1 and all(v >= 0 for v in vals), sequence=[str(v) for v in vals])
    add("cross-prime agreement", "monte-carlo-exactness", all(e.agreement for e in seq.entries))
    if g.gorenstein:
        add("sequence symmetric", "gorenstein-symmetry", seq.is_symmetric())
        add("sequence log-concave", "log-concavity", seq.is_log_concave())
    if _is_line_algebra(A, spec):
        add("binomial sequence", "binomial-sequence", vals == binomial_sequence(A.dim),
            expected=[str(v) for v in binomial_sequence(A.dim)])

    local = A.is_local()
    d = A.dim
    name = spec.get("name") if spec.get("type") == "family" else None
    table = None
    if d >= 2 and (d <= full_table_dim or name == "trivial"):
        table = multidegree(pencil_from_algebra(A), cfg).table()
    if table is not None:
        if name in ("chain", "smooth"):
            ref = mixed_eulerian_table(d - 1)
            add("multidegree equals mixed Eulerian table", "smooth-equals-chain", table == ref)
        if name == "cw":
            bad = [list(b) for b, v in table.items() if v != cw_closed_form(d - 1, b)]
            add("CW closed form", "cw-closed-form", not bad, mismatches=bad)
        if name == "trivial":
            bad = [list(b) for b, v in table.items() if v != trivial_closed_form(d - 1, b)]
            add("trivial-algebra closed form", "trivial-closed-form", not bad, mismatches=bad)
        if _smoothable_known(spec):
            rep = bound_report(table, "smooth-upper")
            add("bounded by the smooth algebra", "smoothable-upper-bound", rep.ok)
        if g.gorenstein and local and d >= 3:
            rep = bound_report(table, "cw-lower")
            add("bounded below by CW", "gorenstein-lower-bound", rep.ok)
    if local and d >= 3:
        ci = classify_complete_intersection(A, cfg)
        add("CI value within bound", "complete-intersection-bound", ci.value <= ci.bound,
            value=str(ci.value), bound=str(ci.bound), verdict=ci.complete_intersection)
    if local and g.gorenstein:
        r = det_monomial_check(A)
        add("determinant is a socle monomial", "determinant-monomial", r.ok, determinant=str(r.determinant))
    elif A.parts and len(A.parts) > 1 and all(P.is_local() and len(socle(P)) == 1 for P in A.parts):
        r = det_monomial_decomposable(A)
        add("determinant is a product of socle monomials", "determinant-monomial-sum", r.ok,
            determinant=str(r.determinant))
    return checks


SUITES = {
    "core": [
        *({"type": "family", "name": "chain", "param": d} for d in range(2, 5)),
        *({"type": "family", "name": "smooth", "param": d} for d in range(2, 5)),
        *({"type": "family", "name": "cw", "param": n} for n in (2, 3)),
        *({"type": "family", "name": "trivial", "param": m} for m in (2, 3)),
        {"type": "quotient", "vars": ["x", "y"], "ideal": ["x^2", "y^2"]},
        {"type": "sum", "parts": [{"type": "family", "name": "chain", "param": 2}] * 2},
    ],
    "full": [
        *({"type": "family", "name": "chain", "param": d} for d in range(2, 6)),
        *({"type": "family", "name": "smooth", "param": d} for d in range(2, 6)),
        *({"type": "family", "name": "cw", "param": n} for n in (2, 3, 4)),
        *({"type": "family", "name": "trivial", "param": m} for m in (2, 3, 4)),
        {"type": "quotient", "vars": ["x", "y"], "ideal": ["x^2", "y^2"]},
        EXAMPLE_QUOTIENT,
        {"type": "sum", "parts": [{"type": "family", "name": "chain", "param": 2}] * 2},
        {"type": "sum", "parts": [{"type": "family", "name": "chain", "param": 3},
                                  {"type": "family", "name": "chain", "param": 1}]},
    ],
}


def verify_suite(name: str, cfg: EngineConfig) -> list[Check]:
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    checks = []
    for spec in SUITES[name]:
        checks.extend(verify_algebra(spec, cfg, full_table_dim=4 if name == "core" else 5))
    c2 = family("chain", 2)
    mu = characteristic_sequence(c2, cfg)
    joined = join_sequence(mu, mu).values
    direct = characteristic_sequence(direct_sum(c2, c2), cfg).values
    checks.append(Check("join recursion chain(2)+chain(2)", "join-recursion",
                        joined == direct == (1, 3, 3, 1),
                        {"join": [str(v) for v in joined], "engine": [str(v) for v in direct]}))
    return checks


def cmd_verify(spec: dict | None, suite: str | None, cfg: EngineConfig) -> tuple[dict, bool]:
    if suite is not None:
        checks = verify_suite(suite, cfg)
    elif spec is not None:
        checks = verify_algebra(spec, cfg)
    else:
        raise InputError("verify needs --spec or --suite")
    ok = all(c.passed for c in checks)
    failing = [c.anchor for c in checks if not c.passed]
    return {"passed": ok, "checks": [c.to_json() for c in checks], "failing": failing}, ok


# ---------------------------------------------------------------------------
# output


def _record(command: str, spec, cfg: EngineConfig | None, results, started: float, wall: str) -> dict:
    rec = {
        "command": command,
        "version": __version__,
        "results": results,
        "timestamp": {"started": wall, "elapsed_seconds": round(time.perf_counter() - started, 6)},
    }
    if spec is not None:
        rec["spec"] = spec
        rec["spec_digest"] = spec_digest(spec)
    if cfg is not None:
        rec["config"] = cfg.to_json()
        rec["seed"] = str(cfg.seed)
        rec["primes"] = [str(p) for p in _primes_used(results)]
        agreements = _agreements(results)
        if agreements:
            rec["agreement"] = {"values": len(agreements), "agreeing": sum(agreements)}
    return rec


def _walk(obj):
    if isinstance(obj, dict):
        yield obj
        for v in obj.values():
            yield from _walk(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _walk(v)


def _primes_used(results) -> list[int]:
    seen = []
    for d in _walk(results):
        if "runs" in d and isinstance(d["runs"], list):
            for r in d["runs"]:
                p = int(r["prime"])
                if p not in seen:
                    seen.append(p)
    return seen


def _agreements(results) -> list[bool]:
    return [bool(d["agreement"]) for d in _walk(results)
            if "agreement" in d and "runs" in d]


def _text(command: str, results) -> str:
    lines = []
    if command in ("charnum",):
        lines.append(f"c{tuple(results['index'])} = {results['value']}"
                     f"   (agreement={results['agreement']}, truncated={results['truncated']})")
    elif command == "sequence":
        lines.append("mu = (" + ", ".join(results["values"]) + ")")
    elif command == "multidegree":
        rows = [(",".join(map(str, v["index"])), v["value"]) for v in results["values"]]
        w = max(len(r[0]) for r in rows)
        lines += [f"{i:<{w}}  {v:>8}" for i, v in rows]
        lines.append(f"P = {results['polynomial']}")
    elif command == "eulerian":
        if "values" in results:
            rows = [(",".join(map(str, v["index"])), v["value"]) for v in results["values"]]
            w = max(len(r[0]) for r in rows)
            lines += [f"{i:<{w}}  {v:>10}" for i, v in rows]
        else:
            lines.append(f"e{tuple(results['index'])} = {results['value']}")
    elif command == "verify":
        w = max((len(c["name"]) for c in results["checks"]), default=0)
        for c in results["checks"]:
            lines.append(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']:<{w}}  [{c['anchor']}]")
        lines.append("overall: " + ("PASS" if results["passed"] else "FAIL"))
    else:
        w = max((len(k) for k in results), default=0)
        for k, v in results.items():
            if k in ("pencil", "constants"):
                v = json.dumps(v)
            lines.append(f"{k:<{w}}  {v}")
    return "\n".join(lines)


def _emit(rec: dict, fmt: str, out) -> None:
    if fmt == "text":
        print(_text(rec["command"], rec["results"]), file=out)
    else:
        print(json.dumps(rec, indent=2, sort_keys=True), file=out)


def _error(kind: str, exc: BaseException, fmt: str, out) -> None:
    payload = {"error": {"kind": kind, "type": type(exc).__name__, "message": str(exc)}}
    if fmt == "text":
        print(f"error ({kind}): {exc}", file=sys.stderr)
    else:
        print(json.dumps(payload, indent=2, sort_keys=True), file=out)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="charnum", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=True, engine=True):
        if spec:
            p.add_argument("spec_pos", nargs="?", metavar="SPEC", help="spec (same forms as --spec)")
            p.add_argument("--spec", help="JSON file, inline JSON, or family:name(d)")
        if engine:
            p.add_argument("--prime", help="p[,p2,...] or random:K (default random:2)")
            p.add_argument("--seed", type=int, help="64-bit seed (default $CHARNUM_SEED or 0)")
            p.add_argument("--jobs", type=int, default=1, help="parallel index computations")
            p.add_argument("--validate", choices=("shallow", "deep"), default="shallow")
        p.add_argument("--format", choices=("json", "text"), default="json")

    common(sub.add_parser("info", help="basis, table, locality, Gorenstein verdict, pencil"))
    p = sub.add_parser("charnum", help="one characteristic number")
    common(p)
    p.add_argument("--index", required=True, help="comma-separated index b_1,...,b_{m-1}")
    common(sub.add_parser("sequence", help="characteristic sequence"))
    common(sub.add_parser("multidegree", help="all characteristic numbers"))
    p = sub.add_parser("eulerian", help="mixed Eulerian numbers")
    p.add_argument("n", nargs="?", type=int)
    p.add_argument("--index", help="single index a_1,...,a_n")
    p.add_argument("--format", choices=("json", "text"), default="json")
    common(sub.add_parser("classify", help="Gorenstein and complete-intersection verdicts"))
    p = sub.add_parser("verify", help="run verification checks on a spec or a suite")
    common(p)
    p.add_argument("--suite", choices=tuple(SUITES), help="named suite instead of a spec")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format
    started = time.perf_counter()
    wall = datetime.now(timezone.utc).isoformat(timespec="seconds")
    try:
        spec = None
        cfg = None
        raw_spec = getattr(args, "spec", None) or getattr(args, "spec_pos", None)
        code = EXIT_OK
        if args.command == "eulerian":
            index = parse_index(args.index) if args.index is not None else None
            results = cmd_eulerian(args.n, index)
        else:
            cfg = engine_config(args)
            if args.command == "verify" and args.suite:
                spec = None
            else:
                spec = load_spec(raw_spec)
            if args.command == "info":
                results = cmd_info(spec, cfg)
            elif args.command == "charnum":
                results = cmd_charnum(spec, parse_index(args.index), cfg)
            elif args.command == "sequence":
                results = cmd_sequence(spec, cfg)
            elif args.command == "multidegree":
                results = cmd_multidegree(spec, cfg)
            elif args.command == "classify":
                results = cmd_classify(spec, cfg)
            elif args.command == "verify":
                results, ok = cmd_verify(spec, args.suite, cfg)
                code = EXIT_OK if ok else EXIT_FAIL
            else:  # pragma: no cover - argparse restricts choices
                raise InputError(f"unknown command {args.command}")
    except (InputError, *INPUT_ERRORS) as exc:
        _error("input", exc, fmt, out)
        return EXIT_INPUT
    except ENGINE_ERRORS as exc:
        _error("engine", exc, fmt, out)
        return EXIT_ENGINE
    _emit(_record(args.command, spec, cfg, results, started, wall), fmt, out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
