"""Command-line front end.

Exit status: 0 on success, 1 when a computation or a verification fails,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Sequence

from equikt.descent import SQUARES, mv_solve
from equikt.errors import DomainError, FanError, KTError, NotDivisible
from equikt.exactalg.laurent import LaurentPoly, RingSpec, exact_div
from equikt.exactalg.ops import to_elementary
from equikt.exactalg.scalars import GF, QQ
from equikt.schubert import DemazureWord, SchubertPresentation, demazure_ring, schubert_presentation
from equikt.toric import SubtorusDirection, fan_validate, fix_components, load_fan, negative_k_witness, vv_ring
from equikt.tower import TowerPresentation
from equikt.verify import CASES, run_case

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# human-readable output


def _factor_linear(rel: LaurentPoly, name: str, candidates) -> list[str] | None:
    """Split a relation in one generator into linear factors ``name - v``
    by trial division; ``None`` unless it splits completely."""
    ring = rel.ring
    x = ring.var(name)
    rest = rel
    factors = []
    for v in candidates:
        lin = x - v.change_ring(ring)
        try:
            q = exact_div(rest, lin)
        except NotDivisible:
            continue
        factors.append((name, v))
        rest = q
    if rest.variables() & {name}:
        return None
    out = [_linear_text(n, v) for n, v in factors]
    if rest != ring.one():
        out.insert(0, _wrap(str(rest)))
    return out


def _linear_text(name: str, v: LaurentPoly) -> str:
    if v.is_zero():
        return name
    neg = -v
    if len(neg.terms) == 1 and not str(neg).startswith("-"):
        return f"({name} + {neg})"
    if len(v.terms) == 1:
        return f"({name} - {v})"
    return f"({name} - ({v}))"


def _wrap(s: str) -> str:
    return s if " " not in s else f"({s})"


def _symmetric_text(coeff: LaurentPoly, tnames, symbols) -> str:
    target = RingSpec(coeff.ring.coeffs, tuple((s, "taut") for s in symbols))
    try:
        return str(to_elementary(coeff, tnames, symbols, target))
    except DomainError:
        return str(coeff)


def relation_text(pres: SchubertPresentation, rel: LaurentPoly) -> str:
    """Print a relation, factored over the fixed-point values when it is a
    polynomial in a single generator, and with t-coefficients rewritten in
    elementary symmetric functions c_k when those are symmetric."""
    names = pres.names
    used = [n for n in names if rel.degree(n) > 0]
    if len(used) == 1:
        vals = []
        for v in pres.values:
            val = v.get(used[0])
            if val is not None and val not in vals:
                vals.append(val)
        fac = _factor_linear(rel, used[0], vals)
        if fac is not None and len(fac) > 1:
            return "*".join(fac)
    n = pres.base.nvars
    if n < 2:
        return str(rel)
    tnames = list(pres.base.names)
    symbols = [f"c{k}" for k in range(1, n + 1)]
    ring = rel.ring
    nb = n
    d = ring.denom
    groups: dict[tuple, dict] = {}
    for e, c in rel.terms.items():
        m = tuple(x // d for x in e[nb:])
        groups.setdefault(m, {})[e[:nb] + (0,) * len(names)] = c
    from equikt.tower import _order_key

    parts = []
    for m in sorted(groups, key=lambda m: _order_key(m, pres.weights), reverse=True):
        coeff = LaurentPoly._make(ring, groups[m])
        if any(x < 0 for e in coeff.terms for x in e):
            return str(rel)
        ctext = _symmetric_text(coeff, tnames, symbols)
        mono = "*".join(f"{nm}^{k}" if k > 1 else nm for nm, k in zip(names, m) if k)
        if not mono:
            parts.append(ctext)
        elif ctext == "1":
            parts.append(mono)
        elif ctext == "-1":
            parts.append(f"-{mono}")
        elif " " in ctext:
            parts.append(f"({ctext})*{mono}")
        else:
            parts.append(f"{ctext}*{mono}")
    text = " + ".join(parts)
    return text.replace("+ -", "- ")


def emit_presentation(p, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(p.to_json(), indent=2)
    if fmt != "text":
        raise UsageError(f"unknown format {fmt!r}")
    if isinstance(p, TowerPresentation):
        return p.describe()
    lines = [f"{p.label}: rank {p.rank} over {_base_text(p.base)}"]
    if not p.names:
        lines.append(_base_text(p.base))
        return "\n".join(lines)
    lines.append(f"generators: {', '.join(p.names)}")
    lines.append("relations:")
    for r in p.relations:
        lines.append(f"  {relation_text(p, r)}")
    if p.eliminated:
        for k, v in p.eliminated.items():
            lines.append(f"eliminated: {k} = {v}")
    if not p.free:
        lines.append("warning: some leading coefficients are not units; freeness not established")
    if p.base.nvars > 1:
        lines.append("c_k: elementary symmetric polynomials in " + ", ".join(p.base.names))
    return "\n".join(lines)


def _base_text(base: RingSpec) -> str:
    from equikt.tower import _base_text as bt

    return bt(base)


def parse_presentation(text: str):
    d = json.loads(text)
    if "generators" in d:
        return SchubertPresentation.from_json(d)
    return TowerPresentation.from_json(d)


# ---------------------------------------------------------------------------
# argument handling


def _ints(s: str) -> list[int]:
    try:
        return [int(x) for x in s.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {s!r}") from None


def _group(s: str) -> int:
    s = s.upper()
    if not s.startswith("GL") or not s[2:].isdigit() or int(s[2:]) < 1:
        raise UsageError(f"unknown group {s!r}; use GL<n>")
    return int(s[2:])


def _coeffs(args):
    if args.char == 0:
        if args.level:
            raise UsageError("--level needs --char p")
        return QQ
    try:
        return GF(args.char)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("KT_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"KT_SEED must be an integer, got {env!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="equikt", description="Equivariant K_0 presentations and checks.")
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--format", choices=["json", "text"], default="json")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def alg(sp):
        sp.add_argument("--group", required=True)
        sp.add_argument("--char", type=int, default=0)
        sp.add_argument("--level", type=int, default=0)
        sp.add_argument("--max-deg", type=int, default=None)

    sp = sub.add_parser("present", parents=[common], help="presentation of K_0^T(X_{<=mu})")
    alg(sp)
    sp.add_argument("--mu", required=True)
    sp.add_argument("--no-eliminate", action="store_true")

    sp = sub.add_parser("demazure", parents=[common], help="ring of a Demazure word")
    alg(sp)
    sp.add_argument("--word", required=True)

    sp = sub.add_parser("localize", parents=[common], help="values of a class at the fixed points")
    alg(sp)
    sp.add_argument("--mu", required=True)
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--point", default=None)

    sp = sub.add_parser("toric-fix", parents=[common], help="fixed locus of a direction")
    sp.add_argument("--fan", required=True)
    sp.add_argument("--direction", required=True)

    sp = sub.add_parser("toric-vv", parents=[common], help="piecewise-character ring of a smooth fan")
    sp.add_argument("--fan", required=True)
    sp.add_argument("--member", default=None, help="JSON list of polynomials, one per maximal cone")

    sp = sub.add_parser("mv", parents=[common], help="Mayer-Vietoris data of a catalogued square")
    sp.add_argument("--square", required=True, choices=sorted(SQUARES))

    sp = sub.add_parser("verify", parents=[common], help="canned checks")
    sp.add_argument("case", choices=sorted(CASES) + ["all"])
    return p


# ---------------------------------------------------------------------------
# verbs


def _cmd_present(args, rng):
    n = _group(args.group)
    mu = _ints(args.mu)
    pres = schubert_presentation(n, mu, _coeffs(args), args.level, rng, args.max_deg, not args.no_eliminate)
    return emit_presentation(pres, args.format), 0


def _cmd_demazure(args, rng):
    n = _group(args.group)
    word = DemazureWord(n, tuple(_ints(args.word)))
    pres = demazure_ring(word, _coeffs(args), args.level)
    return emit_presentation(pres, args.format), 0


def _cmd_localize(args, rng):
    n = _group(args.group)
    pres = schubert_presentation(n, _ints(args.mu), _coeffs(args), args.level, rng, args.max_deg)
    cls = pres.element(args.cls)
    pts = [tuple(_ints(args.point))] if args.point else pres.points
    rows = [(p, pres.trace(cls, p)) for p in pts]
    if args.format == "json":
        return json.dumps({"class": str(cls), "values": [{"a": list(p), "value": str(v)} for p, v in rows]}, indent=2), 0
    return "\n".join(f"{list(p)}: {v}" for p, v in rows), 0


def _direction(s: str) -> SubtorusDirection:
    s = s.strip()
    if s.startswith("{"):
        return SubtorusDirection.from_json(s)
    vecs = [_ints(part) for part in s.split(";")]
    return SubtorusDirection.from_vectors(vecs)


def _cmd_toric_fix(args, rng):
    F = load_fan(args.fan)
    V = _direction(args.direction)
    comps = fix_components(F, V)
    wit = negative_k_witness(F, V) if fan_validate(F).complete else None
    if args.format == "json":
        out = {"fan": fan_validate(F).to_json(), "direction": V.to_json(),
               "components": [c.to_json() for c in comps],
               "negative_k": wit.to_json() if wit else None}
        return json.dumps(out, indent=2), 0
    lines = ["components: " + ", ".join(c.describe() for c in comps) if comps else "components: none"]
    if wit:
        lines.append(f"negative K witness: {wit.witness} (h1 lower bound {wit.bound})")
    return "\n".join(lines), 0


def _cmd_toric_vv(args, rng):
    F = load_fan(args.fan)
    R = vv_ring(F)
    out = {"fan": fan_validate(F).to_json(), "maximal_cones": R.ncones, "rank": R.rank(),
           "walls": [{"cones": [s, t], "m": list(m)} for s, t, m in R.walls]}
    if args.member is not None:
        data = json.loads(args.member)
        f = [R.base.parse(str(x)) for x in data]
        out["member"] = R.is_member(f)
    if args.format == "json":
        return json.dumps(out, indent=2), 0
    text = f"rank {out['rank']} ({out['maximal_cones']} maximal cones)"
    if "member" in out:
        text += f"\nmember: {out['member']}"
    return text, 0


def _cmd_mv(args, rng):
    res = mv_solve(SQUARES[args.square]())
    if args.format == "json":
        return json.dumps(res.to_json(), indent=2), 0
    k1 = res.to_json()["K-1"]
    return f"K_0 rank {res.kernel_rank}; K_-1 = {k1 if k1 is not None else 'not determined'}", 0


def _cmd_verify(args, rng):
    seed = _seed(args)
    names = sorted(CASES) if args.case == "all" else [args.case]
    results = [run_case(n, seed) for n in names]
    status = 0 if all(r.ok for r in results) else 1
    if args.format == "json":
        return json.dumps([{"case": r.case, "ok": r.ok, "checks": r.lines} for r in results], indent=2), status
    lines = []
    for r in results:
        lines.append(f"[{'PASS' if r.ok else 'FAIL'}] {r.case}")
        lines.extend(f"    {l}" for l in r.lines)
    if any(r.case == "nodal-cubic" and r.ok for r in results):
        lines.append("K_-1 = Z")
    return "\n".join(lines), status


COMMANDS = {
    "present": _cmd_present,
    "demazure": _cmd_demazure,
    "localize": _cmd_localize,
    "toric-fix": _cmd_toric_fix,
    "toric-vv": _cmd_toric_vv,
    "mv": _cmd_mv,
    "verify": _cmd_verify,
}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        rng = random.Random(_seed(args))
        text, status = COMMANDS[args.verb](args, rng)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, FanError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(text, file=out)
    return status


def main() -> None:
    sys.exit(run())
