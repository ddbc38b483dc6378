"""Command-line front end.

Every command reads a presentation (``--in FILE`` or ``--text DSL``), runs one
library operation and prints a report, either as ``key: value`` text or as a
JSON document with schema ``ncline-report/1``.  Reports carry no timing so
identical requests give byte-identical output.

Exit codes: 0 for a computed result (negative verdicts included), 2 for input
errors, 3 when the answer is inconclusive because of the degree bound.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from importlib import resources
from pathlib import Path

from .field import Field, FieldError
from .order import MonomialOrder
from .presentation import (
    AlgebraPresentation,
    PresentationError,
    parse_presentation,
    render_poly,
    render_presentation,
    render_word,
)

SCHEMA = "ncline-report/1"
EXIT_OK, EXIT_INPUT, EXIT_BOUND = 0, 2, 3


class InputError(ValueError):
    pass


class Inconclusive(RuntimeError):
    """Raised by a handler when the bound was exhausted before an answer."""


# --------------------------------------------------------------------------
# input helpers


def bundled_names():
    root = resources.files("ncline") / "data"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".alg"))


def read_source(path: str) -> tuple:
    """(text, label) for a file path, falling back to the bundled fixtures."""
    p = Path(path)
    if p.is_file():
        return p.read_text(encoding="utf-8"), path
    name = p.name if p.name.endswith(".alg") else p.name + ".alg"
    res = resources.files("ncline") / "data" / name
    if res.is_file():
        return res.read_text(encoding="utf-8"), f"bundled:{name}"
    raise InputError(f"no such presentation file: {path}")


def load(args, path=None, text=None) -> tuple:
    if text is None and path is None:
        path, text = args.input, args.text
        if (path is None) == (text is None):
            raise InputError("give exactly one of --in FILE or --text DSL")
    if text is not None:
        src, label = text, "<inline>"
    else:
        src, label = read_source(path)
    field = Field.parse(args.field) if args.field else None
    pres = parse_presentation(src, field)
    return pres, {"source": label, "sha256": hashlib.sha256(src.encode()).hexdigest()}


def parse_list(pres: AlgebraPresentation, text: str | None, what: str):
    if not text:
        raise InputError(f"{what} list is empty")
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if piece:
            out.append(pres.poly(piece))
    if not out:
        raise InputError(f"{what} list is empty")
    return out


def parse_precedence(pres: AlgebraPresentation, text: str | None):
    if not text:
        return None
    names = [s.strip() for s in text.split(",") if s.strip()]
    try:
        perm = [pres.names.index(s) for s in names]
    except ValueError:
        raise InputError(f"precedence {text!r} must list the generators {', '.join(pres.names)}") from None
    try:
        return MonomialOrder.deglex(pres.weights, perm)
    except ValueError as e:
        raise InputError(str(e)) from None


def parse_sigma(pres: AlgebraPresentation, text: str):
    """'x=x; y=2*y' -> GradedAutomorphism."""
    from .quadratic import GradedAutomorphism

    images = {}
    for piece in text.split(";"):
        if not piece.strip():
            continue
        name, eq, rhs = piece.partition("=")
        name = name.strip()
        if not eq or name not in pres.names:
            raise InputError(f"bad sigma entry {piece.strip()!r}; expected NAME=POLY")
        images[name] = pres.poly(rhs)
    missing = [g for g in pres.names if g not in images]
    if missing:
        raise InputError(f"sigma gives no image for {', '.join(missing)}")
    return GradedAutomorphism(pres.field, pres.weights, tuple(images[g] for g in pres.names))


def bound(args, default: int) -> int:
    D = default if args.bound is None else args.bound
    if D < 0:
        raise InputError("--bound must be non-negative")
    return D


def jf(F: Field, x):
    return F.to_json(x)


# --------------------------------------------------------------------------
# command handlers: each returns (result, certified, warnings, exit_code)


def cmd_gb(args):
    from .groebner import two_sided_gb, ufnarovski_growth, count_normal_words

    pres, _ = args.loaded
    D = bound(args, 10)
    if D < pres.max_relation_degree():
        raise InputError(f"--bound {D} is below the relation degree {pres.max_relation_degree()}")
    order = parse_precedence(pres, args.precedence)
    gb = two_sided_gb(pres, order, bound=D)
    names = pres.names
    res = {
        "order": {"kind": gb.order.kind, "precedence": [names[i] for i in gb.order.precedence]},
        "basis": [render_poly(g, names, gb.order) for g in gb.elements],
        "leading_words": [render_word(w, names) for w in gb.leading_words],
        "elements_by_degree": {str(d): c for d, c in gb.elements_by_degree().items()},
        "size": len(gb.elements),
        "complete": gb.complete,
        "normal_word_counts": count_normal_words(gb, D),
    }
    warnings = []
    if gb.complete and set(pres.weights) == {1}:
        res["growth"] = ufnarovski_growth(gb).as_dict()
    elif not gb.complete:
        warnings.append(f"completion not finished; basis is exact only through degree {gb.certified_degree}")
    cert = {"groebner_basis": "complete" if gb.complete else gb.certified_degree}
    return res, cert, warnings, EXIT_OK if gb.complete else EXIT_BOUND


def cmd_normal_words(args):
    from .groebner import two_sided_gb, count_normal_words, normal_words

    pres, _ = args.loaded
    D = bound(args, 6)
    gb = two_sided_gb(pres, parse_precedence(pres, args.precedence), bound=max(D, pres.max_relation_degree()))
    gb.require(D, "normal words")
    d = D if args.degree is None else args.degree
    if d > D:
        raise InputError("--degree may not exceed --bound")
    words = normal_words(gb, d)
    limit = args.limit
    res = {"counts": count_normal_words(gb, D), "degree": d, "count": len(words),
           "words": [render_word(w, pres.names) for w in words[:limit]]}
    warnings = [f"word list truncated to {limit} entries"] if len(words) > limit else []
    return res, {"normal_words": D}, warnings, EXIT_OK


def cmd_hilbert(args):
    from .hilbert import guess_rational, hilbert_series, regular_candidate

    pres, _ = args.loaded
    D = bound(args, 10)
    H, gb = hilbert_series(pres, D, order=parse_precedence(pres, args.precedence))
    res = {"coefficients": list(H.coeffs), "series": H.render()}
    guess = guess_rational(H)
    if guess is not None:
        res["rational_guess"] = guess.as_json()
    if len(pres.relations) == 1:
        cand = regular_candidate(pres.weights, pres.max_relation_degree())
        res["matches_regular_candidate"] = cand.expand(D) == H
    return res, {"hilbert_series": D}, [], EXIT_OK


def _quadratic_tensor(pres):
    from .quadratic import QuadraticTensor

    if not pres.degree_one_generated or pres.relation_degrees() != [2]:
        raise InputError("this command needs one quadratic relation in degree-one generators")
    return QuadraticTensor.from_poly(pres.relations[0], pres.n)


def cmd_rank(args):
    from .quadratic import relation_rank

    pres, _ = args.loaded
    if not pres.degree_one_generated:
        raise InputError("rank needs degree-one generators")
    rows = []
    for r in pres.relations:
        if r.homogeneous_degree(pres.weights) != 2:
            raise InputError("rank is defined for quadratic relations only")
        rows.append({"relation": render_poly(r, pres.names), "rank": relation_rank(r, pres.n)})
    return {"relations": rows}, {}, [], EXIT_OK


def cmd_decompose(args):
    from .quadratic import RankError, rank2_subspace, rank_one_factor, tensor_rank

    pres, _ = args.loaded
    t = _quadratic_tensor(pres)
    F = pres.field
    r = tensor_rank(t)
    res = {"rank": r}
    if r == 1:
        u, v = rank_one_factor(t)
        res["factors"] = [[jf(F, x) for x in u], [jf(F, x) for x in v]]
    else:
        try:
            proj = rank2_subspace(t, seed=args.seed)
        except RankError as e:
            res["rank2_projection"] = None
            return res, {}, [str(e)], EXIT_BOUND
        res["rank2_projection"] = proj.as_json(F)
    return res, {}, [], EXIT_OK


def cmd_regular(args):
    from .quadratic import zhang_regular_check

    pres, _ = args.loaded
    rep = zhang_regular_check(pres)
    res = rep.as_json(pres.names)
    warnings = ["tau check inconclusive"] if rep.tau_status == "inconclusive" else []
    return res, {}, warnings, EXIT_OK


def cmd_strongly_free(args):
    from .hilbert import strongly_free_check

    pres, _ = args.loaded
    X = parse_list(pres, args.x, "--x")
    D = None if args.bound is None else bound(args, 0)
    try:
        r = strongly_free_check(pres, X, D, parse_precedence(pres, args.precedence))
    except ValueError as e:
        raise InputError(str(e)) from None
    code = EXIT_BOUND if r.status == "inconclusive" else EXIT_OK
    cert = {"strongly_free": r.degree} if r.status == "certified" else {}
    return r.as_json(), cert, [], code


def cmd_coherence_cert(args):
    from .coherence import rnci_extract, sf_tor_identity

    pres, _ = args.loaded
    D = bound(args, 10)
    cert = rnci_extract(pres, D)
    res = cert.as_json()
    warnings = []
    if args.tor_check and cert.kind == "rnci" and cert.status == "certified":
        res["tor_identity"] = sf_tor_identity(cert, args.tor_check)
    code = EXIT_BOUND if cert.status == "withheld" else EXIT_OK
    if cert.status == "withheld":
        warnings.append(cert.message or "certificate withheld at this bound")
    certified = {"coherence": D} if cert.status == "certified" else {}
    return res, certified, warnings, code


def _ideal_gens(args, pres):
    return parse_list(pres, args.gens, "--gens")


def cmd_ideal_pres(args):
    from .coherence import ideal_presentation

    pres, _ = args.loaded
    D = bound(args, 10)
    gens = _ideal_gens(args, pres)
    ip = ideal_presentation(pres, gens, D)
    names = pres.names
    res = {
        "generators": [render_poly(g, names) for g in ip.generators],
        "degrees": ip.degrees,
        "pruned_inputs": ip.pruned,
        "syzygies": [{"degree": d, "coefficients": [render_poly(c, names) for c in cs]}
                     for d, cs in ip.syzygies],
        "dims": ip.dims,
        "syzygies_verified": ip.check_syzygies(),
    }
    return res, {"ideal_presentation": ip.certified_degree}, [], EXIT_OK


def cmd_betti(args):
    from .coherence import augmentation_betti, tor_betti

    pres, _ = args.loaded
    D = bound(args, 10)
    if args.gens:
        bt = tor_betti(pres, _ideal_gens(args, pres), D)
    else:
        bt = augmentation_betti(pres, D)
    warnings = [] if bt.stabilized else [f"Betti numbers not stabilized by degree {D}"]
    return bt.as_json(), {"betti": D}, warnings, EXIT_OK if bt.stabilized else EXIT_BOUND


def cmd_chain_witness(args):
    from .coherence import chain_witness

    D = bound(args, 12)
    F = Field.parse(args.field) if args.field else None
    if args.n < 3 or args.tmax < 1:
        raise InputError("chain-witness needs --n >= 3 and --tmax >= 1")
    rep = chain_witness(args.n, args.tmax, D, F)
    return rep.as_json(), {"chain": D}, [], EXIT_OK


def cmd_gamma(args):
    from .qgrscheme import gamma_recovery

    pres, _ = args.loaded
    D = bound(args, 6)
    g = gamma_recovery(pres, D)
    code = EXIT_BOUND if any(v is None for v in g.dims) else EXIT_OK
    return g.as_json(), {"gamma": D}, [], code


def cmd_chi(args):
    from .qgrscheme import Algebra, TruncatedGradedModule, chi_check

    pres, _ = args.loaded
    D = bound(args, 4)
    M = None
    if args.module == "A":
        from .quadratic import zhang_regular_check

        rep = zhang_regular_check(pres)
        if not rep.is_regular:
            raise ValueError("expected a regular algebra of global dimension 2: " + rep.reason)
        alg = Algebra(pres, bound=D + rep.gorenstein_shift + 2)
        M = TruncatedGradedModule.free(alg, [0], "A")
    r = chi_check(pres, M, D)
    res = r.as_json()
    res["module"] = args.module
    return res, {"chi_window": D}, [], EXIT_OK


def cmd_cohomology(args):
    from .qgrscheme import cohomology_dims

    pres, _ = args.loaded
    D = bound(args, 4)
    t = cohomology_dims(pres, D)
    code = EXIT_OK if t.h0.stabilized and t.h1.stabilized else EXIT_BOUND
    return t.as_json(), {"cohomology_window": D}, [], code


def cmd_kronecker(args):
    from .qgrscheme import kronecker_endo

    pres, _ = args.loaded
    D = bound(args, 8)
    inv = kronecker_endo(pres, D)
    code = EXIT_BOUND if any(v is None for v in inv.kronecker_dims) else EXIT_OK
    return inv.as_json(), {"kronecker": D}, [], code


def cmd_koszul_dual(args):
    from .hilbert import hilbert_series
    from .quadratic import koszul_dual

    pres, _ = args.loaded
    D = bound(args, 10)
    dual = koszul_dual(pres)
    HA, _ = hilbert_series(pres, D)
    HB, _ = hilbert_series(dual, D)
    signed = [(-1) ** i * c for i, c in enumerate(HB.coeffs)]
    prod = [sum(HA[i] * signed[d - i] for i in range(d + 1)) for d in range(D + 1)]
    res = {"dual": render_presentation(dual), "hilbert_dual": list(HB.coeffs),
           "hilbert": list(HA.coeffs), "numerical_koszul": prod == [1] + [0] * D}
    return res, {"koszul_identity": D}, [], EXIT_OK


def cmd_twist(args):
    from .hilbert import hilbert_series
    from .qgrscheme import find_twist
    from .quadratic import TwistError, zhang_twist

    pres, _ = args.loaded
    D = bound(args, 8)
    if args.sigma:
        sigma = parse_sigma(pres, args.sigma)
        try:
            tw = zhang_twist(pres, sigma)
        except TwistError as e:
            raise InputError(str(e)) from None
    elif args.b:
        other, _ = load(args, path=args.b)
        sigma = find_twist(pres, other)
        if sigma is None:
            return {"twist_found": False}, {}, [], EXIT_OK
        tw = zhang_twist(pres, sigma)
    else:
        raise InputError("twist needs --sigma or --b")
    Ha, _ = hilbert_series(pres, D)
    Ht, _ = hilbert_series(tw, D)
    res = {"sigma": sigma.render(pres.names), "twisted": render_presentation(tw),
           "hilbert_preserved": Ha == Ht}
    if args.b:
        res["twist_found"] = True
    return res, {"hilbert_series": D}, [], EXIT_OK


def cmd_distinguish(args):
    from .qgrscheme import distinguish_schemes

    if not args.a or not args.b:
        raise InputError("distinguish needs --a and --b")
    a, ia = load(args, path=args.a)
    b, ib = load(args, path=args.b)
    args.loaded = (a, ia)
    args.input_b = ib
    D = bound(args, 8)
    d = distinguish_schemes(a, b, D)
    res = d.as_json()
    res["conclusion"] = "indistinguishable" if d.n_a == d.n_b else "non-isomorphic"
    return res, {"hilbert_series": D}, [], EXIT_OK


COMMANDS = {
    "gb": (cmd_gb, "two-sided Groebner basis"),
    "normal-words": (cmd_normal_words, "normal words and their counts"),
    "hilbert": (cmd_hilbert, "truncated Hilbert series"),
    "rank": (cmd_rank, "tensor rank of each quadratic relation"),
    "decompose": (cmd_decompose, "rank-one factorization or rank-two projection"),
    "regular": (cmd_regular, "regularity check for one relation"),
    "strongly-free": (cmd_strongly_free, "strongly free set test"),
    "coherence-cert": (cmd_coherence_cert, "coherence certificate"),
    "ideal-pres": (cmd_ideal_pres, "presentation of a right ideal"),
    "betti": (cmd_betti, "Tor dimensions of a right ideal or of k"),
    "chain-witness": (cmd_chain_witness, "ascending chain of right ideals"),
    "gamma": (cmd_gamma, "recover A from tail Homs"),
    "chi": (cmd_chi, "graded Ext(k, M) dimensions"),
    "cohomology": (cmd_cohomology, "tail cohomology of the structure sheaf"),
    "kronecker": (cmd_kronecker, "Hom dimensions between O and O(1)"),
    "koszul-dual": (cmd_koszul_dual, "quadratic dual algebra"),
    "twist": (cmd_twist, "Zhang twist"),
    "distinguish": (cmd_distinguish, "compare two projective lines"),
}

NO_INPUT = {"chain-witness", "distinguish"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", metavar="FILE", help="presentation file (or bundled fixture name)")
    common.add_argument("--text", help="inline presentation DSL")
    common.add_argument("--bound", type=int, help="degree bound D")
    common.add_argument("--field", help="override the field (Q or F<p>)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker count (work currently runs sequentially)")
    common.add_argument("--precedence", help="generator names from largest to smallest")

    parser = argparse.ArgumentParser(prog="ncline", description="Connected graded algebras from the command line.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    for name, (_, helptext) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=helptext)
        if name == "normal-words":
            p.add_argument("--degree", type=int)
            p.add_argument("--limit", type=int, default=200)
        elif name == "strongly-free":
            p.add_argument("--x", help="comma-separated elements of X")
        elif name in ("ideal-pres", "betti"):
            p.add_argument("--gens", help="comma-separated generators of the right ideal")
        elif name == "chain-witness":
            p.add_argument("--n", type=int, default=3)
            p.add_argument("--tmax", type=int, default=4)
        elif name == "chi":
            p.add_argument("--module", choices=("k", "A"), default="k")
        elif name == "coherence-cert":
            p.add_argument("--tor-check", type=int, default=0, metavar="D",
                           help="also check the Tor identity through degree D")
        elif name == "twist":
            p.add_argument("--sigma", help="images, e.g. 'x=x; y=2*y'")
            p.add_argument("--b", help="target presentation to search a twist for")
        elif name == "distinguish":
            p.add_argument("--a")
            p.add_argument("--b")
    return parser


def _request(args) -> dict:
    req = {"command": args.command, "bound": args.bound, "field": args.field, "seed": args.seed}
    for key in ("precedence", "degree", "x", "gens", "n", "tmax", "module", "sigma", "a", "b", "tor_check"):
        val = getattr(args, key, None)
        if val is not None:
            req[key] = val
    return req


def _flatten(prefix: str, value, out: list):
    if isinstance(value, dict):
        if not value:
            out.append(f"{prefix}: {{}}")
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    elif isinstance(value, str) and "\n" in value:
        out.append(f"{prefix}:")
        out.extend("    " + line for line in value.splitlines())
    else:
        out.append(f"{prefix}: {json.dumps(value, ensure_ascii=False)}")


def render_text(report: dict) -> str:
    lines = [f"# {report['schema']} {report['command']}  exit={report['exit_code']}"]
    _flatten("certified", report["certified"], lines)
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    _flatten("", report["result"], lines)
    return "\n".join(lines) + "\n"


def run(argv=None) -> tuple:
    """Parse ``argv`` and return (report dict or None, exit code, error message)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return None, EXIT_INPUT if e.code else EXIT_OK, ""
    if not args.command:
        parser.print_help(sys.stderr)
        return None, EXIT_INPUT, "no command given"
    if args.jobs < 1:
        return None, EXIT_INPUT, "--jobs must be at least 1"
    handler = COMMANDS[args.command][0]
    from .groebner import CertificationError
    from .qgrscheme import WindowError

    try:
        if args.command not in NO_INPUT:
            args.loaded = load(args)
        else:
            args.loaded = None
        result, certified, warnings, code = handler(args)
    except (InputError, PresentationError, FieldError) as e:
        return None, EXIT_INPUT, str(e)
    except (CertificationError, WindowError, Inconclusive) as e:
        return None, EXIT_BOUND, str(e)
    except ValueError as e:
        return None, EXIT_INPUT, str(e)
    req = _request(args)
    if args.loaded is not None:
        req["input"] = args.loaded[1]
        req["algebra"] = str(args.loaded[0])
    if getattr(args, "input_b", None):
        req["input_b"] = args.input_b
    report = {"schema": SCHEMA, "command": args.command, "request": req, "result": result,
              "certified": certified, "warnings": warnings, "exit_code": code}
    report["_format"] = args.format
    return report, code, ""


def dumps(report: dict) -> str:
    body = {k: v for k, v in report.items() if not k.startswith("_")}
    return json.dumps(body, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def main(argv=None) -> int:
    report, code, err = run(argv)
    if report is None:
        if err:
            print(f"ncline: error: {err}", file=sys.stderr)
        return code
    if report["_format"] == "json":
        sys.stdout.write(dumps(report))
    else:
        sys.stdout.write(render_text({k: v for k, v in report.items() if not k.startswith("_")}))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
