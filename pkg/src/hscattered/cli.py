"""Command-line interface.

Every command writes one JSON document (or CSV for ``spectrum --format csv``)
to ``--out`` or stdout.  Exit codes: 0 success, 1 input error, 2 cap
exceeded, 3 a verification came out false.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import dual as dual_mod
from . import linset, mrd, qcombin
from .errors import CapError, HScatteredError, InputError
from .gf import make_field
from .subspace import (
    DEFAULT_ENUM_CAP,
    HyperplaneSpectrum,
    classify_bound,
    dimension_bound,
    direct_sum,
    gabidulin_subspace,
    hyperplane_spectrum,
    intersection_window,
    is_h_scattered,
    search_scattered,
    subgeometry,
    subspace_from_json,
    subspace_to_json,
)

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_VERIFY = 0, 1, 2, 3


class _Fail(Exception):
    """Carries a finished document whose verification failed."""

    def __init__(self, doc):
        super().__init__("verification failed")
        self.doc = doc


def _common(p: argparse.ArgumentParser):
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hscattered", description="h-scattered subspaces, duals and MRD codes")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a subspace")
    c.add_argument("kind", choices=("gabidulin", "direct-sum", "subgeometry", "search"))
    c.add_argument("files", nargs="*", help="part files for direct-sum")
    c.add_argument("--dim", type=int, help="target dimension for search, or sub-dimension for gabidulin")
    _common(c)

    c = sub.add_parser("check", help="decide h-scatteredness")
    c.add_argument("file")
    _common(c)

    c = sub.add_parser("spectrum", help="hyperplane intersection counts")
    c.add_argument("file")
    _common(c)

    c = sub.add_parser("dual", help="Delsarte dual of a subspace")
    c.add_argument("file")
    c.add_argument("--form", default="standard", help="standard, reversal, or a JSON file holding a matrix")
    _common(c)

    c = sub.add_parser("identities", help="counting identities on a spectrum, plus the q-binomial suite")
    c.add_argument("file", nargs="?", help="subspace file (its spectrum is computed)")
    c.add_argument("--spectrum", help="spectrum CSV or JSON file")
    c.add_argument("--n-max", type=int, default=6)
    c.add_argument("--q-list", default="2,3")
    _common(c)

    c = sub.add_parser("mrd", help="rank-metric codes")
    c.add_argument("action", choices=("construct", "distance", "idealiser", "dual", "to-subspace"))
    c.add_argument("file", nargs="?")
    c.add_argument("--side", choices=("left", "right"), default="left")
    _common(c)

    c = sub.add_parser("linset", help="points and weights of L_U")
    c.add_argument("file")
    _common(c)
    return parser


# -- helpers -----------------------------------------------------------------------------


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise InputError(f"missing {', '.join(missing)}")


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _load_subspace(path, args):
    try:
        return subspace_from_json(_load_json(path))
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path} is not a subspace file ({exc})") from None


def _load_code(path):
    try:
        return mrd.code_from_json(_load_json(path))
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path} is not a code file ({exc})") from None


def _tower(args):
    _need(args, "n")
    return make_field(args.p, args.e, args.n)


def _bound_block(r, n, h):
    b = dimension_bound(r, n, h)
    lo, hi = intersection_window(r, n, h)
    return {
        "rn_over_h_plus_1": str(b.bound),
        "subgeometry_dim": b.subgeometry_exception_dim,
        "window": [str(lo), str(hi)],
    }


def _write(args, doc):
    text = doc if isinstance(doc, str) else json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands ---------------------------------------------------------------------------


def cmd_construct(args):
    kind = args.kind
    prov = {"construction": kind}
    if kind == "direct-sum":
        if len(args.files) < 2:
            raise InputError("direct-sum needs at least two part files")
        U = direct_sum([_load_subspace(f, args) for f in args.files])
        prov["parts"] = list(args.files)
    else:
        _need(args, "r")
        tower = _tower(args)
        prov.update(p=args.p, e=args.e, n=args.n, r=args.r)
        if kind == "gabidulin":
            U = gabidulin_subspace(tower, args.r, args.dim)
            if args.dim is not None:
                prov["dim"] = args.dim
        elif kind == "subgeometry":
            U = subgeometry(tower, args.r)
        else:
            _need(args, "h")
            dim = args.dim
            if dim is None:
                dim = int(dimension_bound(args.r, args.n, args.h).bound)
            U = search_scattered(tower, args.r, args.h, dim, seed=args.seed, cap=args.cap, workers=args.workers)
            prov.update(h=args.h, dim=dim, seed=args.seed)
    return subspace_to_json(U, provenance=prov)


def cmd_check(args):
    _need(args, "h")
    U = _load_subspace(args.file, args)
    verdict = is_h_scattered(U, args.h, cap=args.cap, workers=args.workers)
    doc = {
        "command": "check",
        "r": U.r,
        "n": U.tower.n,
        "q": U.tower.q,
        "k": U.k,
        "h": args.h,
        "verdict": verdict.to_json(U.tower),
        "bound": _bound_block(U.r, U.tower.n, args.h),
        "bound_branch": classify_bound(U, args.h) if verdict.ok else None,
        "maximum": U.k * (args.h + 1) == U.r * U.tower.n,
    }
    doc["ok"] = verdict.ok and doc["bound_branch"] != "violates"
    if not doc["ok"]:
        raise _Fail(doc)
    return doc


def cmd_spectrum(args):
    U = _load_subspace(args.file, args)
    spec = hyperplane_spectrum(U, cap=args.cap, workers=args.workers)
    if args.format == "csv":
        return spec.to_csv()
    doc = {"command": "spectrum", "spectrum": spec.to_json(), "total": spec.total()}
    doc["count_identity"] = spec.satisfies_count_identity()
    if args.h is not None:
        lo, hi = intersection_window(U.r, U.tower.n, args.h)
        doc["bound"] = _bound_block(U.r, U.tower.n, args.h)
        doc["in_window"] = all(lo <= i <= hi for i in spec.counts)
        if spec.k * (args.h + 1) == spec.r * spec.n and not doc["in_window"]:
            raise _Fail(doc)
    return doc


def _parse_form(form):
    if form in ("standard", "reversal"):
        return form
    data = _load_json(form)
    return data["form"] if isinstance(data, dict) else data


def cmd_dual(args):
    U = _load_subspace(args.file, args)
    ctx = dual_mod.dual_context(U, form=_parse_form(args.form), h=args.h, cap=args.cap, workers=args.workers)
    prov = {"construction": "delsarte-dual", "source": args.file, "form": args.form}
    out = subspace_to_json(ctx.dual, provenance=prov)
    out["dual_context"] = ctx.to_json()
    return out


def _read_spectrum(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        data = data.get("spectrum", data)
        return HyperplaneSpectrum(
            {int(i): c for i, c in data["counts"].items()}, data["r"], data["n"], data["q"], data["k"]
        )
    return HyperplaneSpectrum.from_csv(text)


def cmd_identities(args):
    _need(args, "h")
    if args.spectrum:
        spec = _read_spectrum(args.spectrum)
    elif args.file:
        spec = hyperplane_spectrum(_load_subspace(args.file, args), cap=args.cap, workers=args.workers)
    else:
        raise InputError("give a subspace file or --spectrum")
    report = qcombin.spectrum_identities(spec, args.h)
    try:
        q_list = [int(x) for x in args.q_list.split(",") if x]
    except ValueError:
        raise InputError(f"bad --q-list {args.q_list!r}") from None
    suite = qcombin.verify_qbinomial_theorems(args.n_max, q_list)
    doc = {
        "command": "identities",
        "spectrum_report": report.to_json(),
        "qbinomial_suite": suite,
        "bound": _bound_block(spec.r, spec.n, args.h),
        "ok": report.ok and suite["ok"],
    }
    if not doc["ok"]:
        raise _Fail(doc)
    return doc


def cmd_mrd(args):
    act = args.action
    if act == "construct":
        _need(args, "r")
        return mrd.code_to_json(mrd.gabidulin_code(_tower(args), args.r))
    if not args.file:
        raise InputError(f"mrd {act} needs a code file")
    C = _load_code(args.file)
    if act == "distance":
        d = mrd.min_distance(C, cap=args.cap, workers=args.workers)
        return {
            "command": "mrd distance",
            "n": C.n,
            "r": C.r,
            "d": d,
            "singleton_bound": C.n - C.r + 1,
            "mrd": d == C.n - C.r + 1,
        }
    if act == "idealiser":
        return {"command": "mrd idealiser", **mrd.idealiser(C, args.side, cap=args.cap).to_json()}
    if act == "dual":
        D = mrd.delsarte_dual_code(C)
        out = mrd.code_to_json(D)
        out["matches_normalized_dual"] = D == mrd.normalized_dual(C)
        return out
    U = mrd.code_to_subspace(C)
    return subspace_to_json(U, provenance={"construction": "code-to-subspace", "source": args.file})


def cmd_linset(args):
    U = _load_subspace(args.file, args)
    L = linset.linear_set(U, cap=args.cap)
    doc = L.to_json()
    doc["k"] = U.k
    doc["size"] = len(L)
    doc["weight_identity"] = L.weight_identity_holds(U.k)
    return doc


COMMANDS = {
    "construct": cmd_construct,
    "check": cmd_check,
    "spectrum": cmd_spectrum,
    "dual": cmd_dual,
    "identities": cmd_identities,
    "mrd": cmd_mrd,
    "linset": cmd_linset,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.workers < 1:
        print("error: --workers must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        doc = COMMANDS[args.command](args)
    except _Fail as fail:
        _write(args, fail.doc)
        return EXIT_VERIFY
    except CapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, HScatteredError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write(args, doc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
