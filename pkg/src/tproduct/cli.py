"""Command line interface.

Exit status: 0 on success, 1 on a domain error (singular tensor, wrong
structure, ...), 2 on a usage error or an unreadable input file.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .errors import MalformedFileError, TensorError
from .examples import (EXAMPLES, gen_example, random_tensor, scaled_to_norm)
from .fileio import (dumps_tensor, format_complex, load_tensor, save_tensor,
                     write_grid, write_trajectory)
from .ode import solve_ivp
from .perturbation import (bauer_fike_bound, gershgorin_disks, generalized_bf_bound,
                           kahan_regions)
from .pseudospectra import DEFAULT_EPSILONS, pseudo_grid
from .spectral import generalized_t_eigenvalues, t_eigenvalues
from .tensor_core import unfold


class UsageError(Exception):
    pass


def _floats(text, count=None, what="list"):
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError("cannot parse %s %r" % (what, text)) from None
    if count is not None and len(vals) != count:
        raise UsageError("%s needs %d comma separated numbers, got %r" % (what, count, text))
    return vals


def _norm_arg(text):
    if text not in ("1", "2", "inf"):
        raise argparse.ArgumentTypeError("norm must be 1, 2 or inf")
    return np.inf if text == "inf" else int(text)


def _load(path):
    try:
        return load_tensor(path)
    except FileNotFoundError:
        raise UsageError("no such file: %s" % path) from None
    except MalformedFileError as exc:
        raise UsageError("%s: %s" % (path, exc)) from None


def _json_line(d):
    clean = {}
    for k, v in d.items():
        if isinstance(v, (np.floating, np.integer)):
            v = v.item()
        clean[k] = v
    return json.dumps(clean, sort_keys=True)


def cmd_eig(args, out):
    a = _load(args.tensor)
    spec = t_eigenvalues(a, want_vectors=args.vectors)
    for k, lam in enumerate(spec.eigenvalues):
        line = format_complex(lam)
        if args.vectors:
            vec = unfold(spec.eigenvectors[k])[:, 0]
            line += "\t" + " ".join(format_complex(v) for v in vec)
        out.write(line + "\n")
    return 0


def cmd_geig(args, out):
    a, b = _load(args.a), _load(args.b)
    spec, reg = generalized_t_eigenvalues(a, b)
    out.write("# rank(bcirc(B)) = %d of %d (%s)\n"
              % (reg.rank, reg.size, "regular" if reg.full_rank else "rank deficient"))
    for lam, inf in zip(spec.eigenvalues, spec.infinite):
        if inf:
            out.write(("nan" if np.isnan(lam) else "inf") + "\n")
        else:
            out.write(format_complex(lam) + "\n")
    return 0


def cmd_pseudo(args, out):
    a = _load(args.tensor)
    eps = tuple(_floats(args.eps, what="--eps")) if args.eps else DEFAULT_EPSILONS
    if (args.re is None) != (args.im is None):
        raise UsageError("--re and --im must be given together")
    region = None
    if args.re is not None:
        region = tuple(_floats(args.re, 2, "--re") + _floats(args.im, 2, "--im"))
    grid = pseudo_grid(a, region, args.nx, args.ny, eps, args.norm)
    mpath = write_grid(args.out, grid, provenance={"tensor": str(args.tensor), "shape": list(a.shape)})
    out.write("wrote %d rows to %s (metadata %s)\n" % (grid.nx * grid.ny, args.out, mpath))
    return 0


def _deltas(args, a):
    if args.delta:
        return [_load(args.delta)]
    seeds = np.random.SeedSequence(args.seed).spawn(args.trials)
    out = []
    for ss in seeds:
        rng = np.random.default_rng(ss)
        out.append(scaled_to_norm(random_tensor(rng, a.m, a.p, a.n), args.scale))
    return out


def cmd_bounds(args, out):
    a = _load(args.tensor)
    if args.kind == "gershgorin":
        lam = t_eigenvalues(a).eigenvalues
        for mode in ("raw", "schur"):
            disks = gershgorin_disks(a, mode)
            inside = disks.contains(lam, tol=1e-9 * max(1.0, float(np.abs(lam).max())))
            out.write(_json_line({"mode": mode, "disks": len(disks),
                                  "max_radius": float(disks.radii.max()),
                                  "holds": bool(inside.all())}) + "\n")
        return 0
    if args.kind == "bauer-fike" and not args.P:
        raise UsageError("bauer-fike needs --P <tensor file>")
    P = _load(args.P) if args.P else None
    for k, delta in enumerate(_deltas(args, a)):
        if args.kind == "bauer-fike":
            rep = bauer_fike_bound(a, P, delta, args.norm)
        elif args.kind == "gen-bf":
            rep = generalized_bf_bound(a, delta, args.norm)
        else:
            _, rep = kahan_regions(a, delta)
        out.write(_json_line({"trial": k, **rep.as_dict()}) + "\n")
    return 0


def cmd_ode(args, out):
    a, y0 = _load(args.a), _load(args.y0)
    times = _floats(args.times, what="--times")
    sol = solve_ivp(a, y0, times)
    write_trajectory(args.out, sol)
    out.write("wrote %d states to %s\n" % (len(sol), args.out))
    return 0


def cmd_gen(args, out):
    t = gen_example(args.name, args.n)
    if args.out:
        save_tensor(args.out, t)
    else:
        out.write(dumps_tensor(t))
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="tproduct", description="t-product tensor spectra, pseudospectra and bounds")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eig", help="T-eigenvalues of a tensor")
    s.add_argument("tensor")
    s.add_argument("--vectors", action="store_true", help="also print unfold(X) per eigenvalue")
    s.set_defaults(func=cmd_eig)

    s = sub.add_parser("geig", help="generalized T-eigenvalues of A relative to B")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_geig)

    s = sub.add_parser("pseudo", help="pseudospectrum grid as CSV")
    s.add_argument("tensor")
    s.add_argument("--re", help="re_min,re_max (default: automatic)")
    s.add_argument("--im", help="im_min,im_max (default: automatic)")
    s.add_argument("--nx", type=int, default=200)
    s.add_argument("--ny", type=int, default=200)
    s.add_argument("--eps", help="comma separated levels (default 1e-1..1e-10)")
    s.add_argument("--norm", type=_norm_arg, default=2)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_pseudo)

    s = sub.add_parser("bounds", help="check a perturbation bound")
    s.add_argument("kind", choices=["gershgorin", "bauer-fike", "gen-bf", "kahan"])
    s.add_argument("tensor")
    s.add_argument("--P", help="eigenvector tensor for bauer-fike")
    s.add_argument("--delta", help="perturbation tensor file (default: random)")
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--scale", type=float, default=1e-3, help="2-norm of random perturbations")
    s.add_argument("--norm", default="2", choices=["1", "2", "inf", "fro"])
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("ode", help="solve dY/dt = A * Y")
    s.add_argument("a")
    s.add_argument("y0")
    s.add_argument("--times", required=True, help="comma separated, starting at 0")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_ode)

    s = sub.add_parser("gen", help="write one of the example tensors")
    s.add_argument("name", choices=sorted(EXAMPLES))
    s.add_argument("--n", type=int, default=20)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)
    return p


def cli_main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "norm", None) in ("1", "2", "inf", "fro"):
            args.norm = {"inf": np.inf, "fro": "fro"}.get(args.norm) or int(args.norm)
        return args.func(args, out)
    except UsageError as exc:
        err.write("tproduct: error: %s\n" % exc)
        return 2
    except SystemExit as exc:
        # --help / --version
        return int(exc.code or 0)
    except (TensorError, ValueError, OSError) as exc:
        err.write("tproduct: %s\n" % exc)
        return 1


def main():
    sys.exit(cli_main())
