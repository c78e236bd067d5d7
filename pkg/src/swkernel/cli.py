"""Command-line entry point: ``swkernel {kernel,grid,verify,wigner}``.

Exit codes: 0 success, 1 validation or verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import kernels, moduli, orbits, wigner
from .algebra import sample_haar_unitary
from .errors import SWKernelError

DEFAULT_SEED = 42
FMT = ".17g"


class Failure(Exception):
    """Validation/verification failure, mapped to exit code 1."""


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("SWKERNEL_SEED")
    return int(env) if env else DEFAULT_SEED


def _num(x) -> float:
    return float(format(float(x), FMT))


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "dim": int(m.shape[0]),
        "re": [[_num(v) for v in row] for row in m.real],
        "im": [[_num(v) for v in row] for row in m.imag],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    n = int(obj["dim"])
    re = np.asarray(obj["re"], dtype=float).reshape(n, n)
    im = np.asarray(obj.get("im", np.zeros((n, n))), dtype=float).reshape(n, n)
    return re + 1j * im


def _read_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- kernel selection ---------------------------------------------------------


def _family_name(name: str, dim: int | None) -> str:
    try:
        spec = kernels.resolve_family(name)
    except KeyError:
        if dim == 4:
            spec = kernels.resolve_family(f"quatrit-{name}")
        elif dim == 3:
            spec = kernels.resolve_family(f"qutrit-{name}")
        else:
            raise
    return spec.name


def select_point(args, dim: int | None) -> tuple[moduli.ModuliPoint, dict]:
    """Moduli point from ``--family``/``--nu*`` or ``--angles``; returns (point, description)."""
    if args.family and args.angles is not None:
        raise argparse.ArgumentTypeError("use either --family or --angles, not both")
    if args.angles is not None:
        if dim is None:
            raise argparse.ArgumentTypeError("--angles needs --dim")
        ang = [float(a) for a in args.angles.split(",") if a.strip()] if args.angles else []
        if len(ang) != max(dim - 2, 0):
            raise argparse.ArgumentTypeError(f"--angles needs {dim - 2} comma-separated values for dim {dim}")
        return moduli.ModuliPoint.from_angles(ang, dim), {"angles": ang}
    name = args.family or ("qubit" if dim == 2 else None)
    if name is None:
        raise argparse.ArgumentTypeError("dim >= 3 needs --family or --angles")
    try:
        name = _family_name(name, dim)
    except KeyError as exc:
        raise argparse.ArgumentTypeError(str(exc.args[0])) from None
    spec = kernels.FAMILIES[name]
    if dim is not None and spec.dim != dim:
        raise argparse.ArgumentTypeError(f"family {name} has dim {spec.dim}, not {dim}")
    if spec.params == ("nu",):
        if args.nu is None:
            raise argparse.ArgumentTypeError(f"family {name} needs --nu")
        params = (args.nu,)
    elif spec.params == ("nu1", "nu2"):
        if args.nu1 is None or args.nu2 is None:
            raise argparse.ArgumentTypeError(f"family {name} needs --nu1 and --nu2")
        params = (args.nu1, args.nu2)
    else:
        params = ()
    fam = kernels.KernelFamily(name, params)  # DomainError -> exit 1
    return moduli.ModuliPoint.from_spectrum(kernels.family_spectrum(fam)), {"family": name, "params": list(params)}


def kernel_record(k: kernels.SWKernel, desc: dict) -> dict:
    st = orbits.classify_stratum(k)
    rep = kernels.verify_master(k.matrix)
    sing = kernels.detect_singular(k)
    rec = {"dim": k.dim}
    rec.update(desc)
    rec.update(
        {
            "angles": [_num(a) for a in k.moduli.angles] if k.moduli else None,
            "mu": [_num(m) for m in k.moduli.mu] if k.moduli else None,
            "spectrum": [_num(v) for v in k.spectrum],
            "stratum": st.pattern,
            "orbit_dim": st.orbit_dim,
            "isotropy_dim": st.isotropy_dim,
            "singular": sing.label if sing.zero_multiplicity else None,
            "master": {
                "trace_residual": _num(rep.trace_residual),
                "trace_sq_residual": _num(rep.trace_sq_residual),
                "pass": rep.passed,
            },
            "matrix": matrix_to_json(k.matrix),
        }
    )
    return rec


# -- commands -----------------------------------------------------------------


def cmd_kernel(args) -> int:
    point, desc = select_point(args, args.dim)
    u = sample_haar_unitary(point.dim, resolve_seed(args.seed)) if args.haar else None
    k = kernels.build_kernel(point, u)
    _emit(_dump(kernel_record(k, desc)), args.output)
    return 0


def _vertex_label(dim: int, pattern: str) -> str:
    table = {3: {"1|23": "A", "12|3": "B"}, 4: {"12|3|4": "A", "1|2|34": "B", "1|23|4": "C"}}
    return table.get(dim, {}).get(pattern, "")


def grid_rows(dim: int, resolution: int) -> list[dict]:
    rows = []
    for p in moduli.sample_moduli_grid(dim, resolution):
        k = kernels.build_kernel(p)
        st = orbits.classify_stratum(k)
        rows.append(
            {
                "angles": list(p.angles),
                "mu": list(p.mu),
                "spectrum": list(k.spectrum),
                "stratum": st.pattern,
                "orbit_dim": st.orbit_dim,
                "det": float(np.prod(k.spectrum)),
                "vertex": _vertex_label(dim, st.pattern),
            }
        )
    return rows


def _grid_csv(dim: int, rows: list[dict]) -> str:
    head = (
        [f"psi_{j}" for j in range(1, dim - 1)]
        + [f"mu_{s * s - 1}" for s in range(2, dim + 1)]
        + [f"pi_{i}" for i in range(1, dim + 1)]
        + ["stratum", "orbit_dim", "det", "vertex"]
    )
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(head)
    for r in rows:
        nums = [format(x, FMT) for x in r["angles"] + r["mu"] + r["spectrum"]]
        w.writerow(nums + [r["stratum"], r["orbit_dim"], format(r["det"], FMT), r["vertex"]])
    return buf.getvalue()


def cmd_grid(args) -> int:
    if args.dim is None:
        raise argparse.ArgumentTypeError("grid needs --dim")
    rows = grid_rows(args.dim, args.resolution)
    if args.format == "csv":
        text = _grid_csv(args.dim, rows)
    else:
        for r in rows:
            for key in ("angles", "mu", "spectrum"):
                r[key] = [_num(x) for x in r[key]]
            r["det"] = _num(r["det"])
        text = _dump({"dim": args.dim, "resolution": args.resolution, "rows": rows})
    _emit(text, args.output)
    return 0


def _catalog_args():
    """One representative parameter set per family."""
    out = []
    for name, spec in kernels.FAMILIES.items():
        if spec.interval is not None:
            lo, hi, _ = spec.interval
            out.append((name, ((lo + hi) / 2,)))
        elif spec.params == ("nu1", "nu2"):
            out.append((name, (-0.3, -0.8)))
        else:
            out.append((name, ()))
    return out


def run_verification(dims, samples: int, seed: int, kernel_file: str | None = None) -> dict:
    checks = []

    def add(name, residual, tol, passed=None):
        passed = bool(residual < tol) if passed is None else bool(passed)
        checks.append({"name": name, "residual": _num(residual), "tolerance": _num(tol), "pass": passed})

    ss = np.random.SeedSequence(seed)
    for name, params in _catalog_args():
        spec = kernels.FAMILIES[name]
        if spec.dim not in dims:
            continue
        u = sample_haar_unitary(spec.dim, ss.spawn(1)[0])
        k = kernels.family_kernel(name, *params, u=u)
        rep = kernels.verify_master(k.matrix)
        add(f"master/{name}", max(rep.trace_residual, rep.trace_sq_residual), kernels.MASTER_TOL)
        try:
            st = orbits.classify_stratum(k)
            rank = orbits.gram_matrix(k).rank
            add(f"gram/{name}", abs(rank - st.orbit_dim), 0.5)
        except SWKernelError:
            add(f"gram/{name}", 1.0, 0.5, passed=False)

    for n in sorted(dims):
        point = moduli.random_moduli_point(n, np.random.default_rng(ss.spawn(1)[0]))
        rep = wigner.check_sw_postulates(point, trials=50, seed=ss.spawn(1)[0], samples=samples)
        for key, res in rep.items():
            add(f"postulate/{key}/N={n}", res.residual, res.tolerance, res.passed)

    for n in sorted(d for d in dims if d <= 3):
        mc = wigner.haar_fourth_moments(n, samples, ss.spawn(1)[0])
        dev = float(np.max(np.abs(mc - wigner.weingarten_tensor(n))))
        add(f"weingarten/N={n}", dev, 5.0 / np.sqrt(samples))

    if kernel_file:
        obj = _read_json(kernel_file)
        m = matrix_from_json(obj.get("matrix", obj))
        rep = kernels.verify_master(m)
        add("kernel_file/master_equations", max(rep.trace_residual, rep.trace_sq_residual), kernels.MASTER_TOL)

    return {
        "seed": seed,
        "samples": samples,
        "dims": sorted(dims),
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }


def cmd_verify(args) -> int:
    dims = [args.dim] if args.dim else [2, 3, 4]
    report = run_verification(dims, args.samples or 10_000, resolve_seed(args.seed), args.kernel_file)
    _emit(_dump(report), args.output)
    if not report["pass"]:
        bad = ", ".join(c["name"] for c in report["checks"] if not c["pass"])
        print(f"verification failed: {bad}", file=sys.stderr)
        return 1
    return 0


def load_state(path: str) -> wigner.DensityMatrix:
    try:
        m = matrix_from_json(_read_json(path))
    except (OSError, KeyError, ValueError) as exc:
        raise Failure(f"cannot read state file {path}: {exc}") from None
    try:
        return wigner.DensityMatrix(m)
    except SWKernelError as exc:
        raise Failure(f"invalid state file {path}: {exc}") from None


def cmd_wigner(args) -> int:
    rho = load_state(args.state)
    n = rho.dim
    if args.dim is not None and args.dim != n:
        raise argparse.ArgumentTypeError(f"--dim {args.dim} does not match state dim {n}")
    point, desc = select_point(args, n)
    if point.dim != n:
        raise argparse.ArgumentTypeError(f"kernel dim {point.dim} does not match state dim {n}")
    seed = resolve_seed(args.seed)

    if args.samples:
        vals = wigner.wigner_sweep(rho, point, args.samples, seed)
        if args.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["index", "W"])
            for i, v in enumerate(vals):
                w.writerow([i, format(v, FMT)])
            text = buf.getvalue()
        else:
            text = _dump({"dim": n, "seed": seed, "samples": args.samples, "kernel": desc, "values": [_num(v) for v in vals]})
        _emit(text, args.output)
        return 0

    u = sample_haar_unitary(n, seed) if args.phase == "haar" else np.eye(n, dtype=complex)
    k = kernels.build_kernel(point, u)
    value = wigner.wigner_value(rho, k)
    cartan = wigner.wigner_cartan(rho.bloch, point, u)
    out = {
        "dim": n,
        "kernel": desc,
        "phase": args.phase,
        "seed": seed if args.phase == "haar" else None,
        "value": _num(value),
        "cartan_value": _num(cartan),
    }
    _emit(_dump(out), args.output)
    return 0


# -- parser -------------------------------------------------------------------


def _add_kernel_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", help="named kernel family (e.g. qutrit, 1|23|4, quatrit-regular)")
    p.add_argument("--nu", type=float, help="parameter of a one-parameter family")
    p.add_argument("--nu1", type=float, help="first parameter of the regular quatrit family")
    p.add_argument("--nu2", type=float, help="second parameter of the regular quatrit family")
    p.add_argument("--angles", help="comma-separated spherical angles psi_1..psi_{N-2}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swkernel", description="Stratonovich-Weyl kernels and Wigner functions")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, help="Hilbert-space dimension N")
    common.add_argument("--seed", type=int, help=f"RNG seed (default: $SWKERNEL_SEED or {DEFAULT_SEED})")
    common.add_argument("--output", metavar="PATH", help="write to PATH instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", parents=[common], help="build a kernel and print it as JSON")
    _add_kernel_flags(p)
    p.add_argument("--haar", action="store_true", help="conjugate by a Haar-random unitary drawn from --seed")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("grid", parents=[common], help="export the moduli-space grid")
    p.add_argument("--resolution", type=int, default=20)
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("--samples", type=int, default=10_000, help="Monte Carlo samples per check")
    p.add_argument("--kernel-file", metavar="PATH", help="also check a kernel JSON file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("wigner", parents=[common], help="evaluate a Wigner function")
    p.add_argument("--state", required=True, metavar="PATH", help="density matrix JSON {dim, re, im}")
    _add_kernel_flags(p)
    p.add_argument("--phase", choices=["identity", "haar"], default="identity")
    p.add_argument("--samples", type=int, help="sweep over this many Haar phase points")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_wigner)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "resolution", 2) < 2:
        parser.error("--resolution must be >= 2")
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except (Failure, SWKernelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
