"""Command-line entry point: ``qtb verify|spectrum|bethe|gordon|offshell``.

Machine output is JSON on stdout (and in ``--out`` when given); a short
human-readable table goes to stderr.  Exit codes: 0 all checks pass,
1 configuration error, 2 a check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import List, Optional

import mpmath

from .params import (
    EXACT,
    FLOAT,
    ParameterError,
    Params,
    default_exact,
    default_float,
    default_precision,
    parse_scalar,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FAIL = 2

SUITES = ("relations", "shuffle", "gordon", "fock", "kn", "all")

# extra evaluation points used when --k exceeds the number of --u values
_EXTRA_U_FLOAT = ("1", "0.6,0.45", "0.37,-0.81", "-1.3,0.2")
_EXTRA_U_EXACT = ("1", "5/7", "11/13", "-3/5")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    suite: Optional[str] = None
    q: Optional[str] = None
    q1: Optional[str] = None
    u: List[str] = field(default_factory=list)
    p: str = "0.18,0.05"
    n: Optional[int] = None
    k: Optional[int] = None
    degree: int = 2
    precision: int = field(default_factory=default_precision)
    seed: int = 0
    window: Optional[str] = None
    out: Optional[str] = None

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data) -> "RunConfig":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(**data)

    # -- parameter construction -----------------------------------------------
    def _is_complex(self, text) -> bool:
        return text is not None and "," in str(text)

    def params(self, mode: str | None = None) -> Params:
        """Exact when every given number is rational (unless float is forced)."""
        if mode is None:
            given = [self.q, self.q1] + list(self.u)
            mode = FLOAT if any(self._is_complex(x) or _looks_decimal(x) for x in given if x) else EXACT
        if mode == FLOAT:
            base = default_float(self.precision)
            q = parse_scalar(self.q, FLOAT) if self.q else base.q
            q1 = parse_scalar(self.q1, FLOAT) if self.q1 else base.q1
            return Params(q, q1, FLOAT, self.precision)
        base = default_exact()
        q = parse_scalar(self.q, EXACT) if self.q else base.q
        q1 = parse_scalar(self.q1, EXACT) if self.q1 else base.q1
        return Params(q, q1, EXACT, self.precision)

    def us(self, params: Params) -> tuple:
        given = list(self.u) or ["1"]
        k = self.k or len(given)
        if k < len(given):
            raise ConfigError(f"--k {k} is smaller than the number of --u values")
        extra = _EXTRA_U_EXACT if params.exact else _EXTRA_U_FLOAT
        pool = [x for x in extra if x not in given]
        while len(given) < k:
            if not pool:
                raise ConfigError("give --u explicitly for more than 4 evaluation points")
            given.append(pool.pop(0))
        return tuple(parse_scalar(x, params.mode) for x in given)

    def p_value(self, params: Params):
        return parse_scalar(self.p, params.mode)


def _looks_decimal(text) -> bool:
    s = str(text)
    return any(c in s for c in ".eEj") and "/" not in s


def _c(z) -> list:
    z = Params.scalar_to_mpc(z)
    return [float(mpmath.re(z)), float(mpmath.im(z))]


def _fmt(z) -> str:
    return mpmath.nstr(Params.scalar_to_mpc(z), 12)


# ---------------------------------------------------------------------------
# commands; each returns (report, ok, table lines)
# ---------------------------------------------------------------------------


def _relations_records(params: Params, suite: str, us) -> list:
    from .relations import (
        bimodule_relations,
        boson_relations,
        fock_relations,
        l_operator_relations,
        shuffle_relations,
    )

    records = []
    if suite in ("relations", "fock", "all"):
        records += fock_relations(params, us[0])
        records += boson_relations(params, us[0])
        records += l_operator_relations(params)
    if suite in ("relations", "all"):
        records += bimodule_relations(params, us[:1])
        records += _n_records(params, us[0])
    if suite in ("shuffle", "all"):
        records += shuffle_relations(params)
    return records


def _n_records(params: Params, u, max_size: int = 3) -> list:
    """Regularity and vanishing of the kappa basis (the subspace N)."""
    from .bimodule import in_N, kappa_map
    from .partitions import partitions_up_to

    out = []
    for lam in partitions_up_to(max_size):
        checks = in_N(kappa_map(params, lam, u))
        out.append({"name": "kappa-in-N", "where": f"kappa(h_-{lam}): regular at 0 and oo, vanishes at 0",
                    "pass": all(checks.values()), "max": 0.0, "checks": checks})
    return out


def cmd_verify(cfg: RunConfig):
    suite = cfg.suite
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}")
    report = {"suite": suite}
    ok = True
    lines = []
    if suite == "gordon":
        return cmd_gordon(cfg)
    params = cfg.params()
    report["params"] = params.to_json()
    us = cfg.us(params)
    if suite in ("relations", "fock", "shuffle", "all"):
        records = _relations_records(params, suite, us)
        report["records"] = records
        ok = all(r["pass"] for r in records)
        lines += [f"{r['name']:<20} {'pass' if r['pass'] else 'FAIL'}  {r['where']}" for r in records]
    if suite in ("kn", "all"):
        from .offshell import verify_Kn

        kn = verify_Kn(params, cfg.degree)
        report["kn"] = kn
        ok = ok and kn["pass"]
        lines += [f"{r['name']:<20} {'pass' if r['pass'] else 'FAIL'}  {r['where']}"
                  f"{'' if r['independent'] else ' (consistency)'}" for r in kn["records"]]
    if suite == "all":
        sub, gok, glines = cmd_gordon(cfg)
        report["gordon"] = sub
        ok = ok and gok
        lines += glines
    report["pass"] = ok
    return report, ok, lines


def _parse_window(text):
    from .gordon import Window

    if text is None:
        return None
    try:
        parts = [int(x) for x in str(text).split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad --window {text!r}") from exc
    if len(parts) == 1:
        return Window(above=parts[0])
    if len(parts) == 2:
        return Window(below=parts[0], above=parts[1])
    raise ConfigError("--window takes 'above' or 'below,above'")


def cmd_gordon(cfg: RunConfig):
    from .gordon import gordon_dimensions

    params = cfg.params(EXACT)
    us = cfg.us(params)
    n = 5 if cfg.n is None else cfg.n
    reports = gordon_dimensions(params, n, us, window=_parse_window(cfg.window), seed=cfg.seed)
    dims = {str(r.n): r.dim for r in reports}
    ok = all(r.passed for r in reports)
    report = {"dims": dims, "pass": ok, "k": len(us), "reports": [r.to_json() for r in reports]}
    lines = [f"n={r.n}  dim={r.dim}  expected={r.expected}  bounds=[{r.lower},{r.upper}]  "
             f"{'pass' if r.passed else 'FAIL'}  {r.seconds:.1f}s" for r in reports]
    return report, ok, lines


def _spectrum(params: Params, u, p, n: int):
    from .fock import integral_operator
    from .linalg import eigenvalues, sort_complex

    M = integral_operator(params, u, p, n)
    return M, sort_complex(eigenvalues(M))


def cmd_spectrum(cfg: RunConfig):
    params = cfg.params(FLOAT)
    us = cfg.us(params)
    if len(us) != 1:
        raise ConfigError("spectrum is implemented for one Fock module (k = 1)")
    p = cfg.p_value(params)
    n = 2 if cfg.n is None else cfg.n
    try:
        M, evs = _spectrum(params, us[0], p, n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    report = {"n": n, "p": _c(p), "u": _c(us[0]), "params": params.to_json(),
              "matrix": [[_c(x) for x in row] for row in M], "eigenvalues": [_c(x) for x in evs]}
    return report, True, [f"E[{i}] = {_fmt(e)}" for i, e in enumerate(evs)]


def cmd_bethe(cfg: RunConfig):
    from .bethe import solve_all, verify_kernel
    from .linalg import sort_complex

    params = cfg.params(FLOAT)
    us = cfg.us(params)
    p = cfg.p_value(params)
    n = 2 if cfg.n is None else cfg.n
    try:
        window = int(cfg.window) if cfg.window else 1
    except ValueError as exc:
        raise ConfigError(f"bad --window {cfg.window!r}; bethe takes an integer") from exc
    states = solve_all(params, us, p, n)
    ok = all(s.converged for s in states)
    out_states, lines = [], []
    for s in states:
        js = s.to_json()
        if s.converged:
            kr = verify_kernel(s, window)
            js["kernel_max"] = float(kr.max_abs)
            js["kernel_control"] = float(kr.control)
            ok = ok and kr.max_abs < 1e-8
        out_states.append(js)
        seed = "|".join(str(lam) for lam in s.seed)
        lines.append(f"{seed:<14} E={_fmt(s.eigenvalue):<40} res={float(s.residual_norm):.1e} "
                     f"kernel={js.get('kernel_max', float('nan')):.1e} {'ok' if s.converged else 'FAILED'}")
    report = {"n": n, "k": len(us), "p": _c(p), "u": [_c(u) for u in us], "params": params.to_json(),
              "states": out_states}
    if len(us) == 1:
        try:
            _, spec = _spectrum(params, us[0], p, n)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        left = list(spec)
        rows = []
        for s in states:
            if not s.converged:
                continue
            E = s.eigenvalue
            if not left:
                rows.append({"eigenvalue": _c(E), "spectrum": None, "delta": None, "match": False})
                continue
            j = min(range(len(left)), key=lambda i: abs(left[i] - E))
            d = abs(left[j] - E) / max(1, abs(E))
            rows.append({"eigenvalue": _c(E), "spectrum": _c(left[j]), "delta": float(d), "match": bool(d < 1e-8)})
            left.pop(j)
        complete = not left and len(rows) == len(spec)
        report["comparison"] = rows
        report["spectrum_covered"] = complete
        ok = ok and complete and all(r["match"] for r in rows)
        lines += [f"match  |dE|={r['delta']:.1e}  {r['match']}" for r in rows if r["delta"] is not None]
    report["pass"] = ok
    return report, ok, lines


def cmd_offshell(cfg: RunConfig):
    from .bethe import perturbation, solve_all
    from .offshell import build_offshell, check_eigenvector

    params = cfg.params(FLOAT)
    us = cfg.us(params)
    if len(us) != 1:
        raise ConfigError("the off-shell covector is implemented for k = 1")
    u = us[0]
    p = cfg.p_value(params)
    n = 2 if cfg.n is None else cfg.n
    rows, lines, ok = [], [], True
    for s in solve_all(params, us, p, n):
        if not s.converged:
            rows.append({"seed": [list(lam.parts) for lam in s.seed], "converged": False})
            ok = False
            continue
        on = check_eigenvector(params, s.roots, p, u)
        moved = [a + d for a, d in zip(s.roots, perturbation(n))]
        off = check_eigenvector(params, moved, p, u)
        good = on["residual"] < 1e-8 and (n == 0 or off["residual"] > 1e-3)
        ok = ok and good
        rows.append({
            "seed": [list(lam.parts) for lam in s.seed],
            "eigenvalue": _c(s.eigenvalue),
            "covector": build_offshell(params, s.roots, p, u).to_json(),
            "residual": float(on["residual"]),
            "perturbed_residual": float(off["residual"]),
            "pass": bool(good),
        })
        lines.append(f"{str(s.seed[0]):<10} residual={float(on['residual']):.1e} "
                     f"perturbed={float(off['residual']):.1e} {'pass' if good else 'FAIL'}")
    report = {"n": n, "p": _c(p), "u": _c(u), "params": params.to_json(), "states": rows, "pass": ok}
    return report, ok, lines


COMMANDS = {
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "bethe": cmd_bethe,
    "gordon": cmd_gordon,
    "offshell": cmd_offshell,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", help="q (a/b rational or re,im complex)")
    common.add_argument("--q1", help="q1 (a/b rational or re,im complex)")
    common.add_argument("--u", action="append", default=[], help="evaluation point; repeat for k > 1")
    common.add_argument("--p", default="0.18,0.05", help="twist parameter p")
    common.add_argument("--n", type=int, help="degree / number of Bethe roots")
    common.add_argument("--k", type=int, help="number of Fock factors")
    common.add_argument("--degree", type=int, default=2, help="degree budget for verify kn")
    common.add_argument("--precision", type=int, help="decimal digits (default $QTB_PRECISION or 40)")
    common.add_argument("--seed", type=int, default=0, help="seed for random evaluation points")
    common.add_argument("--window", help="gordon: 'above' or 'below,above'; bethe: kernel window")
    common.add_argument("--out", help="also write the JSON report here")

    parser = argparse.ArgumentParser(prog="qtb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    v.add_argument("suite", choices=SUITES)
    sub.add_parser("spectrum", parents=[common], help="degree-n block of the first integral")
    sub.add_parser("bethe", parents=[common], help="solve the Bethe equations by continuation")
    sub.add_parser("gordon", parents=[common], help="dimension count of the graded quotient")
    sub.add_parser("offshell", parents=[common], help="off-shell covectors at Bethe states")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    precision = args.precision if args.precision is not None else default_precision()
    if precision < 15:
        raise ConfigError("--precision must be at least 15 digits")
    return RunConfig(
        command=args.command, suite=getattr(args, "suite", None), q=args.q, q1=args.q1, u=list(args.u),
        p=args.p, n=args.n, k=args.k, degree=args.degree, precision=precision, seed=args.seed,
        window=args.window, out=args.out,
    )


def _default(o):
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    if isinstance(o, (mpmath.mpf, mpmath.mpc)):
        return _c(o)
    raise TypeError(type(o).__name__)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        cfg = config_from_args(args)
        if cfg.n is not None and cfg.n < 0:
            raise ConfigError("--n must be non-negative")
        mpmath.mp.dps = max(mpmath.mp.dps, cfg.precision)
        report, ok, lines = COMMANDS[cfg.command](cfg)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = json.dumps(report, default=_default, indent=2)
    print(text)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    for line in lines:
        print(line, file=sys.stderr)
    print(f"{cfg.command}: {'pass' if ok else 'FAIL'} ({time.perf_counter() - start:.1f}s)", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
