"""Command-line front end.

Subcommands: bessel, dunkl, walk, lln, slln, ldp, check.  Each run takes
a flat JSON config file plus flag overrides, validates everything before
computing, and leaves two artifacts in the output directory: a CSV whose
first two lines carry the config hash and master seed, and a config echo
JSON that re-parses to the exact RunConfig used.  Identical (config,
seed) pairs produce byte-identical CSVs.

Exit codes: 0 success, 1 acceptance-criterion failure (check only),
2 config or domain error (with file:line when the offender is a config
entry), 3 a numeric routine could not certify its tolerance (the message
carries the bound it did achieve).

Heavy imports happen inside the command handlers so that --threads (or
the CONEBESSEL_THREADS variable) can pin the BLAS thread count before
numpy first loads.  When the library is already imported the pin is a
no-op; replicates are vectorized inside each experiment, and all file
writes happen single-threaded at the end.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

from .errors import (
    ConfigError,
    ConvergenceError,
    DimensionError,
    DomainError,
    IllConditionedError,
    SamplingError,
    UnsupportedRankError,
)

_THREAD_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)

_SCHEDULE_KEYS = ("mu_family", "mu_c", "mu_b", "n_family", "n_c", "n_b")


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Flat description of one run; every field has a JSON-friendly type.

    `grid` is the per-subcommand abscissa list: x values for bessel,
    index values mu for dunkl, walk lengths k for lln, and rate-function
    arguments s for ldp.  It may be given as "start:stop:step" or as an
    explicit comma list / JSON array.  `atoms` holds one diagonal
    (length q) per atom of the step measure.
    """

    experiment: str | None = None
    q: int = 1
    d: int = 1
    mu: float | None = None
    mu_family: str = "pow2"
    mu_c: float = 1.0
    mu_b: float = 1.0
    n_family: str = "poly"
    n_c: float = 1.0
    n_b: float = 1.0
    weights: tuple = (1.0,)
    atoms: tuple = ((1.0,),)
    grid: tuple | None = None
    t_values: tuple = (-1.0, 1.0)
    epsilon: float = 0.1
    replicates: int = 200
    steps: int = 10
    k_max: int = 20
    n_samples: int = 100_000
    series_tol: float | None = None
    max_weight: int | None = None
    xi: tuple = ()
    eta: tuple = ()
    seed: int = 0
    out: str = "."

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for key, val in d.items():
            if isinstance(val, tuple):
                d[key] = [list(v) if isinstance(v, tuple) else v for v in val]
        return d

    @classmethod
    def from_dict(cls, data: dict, path=None, raw_text=None) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        clean = {}
        for key, val in data.items():
            if key not in known:
                raise ConfigError(
                    f"unknown config field {key!r}",
                    path=path,
                    line=_find_key_line(raw_text, key),
                )
            clean[key] = _normalize(val)
        try:
            return cls(**clean)
        except TypeError as exc:
            raise ConfigError(str(exc), path=path) from exc


def _normalize(val):
    """Lists become tuples (recursively) so RunConfig equality is plain."""
    if isinstance(val, (list, tuple)):
        return tuple(_normalize(v) for v in val)
    return val


def _find_key_line(raw_text, key):
    if raw_text is None:
        return None
    needle = f'"{key}"'
    for i, line in enumerate(raw_text.splitlines(), start=1):
        if needle in line:
            return i
    return None


def load_config_file(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}", path=path) from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno) from exc
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object", path=path, line=1)
    return RunConfig.from_dict(data, path=path, raw_text=raw)


def parse_grid(text):
    """Accept "start:stop:step" (stop inclusive up to rounding) or a comma list."""
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    s = str(text).strip()
    if ":" in s:
        pieces = s.split(":")
        if len(pieces) != 3:
            raise ConfigError(f"grid range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in pieces)
        if step <= 0 or stop < start:
            raise ConfigError(f"empty grid range {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(start + i * step for i in range(count))
    try:
        return tuple(float(p) for p in s.split(",") if p.strip() != "")
    except ValueError as exc:
        raise ConfigError(f"cannot parse grid {text!r}") from exc


def _parse_atoms(text):
    """Atom list flag: diagonals separated by ';', entries by ','."""
    out = []
    for chunk in str(text).split(";"):
        chunk = chunk.strip()
        if chunk:
            out.append(tuple(float(p) for p in chunk.split(",")))
    return tuple(out)


def _apply_threads(flag_value):
    value = flag_value if flag_value is not None else os.environ.get("CONEBESSEL_THREADS")
    if value is None:
        return
    try:
        n = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"thread count must be an integer, got {value!r}")
    if n < 1:
        raise ConfigError(f"thread count must be positive, got {n}")
    for var in _THREAD_VARS:
        os.environ[var] = str(n)


_OVERRIDE_KEYS = (
    "q", "d", "mu", "mu_family", "mu_c", "mu_b", "n_family", "n_c", "n_b",
    "epsilon", "replicates", "steps", "k_max", "n_samples",
    "series_tol", "max_weight", "seed", "out",
)


def _merge_flags(cfg: RunConfig, args) -> RunConfig:
    updates = {}
    for key in _OVERRIDE_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            updates[key] = val
    if getattr(args, "grid", None) is not None:
        updates["grid"] = parse_grid(args.grid)
    if getattr(args, "weights", None) is not None:
        updates["weights"] = tuple(float(p) for p in str(args.weights).split(","))
    if getattr(args, "atoms", None) is not None:
        updates["atoms"] = _parse_atoms(args.atoms)
    for key in ("xi", "eta", "t_values"):
        val = getattr(args, key, None)
        if val is not None:
            updates[key] = tuple(float(p) for p in str(val).split(","))
    if updates:
        cfg = dataclasses.replace(cfg, **updates)
    return cfg


class _Resolved:
    """Validated objects shared by the handlers; built before any compute."""

    def __init__(self, cfg: RunConfig, command: str):
        import numpy as np

        from .hypergroup import RadialLaw
        from .limits import Schedule, config_hash
        from .linalg import ConeMatrix, StructureParams

        if cfg.experiment is not None and cfg.experiment != command:
            raise ConfigError(
                f"config names experiment {cfg.experiment!r} but the "
                f"{command!r} subcommand was invoked"
            )
        cfg = dataclasses.replace(cfg, experiment=command)

        self.schedule = Schedule(**{k: getattr(cfg, k) for k in _SCHEDULE_KEYS})
        if command in ("lln", "slln", "ldp"):
            mu0 = cfg.mu if cfg.mu is not None else self.schedule.mu(cfg.k_max)
        else:
            if cfg.mu is None and command in ("bessel", "walk"):
                raise ConfigError(f"{command} requires mu (flag --mu or config field)")
            mu0 = cfg.mu
        grid = tuple(parse_grid(cfg.grid)) if cfg.grid is not None else None
        if command == "dunkl":
            if grid is None:
                grid = (64.0, 128.0, 256.0)
            mu0 = max(grid) if mu0 is None else mu0
        self.params = StructureParams(q=cfg.q, d=cfg.d, mu=float(mu0))

        raw_atoms = cfg.atoms
        if raw_atoms == ((1.0,),) and cfg.q > 1:
            # default step measure: the identity atom at the current rank
            raw_atoms = ((1.0,) * cfg.q,)
            cfg = dataclasses.replace(cfg, atoms=raw_atoms)
        self.law = None
        if command in ("walk", "lln", "slln", "ldp"):
            atoms = []
            for diag in raw_atoms:
                entries = diag if isinstance(diag, tuple) else (diag,)
                if len(entries) != cfg.q:
                    raise ConfigError(
                        f"atom diagonal {list(entries)} needs exactly q={cfg.q} entries"
                    )
                atoms.append(ConeMatrix(np.diag([float(e) for e in entries])))
            self.law = RadialLaw(weights=cfg.weights, atoms=tuple(atoms))

        cfg = dataclasses.replace(cfg, grid=grid, mu=float(mu0))
        self.cfg = cfg
        self.grid = grid
        self.hash = config_hash(cfg.as_dict())

    def csv_header_lines(self):
        return [f"# config_hash={self.hash}", f"# seed={self.cfg.seed}"]

    def write_csv(self, name: str, columns: str, rows) -> str:
        path = os.path.join(self.cfg.out, f"{name}.csv")
        lines = self.csv_header_lines() + [columns] + list(rows)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        return path

    def write_echo(self, name: str) -> str:
        path = os.path.join(self.cfg.out, f"{name}_config.json")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.cfg.as_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path


def _g(x) -> str:
    return f"{float(x):.17g}"


def _series_kwargs(cfg: RunConfig) -> dict:
    kw = {}
    if cfg.series_tol is not None:
        kw["tol"] = cfg.series_tol
    if cfg.max_weight is not None:
        kw["max_weight"] = cfg.max_weight
    return kw


def _cmd_bessel(res: _Resolved):
    """Grid of J_mu values: certified series, ball-integral MC, and (at
    rank one) the classical one-variable column."""
    import numpy as np

    from .bessel import bessel_classical, bessel_integral_mc, bessel_series
    from .seeds import substream

    cfg = res.cfg
    grid = res.grid if res.grid is not None else parse_grid("0:4:0.25")
    rows = []
    for i, x in enumerate(grid):
        arg = (x * x / 4.0) * np.eye(cfg.q)
        val, tail = bessel_series(cfg.mu, arg, res.params, **_series_kwargs(cfg))
        half = (x / 2.0) * np.eye(cfg.q)
        mc, se = bessel_integral_mc(
            cfg.mu, half, res.params, cfg.n_samples, substream(cfg.seed, "bessel", i)
        )
        classical = ""
        if cfg.q == 1:
            cval, _ = bessel_classical(cfg.mu - 1.0, float(x))
            classical = _g(cval)
        rows.append(
            f"{_g(x)},{_g(val)},{_g(tail)},{_g(mc)},{_g(se)},{classical}"
        )
    path = res.write_csv("bessel", "x,series,series_tail,mc,mc_stderr,classical", rows)
    echo = res.write_echo("bessel")
    print(f"wrote {path} ({len(rows)} rows) and {echo}")


def _cmd_dunkl(res: _Resolved):
    """Chamber kernel values along a grid of indices, with the flat-limit
    reference and the normalized gap that should stay O(1)."""
    import numpy as np

    from .dunkl import ChamberPoint, bessel_B_mc, hyper_0F0
    from .seeds import substream

    cfg = res.cfg
    xi_vals = cfg.xi if cfg.xi else tuple(1.0 / (i + 1) for i in range(cfg.q))
    eta_vals = cfg.eta if cfg.eta else tuple(0.8 / (i + 1) for i in range(cfg.q))
    xi, eta = ChamberPoint(xi_vals), ChamberPoint(eta_vals)
    x2 = xi.array() ** 2
    e2 = eta.array() ** 2
    kw = {}
    if cfg.series_tol is not None:
        kw["tol"] = cfg.series_tol
    if cfg.max_weight is not None:
        kw["max_weight"] = cfg.max_weight
    a_limit, _ = hyper_0F0(2.0 / cfg.d, -x2, e2, **kw)
    envelope_scale = min(1.0, float(np.linalg.norm(x2) * np.linalg.norm(e2)) ** 2)
    rows = []
    for i, mu in enumerate(res.grid):
        b_val, se = bessel_B_mc(
            xi.scaled(2.0 * math.sqrt(mu)),
            eta,
            res.params.with_mu(mu),
            cfg.n_samples,
            substream(cfg.seed, "dunkl", i),
            **kw,
        )
        gap = abs(b_val - a_limit)
        envelope = envelope_scale / mu
        rows.append(
            f"{_g(mu)},{_g(b_val)},{_g(se)},{_g(a_limit)},{_g(gap)},{_g(envelope)}"
        )
    path = res.write_csv("dunkl", "mu,b_value,b_stderr,a_limit,gap,envelope", rows)
    echo = res.write_echo("dunkl")
    print(f"wrote {path} ({len(rows)} rows) and {echo}")


def _cmd_walk(res: _Resolved):
    """Replicate cone walks; one row per step with the upper-triangle
    coordinates of S_k (re/im pairs over the complex field) plus trace
    and Frobenius norm."""
    import numpy as np

    from .hypergroup import walk_simulate
    from .seeds import substream

    cfg = res.cfg
    pairs = [(i, j) for i in range(cfg.q) for j in range(i, cfg.q)]
    if cfg.d == 1:
        coord_cols = [f"x_{i + 1}{j + 1}" for i, j in pairs]
    else:
        coord_cols = []
        for i, j in pairs:
            coord_cols += [f"x_{i + 1}{j + 1}_re", f"x_{i + 1}{j + 1}_im"]
    rows = []
    for rep in range(cfg.replicates):
        path_obj = walk_simulate(
            res.law,
            res.params,
            cfg.steps,
            substream(cfg.seed, "walk", rep),
            label=f"walk:{rep}",
        )
        for step, point in enumerate(path_obj.steps):
            a = point.array
            vals = []
            for i, j in pairs:
                vals.append(_g(np.real(a[i, j])))
                if cfg.d == 2:
                    vals.append(_g(np.imag(a[i, j])))
            vals += [_g(point.trace()), _g(point.norm())]
            rows.append(f"{rep},{step}," + ",".join(vals))
    header = "replicate,k," + ",".join(coord_cols) + ",tr,norm"
    path = res.write_csv("walk", header, rows)
    echo = res.write_echo("walk")
    print(f"wrote {path} ({cfg.replicates} paths x {cfg.steps} steps) and {echo}")


def _cmd_lln(res: _Resolved):
    """Weak-law tail probabilities along a grid of walk lengths."""
    from .limits import wlln_experiment

    cfg = res.cfg
    k_grid = tuple(int(k) for k in (res.grid or (25.0, 100.0, 400.0)))
    report = wlln_experiment(
        res.law, res.params, res.schedule, k_grid, cfg.replicates, cfg.epsilon, cfg.seed
    )
    path = os.path.join(cfg.out, "lln.csv")
    report.write(path)
    echo = res.write_echo("lln")
    print(f"wrote {path} ({len(report.rows)} rows) and {echo}")


def _cmd_slln(res: _Resolved):
    """One strong-law path per seeded replicate plus schedule diagnostics."""
    from .limits import slln_experiment

    cfg = res.cfg
    report = slln_experiment(res.law, res.params, res.schedule, cfg.k_max, cfg.seed)
    path = os.path.join(cfg.out, "slln.csv")
    report.write(path)
    echo = res.write_echo("slln")
    for diag in report.diagnostics:
        print(f"schedule condition {diag.name}: {diag.verdict}")
    print(f"wrote {path} ({len(report.rows)} rows) and {echo}")


def _cmd_ldp(res: _Resolved):
    """Empirical free energy at the last index, its limit, and the rate
    function on a grid."""
    from .limits import free_energy_empirical, free_energy_limit, rate_function

    cfg = res.cfg
    k = cfg.k_max
    mu_k = res.schedule.mu(k)
    n_k = res.schedule.n(k)
    rows = []
    warned = False
    for t in cfg.t_values:
        c_k, se = free_energy_empirical(
            res.law, res.params, mu_k, n_k, float(t), cfg.replicates, cfg.seed
        )
        c_lim = free_energy_limit(res.law, res.params, float(t))
        if se > 0.2 * max(abs(c_k), 1e-12):
            warned = True
        rows.append(f"c_k,{_g(t)},{_g(c_k)},{_g(se)}")
        rows.append(f"c_limit,{_g(t)},{_g(c_lim)},0")
    s_grid = res.grid if res.grid is not None else parse_grid("0.1:0.9:0.1")
    for s in s_grid:
        val = rate_function(res.law, res.params, float(s))
        out = "inf" if math.isinf(val) else _g(val)
        rows.append(f"rate,{_g(s)},{out},0")
    path = res.write_csv("ldp", "kind,arg,value,stderr", rows)
    echo = res.write_echo("ldp")
    if warned:
        print(
            "warning: free-energy standard error above 20% of the value; "
            "increase replicates",
            file=sys.stderr,
        )
    print(f"wrote {path} ({len(rows)} rows) and {echo}")


def _cmd_check(args) -> int:
    """Run the full acceptance suite and print one line per criterion."""
    from . import acceptance

    failures = 0
    total = 0
    for result in acceptance.run_all():
        total += 1
        status = "PASS" if result.passed else "FAIL"
        if not result.passed:
            failures += 1
        print(f"{status}  {result.name:32s} [{result.seconds:7.1f}s] {result.detail}")
    print(f"{total - failures}/{total} criteria passed")
    return 0 if failures == 0 else 1


_HANDLERS = {
    "bessel": _cmd_bessel,
    "dunkl": _cmd_dunkl,
    "walk": _cmd_walk,
    "lln": _cmd_lln,
    "slln": _cmd_slln,
    "ldp": _cmd_ldp,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat JSON config file")
    common.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--threads", help="BLAS thread count (or CONEBESSEL_THREADS)")
    common.add_argument("--q", type=int, help="matrix rank")
    common.add_argument("--d", type=int, choices=(1, 2), help="field dimension: 1 real, 2 complex")
    common.add_argument("--mu", type=float, help="cone index")
    common.add_argument("--grid", help='abscissa grid, "start:stop:step" or comma list')
    common.add_argument("--replicates", type=int)
    common.add_argument("--n-samples", dest="n_samples", type=int, help="Monte Carlo sample count")
    common.add_argument("--series-tol", dest="series_tol", type=float)
    common.add_argument("--max-weight", dest="max_weight", type=int)
    common.add_argument("--weights", help="comma list of atom weights")
    common.add_argument("--atoms", help="atom diagonals: entries comma-separated, atoms ';'-separated")

    sched = argparse.ArgumentParser(add_help=False)
    sched.add_argument("--mu-family", dest="mu_family", choices=("poly", "pow2"))
    sched.add_argument("--mu-c", dest="mu_c", type=float)
    sched.add_argument("--mu-b", dest="mu_b", type=float)
    sched.add_argument("--n-family", dest="n_family", choices=("poly", "polylog"))
    sched.add_argument("--n-c", dest="n_c", type=float)
    sched.add_argument("--n-b", dest="n_b", type=float)
    sched.add_argument("--k-max", dest="k_max", type=int)

    parser = argparse.ArgumentParser(
        prog="conebessel",
        description="Matrix-cone Bessel functions, radial walks, and their limit theorems.",
    )
    sub = parser.add_subparsers(dest="command")
    sub.add_parser("bessel", parents=[common], help="evaluate the matrix Bessel function on a grid")
    dunkl = sub.add_parser("dunkl", parents=[common], help="chamber kernel values and flat-limit gaps")
    dunkl.add_argument("--xi", help="comma list, strictly positive decreasing")
    dunkl.add_argument("--eta", help="comma list, strictly positive decreasing")
    walk = sub.add_parser("walk", parents=[common], help="simulate cone walks to CSV")
    walk.add_argument("--steps", type=int, help="steps per path")
    lln = sub.add_parser("lln", parents=[common, sched], help="weak-law tail probabilities")
    lln.add_argument("--epsilon", type=float, help="deviation threshold")
    sub.add_parser("slln", parents=[common, sched], help="strong-law single-path deviations")
    ldp = sub.add_parser("ldp", parents=[common, sched], help="free energy and rate function")
    ldp.add_argument("--t-values", dest="t_values", help="comma list of tilt parameters")
    check = sub.add_parser("check", help="run the acceptance suite")
    check.add_argument("--threads", help="BLAS thread count (or CONEBESSEL_THREADS)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return 2
    try:
        _apply_threads(getattr(args, "threads", None))
        if args.command == "check":
            return _cmd_check(args)
        cfg = load_config_file(args.config) if args.config else RunConfig()
        cfg = _merge_flags(cfg, args)
        res = _Resolved(cfg, args.command)
        os.makedirs(res.cfg.out, exist_ok=True)
        _HANDLERS[args.command](res)
        return 0
    except ConfigError as exc:
        where = ""
        if exc.path is not None:
            where = f"{exc.path}:{exc.line}: " if exc.line else f"{exc.path}: "
        print(f"config error: {where}{exc}", file=sys.stderr)
        return 2
    except (DomainError, DimensionError, IllConditionedError, UnsupportedRankError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(
            f"convergence failure: {exc} (certified bound achieved: "
            f"{exc.achieved_bound:.6e})",
            file=sys.stderr,
        )
        return 3
    except SamplingError as exc:
        print(f"sampling failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
