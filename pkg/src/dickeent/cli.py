"""Command-line front end.

Runs deterministic sweeps of the closed-form quantities and emits
machine-readable tables (CSV or JSON lines), and runs the oracle
verification suite.  Sweep points are evaluated in a thread pool and always
emitted in input order; identical inputs and seed produce byte-identical
output.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import oracle, thermal
from .core import LN2, DickeState, GeneralizedDickeState, reduced_l, reduced_two_site
from .correlations import classical_correlation_closed, mutual_information_pure, odlro
from .measures import (
    crossover_scan,
    entropy_block,
    entropy_one_vs_rest,
    first_crossover,
    is_two_site_entangled,
    ree_l,
    ree_pure,
    ree_pure_generalized,
    ree_two_site,
)

ENV_PREFIX = "DICKEENT_"
MAX_CLOSED_FORM_N = 10**6

#: columns carrying bits; scaled by ln 2 under --nats
BIT_COLUMNS = {
    "E_pure",
    "E_12",
    "E_1rest",
    "C_closed",
    "I",
    "n_E12",
    "E_pure_minus_half_log2n",
    "E12_cap",
    "S_block_half",
    "sum_lower",
    "higher",
    "E_bound",
    "E_avr",
    "I_mix",
}


class UsageError(Exception):
    pass


class InputError(Exception):
    """I/O or input-file failure; maps to exit code 3."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _env(name: str) -> str | None:
    return os.environ.get(ENV_PREFIX + name)


def _resolve_config(args) -> dict:
    """Apply precedence: flags > DICKEENT_* environment > defaults."""
    fmt = args.format or _env("FORMAT") or "csv"
    if fmt not in ("csv", "jsonl"):
        raise UsageError(f"unknown format {fmt!r}")
    output = args.output or _env("OUTPUT") or None
    nats = args.nats or (_env("NATS") or "").lower() in ("1", "true", "yes")
    seed_env = _env("SEED")
    seed = args.seed if args.seed is not None else (int(seed_env) if seed_env else 0)
    workers_env = _env("WORKERS")
    workers = args.workers if args.workers is not None else (
        int(workers_env) if workers_env else (os.cpu_count() or 1)
    )
    if workers < 1:
        raise UsageError("workers must be >= 1")
    return {"format": fmt, "output": output, "nats": nats, "seed": seed, "workers": workers}


def _parse_grid(spec: str, integer: bool = True) -> list:
    """Parse a sweep specification.

    Forms: ``lo:hi`` (linear, step 1), ``lo:hi:COUNT`` (COUNT linear
    points), ``lo:hi:log`` (geometric, about eight points per decade), and
    ``lo:hi:log2`` (powers of two).
    """
    parts = spec.split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"bad sweep spec {spec!r}; expected lo:hi[:count|log|log2]")
    try:
        lo = float(parts[0])
        hi = float(parts[1])
    except ValueError as exc:
        raise UsageError(f"bad sweep bounds in {spec!r}") from exc
    if hi < lo:
        raise UsageError(f"empty sweep range {spec!r}")
    mode = parts[2] if len(parts) == 3 else None
    if mode == "log":
        count = max(2, int(round(8 * math.log10(hi / lo))) + 1)
        values = np.geomspace(lo, hi, count)
    elif mode == "log2":
        exponents = range(int(math.log2(lo)), int(math.log2(hi)) + 1)
        values = [2.0**e for e in exponents if lo <= 2.0**e <= hi]
    elif mode is None:
        values = np.arange(lo, hi + 0.5)
    else:
        try:
            count = int(mode)
        except ValueError as exc:
            raise UsageError(f"bad sweep count {mode!r}") from exc
        if count < 1:
            raise UsageError("sweep count must be >= 1")
        values = np.linspace(lo, hi, count)
    if integer:
        out = sorted({int(round(v)) for v in values})
        return out
    return [float(v) for v in values]


def _format_csv_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _emit(rows: list[dict], columns: list[str], config: dict, stream) -> None:
    if config["nats"]:
        rows = [
            {
                key: (value * LN2 if key in BIT_COLUMNS and isinstance(value, float) else value)
                for key, value in row.items()
            }
            for row in rows
        ]
    if config["format"] == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_csv_value(row[c]) for c in columns])
    else:
        for row in rows:
            stream.write(json.dumps({c: row[c] for c in columns}) + "\n")


def _pool_map(fn, items, workers: int) -> list:
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- pure


def _add_pure_parser(subparsers):
    p = subparsers.add_parser("pure", help="closed-form quantities for pure symmetric states")
    p.add_argument("--n", type=int, help="site count (2 <= n <= 1e6)")
    p.add_argument("--k", type=int, help="excitation count")
    p.add_argument("--sweep-n", help="sweep spec lo:hi[:count|log|log2]")
    p.add_argument("--sweep-k", help="sweep spec for k at fixed n")
    p.add_argument("--half-filling", action="store_true", help="use k = n // 2")


def _pure_pairs(args) -> list[tuple[int, int]]:
    if args.sweep_n:
        ns = _parse_grid(args.sweep_n)
        pairs = []
        for n in ns:
            if args.half_filling:
                pairs.append((n, n // 2))
            elif args.k is not None:
                pairs.append((n, args.k))
            else:
                raise UsageError("--sweep-n requires --half-filling or --k")
        return pairs
    if args.n is None:
        raise UsageError("pure requires --n or --sweep-n")
    n = args.n
    if args.sweep_k:
        return [(n, k) for k in _parse_grid(args.sweep_k)]
    if args.half_filling:
        return [(n, n // 2)]
    if args.k is None:
        raise UsageError("pure requires --k, --sweep-k, or --half-filling")
    return [(n, args.k)]


def _pure_row(pair: tuple[int, int]) -> dict:
    n, k = pair
    return {
        "n": n,
        "k": k,
        "E_pure": ree_pure(n, k),
        "E_12": ree_two_site(n, k),
        "E_1rest": entropy_one_vs_rest(n, k),
        "ODLRO": odlro(n, k),
        "C_closed": classical_correlation_closed(k / n),
        "I": mutual_information_pure(n, k),
    }


def _cmd_pure(args, config, stream) -> int:
    pairs = _pure_pairs(args)
    for n, k in pairs:
        if not 2 <= n <= MAX_CLOSED_FORM_N:
            raise UsageError(f"n={n} outside supported range [2, {MAX_CLOSED_FORM_N}]")
        if not 0 <= k <= n:
            raise UsageError(f"k={k} outside [0, {n}]")
    columns = ["n", "k", "E_pure", "E_12", "E_1rest", "ODLRO", "C_closed", "I"]
    rows = _pool_map(_pure_row, pairs, config["workers"])
    _emit(rows, columns, config, stream)
    return 0


# ---------------------------------------------------------------- scaling


def _add_scaling_parser(subparsers):
    p = subparsers.add_parser("scaling", help="log-law and decay curves at half filling")
    p.add_argument("--n-grid", default="16:65536:log2", help="sweep spec (default 16:65536:log2)")
    p.add_argument("--crossover", action="store_true", help="scan accumulated-vs-next block entanglement")
    p.add_argument("--n", type=int, help="site count for --crossover")
    p.add_argument("--k", type=int, help="excitation count for --crossover")
    p.add_argument("--m-max", type=int, help="largest block size in the crossover scan")


def _scaling_row(n: int) -> dict:
    k = n // 2
    e_pure = ree_pure(n, k)
    e12 = ree_two_site(n, k)
    return {
        "n": n,
        "k": k,
        "E_pure": e_pure,
        "E_12": e12,
        "n_E12": n * e12,
        "E_pure_minus_half_log2n": e_pure - 0.5 * math.log2(n),
        "E_1rest": entropy_one_vs_rest(n, k),
        "E12_cap": 1.0 / (n - 1),
        "S_block_half": entropy_block(n, k, n // 2),
    }


def _cmd_scaling(args, config, stream) -> int:
    if args.crossover:
        if args.n is None or args.k is None:
            raise UsageError("--crossover requires --n and --k")
        n, k = args.n, args.k
        if not 2 <= n <= 10_000:
            raise UsageError("crossover scan supports 2 <= n <= 10000")
        if not 0 <= k <= n:
            raise UsageError(f"k={k} outside [0, {n}]")
        m_max = args.m_max if args.m_max is not None else min(n - 1, 64)
        reports = crossover_scan(n, k, m_max)
        columns = ["n", "k", "m", "sum_lower", "higher", "ordering"]
        rows = [
            {
                "n": n,
                "k": k,
                "m": r.m,
                "sum_lower": r.sum_lower,
                "higher": r.higher,
                "ordering": r.ordering,
            }
            for r in reports
        ]
        _emit(rows, columns, config, stream)
        flip = first_crossover(reports)
        if flip is not None:
            print(f"first non-LESS ordering at m={flip}", file=sys.stderr)
        else:
            print("no crossover within scanned range", file=sys.stderr)
        return 0
    ns = [n for n in _parse_grid(args.n_grid) if n >= 2]
    for n in ns:
        if n > MAX_CLOSED_FORM_N:
            raise UsageError(f"n={n} outside supported range")
    columns = [
        "n",
        "k",
        "E_pure",
        "E_12",
        "n_E12",
        "E_pure_minus_half_log2n",
        "E_1rest",
        "E12_cap",
        "S_block_half",
    ]
    rows = _pool_map(_scaling_row, ns, config["workers"])
    _emit(rows, columns, config, stream)
    return 0


# ---------------------------------------------------------------- thermal


def _add_thermal_parser(subparsers):
    p = subparsers.add_parser("thermal", help="thermal mixtures of symmetric states")
    p.add_argument("--uniform", action="store_true", help="equal mixture of all levels")
    p.add_argument("--n", type=int, help="site count")
    p.add_argument("--sweep-n", help="sweep spec for n (uniform mode)")
    p.add_argument("--energies", help="two-column CSV of k,E_k")
    p.add_argument("--kT", type=float, dest="kt", help="temperature in energy units")
    p.add_argument("--sweep-kT", dest="sweep_kt", help="temperature sweep spec lo:hi:count")
    p.add_argument(
        "--mode", choices=["fermi", "boltzmann"], default="fermi", help="occupancy law"
    )


def _read_energy_file(path: str) -> np.ndarray:
    try:
        with open(path, newline="") as handle:
            lines = list(csv.reader(handle))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    by_level: dict[int, float] = {}
    for number, fields in enumerate(lines, start=1):
        if not fields or (len(fields) == 1 and not fields[0].strip()):
            continue
        if len(fields) != 2:
            raise InputError(f"{path}: line {number}: expected two fields, got {len(fields)}")
        try:
            level = int(fields[0])
            energy = float(fields[1])
        except ValueError as exc:
            raise InputError(f"{path}: line {number}: {exc}") from exc
        if level in by_level:
            raise InputError(f"{path}: line {number}: duplicate level {level}")
        by_level[level] = energy
    if not by_level:
        raise InputError(f"{path}: no energy rows")
    n = max(by_level)
    missing = [k for k in range(n + 1) if k not in by_level]
    if missing:
        raise InputError(f"{path}: missing levels {missing}")
    return np.array([by_level[k] for k in range(n + 1)])


def _thermal_row(ensemble: thermal.ThermalEnsemble, temperature: float | None) -> dict:
    return {
        "n": ensemble.n,
        "T": temperature,
        "inseparable": thermal.thermal_inseparable(ensemble),
        "E_bound": thermal.ree_upper_bound(ensemble),
        "E_avr": thermal.average_entanglement(ensemble),
        "ODLRO_mix": thermal.odlro_mixture(ensemble),
        "I_mix": thermal.mutual_information_mixture(ensemble),
    }


def _cmd_thermal(args, config, stream) -> int:
    columns = ["n", "T", "inseparable", "E_bound", "E_avr", "ODLRO_mix", "I_mix"]
    if args.uniform:
        if args.sweep_n:
            ns = [n for n in _parse_grid(args.sweep_n) if n >= 2]
        elif args.n is not None:
            ns = [args.n]
        else:
            raise UsageError("thermal --uniform requires --n or --sweep-n")
        for n in ns:
            if not 2 <= n <= 100_000:
                raise UsageError(f"n={n} outside supported thermal range [2, 100000]")
        rows = _pool_map(
            lambda n: _thermal_row(thermal.uniform_ensemble(n), None), ns, config["workers"]
        )
        _emit(rows, columns, config, stream)
        return 0
    if not args.energies:
        raise UsageError("thermal requires --uniform or --energies")
    energies = _read_energy_file(args.energies)
    n = energies.size - 1
    if args.n is not None and args.n != n:
        raise UsageError(f"--n {args.n} does not match energy file (n={n})")
    if n < 2:
        raise UsageError("thermal requires n >= 2")
    if args.sweep_kt:
        temperatures = _parse_grid(args.sweep_kt, integer=False)
    elif args.kt is not None:
        temperatures = [args.kt]
    else:
        raise UsageError("thermal with --energies requires --kT or --sweep-kT")
    for kt in temperatures:
        if not kt > 0:
            raise UsageError("temperatures must be positive")
    rows = _pool_map(
        lambda kt: _thermal_row(thermal.make_ensemble(energies, kt, args.mode), kt),
        temperatures,
        config["workers"],
    )
    _emit(rows, columns, config, stream)
    return 0


# ---------------------------------------------------------------- generalized


def _add_generalized_parser(subparsers):
    p = subparsers.add_parser("generalized", help="symmetric states of d-level systems")
    p.add_argument("--counts", help="comma-separated level counts, e.g. 1,1,1")
    p.add_argument("--d", type=int, help="local dimension for an exhaustive sweep")
    p.add_argument("--n", type=int, help="site count for an exhaustive sweep")


def _compositions(n: int, d: int):
    """All length-d nonnegative integer vectors summing to n, lexicographic."""
    if d == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, d - 1):
            yield (first,) + rest


def _cmd_generalized(args, config, stream) -> int:
    columns = ["d", "n", "counts", "E_pure"]
    if args.counts:
        try:
            counts = tuple(int(c) for c in args.counts.split(","))
        except ValueError as exc:
            raise UsageError(f"bad --counts {args.counts!r}") from exc
        vectors = [counts]
    else:
        if args.d is None or args.n is None:
            raise UsageError("generalized requires --counts or both --d and --n")
        if not 2 <= args.d <= 16:
            raise UsageError("supported local dimensions are 2..16")
        if not 1 <= args.n <= 64:
            raise UsageError("exhaustive sweeps support n <= 64")
        vectors = list(_compositions(args.n, args.d))

    def row(counts: tuple) -> dict:
        state = GeneralizedDickeState(counts)
        return {
            "d": state.d,
            "n": state.n,
            "counts": ",".join(str(c) for c in counts),
            "E_pure": ree_pure_generalized(state),
        }

    try:
        rows = _pool_map(row, vectors, config["workers"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(rows, columns, config, stream)
    return 0


# ---------------------------------------------------------------- verify


def _check_bell_anchor(max_n: int, rng) -> float:
    return max(abs(ree_pure(2, 1) - 1.0), abs(ree_two_site(2, 1) - 1.0))


def _check_ree_l_vs_dense(max_n: int, rng) -> float:
    worst = 0.0
    for n in range(2, max_n + 1):
        for k in range(n + 1):
            sigma_full = oracle.density(oracle.dicke_vector(n, k))
            reference_full = oracle.closest_state_dense(n, k)
            for l in range(1, n + 1):
                keep = range(l)
                sigma_l = oracle.partial_trace(sigma_full, keep)
                rho_l = oracle.partial_trace(reference_full, keep)
                dense = oracle.relative_entropy(sigma_l, rho_l)
                worst = max(worst, abs(ree_l(n, k, l) - dense))
    return worst


def _check_reduced_weights(max_n: int, rng) -> float:
    worst = 0.0
    for n in range(2, max_n + 1):
        for k in range(n + 1):
            sigma_full = oracle.density(oracle.dicke_vector(n, k))
            for l in range(1, n + 1):
                sigma_l = oracle.partial_trace(sigma_full, range(l))
                weights, residual = oracle.dicke_level_weights(sigma_l)
                expected = reduced_l(DickeState(n, k), l).weights
                worst = max(worst, float(np.abs(weights - expected).max()), residual)
    return worst


def _check_closest_diagonal(max_n: int, rng) -> float:
    from .core import closest_separable_diagonal

    worst = 0.0
    for n in range(2, max_n + 1):
        for k in range(n + 1):
            weights, residual = oracle.dicke_level_weights(oracle.closest_state_dense(n, k))
            expected = closest_separable_diagonal(n, k, n).weights
            worst = max(worst, float(np.abs(weights - expected).max()), residual)
    return worst


def _check_ppt_agreement(max_n: int, rng) -> float:
    mismatches = 0
    for n in range(2, 51):
        for k in range(n + 1):
            pair = reduced_two_site(DickeState(n, k))
            eig = oracle.min_eigenvalue(oracle.partial_transpose(oracle.two_site_matrix(pair)))
            if is_two_site_entangled(n, k) != (eig < -1e-12):
                mismatches += 1
    return float(mismatches)


def _check_thermal_vs_ppt(max_n: int, rng) -> float:
    mismatches = 0
    for n in range(2, 31):
        for _ in range(20):
            ensemble = thermal.ThermalEnsemble(n, rng.dirichlet(np.ones(n + 1)))
            pair = thermal.thermal_two_site(ensemble)
            eig = oracle.min_eigenvalue(oracle.partial_transpose(oracle.two_site_matrix(pair)))
            if thermal.thermal_inseparable(ensemble) != (eig < -1e-12):
                mismatches += 1
    return float(mismatches)


def _check_variational(max_n: int, rng) -> float:
    worst_violation = 0.0
    worst_fd = 0.0
    pairs = [(n, k) for n in range(2, 11) for k in range(1, n)]
    for index in range(2000):
        n, k = pairs[int(rng.integers(len(pairs)))]
        omega = oracle.random_product_state(rng)
        derivative = oracle.variational_check(n, k, omega)
        worst_violation = max(worst_violation, -derivative)
        if index < 200:
            fd = oracle.variational_check_fd(n, k, omega)
            worst_fd = max(worst_fd, abs(fd - derivative))
    if worst_fd > 1e-4:
        return worst_fd
    return worst_violation


def _check_phase_invariance(max_n: int, rng) -> float:
    worst = 0.0
    for n in range(2, min(max_n, 6) + 1):
        for k in range(n + 1):
            base = oracle.closest_state_dense(n, k)
            for theta in rng.uniform(0.0, 2.0 * math.pi, size=4):
                sigma = oracle.density(oracle.dicke_vector(n, k, theta))
                rho = oracle.apply_phase_gradient(base, theta)
                value = oracle.relative_entropy(sigma, rho)
                worst = max(worst, abs(value - ree_pure(n, k)))
    return worst


def _check_generalized(max_n: int, rng) -> float:
    worst = 0.0
    for n in range(1, 5):
        for counts in _compositions(n, 3):
            state = GeneralizedDickeState(counts)
            sigma = oracle.dicke_vector_generalized(counts)
            rho = oracle.dense_generalized(counts)
            dense = oracle.relative_entropy(oracle.density(sigma), rho)
            worst = max(worst, abs(dense - ree_pure_generalized(state)))
    return worst


def _check_two_site_minimizer(max_n: int, rng) -> float:
    worst = 0.0
    for n, k in ((2, 1), (3, 1)):
        pair = reduced_two_site(DickeState(n, k))
        numeric = oracle.ree_numeric_two_site(pair, seed=int(rng.integers(2**32)), restarts=8)
        worst = max(worst, abs(numeric - ree_two_site(n, k)))
    return worst


VERIFY_CHECKS = [
    ("bell_anchor", 1e-12, _check_bell_anchor),
    ("ree_l_vs_dense_oracle", 1e-9, _check_ree_l_vs_dense),
    ("reduced_weights_vs_partial_trace", 1e-10, _check_reduced_weights),
    ("closest_diagonal_vs_dense", 1e-10, _check_closest_diagonal),
    ("ppt_sign_agreement", 0.0, _check_ppt_agreement),
    ("thermal_vs_ppt_oracle", 0.0, _check_thermal_vs_ppt),
    ("variational_minimality", 1e-12, _check_variational),
    ("phase_invariance", 1e-9, _check_phase_invariance),
    ("generalized_qutrit", 1e-6, _check_generalized),
    ("two_site_numeric_minimization", 1e-4, _check_two_site_minimizer),
]


def _add_verify_parser(subparsers):
    p = subparsers.add_parser("verify", help="run the oracle-vs-closed-form checks")
    p.add_argument("--max-n", type=int, default=8, help="largest dense size (<= 8)")


def _cmd_verify(args, config, stream) -> int:
    max_n = args.max_n
    if not 2 <= max_n <= 8:
        raise UsageError("verify supports --max-n between 2 and 8")
    rng = np.random.default_rng(config["seed"])
    failures = 0
    for name, tolerance, check in VERIFY_CHECKS:
        started = time.perf_counter()
        max_err = check(max_n, rng)
        elapsed = time.perf_counter() - started
        ok = max_err <= tolerance
        failures += 0 if ok else 1
        stream.write(
            f"{'PASS' if ok else 'FAIL'} {name:<34} tol={tolerance:.0e} max_err={max_err:.3e}\n"
        )
        print(f"{name}: {elapsed:.3f}s", file=sys.stderr)
    stream.write(f"{len(VERIFY_CHECKS) - failures}/{len(VERIFY_CHECKS)} checks passed\n")
    return 0 if failures == 0 else 2


# ---------------------------------------------------------------- entry


def _build_parser() -> _Parser:
    parser = _Parser(prog="dickeent", description=__doc__)
    parser.add_argument("--format", choices=["csv", "jsonl"], default=None)
    parser.add_argument("--output", default=None, help="write table to a file instead of stdout")
    parser.add_argument("--nats", action="store_true", help="emit entanglement columns in nats")
    parser.add_argument("--seed", type=int, default=None, help="seed for randomized checks")
    parser.add_argument("--workers", type=int, default=None, help="sweep thread-pool size")
    parser.add_argument("--dump-config", action="store_true", help="print resolved configuration")
    subparsers = parser.add_subparsers(dest="command")
    _add_pure_parser(subparsers)
    _add_scaling_parser(subparsers)
    _add_thermal_parser(subparsers)
    _add_generalized_parser(subparsers)
    _add_verify_parser(subparsers)
    return parser


_DISPATCH = {
    "pure": _cmd_pure,
    "scaling": _cmd_scaling,
    "thermal": _cmd_thermal,
    "generalized": _cmd_generalized,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = _resolve_config(args)
        if args.dump_config:
            print(json.dumps(config, sort_keys=True))
            return 0
        if not args.command:
            raise UsageError("missing subcommand (pure, scaling, thermal, generalized, verify)")
        handler = _DISPATCH[args.command]
        if config["output"]:
            try:
                buffer = io.StringIO()
                code = handler(args, config, buffer)
                with open(config["output"], "w", newline="") as handle:
                    handle.write(buffer.getvalue())
            except OSError as exc:
                raise InputError(f"cannot write {config['output']}: {exc}") from exc
            return code
        return handler(args, config, sys.stdout)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
