"""Command-line entry point: ``kerrgrav {qfi,bound,sweep,mc,feasibility}``.

Exit codes: 0 success, 2 configuration or validation error, 3 numerical
non-convergence.
"""

import argparse
import csv
import io
import json
import sys

from .bounds import cr_bound_rs, cr_bound_rs_general_q, qfi_general_q, qfi_kerr
from .errors import ConvergenceError, KerrGravError
from .fock import KerrVariant, StepPolicy, numeric_qfi
from .interferometer import (
    SqueezedProbe,
    monte_carlo_estimate,
    noise_penalty_db,
    optimal_plan,
    quadrature_bound_rs,
    sql_bound_rs,
    squeezed_lossy_bound,
    validity_metric,
)
from .runner import (
    FeasibilityInput,
    chi_from_material,
    chi_from_phase,
    format_csv,
    format_value,
    load_config,
    peak_power,
    report_improvement,
    run_sweep,
    y_tilde,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3


def _records_csv(records):
    buf = io.StringIO()
    keys = list(records[0])
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow({k: format_value(v) for k, v in rec.items()})
    return buf.getvalue()


def cmd_qfi(cfg, args):
    probe = cfg.probe
    if probe.variant is KerrVariant.SHIFTED_QUADRATIC:
        analytic = qfi_kerr(probe)
    else:
        analytic = qfi_general_q(probe)
    numeric = numeric_qfi(probe, cfg.tau, StepPolicy(rtol=args.rtol))
    rel = abs(numeric - analytic.value) / analytic.value if analytic.value else abs(numeric)
    return [
        {
            "N": probe.N_a,
            "omega": probe.omega,
            "chi": probe.chi,
            "variant": probe.variant.value,
            "qfi_analytic": analytic.value,
            "qfi_numeric": numeric,
            "relative_difference": rel,
        }
    ]


def cmd_bound(cfg, args):
    probe, g, plan = cfg.probe, cfg.geometry, cfg.plan
    M = plan.M
    metric = validity_metric(probe, g)
    valid = metric <= cfg.sweep.validity_threshold
    rows = []
    if probe.variant is KerrVariant.MONOMIAL:
        rows.append(("fisher_q", cr_bound_rs_general_q(probe, g, M).relative_error))
    else:
        rows.append(("fisher", cr_bound_rs(probe, g, M).relative_error))
        # past the linearisation limit the quadrature bound is suppressed, as in sweeps
        rows.append(("quadrature", quadrature_bound_rs(probe, g, plan).relative_error if valid else None))
    rows.append(("sql", sql_bound_rs(probe, g, M).relative_error))
    sq = SqueezedProbe.split(probe.N_a, cfg.squeeze_eps)
    rows.append(("squeezed_lossy", squeezed_lossy_bound(sq, g, probe.omega, M).relative_error))
    return [
        {
            "method": method,
            "relative_error": value,
            "validity_metric": metric,
            "valid_flag": valid,
            "n_prime": g.n_prime,
        }
        for method, value in rows
    ]


def cmd_mc(cfg, args):
    plan = optimal_plan(cfg.probe, cfg.geometry, M=cfg.plan.M, eps_a=cfg.plan.eps_a, eps_b=cfg.plan.eps_b)
    res = monte_carlo_estimate(cfg.probe, cfg.geometry, plan, trials=args.trials, seed=args.seed)
    return [
        {
            "trials": res.trials,
            "seed": res.seed,
            "std": res.std,
            "predicted": res.predicted,
            "std_ratio": res.std_ratio,
            "bias": res.bias,
            "bias_stderr": res.bias_stderr,
        }
    ]


def cmd_feasibility(cfg, args):
    f = cfg.feasibility
    material = FeasibilityInput(
        n_tilde=f["n_tilde_m2_per_W"],
        n0=f["n0"],
        A=f["area_m2"],
        dt=f["pulse_duration_s"],
        omega=f["omega_rad_per_s"],
        N=f["photon_number"],
    )
    power = peak_power(f["photon_number"], f["omega_rad_per_s"], f["pulse_duration_s"], f["repetition_rate_hz"])
    phases = f["phase_per_photon_rad"]
    if not isinstance(phases, list):
        phases = [phases]
    chis = [chi_from_phase(p, f["fibre_length_m"]) for p in phases]
    probe = cfg.probe
    improvement = report_improvement(probe.N_a, probe.chi, cfg.geometry, cfg.plan.M, probe.omega)
    rec = {
        "chi_material": chi_from_material(material),
        "peak_power_W": power.peak,
        "average_power_W": power.average,
        "chi_from_phase_min": min(chis),
        "chi_from_phase_max": max(chis),
        "y_tilde": y_tilde(probe, cfg.geometry.n_prime) if probe.omega > 0 else float("nan"),
        "improvement_ratio": improvement.ratio,
        "improvement_decades": improvement.orders_of_magnitude,
        "noise_penalty_db": noise_penalty_db(probe, cfg.geometry, cfg.beta_offset)
        if cfg.beta_offset
        else 0.0,
    }
    return [rec]


COMMANDS = {
    "qfi": cmd_qfi,
    "bound": cmd_bound,
    "mc": cmd_mc,
    "feasibility": cmd_feasibility,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(prog="kerrgrav", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    qfi = sub.add_parser("qfi", parents=[common], help="analytic vs Fock-space QFI")
    qfi.add_argument("--rtol", type=float, default=1e-6)
    sub.add_parser("bound", parents=[common], help="single-point bounds, all methods")
    sweep = sub.add_parser("sweep", parents=[common], help="photon-number sweep table")
    sweep.add_argument("--workers", type=int, default=None)
    mc = sub.add_parser("mc", parents=[common], help="Monte-Carlo check of the quadrature bound")
    mc.add_argument("--trials", type=int, default=10_000)
    mc.add_argument("--seed", type=int, default=0)
    sub.add_parser("feasibility", parents=[common], help="material and power calculators")
    return parser


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "sweep":
            rows = run_sweep(cfg.sweep, workers=args.workers)
            if args.format == "csv":
                text = format_csv(rows)
            else:
                text = json.dumps(rows, indent=2) + "\n"
        else:
            records = COMMANDS[args.command](cfg, args)
            text = _records_csv(records) if args.format == "csv" else json.dumps(records, indent=2) + "\n"
        _emit(text, args.out)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (KerrGravError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
