"""Command line entry point.

    zenon <command> --config <scenario.json> [--out <dir>] [--seed <int>] [--threads <n>]

Commands: derive, simulate, protocol, dilate, roundtrip, figures, sweep.
Exit codes: 0 success, 2 validation failure (bad config or input), 3
numerical failure at run time.  Matrix-file paths inside a scenario are
resolved against the working directory.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from .config import COMMANDS, Scenario, load_scenario
from .dilation import choose_tau, decay_generator, dilate, hermitian_eig, roundtrip_check
from .dynamics import (
    DensityMatrix,
    conditional_trajectory,
    default_coherence_pair,
    write_timeseries_csv,
)
from .effective import AncillaSpec, derive_effective
from .entanglement import (
    EffectiveBlockParams,
    bell_fidelity,
    block_decompose,
    concurrence,
    fig4_coherence_rows,
    fig4_population_rows,
    fig5_rows,
    write_figure_csv,
)
from .errors import ValidationError, ZenonError
from .linalg import matrix_from_json
from .protocol import (
    ProtocolConfig,
    conditional_survival_curve,
    simulate_trajectories,
    stroboscopic_error,
    write_ensemble_csv,
)
from .spin_models import build_anisotropic, build_symmetric


def load_matrix_file(path) -> np.ndarray:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read matrix file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"matrix file {path} is not valid JSON: {exc}") from exc
    return matrix_from_json(obj)


def parse_initial_state(value, dim: int) -> DensityMatrix:
    """Basis label (bit string), 'mixed', or an explicit amplitude list
    (numbers or [re, im] pairs)."""
    if value is None:
        raise ValidationError("this command needs an initial_state in the scenario")
    if isinstance(value, str):
        if value == "mixed":
            return DensityMatrix.maximally_mixed(dim)
        n_bits = dim.bit_length() - 1
        if 2**n_bits != dim or len(value) != n_bits or any(c not in "01" for c in value):
            raise ValidationError(
                f"basis label {value!r} is not a {n_bits}-bit string for dimension {dim}"
            )
        return DensityMatrix.basis_state(dim, int(value, 2))
    if isinstance(value, list):
        if len(value) != dim:
            raise ValidationError(f"amplitude list has {len(value)} entries, need {dim}")
        amps = []
        for entry in value:
            if isinstance(entry, list):
                if len(entry) != 2:
                    raise ValidationError(f"amplitude {entry!r} is not a [re, im] pair")
                amps.append(complex(entry[0], entry[1]))
            elif isinstance(entry, (int, float)):
                amps.append(complex(entry))
            else:
                raise ValidationError(f"bad amplitude {entry!r}")
        return DensityMatrix.from_pure(np.array(amps))
    raise ValidationError(f"cannot interpret initial_state {value!r}")


def _require_tau(s: Scenario) -> float:
    if s.tau is None:
        raise ValidationError(f"command {s.command!r} needs tau in the scenario")
    return s.tau


def _ancilla_spec(s: Scenario) -> AncillaSpec:
    return AncillaSpec(ancilla_site=s.ancilla_site)


def _composite_hamiltonian(s: Scenario) -> np.ndarray:
    if s.model == "symmetric":
        return build_symmetric(s.params)
    if s.model == "anisotropic":
        return build_anisotropic(s.params)
    return load_matrix_file(s.params)


def _out_dir(s: Scenario) -> str:
    os.makedirs(s.output_dir, exist_ok=True)
    return s.output_dir


def _write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def run_derive(s: Scenario, threads: int) -> None:
    eff = derive_effective(_composite_hamiltonian(s), _ancilla_spec(s), _require_tau(s))
    _write_json(os.path.join(_out_dir(s), "effective.json"), eff.to_json())


def run_simulate(s: Scenario, threads: int) -> None:
    if s.model == "matrix-file":
        h_eff = load_matrix_file(s.params)
    else:
        eff = derive_effective(_composite_hamiltonian(s), _ancilla_spec(s), _require_tau(s))
        h_eff = eff.matrix()
    rho0 = parse_initial_state(s.initial_state, h_eff.shape[0])
    times, survival, states = conditional_trajectory(h_eff, rho0, s.t_max, s.n_samples)
    if s.coherence_pair is not None:
        pair = tuple(s.coherence_pair)
    else:
        pops = np.real(np.diag(rho0.rho))
        pair = default_coherence_pair(h_eff.shape[0], int(np.argmax(pops)))
    write_timeseries_csv(os.path.join(_out_dir(s), "timeseries.csv"), times, survival, states, pair)


def _protocol_config(s: Scenario) -> ProtocolConfig:
    tau = _require_tau(s)
    n_steps = s.n_steps if s.n_steps is not None else max(1, round(s.t_max / tau))
    return ProtocolConfig(
        h=_composite_hamiltonian(s), spec=_ancilla_spec(s), tau=tau, n_steps=n_steps
    )


def run_protocol(s: Scenario, threads: int) -> None:
    cfg = _protocol_config(s)
    rho0 = parse_initial_state(s.initial_state, cfg.system_dim)
    exact = conditional_survival_curve(cfg, rho0)
    ensemble = simulate_trajectories(cfg, rho0, s.n_traj, s.seed, n_workers=threads)
    write_ensemble_csv(os.path.join(_out_dir(s), "ensemble.csv"), ensemble, exact)


def _max_decay_bohr(h_eff: np.ndarray) -> float:
    w = hermitian_eig(decay_generator(h_eff)).eigenvalues
    return float(w[-1] - w[0]) if w.size > 1 else 0.0


def _dilation_tau(s: Scenario, h_eff: np.ndarray) -> float:
    if s.tau is not None:
        return s.tau
    return choose_tau(_max_decay_bohr(h_eff))


def _roundtrip_tau(s: Scenario, h_eff: np.ndarray) -> float:
    """Per-matrix step length: derived from the decay spectrum when there is
    one, otherwise the scenario's tau."""
    f = _max_decay_bohr(h_eff)
    if f > 0:
        return choose_tau(f)
    if s.tau is not None:
        return s.tau
    return choose_tau(f)  # raises with the explanatory message


def run_dilate(s: Scenario, threads: int) -> None:
    if s.model != "matrix-file":
        raise ValidationError("dilate expects model matrix-file (the target generator)")
    h_eff = load_matrix_file(s.params)
    res = dilate(h_eff, _dilation_tau(s, h_eff))
    _write_json(os.path.join(_out_dir(s), "dilation.json"), res.to_json())


def run_roundtrip(s: Scenario, threads: int) -> None:
    if s.model != "matrix-file":
        raise ValidationError("roundtrip expects model matrix-file (a file or directory)")
    path = s.params
    if os.path.isdir(path):
        files = sorted(
            os.path.join(path, name) for name in os.listdir(path) if name.endswith(".json")
        )
    else:
        files = [path]
    if not files:
        raise ValidationError(f"no matrix files found under {path}")
    results = []
    for fname in files:
        h_eff = load_matrix_file(fname)
        tau = _roundtrip_tau(s, h_eff)
        report = roundtrip_check(h_eff, tau)
        entry = {"file": fname, "tau": tau}
        entry.update(dataclasses.asdict(report))
        results.append(entry)
    _write_json(os.path.join(_out_dir(s), "roundtrip.json"), {"results": results})


def run_figures(s: Scenario, threads: int) -> None:
    out = _out_dir(s)
    tau = _require_tau(s)
    if s.model == "symmetric":
        block = EffectiveBlockParams.from_symmetric(s.params, tau)
        gt_max = block.gamma * s.t_max
        write_figure_csv(
            os.path.join(out, "fig4a.csv"),
            ["gt_axis", "pop10", "pop01"],
            fig4_population_rows(block, gt_max, s.n_samples),
        )
        write_figure_csv(
            os.path.join(out, "fig4b.csv"),
            ["gt_axis", "re_coh", "im_coh"],
            fig4_coherence_rows(block, gt_max, s.n_samples),
        )
    elif s.model == "anisotropic":
        eff = derive_effective(build_anisotropic(s.params), _ancilla_spec(s), tau)
        plus, _ = block_decompose(eff.matrix())
        mxt_max = plus.mu_x * s.t_max
        write_figure_csv(
            os.path.join(out, "fig5.csv"),
            ["mxt_axis", "pop11", "re_coh", "im_coh"],
            fig5_rows(plus, mxt_max, s.n_samples),
        )
    else:
        raise ValidationError("figures expects the symmetric or anisotropic model")


_SWEEP_PARAM_KEYS = {"tau", "t_max"}


def run_sweep(s: Scenario, threads: int) -> None:
    if s.grid is None:
        raise ValidationError("sweep needs a grid of override mappings")
    if s.model == "matrix-file":
        raise ValidationError("sweep expects a spin model")
    param_fields = {f.name for f in dataclasses.fields(type(s.params))}
    keys = list(s.grid[0])
    for key in keys:
        if key not in param_fields and key not in _SWEEP_PARAM_KEYS:
            raise ValidationError(f"unknown sweep key {key!r}")
    header = keys + ["p", "bell_fidelity", "concurrence"]
    if s.with_protocol:
        header.append("stroboscopic_error")
    rows = []
    for entry in s.grid:
        params = dataclasses.replace(
            s.params, **{k: v for k, v in entry.items() if k in param_fields}
        )
        tau = float(entry.get("tau", s.tau if s.tau is not None else 0.0))
        if not tau > 0:
            raise ValidationError("sweep needs tau (in the scenario or the grid entry)")
        t_max = float(entry.get("t_max", s.t_max))
        point = dataclasses.replace(s, params=params, tau=tau, t_max=t_max)
        h = _composite_hamiltonian(point)
        spec = _ancilla_spec(point)
        eff = derive_effective(h, spec, tau)
        rho0 = parse_initial_state(s.initial_state, eff.dim)
        _, survival, states = conditional_trajectory(eff.matrix(), rho0, t_max, s.n_samples)
        final = states[-1]
        row = [float(entry[k]) for k in keys]
        row += [survival[-1], bell_fidelity(final, s.bell), concurrence(final)]
        if s.with_protocol:
            n_steps = max(1, round(t_max / tau))
            cfg = ProtocolConfig(h=h, spec=spec, tau=tau, n_steps=n_steps)
            row.append(stroboscopic_error(cfg, rho0))
        rows.append(row)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    with open(os.path.join(_out_dir(s), "sweep.csv"), "w") as fh:
        fh.write("\n".join(lines) + "\n")


_RUNNERS = {
    "derive": run_derive,
    "simulate": run_simulate,
    "protocol": run_protocol,
    "dilate": run_dilate,
    "roundtrip": run_roundtrip,
    "figures": run_figures,
    "sweep": run_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zenon",
        description="Conditional non-unitary dynamics from repeated ancilla measurements.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="scenario JSON file")
    parser.add_argument("--out", help="override the scenario's output_dir")
    parser.add_argument("--seed", type=int, help="override the scenario's seed")
    parser.add_argument("--threads", type=int, default=1, help="worker processes for Monte Carlo")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = load_scenario(args.config)
        if scenario.command != args.command:
            raise ValidationError(
                f"config is for command {scenario.command!r}, not {args.command!r}"
            )
        if args.out is not None:
            scenario.output_dir = args.out
        if args.seed is not None:
            if args.seed < 0:
                raise ValidationError(f"seed must be nonnegative, got {args.seed}")
            scenario.seed = args.seed
        if args.threads < 1:
            raise ValidationError(f"threads must be positive, got {args.threads}")
        _RUNNERS[args.command](scenario, args.threads)
    except ValidationError as exc:
        print(f"zenon: validation error: {exc}", file=sys.stderr)
        return 2
    except ZenonError as exc:
        print(f"zenon: numerical error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - the CLI must not crash on bad input
        print(f"zenon: unexpected error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
