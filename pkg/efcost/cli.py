"""
Command line entry point: ``python -m efcost <command> [--flags]``.

Commands: ``bell-mix``, ``example``, ``ef``, ``additivity``, ``eb-check``. Every
command prints one document (JSON by default, ``--format csv`` for tables) to
stdout or ``--out``; logs go to stderr.

Exit codes: 0 success or ``breaking``, 1 ``not_breaking``, 2 bad input,
3 numerical invariant violated, 4 ``indeterminate``.
"""
import csv
import io
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import torch
from fire import Fire
from fire.core import FireExit

from efcost.channels import QuantumChannel, eb_certify, holevo_form, trace_out_map
from efcost.measures import constant_entanglement_check, ec_bell_mix, ed_hashing, ef_two_qubit
from efcost.states import BellMixParam, bell_mix, load_state, subspace_basis
from efcost.utils.exceptions import ContractViolation, DomainError, EntanglementError
from efcost.utils.helper import save_json, to_jsonable
from efcost.variational import OptimizerConfig, additivity_gap, ef_upper_bound

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DEFAULT_GRID = 101
FORMATS = ("json", "csv")

EXIT_OK = 0
EXIT_NOT_BREAKING = 1
EXIT_USAGE = 2
EXIT_CONTRACT = 3
EXIT_INDETERMINATE = 4

VERDICT_EXIT = {"breaking": EXIT_OK, "not_breaking": EXIT_NOT_BREAKING, "indeterminate": EXIT_INDETERMINATE}


@dataclass
class RunReport:
    command: str
    inputs: Dict[str, Any]
    outputs: Dict[str, Any]
    seed: int
    wall_time: Optional[float] = None
    columns: List[str] = field(default_factory=list)
    rows: List[List[float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        doc = {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "seed": self.seed,
        }
        if self.rows:
            doc["outputs"] = dict(self.outputs, columns=self.columns, rows=self.rows)
        if self.wall_time is not None:
            doc["wall_time"] = self.wall_time
        return to_jsonable(doc)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if self.rows:
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([_fmt(v) for v in row])
        else:
            writer.writerow(["key", "value"])
            for key, value in _flatten(self.outputs):
                writer.writerow([key, _fmt(value)])
        return buffer.getvalue()


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (float, np.floating)):
        return "%.9g" % value
    return str(value)


def _flatten(data: Dict[str, Any], prefix: str = ""):
    for key in sorted(data):
        value = data[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _flatten(value, prefix=f"{name}.")
        elif isinstance(value, (list, tuple)):
            if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
                yield name, " ".join(_fmt(v) for v in value)
        else:
            yield name, value


def _setup_logging(log_level: str, verbose: bool):
    level = logging.DEBUG if verbose else getattr(logging, str(log_level).upper(), None)
    if not isinstance(level, int):
        raise DomainError(f"Unknown log level `{log_level}`")
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
        force=True,
    )


class EntanglementCommands:
    """Reproduce entanglement of formation / cost results from the command line."""

    def __init__(self):
        self.exit_code = EXIT_OK

    def _emit(self, report: RunReport, fmt: str, out: Optional[str], started: float, timing: bool) -> None:
        if fmt not in FORMATS:
            raise DomainError(f"Accepted formats are {FORMATS}, but the input is `{fmt}`")
        if timing:
            report.wall_time = time.perf_counter() - started
        if fmt == "json":
            save_json(report.to_dict(), out)
            return
        text = report.to_csv()
        if out is None:
            sys.stdout.write(text)
        else:
            with open(out, "w") as fp:
                fp.write(text)

    def bell_mix(
            self,
            p: Optional[float] = None,
            grid: Optional[int] = None,
            format: str = "json",
            seed: int = 0,
            out: Optional[str] = None,
            timing: bool = False,
            log_level: str = "WARNING",
            verbose: bool = False,
    ):
        """Table of p, E_c, E_d (hashing), E_f (concurrence) and E_c - E_d for the two-Bell-state mixture."""
        _setup_logging(log_level, verbose)
        started = time.perf_counter()
        if p is not None and grid is not None:
            raise DomainError("Pass either --p or --grid, not both.")
        if p is not None:
            points = [BellMixParam(p).p]
        else:
            grid = DEFAULT_GRID if grid is None else int(grid)
            if grid < 2:
                raise DomainError(f"--grid should be at least 2, but the input is `{grid}`")
            points = np.linspace(0.0, 0.5, grid).tolist()
        rows = []
        for value in points:
            param = BellMixParam(value)
            ec, ed = ec_bell_mix(param), ed_hashing(param)
            rows.append([param.p, ec, ed, ef_two_qubit(bell_mix(param)), ec - ed])
        report = RunReport(
            command="bell-mix",
            inputs={"p": p, "grid": None if p is not None else grid},
            outputs={},
            seed=seed,
            columns=["p", "ec", "ed", "ef_wootters", "gap"],
            rows=rows,
        )
        self._emit(report, format, out, started, timing)

    def example(
            self,
            example_id: int,
            samples: int = 64,
            verbatim: bool = False,
            format: str = "json",
            seed: int = 0,
            out: Optional[str] = None,
            timing: bool = False,
            log_level: str = "WARNING",
            verbose: bool = False,
    ):
        """Basis check, constancy, entanglement-breaking verdict and the resulting E_f / E_c of an example subspace."""
        _setup_logging(log_level, verbose)
        started = time.perf_counter()
        basis = subspace_basis(example_id, verbatim=verbatim)
        constancy = constant_entanglement_check(basis, samples=samples, seed=seed)
        cert = eb_certify(trace_out_map(basis))
        ef = constancy.value if constancy.is_constant else None
        ec = ef if cert.is_breaking else None
        outputs = {
            "basis": {
                "label": basis.label,
                "corrected": int(example_id) == 4 and not verbatim,
                "dims": list(basis.ambient),
                "size": basis.size,
                "orthonormality_residual": basis.orthonormality_residual(),
            },
            "constant": constancy.is_constant,
            "spectrum": constancy.spectrum if constancy.is_constant else None,
            "ef": ef,
            "eb": {"verdict": cert.verdict, "method": cert.method, "min_pt_eig": cert.min_pt_eig},
            "ec": ec,
            "ec_equals_ef": cert.is_breaking,
        }
        report = RunReport("example", {"id": int(example_id), "samples": samples, "verbatim": verbatim}, outputs, seed)
        self._emit(report, format, out, started, timing)

    def ef(
            self,
            input_file: str,
            restarts: int = 8,
            ensemble_size: Optional[int] = None,
            max_iters: int = 500,
            value_tol: float = 1e-12,
            step_tol: float = 1e-9,
            format: str = "json",
            seed: int = 0,
            out: Optional[str] = None,
            timing: bool = False,
            log_level: str = "WARNING",
            verbose: bool = False,
    ):
        """Variational upper bound on the entanglement of formation of a state file."""
        _setup_logging(log_level, verbose)
        started = time.perf_counter()
        rho = load_state(input_file)
        cfg = OptimizerConfig(
            ensemble_size=ensemble_size, restarts=restarts, max_iters=max_iters,
            value_tol=value_tol, step_tol=step_tol, seed=seed, verbose=verbose,
        )
        result = ef_upper_bound(rho, cfg)
        outputs = result.to_dict()
        outputs["rank"] = rho.rank()
        if tuple(rho.split) == (2, 2):
            outputs["ef_wootters"] = ef_two_qubit(rho)
        inputs = dict(cfg.to_dict(), input_file=str(input_file))
        inputs.pop("verbose")
        report = RunReport("ef", inputs, outputs, seed)
        self._emit(report, format, out, started, timing)

    def additivity(
            self,
            p: float,
            q: float,
            restarts: int = 8,
            ensemble_size: Optional[int] = None,
            max_iters: int = 500,
            value_tol: float = 1e-12,
            step_tol: float = 1e-9,
            format: str = "json",
            seed: int = 0,
            out: Optional[str] = None,
            timing: bool = False,
            log_level: str = "WARNING",
            verbose: bool = False,
    ):
        """Additivity gap of E_f for two two-Bell-state mixtures."""
        _setup_logging(log_level, verbose)
        started = time.perf_counter()
        cfg = OptimizerConfig(
            ensemble_size=ensemble_size, restarts=restarts, max_iters=max_iters,
            value_tol=value_tol, step_tol=step_tol, seed=seed, verbose=verbose,
        )
        result = additivity_gap(bell_mix(p), bell_mix(q), cfg)
        outputs = {
            "gap": result.gap,
            "reference": result.reference,
            "factor_methods": [f.method for f in result.factors],
            "joint": result.joint.to_dict(),
        }
        inputs = dict(cfg.to_dict(), p=float(p), q=float(q))
        inputs.pop("verbose")
        report = RunReport("additivity", inputs, outputs, seed)
        self._emit(report, format, out, started, timing)

    def eb_check(
            self,
            example: Optional[int] = None,
            choi: Optional[str] = None,
            holevo: bool = False,
            format: str = "json",
            seed: int = 0,
            out: Optional[str] = None,
            timing: bool = False,
            log_level: str = "WARNING",
            verbose: bool = False,
    ):
        """Entanglement-breaking certificate of an example trace-out channel or of a Choi file."""
        _setup_logging(log_level, verbose)
        started = time.perf_counter()
        if (example is None) == (choi is None):
            raise DomainError("Pass exactly one of --example or --choi.")
        form = None
        if example is not None:
            channel = trace_out_map(subspace_basis(example))
            if holevo and int(example) != 2:
                form = holevo_form(int(example))
        else:
            state = load_state(choi)
            channel = QuantumChannel.from_choi(state.mat, state.split.dA, state.split.dB)
        cert = eb_certify(channel, holevo=form)
        inputs = {"example": example, "choi": None if choi is None else str(choi), "holevo": holevo}
        report = RunReport("eb-check", inputs, cert.to_dict(), seed)
        self._emit(report, format, out, started, timing)
        self.exit_code = VERDICT_EXIT[cert.verdict]


def main(argv: Optional[List[str]] = None) -> int:
    torch.set_num_threads(1)
    commands = EntanglementCommands()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        Fire(commands, command=argv, name="efcost")
    except FireExit as err:
        return EXIT_OK if not err.code else EXIT_USAGE
    except ContractViolation as err:
        logger.error(f"[CLI] invariant violated: {err}")
        return EXIT_CONTRACT
    except (DomainError, EntanglementError) as err:
        logger.error(f"[CLI] {err}")
        return EXIT_USAGE
    except Exception as err:
        logger.exception(f"[CLI] unexpected failure: {err}")
        return EXIT_CONTRACT
    return commands.exit_code
