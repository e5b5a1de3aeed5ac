"""Command-line entry point: ``radmom {verify,fig1,fig2,qcoeff,spectrum-dump}``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration
error, 3 output could not be written.  Natural units hbar = a0 = b = 1.
"""
from __future__ import annotations

import argparse
import io
import sys
from dataclasses import dataclass

import numpy as np

from . import checks, hydrogen, operators, transforms
from .angular import BasisTruncation, default_quadrature
from .errors import AccuracyError, InvalidArgumentError
from .svg import line_plot

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
OPERATOR_NAMES = ("Lx", "Ly", "Lz", "erx", "ery", "erz", "rPix", "rPiy", "rPiz")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    l_max: int = 20
    n_theta: int | None = None
    n_phi: int | None = None
    gamma_max: float = 40.0
    gamma_points: int = 1601
    tolerance_scale: float = 1.0
    out: str | None = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.l_max < 0:
            raise ConfigError(f"--lmax must be non-negative, got {self.l_max}")
        if self.n_theta is not None and self.n_theta < self.l_max + 1:
            raise ConfigError(f"--n-theta must be at least l_max + 1 = {self.l_max + 1}")
        if self.n_phi is not None and self.n_phi < 2 * self.l_max + 2:
            raise ConfigError(f"--n-phi must be at least 2 l_max + 2 = {2 * self.l_max + 2}")
        if self.gamma_points < 3 or self.gamma_points % 2 == 0:
            raise ConfigError(f"--gamma-points must be odd and >= 3, got {self.gamma_points}")
        if not self.gamma_max > 0:
            raise ConfigError(f"--gamma-max must be positive, got {self.gamma_max}")
        if not self.tolerance_scale > 0:
            raise ConfigError(f"--tolerance-scale must be positive, got {self.tolerance_scale}")
        if self.fmt not in ("csv", "svg"):
            raise ConfigError(f"--format must be csv or svg, got {self.fmt}")

    @property
    def grid(self) -> transforms.GammaGrid:
        return transforms.GammaGrid(self.gamma_max, self.gamma_points)

    @property
    def suite(self) -> checks.SuiteConfig:
        return checks.SuiteConfig(self.l_max, self.n_theta, self.n_phi, self.gamma_max,
                                  self.gamma_points, self.tolerance_scale)


def _num(v: float) -> str:
    """Shortest round-tripping representation."""
    return repr(float(v))


def write_csv(header: dict, columns: list[str], rows) -> str:
    buf = io.StringIO()
    for key, val in header.items():
        buf.write(f"# {key}={val}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def read_csv(text: str) -> tuple[dict, list[str], np.ndarray]:
    """Inverse of write_csv for numeric tables."""
    header, lines = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, val = line[2:].partition("=")
            header[key] = val
        elif line:
            lines.append(line)
    columns = lines[0].split(",")
    data = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    return header, columns, data


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    with open(cfg.out, "w", newline="\n") as fh:
        fh.write(text)


def _common_header(cfg: RunConfig, command: str) -> dict:
    return {
        "command": command,
        "units": "hbar=a0=b=1",
        "gamma_max": _num(cfg.gamma_max),
        "gamma_points": cfg.gamma_points,
        "q_raw_to_normalized": _num(transforms.RAW_TO_NORMALIZED),
    }


VERIFY_MIN_LMAX = 2  # the commutator checks compare interior blocks two shells below the cut


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.l_max < VERIFY_MIN_LMAX:
        raise ConfigError(f"verify needs --lmax >= {VERIFY_MIN_LMAX} for a non-empty interior block")
    results = checks.run_all(cfg.suite)
    width = max(len(r.check_id) for r in results)
    print(f"{'check_id':<{width}}  {'paper_eq':<26}  {'residual':>12}  {'tolerance':>12}  pass")
    for r in results:
        tol = f"> {r.tolerance:.3g}" if r.lower_bound else f"{r.tolerance:.3g}"
        print(f"{r.check_id:<{width}}  {r.paper_eq:<26}  {r.residual:>12.3e}  {tol:>12}  "
              f"{'PASS' if r.passed else 'FAIL'}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def fig1_curves(cfg: RunConfig):
    g = hydrogen.ground_state()
    gamma = cfg.grid.values
    return hydrogen.marginal_pz(g, gamma), transforms.pi_z_density(g, gamma)


def cmd_fig1(cfg: RunConfig) -> int:
    pz, piz = fig1_curves(cfg)
    if cfg.fmt == "svg":
        text = line_plot(pz.grid, [("p_z", pz.values), ("Pi_z", piz.values)],
                         xlabel="gamma_z (momentum in units of hbar/a0)", ylabel="density",
                         title="Ground state: p_z and Pi_z densities")
    else:
        header = _common_header(cfg, "fig1")
        header["pz_integral"] = _num(pz.normalization)
        header["piz_integral"] = _num(piz.normalization)
        header["inverse_r_scale"] = _num(piz.metadata["inverse_r_scale"])
        rows = ((_num(a), _num(b), _num(c)) for a, b, c in zip(pz.grid, pz.values, piz.values))
        text = write_csv(header, ["gamma", "pz_density", "piz_density"], rows)
    _emit(text, cfg)
    return EXIT_OK


def cmd_fig2(cfg: RunConfig) -> int:
    curve = transforms.combined_z_distribution(cfg.grid)
    if cfg.fmt == "svg":
        text = line_plot(curve.grid, [("e_r P_r (z)", curve.values)],
                         xlabel="gamma_z", ylabel="signed density",
                         title="z-component of e_r P_r, ground state")
    else:
        header = _common_header(cfg, "fig2")
        header["value_sum"] = _num(curve.values.sum())
        rows = ((_num(a), _num(b)) for a, b in zip(curve.grid, curve.values))
        text = write_csv(header, ["gamma", "signed_density"], rows)
    _emit(text, cfg)
    return EXIT_OK


def cmd_qcoeff(cfg: RunConfig, l: int) -> int:
    gamma = cfg.grid.values
    q = transforms.q_coeff(l, gamma)
    header = _common_header(cfg, "qcoeff")
    header["l"] = l
    columns = ["gamma", "re_q", "im_q", "abs_sq"]
    cols = [gamma, q.real, q.imag, np.abs(q) ** 2]
    if l == 0:
        columns.append("analytic")
        cols.append(transforms.q00_analytic(gamma))
    rows = (tuple(_num(c[i]) for c in cols) for i in range(gamma.size))
    _emit(write_csv(header, columns, rows), cfg)
    return EXIT_OK


def cmd_spectrum_dump(cfg: RunConfig, operator_name: str) -> int:
    if operator_name not in OPERATOR_NAMES:
        raise ConfigError(f"unknown operator {operator_name!r}; choose from {', '.join(OPERATOR_NAMES)}")
    basis = BasisTruncation(cfg.l_max)
    q = default_quadrature(cfg.l_max, cfg.n_theta, cfg.n_phi)
    kind, axis = operator_name[:-1], operator_name[-1]
    build = {
        "L": lambda: operators.build_angular_momentum(axis, basis),
        "er": lambda: operators.build_direction_cosine(axis, basis, q),
        "rPi": lambda: operators.build_geometric_momentum(axis, basis, q),
    }[kind]
    op = build()
    header = {"command": "spectrum-dump", "operator": op.name, "l_max": cfg.l_max, "hbar": 1,
              "threshold": 1e-14, "contaminated_shells": op.contaminated_shells}
    rows = ((name, str(a), str(b), str(c), str(d), f"{re:.7g}", f"{im:.7g}")
            for name, a, b, c, d, re, im in operators.dump_rows(op))
    _emit(write_csv(header, ["name", "l'", "m'", "l", "m", "re", "im"], rows), cfg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lmax", type=int, default=20, help="basis truncation (default 20)")
    common.add_argument("--n-theta", type=int, default=None, help="Gauss-Legendre nodes (default lmax+1)")
    common.add_argument("--n-phi", type=int, default=None, help="uniform phi nodes (default 2 lmax+2)")
    common.add_argument("--gamma-max", type=float, default=40.0, help="half range of the gamma grid")
    common.add_argument("--gamma-points", type=int, default=1601, help="odd number of gamma samples")
    common.add_argument("--tolerance-scale", type=float, default=1.0, help="multiply every tolerance")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--format", dest="fmt", default="csv", help="csv or svg")

    parser = argparse.ArgumentParser(prog="radmom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run all verification suites")
    sub.add_parser("fig1", parents=[common], help="p_z and Pi_z densities of the ground state")
    sub.add_parser("fig2", parents=[common], help="signed z-distribution of e_r P_r")
    qc = sub.add_parser("qcoeff", parents=[common], help="expansion coefficients Q_l0(gamma)")
    qc.add_argument("--l", dest="l", type=int, default=0, help="harmonic degree (m = 0)")
    dump = sub.add_parser("spectrum-dump", parents=[common], help="nonzero matrix elements of an operator")
    dump.add_argument("operator", help=f"one of {', '.join(OPERATOR_NAMES)}")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.lmax, args.n_theta, args.n_phi, args.gamma_max, args.gamma_points,
                        args.tolerance_scale, args.out, args.fmt)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "fig1":
            return cmd_fig1(cfg)
        if args.command == "fig2":
            return cmd_fig2(cfg)
        if args.command == "qcoeff":
            if args.l < 0:
                raise ConfigError(f"--l must be non-negative, got {args.l}")
            return cmd_qcoeff(cfg, args.l)
        return cmd_spectrum_dump(cfg, args.operator)
    except (ConfigError, InvalidArgumentError) as exc:
        print(f"radmom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AccuracyError as exc:
        print(f"radmom: accuracy error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"radmom: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
