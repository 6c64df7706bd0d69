"""Command-line interface: rule export, Gram diagnostics, approximation, evaluation, decay tables.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .coefficients import CoefficientSet, decay_profile
from .cubature import disk_cubature, solid_cubature, surface_cubature
from .errors import ConvergenceError, FormatError, NumericalError, QuadricError
from .functions import BUILTINS
from .geometry import GEOMETRY_NAMES, make_geometry
from .solid import SolidBasis
from .surface import SurfaceBasis
from .transform import projection_analysis, solid_transform, surface_transform

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(QuadricError):
    """Invalid command-line configuration."""


def fmt(v: float) -> str:
    return f"{float(v):.17g}"


@dataclass
class CliConfig:
    command: str
    geometry: str | None = None
    geometry_params: dict = field(default_factory=dict)
    basis: str = "surface"
    alpha: float | None = None
    beta: float | None = None
    mu: float | None = None
    degree: int | None = None
    cubature_n: int | None = None
    function: str | None = None
    grid: str | None = None
    emit_grid: str | None = None
    method: str = "auto"
    coeffs: str | None = None
    points: str | None = None
    out: str | None = None
    decay_out: str | None = None

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "CliConfig":
        gp = {}
        for key in ("a", "b", "radius", "rho"):
            v = getattr(ns, key, None)
            if v is not None:
                gp[key] = v
        return cls(
            command=ns.command,
            geometry=getattr(ns, "geometry", None),
            geometry_params=gp,
            basis=getattr(ns, "basis", "surface") or "surface",
            alpha=getattr(ns, "alpha", None),
            beta=getattr(ns, "beta", None),
            mu=getattr(ns, "mu", None),
            degree=getattr(ns, "degree", None),
            cubature_n=getattr(ns, "cubature_n", None),
            function=getattr(ns, "function", None),
            grid=getattr(ns, "grid", None),
            emit_grid=getattr(ns, "emit_grid", None),
            method=getattr(ns, "method", "auto"),
            coeffs=getattr(ns, "coeffs", None),
            points=getattr(ns, "points", None),
            out=getattr(ns, "out", None),
            decay_out=getattr(ns, "decay_out", None),
        )

    # -- derived objects ------------------------------------------------------

    def weight_params(self) -> dict:
        out = {"alpha": 0.0 if self.alpha is None else self.alpha, "beta": 0.0 if self.beta is None else self.beta}
        if self.basis == "solid" or self.geometry == "disk":
            out["mu"] = 0.5 if self.mu is None else self.mu
        return out

    def make_geometry(self):
        if self.geometry is None:
            raise ConfigError("--geometry is required")
        return make_geometry(self.geometry, self.geometry_params)

    def make_basis(self):
        geom = self.make_geometry()
        wp = self.weight_params()
        if self.basis == "surface":
            return SurfaceBasis(geom, alpha=wp["alpha"], beta=wp["beta"])
        return SolidBasis(geom, alpha=wp["alpha"], beta=wp["beta"], mu=wp["mu"])

    def header(self, title: str) -> list[str]:
        lines = [f"# quadric-ops {title}"]
        if self.geometry == "disk":
            lines.append("# geometry: disk")
        elif self.geometry is not None:
            geom = self.make_geometry()
            params = ", ".join(f"{k}={fmt(v)}" for k, v in sorted(geom.parameters.items()))
            lines.append(f"# geometry: {geom.name}" + (f" ({params})" if params else ""))
            lines.append(f"# basis: {self.basis}")
        wp = self.weight_params()
        lines.append("# parameters: " + ", ".join(f"{k}={fmt(v)}" for k, v in wp.items()))
        return lines


# ---------------------------------------------------------------------------
# output helpers


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read_rows(path: str, ncols: tuple[int, ...]) -> np.ndarray:
    """Read numeric CSV rows, skipping ``#`` comments and a non-numeric header line."""
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = [p.strip() for p in s.split(",")]
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            if not rows:
                continue  # column header
            raise FormatError(f"{path}:{lineno}: non-numeric entry")
        if len(vals) not in ncols:
            raise FormatError(f"{path}:{lineno}: expected {' or '.join(map(str, ncols))} columns, got {len(vals)}")
        rows.append(vals)
    if not rows:
        return np.empty((0, ncols[0]))
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise FormatError(f"{path}: inconsistent column counts")
    return np.array(rows)


# ---------------------------------------------------------------------------
# commands


def cmd_nodes(cfg: CliConfig) -> int:
    n = cfg.cubature_n if cfg.cubature_n is not None else cfg.degree
    if n is None:
        raise ConfigError("nodes needs --cubature-n")
    if cfg.geometry == "disk":
        mu = 0.5 if cfg.mu is None else cfg.mu
        rule = disk_cubature(mu, n)
        lines = ["# quadric-ops nodes", "# geometry: disk", f"# parameters: mu={fmt(mu)}, n={n}", "x,y,weight"]
    else:
        basis = cfg.make_basis()
        rule = surface_cubature(basis, n) if cfg.basis == "surface" else solid_cubature(basis, n)
        lines = cfg.header("nodes") + [f"# exactness degree: {rule.exactness_degree}", "x,y,t,weight"]
    for p, w in zip(rule.points, rule.weights):
        lines.append(",".join(fmt(v) for v in p) + "," + fmt(w))
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_gram(cfg: CliConfig) -> int:
    if cfg.degree is None:
        raise ConfigError("gram needs --degree")
    if cfg.geometry == "disk":
        raise ConfigError("gram supports surface and solid bases; choose a quadric geometry")
    N = cfg.degree
    n = max(cfg.cubature_n or 0, N + 1)
    basis = cfg.make_basis()
    rule = surface_cubature(basis, n) if cfg.basis == "surface" else solid_cubature(basis, n)
    x, y, t = rule.points.T
    V = basis.eval_all(N, x, y, t, check=False)
    G = (V * rule.weights) @ V.T
    off = G - np.diag(np.diag(G))
    lines = cfg.header("gram") + [
        f"# degree N={N}, cubature n={n} (exactness {rule.exactness_degree}), dimension {G.shape[0]}",
        "quantity,value",
        f"max_offdiagonal,{fmt(np.max(np.abs(off)) if G.size > 1 else 0.0)}",
        f"max_diagonal_deviation,{fmt(np.max(np.abs(np.diag(G) - 1.0)))}",
    ]
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def _use_transform(cfg: CliConfig) -> bool:
    if cfg.method == "projection":
        return False
    geom_ok = cfg.geometry in ("cone", "disk") and cfg.geometry_params.get("b", 1.0) == 1.0
    if cfg.basis == "surface":
        ok = geom_ok and (cfg.alpha or 0.0) == 0.0 and (cfg.beta or 0.0) == 0.0
    else:
        # the solid transform weight is w1 = 1, mu = 0; in (alpha, beta, mu) terms (1, 0, 0)
        unspecified = cfg.alpha is None and cfg.beta is None and cfg.mu is None
        ok = geom_ok and (unspecified or (cfg.alpha, cfg.beta or 0.0, cfg.mu) == (1.0, 0.0, 0.0))
    if cfg.method == "transform" and not ok:
        raise ConfigError("the grid transform only supports the cone with the transform weight")
    return ok


def _grid_samples(path: str, x, y, t) -> np.ndarray:
    data = _read_rows(path, (4,))
    expected = x.size
    if data.shape[0] != expected:
        raise FormatError(
            f"grid file {path} has {data.shape[0]} samples; expected {expected} = "
            + " x ".join(map(str, x.shape))
            + " points (use --emit-grid to obtain the required grid)"
        )
    pts = np.column_stack([x.ravel(), y.ravel(), t.ravel()])
    if np.max(np.abs(data[:, :3] - pts)) > 1e-12:
        raise FormatError(f"grid file {path}: point coordinates do not match the required grid order")
    return data[:, 3].reshape(x.shape)


def cmd_approx(cfg: CliConfig) -> int:
    if cfg.degree is None:
        raise ConfigError("approx needs --degree")
    if cfg.function is not None and cfg.grid is not None:
        raise ConfigError("give only one of --function and --grid")
    if cfg.function is None and cfg.grid is None and cfg.emit_grid is None:
        raise ConfigError("approx needs --function, --grid or --emit-grid")
    N = cfg.degree
    if cfg.geometry == "disk":
        # F(x, y) on the disk is approximated on the cone surface t = |(x, y)|
        if cfg.basis != "surface":
            raise ConfigError("disk approximation uses the cone surface basis")
        cfg.geometry = "cone"
    fast = _use_transform(cfg)
    if fast:
        tr = surface_transform(N) if cfg.basis == "surface" else solid_transform(N)
        x, y, t = tr.grid()
    else:
        basis = cfg.make_basis()
        n = N + 1 if cfg.cubature_n is None else cfg.cubature_n
        rule = surface_cubature(basis, n) if cfg.basis == "surface" else solid_cubature(basis, n)
        x, y, t = rule.points.T
    if cfg.emit_grid is not None:
        lines = cfg.header("grid") + ["x,y,t"]
        lines += [f"{fmt(a)},{fmt(b)},{fmt(c)}" for a, b, c in zip(x.ravel(), y.ravel(), t.ravel())]
        Path(cfg.emit_grid).write_text("\n".join(lines) + "\n")
        if cfg.function is None and cfg.grid is None:
            return EXIT_OK
    if cfg.grid is not None:
        samples = _grid_samples(cfg.grid, x, y, t)
    else:
        try:
            func = BUILTINS[cfg.function]
        except KeyError:
            raise ConfigError(f"unknown function {cfg.function!r}; choose from {', '.join(BUILTINS)}") from None
        samples = func(x, y, t)
    if not np.all(np.isfinite(samples)):
        raise NumericalError("samples contain non-finite values")
    if fast:
        basis = tr.basis()
        values = tr.analyze(samples)
        if cfg.basis == "surface":
            coeffs = CoefficientSet(basis.geometry, "surface", basis.weight.w, N, values,
                                    parameters={"alpha": 0.0, "beta": 0.0})
        else:
            coeffs = CoefficientSet(basis.geometry, "solid", basis.weight.w1, N, values, mu=0.0,
                                    parameters={"alpha": 1.0, "beta": 0.0, "mu": 0.0})
    else:
        coeffs = projection_analysis(basis, lambda *_: samples, N, n)
    if not np.all(np.isfinite(coeffs.values)):
        raise NumericalError("analysis produced non-finite coefficients")
    if cfg.out is not None:
        coeffs.save(cfg.out)
    _emit(_decay_text(coeffs), cfg.decay_out)
    return EXIT_OK


def _decay_text(coeffs: CoefficientSet) -> str:
    lines = [
        "# quadric-ops decay",
        f"# geometry: {coeffs.geometry.name}",
        f"# basis: {coeffs.basis}, N={coeffs.N}",
        "n,norm",
    ]
    lines += [f"{n},{fmt(v)}" for n, v in decay_profile(coeffs)]
    return "\n".join(lines) + "\n"


def cmd_eval(cfg: CliConfig) -> int:
    if cfg.coeffs is None or cfg.points is None:
        raise ConfigError("eval needs --coeffs and --points")
    coeffs = CoefficientSet.load(cfg.coeffs)
    pts = _read_rows(cfg.points, (3, 2))
    if pts.shape[1] == 2:
        if coeffs.geometry.name != "cone" or coeffs.basis != "surface":
            raise FormatError("two-column (disk) points require a cone surface coefficient file")
        pts = np.column_stack([pts, np.hypot(pts[:, 0], pts[:, 1])])
    lines = [
        "# quadric-ops eval",
        f"# geometry: {coeffs.geometry.name}",
        f"# basis: {coeffs.basis}, N={coeffs.N}",
        "x,y,t,value",
    ]
    if pts.shape[0]:
        vals = coeffs.synthesize(pts[:, 0], pts[:, 1], pts[:, 2])
        lines += [",".join(fmt(v) for v in p) + "," + fmt(v) for p, v in zip(pts, vals)]
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_decay(cfg: CliConfig) -> int:
    if cfg.coeffs is None:
        raise ConfigError("decay needs --coeffs")
    _emit(_decay_text(CoefficientSet.load(cfg.coeffs)), cfg.out)
    return EXIT_OK


COMMANDS = {"nodes": cmd_nodes, "gram": cmd_gram, "approx": cmd_approx, "eval": cmd_eval, "decay": cmd_decay}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadric-ops", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, geometry=True):
        if geometry:
            p.add_argument("--geometry", required=True, choices=GEOMETRY_NAMES + ("disk",))
            p.add_argument("--rho", type=float, help="hyperboloid parameter")
            p.add_argument("--a", type=float, help="lower end of the parameter interval")
            p.add_argument("--b", type=float, help="upper end of the parameter interval")
            p.add_argument("--radius", type=float, help="cylinder radius")
            p.add_argument("--basis", choices=("surface", "solid"), default="surface")
            p.add_argument("--alpha", type=float)
            p.add_argument("--beta", type=float)
            p.add_argument("--mu", type=float)
            p.add_argument("--degree", "-N", type=int)
            p.add_argument("--cubature-n", type=int)
        p.add_argument("--out", help="output path (default: stdout)")

    add_common(sub.add_parser("nodes", help="export a cubature rule as CSV"))
    add_common(sub.add_parser("gram", help="Gram-matrix orthonormality report"))
    p = sub.add_parser("approx", help="expansion coefficients of a built-in function or sampled grid")
    add_common(p)
    p.add_argument("--function", choices=tuple(BUILTINS))
    p.add_argument("--grid", help="CSV x,y,t,value sampled at the required grid")
    p.add_argument("--emit-grid", help="write the required sample grid as CSV x,y,t")
    p.add_argument("--decay-out", help="decay table path (default: stdout)")
    p.add_argument("--method", choices=("auto", "transform", "projection"), default="auto")
    p = sub.add_parser("eval", help="evaluate a coefficient file at points")
    add_common(p, geometry=False)
    p.add_argument("--coeffs", required=True)
    p.add_argument("--points", required=True, help="CSV with columns x,y,t (or x,y on the disk)")
    p = sub.add_parser("decay", help="per-degree coefficient norms of a coefficient file")
    add_common(p, geometry=False)
    p.add_argument("--coeffs", required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = CliConfig.from_args(ns)
    try:
        return COMMANDS[cfg.command](cfg)
    except (ConvergenceError, NumericalError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"quadric-ops: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (QuadricError, OSError) as exc:
        print(f"quadric-ops: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
