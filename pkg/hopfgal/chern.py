"""Classical body of projector fields and their lattice Chern numbers on S^2."""

from dataclasses import dataclass, field
from math import pi
from pathlib import Path
import csv
import sys
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from bundles import Matrix, ProjectorCert, hermitian_frame
from ncpoly import NcPoly
from presets import Preset
from report import Check, check_true

OVERLAP_FLOOR = 1e-6
RESIDUAL_LIMIT = 1e-6
IDEMPOTENCY_LIMIT = 1e-8
MIN_GRID = 16

Field = Callable[[np.ndarray, np.ndarray], np.ndarray]


class ChernError(RuntimeError):
    """Gauge singularity on the lattice that survives the shifted grid."""


@dataclass
class BodyPoly:
    """Commutative polynomial with complex coefficients, exponents per variable."""

    variables: Tuple[str, ...]
    terms: Dict[Tuple[int, ...], complex]

    def __call__(self, values: Dict[str, np.ndarray]):
        shape = np.broadcast(*[np.asarray(values[v]) for v in self.variables]).shape
        out = np.zeros(shape, dtype=complex)
        for exps, c in self.terms.items():
            term = np.full(shape, c, dtype=complex)
            for v, e in zip(self.variables, exps):
                if e:
                    term = term * np.asarray(values[v]) ** e
            out = out + term
        return out if shape else complex(out)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in sorted(self.terms.items()):
            mono = "*".join(f"{v}**{e}" if e > 1 else v for v, e in zip(self.variables, exps) if e)
            parts.append(f"({c:g})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def body(preset: Preset, p: NcPoly) -> BodyPoly:
    """Kill letters outside the body map and set q = 1.

    A coefficient with a pole at q = 1 raises ScalarError.
    """
    block = preset.block("body")
    variables = tuple(block["variables"])
    mapping = {preset.table.index(k): variables.index(v) for k, v in block["map"].items()}
    terms: Dict[Tuple[int, ...], complex] = {}
    for word, c in preset.pres.normal_form(p).items():
        if any(k not in mapping for k in word):
            continue
        exps = [0] * len(variables)
        for k in word:
            exps[mapping[k]] += 1
        value = c.specialize_q1().eval_numeric()
        key = tuple(exps)
        terms[key] = terms.get(key, 0j) + value
    return BodyPoly(variables, {k: v for k, v in terms.items() if v != 0})


def su2_point(theta, phi, psi=0.0) -> Dict[str, np.ndarray]:
    """a = cos(theta/2) e^{i(phi+psi)}, c = sin(theta/2) e^{i psi}, d = conj(a), b = -conj(c)."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    a = np.cos(theta / 2) * np.exp(1j * (phi + psi))
    c = np.sin(theta / 2) * np.exp(1j * psi) * np.ones_like(phi)
    return {"a": a, "b": -np.conj(c), "c": c, "d": np.conj(a)}


def eval_su2(p: BodyPoly, theta, phi, psi=0.0):
    return p(su2_point(theta, phi, psi))


def unit_field(cert: ProjectorCert) -> Field:
    """u = sqrt(D) body(U), a unit vector field with F = u u^dagger."""
    comps = [body(cert.preset, u) for u in cert.column]
    scales = np.sqrt(np.asarray(cert.weights or [1] * len(comps), dtype=float))

    def field_fn(theta, phi):
        point = su2_point(theta, phi)
        shape = np.broadcast(np.asarray(theta), np.asarray(phi)).shape
        return np.stack([s * np.broadcast_to(c(point), shape) for s, c in zip(scales, comps)], axis=-1)

    return field_fn


def constant_field(size: int = 1) -> Field:
    def field_fn(theta, phi):
        shape = np.broadcast(np.asarray(theta), np.asarray(phi)).shape
        out = np.zeros(shape + (size,), dtype=complex)
        out[..., 0] = 1.0
        return out

    return field_fn


def numeric_matrix(preset: Preset, M: Matrix, theta, phi) -> np.ndarray:
    """Body of a polynomial matrix on a grid; shape grid + (rows, cols)."""
    point = su2_point(theta, phi)
    shape = np.broadcast(np.asarray(theta), np.asarray(phi)).shape
    out = np.zeros(shape + (len(M), len(M[0])), dtype=complex)
    for i, r in enumerate(M):
        for j, e in enumerate(r):
            out[..., i, j] = body(preset, e)(point)
    return out


def idempotency_residual(cert: ProjectorCert, theta, phi) -> float:
    F = numeric_matrix(cert.preset, cert.F, theta, phi)
    return float(np.abs(F @ F - F).max())


@dataclass
class ChernReport:
    mu: int
    grid: Tuple[int, int]
    flux_over_2pi: float
    chern: int
    residual: float
    max_plaquette_flux: float
    normalization_residual: float
    shifted: bool = False
    flux: Optional[np.ndarray] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "grid": list(self.grid),
            "flux_over_2pi": round(self.flux_over_2pi, 12),
            "chern": self.chern,
            "residual": self.residual,
            "max_plaquette_flux": round(self.max_plaquette_flux, 12),
            "normalization_residual": self.normalization_residual,
            "shifted": self.shifted,
        }


def _grid(n_theta: int, n_phi: int, shift: float) -> Tuple[np.ndarray, np.ndarray]:
    theta = (np.arange(n_theta) + 0.5) * pi / n_theta
    phi = 2 * pi * (np.arange(n_phi) + shift) / n_phi
    return np.meshgrid(theta, phi, indexing="ij")


def lattice_chern(field_fn: Field, n_theta: int, n_phi: int, mu: int = 0) -> ChernReport:
    """Plaquette Berry flux of a unit vector field, poles closed by cap loops.

    Plaquettes run theta first; the north cap loop runs with phi and the south
    cap loop against it.
    """
    if n_theta < MIN_GRID or n_phi < MIN_GRID:
        raise ValueError(f"grid must be at least {MIN_GRID}x{MIN_GRID}, got {n_theta}x{n_phi}")
    for shift in (0.0, 0.5):
        T, P = _grid(n_theta, n_phi, shift)
        u = field_fn(T, P)
        ov_t = np.sum(np.conj(u[:-1]) * u[1:], axis=-1)
        ov_p = np.sum(np.conj(u) * np.roll(u, -1, axis=1), axis=-1)
        if min(np.abs(ov_t).min(), np.abs(ov_p).min()) < OVERLAP_FLOOR:
            if shift == 0.0:
                print("[warn] overlap below floor; grid shifted by half a step in phi", file=sys.stderr)
                continue
            raise ChernError(f"gauge singularity persists on the shifted {n_theta}x{n_phi} grid")
        plaq = ov_t * ov_p[1:] * np.conj(np.roll(ov_t, -1, axis=1)) * np.conj(ov_p[:-1])
        flux = np.angle(plaq)
        north = float(np.angle(np.prod(ov_p[0])))
        south = float(np.angle(np.prod(np.conj(ov_p[-1]))))
        total = (float(flux.sum()) + north + south) / (2 * pi)
        chern = int(round(total))
        return ChernReport(
            mu=mu,
            grid=(n_theta, n_phi),
            flux_over_2pi=total,
            chern=chern,
            residual=abs(total - chern),
            max_plaquette_flux=max(float(np.abs(flux).max()), abs(north), abs(south)),
            normalization_residual=float(np.abs(np.sum(np.abs(u) ** 2, axis=-1) - 1).max()),
            shifted=shift != 0.0,
            flux=flux,
        )
    raise ChernError("unreachable grid state")


def chern_number(preset: Preset, mu: int, grid: Tuple[int, int], frame: Optional[ProjectorCert] = None) -> ChernReport:
    if mu == 0:
        return lattice_chern(constant_field(), *grid, mu=0)
    return lattice_chern(unit_field(frame or hermitian_frame(preset, mu)), *grid, mu=mu)


def berry_phase_oracle(theta: float) -> float:
    """Closed-form phase of the spin-1/2 state around the latitude theta, in (-pi, pi]."""
    return float(np.angle(np.exp(1j * pi * (1 + np.cos(theta)))))


def cap_berry_phase(field_fn: Field, theta: float, n_phi: int) -> float:
    phi = 2 * pi * np.arange(n_phi) / n_phi
    u = field_fn(np.full(n_phi, theta), phi)
    ov = np.sum(np.conj(u) * np.roll(u, -1, axis=0), axis=-1)
    return float(np.angle(np.prod(ov)))


def orientation_checks(preset: Preset, grid: Tuple[int, int], theta: float = pi / 3, n_phi: int = 512) -> List[Check]:
    """The n = 1 projector against the spin-1/2 oracle; fixes the sign convention at -1."""
    field_fn = unit_field(hermitian_frame(preset, -1))
    measured = cap_berry_phase(field_fn, theta, n_phi)
    oracle = berry_phase_oracle(theta)
    gap = abs(np.angle(np.exp(1j * (measured - oracle))))
    report = lattice_chern(field_fn, *grid, mu=-1)
    return [
        check_true("chern cap phase matches oracle", preset.name, gap < 1e-2, f"{measured} vs {oracle}", {"theta": theta, "n_phi": n_phi}),
        check_true("chern orientation F_-1 = -1", preset.name, report.chern == -1, str(report.chern), {"grid": list(grid)}),
    ]


def write_flux_csv(path: Path, reports: List[ChernReport]) -> Path:
    """One row per plaquette: mu, grid, j, k, flux."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["mu", "grid", "j", "k", "flux"])
        for rep in reports:
            if rep.flux is None:
                continue
            label = f"{rep.grid[0]}x{rep.grid[1]}"
            for (j, k), value in np.ndenumerate(rep.flux):
                writer.writerow([rep.mu, label, j, k, f"{value:.12e}"])
    return path


def pairing_report(
    preset: Preset,
    ns: Iterable[int],
    grid: Tuple[int, int],
    refine: bool = True,
    csv_path: Optional[Path] = None,
) -> Tuple[List[dict], List[Check]]:
    """Chern numbers of the bodies of F_{-n} and F_n for each listed n >= 0.

    A nonzero value marks the class as nontrivial, so the extension is not cleft.
    """
    name = preset.name
    rows: List[dict] = []
    checks: List[Check] = []
    reports: List[ChernReport] = []
    fine = (grid[0] * 3 // 2, grid[1] * 3 // 2)
    T, P = _grid(*grid, 0.0)
    frames: Dict[int, ProjectorCert] = {}

    def frame(mu: int) -> Optional[ProjectorCert]:
        if mu == 0:
            return None
        if mu not in frames:
            frames[mu] = hermitian_frame(preset, mu)
        return frames[mu]

    for n in ns:
        minus = chern_number(preset, -n, grid, frame(-n))
        plus = chern_number(preset, n, grid, frame(n))
        reports += [minus] if n == 0 else [minus, plus]
        params = {"n": n, "grid": list(grid)}
        row = {"n": n, "minus": minus.to_dict(), "plus": plus.to_dict(), "nontrivial": minus.chern != 0}
        checks.append(check_true("pairing magnitude", name, abs(minus.chern) == n and abs(plus.chern) == n, f"{minus.chern}, {plus.chern}", params))
        checks.append(check_true("pairing antisymmetric", name, minus.chern + plus.chern == 0, f"{minus.chern} + {plus.chern}", params))
        worst = max(minus.residual, plus.residual)
        checks.append(check_true("pairing integrality", name, worst < RESIDUAL_LIMIT, str(worst), params))
        if n:
            idem = max(idempotency_residual(frame(m), T, P) for m in (-n, n))
            row["idempotency_residual"] = idem
            checks.append(check_true("body F^2 = F on grid", name, idem < IDEMPOTENCY_LIMIT, str(idem), params))
        if refine:
            fine_values = (chern_number(preset, -n, fine, frame(-n)).chern, chern_number(preset, n, fine, frame(n)).chern)
            row["refined"] = {"grid": list(fine), "minus": fine_values[0], "plus": fine_values[1]}
            checks.append(check_true("pairing grid refinement", name, fine_values == (minus.chern, plus.chern), str(fine_values), {"n": n, "grid": list(fine)}))
        rows.append(row)
    if csv_path is not None:
        write_flux_csv(csv_path, reports)
    return rows, checks
