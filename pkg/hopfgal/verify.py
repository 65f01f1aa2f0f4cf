"""Run verification suites on a preset and write report-v1 JSON."""

from dataclasses import asdict, dataclass, field
from pathlib import Path
import argparse
import json
import sys
from typing import Callable, Dict, List, Optional, Tuple

import yaml

import bundles
import chern
import connection as conn
from hopf import HopfError
from ncpoly import NcPoly, TableError
from presets import Preset, PresetError, list_presets, load_preset
from report import Check, build_report, check_equal, check_true, dumps, render_text, write_report
from rewrite import PresentationError, check_confluence
from scalars import ScalarError
from tensor import TensorElem, TensorError, d_universal

PARAMS_PATH = Path(__file__).resolve().parent / "params.yaml"
SUITES = ("galois", "connection", "roundtrip", "gauge", "projector", "iso", "freeness", "chern", "confluence", "coinvariants", "all")
FORMATS = ("json", "text")
FORMS = ("strong", "nonstrong")
COMPUTATION_ERRORS = (
    ScalarError, TableError, PresentationError, TensorError, HopfError,
    conn.SplittingError, conn.GaugeError, bundles.ProjectorError, chern.ChernError,
)


@dataclass
class SuiteConfig:
    suite: str = "all"
    preset: str = "super-s3"
    n_range: int = 3
    degree_bound: int = 6
    grid: str = "32x32"
    seed: int = 0
    out: str = "reports"
    format: str = "json"
    form: str = "strong"
    depth: int = 1
    samples: Optional[int] = 200
    n: Optional[int] = None
    csv: Optional[str] = None
    integral_coeffs: Dict[int, list] = field(default_factory=lambda: {1: ["1"], -1: ["1"], 2: ["1", "q"]})


def load_config(path: Optional[Path]) -> SuiteConfig:
    cfg = SuiteConfig()
    if path and path.exists():
        data = yaml.safe_load(path.read_text()) or {}
        names = set(asdict(cfg).keys())
        for k, v in data.items():
            if k in names:
                setattr(cfg, k, v)
    return cfg


def apply_profile(cfg: SuiteConfig, yaml_path: Optional[Path], profile: Optional[str]) -> SuiteConfig:
    if not profile:
        return cfg
    data = {}
    if yaml_path and yaml_path.exists():
        data = yaml.safe_load(yaml_path.read_text()) or {}
    prof = (data.get("profiles") or {}).get(profile)
    if prof is None:
        raise ValueError(f"Unknown profile: {profile}")
    names = set(asdict(cfg).keys())
    for k, v in prof.items():
        if k in names:
            setattr(cfg, k, v)
    return cfg


def apply_overrides(cfg: SuiteConfig, args: argparse.Namespace) -> None:
    for name in asdict(cfg).keys():
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)


def parse_grid(text: str) -> Tuple[int, int]:
    try:
        n_theta, n_phi = (int(x) for x in str(text).lower().split("x"))
    except ValueError:
        raise ValueError(f"grid must look like 32x32, got {text!r}") from None
    return n_theta, n_phi


def validate_config(cfg: SuiteConfig) -> None:
    if cfg.suite not in SUITES:
        raise ValueError(f"Unknown suite: {cfg.suite}")
    if not cfg.preset:
        raise ValueError("preset must be set")
    if not 0 <= int(cfg.n_range) <= bundles.MAX_MU:
        raise ValueError(f"n_range must be between 0 and {bundles.MAX_MU}")
    if int(cfg.degree_bound) < 2:
        raise ValueError("degree_bound must be at least 2")
    n_theta, n_phi = parse_grid(cfg.grid)
    if min(n_theta, n_phi) < chern.MIN_GRID:
        raise ValueError(f"grid must be at least {chern.MIN_GRID}x{chern.MIN_GRID}")
    if cfg.format not in FORMATS:
        raise ValueError(f"Unknown format: {cfg.format}")
    if cfg.form not in FORMS:
        raise ValueError(f"Unknown form: {cfg.form}")
    if int(cfg.depth) < 1:
        raise ValueError("depth must be at least 1")
    if cfg.samples is not None and int(cfg.samples) < 1:
        raise ValueError("samples must be positive")
    if cfg.n is not None and not 0 <= int(cfg.n) <= bundles.MAX_MU:
        raise ValueError(f"n must be between 0 and {bundles.MAX_MU}")


# ---------------------------------------------------------------- suites

def _elements(preset: Preset, cfg: SuiteConfig) -> List[int]:
    return preset.group.elements(cfg.n_range)


def _mus(preset: Preset, cfg: SuiteConfig) -> List[int]:
    if preset.group.is_cyclic2:
        return [1]
    return [m for n in range(1, cfg.n_range + 1) for m in (-n, n)]


def _has_hermitian(preset: Preset, mu: int) -> bool:
    if preset.table.star is not None:
        return preset.has("hermitian")
    return preset.has("spin") and abs(mu) == 1


def suite_galois(preset: Preset, cfg: SuiteConfig) -> List[Check]:
    tau = conn.translation_lift(preset)
    checks = conn.galois_certificate(preset, tau, _elements(preset, cfg))
    return checks + conn.translation_property_suite(preset, tau, cfg.n_range)


def suite_connection(preset: Preset, cfg: SuiteConfig) -> List[Check]:
    tau = conn.translation_lift(preset)
    omega = conn.connection_form(preset, cfg.form, tau)
    elements = _elements(preset, cfg)
    checks = conn.verify_connection_form(preset, omega, True, elements)
    if cfg.form == "nonstrong":
        return checks + bundles.nonstrong_witness(preset, cfg.degree_bound)
    gens = preset.pres.generators()
    s = conn.J4(omega)
    checks += conn.verify_splitting(preset, s, gens)
    checks += conn.covariant_derivative_checks(preset, s, gens + [preset.pres.one()])
    checks += conn.psi_xi_checks(preset, omega, tau, gens, elements, cfg.depth, cfg.samples, cfg.seed)
    checks += _unitalize_checks(preset, s, gens, cfg)
    if preset.hopf is not None:
        checks += _integral_checks(preset, omega, elements, cfg)
    return checks


def shift_coinvariant(preset: Preset, degree_bound: int) -> Optional[NcPoly]:
    """First nonconstant listed coinvariant, else the shortest degree-0 normal word."""
    listed = [c for c in preset.coinvariants if c.max_length()]
    if listed:
        return listed[0]
    words = [w for w in preset.pres.normal_words(degree_bound, 0) if w]
    if not words:
        return None
    return NcPoly.monomial(preset.table, min(words, key=preset.pres.order_key))


def _unitalize_checks(preset: Preset, s: conn.SplittingS, gens, cfg: SuiteConfig) -> List[Check]:
    """Shift s by p -> p d(b) and recover it through the unitalising map."""
    b = shift_coinvariant(preset, cfg.degree_bound)
    if b is None:
        return [check_true("unitalize shift element", preset.name, False, f"no nonconstant degree-0 word up to length {cfg.degree_bound}", {"degree_bound": cfg.degree_bound})]
    db = d_universal(preset.pres, b)

    def sbar(p):
        return s(p) + db.left_mul(preset.pres.normal_form(p))

    unital = conn.unitalize(preset, sbar, gens, cfg.degree_bound, reference=s)
    one = preset.pres.one()
    checks = [check_equal("unitalize T(s)(1) = 1 (x) 1", preset.name, unital(one), TensorElem.pure(preset.pres, [one, one]), {"b": b.to_text()})]
    for p in gens:
        checks.append(check_equal("unitalize recovers s", preset.name, unital(p), s(p), {"p": p.to_text(), "b": b.to_text()}))
    return checks


def _integral_checks(preset: Preset, omega: conn.ConnForm, elements, cfg: SuiteConfig) -> List[Check]:
    nonzero = [g for g in elements if g]
    i0 = conn.integral_family(preset)
    i1 = conn.integral_family(preset, {int(k): v for k, v in cfg.integral_coeffs.items()})
    checks = conn.verify_integral(preset, i0, nonzero)
    checks += conn.verify_integral(preset, i1, nonzero)
    back = conn.integral_from_connection(preset, omega)
    for g in nonzero:
        checks.append(check_equal("integral from preset connection = i0", preset.name, back(g), i0(g), {"g": preset.group.label(g)}))
    omega1 = conn.connection_from_integral(preset, i1)
    checks += [c for c in conn.verify_connection_form(preset, omega1, True, elements)]
    g = next(iter(cfg.integral_coeffs), 1)
    differs = omega1(int(g)) != conn.connection_from_integral(preset, i0)(int(g))
    checks.append(check_true("integral families give distinct connections", preset.name, differs, "connections coincide", {"g": preset.group.label(int(g))}))
    return checks


def suite_roundtrip(preset: Preset, cfg: SuiteConfig) -> List[Check]:
    tau = conn.translation_lift(preset)
    omega = conn.connection_form(preset, tau=tau)
    elements = [g for g in _elements(preset, cfg) if g]
    return conn.roundtrip_check(preset, omega, tau, preset.pres.generators(), elements)


def suite_gauge(preset: Preset, cfg: SuiteConfig) -> List[Check]:
    tau = conn.translation_lift(preset)
    omega = conn.connection_form(preset, tau=tau)
    f = conn.GaugeTransform.parse(preset, preset.block("gauge")["value"])
    elements = _elements(preset, cfg)
    gens = preset.pres.generators()
    gauged = conn.gauge_connection(f, omega)
    checks = conn.verify_connection_form(preset, gauged, True, elements)
    scalar = f.value.max_length() == 0
    moved = any(gauged(g) != omega(g) for g in elements if g)
    if scalar:
        checks.append(check_true("scalar gauge acts trivially", preset.name, not moved, "f.omega differs from omega", {"f": f.value.to_text()}))
    else:
        checks.append(check_true("gauge moves the connection", preset.name, moved, "f.omega = omega", {"f": f.value.to_text()}))
    checks += conn.gauge_compatibility(preset, f, omega, tau, gens, elements)
    return checks + conn.gauge_automorphism(preset, f, gens)


def suite_projector(preset: Preset, cfg: SuiteConfig) -> Tuple[List[Check], Dict[str, dict]]:
    s = conn.default_splitting(preset)
    checks = bundles.independence_report(preset, cfg.n_range)
    matrices: Dict[str, dict] = {}
    for mu in _mus(preset, cfg):
        cert = bundles.projector_from_splitting(s, bundles.line_bundle_generators(preset, mu))
        checks += cert.checks
        matrices[f"E[{mu}]"] = bundles.export_matrix(cert.E)
        if _has_hermitian(preset, mu):
            F_cert = bundles.hermitian_projector(preset, mu)
            checks += F_cert.checks
            matrices[f"F[{mu}]"] = bundles.export_matrix(F_cert.F)
    if preset.group.is_cyclic2:
        checks += bundles.auxiliary_idempotents(preset)
    return checks, matrices


def suite_iso(preset: Preset, cfg: SuiteConfig) -> List[Check]:
    tau = conn.translation_lift(preset)
    checks: List[Check] = []
    for mu in _mus(preset, cfg):
        if _has_hermitian(preset, mu):
            cert = bundles.projector_pair(preset, mu, tau=tau)
            checks += [c for c in cert.checks if c.check.startswith("iso")]
    if not checks:
        raise PresetError(f"Preset {preset.name} has no hermitian projectors")
    return checks


def suite_freeness(preset: Preset, cfg: SuiteConfig) -> List[Check]:
    return bundles.freeness_certificate(preset)


def suite_chern(preset: Preset, cfg: SuiteConfig) -> Tuple[List[Check], dict]:
    grid = parse_grid(cfg.grid)
    ns = [int(cfg.n)] if cfg.n is not None else list(range(cfg.n_range + 1))
    csv_path = Path(cfg.out) / cfg.csv if cfg.csv else None
    checks = chern.orientation_checks(preset, grid)
    rows, pairing = chern.pairing_report(preset, ns, grid, csv_path=csv_path)
    return checks + pairing, {"pairing": rows}


def suite_confluence(preset: Preset, cfg: SuiteConfig) -> List[Check]:
    pres = preset.pres
    rep = check_confluence(pres, cfg.degree_bound)
    witness = "; ".join(f"{f['word']}: {f['left']} vs {f['right']}" for f in rep.failures[:5])
    checks = [Check("confluence", preset.name, {"degree_bound": cfg.degree_bound, "pairs": rep.pairs_checked}, rep.passed, witness)]
    for rel in preset.relations:
        checks.append(check_true("relation reduces to 0", preset.name, not pres.normal_form(rel), pres.normal_form(rel).to_text(), {"relation": rel.to_text()}))
    if preset.hopf is not None:
        checks += preset.hopf.check_axioms(preset.name, preset.relations)
        for rel in preset.relations:
            image = preset.hopf.pi_I(rel)
            checks.append(check_true("pi_I kills relation", preset.name, not image, str({k: v.to_text() for k, v in image.items()}), {"relation": rel.to_text()}))
    return checks + bundles.grading_partition_check(preset, cfg.degree_bound)


def suite_coinvariants(preset: Preset, cfg: SuiteConfig) -> List[Check]:
    return bundles.coinvariant_generation_check(preset, min(cfg.degree_bound, bundles.MAX_COINVARIANT_BOUND))


# suite -> (runner, blocks the preset must carry)
RUNNERS: Dict[str, Tuple[Callable, Tuple[str, ...]]] = {
    "galois": (suite_galois, ("connection",)),
    "connection": (suite_connection, ("connection",)),
    "roundtrip": (suite_roundtrip, ("connection",)),
    "gauge": (suite_gauge, ("connection", "gauge")),
    "projector": (suite_projector, ("connection", "line_bundles")),
    "iso": (suite_iso, ("connection", "line_bundles")),
    "freeness": (suite_freeness, ("freeness",)),
    "chern": (suite_chern, ("body", "hermitian")),
    "confluence": (suite_confluence, ()),
    "coinvariants": (suite_coinvariants, ()),
}


def applicable(preset: Preset, suite: str) -> bool:
    _, blocks = RUNNERS[suite]
    if suite == "iso":
        return any(_has_hermitian(preset, mu) for mu in (-1, 1)) and preset.has("connection")
    return all(preset.has(b) for b in blocks)


def require_blocks(preset: Preset, suite: str) -> None:
    _, blocks = RUNNERS[suite]
    for b in blocks:
        preset.block(b)


def run_suite(preset: Preset, suite: str, cfg: SuiteConfig) -> Tuple[List[Check], dict]:
    """Run one suite. A computation error becomes a failed check instead of an exit."""
    runner, _ = RUNNERS[suite]
    require_blocks(preset, suite)
    try:
        result = runner(preset, cfg)
    except COMPUTATION_ERRORS as e:
        reason = f"{type(e).__name__}: {e}"
        print(f"[warn] {suite} {preset.name}: {reason}", file=sys.stderr)
        return [check_true(f"{suite} completed", preset.name, False, reason, {"suite": suite})], {}
    if isinstance(result, tuple):
        return result
    return result, {}


def run(cfg: SuiteConfig, preset: Optional[Preset] = None) -> Tuple[dict, List[Path]]:
    preset = preset or load_preset(cfg.preset)
    suites = [s for s in SUITES if s != "all"] if cfg.suite == "all" else [cfg.suite]
    checks: List[Check] = []
    extras: Dict[str, dict] = {}
    for suite in suites:
        if cfg.suite == "all" and not applicable(preset, suite):
            print(f"[info] {suite} {preset.name}: not applicable, skipped", file=sys.stderr)
            continue
        part, extra = run_suite(preset, suite, cfg)
        passed = sum(c.passed for c in part)
        print(f"[info] {suite} {preset.name}: {passed}/{len(part)} checks passed", file=sys.stderr)
        checks += part
        if extra:
            extras[suite] = extra
    config = {k: v for k, v in asdict(cfg).items() if k not in ("out", "format")}
    config["integral_coeffs"] = {str(k): v for k, v in cfg.integral_coeffs.items()}
    report = build_report(cfg.suite, preset.name, config, checks)
    written: List[Path] = []
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    if extras:
        path = out / f"{cfg.suite}-{preset.name}-data.json"
        path.write_text(json.dumps(extras, indent=2, sort_keys=True) + "\n")
        written.append(path)
    if cfg.csv and "chern" in extras:
        written.append(out / cfg.csv)
    written.insert(0, write_report(out, report, written))
    return report, written


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Verify Hopf-Galois and strong connection certificates")
    parser.add_argument("suite", nargs="?", choices=SUITES)
    parser.add_argument("--preset", type=str)
    parser.add_argument("--range", dest="n_range", type=int)
    parser.add_argument("--degree-bound", dest="degree_bound", type=int)
    parser.add_argument("--grid", type=str, help="NTHETAxNPHI, e.g. 32x32")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", type=str)
    parser.add_argument("--format", choices=FORMATS)
    parser.add_argument("--form", choices=FORMS)
    parser.add_argument("--depth", type=int, help="Letters per factor in the sampled descent triples")
    parser.add_argument("--samples", type=int)
    parser.add_argument("--n", type=int, help="Single n for the chern suite")
    parser.add_argument("--csv", type=str, help="Per-plaquette flux CSV name, written next to the report")
    parser.add_argument("--params", type=Path, default=PARAMS_PATH)
    parser.add_argument("--profile", type=str)
    parser.add_argument("--list-presets", action="store_true")
    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    if args.list_presets:
        print("\n".join(list_presets()))
        return 0
    try:
        cfg = load_config(args.params)
        apply_profile(cfg, args.params, args.profile)
        apply_overrides(cfg, args)
        validate_config(cfg)
        preset = load_preset(cfg.preset)
        if cfg.suite != "all":
            require_blocks(preset, cfg.suite)
    except (PresetError, ValueError) as e:
        print(f"[error] {e}", file=sys.stderr)
        return 2
    report, _ = run(cfg, preset)
    print(render_text(report) if cfg.format == "text" else dumps(report))
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
