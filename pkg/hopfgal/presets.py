"""Preset files: presentations, gradings and the per-preset construction data."""

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
import os
from typing import List, Optional

import yaml

from hopf import GroupHopf, HopfStructure
from ncpoly import GeneratorTable, Grading, NcPoly
from rewrite import Presentation
from scalars import Scalar
from tensor import TensorElem

PRESET_DIR = Path(__file__).resolve().parent / "presets"
ENV_PATH = "HOPFGAL_PRESET_PATH"


class PresetError(ValueError):
    """Unknown preset or malformed preset file."""


@dataclass
class Preset:
    name: str
    pres: Presentation
    group: GroupHopf
    description: str = ""
    relations: List[NcPoly] = field(default_factory=list)
    coinvariants: List[NcPoly] = field(default_factory=list)
    hopf: Optional[HopfStructure] = None
    data: dict = field(default_factory=dict)
    source: Optional[Path] = None

    @property
    def table(self) -> GeneratorTable:
        return self.pres.table

    def gen(self, name: str) -> NcPoly:
        return self.pres.gen(name)

    def parse(self, text) -> NcPoly:
        return self.pres.parse(str(text))

    def has(self, block: str) -> bool:
        return block in self.data

    def block(self, name: str) -> dict:
        if name not in self.data:
            raise PresetError(f"Preset {self.name} has no '{name}' block")
        return self.data[name]


def preset_search_path(explicit: Optional[Path] = None) -> List[Path]:
    dirs: List[Path] = []
    if explicit is not None:
        dirs.append(Path(explicit))
    for part in os.environ.get(ENV_PATH, "").split(os.pathsep):
        if part:
            dirs.append(Path(part))
    dirs.append(PRESET_DIR)
    return dirs


def find_preset(name: str, search: Optional[Path] = None) -> Path:
    candidate = Path(name)
    if candidate.suffix in (".yaml", ".yml") and candidate.is_file():
        return candidate.resolve()
    for d in preset_search_path(search):
        path = d / f"{name}.yaml"
        if path.is_file():
            return path.resolve()
    raise PresetError(f"Unknown preset: {name}")


def list_presets(search: Optional[Path] = None) -> List[str]:
    names = set()
    for d in preset_search_path(search):
        if d.is_dir():
            names.update(p.stem for p in d.glob("*.yaml"))
    return sorted(names)


def load_preset(name: str, search: Optional[Path] = None) -> Preset:
    return _load_path(str(find_preset(name, search)))


@lru_cache(maxsize=None)
def _load_path(path: str) -> Preset:
    try:
        data = yaml.safe_load(Path(path).read_text()) or {}
    except yaml.YAMLError as e:
        raise PresetError(f"Cannot read preset {path}: {e}") from e
    return preset_from_dict(data, Path(path))


def _table_from(data: dict) -> tuple:
    group = data.get("group") or {}
    grading = Grading(int(group.get("modulus", 0)), str(group.get("symbol", "z")))
    gens = data.get("generators") or []
    if not gens:
        raise PresetError("preset lists no generators")
    names = tuple(str(g["name"]) for g in gens)
    degrees = tuple(int(g.get("degree", 0)) for g in gens)
    weights = tuple(int(g.get("weight", 1)) for g in gens)
    star = None
    if data.get("star"):
        entries = []
        for n in names:
            target = str(data["star"][n]).strip()
            sign = -1 if target.startswith("-") else 1
            entries.append((sign, names.index(target.lstrip("+-").strip())))
        star = tuple(entries)
    return GeneratorTable(names, degrees, grading, star), weights


def preset_from_dict(data: dict, source: Optional[Path] = None) -> Preset:
    name = str(data.get("name") or (source.stem if source else "custom"))
    try:
        table, weights = _table_from(data)
        pres = Presentation.from_text(table, data.get("rules") or [], weights, name)
        relations = [NcPoly.parse(table, r) for r in data.get("relations") or []]
        coinvariants = [pres.parse(c) for c in data.get("coinvariants") or ["1"]]
        hopf = None
        if data.get("hopf"):
            block = data["hopf"]
            hopf = HopfStructure(
                pres,
                {n: TensorElem.parse(pres, t) for n, t in block["coproduct"].items()},
                {n: Scalar.parse(str(v)) for n, v in block["counit"].items()},
                {n: NcPoly.parse(table, str(v)) for n, v in block["antipode"].items()},
                block.get("quotient"),
            )
    except (KeyError, ValueError, TypeError) as e:
        if isinstance(e, PresetError):
            raise
        raise PresetError(f"Malformed preset {name}: {e}") from e
    reserved = {"name", "description", "group", "generators", "star", "rules", "relations", "coinvariants", "hopf"}
    extra = {k: v for k, v in data.items() if k not in reserved}
    if hopf is not None:
        extra["hopf"] = data["hopf"]
    preset = Preset(name, pres, GroupHopf(table.grading), str(data.get("description", "")), relations, coinvariants, hopf, extra, source)
    if hopf is not None:
        failed = [c for c in hopf.check_axioms(name) if not c.passed]
        if failed:
            raise PresetError(f"Hopf axioms fail on {name}: {failed[0].check} {failed[0].parameters}")
    return preset
