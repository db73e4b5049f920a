"""Flat key=value pipeline configuration.

One file carries every tunable so a run is reproducible from (config,
inputs, seed) alone. Relative paths are resolved against the config
file's directory; CLI flags override individual keys.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .lattice import FormatError


@dataclass
class PipelineConfig:
    # input resources
    dictionary: str = ""
    connectivity: str = ""
    tagmap: str = ""
    corpus: str = ""
    similar_table: str = ""  # empty: derive from the confusion model
    confusion: str = ""
    derive_similar_top_m: int = 1
    # trained model locations
    tag_model: str = "tag_model.tsv"
    cooccur_model: str = "cooccur_model.tsv"
    # candidate selection
    theta1: float = 110.0
    theta2: float = 0.55
    supplement: bool = True
    # tagging
    lambda1: float = 0.1
    lambda2: float = 0.3
    lambda3: float = 0.6
    eps_lex: float = 1e-6
    nbest: int = 5
    chain_cap: int = 256
    # co-occurrence
    mi_lambda1: float = 0.01
    mi_lambda2: float = 1.0
    gf_threshold: float = 0.5
    min_pair_freq: int = 2
    # simulator
    k: int = 5
    p_err: float = 0.3
    p_in_k: float = 0.9
    base_lo: int = 30
    base_hi: int = 250
    incr_lo: int = 5
    incr_hi: int = 80
    seed: int = 0

    base_dir: Path = Path(".")

    def path(self, key: str) -> Path:
        value = getattr(self, key)
        if not value:
            raise FormatError(f"config key {key!r} is not set")
        return (self.base_dir / value).resolve()

    def has(self, key: str) -> bool:
        return bool(getattr(self, key))

    def lambdas(self) -> tuple[float, float, float]:
        return (self.lambda1, self.lambda2, self.lambda3)

    def mi_lambdas(self) -> tuple[float, float]:
        return (self.mi_lambda1, self.mi_lambda2)


_FIELD_TYPES = {
    f.name: f.type for f in fields(PipelineConfig) if f.name != "base_dir"
}


def _parse_value(name: str, text: str, where: str):
    kind = _FIELD_TYPES.get(name)
    if kind is None:
        raise FormatError(f"{where}: unknown config key {name!r}")
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
        text = text[1:-1]
    try:
        if kind == "bool":
            if text.lower() in ("true", "1", "yes"):
                return True
            if text.lower() in ("false", "0", "no"):
                return False
            raise ValueError(text)
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
        return text
    except ValueError as exc:
        raise FormatError(f"{where}: bad value for {name}: {text!r}") from exc


def load_config(path) -> PipelineConfig:
    path = Path(path)
    cfg = PipelineConfig(base_dir=path.parent)
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise FormatError(f"{path}: line {lineno}: expected key = value")
            name, _, value = line.partition("=")
            name = name.strip()
            setattr(cfg, name, _parse_value(name, value, f"{path}: line {lineno}"))
    return cfg


def apply_overrides(cfg: PipelineConfig, overrides: dict[str, str]) -> None:
    for name, text in overrides.items():
        if text is None:
            continue
        setattr(cfg, name, _parse_value(name, str(text), "command line"))
