import logging
import os
from typing import Any, Dict, List, Optional, Tuple

import yaml

from src.lib.error_handler import InputError
from src.models.preconditioner import Preconditioner
from src.models.target import TargetSpec
from src.models.target_preset import TargetPreset
from src.services.precond import build_precond
from src.services.targets import build_target

logger = logging.getLogger(__name__)

DEFAULT_PRESET_DIR = os.path.join(
    os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))),
    "config",
    "targets",
)


class TargetLoader:
    def __init__(self, config_path: str = DEFAULT_PRESET_DIR):
        self.config_path = config_path
        self.presets: Dict[str, TargetPreset] = self._load_presets()

    def _load_presets(self) -> Dict[str, TargetPreset]:
        """
        Loads every preset from the config directory; the file name is the preset id.
        """
        if not os.path.isdir(self.config_path):
            raise InputError(f"preset directory not found: {self.config_path}")
        presets = {}
        for filename in sorted(os.listdir(self.config_path)):
            if filename.endswith(".yaml"):
                with open(os.path.join(self.config_path, filename), "r") as f:
                    data = yaml.safe_load(f) or {}
                preset_id = filename[: -len(".yaml")]
                presets[preset_id] = self._create_preset(preset_id, data)
        logger.debug(f"Loaded {len(presets)} presets from {self.config_path}")
        return presets

    def _create_preset(self, preset_id: str, data: Dict[str, Any]) -> TargetPreset:
        target = data.get("target")
        if not isinstance(target, dict) or "kind" not in target:
            raise InputError(f"preset '{preset_id}' must define target.kind")
        known = {"name", "description", "target", "precond", "gamma", "iters", "replicates"}
        return TargetPreset(
            id=preset_id,
            name=data.get("name", preset_id),
            description=data.get("description", ""),
            target=dict(target),
            precond=str(data.get("precond", "identity")),
            gamma=data.get("gamma"),
            iters=data.get("iters"),
            replicates=data.get("replicates"),
            extras={k: v for k, v in data.items() if k not in known},
        )

    def names(self) -> List[str]:
        return list(self.presets)

    def get(self, name: str) -> TargetPreset:
        """
        Returns a preset by id.
        """
        if name not in self.presets:
            raise InputError(
                f"unknown preset '{name}'; available: {', '.join(self.names()) or 'none'}"
            )
        return self.presets[name]

    def build(self, name: str) -> Tuple[TargetSpec, Preconditioner]:
        """Instantiates the preset's target and preconditioner."""
        return instantiate(self.get(name))


def instantiate(
    preset: TargetPreset, precond: Optional[str] = None
) -> Tuple[TargetSpec, Preconditioner]:
    params = {k: v for k, v in preset.target.items() if k != "kind"}
    target = build_target(str(preset.target["kind"]), params)
    return target, build_precond(precond or preset.precond, target.dimension)


def resolve_problem(
    preset: Optional[str] = None,
    kind: Optional[str] = None,
    params: Optional[Dict[str, Any]] = None,
    precond: Optional[str] = None,
    config_path: Optional[str] = None,
) -> Tuple[TargetSpec, Preconditioner, Optional[TargetPreset]]:
    """
    Target and preconditioner from a preset, from explicit parameters, or from a
    preset with its preconditioner overridden.
    """
    if preset:
        chosen = TargetLoader(config_path or DEFAULT_PRESET_DIR).get(preset)
        return (*instantiate(chosen, precond), chosen)
    if not kind:
        raise InputError("either a preset or a target kind is required")
    target = build_target(kind, params or {})
    return target, build_precond(precond or "identity", target.dimension), None
