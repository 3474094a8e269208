from dataclasses import dataclass, field
from typing import Any, Dict, Optional


@dataclass
class TargetPreset:
    id: str
    name: str
    description: str
    target: Dict[str, Any]
    precond: str = "identity"
    gamma: Optional[float] = None
    iters: Optional[int] = None
    replicates: Optional[int] = None
    extras: Dict[str, Any] = field(default_factory=dict)
