"""
Ring and map description files

A ring file is a JSON ring description ({"type": "zmod", "n": 6}, products,
poly_quotient and quotient nest). A map file holds {"source", "target",
"images"} with one image per additive basis element of the source, each a
coordinate array of the target (a bare integer n means n·1). A module file holds
{"ring", "invariant_factors", "action"}, where action[i][a] gives the
coordinates of e_i · m_a.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from ..core.abelian import FpGroup
from ..core.errors import SpecFormatError
from ..core.rings import FiniteModule, FiniteRing, RingMap, make_map, make_ring

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def load_document(path: PathLike) -> Dict[str, Any]:
    """Read one JSON object from a file"""
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise SpecFormatError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise SpecFormatError(f"{path} must hold a JSON object, got {type(data).__name__}")
    logger.debug(f"Read {path}")
    return data


def ring_from_document(data: Dict[str, Any]) -> FiniteRing:
    # a map document may be passed where a ring is expected; take its source
    if "type" not in data and "source" in data:
        data = data["source"]
    return make_ring(data)


def map_from_document(data: Dict[str, Any]) -> RingMap:
    missing = [key for key in ("source", "target", "images") if key not in data]
    if missing:
        raise SpecFormatError(f"map description is missing {', '.join(missing)}")
    source = make_ring(data["source"])
    target = make_ring(data["target"])
    images = data["images"]
    if not isinstance(images, list):
        raise SpecFormatError("map images must be a list")
    return make_map(source, target, images)


def module_from_document(data: Dict[str, Any]) -> FiniteModule:
    missing = [key for key in ("ring", "invariant_factors", "action") if key not in data]
    if missing:
        raise SpecFormatError(f"module description is missing {', '.join(missing)}")
    ring = make_ring(data["ring"])
    try:
        additive = FpGroup(tuple(int(d) for d in data["invariant_factors"]))
    except (TypeError, ValueError) as e:
        raise SpecFormatError(f"bad module invariant factors {data['invariant_factors']!r}: {e}") from e
    return FiniteModule(ring, additive, data["action"], name=data.get("name"))


def load_ring_file(path: PathLike) -> FiniteRing:
    ring = ring_from_document(load_document(path))
    logger.info(f"Loaded ring {ring.name} of order {ring.order} from {path}")
    return ring


def load_map_file(path: PathLike) -> RingMap:
    phi = map_from_document(load_document(path))
    logger.info(f"Loaded map {phi.source.name} -> {phi.target.name} from {path}")
    return phi


def load_module_file(path: PathLike) -> FiniteModule:
    module = module_from_document(load_document(path))
    logger.info(f"Loaded module {module.name} of order {module.order} from {path}")
    return module


def ring_to_dict(ring: FiniteRing) -> Dict[str, Any]:
    if ring.description is None:
        raise SpecFormatError(f"{ring.name} was not built from a ring description")
    return ring.description


def map_to_dict(phi: RingMap) -> Dict[str, Any]:
    """Self-contained description, replayable with load_map_file"""
    return {
        "source": ring_to_dict(phi.source),
        "target": ring_to_dict(phi.target),
        "images": [list(y) for y in phi.images],
    }


def module_to_dict(module: FiniteModule) -> Dict[str, Any]:
    """Self-contained description, replayable with load_module_file"""
    return {
        "ring": ring_to_dict(module.ring),
        "name": module.name,
        "invariant_factors": list(module.additive.invariant_factors),
        "action": module.action_table(),
    }


def save_document(data: Dict[str, Any], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2)
    logger.debug(f"Wrote {path}")
    return path
