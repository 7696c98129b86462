"""
File interfaces for ring, map and module descriptions
"""

from .ring_files import (
    load_document,
    load_map_file,
    load_module_file,
    load_ring_file,
    map_from_document,
    map_to_dict,
    module_from_document,
    module_to_dict,
    ring_from_document,
    ring_to_dict,
    save_document
)

__all__ = [
    "load_document",
    "load_map_file",
    "load_module_file",
    "load_ring_file",
    "map_from_document",
    "map_to_dict",
    "module_from_document",
    "module_to_dict",
    "ring_from_document",
    "ring_to_dict",
    "save_document"
]
