"""
Surface export/import as JSON.

The file carries {shape, params, resolution, nodes, normals, weights}
plus the per-node tangents, normal derivatives and grid steps, and is
validated against schemas/surface.schema.json on both ends.
"""

import json
import logging
import os

import jsonschema
import numpy as np

from perimflow.errors import ConfigurationError
from perimflow.surface.model import QuadratureSurface, build_surface
from perimflow.surface.shapes import get_shape

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def schema_dir():
    "Directory holding the shipped JSON schemas."
    return os.path.join(os.path.dirname(os.path.dirname(__file__)), "schemas")


def load_schema(name):
    "Parsed JSON schema by file stem, e.g. 'surface'."
    with open(os.path.join(schema_dir(), f"{name}.schema.json"), "r", encoding="utf-8") as f:
        return json.load(f)


def surface_to_dict(surface):
    "JSON-ready dict of a surface."
    desc = surface.shape_descriptor
    return {
        "format_version": FORMAT_VERSION,
        "shape": desc["shape"],
        "params": desc["params"],
        "resolution": surface.resolution,
        "nodes": surface.nodes.tolist(),
        "normals": surface.normals.tolist(),
        "weights": surface.weights.tolist(),
        "tangents": surface.tangents.tolist(),
        "normal_derivatives": surface.normal_derivatives.tolist(),
        "steps": surface.steps.tolist(),
    }


def save_surface(surface, path):
    "Write the surface to path.  OSError if the path is not writable."
    data = surface_to_dict(surface)
    jsonschema.validate(data, load_schema("surface"))
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f)
    logger.debug("wrote %r to %s", surface, path)


def surface_from_dict(data):
    "QuadratureSurface from a dict in the export format."
    try:
        jsonschema.validate(data, load_schema("surface"))
    except jsonschema.ValidationError as e:
        raise ConfigurationError(f"Invalid surface file: {e.message}") from e

    shape = get_shape(data["shape"], **data["params"])
    resolution = data["resolution"]
    arrays = {k: np.asarray(data[k], dtype=float) for k in ("nodes", "normals", "weights")}
    n = len(arrays["weights"])
    if n != 2 * resolution**2 or len(arrays["nodes"]) != n or len(arrays["normals"]) != n:
        raise ConfigurationError(
            f"Surface arrays do not match resolution {resolution} ({n} weights)."
        )

    extras = ("tangents", "normal_derivatives", "steps")
    if all(k in data for k in extras):
        for k in extras:
            arrays[k] = np.asarray(data[k], dtype=float)
    else:
        # Older files: rebuild the local lattice data from the shape.
        rebuilt = build_surface(shape, resolution, minimum=4)
        for k in extras:
            arrays[k] = getattr(rebuilt, k)

    return QuadratureSurface(shape=shape, resolution=resolution, **arrays)


def load_surface(path):
    "Read a surface written by save_surface."
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    return surface_from_dict(data)
