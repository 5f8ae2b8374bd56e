"""Run manifests: enough configuration and input digests to reproduce any
emitted report byte-for-byte. Reports embed the manifest as comment lines.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from . import __version__


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    command: str
    parameters: dict
    inputs: dict  # path -> sha256
    version: str = __version__

    @classmethod
    def collect(cls, command: str, parameters: dict, input_paths=()):
        inputs = {str(p): file_digest(p) for p in input_paths}
        return cls(command=command, parameters=dict(parameters),
                   inputs=inputs)

    def comment_lines(self) -> list[str]:
        payload = {
            "command": self.command,
            "parameters": self.parameters,
            "inputs": self.inputs,
            "version": self.version,
        }
        return ["manifest: " + json.dumps(payload, sort_keys=True)]
