"""Counter-style keyed randomness: one independent uniform per (seed, key)."""

from __future__ import annotations

import hashlib
import struct
from typing import Sequence

_SCALE = 2.0 ** -64


def keyed_uniform(seed: int, key: Sequence[int]) -> float:
    """Uniform in [0, 1) determined by ``seed`` and the integer tuple ``key``.

    Distinct keys give (pseudo-)independent values and the result does not
    depend on call order, so draws can be made in any order or in parallel.
    """
    h = hashlib.blake2b(digest_size=8, person=b"hyperfin")
    h.update(struct.pack("<qI", int(seed), len(key)))
    h.update(struct.pack(f"<{len(key)}q", *key))
    return int.from_bytes(h.digest(), "little") * _SCALE
