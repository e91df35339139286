"""Labelled, counter-based random streams.

Every stream is identified by a master seed plus a tuple of labels
(e.g. ``("fluct", "eval", "load", "L3")``).  The labels are hashed into a
``SeedSequence`` spawn key that keys a Philox generator, so a stream's draws
depend only on its lineage and never on how many other streams were used
before it.  This is what lets ensemble cells run in any order or in parallel
without changing results.
"""
from __future__ import annotations

import hashlib

import numpy as np


def _label_word(label) -> int:
    if isinstance(label, (bool, np.bool_)):
        label = int(label)
    if isinstance(label, (int, np.integer)) and label >= 0:
        return int(label)
    if isinstance(label, (float, np.floating)):
        label = repr(float(label))
    digest = hashlib.blake2b(str(label).encode("utf-8"), digest_size=8).digest()
    # high bit set keeps hashed labels disjoint from small integer labels
    return int.from_bytes(digest, "little") | (1 << 63)


class RngStream:
    """A reproducible random stream named by ``(seed, *labels)``.

    The underlying generator is created lazily and advances as it is used;
    two ``RngStream`` objects with the same lineage yield identical draws.
    """

    __slots__ = ("seed", "labels", "_gen")

    def __init__(self, seed: int, labels: tuple = ()):
        if seed is None or int(seed) < 0:
            raise ValueError("master seed must be a non-negative integer")
        self.seed = int(seed)
        self.labels = tuple(labels)
        self._gen = None

    def child(self, *labels) -> "RngStream":
        return RngStream(self.seed, self.labels + labels)

    @property
    def gen(self) -> np.random.Generator:
        if self._gen is None:
            key = tuple(_label_word(lab) for lab in self.labels)
            seq = np.random.SeedSequence(self.seed, spawn_key=key)
            self._gen = np.random.Generator(np.random.Philox(seq))
        return self._gen

    def __repr__(self):
        return f"RngStream(seed={self.seed}, labels={self.labels!r})"
