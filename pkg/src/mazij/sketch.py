"""MinHash signatures and LSH banding over character shingles.

Signatures estimate Jaccard similarity between shingle sets; banding
buckets likely-similar pairs so candidate generation stays near-linear.
Everything is seeded: identical seed and inputs give byte-identical
signatures, buckets, and downstream reports.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

def stable_hash64(text: str) -> int:
    """Process-independent 64-bit hash of a string (blake2b prefix)."""
    return int.from_bytes(hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest(), "big")


# splitmix64 finalizer constants; uint64 arithmetic wraps mod 2^64 by
# definition, which is exactly what the mixer wants.
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX_1
    z = (z ^ (z >> np.uint64(27))) * _MIX_2
    return z ^ (z >> np.uint64(31))


@dataclass(frozen=True)
class LshParams:
    num_perm: int = 128
    bands: int = 16
    rows: int = 8

    def __post_init__(self):
        if self.bands * self.rows != self.num_perm:
            raise ValueError(
                f"bands*rows must equal num_perm: {self.bands}*{self.rows} != {self.num_perm}"
            )


class MinHasher:
    """Seeded family of ``num_perm`` independent 64-bit hash slots.

    Slot i hashes a shingle key as splitmix64(key ^ salt_i); the salts are
    drawn once from a seeded generator, so signatures are reproducible
    byte-for-byte across runs and platforms.
    """

    def __init__(self, num_perm: int = 128, seed: int = 0):
        if num_perm < 1:
            raise ValueError("num_perm must be >= 1")
        self.num_perm = num_perm
        self.seed = seed
        rng = np.random.default_rng(seed)
        self._salts = rng.integers(0, 2**64, size=num_perm, dtype=np.uint64)

    def signature(self, shingle_set) -> np.ndarray:
        """MinHash signature of a set of shingle strings.

        The empty set gets the all-max sentinel signature, which estimates
        Jaccard 0 against everything (including another empty set; disjoint
        by convention).
        """
        if not shingle_set:
            return np.full(self.num_perm, np.iinfo(np.uint64).max, dtype=np.uint64)
        keys = np.fromiter(
            (stable_hash64(s) for s in shingle_set), dtype=np.uint64, count=len(shingle_set)
        )
        # (m, k) table of per-slot hashes; min over the set axis.
        hashed = _mix64(keys[:, None] ^ self._salts[None, :])
        return hashed.min(axis=0)


_EMPTY_SENTINEL = np.iinfo(np.uint64).max


def estimated_jaccard(sig_a: np.ndarray, sig_b: np.ndarray) -> float:
    """Fraction of agreeing signature slots; empty-set sentinels score 0."""
    if sig_a.shape != sig_b.shape:
        raise ValueError("signature length mismatch")
    if sig_a[0] == _EMPTY_SENTINEL or sig_b[0] == _EMPTY_SENTINEL:
        return 0.0
    return float(np.mean(sig_a == sig_b))


def band_keys(signature: np.ndarray, params: LshParams) -> list[int]:
    """One bucket key per band: a stable hash of (band index, band slice)."""
    keys = []
    for band in range(params.bands):
        chunk = signature[band * params.rows:(band + 1) * params.rows]
        digest = hashlib.blake2b(
            band.to_bytes(4, "big") + chunk.tobytes(), digest_size=8
        ).digest()
        keys.append(int.from_bytes(digest, "big"))
    return keys


class LshIndex:
    """band-bucket -> member ids map for candidate generation."""

    def __init__(self, params: LshParams):
        self.params = params
        self._buckets: dict[int, list] = {}

    def add(self, member_id, signature: np.ndarray) -> None:
        for key in band_keys(signature, self.params):
            self._buckets.setdefault(key, []).append(member_id)

    def candidates(self, signature: np.ndarray) -> list:
        """Members sharing at least one band bucket, in insertion order."""
        seen = {}
        for key in band_keys(signature, self.params):
            for member in self._buckets.get(key, ()):
                seen[member] = None
        return list(seen)

    def buckets(self) -> dict[int, list]:
        return self._buckets
