"""Candidate testing shared by the genuine verifier and the attacker.

Both sides work the same way: interpolate a k-subset of points, then either
count how many vault records lie on the candidate polynomial's graph
(threshold rule) or check the candidate's CRC coefficient.  Keeping one
audited code path for the two sides is deliberate.

For quiz vaults the graph test is "any transform index matches": a record
(X, Y) counts as a hit when (g(X) - Y) mod q is one of the n transform
offsets.  Neither the attacker nor the verifier can know j for records they
did not match to a minutia.
"""

from __future__ import annotations

import numpy as np

from .field import PrimeField
from .quiz import transform_offsets
from .vault import Vault, concat_coord, coord_shift


class VaultIndex:
    """Precomputed per-record data for fast candidate-vs-vault scans.

    When k*(q-1)^2 fits comfortably in int64, the scan multiplies a
    precomputed Vandermonde power matrix by the candidate coefficients in
    numpy (exact integer arithmetic); otherwise it falls back to a pure
    Python Horner loop, also exact.
    """

    def __init__(self, vault: Vault):
        self.q = vault.q
        self.k = vault.k
        self.field = PrimeField(vault.q)
        shift = coord_shift(vault.q)
        self.xs = [concat_coord(rec.x, rec.y, shift) for rec in vault.records]
        self.ys = [rec.value for rec in vault.records]
        self.r = len(self.xs)
        if vault.quiz_n:
            self.offsets = transform_offsets(vault.quiz_params())
            self._offset_set = frozenset(self.offsets)
        else:
            self.offsets = None
            self._offset_set = None
        self._vectorized = self.k * (self.q - 1) ** 2 < 2**62
        if self._vectorized:
            q = self.q
            pows = np.empty((self.r, self.k), dtype=np.int64)
            for i, x in enumerate(self.xs):
                acc = 1
                for j in range(self.k):
                    pows[i, j] = acc
                    acc = acc * x % q
            self._pows = pows
            self._ys_arr = np.asarray(self.ys, dtype=np.int64)
            if self.offsets is not None:
                self._offsets_arr = np.asarray(sorted(self.offsets), dtype=np.int64)

    def count_hits(self, coeffs) -> int:
        """Number of vault records on the candidate's graph (any-index match
        for quiz vaults).  Records used to build the candidate count too."""
        if self._vectorized:
            vals = self._pows @ np.asarray(coeffs, dtype=np.int64) % self.q
            if self.offsets is None:
                return int(np.count_nonzero(vals == self._ys_arr))
            diff = (vals - self._ys_arr) % self.q
            return int(np.isin(diff, self._offsets_arr).sum())
        return self.count_hits_python(coeffs)

    def count_hits_python(self, coeffs) -> int:
        """Pure-Python scan; exact for any accepted q.  Also serves as the
        oracle for the vectorized path in tests."""
        q = self.q
        hits = 0
        offsets = self._offset_set
        for x, y in zip(self.xs, self.ys):
            acc = 0
            for c in reversed(coeffs):
                acc = acc * x + c
            v = acc % q
            if offsets is None:
                hits += v == y
            else:
                hits += (v - y) % q in offsets
        return hits

    def interpolate_subset(self, indices, ys_override=None) -> tuple[int, ...]:
        """Interpolate through the records at ``indices``; ``ys_override``
        (parallel to indices) substitutes transformed ordinates."""
        xs = self.xs
        if ys_override is None:
            pts = [(xs[i], self.ys[i]) for i in indices]
        else:
            pts = [(xs[i], y) for i, y in zip(indices, ys_override)]
        return self.field.interpolate(pts)
