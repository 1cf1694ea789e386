"""Genuine verifier: geometric matching of a fresh template against vault
coordinates, then polynomial recovery by threshold consensus or
CRC-confirmed interpolation.

Templates are assumed pre-aligned to the vault frame.  Matching is greedy
global-nearest: repeatedly take the closest (record, minutia) pair within
tolerance tau and remove both; with integer pixel coordinates and a fixed
tie order this is fully deterministic.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass

from .coding import Secret, coeffs_pass_crc, decode_secret
from .consensus import VaultIndex
from .quiz import apply_transform, recover_index
from .seeds import substream
from .simulate import Minutia, Template
from .vault import Vault, concat_coord, coord_shift

DEFAULT_BUDGET = 10_000
PARALLEL_CHUNK_CANDIDATES = 64


@dataclass(frozen=True)
class UnlockingSet:
    """Vault records matched one-to-one to template minutiae within tau."""

    pairs: tuple[tuple[int, Minutia], ...]  # (record index, matched minutia)
    tau: float

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class UnlockResult:
    success: bool
    secret: Secret | None
    coeffs: tuple[int, ...] | None
    candidates: int
    interpolations: int
    elapsed_s: float
    seed: int | None
    mode: str
    workers: int = 1


def build_unlocking_set(vault: Vault, template: Template, tau: float) -> UnlockingSet:
    """Greedy nearest-pair matching with distance <= tau.  Ties break on
    (distance, record index, minutia index), so the result is deterministic."""
    tau2 = tau * tau
    scored = []
    for ri, rec in enumerate(vault.records):
        for mi, m in enumerate(template.minutiae):
            d2 = (rec.x - m.x) ** 2 + (rec.y - m.y) ** 2
            if d2 <= tau2:
                scored.append((d2, ri, mi))
    scored.sort()
    used_r: set[int] = set()
    used_m: set[int] = set()
    pairs = []
    for _, ri, mi in scored:
        if ri in used_r or mi in used_m:
            continue
        used_r.add(ri)
        used_m.add(mi)
        pairs.append((ri, template.minutiae[mi]))
    pairs.sort()
    return UnlockingSet(tuple(pairs), tau)


def _candidate_points(vault: Vault, uset: UnlockingSet) -> list[tuple[int, int]]:
    """(X, true ordinate) pairs for the matched records.  In quiz mode the
    transform index is recovered from the matched minutia's orientation."""
    shift = coord_shift(vault.q)
    qp = vault.quiz_params()
    pts = []
    for ri, m in uset.pairs:
        rec = vault.records[ri]
        x_cat = concat_coord(rec.x, rec.y, shift)
        if qp is None:
            pts.append((x_cat, rec.value))
        else:
            j = recover_index(m.theta, rec.beta, qp.n)
            pts.append((x_cat, apply_transform(rec.value, j, qp)))
    return pts


def _consensus_search(index, points, mode, D, bits, rng, max_candidates):
    """(coeffs or None, candidates, interpolations)."""
    k = index.k
    u = len(points)
    candidates = interps = 0
    idx_range = range(u)
    for _ in range(max_candidates):
        candidates += 1
        chosen = rng.sample(idx_range, k)
        coeffs = index.field.interpolate([points[i] for i in chosen])
        interps += 1
        if mode == "crc":
            if coeffs_pass_crc(coeffs, bits):
                return coeffs, candidates, interps
        else:
            if index.count_hits(coeffs) >= D:
                return coeffs, candidates, interps
    return None, candidates, interps


_WORKER: dict = {}


def _init_worker(vault, points, mode, D, bits):
    _WORKER["index"] = VaultIndex(vault)
    _WORKER["state"] = (points, mode, D, bits)


def _run_chunk(label: str, n_candidates: int):
    points, mode, D, bits = _WORKER["state"]
    return _consensus_search(
        _WORKER["index"], points, mode, D, bits, random.Random(label), n_candidates
    )


def consensus_decode(
    vault: Vault,
    uset: UnlockingSet,
    mode: str = "threshold",
    D: int | None = None,
    bits: int | None = None,
    crc_encoded: bool | None = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    workers: int = 1,
) -> UnlockResult:
    """Iterate seeded-random k-subsets of the unlocking set until a candidate
    is accepted or the budget runs out.

    Threshold mode accepts when >= D vault records (vault-wide, not just the
    unlocking set) lie on the candidate's graph; default D = k+3.  CRC mode
    accepts when the candidate decodes with a valid checksum and needs the
    secret bit length.  ``crc_encoded`` tells the decoder whether the vault
    polynomial carries a CRC coefficient (defaults to mode == "crc").
    A failure result signals insufficient overlap, not corruption.
    """
    if mode not in ("threshold", "crc"):
        raise ValueError(f"unknown decode mode: {mode!r}")
    if mode == "crc" and bits is None:
        raise ValueError("crc mode needs the secret bit length")
    if crc_encoded is None:
        crc_encoded = mode == "crc"
    if mode == "threshold" and D is None:
        D = vault.k + 3

    start = time.perf_counter()
    points = _candidate_points(vault, uset)
    if len(points) < vault.k:
        return UnlockResult(
            False, None, None, 0, 0, time.perf_counter() - start, seed, mode, workers
        )

    index = VaultIndex(vault)
    if workers <= 1:
        coeffs, candidates, interps = _consensus_search(
            index, points, mode, D, bits, substream(seed, "unlock"), budget
        )
    else:
        coeffs = None
        candidates = interps = 0
        n_chunks = math.ceil(budget / PARALLEL_CHUNK_CANDIDATES)
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(vault, points, mode, D, bits),
        ) as pool:
            pending = {
                pool.submit(
                    _run_chunk,
                    f"{seed}/unlock-chunk{i}",
                    min(PARALLEL_CHUNK_CANDIDATES, budget - i * PARALLEL_CHUNK_CANDIDATES),
                )
                for i in range(n_chunks)
            }
            while pending:
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                stop = False
                for fut in done:
                    c, cand, ints = fut.result()
                    candidates += cand
                    interps += ints
                    if c is not None and coeffs is None:
                        coeffs = c
                        stop = True
                if stop:
                    for fut in pending:
                        fut.cancel()
                    break

    elapsed = time.perf_counter() - start
    if coeffs is None:
        return UnlockResult(False, None, None, candidates, interps, elapsed, seed, mode, workers)
    secret = None
    if bits is not None:
        try:
            secret = decode_secret(coeffs, bits, crc=crc_encoded)
        except ValueError:
            secret = None
    return UnlockResult(True, secret, coeffs, candidates, interps, elapsed, seed, mode, workers)


def unlock(
    vault: Vault,
    template: Template,
    mode: str = "threshold",
    D: int | None = None,
    bits: int | None = None,
    crc_encoded: bool | None = None,
    tau: float | None = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    workers: int = 1,
) -> UnlockResult:
    """Full verifier path: match, then decode.  Default tau = d/2 ties the
    match radius to the chaff minimum distance."""
    if tau is None:
        tau = vault.d / 2.0
    uset = build_unlocking_set(vault, template, tau)
    return consensus_decode(
        vault, uset, mode=mode, D=D, bits=bits, crc_encoded=crc_encoded,
        budget=budget, seed=seed, workers=workers,
    )


def result_to_dict(result: UnlockResult) -> dict:
    """Fixed-order report; wall time goes to the log stream, not the file."""
    out: dict = {"success": result.success}
    if result.secret is not None:
        out["secret_hex"] = result.secret.hex
    out["candidates"] = result.candidates
    out["interpolations"] = result.interpolations
    out["seed"] = result.seed
    return out
