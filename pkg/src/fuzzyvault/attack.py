"""Brute-force vault attack, exhaustive spurious-polynomial counting, and
the multi-vault coordinate correlation attack.

The brute forcer never sees ground truth: it repeatedly draws a uniform
random k-subset of vault records (with replacement across trials, so the
expected trial count is exactly C(r,k)/C(t,k)), interpolates a candidate
polynomial, scans the vault for further graph hits and accepts once D
records lie on the graph (threshold rule) or the CRC coefficient checks
out.  For quiz vaults every subset is tried under all n**k transform-index
assignments.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from array import array
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass

from .coding import Secret, coeffs_pass_crc, decode_secret
from .consensus import VaultIndex
from .geometry import PointGrid
from .seeds import substream
from .vault import Vault

EXHAUSTIVE_LIMIT = 10**7
PARALLEL_CHUNK_TRIALS = 512


@dataclass(frozen=True)
class AttackReport:
    success: bool
    coeffs: tuple[int, ...] | None
    secret: Secret | None
    trials: int
    interpolations: int
    point_checks: int
    elapsed_s: float
    seed: int
    workers: int


def default_budget(r: int, t: int, k: int) -> int:
    """20x the expected trial count: failure odds under the geometric model
    are below (1 - 1/E)**(20 E) ~ e**-20."""
    expected = math.comb(r, k) / math.comb(t, k)
    return max(1, math.ceil(20 * expected))


def _decode_recovered(coeffs, bits, crc):
    if bits is None:
        return None
    try:
        return decode_secret(coeffs, bits, crc=crc)
    except ValueError:
        return None


def _canonical_quiz_candidate(index: VaultIndex, coeffs, hits: int):
    """Resolve the shift ambiguity of any-index matching.

    Under the any-index graph test, the systematic near-misses of the true
    polynomial are its constant-coefficient shifts by s*step, |s| < n (an
    assignment uniformly off by s moves every interpolation target by the
    same amount).  A shifted variant collects about t*(n-|s|)/n hits while
    the true one collects all t, so report the max-hits variant.
    """
    q = index.q
    n = len(index.offsets)
    step = index.offsets[1] if n > 1 else 0
    best, best_hits, extra = tuple(coeffs), hits, 0
    for s in range(-(n - 1), n):
        if s == 0:
            continue
        shifted = ((coeffs[0] + s * step) % q,) + tuple(coeffs[1:])
        h = index.count_hits(shifted)
        extra += index.r - index.k
        if h > best_hits:
            best, best_hits = shifted, h
    return best, extra


def _search(index: VaultIndex, mode: str, D: int | None, bits: int | None,
            rng: random.Random, max_trials: int, subsets=None):
    """Core trial loop.  Returns (coeffs or None, trials, interps, checks).

    ``subsets``: optional iterable of index tuples (exhaustive mode);
    otherwise subsets are drawn uniformly with replacement from rng.
    """
    k = index.k
    r = index.r
    scan_span = r - k
    trials = interps = checks = 0
    if index.offsets is None:
        assignments = None
    else:
        n = len(index.offsets)
        assignments = list(itertools.product(index.offsets, repeat=k))

    if subsets is None:
        idx_range = range(r)
        subsets = (rng.sample(idx_range, k) for _ in range(max_trials))
    for sub in subsets:
        if trials >= max_trials:
            break
        trials += 1
        if assignments is None:
            coeffs = index.interpolate_subset(sub)
            interps += 1
            if mode == "crc":
                if coeffs_pass_crc(coeffs, bits):
                    return coeffs, trials, interps, checks
            else:
                checks += scan_span
                if index.count_hits(coeffs) >= D:
                    return coeffs, trials, interps, checks
        else:
            q = index.q
            base = [index.ys[i] for i in sub]
            for offs in assignments:
                ys = [(y + o) % q for y, o in zip(base, offs)]
                coeffs = index.interpolate_subset(sub, ys)
                interps += 1
                if mode == "crc":
                    if coeffs_pass_crc(coeffs, bits):
                        return coeffs, trials, interps, checks
                else:
                    checks += scan_span
                    hits = index.count_hits(coeffs)
                    if hits >= D:
                        coeffs, extra = _canonical_quiz_candidate(index, coeffs, hits)
                        return coeffs, trials, interps, checks + extra
    return None, trials, interps, checks


# Worker-side state for the process pool, installed once per process.
_WORKER: dict = {}


def _init_worker(vault: Vault, mode: str, D: int | None, bits: int | None) -> None:
    _WORKER["index"] = VaultIndex(vault)
    _WORKER["args"] = (mode, D, bits)


def _run_chunk(label: str, n_trials: int):
    mode, D, bits = _WORKER["args"]
    return _search(_WORKER["index"], mode, D, bits, random.Random(label), n_trials)


def brute_force_attack(
    vault: Vault,
    mode: str = "threshold",
    D: int | None = None,
    bits: int | None = None,
    budget: int | None = None,
    t_assumed: int | None = None,
    workers: int = 1,
    seed: int = 0,
    exhaustive: bool = False,
) -> AttackReport:
    """Run the brute-force attack against an intercepted vault.

    ``mode``: "threshold" (accept at >= D graph hits, default D = k+3) or
    "crc" (accept when the candidate passes the CRC check; needs ``bits``).
    ``budget`` defaults to 20x the expected trial count, which requires the
    attacker to assume a genuine count ``t_assumed``.  ``exhaustive``
    iterates k-subsets in lexicographic order instead of sampling (tiny
    instances only).  With workers == 1 the report is bit-reproducible for
    a fixed seed; more workers split the budget into seeded chunks, so trial
    counters may vary between runs but any recovered secret is identical.
    """
    if mode not in ("threshold", "crc"):
        raise ValueError(f"unknown stop rule: {mode!r}")
    if mode == "crc" and bits is None:
        raise ValueError("crc mode needs the secret bit length")
    if mode == "threshold":
        if D is None:
            D = vault.k + 3
        if D > vault.r:
            raise ValueError(f"threshold D={D} exceeds vault size r={vault.r}")
    if budget is None:
        if exhaustive:
            budget = math.comb(vault.r, vault.k)
        elif t_assumed is not None:
            budget = default_budget(vault.r, t_assumed, vault.k)
        else:
            raise ValueError("provide a budget or an assumed genuine count t_assumed")

    start = time.perf_counter()
    index = VaultIndex(vault)
    decode_crc = mode == "crc"

    if exhaustive:
        subsets = itertools.combinations(range(vault.r), vault.k)
        coeffs, trials, interps, checks = _search(
            index, mode, D, bits, random.Random(0), budget, subsets=subsets
        )
    elif workers <= 1:
        rng = substream(seed, "attack")
        coeffs, trials, interps, checks = _search(index, mode, D, bits, rng, budget)
    else:
        coeffs = None
        trials = interps = checks = 0
        n_chunks = math.ceil(budget / PARALLEL_CHUNK_TRIALS)
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(vault, mode, D, bits),
        ) as pool:
            pending = {
                pool.submit(
                    _run_chunk,
                    f"{seed}/attack-chunk{i}",
                    min(PARALLEL_CHUNK_TRIALS, budget - i * PARALLEL_CHUNK_TRIALS),
                )
                for i in range(n_chunks)
            }
            while pending:
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                stop = False
                for fut in done:
                    c, tr, ints, chk = fut.result()
                    trials += tr
                    interps += ints
                    checks += chk
                    if c is not None and coeffs is None:
                        coeffs = c
                        stop = True
                if stop:
                    for fut in pending:
                        fut.cancel()
                    break

    elapsed = time.perf_counter() - start
    if coeffs is None:
        return AttackReport(False, None, None, trials, interps, checks, elapsed, seed, workers)
    secret = _decode_recovered(coeffs, bits, decode_crc)
    return AttackReport(True, coeffs, secret, trials, interps, checks, elapsed, seed, workers)


def count_matching_polynomials(vault: Vault, t_hits: int, k: int | None = None) -> int:
    """Exhaustively count coefficient vectors of length k whose graph contains
    at least t_hits vault records.  Exact; refuses when q**k > 10**7.

    Enumeration is per record: for each record (X, Y) and each choice of the
    k-1 non-constant coefficients, the constant term is forced, so the work
    is r * q**(k-1) increments instead of q**k * r evaluations.
    """
    if k is None:
        k = vault.k
    q = vault.q
    if k < 1:
        raise ValueError("k must be >= 1")
    if q**k > EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive enumeration limited to q**k <= {EXHAUSTIVE_LIMIT}")
    if t_hits <= 0:
        return q**k
    if t_hits > vault.r:
        return 0
    index = VaultIndex(vault)
    counts = array("H", bytes(2 * q**k))
    tails = q ** (k - 1)
    for x, y in zip(index.xs, index.ys):
        pows = [pow(x, j, q) for j in range(1, k)]
        for tail in range(tails):
            s = 0
            tval = tail
            for p in pows:
                s += (tval % q) * p
                tval //= q
            a0 = (y - s) % q
            counts[a0 + q * tail] += 1
    return sum(1 for c in counts if c >= t_hits)


def correlate_vaults(vaults: list[Vault], eps: float) -> list[tuple[int, int]]:
    """Coordinates of the first vault that have a point within eps in every
    other vault.  Against random chaff the genuine minutiae persist while
    chaff coincidences are rare; identical coordinate sets (shared hex
    lattices) neutralize the attack."""
    if not vaults:
        raise ValueError("need at least one vault")
    candidates = [(rec.x, rec.y) for rec in vaults[0].records]
    for other in vaults[1:]:
        grid = PointGrid(max(eps, 1.0))
        for rec in other.records:
            grid.add(rec.x, rec.y)
        candidates = [(x, y) for x, y in candidates if grid.any_within(x, y, eps)]
    return candidates


def report_to_dict(report: AttackReport) -> dict:
    """Report fields in the fixed serialization order.  Wall time is not
    part of the file (byte-identical replays); the CLI logs it separately."""
    out: dict = {"success": report.success}
    if report.secret is not None:
        out["secret_hex"] = report.secret.hex
    out["trials"] = report.trials
    out["interpolations"] = report.interpolations
    out["point_checks"] = report.point_checks
    out["seed"] = report.seed
    out["workers"] = report.workers
    return out
