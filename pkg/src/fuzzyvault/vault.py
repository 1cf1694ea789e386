"""Vault assembly: genuine set construction, chaff clouds (uniform-random or
hexagonal-grid), record shuffling, serialization, and the two-finger split.

The attacker-visible object is a Vault: public parameters (q, k, d, grid
kind, quiz granularity) plus r records (x, y, Y[, beta]).  Everything an
experiment needs to evaluate an attack or unlock run lives in the
GroundTruth sidecar, which no attack code ever reads.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace

from .coding import Secret, encode_secret
from .field import DEFAULT_Q, PrimeField
from .geometry import HexLattice, PlacementError, PointGrid
from .quiz import QuizParams, encode_point, random_grid_beta
from .seeds import as_rng, substream
from .simulate import Minutia, Template, template_from_dict, template_to_dict

MAX_CHAFF_TRIES = 10_000

GRID_RANDOM = "random"
GRID_HEX = "hex"


def coord_shift(q: int) -> int:
    """Bit width of the y coordinate inside the concatenated abscissa.

    Derived from q alone so that an attacker can compute X = (x || y) from
    the public vault file: x << shift | y with shift = bit_length(q) // 2.
    For the default q = 65537 this is 8, matching 256-pixel frames.
    """
    return q.bit_length() // 2


def concat_coord(x: int, y: int, shift: int) -> int:
    return (x << shift) | y


@dataclass(frozen=True)
class VaultRecord:
    x: int
    y: int
    value: int                 # stored ordinate, serialized as "Y"
    beta: float | None = None  # orientation puzzle, present iff quiz mode


@dataclass(frozen=True)
class VaultParams:
    k: int
    t: int
    r: int
    q: int = DEFAULT_Q
    d: float = 11.0
    crc: bool = False
    grid: str = GRID_RANDOM
    quiz_n: int = 0
    width: int = 256
    height: int = 256

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.t < self.k:
            raise ValueError("genuine count t must be >= k")
        if self.grid not in (GRID_RANDOM, GRID_HEX):
            raise ValueError(f"unknown grid kind: {self.grid!r}")
        if self.grid == GRID_RANDOM and self.r < self.t:
            raise ValueError("vault size r must be >= t")
        if self.d <= 0:
            raise ValueError("minimum distance d must be positive")
        if self.quiz_n and self.quiz_n < 2:
            raise ValueError("quiz_n must be 0 (disabled) or >= 2")
        shift = coord_shift(self.q)
        if self.height > (1 << shift):
            raise ValueError(
                f"frame height {self.height} does not fit the {shift}-bit "
                f"coordinate embedding of q={self.q}"
            )
        if concat_coord(self.width - 1, self.height - 1, shift) >= self.q:
            raise ValueError(
                f"{self.width}x{self.height} coordinates do not embed into F_{self.q}"
            )


@dataclass(frozen=True)
class Vault:
    q: int
    k: int
    d: float
    grid: str
    quiz_n: int
    records: tuple[VaultRecord, ...]

    @property
    def r(self) -> int:
        return len(self.records)

    def quiz_params(self) -> QuizParams | None:
        return QuizParams(self.quiz_n, self.q) if self.quiz_n else None


@dataclass(frozen=True)
class GroundTruth:
    secret: Secret | None
    coeffs: tuple[int, ...]
    genuine_indices: tuple[int, ...]
    t: int
    template: Template
    seed: int | None


def make_genuine_set(
    template: Template, t: int, coeffs, q: int, rng: random.Random
) -> tuple[list[VaultRecord], list[Minutia]]:
    """Select t minutiae uniformly (seeded) and place them on the graph of
    the secret polynomial."""
    if t > len(template):
        raise ValueError(f"t={t} exceeds the {len(template)} available minutiae")
    field = PrimeField(q)
    shift = coord_shift(q)
    chosen = [template.minutiae[i] for i in rng.sample(range(len(template)), t)]
    records = []
    for m in chosen:
        x_cat = concat_coord(m.x, m.y, shift)
        if x_cat >= q:
            raise ValueError(f"minutia ({m.x}, {m.y}) does not embed into F_{q}")
        records.append(VaultRecord(m.x, m.y, field.poly_eval(coeffs, x_cat)))
    return records, chosen


def _off_graph_value(field: PrimeField, graph_value: int, rng: random.Random) -> int:
    v = rng.randrange(field.q - 1)
    return v + 1 if v >= graph_value else v


def gen_chaff_random(
    existing: list[tuple[int, int]],
    r: int,
    d: float,
    width: int,
    height: int,
    coeffs,
    q: int,
    rng: random.Random,
    max_tries: int = MAX_CHAFF_TRIES,
) -> list[VaultRecord]:
    """Rejection-sampled uniform chaff: r - len(existing) points, all pairwise
    and against-existing distances >= d, ordinates uniform off the graph."""
    field = PrimeField(q)
    shift = coord_shift(q)
    target = r - len(existing)
    if target < 0:
        raise ValueError("target vault size r is smaller than the existing point count")
    grid = PointGrid(max(d, 1.0))
    for x, y in existing:
        grid.add(x, y)
    records = []
    for _ in range(target):
        for _ in range(max_tries):
            x = rng.randrange(width)
            y = rng.randrange(height)
            if not grid.too_close(x, y, d):
                break
        else:
            raise PlacementError(
                f"packing saturated: placed {len(records)} of {target} chaff points "
                f"at d={d} in {width}x{height}",
                placed=len(records),
            )
        grid.add(x, y)
        graph_value = field.poly_eval(coeffs, concat_coord(x, y, shift))
        records.append(VaultRecord(x, y, _off_graph_value(field, graph_value, rng)))
    return records


def gen_chaff_hexgrid(
    minutiae: list[Minutia],
    d: float,
    width: int,
    height: int,
    coeffs,
    q: int,
    lattice_seed,
    rng: random.Random,
) -> tuple[list[VaultRecord], list[VaultRecord], HexLattice]:
    """Quantize the minutiae to a jittered hexagonal lattice and turn every
    remaining site into chaff, so the vault occupies the full site set.

    Returns (genuine records, chaff records, lattice).  Records store the
    nearest-pixel position of their site; snapping displacement is bounded
    by the cell circumradius d/sqrt(3) (measured in lattice coordinates).
    """
    field = PrimeField(q)
    shift = coord_shift(q)
    lattice = HexLattice(width, height, d, lattice_seed)
    if len(lattice.sites) < len(minutiae):
        raise PlacementError(
            f"lattice has only {len(lattice.sites)} sites for {len(minutiae)} minutiae",
            placed=0,
        )
    assignments = lattice.snap([(m.x, m.y) for m in minutiae])
    taken = {idx for idx, _ in assignments}

    def pixel(site):
        return round(site[0]), round(site[1])

    pixels = {pixel(s) for s in lattice.sites}
    if len(pixels) != len(lattice.sites):
        raise ValueError(f"lattice spacing d={d} too small for pixel quantization")

    genuine = []
    for idx, _ in assignments:
        x, y = pixel(lattice.sites[idx])
        genuine.append(VaultRecord(x, y, field.poly_eval(coeffs, concat_coord(x, y, shift))))
    chaff = []
    for idx, site in enumerate(lattice.sites):
        if idx in taken:
            continue
        x, y = pixel(site)
        graph_value = field.poly_eval(coeffs, concat_coord(x, y, shift))
        chaff.append(VaultRecord(x, y, _off_graph_value(field, graph_value, rng)))
    return genuine, chaff, lattice


def _apply_quiz(
    genuine: list[VaultRecord],
    chosen: list[Minutia],
    chaff: list[VaultRecord],
    params: QuizParams,
    rng: random.Random,
) -> tuple[list[VaultRecord], list[VaultRecord]]:
    out_genuine = []
    for rec, m in zip(genuine, chosen):
        j = rng.randrange(params.n)
        stored, beta = encode_point(m.theta, j, rec.value, params)
        out_genuine.append(replace(rec, value=stored, beta=beta))
    out_chaff = [replace(rec, beta=random_grid_beta(params.n, rng)) for rec in chaff]
    return out_genuine, out_chaff


def lock_polynomial(
    template: Template,
    coeffs,
    params: VaultParams,
    seed: int,
    secret: Secret | None = None,
) -> tuple[Vault, GroundTruth]:
    """Assemble a vault around an explicit polynomial (the building block of
    lock(); also used directly by small-field experiments that skip the
    16-bit secret packing)."""
    if len(coeffs) != params.k:
        raise ValueError(f"polynomial length {len(coeffs)} does not match k={params.k}")
    if template.width > params.width or template.height > params.height:
        raise ValueError("template frame exceeds the vault frame")

    genuine, chosen = make_genuine_set(
        template, params.t, coeffs, params.q, substream(seed, "select")
    )

    chaff_rng = substream(seed, "chaff")
    if params.grid == GRID_RANDOM:
        coords = [(rec.x, rec.y) for rec in genuine]
        for i, (x1, y1) in enumerate(coords):
            for x2, y2 in coords[i + 1 :]:
                if (x1 - x2) ** 2 + (y1 - y2) ** 2 < params.d**2:
                    raise ValueError(
                        f"locking minutiae ({x1},{y1}) and ({x2},{y2}) are closer "
                        f"than d={params.d}"
                    )
        chaff = gen_chaff_random(
            coords, params.r, params.d, params.width, params.height,
            coeffs, params.q, chaff_rng,
        )
    else:
        # Hex mode: the vault occupies the full lattice site set, so the
        # requested r is superseded by the site count.
        genuine, chaff, _ = gen_chaff_hexgrid(
            chosen, params.d, params.width, params.height,
            coeffs, params.q, substream(seed, "lattice"), chaff_rng,
        )

    if params.quiz_n:
        qp = QuizParams(params.quiz_n, params.q)
        genuine, chaff = _apply_quiz(genuine, chosen, chaff, qp, substream(seed, "quiz"))

    tagged = [(rec, True) for rec in genuine] + [(rec, False) for rec in chaff]
    substream(seed, "shuffle").shuffle(tagged)
    records = tuple(rec for rec, _ in tagged)
    genuine_indices = tuple(i for i, (_, is_genuine) in enumerate(tagged) if is_genuine)

    vault = Vault(params.q, params.k, params.d, params.grid, params.quiz_n, records)
    truth = GroundTruth(secret, tuple(coeffs), genuine_indices, params.t, template, seed)
    return vault, truth


def lock(
    template: Template, secret: Secret, params: VaultParams, seed: int
) -> tuple[Vault, GroundTruth]:
    coeffs = encode_secret(secret, params.k, crc=params.crc, q=params.q)
    return lock_polynomial(template, coeffs, params, seed, secret=secret)


def split_secret(secret: Secret, rng: random.Random | int) -> tuple[Secret, Secret]:
    """Two-of-two xor sharing: share1 uniform, share2 = share1 xor secret."""
    share1 = Secret.random(secret.bits, as_rng(rng))
    return share1, share1.xor(secret)


def lock_two_fingers(
    template1: Template,
    template2: Template,
    secret: Secret,
    params: VaultParams,
    seed: int,
) -> tuple[tuple[Vault, GroundTruth], tuple[Vault, GroundTruth]]:
    """Lock one xor share per finger; recovering the secret needs both vaults,
    so the analytic attack cost multiplies (log2 doubles at equal params)."""
    share1, share2 = split_secret(secret, substream(seed, "split"))
    locked1 = lock(template1, share1, params, seed * 2 + 1)
    locked2 = lock(template2, share2, params, seed * 2 + 2)
    return locked1, locked2


# ---------------------------------------------------------------------------
# Serialization.  The vault file is the attacker-visible interface; its key
# order is fixed and betas are written with 9 decimal digits so replays are
# byte-identical.


def _fmt_d(d: float) -> str:
    return str(int(d)) if float(d).is_integer() else repr(float(d))


def vault_to_json(vault: Vault) -> str:
    head = (
        f'{{"q": {vault.q}, "k": {vault.k}, "d": {_fmt_d(vault.d)}, '
        f'"grid": "{vault.grid}", "quiz_n": {vault.quiz_n}, "points": ['
    )
    lines = []
    for rec in vault.records:
        if vault.quiz_n:
            lines.append(
                f'{{"x": {rec.x}, "y": {rec.y}, "Y": {rec.value}, "beta": {rec.beta:.9f}}}'
            )
        else:
            lines.append(f'{{"x": {rec.x}, "y": {rec.y}, "Y": {rec.value}}}')
    return head + "\n" + ",\n".join(lines) + "\n]}\n"


def vault_from_json(text: str) -> Vault:
    obj = json.loads(text)
    quiz_n = obj["quiz_n"]
    records = []
    for p in obj["points"]:
        beta = p.get("beta")
        if quiz_n and beta is None:
            raise ValueError("quiz vault record missing beta")
        if not quiz_n and beta is not None:
            raise ValueError("non-quiz vault record carries beta")
        records.append(VaultRecord(p["x"], p["y"], p["Y"], beta))
    return Vault(obj["q"], obj["k"], obj["d"], obj["grid"], quiz_n, tuple(records))


def truth_to_json(truth: GroundTruth) -> str:
    obj = {
        "secret_hex": truth.secret.hex if truth.secret else None,
        "l": truth.secret.bits if truth.secret else None,
        "f_coeffs": list(truth.coeffs),
        "t": truth.t,
        "genuine_indices": list(truth.genuine_indices),
        "template": template_to_dict(truth.template),
        "seed": truth.seed,
    }
    return json.dumps(obj) + "\n"


def truth_from_json(text: str) -> GroundTruth:
    obj = json.loads(text)
    secret = None
    if obj["secret_hex"] is not None:
        secret = Secret.from_hex(obj["secret_hex"], obj["l"])
    return GroundTruth(
        secret=secret,
        coeffs=tuple(obj["f_coeffs"]),
        genuine_indices=tuple(obj["genuine_indices"]),
        t=obj["t"],
        template=template_from_dict(obj["template"]),
        seed=obj["seed"],
    )
