"""Built-in parameter bundles from published fingerprint-vault designs,
plus the literature-reported complexity figures the estimator annotates."""

from __future__ import annotations

from dataclasses import dataclass

from .vault import VaultParams


@dataclass(frozen=True)
class Preset:
    name: str
    q: int
    k: int
    t: int
    r: int
    D: int
    d: float
    crc: bool
    quiz_n: int
    secret_bits: int
    # complexity figures quoted in the literature for this parameter family
    # (bits); None when no figure is on record.
    reported_attack_bits: float | None = None
    reported_threshold_bits: float | None = None
    reported_security_bits: float | None = None
    reported_note: str = ""


PRESETS: dict[str, Preset] = {
    "clancy": Preset(
        name="clancy",
        q=65537, k=14, t=38, r=313, D=17, d=11.0, crc=False, quiz_n=0,
        secret_bits=112,
        reported_attack_bits=50.0,
        reported_threshold_bits=69.0,
        reported_security_bits=44.0,
        reported_note=(
            "literature reports ~2^50 brute-force work, a ~2^44 security "
            "factor, and O(2^69) for the threshold criterion at this family"
        ),
    ),
    "uludag": Preset(
        name="uludag",
        q=65537, k=8, t=25, r=200, D=11, d=11.0, crc=True, quiz_n=0,
        secret_bits=112,
        reported_attack_bits=36.0,
        reported_note="literature reports ~2^36 brute-force work",
    ),
    "small-attack": Preset(
        name="small-attack",
        q=65537, k=6, t=15, r=60, D=9, d=11.0, crc=False, quiz_n=0,
        secret_bits=96,
    ),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r} (available: {', '.join(sorted(PRESETS))})"
        ) from None


def vault_params(preset: Preset, **overrides) -> VaultParams:
    base = dict(
        k=preset.k, t=preset.t, r=preset.r, q=preset.q, d=preset.d,
        crc=preset.crc, quiz_n=preset.quiz_n,
    )
    base.update(overrides)
    return VaultParams(**base)
