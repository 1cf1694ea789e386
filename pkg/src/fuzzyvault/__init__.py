"""Fuzzy fingerprint vault laboratory.

Lock a secret behind a synthetic minutiae template, unlock it with a noisy
recapture, brute-force it without ground truth, and compare the measured
work against exact analytic cost estimators -- including the hex-grid
chaff, orientation-quiz and two-finger hardening variants.
"""

from .analysis import ComplexityEstimate, estimate, sweep, to_csv
from .attack import (
    AttackReport,
    brute_force_attack,
    correlate_vaults,
    count_matching_polynomials,
    default_budget,
)
from .coding import (
    CapacityError,
    CrcMismatch,
    DecodeError,
    Secret,
    capacity_bits,
    coeffs_pass_crc,
    crc16,
    decode_secret,
    encode_secret,
    min_elements,
)
from .consensus import VaultIndex
from .field import DEFAULT_Q, PrimeField, is_prime
from .geometry import HexLattice, PlacementError, SnappingError
from .presets import PRESETS, Preset, get_preset, vault_params
from .quiz import QuizParams, apply_transform, attack_bits, encode_point, recover_index
from .simulate import Minutia, NOISELESS, RecaptureModel, Template, gen_template, recapture
from .unlock import UnlockResult, UnlockingSet, build_unlocking_set, consensus_decode, unlock
from .vault import (
    GroundTruth,
    Vault,
    VaultParams,
    VaultRecord,
    concat_coord,
    coord_shift,
    gen_chaff_hexgrid,
    gen_chaff_random,
    lock,
    lock_polynomial,
    lock_two_fingers,
    make_genuine_set,
    split_secret,
    truth_from_json,
    truth_to_json,
    vault_from_json,
    vault_to_json,
)

__version__ = "0.1.0"
