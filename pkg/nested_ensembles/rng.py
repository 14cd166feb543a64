"""Seeded random streams; every chain owns exactly one."""

import random

from .errors import InvalidConfig

SEED_LOW = -(2**63)
SEED_HIGH = 2**64


def check_seed(seed: int) -> None:
    if not SEED_LOW <= seed < SEED_HIGH:
        raise InvalidConfig(f"rng seed must fit in 64 bits, got {seed}")


def seeded_rng(seed: int) -> random.Random:
    check_seed(seed)
    return random.Random(seed)
