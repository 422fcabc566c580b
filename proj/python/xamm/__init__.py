"""Cross-chain AMM math and a deterministic multi-chain swap simulator."""

from ._core import (
    BISECTION_BUDGET,
    DEFAULT_TOLERANCE,
    DUST_FLOOR,
    AmmError,
    Curve,
    DomainError,
    InsufficientLiquidity,
    InsufficientShares,
    Inversion,
    NoConvergence,
    Report,
    Scenario,
    SlippageExceeded,
    SwapMessage,
    UnknownAsset,
    ValidationError,
    antiderivative,
    atomic_swap_out,
    decode_message,
    encode_message,
    initial_shares,
    invert_out,
    invert_out_detailed,
    load_scenario,
    oracle,
    parse_scenario,
    price,
    run_scenario,
    value_between,
)

__all__ = [name for name in dir() if not name.startswith("_")]
