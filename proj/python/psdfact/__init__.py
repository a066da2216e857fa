"""PSD factorization of nonnegative matrices."""

from ._psdfact import (
    ConfigError,
    InitializationFailure,
    InvalidInput,
    cardano_minimize,
    factorize,
    fixtures,
    gen_cor,
    gen_ngon,
    gen_pn,
    gram,
    lambda_max,
    minimize_quartic,
    project_psd,
    relative_error,
    sym_eig,
    verify,
)

__all__ = [
    "ConfigError",
    "InitializationFailure",
    "InvalidInput",
    "cardano_minimize",
    "factorize",
    "fixtures",
    "gen_cor",
    "gen_ngon",
    "gen_pn",
    "gram",
    "lambda_max",
    "minimize_quartic",
    "project_psd",
    "relative_error",
    "sym_eig",
    "verify",
]
