# -*- coding: utf-8 -*-

__version__ = "1.0.0"

# Ignore errors because we are in fact importing these values to re-export them
from .word import Letter, Word, UNIT, format_word  # noqa: F401
from .parse import parse_word  # noqa: F401
from .matpoly import MatPoly  # noqa: F401
from .factor import (  # noqa: F401
    BlockDiagonal, DegreeOneFactor, Factorization, absorb_scalars, factor,
)
from .repnorm import (  # noqa: F401
    EnsembleKind, EnsembleSpec, Representation, evaluate, operator_norm,
    proxy_norm,
)
from .balance import BalanceConfig, balance, probe_m  # noqa: F401
from .transfer import (  # noqa: F401
    TransferConfig, run_probability_variant, run_transfer, run_transfer_sa,
)
