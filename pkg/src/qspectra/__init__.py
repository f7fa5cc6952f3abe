"""Exact spectral images of q-deformed power sums and the identities they satisfy."""
from .exact import (
    MultiPoly,
    RationalFunction,
    TruncatedSeries,
    as_ratfun,
    diff_univar,
    poly_arith,
    poly_eval,
    ratfun_eq,
    series_arith,
    series_from_function,
    series_log_derivative,
)
from .partitions import Partition, ch_partitions, contains, in_hook, lambda_mn, lr_coeff, lr_expand
from .spectral import SpectralContext, p_image, schur_image, weights
from .symfunc import Alphabet, complete_sym, elem_sym, jacobi_trudi, q_number, super_series
from .verify import IDENTITIES, random_eval_check, verify_all, verify_identity

__version__ = "0.1.0"

__all__ = [
    "MultiPoly", "RationalFunction", "TruncatedSeries", "as_ratfun", "diff_univar", "poly_arith", "poly_eval",
    "ratfun_eq", "series_arith", "series_from_function", "series_log_derivative",
    "Partition", "ch_partitions", "contains", "in_hook", "lambda_mn", "lr_coeff", "lr_expand",
    "SpectralContext", "p_image", "schur_image", "weights",
    "Alphabet", "complete_sym", "elem_sym", "jacobi_trudi", "q_number", "super_series",
    "IDENTITIES", "random_eval_check", "verify_all", "verify_identity",
]
