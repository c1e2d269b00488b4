"""Truncated-SVD compression of 16-bit grayscale images."""

from ._lrk import (
    CompressionReport,
    ConvergenceError,
    DimensionError,
    FormatError,
    IntegrityError,
    InvalidArgument,
    LrkError,
    PolicyError,
    SvdFactorization,
    TruncatedModel,
    complete_basis,
    compression_ratio,
    energy_fraction,
    frobenius_error,
    load_model,
    make_report,
    model_file_size,
    numerical_rank,
    parse_spectrum_csv,
    power_two_norm,
    read_fits,
    read_pgm,
    reconstruct,
    save_model,
    select_rank,
    spectrum_csv,
    svd,
    svd_via_gram_oracle,
    synthetic_star_field,
    to_pixels,
    truncate,
    two_norm_error,
    weight_term,
    write_pgm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
