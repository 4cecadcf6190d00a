"""Kernel selection: compiled extension when built, pure Python otherwise.

Set ``CRAWLSIM_PURE=1`` to force the pure twin; the parity tests and the
benchmark import both twins explicitly.
"""

import os

if os.environ.get("CRAWLSIM_PURE"):
    from crawlsim._kernels._pykernels import (
        FNV_OFFSET_BASIS,
        FNV_PRIME,
        MASK64,
        SplitMix64,
        fnv1a64,
        split_alnum,
        strip_markup,
    )

    BACKEND = "python"
else:
    try:
        from crawlsim._kernels._ckernels import (
            FNV_OFFSET_BASIS,
            FNV_PRIME,
            MASK64,
            SplitMix64,
            fnv1a64,
            split_alnum,
            strip_markup,
        )

        BACKEND = "c"
    except ImportError:
        from crawlsim._kernels._pykernels import (
            FNV_OFFSET_BASIS,
            FNV_PRIME,
            MASK64,
            SplitMix64,
            fnv1a64,
            split_alnum,
            strip_markup,
        )

        BACKEND = "python"

__all__ = [
    "BACKEND",
    "FNV_OFFSET_BASIS",
    "FNV_PRIME",
    "MASK64",
    "SplitMix64",
    "fnv1a64",
    "split_alnum",
    "strip_markup",
]
