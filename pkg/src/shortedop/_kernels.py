"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``SHORTEDOP_PURE=1`` to force the pure lane (used by the benchmark and
the parity tests).
"""

import os

if os.environ.get("SHORTEDOP_PURE") == "1":
    from shortedop._purekernels import IMPL, QQi, descent_minimize, ff_echelon
else:
    try:
        from shortedop._fastkernels import (  # type: ignore[no-redef]
            IMPL,
            QQi,
            descent_minimize,
            ff_echelon,
        )
    except ImportError:
        from shortedop._purekernels import (  # type: ignore[no-redef]
            IMPL,
            QQi,
            descent_minimize,
            ff_echelon,
        )

__all__ = ["IMPL", "QQi", "ff_echelon", "descent_minimize"]
