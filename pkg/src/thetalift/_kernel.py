"""Select the bracket state-sum kernel: compiled extension when built, pure
Python otherwise.  Both produce identical exact counts."""

try:
    from . import _bracket_c as _impl

    BACKEND = "c"
except ImportError:  # pragma: no cover - depends on build environment
    from . import _bracket_py as _impl

    BACKEND = "python"

bracket_counts = _impl.bracket_counts
