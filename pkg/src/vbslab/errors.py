"""Exception types and resource caps shared across the package."""

import os


class VBSError(Exception):
    """Base class for all package errors."""


class DomainError(VBSError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ModelConditionError(VBSError, ValueError):
    """A model is inconsistent, e.g. multiplicities cannot match the spins."""


class ResourceError(VBSError, MemoryError):
    """A computation would exceed a configured size cap."""


DEFAULT_DIM_CAP = 1 << 16
DEFAULT_STATE_CAP = 1 << 24


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise DomainError(f"{name} must be a positive integer, got {raw!r}") from exc
    if value <= 0:
        raise DomainError(f"{name} must be a positive integer, got {raw!r}")
    return value


def dim_cap():
    """Largest Hilbert dimension for which dense operators are built."""
    return _env_int("VBSLAB_DIM_CAP", DEFAULT_DIM_CAP)


def state_cap():
    """Largest number of amplitudes a dense state vector may hold."""
    return _env_int("VBSLAB_STATE_CAP", DEFAULT_STATE_CAP)


def require_dim(dim, what="Hilbert space", cap=None):
    limit = dim_cap() if cap is None else cap
    if dim > limit:
        raise ResourceError(f"{what} dimension {dim} exceeds cap {limit}")


def require_state(length, what="state vector"):
    limit = state_cap()
    if length > limit:
        raise ResourceError(f"{what} length {length} exceeds cap {limit}")
