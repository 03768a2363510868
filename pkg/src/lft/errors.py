"""Exception hierarchy shared by all modules.

Every error carries a short machine-readable ``code`` so the CLI can emit
structured error objects and stable exit codes.
"""

from __future__ import annotations


class LftError(Exception):
    code = "error"


class ValidationError(LftError):
    """Malformed input: bad schema, bad series operands, bad job options."""

    code = "validation"


class BackendError(LftError):
    """Coefficient-ring failure: division by a non-unit, missing generator."""

    code = "backend"


class BranchError(LftError):
    """No usable root for the requested branch, or an inconsistent one."""

    code = "branch"


class PrecisionError(LftError):
    """A coefficient at or beyond the known window was requested."""

    code = "precision"


class UnsupportedError(LftError):
    """Input outside the supported range (regular piece, equal slopes...)."""

    code = "unsupported"
