"""Shared exception hierarchy.

Every error raised by this package derives from MathWikibaseError, so
callers can catch one type at an API or CLI boundary.  Specific error
classes live next to the code that raises them; this module holds the
root plus errors shared by more than one module.
"""

from __future__ import annotations


class MathWikibaseError(Exception):
    """Base class for all errors raised by this package."""

    #: short machine-readable code used in HTTP and CLI error payloads
    code = "error"

    def payload(self) -> dict:
        return {"error": self.code, "message": str(self)}
