"""Item identifier helpers shared across modules."""

from __future__ import annotations

import re

QID_PATTERN = re.compile(r"^Q[0-9]{1,10}$")


def is_qid(value: str) -> bool:
    return bool(QID_PATTERN.match(value))


def qid_sort_key(qid: str) -> int:
    """Numeric ordering key: Q2111 sorts before Q11379."""
    return int(qid[1:])
