"""Five-valued message-type algebra for erasure-based joint network decoding.

A decoder message summarizes what is known about the transmitted pair
(x_A, x_B) at one symbol position:

    1 = nothing known
    2 = x_A known
    3 = x_B known
    4 = x_A xor x_B known
    5 = everything known

Variable nodes accumulate knowledge (the operator is a lattice join);
check nodes keep only the knowledge common to all inputs (lattice meet).
Both operators are stored as explicit 5x5 lookup tables so that tests can
cross-check them against an independent lattice construction.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Iterable

import numpy as np


class MessageType(IntEnum):
    T1 = 1  # nothing known
    T2 = 2  # x_A known
    T3 = 3  # x_B known
    T4 = 4  # x_A xor x_B known
    T5 = 5  # both components known


# Explicit operator tables, indexed [a - 1, b - 1].
VAR_TABLE = np.array(
    [
        [1, 2, 3, 4, 5],
        [2, 2, 5, 5, 5],
        [3, 5, 3, 5, 5],
        [4, 5, 5, 4, 5],
        [5, 5, 5, 5, 5],
    ],
    dtype=np.int64,
)

CHK_TABLE = np.array(
    [
        [1, 1, 1, 1, 1],
        [1, 2, 1, 1, 2],
        [1, 1, 3, 1, 3],
        [1, 1, 1, 4, 4],
        [1, 2, 3, 4, 5],
    ],
    dtype=np.int64,
)


def var_combine(a: MessageType | int, b: MessageType | int) -> MessageType:
    """Combine two messages at a variable node (knowledge join)."""
    return MessageType(int(VAR_TABLE[int(a) - 1, int(b) - 1]))


def chk_combine(a: MessageType | int, b: MessageType | int) -> MessageType:
    """Combine two messages at a check node (knowledge meet)."""
    return MessageType(int(CHK_TABLE[int(a) - 1, int(b) - 1]))


def var_fold(types: Iterable[MessageType | int]) -> MessageType:
    """Left-fold var_combine over a non-empty sequence of types."""
    it = iter(types)
    try:
        out = MessageType(int(next(it)))
    except StopIteration:
        raise ValueError("var_fold requires a non-empty sequence") from None
    for t in it:
        out = var_combine(out, t)
    return out


def chk_fold(types: Iterable[MessageType | int]) -> MessageType:
    """Left-fold chk_combine over a non-empty sequence of types."""
    it = iter(types)
    try:
        out = MessageType(int(next(it)))
    except StopIteration:
        raise ValueError("chk_fold requires a non-empty sequence") from None
    for t in it:
        out = chk_combine(out, t)
    return out


def knows_xor(t: MessageType | int) -> bool:
    """True iff the type determines x_A xor x_B."""
    return int(t) in (4, 5)
