"""Documentation fixtures: the eleven sporadic cyclotomic srg with C_0 a subgroup."""
from __future__ import annotations

from typing import NamedTuple

from sympy import totient

from .arith import mult_order


class SporadicRow(NamedTuple):
    N: int
    p: int
    f: int
    index: int     # [Z_N^* : <p>]


SPORADIC = (
    SporadicRow(11, 3, 5, 2),
    SporadicRow(19, 5, 9, 2),
    SporadicRow(35, 3, 12, 2),
    SporadicRow(37, 7, 9, 4),
    SporadicRow(43, 11, 7, 6),
    SporadicRow(67, 17, 33, 2),
    SporadicRow(107, 3, 53, 2),
    SporadicRow(133, 5, 18, 6),
    SporadicRow(163, 41, 81, 2),
    SporadicRow(323, 3, 144, 2),
    SporadicRow(499, 5, 249, 2),
)


def computed_index(row: SporadicRow) -> int:
    return int(totient(row.N)) // mult_order(row.p, row.N)


def table_rows():
    """Rows as dicts, each with the index recomputed from N and p."""
    return [{**row._asdict(), "index_computed": computed_index(row),
             "ord_N(p)": mult_order(row.p, row.N)} for row in SPORADIC]
