"""Hand-transcribed reference matrices used by several test modules."""

import numpy as np

GRID_4 = """
x1 x2 -x3* -x4*
x2 x1 -x4* -x3*
x3 x4 x1* x2*
x4 x3 x2* x1*
"""

GRID_8 = """
x1 x2 x3 x4 -x5* -x6* -x7* -x8*
x2 x1 x4 x3 -x6* -x5* -x8* -x7*
x3 x4 x1 x2 -x7* -x8* -x5* -x6*
x4 x3 x2 x1 -x8* -x7* -x6* -x5*
x5 x6 x7 x8 x1* x2* x3* x4*
x6 x5 x8 x7 x2* x1* x4* x3*
x7 x8 x5 x6 x3* x4* x1* x2*
x8 x7 x6 x5 x4* x3* x2* x1*
"""


def parse_grid(text: str) -> list[list[str]]:
    return [line.split() for line in text.strip().splitlines()]


# relay matrices of the four-relay system
RELAYS_4 = np.array([
    np.eye(4),
    [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
    [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
], dtype=complex)
