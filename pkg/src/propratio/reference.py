"""Built-in reference study for the `table1` command.

A classic home-ownership study: the attribute is whether a household owns
its home, the auxiliary variable is household income in thousands of
dollars, observed on N = 40 households with samples of size n = 11.  Only
the published summary statistics are available (not the raw data), which
is exactly the input mode the closed-form theory needs.

REFERENCE_PRE holds the published percent-relative-efficiency figures the
computed values are compared against (tolerance REFERENCE_RTOL).  The
tier-3 rows assume the auxiliary scaling (a, b) = (1, 0); the published
source does not state its choice, and this one reproduces all columns
within the tolerance.  The residual ~0.1% gaps trace back to the 3-4
significant digits the summary statistics were published with.
"""

from __future__ import annotations

from .io import SummaryInput

__all__ = [
    "HOME_OWNERSHIP",
    "REFERENCE_PRE",
    "REFERENCE_RTOL",
    "T3_SETTINGS",
]

HOME_OWNERSHIP = SummaryInput(
    n=11,
    N=40,
    P=0.525,
    x_bar_pop=14.4,
    rho_pb=0.897,
    c_p=0.963,
    c_x=0.3085,
)

# t3 rows are labeled by their (alpha, beta) exponents; a = 1, b = 0.
T3_SETTINGS = ((1.0, 1.0), (1.0, 0.0), (0.0, 1.0))

REFERENCE_PRE = {
    "usual": 100.0,
    "t1": 189.384,
    "t2": 511.794,
    "t3(1,1)": 515.798,
    "t3(1,0)": 517.950,
    "t3(0,1)": 518.052,
}

REFERENCE_RTOL = 0.01
