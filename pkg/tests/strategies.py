"""Hypothesis strategies for instances."""

from fractions import Fraction

from hypothesis import strategies as st

from metareasoning.model import PiecewiseLinearProfile

small_fractions = st.builds(Fraction, st.integers(0, 12), st.integers(1, 4))
seeds = st.integers(0, 2**64 - 1)


@st.composite
def profiles(draw, max_breakpoints=4, concave=False):
    k = draw(st.integers(1, max_breakpoints))
    widths = draw(st.lists(st.builds(Fraction, st.integers(1, 6), st.integers(1, 2)), min_size=k - 1, max_size=k - 1))
    slopes = draw(st.lists(st.builds(Fraction, st.integers(0, 6), st.integers(1, 3)), min_size=k - 1, max_size=k - 1))
    if concave:
        slopes.sort(reverse=True)
    start = draw(st.builds(Fraction, st.integers(0, 3), st.integers(1, 2)))
    pts = [(Fraction(0), start)]
    for w, s in zip(widths, slopes):
        t, v = pts[-1]
        pts.append((t + w, v + s * w))
    return PiecewiseLinearProfile(tuple(pts))
