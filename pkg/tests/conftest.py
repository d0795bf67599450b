import math

from hypothesis import strategies as st

from anchorloc.geom import Point2D

coord = st.floats(-500, 500, allow_nan=False)
points = st.builds(Point2D, coord, coord)
angles = st.floats(0, 2 * math.pi, allow_nan=False)


def close(p, q, tol=1e-9):
    return math.hypot(p.x - q.x, p.y - q.y) <= tol


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for tag in sorted(RESULTS, key=lambda t: int(t[1:])):
            terminalreporter.write_line(RESULTS[tag])
