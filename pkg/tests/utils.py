"""
Assertion helpers shared by the tests.
"""


def assert_close(actual, expected, rel, msg=""):
    "actual within rel (relative) of expected."
    gap = abs(actual - expected)
    assert gap <= rel * abs(expected), (
        f"{msg} {actual} vs {expected}, rel gap {gap / abs(expected):.3g}"
    )


def assert_small(value, bound, msg=""):
    "|value| <= bound."
    assert abs(value) <= bound, f"{msg} |{value}| > {bound}"


def assert_matches(fv, expected, floor_rel=0.0, factor=3.0):
    """
    FunctionalValue fv agrees with expected within factor errors, or
    within floor_rel of expected, whichever is larger.
    """
    allowed = max(factor * fv.err, floor_rel * abs(expected))
    gap = abs(fv.value - expected)
    assert gap <= allowed, f"{fv!r} vs {expected}: gap {gap:.3g} > {allowed:.3g}"


def assert_decreasing(values, slack=0.0, msg=""):
    "Each value at most the previous one plus slack."
    for before, after in zip(values, values[1:]):
        assert after <= before + slack, f"{msg} {after} > {before} in {values}"

