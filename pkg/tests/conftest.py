import random
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from walshlab.dyadic import ConjugateParameter
from walshlab.spectral import CylinderFunction

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

bitlists = st.lists(st.integers(0, 1), max_size=12)


@st.composite
def parameters(draw):
    pre = tuple(draw(bitlists))
    per = tuple(draw(st.lists(st.integers(0, 1), max_size=5)))
    if per and all(per):
        per = per + (0,)
    return ConjugateParameter(pre, per)


@st.composite
def cylinder_functions(draw, depth=None, max_depth=6):
    d = draw(st.integers(0, max_depth)) if depth is None else depth
    nums = draw(st.lists(st.integers(-20, 20), min_size=1 << d, max_size=1 << d))
    den = draw(st.sampled_from([1, 2, 3, 8]))
    return CylinderFunction.from_values(d, [Fraction(v, den) for v in nums])


def seeded_function(rng: random.Random, depth: int) -> CylinderFunction:
    return CylinderFunction.from_values(
        depth, [Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3, 4))) for _ in range(1 << depth)])
