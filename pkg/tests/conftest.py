import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hforge.finab import FinAbGroup
from hforge.forms import BilinearForm, form_values_choices

settings.register_profile("hforge", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("hforge")

SMALL_ORDERS = [(), (2,), (3,), (4,), (2, 2), (6,), (2, 4), (3, 3)]


def groups(menu=SMALL_ORDERS):
    return st.sampled_from(menu).map(FinAbGroup)


@st.composite
def elements(draw, g: FinAbGroup):
    return tuple(draw(st.integers(0, n - 1)) for n in g.orders)


@st.composite
def bilinear_forms(draw, menu=((2,), (3,), (4,), (2, 2)), torus_menu=((2,), (3,), (4,))):
    """A random bilinear form, drawn by generator values (any choice is bilinear)."""
    gm = FinAbGroup(draw(st.sampled_from(menu)))
    g = FinAbGroup(draw(st.sampled_from(menu)))
    t = FinAbGroup(draw(st.sampled_from(torus_menu)))
    choices = form_values_choices(gm, g, t)
    values = [[list(draw(st.sampled_from(choices[i][j]))) for j in range(g.rank)] for i in range(gm.rank)]
    return BilinearForm(gm, g, t, values)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
