import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from skeweuler import (
    DomainError,
    Field,
    GasModel,
    Grid2D,
    ModelError,
    PhysicalState,
    SizeError,
    SkewState,
    VacuumStateError,
    from_skew,
    sound_speed,
    to_skew,
)

EPS = np.finfo(float).eps

positive = st.floats(min_value=1e-6, max_value=1e6)
# keep |sqrt(rho) * u| clear of the subnormal range, where the relative
# round-trip bound cannot hold
velocity = st.one_of(
    st.just(0.0),
    st.floats(min_value=1e-6, max_value=1e3),
    st.floats(min_value=-1e3, max_value=-1e-6),
)


def test_to_skew_identity_like():
    assert to_skew(PhysicalState(1, 0, 0, 1)) == SkewState(1, 0, 0, 1)


def test_to_skew_exact_squares():
    assert to_skew(PhysicalState(4, 1, 2, 9)) == SkewState(2, 2, 4, 3)


def test_round_trip_specific():
    s = PhysicalState(0.3, -1.7, 0.2, 2.5)
    back = from_skew(to_skew(s))
    for a, b in zip(s.as_array(), back.as_array()):
        assert abs(a - b) <= 1e-15 * max(1.0, abs(a))


@given(rho=positive, u=velocity, v=velocity, p=positive)
def test_round_trip_property(rho, u, v, p):
    s = PhysicalState(rho, u, v, p)
    back = from_skew(to_skew(s)).as_array()
    ref = s.as_array()
    assert np.all(np.abs(back - ref) <= 8 * EPS * np.abs(ref))


def test_from_skew_trivial_cases():
    assert from_skew(SkewState(1, 0, 0, 1)) == PhysicalState(1, 0, 0, 1)
    assert from_skew(SkewState(2, 2, 4, 3)) == PhysicalState(4, 1, 2, 9)


def test_from_skew_sign_invariance():
    a = from_skew(SkewState(1, 1, 1, 1))
    b = from_skew(SkewState(-1, -1, -1, 1))
    assert a == b == PhysicalState(1, 1, 1, 1)


@given(rho=positive, u=velocity, v=velocity, p=positive)
def test_sign_flip_invariance_property(rho, u, v, p):
    phi = to_skew(PhysicalState(rho, u, v, p))
    flipped = SkewState(-phi.phi1, -phi.phi2, -phi.phi3, phi.phi4)
    a = from_skew(phi).as_array()
    b = from_skew(flipped).as_array()
    assert np.array_equal(a, b)
    # phi4 sign flip too
    c = from_skew(SkewState(phi.phi1, phi.phi2, phi.phi3, -phi.phi4)).as_array()
    assert np.array_equal(a, c)


def test_domain_errors():
    with pytest.raises(DomainError):
        to_skew(PhysicalState(0.0, 0, 0, 1))
    with pytest.raises(DomainError):
        to_skew(PhysicalState(1.0, 0, 0, -2.0))
    with pytest.raises(VacuumStateError):
        from_skew(SkewState(0.0, 1, 1, 1))
    with pytest.raises(VacuumStateError):
        sound_speed(SkewState(0.0, 1, 1, 1), GasModel(1.4))


def test_sound_speed():
    gas = GasModel(1.4)
    c = sound_speed(SkewState(1, 0, 0, 1), gas)
    assert abs(c - np.sqrt(1.4)) < 1e-15
    # ratio invariance
    assert sound_speed(SkewState(2, 0, 0, 2), gas) == c
    # zero pressure
    assert sound_speed(SkewState(1, 3, 4, 0), gas) == 0.0


def test_gas_model_validation():
    with pytest.raises(ModelError):
        GasModel(1.0)
    with pytest.raises(ModelError):
        GasModel(2.0)
    with pytest.raises(ModelError):
        GasModel(1.4, alpha2=0.0)
    assert GasModel(1.4).beta2 == pytest.approx(0.2)


def test_grid_spacing_conventions():
    g = Grid2D(5, 9, topology_x="bounded", topology_y="periodic")
    assert g.hx == 0.25
    assert g.hy == pytest.approx(1.0 / 9.0)
    assert g.x()[-1] == 1.0
    assert g.y()[-1] < 1.0


def test_grid_size_errors():
    with pytest.raises(SizeError):
        Grid2D(2, 5)
    with pytest.raises(SizeError):
        Grid2D(5, 5, x0=1.0, x1=1.0)


def test_field_node_round_trip_bits():
    grid = Grid2D(4, 3)
    f = Field(grid)
    phi = SkewState(0.1 + 1e-17, -2.5, 3.75, 1.0 / 3.0)
    f.set_node(2, 1, phi)
    assert f.get_node(2, 1) == phi


def test_field_csv_round_trip():
    grid = Grid2D(4, 3)
    rng = np.random.default_rng(3)
    f = Field(grid, rng.uniform(0.5, 2.0, (4, 4, 3)))
    buf = io.StringIO()
    f.write_csv(buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "x,y,phi1,phi2,phi3,phi4"
    assert len(text.splitlines()) == 1 + grid.npoints
    back = Field.read_csv(grid, io.StringIO(text))
    assert np.array_equal(back.data, f.data)


def test_field_vacuum_check_reports_node():
    grid = Grid2D(4, 3)
    f = Field(grid, np.ones((4, 4, 3)))
    f.data[0, 2, 1] = 1e-14
    with pytest.raises(VacuumStateError, match=r"\(2, 1\)"):
        f.check_vacuum()
