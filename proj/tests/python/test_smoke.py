import math

import pytest

import hydropol as hp


def test_version():
    assert hp.__version__ == "0.1.0"


def test_wigner_values():
    assert hp.wigner3j(1, 1, 0, 0, 0, 0) == pytest.approx(-1.0 / math.sqrt(3.0), rel=1e-14)
    assert hp.wigner3j(1, 1, 1, 1, 1, 0) == 0.0
    assert hp.wigner6j(2, 1, 1, 0, 1, 1) == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert hp.wigner6j(0.5, 0.5, 1, 0.5, 0.5, 1) == pytest.approx(1.0 / 6.0, rel=1e-14)
    assert hp.clebsch_gordan(1, 0, 0.5, 0.5, 1.5, 0.5) == pytest.approx(
        math.sqrt(2.0 / 3.0), rel=1e-14)
    assert hp.reduced_rotation(1, 0, 0, math.pi / 3) == pytest.approx(0.5, rel=1e-13)
    with pytest.raises(ValueError):
        hp.wigner3j(1.2, 1, 1, 0, 0, 0)


def test_hydrogen_constants():
    assert hp.einstein_a("2P", "1S") == pytest.approx(6.265e8, rel=1e-3)
    assert hp.radial_dipole(2, 1, 1, 0) == pytest.approx(1.29027, rel=1e-5)
    assert hp.planck(20000.0, 2.466e15) == pytest.approx(5.96859e-7, rel=1e-5)


def test_dimension_anchor():
    model = hp.Model(n_max=4, fine_structure=True)
    assert model.dimension == 1416
    assert model.state_count == 60


def test_toy_oracle():
    rates = hp.toy_rates_from(hp.Illumination.diluted_planck(20000.0, 0.5))
    sol = hp.toy_solve(rates, 1e9)
    a, c = hp.toy_closed_form(rates, sol)
    assert sol.a_2p == pytest.approx(a, rel=1e-12)
    assert sol.c_2s2p == pytest.approx(c, rel=1e-12)
    assert sol.n_1s + sol.n_2s + sol.n_2p + sol.n_3p == pytest.approx(1.0, abs=1e-13)

    dark = hp.ToyRates()
    dark.r21 = 1e8
    with pytest.raises(Exception):
        hp.toy_solve(dark, 1e9)


def test_te_fixed_point():
    model = hp.Model(n_max=2, fine_structure=True,
                     illumination=hp.Illumination.planck_te(20000.0))
    sol = model.solve(e_vcm=[0.0, 0.0, 50.0], b_gauss=[0.0, 0.0, 500.0])
    assert sol.max_rel_multipole < 1e-10
    # Boltzmann ratio per state between the shells
    ratio = sol.term_population("2P") / (3.0 * sol.term_population("1S"))
    assert math.log(ratio) == pytest.approx(-5.92078, rel=1e-4)


def test_restricted_model_polarization():
    lyb = {"lyman-alpha": 0.0, "lyman-beta": 1e-9, "balmer-alpha": 0.0}
    model = hp.Model(n_max=3, fine_structure=False,
                     terms=["1S", "2S", "2P", "3P"],
                     illumination=hp.Illumination.per_line(lyb))
    sol = model.solve(e_vcm=[0.0, 0.0, 1000.0])
    stokes = sol.stokes("lyman-alpha", theta_deg=90.0)
    assert stokes["blp"] == pytest.approx(-1.0, abs=1e-9)
    assert stokes["bcp"] == pytest.approx(0.0, abs=1e-10)
    assert sol.trace == pytest.approx(1.0, abs=1e-12)


def test_unpolarized_without_fields():
    model = hp.Model(n_max=2, fine_structure=True)
    sol = model.solve()
    s = sol.stokes("lyman-alpha", theta_deg=90.0)
    assert abs(s["blp"]) < 1e-10
    assert abs(s["bcp"]) < 1e-10
    assert sol.a_2p == pytest.approx(0.0, abs=1e-14)
