import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wsdirac.errors import ImaginaryXi, NoBoundState, NoRealRoots, ParameterError
from wsdirac.potential import PekerisCoefficients, PekerisSource, PotentialParams
from wsdirac.spectra import (
    Kind,
    QuantumNumbers,
    SymmetryCase,
    epsilon_spin,
    free_limit_energy,
    kg_energy_roots,
    nonrel_energy,
    nonrel_swave_energy,
    pseudospin_direct_roots,
    pseudospin_energy_roots,
    scan_energy_roots,
    spectrum_table,
    spin_energy_roots,
    spin_equation_residual,
    swave_energy_roots,
    swave_equation_residual,
)

from conftest import A_SPIN, A_WIDTH, MASS, TABLE_Q, V0, spin_case, table_params

QCOL = {1.0: "q1", 2.0: "q2", -1.0: "qm1", -2.0: "qm2"}


def pseudo_case(Ap=5.0):
    return SymmetryCase("pseudospin", Ap, MASS)


# -- quantum numbers -------------------------------------------------------


@pytest.mark.parametrize("kappa,l,lt", [(-1, 0, 1), (1, 1, 0), (-2, 1, 2), (2, 2, 1), (-3, 2, 3)])
def test_quantum_number_derivations(kappa, l, lt):
    qn = QuantumNumbers(0, kappa)
    assert qn.l == l and qn.l_tilde == lt
    assert qn.omega == l * (l + 1) and qn.omega_tilde == lt * (lt + 1)


def test_quantum_number_validation():
    with pytest.raises(ParameterError):
        QuantumNumbers(0, 0)
    with pytest.raises(ParameterError):
        QuantumNumbers(-1, 1)
    with pytest.raises(ParameterError):
        SymmetryCase("spin", A_SPIN, 0.0)
    with pytest.raises(ValueError):
        SymmetryCase("isospin", A_SPIN, MASS)


# -- s-wave table ----------------------------------------------------------


@pytest.mark.parametrize(
    "q,n,expect",
    [
        (1.0, 0, (-10.197602, -19.996367)),
        (-1.0, 0, (-9.561001, -19.996589)),
        (2.0, 3, (13.119033, -19.942722)),
    ],
)
def test_swave_printed_examples(q, n, expect):
    sol = swave_energy_roots(table_params(q), n, A_SPIN, MASS)
    assert sol.energies == pytest.approx(expect, abs=1e-6)


def test_swave_table_reproduction(swave_reference):
    matches, worst = 0, 0.0
    for row in swave_reference:
        n = int(row["n"])
        for q in TABLE_Q:
            E1, E2 = swave_energy_roots(table_params(q), n, A_SPIN, MASS).energies
            for E, key in ((E1, f"E1_{QCOL[q]}"), (E2, f"E2_{QCOL[q]}")):
                worst = max(worst, abs(E - float(row[key])))
                matches += f"{E:.6f}" == row[key]
    assert worst <= 1e-5
    assert matches >= 80


def test_swave_matches_general_kappa_minus_one():
    for q in TABLE_Q:
        for n in range(11):
            a = swave_energy_roots(table_params(q), n, A_SPIN, MASS).energies
            b = spin_energy_roots(table_params(q), QuantumNumbers(n, -1), spin_case()).energies
            assert a == pytest.approx(b, rel=1e-12)


def test_swave_scan_cross_check():
    p = table_params(2.0)
    for n in (0, 4):
        f = lambda E: swave_equation_residual(p, n, A_SPIN, MASS, E)[0]
        scanned = scan_energy_roots(f, -25.0, 15.0)
        assert sorted(scanned) == pytest.approx(sorted(swave_energy_roots(p, n, A_SPIN, MASS).energies), abs=1e-10)


def test_physical_root_is_first_at_table_parameters():
    for q in TABLE_Q:
        sol = swave_energy_roots(table_params(q), 0, A_SPIN, MASS)
        assert sol.physical == 0 and sol.physical_root.epsilon_positive


@given(st.sampled_from(TABLE_Q), st.integers(0, 10), st.floats(0.2, 5.0))
def test_swave_sign_of_depth_invariance(q, n, v0):
    a = swave_energy_roots(PotentialParams(v0, q, A_WIDTH), n, A_SPIN, MASS).energies
    b = swave_energy_roots(PotentialParams(-v0, -q, A_WIDTH), n, A_SPIN, MASS).energies
    assert a == b


def test_no_real_roots():
    with pytest.raises(NoRealRoots):
        swave_energy_roots(PotentialParams(2.2, 1.0, 0.01), 0, A_SPIN, 1.0)


# -- general kappa ---------------------------------------------------------


def test_spin_fixtures(derived):
    for row in derived["spin_q1_R0_10a"]:
        sol = spin_energy_roots(table_params(1.0), QuantumNumbers(row["n"], row["kappa"]), spin_case())
        assert sorted(sol.energies) == pytest.approx(row["roots"], rel=1e-12)


def test_pseudospin_fixtures(derived):
    for row in derived["pseudospin_swave"]:
        p = PotentialParams(row["V0"], row["q"], A_WIDTH, 10 * A_WIDTH)
        sol = pseudospin_energy_roots(p, QuantumNumbers(row["n"], row["kappa"]), pseudo_case(row["A"]))
        assert sorted(sol.energies) == pytest.approx(row["roots"], rel=1e-12)


def test_kg_fixture(derived):
    fx = derived["kg_swave_qm2"]
    sol = kg_energy_roots(table_params(fx["q"]), QuantumNumbers(0, -1), mass=MASS)
    assert sorted(sol.energies) == pytest.approx(fx["roots"], rel=1e-12)


@pytest.mark.parametrize("q", TABLE_Q)
@pytest.mark.parametrize("n", [0, 2, 5])
def test_spin_omega_degeneracy(q, n):
    if q == -1.0:
        return  # Taylor matching is singular here
    p = table_params(q)
    a = spin_energy_roots(p, QuantumNumbers(n, 1), spin_case())
    b = spin_energy_roots(p, QuantumNumbers(n, -2), spin_case())
    assert a.energies == b.energies and a.physical == b.physical


@pytest.mark.parametrize("q", [1.0, 2.0, -2.0])
def test_pseudospin_omega_tilde_degeneracy(q):
    p = PotentialParams(-V0, q, A_WIDTH, 10 * A_WIDTH)
    for n in (0, 3):
        a = pseudospin_energy_roots(p, QuantumNumbers(n, 2), pseudo_case())
        b = pseudospin_energy_roots(p, QuantumNumbers(n, -1), pseudo_case())
        assert a.energies == b.energies


kappas = st.sampled_from([-3, -2, -1, 1, 2, 3])
qs = st.sampled_from([0.5, 1.0, 2.0, -2.0, -3.0])


@given(qs, st.integers(0, 8), kappas, st.floats(-4, 4).filter(lambda v: abs(v) > 0.1), st.floats(-8, 8))
def test_pseudospin_mapped_vs_direct(q, n, kappa, v0, Ap):
    p = PotentialParams(v0, q, A_WIDTH, 10 * A_WIDTH)
    qn = QuantumNumbers(n, kappa)
    try:
        mapped = pseudospin_energy_roots(p, qn, pseudo_case(Ap)).energies
    except (NoRealRoots, ImaginaryXi):
        return
    except Exception:
        mapped = None
    direct = pseudospin_direct_roots(p, qn, pseudo_case(Ap))
    if mapped is None:
        return
    for u, v in zip(mapped, direct):
        assert abs(u - v) <= 1e-10 * max(1.0, abs(u))


@given(qs, st.integers(0, 8), kappas, st.floats(-4, 4).filter(lambda v: abs(v) > 0.1), st.floats(-8, 8))
def test_mapping_involution(q, n, kappa, v0, A):
    # spin (V0, A, kappa) -> pseudospin (-V0, A' = -A, -kappa) -> energies negated
    p = PotentialParams(v0, q, A_WIDTH, 10 * A_WIDTH)
    try:
        spin = spin_energy_roots(p, QuantumNumbers(n, kappa), SymmetryCase("spin", A, MASS))
    except (NoRealRoots, ImaginaryXi):
        return
    except Exception:
        return
    back = pseudospin_energy_roots(
        PotentialParams(-v0, q, A_WIDTH, 10 * A_WIDTH),
        QuantumNumbers(n, -kappa),
        SymmetryCase("pseudospin", -A, MASS),
    )
    for u, v in zip(spin.energies, back.energies):
        assert abs(u + v) <= 1e-12 * max(1.0, abs(u))


@given(qs, st.integers(0, 6), kappas, st.floats(-4, 4).filter(lambda v: abs(v) > 0.1))
def test_kg_equals_spin_at_zero_difference(q, n, kappa, v0):
    p = PotentialParams(v0, q, A_WIDTH, 10 * A_WIDTH)
    qn = QuantumNumbers(n, kappa)
    try:
        kg = kg_energy_roots(p, qn, mass=MASS)
    except Exception:
        return
    sp = spin_energy_roots(p, qn, SymmetryCase("spin", 0.0, MASS))
    assert kg.energies == pytest.approx(sp.energies, rel=1e-12, abs=1e-12)


@given(qs, st.integers(0, 8), kappas, st.floats(-4, 4).filter(lambda v: abs(v) > 0.1), st.floats(-8, 8))
def test_quadratic_residual(q, n, kappa, v0, A):
    p = PotentialParams(v0, q, A_WIDTH, 10 * A_WIDTH)
    qn, sym = QuantumNumbers(n, kappa), SymmetryCase("spin", A, MASS)
    try:
        sol = spin_energy_roots(p, qn, sym)
    except Exception:
        return
    for E in sol.energies:
        res, lhs = spin_equation_residual(p, qn, sym, E)
        assert abs(res) <= 1e-9 * max(1.0, abs(lhs))


def test_swave_quadratic_residual():
    for q in TABLE_Q:
        p = table_params(q)
        for n in range(11):
            for E in swave_energy_roots(p, n, A_SPIN, MASS).energies:
                res, lhs = swave_equation_residual(p, n, A_SPIN, MASS, E)
                assert abs(res) <= 1e-9 * max(1.0, abs(lhs))


def test_imaginary_xi():
    d = PekerisCoefficients(1.0, 0.0, -1e6, PekerisSource.TAYLOR)
    with pytest.raises(ImaginaryXi):
        spin_energy_roots(table_params(1.0), QuantumNumbers(0, 2), spin_case(), d)


def test_wrong_symmetry_kind():
    with pytest.raises(ParameterError):
        spin_energy_roots(table_params(1.0), QuantumNumbers(0, -1), pseudo_case())
    with pytest.raises(ParameterError):
        pseudospin_energy_roots(table_params(1.0), QuantumNumbers(0, -1), spin_case())


# -- limits ----------------------------------------------------------------


def test_free_limit_anchors():
    m = 15.0
    Ep, Em = free_limit_energy(0, m, 1.0 / m)
    assert Ep == pytest.approx(math.sqrt(3) / 2 * m, rel=1e-12)
    assert Em == -Ep
    assert free_limit_energy(1, m, 1.0 / m) == (0.0, 0.0)
    for n in (2, 3, 7):
        with pytest.raises(NoBoundState):
            free_limit_energy(n, m, 1.0 / m)


@pytest.mark.parametrize("q", TABLE_Q)
@pytest.mark.parametrize("n", [0, 1, 4])
def test_vanishing_depth_continuity(q, n):
    p = PotentialParams(1e-8, q, A_WIDTH)
    roots = sorted(swave_energy_roots(p, n, 0.0, MASS).energies)
    free = sorted(free_limit_energy(n, MASS, A_WIDTH))
    assert roots == pytest.approx(free, abs=1e-6)


def test_nonrel_fixture(derived):
    E = nonrel_energy(PotentialParams(V0, 1.0, A_WIDTH), 0, 0, 1.0)
    assert E.E == pytest.approx(derived["nonrel_swave_q1_n0"], rel=1e-13)
    assert E.bound


@given(st.floats(-5, 5).filter(lambda v: abs(v) > 1e-3), qs, st.floats(0.3, 3), st.integers(0, 10), st.floats(0.2, 5))
def test_nonrel_l0_reduction(v0, q, a, n, mu):
    general = nonrel_energy(PotentialParams(v0, q, a), n, 0, mu).E
    swave = nonrel_swave_energy(v0, q, a, n, mu)
    assert general == pytest.approx(swave, rel=1e-12)


@given(st.floats(-5, 5).filter(lambda v: abs(v) > 1e-3), qs, st.floats(0.3, 3), st.integers(0, 10), st.floats(0.2, 5))
def test_nonrel_mapping_identity(v0, q, a, n, mu):
    # substitute m - E -> -E_nr and (m + E - A)/hc^2 -> 2 mu into the s-wave condition
    k = 2.0 * mu
    br = a * v0 * k / (q * (n + 1)) + (n + 1) / a
    E_nr = -br * br / (4.0 * k)
    assert E_nr == pytest.approx(nonrel_swave_energy(v0, q, a, n, mu), rel=1e-10)


def test_nonrel_rejects_bad_l():
    with pytest.raises(ParameterError):
        nonrel_energy(table_params(1.0), 0, -1, 1.0)


def test_epsilon_fixture(derived):
    fx = derived["epsilon_q1_n0"]
    eps = epsilon_spin(table_params(1.0), QuantumNumbers(0, -1), spin_case(), fx["E"])
    assert eps == pytest.approx(fx["value"], rel=1e-13)


def test_epsilon_continuum_edge_and_degeneracy():
    p = table_params(1.0)
    assert epsilon_spin(p, QuantumNumbers(0, -1), SymmetryCase("spin", 0.0, MASS), MASS) == 0.0
    a = epsilon_spin(p, QuantumNumbers(0, 1), spin_case(), -9.8)
    b = epsilon_spin(p, QuantumNumbers(0, -2), spin_case(), -9.8)
    assert a == b


# -- tables ----------------------------------------------------------------


def test_spectrum_table_ordering_and_determinism():
    p = table_params(2.0)
    t1 = spectrum_table(p, spin_case(), 3, [2, -1, 1])
    t2 = spectrum_table(p, spin_case(), 3, [2, -1, 1], workers=4)
    assert [(r.n, r.kappa) for r in t1] == [(n, k) for n in range(4) for k in (-1, 1, 2)]
    assert t1 == t2
    assert repr(t1) == repr(spectrum_table(p, spin_case(), 3, [2, -1, 1]))


def test_spectrum_table_records_errors():
    rows = spectrum_table(table_params(-1.0), spin_case(), 1, [-1, 1])
    assert rows[0].solution is not None
    assert rows[1].error.startswith("SingularSystem")


def test_spectrum_table_validation():
    with pytest.raises(ParameterError):
        spectrum_table(table_params(1.0), spin_case(), 2, [])
    with pytest.raises(ParameterError):
        spectrum_table(table_params(1.0), spin_case(), 2, [0, 1])
    with pytest.raises(ParameterError):
        spectrum_table(table_params(1.0), spin_case(), -1, [1])


def test_missing_radius_warns():
    p = PotentialParams(V0, 1.0, A_WIDTH)
    with pytest.warns(UserWarning, match="R0 not given"):
        sol = spin_energy_roots(p, QuantumNumbers(0, 2), spin_case())
    assert sol.kind is Kind.SPIN
