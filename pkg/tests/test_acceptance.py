"""Acceptance suite: every release criterion at its pinned tolerance.

Each test prints one PASS/FAIL line (run pytest with -s or check the
captured output) and asserts the corresponding property from
liecubic.checks.  `liecubic verify` prints the same lines.
"""

import pytest

from liecubic import checks

CONSERVATION = list(checks.CONSERVATION_ALGEBRAS)


def _assert(result):
    print(result.line())
    assert result.passed, result.detail


def test_criterion_01_algebra_validity():
    """Structure constants of every catalog algebra valid to 1e-12."""
    _assert(checks.check_structure_validity())


def test_criterion_02_so3_example_numbers():
    """n=3, phase dim 8, m=1, r_g=1, count 3, reduced dimension 2."""
    _assert(checks.check_so3_counts())


@pytest.mark.parametrize("algebra", CONSERVATION)
def test_criterion_03_full_conservation(algebra):
    """H and J drift <= 1e-8 over T=10 at h=1e-3, 20 seeds; mu bit-exact."""
    _assert(checks.check_full_conservation(algebra))


@pytest.mark.parametrize("algebra", CONSERVATION)
def test_criterion_03_convergence_order(algebra):
    """Observed conservation order under step halving >= 3.5."""
    _assert(checks.check_convergence_order(algebra))


@pytest.mark.parametrize("algebra", CONSERVATION)
def test_criterion_04_reduced_conservation(algebra):
    """Each invariant drifts <= 1e-8; Casimir norm <= 1e-9 (raw flow)."""
    _assert(checks.check_reduced_conservation(algebra))


def test_criterion_05_commuting_diagram():
    """Projection and flow commute to 10 h^4 T on so3, 10 level-set states."""
    _assert(checks.check_commuting_diagram())


@pytest.mark.parametrize("algebra", ["so3", "so4"])
def test_criterion_06_el_equivalence(algebra):
    """Hamiltonian and third-order body formulations agree to 10 h^4 T."""
    _assert(checks.check_el_equivalence(algebra))


@pytest.mark.parametrize("algebra", CONSERVATION + ["so5", "abelian3"])
def test_criterion_07_bracket_isomorphism(algebra):
    """Pairing brackets close on the structure constants to 1e-10."""
    _assert(checks.check_bracket_isomorphism(algebra))


@pytest.mark.parametrize("algebra", CONSERVATION + ["so5"])
def test_criterion_08_independence(algebra):
    """Jacobian of the n+1 invariants has full row rank at 100 states."""
    _assert(checks.check_independence(algebra))


@pytest.mark.parametrize("algebra", CONSERVATION + ["so5"])
def test_criterion_09_classical_invariant_identities(algebra):
    """I1 = l1 and 2 I2 - sum l^2 = theta(X_theta) to 1e-10, 100 states."""
    _assert(checks.check_classical_identities(algebra))


def test_criterion_10_gradient_check():
    """Gradients match differencing; second-order convergence on curved probes."""
    _assert(checks.check_gradient_fd())


def test_criterion_11_abelian_degeneration():
    """Quadratic Y / cubic x to 1e-10; all invariant brackets <= 1e-12."""
    _assert(checks.check_abelian_degeneration())


def test_criterion_12_cli_determinism():
    """Identical config + seed gives byte-identical output files."""
    _assert(checks.check_cli_determinism())
