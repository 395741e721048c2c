import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_hermitian, random_rotation
from thermalent.entanglement import concurrence
from thermalent.hamiltonians import (
    FamilySpec,
    PauliHamiltonian,
    build,
    canonical_form,
    derive_seed,
    family_in_h,
    lift_rotation,
    make_rng,
    sample_gue,
    sample_homogeneous,
    sample_separable_ground,
    split_local_nonlocal,
)
from thermalent.smatrix import I2, PAULIS, X, Y, Z, kron
from thermalent.thermal import thermal_state

seeds = st.integers(0, 2**32 - 1)


def coeffs(**terms):
    c = np.zeros((4, 4))
    for label, value in terms.items():
        c["IXYZ".index(label[0]), "IXYZ".index(label[1])] = value
    return c


class TestPauliHamiltonian:
    def test_matrix_round_trip(self, rng):
        m = random_hermitian(rng)
        assert np.allclose(PauliHamiltonian.from_matrix(m).matrix(), m)

    def test_immutable(self):
        h = PauliHamiltonian(np.eye(4))
        with pytest.raises(ValueError):
            h.c[0, 0] = 2.0

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            PauliHamiltonian(np.zeros((3, 3)))
        with pytest.raises(ValueError):
            PauliHamiltonian(np.full((4, 4), np.inf))

    def test_blocks(self):
        h = PauliHamiltonian(coeffs(XI=1, IY=2, ZX=3))
        assert np.allclose(h.field_a, [1, 0, 0])
        assert np.allclose(h.field_b, [0, 2, 0])
        assert h.interaction[2, 0] == 3
        assert h.has_local_terms()

    def test_arithmetic(self):
        a = PauliHamiltonian(coeffs(XX=1))
        b = PauliHamiltonian(coeffs(ZI=2))
        assert (a + b * 0.5) == PauliHamiltonian(coeffs(XX=1, ZI=1))
        assert (2 * a - a) == a
        assert hash(a) == hash(PauliHamiltonian(coeffs(XX=1)))


class TestBuild:
    def test_rosci_zero_field(self):
        assert np.array_equal(build(FamilySpec("rosci", {"J": 1, "h": 0})).c, coeffs(XX=-1, ZZ=1))

    def test_rosci_field(self):
        c = build(FamilySpec("rosci", {"h": 2.0})).c
        assert c[3, 0] == -2.0 and c[0, 3] == -2.0

    def test_rosci_matches_operator(self):
        J, h = 0.7, 1.3
        op = -J * (kron(X, X) - kron(Z, Z) + h * (kron(Z, I2) + kron(I2, Z)))
        assert np.allclose(build(FamilySpec("rosci", {"J": J, "h": h})).matrix(), op)

    def test_wang_zero_field(self):
        assert np.array_equal(build(FamilySpec("wang", {"J": 1, "h": 0})).c, coeffs(XX=1, YY=1))

    @pytest.mark.parametrize("J,h", [(1.0, 0.0), (1.0, 1.5), (-0.3, 2.0)])
    def test_anisotropic_reduces_to_wang(self, J, h):
        a = build(FamilySpec("anisotropic", {"J": J, "h": h, "gamma": 0.0}))
        assert a == build(FamilySpec("wang", {"J": J, "h": h}))

    def test_anisotropic(self):
        c = build(FamilySpec("anisotropic", {"h": 1.0, "gamma": 0.25})).c
        assert c[1, 1] == 1.25 and c[2, 2] == 0.75

    def test_misaligned(self):
        c = build(FamilySpec("misaligned", {"h": 2.0, "delta": 0.1})).c
        assert c[1, 0] == pytest.approx(0.2) and c[0, 1] == pytest.approx(0.2)
        assert c[3, 0] == 2.0

    def test_homogeneous(self):
        spec = FamilySpec("homogeneous", {"alpha": [1, 2, 3], "beta": [0.1, 0.2, 0.3], "h": 2.0})
        c = build(spec).c
        assert np.allclose(np.diag(c)[1:], [1, 2, 3])
        assert np.allclose(c[1:, 0], [0.2, 0.4, 0.6])
        assert np.allclose(c[0, 1:], c[1:, 0])

    def test_example11_constants(self):
        c = build(FamilySpec("example11")).c
        assert c[1, 1] == c[2, 2] == 0.006
        assert c[1, 2] == 0.03 and c[2, 1] == -0.03
        assert c[3, 2] == 1 / 10 and c[0, 2] == -1 / 10
        assert c[1, 3] == 1 / 14 and c[1, 0] == -1 / 14
        assert c[3, 3] == 1 / 7
        assert c[3, 0] == -1 / 4 and c[0, 3] == -1 / 5
        assert c[3, 1] == 0.02 and c[0, 1] == -0.02

    def test_explicit(self, rng):
        c = rng.standard_normal((4, 4))
        assert np.array_equal(build(FamilySpec("explicit", {"c": c})).c, c)

    def test_errors(self):
        with pytest.raises(ValueError, match="unknown family"):
            build(FamilySpec("nope", {}))
        with pytest.raises(ValueError, match="missing"):
            build(FamilySpec("anisotropic", {"h": 1.0}))
        with pytest.raises(ValueError, match="does not take"):
            build(FamilySpec("wang", {"h": 1.0, "gamma": 0.1}))
        with pytest.raises(ValueError, match="finite"):
            build(FamilySpec("wang", {"h": float("nan")}))

    def test_family_in_h(self):
        f = family_in_h(FamilySpec("wang", {"J": 2.0}))
        assert f(1.5) == build(FamilySpec("wang", {"J": 2.0, "h": 1.5}))


def bloch_residual(v, o):
    worst = 0.0
    for j in range(3):
        lhs = v @ PAULIS[j + 1] @ v.conj().T
        rhs = sum(o[j, k] * PAULIS[k + 1] for k in range(3))
        worst = max(worst, np.abs(lhs - rhs).max())
    return worst


class TestLiftRotation:
    def test_identity(self):
        v = lift_rotation(np.eye(3))
        assert np.allclose(v / v[0, 0], I2)

    def test_pi_about_z(self):
        o = np.diag([-1.0, -1.0, 1.0])
        v = lift_rotation(o)
        # Proportional to Z up to a global phase.
        phase = v[0, 0] / Z[0, 0]
        assert np.allclose(v, phase * Z)
        assert bloch_residual(v, o) < 1e-12

    def test_axis_angle_oracle(self):
        # exp(-i theta n.sigma / 2) rotates Bloch vectors about n by theta.
        theta = 0.7
        n = np.array([1.0, 2.0, -0.5])
        n /= np.linalg.norm(n)
        v_ref = np.cos(theta / 2) * I2 - 1j * np.sin(theta / 2) * (n[0] * X + n[1] * Y + n[2] * Z)
        k = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
        rot = np.eye(3) + np.sin(theta) * k + (1 - np.cos(theta)) * k @ k
        v = lift_rotation(rot.T)
        assert abs(abs(np.trace(v.conj().T @ v_ref)) - 2) < 1e-12

    @settings(max_examples=100, deadline=None)
    @given(seeds)
    def test_random_rotation(self, seed):
        o = random_rotation(np.random.default_rng(seed))
        v = lift_rotation(o)
        assert np.allclose(v @ v.conj().T, I2, atol=1e-12)
        assert bloch_residual(v, o) < 1e-9

    def test_rejects_reflection(self):
        with pytest.raises(ValueError, match="determinant"):
            lift_rotation(np.diag([1.0, 1.0, -1.0]))

    def test_rejects_non_orthogonal(self):
        with pytest.raises(ValueError, match="orthogonal"):
            lift_rotation(2 * np.eye(3))


class TestCanonicalForm:
    def test_already_canonical(self):
        cf = canonical_form(PauliHamiltonian(coeffs(XX=1, YY=1, ZZ=1)))
        assert np.allclose(cf.alpha, [1, 1, 1])
        assert np.allclose(np.abs(cf.local_unitary), np.eye(4))

    def test_rosci_alpha(self):
        cf = canonical_form(build(FamilySpec("rosci", {"J": 1, "h": 2.0})))
        assert np.allclose(np.abs(cf.alpha), [1, 1, 0])

    def test_negative_determinant_sign(self):
        cf = canonical_form(PauliHamiltonian(coeffs(XX=1, YY=2, ZZ=-3)))
        assert np.allclose(np.abs(cf.alpha), [3, 2, 1])
        assert cf.alpha[0] > 0 and cf.alpha[1] > 0 and cf.alpha[2] < 0

    def test_random(self, rng):
        for _ in range(1000):
            h = PauliHamiltonian.from_matrix(random_hermitian(rng))
            cf = canonical_form(h)
            u = cf.local_unitary
            rotated = PauliHamiltonian.from_matrix(u @ h.matrix() @ u.conj().T)
            r = rotated.interaction
            assert np.abs(r - np.diag(np.diag(r))).max() < 1e-9
            assert np.allclose(np.diag(r), cf.alpha, atol=1e-9)
            assert np.allclose(rotated.field_a, cf.field_a, atol=1e-9)
            assert np.allclose(rotated.field_b, cf.field_b, atol=1e-9)
            assert np.allclose(h.energies(), cf.hamiltonian(h.c[0, 0]).energies(), atol=1e-10)
            s = np.linalg.svd(h.interaction, compute_uv=False)
            assert abs((cf.alpha**2).sum() - (s**2).sum()) < 1e-10
            assert np.all(np.diff(np.abs(cf.alpha)) <= 1e-12)
            assert np.sign(cf.alpha[2]) in (0, np.sign(np.linalg.det(h.interaction)))

    def test_preserves_concurrence(self, rng):
        for _ in range(50):
            h = PauliHamiltonian.from_matrix(random_hermitian(rng))
            canon = canonical_form(h).hamiltonian()
            for t in (0.0, 0.3, 1.0, 3.0):
                assert abs(concurrence(thermal_state(h, t)) - concurrence(thermal_state(canon, t))) < 1e-9


class TestSplit:
    def test_wang(self):
        hn, hl = split_local_nonlocal(build(FamilySpec("wang", {"J": 1, "h": 1})))
        assert np.allclose(hl.matrix(), kron(Z, I2) + kron(I2, Z))
        assert np.allclose(hn.matrix(), kron(X, X) + kron(Y, Y))

    def test_pure_interaction(self):
        _, hl = split_local_nonlocal(PauliHamiltonian(coeffs(XX=1)))
        assert hl == PauliHamiltonian.zero()

    def test_recombination_exact(self):
        for i in range(20):
            h = PauliHamiltonian.from_matrix(sample_gue(derive_seed(3, i)))
            hn, hl = split_local_nonlocal(h)
            c = h.c.copy()
            c[0, 0] = 0
            assert np.array_equal((hn + hl).c, c)

    def test_idempotent_and_linear(self, rng):
        a = PauliHamiltonian(rng.standard_normal((4, 4)))
        b = PauliHamiltonian(rng.standard_normal((4, 4)))
        hn, hl = split_local_nonlocal(a)
        assert split_local_nonlocal(hn) == (hn, PauliHamiltonian.zero())
        assert split_local_nonlocal(hl) == (PauliHamiltonian.zero(), hl)
        s = split_local_nonlocal(a + b)
        assert s[0] == hn + split_local_nonlocal(b)[0]
        assert s[1] == hl + split_local_nonlocal(b)[1]


class TestSamplers:
    def test_derive_seed(self):
        assert derive_seed(1, 2) == derive_seed(1, 2)
        assert len({derive_seed(0, i) for i in range(1000)}) == 1000
        assert derive_seed(0, 1) != derive_seed(1, 0)

    def test_homogeneous_reproducible(self):
        assert sample_homogeneous(42) == sample_homogeneous(42)

    def test_homogeneous_statistics(self):
        draws = [sample_homogeneous(derive_seed(0, i)) for i in range(10_000)]
        alpha = np.array([d.params["alpha"] for d in draws])
        beta = np.array([d.params["beta"] for d in draws])
        assert np.all(np.abs(alpha.mean(axis=0) - 0.5) < 0.02)
        assert np.all((alpha >= 0) & (alpha < 1))
        assert np.all((beta > -1) & (beta < 1))
        assert all(d.params["J"] == 1.0 for d in draws)

    def test_gue_reproducible(self):
        assert np.array_equal(sample_gue(5), sample_gue(5))

    def test_gue_statistics(self):
        ms = np.array([sample_gue(derive_seed(1, i)) for i in range(10_000)])
        assert np.allclose(ms, ms.conj().transpose(0, 2, 1))
        diag = np.einsum("nii->ni", ms).real
        assert np.all(np.abs(diag.mean(axis=0)) < 0.05)
        assert abs(diag.var() - 1.0) < 0.1
        off = ms[:, 0, 1].real
        assert abs(off.var() - 0.5) < 0.05

    def test_make_rng_reproducible(self):
        assert make_rng(9).random() == make_rng(9).random()

    def test_separable_ground(self):
        for i in range(200):
            h = sample_separable_ground(derive_seed(2, i))
            m = h.matrix()
            assert abs(m[0, 0]) < 1e-14
            assert np.abs(m[:, 0]).max() < 1e-14
            e = np.linalg.eigvalsh(m)
            assert abs(e[0]) < 1e-12
            assert np.all((e[1:] > 0) & (e[1:] <= 1 + 1e-12))
            assert concurrence(thermal_state(h, 0.0)) < 1e-10
