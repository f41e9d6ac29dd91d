"""Almost complex admissibility, the Z subspaces, and integrability."""

from fractions import Fraction

import pytest

from liecheck import (
    GaussianRational,
    HomogeneousPair,
    LieAlgebra,
    LinearOperator,
    Subspace,
    check_ac_admissible,
    check_integrable,
    complexify_subspace,
    compute_z_spaces,
    conjugate_subspace,
    make_subalgebra,
    operator_ad,
    operator_from_rules,
    operator_left_mult,
    split_diagnostics,
    subspace_intersection,
    subspace_sum,
)
from liecheck.errors import (
    MissingComplement,
    NotACAdmissible,
    NotAdmissible,
    NotSplitACAdmissible,
)

from conftest import grassmann_center_vector, sphere_family, unit_matrix

I = GaussianRational(0, 1)


def _nil4_pair():
    z = (Fraction(0),) * 4
    structure = [[z] * 4 for _ in range(4)]
    structure[0][1] = (0, 0, 1, 0)
    structure[1][0] = (0, 0, -1, 0)
    alg = LieAlgebra("nil4", ("x", "y", "z", "w"), structure)
    triv = make_subalgebra(alg, [alg.zero_vector()])
    whole = Subspace.full(4)
    return alg, HomogeneousPair(alg, triv, m=whole)


def test_ac_admissible_rotation(so3, so3_pair):
    assert check_ac_admissible(so3_pair, operator_ad(so3, so3.basis_vector("k0")))


def test_ac_admissible_family_iff_unit_beta(so3, so3_pair):
    for alpha in (-1, 0, 1):
        for beta in (-2, -1, 0, 1, 2):
            op = sphere_family(so3, alpha, beta, -beta)
            assert check_ac_admissible(so3_pair, op) == (beta in (-1, 1)), \
                (alpha, beta)


def test_ac_admissible_identity_fails(so3_pair):
    assert not check_ac_admissible(so3_pair, LinearOperator.identity(so3_pair.alg))


def test_ac_admissible_identity_when_k_is_everything(so3):
    k = make_subalgebra(so3, [so3.basis_vector(i) for i in range(3)])
    pair = HomogeneousPair(so3, k)
    assert check_ac_admissible(pair, LinearOperator.identity(so3))


def test_ac_requires_admissible(so3, so3_pair):
    with pytest.raises(NotAdmissible):
        check_ac_admissible(so3_pair, sphere_family(so3, 0, 1, 1))


def test_z_spaces_rotation(so3, so3_pair):
    op = operator_ad(so3, so3.basis_vector("k0"))
    z_plus, z_minus = compute_z_spaces(so3_pair, op)
    # solved by hand over Q(i): v2 = i v1, v0 free
    expected_plus = Subspace.from_vectors(3, [
        (GaussianRational(1), GaussianRational(0), GaussianRational(0)),
        (GaussianRational(0), GaussianRational(1), I),
    ]).over_gaussian()
    assert z_plus == expected_plus
    assert conjugate_subspace(z_plus) == z_minus
    assert z_plus.dim == 2 and z_minus.dim == 2


def test_z_space_trivial_cases(so3):
    # J = 0 with k = 0: Z+ is the kernel of -i Id, which is trivial.
    triv = make_subalgebra(so3, [so3.zero_vector()])
    pair0 = HomogeneousPair(so3, triv)
    z_plus, z_minus = compute_z_spaces(pair0, LinearOperator.zero(so3))
    assert z_plus.dim == 0 and z_minus.dim == 0
    # k = g: everything lands in k_C whatever J does.
    k_all = make_subalgebra(so3, [so3.basis_vector(i) for i in range(3)])
    pair1 = HomogeneousPair(so3, k_all)
    z_plus, z_minus = compute_z_spaces(pair1, LinearOperator.identity(so3))
    assert z_plus.dim == 3 and z_minus.dim == 3


def test_kc_inside_z_plus_and_conjugation(so3, so3_pair, u4, u4_pair):
    cases = [
        (so3_pair, operator_ad(so3, so3.basis_vector("k0"))),
        (so3_pair, sphere_family(so3, 1, 1, -1)),
        (so3_pair, sphere_family(so3, -1, 2, -2)),
        (u4_pair, operator_ad(u4, grassmann_center_vector(u4))),
    ]
    for pair, op in cases:
        z_plus, z_minus = compute_z_spaces(pair, op)
        kc = complexify_subspace(pair.k.space)
        assert z_plus.contains_subspace(kc)
        assert conjugate_subspace(z_plus) == z_minus
        assert conjugate_subspace(z_minus) == z_plus


def test_integrable_rotation(so3, so3_pair):
    report = check_integrable(so3_pair, operator_ad(so3, so3.basis_vector("k0")))
    assert report.integrable and report.z_plus_closed and report.nijenhuis_verdict
    assert report.z_plus.dim == 2
    # the quotient representative is e1 + i e2
    assert report.z_plus_mod_k == (
        (GaussianRational(0), GaussianRational(1), I),
    )
    assert report.split is not None and report.split.all_hold


def test_family_unit_beta_integrable_and_conjugate(so3, so3_pair):
    rep_minus = check_integrable(so3_pair, sphere_family(so3, 0, -1, 1))
    rep_plus = check_integrable(so3_pair, sphere_family(so3, 1, 1, -1))
    assert rep_minus.integrable and rep_plus.integrable
    # beta = -1 matches the rotation structure; beta = +1 is its conjugate
    ad_rep = check_integrable(so3_pair, operator_ad(so3, so3.basis_vector("k0")))
    assert rep_minus.z_plus == ad_rep.z_plus
    assert rep_plus.z_plus == conjugate_subspace(ad_rep.z_plus)


def test_not_ac_admissible_raises(so3, so3_pair):
    with pytest.raises(NotACAdmissible):
        check_integrable(so3_pair, sphere_family(so3, 0, 2, -2))


def test_grassmann_integrable(u4, u4_pair):
    op = operator_ad(u4, grassmann_center_vector(u4))
    report = check_integrable(u4_pair, op)
    assert report.integrable
    assert report.z_plus.dim == 12
    # Z+ = k_C + the upper-right single-entry block: a13-like combinations
    # (a - i s)/2 reduce to plain matrix units E_jk.
    expected = list(complexify_subspace(u4_pair.k.space).vectors())
    for j in (1, 2):
        for k in (3, 4):
            vec = [GaussianRational(0)] * 16
            vec[u4.index_of(f"a{j}{k}")] = GaussianRational(Fraction(1, 2))
            vec[u4.index_of(f"s{j}{k}")] = GaussianRational(0, Fraction(-1, 2))
            expected.append(tuple(vec))
    assert report.z_plus == Subspace.from_vectors(16, expected).over_gaussian()
    assert report.split is not None and report.split.all_hold


def test_nilpotent_twisted_structure_not_integrable():
    alg, pair = _nil4_pair()
    jtwist = operator_from_rules(alg, {
        "x": alg.basis_vector("z"),
        "z": tuple(-a for a in alg.basis_vector("x")),
        "y": alg.basis_vector("w"),
        "w": tuple(-a for a in alg.basis_vector("y")),
    })
    assert check_ac_admissible(pair, jtwist)
    report = check_integrable(pair, jtwist)
    assert not report.integrable
    assert not report.z_plus_closed and not report.nijenhuis_verdict
    x, y, br = report.witness
    assert br not in report.z_plus
    # the planar pairing on the same algebra is integrable
    jplane = operator_from_rules(alg, {
        "x": alg.basis_vector("y"),
        "y": tuple(-a for a in alg.basis_vector("x")),
        "z": alg.basis_vector("w"),
        "w": tuple(-a for a in alg.basis_vector("z")),
    })
    assert check_integrable(pair, jplane).integrable


def test_z_closure_conjugation_symmetry(so3, so3_pair):
    # Z+ closed iff Z- closed: check directly on the rotation structure.
    op = operator_ad(so3, so3.basis_vector("k0"))
    z_plus, z_minus = compute_z_spaces(so3_pair, op)
    for space in (z_plus, z_minus):
        rows = space.vectors()
        for a in range(len(rows)):
            for b in range(a + 1, len(rows)):
                assert so3.bracket(rows[a], rows[b]) in space


def test_split_diagnostics_rotation(so3, so3_pair):
    diag = split_diagnostics(so3_pair, operator_ad(so3, so3.basis_vector("k0")))
    assert diag.sum_is_all and diag.intersection_is_kc
    assert diag.eigenspace_decomposition_holds


def test_split_diagnostics_grassmann(u4, u4_pair):
    diag = split_diagnostics(u4_pair, operator_ad(u4, grassmann_center_vector(u4)))
    assert diag.all_hold


def test_split_diagnostics_plane_rotation():
    z2 = (Fraction(0),) * 2
    ab2 = LieAlgebra("ab2", ("u", "v"), [[z2, z2], [z2, z2]])
    triv = make_subalgebra(ab2, [ab2.zero_vector()])
    pair = HomogeneousPair(ab2, triv, m=Subspace.full(2))
    rot = operator_from_rules(ab2, {
        "u": ab2.basis_vector("v"),
        "v": tuple(-a for a in ab2.basis_vector("u")),
    })
    diag = split_diagnostics(pair, rot)
    assert diag.all_hold
    z_plus, z_minus = compute_z_spaces(pair, rot)
    assert z_plus.dim == 1 and z_minus.dim == 1
    assert subspace_sum(z_plus, z_minus).dim == 2
    assert subspace_intersection(z_plus, z_minus).dim == 0


def test_split_diagnostics_preconditions(so3, so3_pair, so3_pair_plain):
    with pytest.raises(MissingComplement):
        split_diagnostics(so3_pair_plain, operator_ad(so3, so3.basis_vector("k0")))
    # alpha != 0 breaks the kernel clause
    with pytest.raises(NotSplitACAdmissible) as err:
        split_diagnostics(so3_pair, sphere_family(so3, 1, 1, -1))
    assert err.value.clause == "k_in_kernel"
    # beta = 2: squares to -4 on the complement
    with pytest.raises(NotSplitACAdmissible) as err:
        split_diagnostics(so3_pair, sphere_family(so3, 0, 2, -2))
    assert err.value.clause == "square_is_minus_one_on_m"


def test_gl2_left_structure_integrable(gl3):
    from liecheck import from_matrix_generators
    gl2 = from_matrix_generators(
        2, [unit_matrix(2, i, j) for i in range(2) for j in range(2)],
        labels=("e11", "e12", "e21", "e22"), name="gl2")
    j_mat = unit_matrix(2, 0, 1, -1) + unit_matrix(2, 1, 0)
    op = operator_left_mult(gl2, j_mat)
    triv = make_subalgebra(gl2, [gl2.zero_vector()])
    pair = HomogeneousPair(gl2, triv)
    assert check_ac_admissible(pair, op)
    report = check_integrable(pair, op)
    assert report.integrable
    assert report.z_plus.dim == 2
