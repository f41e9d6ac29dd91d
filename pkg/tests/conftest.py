import random
from fractions import Fraction
from pathlib import Path

import pytest

from liecheck import (
    ExactMatrix,
    GaussianRational,
    HomogeneousPair,
    LieAlgebra,
    Subspace,
    from_matrix_generators,
    make_subalgebra,
    operator_from_rules,
)

REPO_ROOT = Path(__file__).resolve().parent.parent
CORPUS = REPO_ROOT / "corpus"
FIXTURES = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


def unit_matrix(n, i, j, scale=1):
    return ExactMatrix(
        n, n,
        [Fraction(scale) if (r, c) == (i, j) else Fraction(0)
         for r in range(n) for c in range(n)],
    )


def imag_unit_matrix(n, i, j, scale=1):
    return ExactMatrix(
        n, n,
        [GaussianRational(0, scale) if (r, c) == (i, j) else GaussianRational(0)
         for r in range(n) for c in range(n)],
    )


def so3_structure():
    z = (Fraction(0),) * 3
    return [
        [z, (0, 0, -1), (0, 1, 0)],
        [(0, 0, 1), z, (-1, 0, 0)],
        [(0, -1, 0), (1, 0, 0), z],
    ]


@pytest.fixture(scope="session")
def so3():
    return LieAlgebra("so3", ("k0", "e1", "e2"), so3_structure())


@pytest.fixture(scope="session")
def so3_pair(so3):
    k = make_subalgebra(so3, [so3.basis_vector("k0")])
    m = Subspace.from_vectors(3, [so3.basis_vector("e1"), so3.basis_vector("e2")])
    return HomogeneousPair(so3, k, m=m)


@pytest.fixture(scope="session")
def so3_pair_plain(so3):
    k = make_subalgebra(so3, [so3.basis_vector("k0")])
    return HomogeneousPair(so3, k)


def sphere_family(so3, alpha, beta, gamma):
    """The diagonal operator family on the sphere pair."""
    return operator_from_rules(so3, {
        "k0": (Fraction(alpha), 0, 0),
        "e1": (0, 0, Fraction(beta)),
        "e2": (0, Fraction(gamma), 0),
    })


@pytest.fixture(scope="session")
def gl3():
    gens = [unit_matrix(3, i, j) for i in range(3) for j in range(3)]
    labels = tuple(f"e{i+1}{j+1}" for i in range(3) for j in range(3))
    return from_matrix_generators(3, gens, labels=labels, name="gl3")


@pytest.fixture(scope="session")
def gl3_pair(gl3):
    triv = make_subalgebra(gl3, [gl3.zero_vector()])
    return HomogeneousPair(gl3, triv)


def u4_algebra():
    n = 4
    gens, labels = [], []
    for j in range(n):
        gens.append(imag_unit_matrix(n, j, j))
        labels.append(f"d{j+1}")
    for j in range(n):
        for k in range(j + 1, n):
            gens.append(unit_matrix(n, j, k) + unit_matrix(n, k, j, -1))
            labels.append(f"a{j+1}{k+1}")
            gens.append(imag_unit_matrix(n, j, k) + imag_unit_matrix(n, k, j))
            labels.append(f"s{j+1}{k+1}")
    return from_matrix_generators(4, gens, labels=tuple(labels), name="u4")


@pytest.fixture(scope="session")
def u4():
    return u4_algebra()


@pytest.fixture(scope="session")
def u4_pair(u4):
    k_labels = ("d1", "d2", "d3", "d4", "a12", "s12", "a34", "s34")
    m_labels = ("a13", "s13", "a14", "s14", "a23", "s23", "a24", "s24")
    k = make_subalgebra(u4, [u4.basis_vector(l) for l in k_labels])
    m = Subspace.from_vectors(16, [u4.basis_vector(l) for l in m_labels])
    return HomogeneousPair(u4, k, m=m)


def grassmann_center_vector(u4):
    """(i/2)(P+ - P-) in u4 coordinates: half the block-projection difference."""
    d = [Fraction(0)] * u4.dim
    d[u4.index_of("d1")] = Fraction(1, 2)
    d[u4.index_of("d2")] = Fraction(1, 2)
    d[u4.index_of("d3")] = Fraction(-1, 2)
    d[u4.index_of("d4")] = Fraction(-1, 2)
    return tuple(d)


@pytest.fixture(scope="session")
def sl2():
    h = unit_matrix(2, 0, 0) + unit_matrix(2, 1, 1, -1)
    e = unit_matrix(2, 0, 1)
    f = unit_matrix(2, 1, 0)
    return from_matrix_generators(2, [h, e, f], labels=("h", "e", "f"), name="sl2")


def rand_fraction(rng: random.Random, span: int = 6) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def rand_vector(rng: random.Random, n: int, span: int = 6) -> tuple:
    return tuple(rand_fraction(rng, span) for _ in range(n))


def rand_gaussian(rng: random.Random, span: int = 6) -> GaussianRational:
    return GaussianRational(rand_fraction(rng, span), rand_fraction(rng, span))


def rand_gaussian_vector(rng: random.Random, n: int, span: int = 6) -> tuple:
    return tuple(rand_gaussian(rng, span) for _ in range(n))
