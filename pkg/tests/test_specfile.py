"""Parsing, canonical serialization, diagnostics, and round trips."""

import random
from fractions import Fraction

import pytest

from liecheck.exact import GaussianRational
from liecheck.specfile import (
    DuplicateName,
    InconsistentBracket,
    SpecSyntaxError,
    UnresolvedReference,
    build,
    parse,
    serialize,
)

CANONICAL_SPHERE = """\
algebra so3 { basis k0 e1 e2; bracket [k0,e1] = -1*e2; bracket [k0,e2] = e1; bracket [e1,e2] = -1*k0; }
subalgebra k of so3 = span(k0);
operator I on so3 = ad(k0);
pair sphere = (so3, k, connected = true);
"""


def test_parse_sphere_document():
    doc = parse(CANONICAL_SPHERE)
    assert list(doc.algebras) == ["so3"]
    assert list(doc.subalgebras) == ["k"]
    assert list(doc.operators) == ["I"]
    assert list(doc.pairs) == ["sphere"]
    alg = doc.algebras["so3"]
    assert alg.labels == ("k0", "e1", "e2")
    # three declared brackets, all nonzero, i < j
    assert len(alg.brackets) == 3
    assert all(i < j for i, j, _ in alg.brackets)


def test_empty_document():
    doc = parse("")
    assert doc.algebras == {} and doc.pairs == {}
    assert serialize(doc) == ""


def test_comments_and_whitespace():
    text = "# leading comment\n\n  algebra   a { basis x ; } # trailing\n"
    doc = parse(text)
    assert doc.algebras["a"].labels == ("x",)


def test_inconsistent_bracket_direct():
    with pytest.raises(InconsistentBracket):
        parse("algebra a { basis x y; bracket [x,y] = -1*y; bracket [y,x] = -1*y; }")


def test_inconsistent_bracket_diagonal():
    with pytest.raises(InconsistentBracket):
        parse("algebra a { basis x y; bracket [x,x] = y; }")


def test_consistent_reverse_brackets_accepted():
    doc = parse("algebra a { basis x y z; bracket [x,y] = z; bracket [y,x] = -1*z; }")
    assert len(doc.algebras["a"].brackets) == 1


def test_duplicate_names():
    with pytest.raises(DuplicateName):
        parse("algebra a { basis x; } algebra a { basis y; }")
    with pytest.raises(DuplicateName):
        parse("algebra a { basis x x; }")


def test_unresolved_references():
    with pytest.raises(UnresolvedReference):
        parse("subalgebra s of ghost = span(x);")
    with pytest.raises(UnresolvedReference):
        parse("algebra a { basis x; } subalgebra s of a = span(zz);")
    with pytest.raises(UnresolvedReference):
        parse("algebra a { basis x; } subalgebra s of a = span(x);"
              "pair p = (a, s, complement ghost);")


def test_mismatched_parent_algebra():
    text = (
        "algebra a { basis x; } algebra b { basis y; }"
        "subalgebra s of a = span(x);"
        "pair p = (b, s);"
    )
    with pytest.raises(UnresolvedReference):
        parse(text)


def test_syntax_error_positions():
    try:
        parse("algebra a { basis x;\n bracket [x,x] = 3//2*x; }")
    except SpecSyntaxError as err:
        assert err.line == 2 and err.col > 0
        assert err.expected
    else:
        pytest.fail("expected a syntax diagnostic")


def test_malformed_fixtures(fixtures_dir):
    cases = {
        "inconsistent_bracket.lie": InconsistentBracket,
        "unresolved_ref.lie": UnresolvedReference,
        "bad_scalar.lie": SpecSyntaxError,
    }
    for name, exc_type in cases.items():
        text = (fixtures_dir / name).read_text()
        with pytest.raises(exc_type) as err:
            parse(text)
        lines = text.splitlines()
        assert 1 <= err.value.line <= len(lines)
        assert 1 <= err.value.col <= len(lines[err.value.line - 1]) + 1


def test_round_trip_corpus(corpus_dir):
    for path in sorted(corpus_dir.glob("*.lie")):
        doc = parse(path.read_text())
        canon = serialize(doc)
        assert parse(canon) == doc, path.name
        # canonical form is a fixed point
        assert serialize(parse(canon)) == canon, path.name


def test_round_trip_randomized_documents():
    rng = random.Random(61)
    for _ in range(15):
        n = rng.randint(1, 4)
        labels = [f"b{i}" for i in range(n)]
        lines = [f"algebra a {{ basis {' '.join(labels)}; }}"]
        chosen = rng.sample(labels, rng.randint(1, n))
        vecs = ", ".join(chosen)
        lines.append(f"subalgebra s of a = span({vecs});")
        rules = " ".join(
            f"{lab} -> {rng.randint(-3, 3)}*{rng.choice(labels)};"
            for lab in labels
        )
        lines.append(f"operator op on a {{ {rules} }}")
        lines.append("pair p = (a, s, connected = false);")
        doc = parse("\n".join(lines))
        assert parse(serialize(doc)) == doc


def test_scalar_canonicalization():
    doc = parse("algebra a { basis x y; bracket [x,y] = 2/4*x; }")
    assert "1/2*x" in serialize(doc)


def test_serialization_emits_lower_triangle_only():
    doc = parse("algebra a { basis x y z; bracket [y,x] = z; }")
    out = serialize(doc)
    assert "bracket [x,y] = -1*z;" in out
    assert "[y,x]" not in out


def test_gaussian_matrix_round_trip():
    text = (
        "matrix_algebra u1 dim = 1 { gen d = [[i]]; }\n"
        "subalgebra triv of u1 = span(0);\n"
        "pair p = (u1, triv);\n"
    )
    doc = parse(text)
    assert doc.matrix_algebras["u1"].gen_matrices[0].entry(0, 0) == GaussianRational(0, 1)
    assert parse(serialize(doc)) == doc


def test_complex_coefficient_rejected_in_vector():
    with pytest.raises(SpecSyntaxError):
        parse("algebra a { basis x y; bracket [x,y] = 2i*x; }")


def test_bare_scalar_must_be_zero():
    with pytest.raises(SpecSyntaxError):
        parse("algebra a { basis x; } subalgebra s of a = span(2);")


def test_reps_round_trip():
    text = (
        "algebra a { basis x y; }\n"
        "subalgebra s of a = span(x);\n"
        "pair p = (a, s, connected = false, reps([[1,0],[0,-1]]));\n"
    )
    doc = parse(text)
    assert len(doc.pairs["p"].reps) == 1
    assert parse(serialize(doc)) == doc
    built = build(doc)
    assert built.pairs["p"].component_reps[0].entry(1, 1) == Fraction(-1)


def test_build_constructs_working_objects(corpus_dir):
    from liecheck import check_admissible
    doc = parse((corpus_dir / "so3_sphere.lie").read_text())
    built = build(doc)
    pair = built.pairs["sphere"]
    assert check_admissible(pair, built.operators["I"]).holds
    assert built.operators["I"].ad_generator == pair.alg.basis_vector("k0")


def test_source_spans_recorded():
    doc = parse(CANONICAL_SPHERE)
    assert set(doc.source_spans) == {"so3", "k", "I", "sphere"}
    for line, col in doc.source_spans.values():
        assert line >= 1 and col >= 1
