"""Parser and serializer for the declarative ``.lie`` input format.

The format describes algebras (structure-constant or matrix-generator form),
subalgebras, complements, operators and homogeneous pairs::

    algebra so3 { basis k0 e1 e2; bracket [k0,e1] = -1*e2; bracket [k0,e2] = e1; bracket [e1,e2] = -1*k0; }
    subalgebra k of so3 = span(k0);
    operator I on so3 = ad(k0);
    pair sphere = (so3, k, connected = true);

Grammar (whitespace-insensitive, ``#`` starts a line comment)::

    document    := item* ;
    item        := algebra | matrixalg | subalgebra | complement | operator | pair ;
    algebra     := "algebra" NAME "{" "basis" NAME+ ";" ("bracket" "[" NAME "," NAME "]" "=" lincomb ";")* "}" ;
    matrixalg   := "matrix_algebra" NAME "dim" "=" INT "{" ("gen" NAME "=" matrix ";")+ "}" ;
    subalgebra  := "subalgebra" NAME "of" NAME "=" "span" "(" lincomb ("," lincomb)* ")" ";" ;
    complement  := "complement" NAME "of" NAME "=" "span" "(" lincomb ("," lincomb)* ")" ";" ;
    operator    := "operator" NAME "on" NAME ("{" (NAME "->" lincomb ";")+ "}"
                   | "=" ("ad" "(" lincomb ")" | "left" "(" matrix ")" | "right" "(" matrix ")"
                          | "sandwich" "(" matrix "," matrix ")")) ";"? ;
    pair        := "pair" NAME "=" "(" NAME "," NAME ["," "complement" NAME]
                   ["," "connected" "=" ("true"|"false")] ["," "reps" "(" matrix ("," matrix)* ")"] ")" ";" ;
    lincomb     := [scalar "*"] NAME (("+"|"-") [scalar "*"] NAME)* | scalar ;
    matrix      := "[" row ("," row)* "]" ;   row := "[" scalar ("," scalar)* "]" ;
    scalar      := rational | [rational] "i" | rational ("+"|"-") [rational] "i" ;
    rational    := ["-"] INT ["/" INT] ;

A bare scalar as a lincomb must be 0 (the zero vector).  Unspecified
brackets default to zero and ``[b,a]`` is inferred as ``-[a,b]``; declaring
both with values that are not negatives of each other is an error.  The name
``i`` is reserved for the imaginary unit and cannot be a basis label.

Every parsed document round-trips: ``parse(serialize(doc)) == doc``.
Serialization is canonical: items sorted by kind then name, one declaration
per line, scalars in canonical form, brackets emitted only for i < j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import LieAlgebra, from_matrix_generators, make_subalgebra
from .errors import LieCheckError
from .exact import ExactMatrix, GaussianRational, Subspace, format_scalar
from .operators import (
    HomogeneousPair,
    operator_ad,
    operator_from_rules,
    operator_left_mult,
    operator_right_mult,
    operator_sandwich,
)


class SpecfileError(LieCheckError):
    """A diagnostic with a source position inside the parsed text."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class SpecSyntaxError(SpecfileError):
    def __init__(self, message, line, col, found=None, expected=()):
        super().__init__(message, line, col)
        self.found = found
        self.expected = tuple(expected)


class DuplicateName(SpecfileError):
    pass


class UnresolvedReference(SpecfileError):
    pass


class InconsistentBracket(SpecfileError):
    pass


# ---------------------------------------------------------------------------
# declarations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraDecl:
    name: str
    labels: tuple
    brackets: tuple  # ((i, j, coords), ...) with i < j, nonzero coords only


@dataclass(frozen=True)
class MatrixAlgebraDecl:
    name: str
    size: int
    gen_names: tuple
    gen_matrices: tuple


@dataclass(frozen=True)
class SubspaceDecl:
    kind: str  # "subalgebra" | "complement"
    name: str
    algebra: str
    vectors: tuple


@dataclass(frozen=True)
class OperatorDecl:
    name: str
    algebra: str
    form: str  # "rules" | "ad" | "left" | "right" | "sandwich"
    data: tuple


@dataclass(frozen=True)
class PairDecl:
    name: str
    algebra: str
    subalgebra: str
    complement: Optional[str] = None
    connected: bool = True
    reps: tuple = ()


@dataclass
class SpecDocument:
    """All declarations of a parsed document, keyed by name."""

    algebras: dict = field(default_factory=dict)
    matrix_algebras: dict = field(default_factory=dict)
    subalgebras: dict = field(default_factory=dict)
    complements: dict = field(default_factory=dict)
    operators: dict = field(default_factory=dict)
    pairs: dict = field(default_factory=dict)
    source_spans: dict = field(default_factory=dict, compare=False)

    def algebra_decl(self, name):
        if name in self.algebras:
            return self.algebras[name]
        if name in self.matrix_algebras:
            return self.matrix_algebras[name]
        return None


# ---------------------------------------------------------------------------
# scanner
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # NAME | INT | PUNCT | EOF
    text: str
    line: int
    col: int


_PUNCTS = ("->", "{", "}", "(", ")", "[", "]", ",", ";", "=", "*", "+", "-", "/")


def _scan(text: str):
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("->", i):
            tokens.append(_Token("PUNCT", "->", line, col))
            i += 2
            col += 2
            continue
        if ch in "{}()[],;=*+-/":
            tokens.append(_Token("PUNCT", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("NAME", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise SpecSyntaxError(f"unexpected character {ch!r}", line, col, found=ch)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# raw syntax tree (lincomb terms unresolved)
# ---------------------------------------------------------------------------

@dataclass
class _RawLincomb:
    # terms: list of (sign, scalar_or_None, name_token_or_None)
    terms: list
    line: int
    col: int


@dataclass
class _RawItem:
    kind: str
    name: str
    name_tok: _Token
    payload: dict


class _Parser:
    def __init__(self, text: str):
        self.tokens = _scan(text)
        self.pos = 0

    # -- token helpers ------------------------------------------------------

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def fail(self, expected, tok: Optional[_Token] = None):
        tok = tok or self.peek()
        shown = tok.text or "end of input"
        exp = ", ".join(expected)
        raise SpecSyntaxError(
            f"expected {exp}, found {shown!r}", tok.line, tok.col,
            found=shown, expected=expected,
        )

    def expect_punct(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind == "PUNCT" and tok.text == text:
            return self.advance()
        self.fail([repr(text)])

    def expect_name(self, what: str = "a name") -> _Token:
        tok = self.peek()
        if tok.kind == "NAME":
            return self.advance()
        self.fail([what])

    def expect_keyword(self, word: str) -> _Token:
        tok = self.peek()
        if tok.kind == "NAME" and tok.text == word:
            return self.advance()
        self.fail([repr(word)])

    def at_punct(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "PUNCT" and tok.text == text

    def at_name(self, text: Optional[str] = None) -> bool:
        tok = self.peek()
        return tok.kind == "NAME" and (text is None or tok.text == text)

    # -- scalars ------------------------------------------------------------

    def _parse_rational(self, sign: int = 1) -> Fraction:
        tok = self.peek()
        if tok.kind != "INT":
            self.fail(["an integer"])
        self.advance()
        num = int(tok.text) * sign
        if self.at_punct("/"):
            self.advance()
            den_tok = self.peek()
            if den_tok.kind != "INT":
                self.fail(["a denominator"])
            self.advance()
            den = int(den_tok.text)
            if den == 0:
                raise SpecSyntaxError("zero denominator", den_tok.line, den_tok.col)
            return Fraction(num, den)
        return Fraction(num)

    def _try_scalar(self):
        """Parse a scalar if one starts here; returns None otherwise.

        Handles the full complex form with backtracking: in ``1+2i`` the
        ``+2i`` belongs to the scalar, while in ``1 + 2*e1`` it starts the
        next lincomb term.
        """
        start = self.pos
        sign = 1
        if self.at_punct("-"):
            sign = -1
            self.advance()
        elif self.at_punct("+"):
            self.advance()
        if self.at_name("i"):
            self.advance()
            return GaussianRational(0, sign)
        if self.peek().kind != "INT":
            self.pos = start
            return None
        re_part = self._parse_rational(sign)
        if self.at_name("i"):
            self.advance()
            return GaussianRational(0, re_part)
        mark = self.pos
        if self.at_punct("+") or self.at_punct("-"):
            im_sign = 1 if self.peek().text == "+" else -1
            self.advance()
            if self.at_name("i"):
                self.advance()
                return GaussianRational(re_part, im_sign)
            if self.peek().kind == "INT":
                im_part = self._parse_rational(im_sign)
                if self.at_name("i"):
                    self.advance()
                    return GaussianRational(re_part, im_part)
            self.pos = mark
        return re_part

    def _scalar(self):
        s = self._try_scalar()
        if s is None:
            self.fail(["a scalar"])
        return s

    # -- lincombs and matrices ----------------------------------------------

    def _lincomb(self) -> _RawLincomb:
        head = self.peek()
        terms = []
        first = True
        while True:
            if first:
                sign = 1
                if self.at_punct("-"):
                    sign = -1
                    self.advance()
                elif self.at_punct("+"):
                    self.advance()
            else:
                if self.at_punct("+"):
                    sign = 1
                    self.advance()
                elif self.at_punct("-"):
                    sign = -1
                    self.advance()
                else:
                    break
            if self.at_name() and not self.at_name("i"):
                terms.append((sign, None, self.advance()))
            else:
                save = self.pos
                scalar = self._try_scalar()
                if scalar is None:
                    self.fail(["a scalar or a basis label"])
                if self.at_punct("*"):
                    self.advance()
                    name_tok = self.expect_name("a basis label")
                    terms.append((sign, scalar, name_tok))
                else:
                    terms.append((sign, scalar, None))
            first = False
        if not terms:
            self.fail(["a linear combination"])
        return _RawLincomb(terms, head.line, head.col)

    def _matrix(self) -> ExactMatrix:
        head = self.expect_punct("[")
        rows = []
        while True:
            self.expect_punct("[")
            row = [self._scalar()]
            while self.at_punct(","):
                self.advance()
                row.append(self._scalar())
            self.expect_punct("]")
            rows.append(row)
            if self.at_punct(","):
                self.advance()
                continue
            break
        self.expect_punct("]")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise SpecSyntaxError("ragged matrix rows", head.line, head.col)
        return ExactMatrix.from_rows(rows)

    # -- items ----------------------------------------------------------------

    def parse_items(self):
        items = []
        while not self.peek().kind == "EOF":
            tok = self.peek()
            if tok.kind != "NAME":
                self.fail(["algebra", "matrix_algebra", "subalgebra",
                           "complement", "operator", "pair"])
            handler = {
                "algebra": self._item_algebra,
                "matrix_algebra": self._item_matrix_algebra,
                "subalgebra": self._item_subspace,
                "complement": self._item_subspace,
                "operator": self._item_operator,
                "pair": self._item_pair,
            }.get(tok.text)
            if handler is None:
                self.fail(["algebra", "matrix_algebra", "subalgebra",
                           "complement", "operator", "pair"])
            items.append(handler())
        return items

    def _item_algebra(self):
        self.expect_keyword("algebra")
        name_tok = self.expect_name("an algebra name")
        self.expect_punct("{")
        self.expect_keyword("basis")
        labels = []
        while self.at_name():
            labels.append(self.advance())
        if not labels:
            self.fail(["at least one basis label"])
        self.expect_punct(";")
        brackets = []
        while self.at_name("bracket"):
            self.advance()
            self.expect_punct("[")
            a = self.expect_name("a basis label")
            self.expect_punct(",")
            b = self.expect_name("a basis label")
            self.expect_punct("]")
            self.expect_punct("=")
            rhs = self._lincomb()
            self.expect_punct(";")
            brackets.append((a, b, rhs))
        self.expect_punct("}")
        return _RawItem("algebra", name_tok.text, name_tok,
                        {"labels": labels, "brackets": brackets})

    def _item_matrix_algebra(self):
        self.expect_keyword("matrix_algebra")
        name_tok = self.expect_name("an algebra name")
        self.expect_keyword("dim")
        self.expect_punct("=")
        size_tok = self.peek()
        if size_tok.kind != "INT":
            self.fail(["the matrix size"])
        self.advance()
        size = int(size_tok.text)
        if size < 1:
            raise SpecSyntaxError("matrix size must be positive",
                                  size_tok.line, size_tok.col)
        self.expect_punct("{")
        gens = []
        while self.at_name("gen"):
            self.advance()
            gname = self.expect_name("a generator name")
            self.expect_punct("=")
            mat = self._matrix()
            self.expect_punct(";")
            if mat.rows != size or mat.cols != size:
                raise SpecSyntaxError(
                    f"generator {gname.text!r} must be {size}x{size}",
                    gname.line, gname.col,
                )
            gens.append((gname, mat))
        if not gens:
            self.fail(["at least one generator"])
        self.expect_punct("}")
        return _RawItem("matrix_algebra", name_tok.text, name_tok,
                        {"size": size, "gens": gens})

    def _item_subspace(self):
        kind_tok = self.advance()  # subalgebra | complement
        name_tok = self.expect_name("a name")
        self.expect_keyword("of")
        alg_tok = self.expect_name("an algebra name")
        self.expect_punct("=")
        self.expect_keyword("span")
        self.expect_punct("(")
        vectors = [self._lincomb()]
        while self.at_punct(","):
            self.advance()
            vectors.append(self._lincomb())
        self.expect_punct(")")
        self.expect_punct(";")
        return _RawItem(kind_tok.text, name_tok.text, name_tok,
                        {"algebra": alg_tok, "vectors": vectors})

    def _item_operator(self):
        self.expect_keyword("operator")
        name_tok = self.expect_name("an operator name")
        self.expect_keyword("on")
        alg_tok = self.expect_name("an algebra name")
        if self.at_punct("{"):
            self.advance()
            rules = []
            while self.at_name():
                label = self.advance()
                self.expect_punct("->")
                rhs = self._lincomb()
                self.expect_punct(";")
                rules.append((label, rhs))
            if not rules:
                self.fail(["at least one rule"])
            self.expect_punct("}")
            if self.at_punct(";"):
                self.advance()
            return _RawItem("operator", name_tok.text, name_tok,
                            {"algebra": alg_tok, "form": "rules", "rules": rules})
        self.expect_punct("=")
        form_tok = self.expect_name("ad, left, right or sandwich")
        form = form_tok.text
        if form not in ("ad", "left", "right", "sandwich"):
            self.fail(["'ad'", "'left'", "'right'", "'sandwich'"], form_tok)
        self.expect_punct("(")
        if form == "ad":
            data = {"ad": self._lincomb()}
        elif form in ("left", "right"):
            data = {"matrix": self._matrix()}
        else:
            a = self._matrix()
            self.expect_punct(",")
            b = self._matrix()
            data = {"matrices": (a, b)}
        self.expect_punct(")")
        if self.at_punct(";"):
            self.advance()
        payload = {"algebra": alg_tok, "form": form}
        payload.update(data)
        return _RawItem("operator", name_tok.text, name_tok, payload)

    def _item_pair(self):
        self.expect_keyword("pair")
        name_tok = self.expect_name("a pair name")
        self.expect_punct("=")
        self.expect_punct("(")
        alg_tok = self.expect_name("an algebra name")
        self.expect_punct(",")
        sub_tok = self.expect_name("a subalgebra name")
        complement = None
        connected = True
        reps = []
        while self.at_punct(","):
            self.advance()
            key = self.expect_name("complement, connected or reps")
            if key.text == "complement":
                complement = self.expect_name("a complement name")
            elif key.text == "connected":
                self.expect_punct("=")
                val = self.expect_name("true or false")
                if val.text not in ("true", "false"):
                    self.fail(["'true'", "'false'"], val)
                connected = val.text == "true"
            elif key.text == "reps":
                self.expect_punct("(")
                reps.append(self._matrix())
                while self.at_punct(","):
                    self.advance()
                    reps.append(self._matrix())
                self.expect_punct(")")
            else:
                self.fail(["'complement'", "'connected'", "'reps'"], key)
        self.expect_punct(")")
        self.expect_punct(";")
        return _RawItem("pair", name_tok.text, name_tok,
                        {"algebra": alg_tok, "subalgebra": sub_tok,
                         "complement": complement, "connected": connected,
                         "reps": tuple(reps)})


# ---------------------------------------------------------------------------
# resolution
# ---------------------------------------------------------------------------

def _resolve_lincomb(raw: _RawLincomb, labels: Sequence[str]) -> tuple:
    """Turn a raw lincomb into a rational coordinate vector over ``labels``."""
    index = {lab: i for i, lab in enumerate(labels)}
    coords = [Fraction(0)] * len(labels)
    bare = None
    for sign, scalar, name_tok in raw.terms:
        if name_tok is None:
            bare = (sign, scalar, raw)
            if scalar != 0:
                raise SpecSyntaxError(
                    "a bare scalar in a vector position must be 0",
                    raw.line, raw.col,
                )
            continue
        if name_tok.text not in index:
            raise UnresolvedReference(
                f"unknown basis label {name_tok.text!r}",
                name_tok.line, name_tok.col,
            )
        coeff = Fraction(1) if scalar is None else scalar
        if isinstance(coeff, GaussianRational):
            if not coeff.is_real:
                raise SpecSyntaxError(
                    "coefficients in vectors must be rational",
                    name_tok.line, name_tok.col,
                )
            coeff = coeff.re
        coords[index[name_tok.text]] += sign * coeff
    if bare is not None and len(raw.terms) > 1:
        raise SpecSyntaxError(
            "a bare scalar cannot be mixed with basis terms", raw.line, raw.col
        )
    return tuple(coords)


def _resolve(items) -> SpecDocument:
    doc = SpecDocument()
    taken = {}
    for it in items:
        if it.name in taken:
            raise DuplicateName(
                f"name {it.name!r} already declared", it.name_tok.line, it.name_tok.col
            )
        taken[it.name] = it
        doc.source_spans[it.name] = (it.name_tok.line, it.name_tok.col)

    def algebra_labels(alg_tok: _Token) -> tuple:
        decl = doc.algebra_decl(alg_tok.text)
        if decl is None:
            raise UnresolvedReference(
                f"unknown algebra {alg_tok.text!r}", alg_tok.line, alg_tok.col
            )
        if isinstance(decl, AlgebraDecl):
            return decl.labels
        return decl.gen_names

    # Algebras first: other items resolve against their labels.
    for it in items:
        if it.kind == "algebra":
            labels = []
            seen = set()
            for tok in it.payload["labels"]:
                if tok.text in seen:
                    raise DuplicateName(
                        f"duplicate basis label {tok.text!r}", tok.line, tok.col
                    )
                if tok.text == "i":
                    raise SpecSyntaxError(
                        "basis label 'i' is reserved for the imaginary unit",
                        tok.line, tok.col,
                    )
                seen.add(tok.text)
                labels.append(tok.text)
            labels = tuple(labels)
            index = {lab: i for i, lab in enumerate(labels)}
            given = {}
            for a_tok, b_tok, rhs in it.payload["brackets"]:
                for tok in (a_tok, b_tok):
                    if tok.text not in index:
                        raise UnresolvedReference(
                            f"unknown basis label {tok.text!r}", tok.line, tok.col
                        )
                ia, ib = index[a_tok.text], index[b_tok.text]
                coords = _resolve_lincomb(rhs, labels)
                if ia == ib:
                    if any(coords):
                        raise InconsistentBracket(
                            f"[{a_tok.text},{a_tok.text}] must be 0",
                            a_tok.line, a_tok.col,
                        )
                    continue
                if (ia, ib) in given and given[(ia, ib)] != coords:
                    raise InconsistentBracket(
                        f"bracket [{a_tok.text},{b_tok.text}] declared twice "
                        "with different values", a_tok.line, a_tok.col,
                    )
                if (ib, ia) in given and given[(ib, ia)] != tuple(-x for x in coords):
                    raise InconsistentBracket(
                        f"brackets [{a_tok.text},{b_tok.text}] and "
                        f"[{b_tok.text},{a_tok.text}] are not negatives",
                        a_tok.line, a_tok.col,
                    )
                given[(ia, ib)] = coords
            canonical = {}
            for (ia, ib), coords in given.items():
                if ia < ib:
                    canonical[(ia, ib)] = coords
                else:
                    canonical[(ib, ia)] = tuple(-x for x in coords)
            brackets = tuple(
                (ia, ib, coords)
                for (ia, ib), coords in sorted(canonical.items())
                if any(coords)
            )
            doc.algebras[it.name] = AlgebraDecl(it.name, labels, brackets)
        elif it.kind == "matrix_algebra":
            names = []
            seen = set()
            mats = []
            for tok, mat in it.payload["gens"]:
                if tok.text in seen:
                    raise DuplicateName(
                        f"duplicate generator {tok.text!r}", tok.line, tok.col
                    )
                if tok.text == "i":
                    raise SpecSyntaxError(
                        "generator name 'i' is reserved for the imaginary unit",
                        tok.line, tok.col,
                    )
                seen.add(tok.text)
                names.append(tok.text)
                mats.append(mat)
            doc.matrix_algebras[it.name] = MatrixAlgebraDecl(
                it.name, it.payload["size"], tuple(names), tuple(mats)
            )

    for it in items:
        if it.kind in ("subalgebra", "complement"):
            labels = algebra_labels(it.payload["algebra"])
            vectors = tuple(
                _resolve_lincomb(raw, labels) for raw in it.payload["vectors"]
            )
            decl = SubspaceDecl(it.kind, it.name, it.payload["algebra"].text, vectors)
            if it.kind == "subalgebra":
                doc.subalgebras[it.name] = decl
            else:
                doc.complements[it.name] = decl
        elif it.kind == "operator":
            labels = algebra_labels(it.payload["algebra"])
            form = it.payload["form"]
            if form == "rules":
                seen = set()
                rules = []
                for label_tok, rhs in it.payload["rules"]:
                    if label_tok.text not in labels:
                        raise UnresolvedReference(
                            f"unknown basis label {label_tok.text!r}",
                            label_tok.line, label_tok.col,
                        )
                    if label_tok.text in seen:
                        raise DuplicateName(
                            f"rule for {label_tok.text!r} given twice",
                            label_tok.line, label_tok.col,
                        )
                    seen.add(label_tok.text)
                    rules.append((label_tok.text, _resolve_lincomb(rhs, labels)))
                rules.sort(key=lambda kv: labels.index(kv[0]))
                data = tuple(rules)
            elif form == "ad":
                data = (_resolve_lincomb(it.payload["ad"], labels),)
            elif form in ("left", "right"):
                data = (it.payload["matrix"],)
            else:
                data = it.payload["matrices"]
            doc.operators[it.name] = OperatorDecl(
                it.name, it.payload["algebra"].text, form, data
            )

    for it in items:
        if it.kind != "pair":
            continue
        alg_tok = it.payload["algebra"]
        if doc.algebra_decl(alg_tok.text) is None:
            raise UnresolvedReference(
                f"unknown algebra {alg_tok.text!r}", alg_tok.line, alg_tok.col
            )
        sub_tok = it.payload["subalgebra"]
        sub = doc.subalgebras.get(sub_tok.text)
        if sub is None:
            raise UnresolvedReference(
                f"unknown subalgebra {sub_tok.text!r}", sub_tok.line, sub_tok.col
            )
        if sub.algebra != alg_tok.text:
            raise UnresolvedReference(
                f"subalgebra {sub_tok.text!r} is declared on {sub.algebra!r}, "
                f"not {alg_tok.text!r}", sub_tok.line, sub_tok.col,
            )
        comp_tok = it.payload["complement"]
        comp_name = None
        if comp_tok is not None:
            comp = doc.complements.get(comp_tok.text)
            if comp is None:
                raise UnresolvedReference(
                    f"unknown complement {comp_tok.text!r}", comp_tok.line, comp_tok.col
                )
            if comp.algebra != alg_tok.text:
                raise UnresolvedReference(
                    f"complement {comp_tok.text!r} is declared on {comp.algebra!r}, "
                    f"not {alg_tok.text!r}", comp_tok.line, comp_tok.col,
                )
            comp_name = comp_tok.text
        n = len(algebra_labels(alg_tok))
        for rep in it.payload["reps"]:
            if rep.rows != n or rep.cols != n:
                raise SpecSyntaxError(
                    f"component rep must be {n}x{n}",
                    it.name_tok.line, it.name_tok.col,
                )
        doc.pairs[it.name] = PairDecl(
            it.name, alg_tok.text, sub_tok.text, comp_name,
            it.payload["connected"], it.payload["reps"],
        )
    return doc


def parse(text: str) -> SpecDocument:
    """Parse a document; raises a diagnostic with line/column on failure."""
    return _resolve(_Parser(text).parse_items())


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _lincomb_text(coords: Sequence, labels: Sequence[str]) -> str:
    terms = [(c, lab) for c, lab in zip(coords, labels) if c]
    if not terms:
        return "0"
    parts = []
    for idx, (coeff, lab) in enumerate(terms):
        if idx == 0:
            if coeff == 1:
                parts.append(lab)
            else:
                parts.append(f"{format_scalar(coeff)}*{lab}")
            continue
        sign = "+" if coeff > 0 else "-"
        mag = abs(coeff)
        if mag == 1:
            parts.append(f" {sign} {lab}")
        else:
            parts.append(f" {sign} {format_scalar(mag)}*{lab}")
    return "".join(parts)


def _matrix_text(m: ExactMatrix) -> str:
    rows = []
    for i in range(m.rows):
        rows.append("[" + ",".join(format_scalar(e) for e in m.row(i)) + "]")
    return "[" + ",".join(rows) + "]"


def serialize(doc: SpecDocument) -> str:
    """Canonical text form; ``parse(serialize(doc)) == doc``."""
    lines = []
    for name in sorted(doc.algebras):
        a = doc.algebras[name]
        chunks = [f"algebra {a.name} {{ basis {' '.join(a.labels)};"]
        for ia, ib, coords in a.brackets:
            chunks.append(
                f" bracket [{a.labels[ia]},{a.labels[ib]}] = "
                f"{_lincomb_text(coords, a.labels)};"
            )
        chunks.append(" }")
        lines.append("".join(chunks))
    for name in sorted(doc.matrix_algebras):
        m = doc.matrix_algebras[name]
        chunks = [f"matrix_algebra {m.name} dim = {m.size} {{"]
        for gname, mat in zip(m.gen_names, m.gen_matrices):
            chunks.append(f" gen {gname} = {_matrix_text(mat)};")
        chunks.append(" }")
        lines.append("".join(chunks))
    for kind, table in (("subalgebra", doc.subalgebras), ("complement", doc.complements)):
        for name in sorted(table):
            s = table[name]
            labels = _labels_for(doc, s.algebra)
            body = ", ".join(_lincomb_text(v, labels) for v in s.vectors)
            lines.append(f"{kind} {s.name} of {s.algebra} = span({body});")
    for name in sorted(doc.operators):
        o = doc.operators[name]
        labels = _labels_for(doc, o.algebra)
        if o.form == "rules":
            body = " ".join(
                f"{lab} -> {_lincomb_text(coords, labels)};" for lab, coords in o.data
            )
            lines.append(f"operator {o.name} on {o.algebra} {{ {body} }}")
        elif o.form == "ad":
            lines.append(
                f"operator {o.name} on {o.algebra} = ad({_lincomb_text(o.data[0], labels)});"
            )
        elif o.form in ("left", "right"):
            lines.append(
                f"operator {o.name} on {o.algebra} = {o.form}({_matrix_text(o.data[0])});"
            )
        else:
            lines.append(
                f"operator {o.name} on {o.algebra} = sandwich("
                f"{_matrix_text(o.data[0])}, {_matrix_text(o.data[1])});"
            )
    for name in sorted(doc.pairs):
        p = doc.pairs[name]
        parts = [p.algebra, p.subalgebra]
        if p.complement is not None:
            parts.append(f"complement {p.complement}")
        parts.append(f"connected = {'true' if p.connected else 'false'}")
        if p.reps:
            parts.append("reps(" + ", ".join(_matrix_text(r) for r in p.reps) + ")")
        lines.append(f"pair {p.name} = ({', '.join(parts)});")
    return "\n".join(lines) + ("\n" if lines else "")


def _labels_for(doc: SpecDocument, algebra: str) -> tuple:
    decl = doc.algebra_decl(algebra)
    if isinstance(decl, AlgebraDecl):
        return decl.labels
    return decl.gen_names


# ---------------------------------------------------------------------------
# semantic build
# ---------------------------------------------------------------------------

@dataclass
class BuiltDocument:
    """Semantic objects constructed from a parsed document."""

    algebras: dict
    subalgebras: dict
    complements: dict
    operators: dict
    pairs: dict


def build(doc: SpecDocument) -> BuiltDocument:
    """Construct algebras, operators and pairs; validation errors propagate."""
    algebras = {}
    for name, decl in doc.algebras.items():
        n = len(decl.labels)
        zero = tuple(Fraction(0) for _ in range(n))
        structure = [[zero for _ in range(n)] for _ in range(n)]
        for ia, ib, coords in decl.brackets:
            structure[ia][ib] = coords
            structure[ib][ia] = tuple(-x for x in coords)
        algebras[name] = LieAlgebra(name, decl.labels, structure)
    for name, decl in doc.matrix_algebras.items():
        algebras[name] = from_matrix_generators(
            decl.size, decl.gen_matrices, labels=decl.gen_names, name=name
        )
    subalgebras = {}
    for name, decl in doc.subalgebras.items():
        subalgebras[name] = make_subalgebra(algebras[decl.algebra], decl.vectors)
    complements = {}
    for name, decl in doc.complements.items():
        alg = algebras[decl.algebra]
        complements[name] = Subspace.from_vectors(alg.dim, decl.vectors)
    operators = {}
    for name, decl in doc.operators.items():
        alg = algebras[decl.algebra]
        if decl.form == "rules":
            operators[name] = operator_from_rules(alg, dict(decl.data))
        elif decl.form == "ad":
            operators[name] = operator_ad(alg, decl.data[0])
        elif decl.form == "left":
            operators[name] = operator_left_mult(alg, decl.data[0])
        elif decl.form == "right":
            operators[name] = operator_right_mult(alg, decl.data[0])
        else:
            operators[name] = operator_sandwich(alg, decl.data[0], decl.data[1])
    pairs = {}
    for name, decl in doc.pairs.items():
        pairs[name] = HomogeneousPair(
            algebras[decl.algebra],
            subalgebras[decl.subalgebra],
            m=complements[decl.complement] if decl.complement else None,
            connected=decl.connected,
            component_reps=decl.reps,
        )
    return BuiltDocument(algebras, subalgebras, complements, operators, pairs)
