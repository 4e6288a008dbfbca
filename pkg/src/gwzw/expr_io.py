"""Expression language, emitters, and the algebra-definition file parser.

Grammar (whitespace-insensitive):

    expr    := term (('+'|'-') term)*
    term    := factor ('^' factor)*                  wedge product
    factor  := rational ['*' factor] | atom | 'd' '(' expr ')'
               | '(' expr ')' | 'tr' '(' lie {',' lie} ')' | 'eps' '*' term
    atom    := NAME '[' index {',' index} ']'        indices are integers,
                                                     or letters inside eps
    lie     := lprod (('+'|'-') lprod)*              Lie-valued literal
    lprod   := [rational '*'] GEN ['*' term]         GEN: J[a,b] or P[a]
    rational:= INT ['/' INT]

An ``eps *`` product sums the letter indices over all index values with the
permutation sign, letters taken in order of first appearance.  Emitted text
is always re-parseable; JSON uses a versioned {op, args, scalar} tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (GeneratorId, J, LieAlgebra, P, check_jacobi, eps_sign,
                      invariant_tensor, j_resolved)
from .forms import Atom, FormExpr, known_symbols, symbol_info
from .lieform import LieForm, trace
from .scalars import Scalar


class ExprError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_]\w*)|"
                       r"(?P<sym>[\[\](),+\-*/^=]))")


def _tokenize(src: str):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.end() == pos:
            if src[pos:].strip():
                raise ExprError(f"unexpected character {src[pos]!r}", pos)
            break
        if m.group("int") is not None:
            tokens.append(("int", m.group("int"), m.start()))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start()))
        else:
            tokens.append((m.group("sym"), m.group("sym"), m.start()))
        pos = m.end()
    tokens.append(("eof", "", len(src)))
    return tokens


@dataclass
class ParserContext:
    """Index dimension and algebra for range checks, tr() and eps-expansion."""
    algebra: LieAlgebra

    @property
    def dim_index(self) -> int:
        return self.algebra.dim_index

    @staticmethod
    def for_n(n: int, deformed: bool = False) -> "ParserContext":
        from .algebra import build_ads, build_poincare
        return ParserContext(build_ads(n) if deformed else build_poincare(n))


class _Parser:
    def __init__(self, src: str, ctx: ParserContext):
        self.tokens = _tokenize(src)
        self.i = 0
        self.ctx = ctx

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise ExprError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    # -- expression levels -------------------------------------------------

    def expr(self, letters: dict | None = None) -> FormExpr:
        out = self.term(letters)
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.term(letters)
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self, letters) -> FormExpr:
        out = self.factor(letters)
        while self.peek()[0] == "^":
            self.next()
            out = out.wedge(self.factor(letters))
        return out

    def factor(self, letters) -> FormExpr:
        kind, value, pos = self.peek()
        if kind in ("int", "-"):
            c = self.rational()
            if self.peek()[0] == "*":
                self.next()
                return self.factor(letters).scale(c)
            return FormExpr.scalar(c)
        if kind == "(":
            self.next()
            out = self.expr(letters)
            self.expect(")")
            return out
        if kind == "name":
            if value == "d":
                self.next()
                self.expect("(")
                out = self.expr(letters)
                self.expect(")")
                if isinstance(out, _PendingWedge):
                    raise ExprError("d() inside an eps product applies to "
                                    "single atoms only", pos)
                return out.ext_d()
            if value == "tr":
                self.next()
                return self.trace_call()
            if value == "eps":
                self.next()
                self.expect("*")
                return self.eps_product()
            return self.atom(letters)
        raise ExprError(f"unexpected token {value!r}", pos)

    def rational(self) -> Fraction:
        sign = 1
        if self.peek()[0] == "-":
            self.next()
            sign = -1
        tok = self.expect("int")
        num = int(tok[1])
        if self.peek()[0] == "/":
            self.next()
            den = int(self.expect("int")[1])
            if den == 0:
                raise ExprError("zero denominator", tok[2])
            return Fraction(sign * num, den)
        return Fraction(sign * num)

    def atom(self, letters) -> FormExpr:
        tok = self.expect("name")
        name = tok[1]
        if name not in known_symbols():
            raise ExprError(f"unknown field symbol {name!r}", tok[2])
        info = symbol_info(name)
        self.expect("[")
        idx = []
        while True:
            kind, value, pos = self.next()
            if kind == "int":
                v = int(value)
                if v >= self.ctx.dim_index:
                    raise ExprError(f"index {v} out of range for "
                                    f"D={self.ctx.dim_index}", pos)
                idx.append(v)
            elif kind == "name" and letters is not None:
                idx.append(value)
            else:
                raise ExprError("expected an index", pos)
            kind, _, pos = self.next()
            if kind == "]":
                break
            if kind != ",":
                raise ExprError("expected ',' or ']'", pos)
        if len(idx) != info.arity:
            raise ExprError(f"{name} takes {info.arity} indices", tok[2])
        if letters is not None and any(isinstance(v, str) for v in idx):
            letters.setdefault("order", [])
            for v in idx:
                if isinstance(v, str) and v not in letters["order"]:
                    letters["order"].append(v)
            return _PendingAtom(name, tuple(idx), False)  # type: ignore
        return FormExpr.atom(name, *idx)

    def eps_product(self) -> FormExpr:
        letters: dict = {"order": []}
        start = self.i
        pending = self.term(letters)
        names = letters["order"]
        D = self.ctx.dim_index
        if len(names) != D:
            raise ExprError(f"eps product needs exactly {D} distinct letter "
                            f"indices, found {len(names)}",
                            self.tokens[start][2])
        import itertools
        out = FormExpr.zero()
        for perm in itertools.permutations(range(D)):
            sign = eps_sign(perm)
            binding = dict(zip(names, perm))
            out = out + _resolve_pending(pending, binding).scale(sign)
        return out

    def trace_call(self) -> FormExpr:
        self.expect("(")
        args = [self.lie_literal()]
        while self.peek()[0] == ",":
            self.next()
            args.append(self.lie_literal())
        self.expect(")")
        tensor = self.ctx.algebra.tensor(len(args))
        return trace(args, tensor)

    def lie_literal(self) -> LieForm:
        out = self.lie_prod()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.lie_prod()
            out = out + rhs if op == "+" else out - rhs
        return out

    def lie_prod(self) -> LieForm:
        coeff = Fraction(1)
        if self.peek()[0] in ("int", "-"):
            coeff = self.rational()
            self.expect("*")
        tok = self.expect("name")
        if tok[1] not in ("J", "P"):
            raise ExprError("expected generator J[...] or P[...]", tok[2])
        self.expect("[")
        idx = [int(self.expect("int")[1])]
        while self.peek()[0] == ",":
            self.next()
            idx.append(int(self.expect("int")[1]))
        self.expect("]")
        for v in idx:
            if v >= self.ctx.dim_index:
                raise ExprError(f"index {v} out of range", tok[2])
        if tok[1] == "P":
            if len(idx) != 1:
                raise ExprError("P takes one index", tok[2])
            gen, sign = P(idx[0]), 1
        else:
            if len(idx) != 2:
                raise ExprError("J takes two indices", tok[2])
            sign, gen = j_resolved(*idx)
            if gen is None:
                raise ExprError("J indices must differ", tok[2])
        comp = FormExpr.scalar(coeff * sign)
        if self.peek()[0] == "*":
            self.next()
            comp = comp.wedge(self.term(None))
        degree = comp.degree
        if degree is None:
            raise ExprError("generator component must be degree-homogeneous",
                            tok[2])
        return LieForm(self.ctx.algebra, degree, {gen: comp})


@dataclass(frozen=True)
class _PendingAtom:
    """Atom with letter indices inside an eps product, bound at expansion."""
    sym: str
    idx: tuple
    d: bool

    def wedge(self, other):
        return _PendingWedge((self, other))

    def ext_d(self):
        return _PendingAtom(self.sym, self.idx, True)

    def scale(self, c):
        return _PendingWedge((self,), c)


@dataclass(frozen=True)
class _PendingWedge:
    factors: tuple
    coeff: Fraction = Fraction(1)

    def wedge(self, other):
        return _PendingWedge(self.factors + (other,), self.coeff)

    def scale(self, c):
        return _PendingWedge(self.factors, self.coeff * c)


def _resolve_pending(node, binding: dict) -> FormExpr:
    if isinstance(node, _PendingAtom):
        idx = tuple(binding[v] if isinstance(v, str) else v for v in node.idx)
        return FormExpr.atom(node.sym, *idx, d=node.d)
    if isinstance(node, _PendingWedge):
        out = FormExpr.scalar(node.coeff)
        for f in node.factors:
            out = out.wedge(_resolve_pending(f, binding))
        return out
    if isinstance(node, FormExpr):
        return node
    raise TypeError(f"unexpected eps factor {node!r}")


def parse_expr(src: str, ctx: ParserContext) -> FormExpr:
    parser = _Parser(src, ctx)
    out = parser.expr()
    tok = parser.peek()
    if tok[0] != "eof":
        raise ExprError(f"trailing input {tok[1]!r}", tok[2])
    return out


# -- emission -------------------------------------------------------------------


def _scalar_to_obj(c: Scalar):
    terms = [{"t": k[0], "s": k[1], "m2": k[2], "coeff": str(Fraction(v))}
             for k, v in sorted(c.terms.items())]
    return {"terms": terms, "trunc": c.trunc}


def _scalar_from_obj(obj) -> Scalar:
    terms = {(t["t"], t["s"], t["m2"]): Fraction(t["coeff"])
             for t in obj["terms"]}
    return Scalar(terms, obj.get("trunc"))


FORM_SCHEMA_VERSION = 1


def form_to_obj(x: FormExpr):
    terms = []
    for mono, c in x.sorted_terms():
        atoms = [{"op": "atom", "sym": a.sym, "idx": list(a.idx), "d": a.d}
                 for a in mono]
        terms.append({"op": "scale", "scalar": _scalar_to_obj(c),
                      "args": [{"op": "wedge", "args": atoms}]})
    return {"version": FORM_SCHEMA_VERSION, "op": "sum", "args": terms}


def form_from_obj(obj) -> FormExpr:
    if obj.get("version") != FORM_SCHEMA_VERSION:
        raise ValueError(f"unsupported expression schema {obj.get('version')}")
    out = FormExpr.zero()
    for term in obj["args"]:
        c = _scalar_from_obj(term["scalar"])
        word = FormExpr.scalar(1)
        for a in term["args"][0]["args"]:
            word = word.wedge(FormExpr.atom(a["sym"], *a["idx"], d=a["d"]))
        out = out + word.scale(c)
    return out


def to_json(x: FormExpr) -> str:
    import json
    return json.dumps(form_to_obj(x), sort_keys=True)


def from_json(text: str) -> FormExpr:
    import json
    return form_from_obj(json.loads(text))


def _atom_text(a: Atom) -> str:
    body = f"{a.sym}[{','.join(map(str, a.idx))}]"
    return f"d({body})" if a.d else body


def to_text(x: FormExpr) -> str:
    """Grammar-conformant rendering; requires rational coefficients."""
    if x.is_zero():
        return "0"
    parts = []
    for mono, c in x.sorted_terms():
        f = c.to_fraction()
        word = "^".join(_atom_text(a) for a in mono)
        if not mono:
            parts.append(str(f))
            continue
        if f == 1:
            parts.append(word)
        elif f == -1:
            parts.append(f"-1 * {word}")
        else:
            parts.append(f"{f} * {word}")
    return " + ".join(parts)


_LATEX_NAMES = {"w": "\\omega", "e": "e", "phi": "\\phi", "v": "v", "b": "b"}


def _atom_latex(a: Atom) -> str:
    name = _LATEX_NAMES.get(a.sym, a.sym)
    body = f"{name}^{{{''.join(map(str, a.idx))}}}"
    return f"d{body}" if a.d else body


def to_latex(x: FormExpr) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for mono, c in x.sorted_terms():
        f = c.to_fraction() if c.is_rational() else None
        word = "".join(_atom_latex(a) for a in mono)
        if f is None:
            parts.append(f"({c})\\,{word}")
        elif not mono:
            parts.append(str(f))
        elif f == 1:
            parts.append(word)
        elif f == -1:
            parts.append(f"-{word}")
        else:
            num = str(f) if f.denominator == 1 else \
                f"\\tfrac{{{f.numerator}}}{{{f.denominator}}}"
            parts.append(f"{num}\\,{word}")
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def emit(x: FormExpr, fmt: str) -> str:
    if fmt == "text":
        return to_text(x)
    if fmt == "latex":
        return to_latex(x)
    if fmt == "json":
        return to_json(x)
    raise ValueError(f"unknown format {fmt!r}")


# -- algebra definition files -----------------------------------------------------


def parse_algebra_file(text: str, name: str = "user") -> LieAlgebra:
    """Plain-text bracket table, one bracket per line:

        indices 3
        [J[0,1], P[1]] = P[0]
        [P[0], P[1]] = m2 * J[0,1]

    Unlisted brackets vanish; antisymmetry is filled in automatically.
    The result must pass the Jacobi check.
    """
    dim = None
    brackets = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("indices"):
            dim = int(line.split()[1])
            continue
        m = re.match(r"\[\s*([JP]\[[\d,\s]+\])\s*,\s*([JP]\[[\d,\s]+\])\s*\]"
                     r"\s*=\s*(.+)", line)
        if m is None:
            raise ValueError(f"line {lineno}: cannot parse bracket {line!r}")
        brackets.append((lineno, m.group(1), m.group(2), m.group(3)))
    if dim is None:
        raise ValueError("missing 'indices D' header")
    if dim % 2 != 1:
        raise ValueError("index dimension must be odd (D = 2n + 1)")

    def parse_gen(s: str, lineno: int) -> tuple[int, GeneratorId]:
        m = re.match(r"([JP])\[([\d,\s]+)\]$", s.strip())
        if m is None:
            raise ValueError(f"line {lineno}: bad generator {s!r}")
        idx = [int(v) for v in m.group(2).split(",")]
        if any(v >= dim for v in idx):
            raise ValueError(f"line {lineno}: index out of range in {s!r}")
        if m.group(1) == "P":
            return 1, P(idx[0])
        sign, gen = j_resolved(*idx)
        if gen is None:
            raise ValueError(f"line {lineno}: J indices must differ")
        return sign, gen

    def parse_side(s: str, lineno: int):
        combo = {}
        for piece in re.split(r"(?=[+-])", s.replace(" ", "")):
            if not piece or piece in "+-":
                continue
            sign = -1 if piece.startswith("-") else 1
            piece = piece.lstrip("+-")
            coeff = Scalar.of(sign)
            while True:
                m = re.match(r"(\d+(?:/\d+)?|m2)\*", piece)
                if m is None:
                    break
                tokv = m.group(1)
                coeff = coeff * (Scalar.m2() if tokv == "m2"
                                 else Scalar.of(Fraction(tokv)))
                piece = piece[m.end():]
            if piece == "0":
                continue
            gsign, gen = parse_gen(piece, lineno)
            cur = combo.get(gen, Scalar.zero())
            combo[gen] = cur + coeff * gsign
        return combo

    n = (dim - 1) // 2
    D = dim
    gens = tuple([J(a, b) for a in range(D) for b in range(a + 1, D)]
                 + [P(a) for a in range(D)])
    structure = {}
    deformed = False
    for lineno, g1s, g2s, rhs in brackets:
        s1, g1 = parse_gen(g1s, lineno)
        s2, g2 = parse_gen(g2s, lineno)
        combo = parse_side(rhs, lineno)
        combo = {g: c * (s1 * s2) for g, c in combo.items()}
        deformed = deformed or any(c.depends_on("m2") for c in combo.values())
        entries = tuple(sorted(((g, c) for g, c in combo.items()
                                if not c.is_zero()), key=lambda kv: kv[0]))
        if entries:
            structure[(g1, g2)] = entries
            structure[(g2, g1)] = tuple((g, -c) for g, c in entries)

    from .algebra import _lorentz_metric
    alg = LieAlgebra(name=name, n=n, generators=gens, structure=structure,
                     metric=_lorentz_metric(D),
                     deformation_tag="m2" if deformed else None)
    alg.tensors[n + 1] = invariant_tensor(n)
    report = check_jacobi(alg)
    if not report.ok:
        raise ValueError(f"algebra fails the Jacobi identity: "
                         f"{len(report.violations)} violation(s)")
    return alg
