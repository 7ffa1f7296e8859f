"""LaTeX emission for rationals, matrices, polynomials, systems and answers.

Emitted strings are math-mode fragments; :class:`MathSnippet` records whether
a fragment is meant to be wrapped in ``$…$`` when embedded in a document.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .ratmat import LinSystem, RatMatrix


class MatrixDelimiter(Enum):
    PAREN = "paren"  # matrix notation
    VERT = "vert"  # determinant notation


@dataclass(frozen=True)
class MathSnippet:
    text: str
    inline: bool = True

    def wrapped(self) -> str:
        """The fragment as it is embedded in a document."""
        return f"${self.text}$" if self.inline else self.text


def render_rational(q: Fraction) -> MathSnippet:
    """Integers print bare; proper fractions as \\frac with the sign outside."""
    return MathSnippet(_rational_text(q))


def _rational_text(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    sign = "-" if q < 0 else ""
    return f"{sign}\\frac{{{abs(q.numerator)}}}{{{q.denominator}}}"


def _matrix_body(m: RatMatrix) -> str:
    rows = [
        "&".join(_rational_text(m.at(i, j)) for j in range(m.cols))
        for i in range(m.rows)
    ]
    colspec = "c" * m.cols
    return "\\begin{array}{" + colspec + "} " + "\\\\".join(rows) + "\\end{array}"


def render_matrix(m: RatMatrix, delim: MatrixDelimiter = MatrixDelimiter.PAREN) -> MathSnippet:
    body = _matrix_body(m)
    if delim is MatrixDelimiter.VERT:
        return MathSnippet("\\left|" + body + "\\right|")
    return MathSnippet("\\left(" + body + "\\right)")


def _subscripted(name: str) -> str:
    """x1 → x_{1}; names without a trailing index pass through."""
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    return f"{head}_{{{tail}}}" if tail else name


def _coeff_term(coeff: Fraction, symbol: str, first: bool) -> str:
    """One signed term of a linear combination / polynomial."""
    sign = ""
    if coeff < 0:
        sign = "-"
    elif not first:
        sign = "+"
    mag = abs(coeff)
    if symbol == "":
        return sign + _rational_text(mag)
    if mag == 1:
        return sign + symbol
    return sign + _rational_text(mag) + symbol


def render_system(sys: LinSystem) -> MathSnippet:
    """Curly-braced equation stack with expanded, sign-normalized left sides."""
    lines = []
    for i in range(sys.n):
        terms = []
        for j in range(sys.n):
            coeff = sys.a.at(i, j)
            if coeff == 0:
                continue
            terms.append(_coeff_term(coeff, _subscripted(sys.var_names[j]), not terms))
        lhs = "".join(terms) if terms else "0"
        lines.append(f"{lhs}={_rational_text(sys.b.at(i, 0))}")
    body = "\\\\".join(lines)
    return MathSnippet("\\left\\{\\begin{array}{l} " + body + "\\end{array}\\right.")


def render_poly(coeffs: Sequence[Fraction], var: str = "x") -> MathSnippet:
    """Polynomial in descending degree; zero terms omitted, all-zero renders 0."""
    degree = len(coeffs) - 1
    terms = []
    for k, coeff in enumerate(coeffs):
        coeff = Fraction(coeff)
        if coeff == 0:
            continue
        power = degree - k
        if power == 0:
            symbol = ""
        elif power == 1:
            symbol = var
        else:
            symbol = f"{var}^{{{power}}}"
        terms.append(_coeff_term(coeff, symbol, not terms))
    return MathSnippet("".join(terms) if terms else "0")


def render_vector(values: Sequence[Fraction]) -> MathSnippet:
    inner = ",\\,".join(_rational_text(Fraction(v)) for v in values)
    return MathSnippet("\\left(" + inner + "\\right)")


def render_answer(ans) -> MathSnippet:
    """Dispatch over the answer union; messages stay outside math mode."""
    from .taskgen import Matrix, Message, Scalar, Vector

    if isinstance(ans, Scalar):
        return render_rational(ans.value)
    if isinstance(ans, Matrix):
        return render_matrix(ans.value, MatrixDelimiter.PAREN)
    if isinstance(ans, Vector):
        return render_vector(ans.values)
    if isinstance(ans, Message):
        return MathSnippet(ans.text, inline=False)
    raise TypeError(f"not an Answer: {ans!r}")
