"""Seeded generators for the six linear-algebra worksheet task kinds.

Each kind has a pure builder taking explicit matrices (exact answers computed
through :mod:`mathforge.ratmat`) and a random wrapper that only draws inputs
and delegates.  Systems are built roots-first: the integer solution vector is
drawn before the coefficients, so every generated system has the drawn roots
as its unique solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from . import latexgen, ratmat
from .latexgen import MatrixDelimiter
from .ratmat import LinSystem, RatMatrix

_MASK64 = (1 << 64) - 1
_XORSHIFT_MULT = 0x2545F4914F6CDD1D  # xorshift64* scrambling multiplier
_ZERO_SEED_SUBSTITUTE = 0x9E3779B97F4A7C15  # xorshift state must be nonzero


class Rng:
    """xorshift64* generator: shifts 12/25/27, 64-bit scrambling multiply.

    The algorithm is fixed so that identical seeds reproduce identical draw
    sequences on any platform.
    """

    def __init__(self, seed: int):
        state = seed & _MASK64
        self._state = state if state != 0 else _ZERO_SEED_SUBSTITUTE

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x ^= (x << 25) & _MASK64
        x ^= x >> 27
        self._state = x
        return (x * _XORSHIFT_MULT) & _MASK64

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], bias-free via rejection sampling."""
        if lo > hi:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            draw = self.next_u64()
            if draw < limit:
                return lo + draw % span


class NonGenerable(Exception):
    """Raised when redrawing cannot produce an admissible input."""

    def __init__(self, message, variant=None, task=None):
        super().__init__(message)
        self.variant = variant
        self.task = task


@dataclass(frozen=True)
class GeneratorParams:
    entry_lo: int = -5
    entry_hi: int = 5
    dim_lo: int = 1
    dim_hi: int = 3
    poly_degree: int = 2
    max_attempts: int = 1000

    def __post_init__(self):
        if self.entry_lo > self.entry_hi:
            raise ValueError("entry_lo must not exceed entry_hi")
        if not (1 <= self.dim_lo <= self.dim_hi <= 5):
            raise ValueError("need 1 <= dim_lo <= dim_hi <= 5")
        if self.poly_degree < 1:
            raise ValueError("poly_degree must be >= 1")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


@dataclass(frozen=True)
class Scalar:
    value: Fraction


@dataclass(frozen=True)
class Matrix:
    value: RatMatrix


@dataclass(frozen=True)
class Vector:
    values: tuple[Fraction, ...]


@dataclass(frozen=True)
class Message:
    text: str


Answer = Union[Scalar, Matrix, Vector, Message]


@dataclass(frozen=True)
class TaskInstance:
    kind: str
    statement: str
    answers: tuple[Answer, ...]


TASK_KINDS = ("determinant", "product", "inverse", "matrix_eq", "mat_poly", "system")

ANSWER_COUNTS = {
    "determinant": 1,
    "product": 2,
    "inverse": 1,
    "matrix_eq": 1,
    "mat_poly": 1,
    "system": 1,
}

# User-facing statement templates and non-existence messages, keyed by
# language.  Statements embed inline $…$ math fragments.
STRINGS = {
    "uk": {
        "determinant": (
            "Обчисліть визначник {det}, використовуючи: "
            "а) правило трикутників; "
            "б) метод розкладання визначника за елементами деякого рядка або стовпця; "
            "в) метод зведення до трикутного вигляду."
        ),
        "product": "Обчисліть добуток <b>AB</b> та <b>BA</b>: $A={a}$, $B={b}$",
        "inverse": (
            "Знайдіть матрицю, обернену до {m}: "
            "а) за допомогою алгебраїчних доповнень; б) методом Гауса."
        ),
        "matrix_eq": "Розв'яжіть матричне рівняння <b>ABX</b>=<b>C</b>: $A={a}$, $B={b}$, $C={c}$",
        "mat_poly": "Обчисліть $f(A)$, якщо $A={m}$, $f(x)={f}$",
        "system": (
            "Розв'яжіть систему рівнянь: а) методом Крамера; "
            "б) методом оберненої матриці; в) методом Гауса. {sys}"
        ),
        "no_product_ab": "Добуток АВ не існує",
        "no_product_ba": "Добуток ВА не існує",
    },
}


def _strings(lang: str) -> dict:
    try:
        return STRINGS[lang]
    except KeyError:
        raise ValueError(f"no statement table for language {lang!r}")


def build_determinant_task(m: RatMatrix, lang: str = "uk") -> TaskInstance:
    statement = _strings(lang)["determinant"].format(
        det=latexgen.render_matrix(m, MatrixDelimiter.VERT).wrapped()
    )
    return TaskInstance("determinant", statement, (Scalar(ratmat.det(m)),))


def build_product_task(a: RatMatrix, b: RatMatrix, lang: str = "uk") -> TaskInstance:
    strings = _strings(lang)
    answers = []
    for left, right, message_key in ((a, b, "no_product_ab"), (b, a, "no_product_ba")):
        try:
            answers.append(Matrix(ratmat.mat_mul(left, right)))
        except ratmat.DimensionMismatch:
            answers.append(Message(strings[message_key]))
    statement = strings["product"].format(
        a=latexgen.render_matrix(a).text, b=latexgen.render_matrix(b).text
    )
    return TaskInstance("product", statement, tuple(answers))


def build_inverse_task(m: RatMatrix, lang: str = "uk") -> TaskInstance:
    statement = _strings(lang)["inverse"].format(
        m=latexgen.render_matrix(m).wrapped()
    )
    return TaskInstance("inverse", statement, (Matrix(ratmat.inverse(m)),))


def build_matrix_eq_task(a: RatMatrix, b: RatMatrix, c: RatMatrix, lang: str = "uk") -> TaskInstance:
    statement = _strings(lang)["matrix_eq"].format(
        a=latexgen.render_matrix(a).text,
        b=latexgen.render_matrix(b).text,
        c=latexgen.render_matrix(c).text,
    )
    return TaskInstance("matrix_eq", statement, (Matrix(ratmat.solve_matrix_eq(a, b, c)),))


def build_matpoly_task(coeffs: Sequence[Fraction], m: RatMatrix, lang: str = "uk") -> TaskInstance:
    statement = _strings(lang)["mat_poly"].format(
        m=latexgen.render_matrix(m).text,
        f=latexgen.render_poly([Fraction(c) for c in coeffs]).text,
    )
    return TaskInstance("mat_poly", statement, (Matrix(ratmat.mat_poly(coeffs, m)),))


def build_system_task(a: RatMatrix, roots: Sequence[int], lang: str = "uk") -> TaskInstance:
    b = ratmat.mat_mul(a, ratmat.column_vector(roots))
    statement = _strings(lang)["system"].format(
        sys=latexgen.render_system(LinSystem(a, b)).wrapped()
    )
    return TaskInstance("system", statement, (Vector(tuple(Fraction(r) for r in roots)),))


def _random_matrix(rng: Rng, rows: int, cols: int, params: GeneratorParams) -> RatMatrix:
    entries = tuple(
        Fraction(rng.randint(params.entry_lo, params.entry_hi))
        for _ in range(rows * cols)
    )
    return RatMatrix(rows, cols, entries)


def gen_determinant_task(rng: Rng, params: GeneratorParams, lang: str = "uk") -> TaskInstance:
    return build_determinant_task(_random_matrix(rng, 3, 3, params), lang)


def gen_product_task(rng: Rng, params: GeneratorParams, lang: str = "uk") -> TaskInstance:
    a_rows = rng.randint(params.dim_lo, params.dim_hi)
    a_cols = rng.randint(params.dim_lo, params.dim_hi)
    b_rows = rng.randint(params.dim_lo, params.dim_hi)
    b_cols = rng.randint(params.dim_lo, params.dim_hi)
    a = _random_matrix(rng, a_rows, a_cols, params)
    b = _random_matrix(rng, b_rows, b_cols, params)
    return build_product_task(a, b, lang)


def gen_inverse_task(rng: Rng, params: GeneratorParams, lang: str = "uk") -> TaskInstance:
    for _ in range(params.max_attempts):
        m = _random_matrix(rng, 3, 3, params)
        if ratmat.det(m) != 0:
            return build_inverse_task(m, lang)
    raise NonGenerable("could not draw an invertible 3×3 matrix", task="inverse")


def gen_matrix_eq_task(rng: Rng, params: GeneratorParams, lang: str = "uk") -> TaskInstance:
    for _ in range(params.max_attempts):
        a = _random_matrix(rng, 2, 2, params)
        b = _random_matrix(rng, 2, 2, params)
        if ratmat.det(ratmat.mat_mul(a, b)) != 0:
            c = _random_matrix(rng, 2, 2, params)
            return build_matrix_eq_task(a, b, c, lang)
    raise NonGenerable("could not draw A, B with invertible product", task="matrix_eq")


def gen_matpoly_task(rng: Rng, params: GeneratorParams, lang: str = "uk") -> TaskInstance:
    m = _random_matrix(rng, 3, 3, params)
    leading = 0
    for _ in range(params.max_attempts):
        leading = rng.randint(params.entry_lo, params.entry_hi)
        if leading != 0:
            break
    else:
        raise NonGenerable("entry range admits no nonzero leading coefficient", task="mat_poly")
    coeffs = [Fraction(leading)] + [
        Fraction(rng.randint(params.entry_lo, params.entry_hi))
        for _ in range(params.poly_degree)
    ]
    return build_matpoly_task(coeffs, m, lang)


def gen_system_task(rng: Rng, params: GeneratorParams, lang: str = "uk") -> TaskInstance:
    # roots first, so the system provably has this integer solution
    roots = [rng.randint(params.entry_lo, params.entry_hi) for _ in range(3)]
    for _ in range(params.max_attempts):
        a = _random_matrix(rng, 3, 3, params)
        if ratmat.det(a) != 0:
            return build_system_task(a, roots, lang)
    raise NonGenerable("could not draw a nonsingular coefficient matrix", task="system")


_GENERATORS = {
    "determinant": gen_determinant_task,
    "product": gen_product_task,
    "inverse": gen_inverse_task,
    "matrix_eq": gen_matrix_eq_task,
    "mat_poly": gen_matpoly_task,
    "system": gen_system_task,
}


def generate_task(kind: str, rng: Rng, params: GeneratorParams, lang: str = "uk") -> TaskInstance:
    try:
        generator = _GENERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown task kind {kind!r}")
    return generator(rng, params, lang)
