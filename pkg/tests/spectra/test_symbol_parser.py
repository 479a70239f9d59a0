from fractions import Fraction

import pytest

from GENERAL.errors import ExprSyntaxError
from SPECTRA_APP.CORE.symbol_parser import (
    Binary,
    Call,
    Character,
    Compare,
    Digit,
    Number,
    Unary,
    Variable,
    format_symbol,
    parse_symbol,
    tokenize,
)


def test_tokenize_positions_and_unicode_ops():
    """Лексер хранит строку и позицию и приводит ≤ и − к ASCII."""
    tokens = tokenize("norm_xi ≤ 2 −\n1")
    assert [(t.kind, t.text) for t in tokens] == [
        ("name", "norm_xi"),
        ("op", "<="),
        ("number", "2"),
        ("op", "-"),
        ("number", "1"),
        ("end", ""),
    ]
    assert (tokens[4].line, tokens[4].col) == (2, 1)


def test_precedence_power_over_unary_minus():
    """-2^2 разбирается как -(2^2)."""
    root = parse_symbol("-2^2").root
    assert root == Unary(Binary("^", Number(2.0), Number(2.0)))


def test_power_is_right_associative():
    root = parse_symbol("2^3^2").root
    assert root == Binary("^", Number(2.0), Binary("^", Number(3.0), Number(2.0)))


def test_multiplication_binds_tighter_than_addition():
    root = parse_symbol("1 + norm_xi * 2").root
    assert root == Binary("+", Number(1.0), Binary("*", Variable("norm_xi"), Number(2.0)))


def test_comparison_is_lowest():
    root = parse_symbol("norm_x + 1 >= 2").root
    assert root == Compare(">=", Binary("+", Variable("norm_x"), Number(1.0)), Number(2.0))


def test_special_calls():
    """digit(x, j) и re_char/im_char с дробными литералами."""
    assert parse_symbol("digit(x, 3)").root == Digit(3)
    assert parse_symbol("re_char(1/4, x)").root == Character((Fraction(1, 4),), True)
    assert parse_symbol("im_char(-1/2, 3/4, x)").root == Character((Fraction(-1, 2), Fraction(3, 4)), False)


def test_function_call_and_uses_xi():
    expr = parse_symbol("if(norm_xi == 0, 1, exp(-norm_x))")
    assert isinstance(expr.root, Call)
    assert expr.root.name == "if"
    assert expr.uses_xi()
    assert not parse_symbol("max(norm_x, 1, digit(x, 0))").uses_xi()


def test_equality_ignores_positions():
    """Равенство выражений — по дереву, пробелы не важны."""
    assert parse_symbol("1+norm_xi") == parse_symbol("  1 +   norm_xi ")


def test_printer_reparses_to_same_tree():
    """Печать выражения разбирается в то же дерево."""
    for text in ("-2^2", "min(norm_x, bracket_xi) / (1 + norm_xi)", "re_char(1/4, x) < digit(x, 1)"):
        expr = parse_symbol(text)
        assert parse_symbol(format_symbol(expr)) == expr


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("1 +", 1, 4),
        ("(1 + 2", 1, 7),
        ("norm_y", 1, 1),
        ("1 $ 2", 1, 3),
        ("exp(1, 2)", 1, 1),
        ("min(1)", 1, 1),
        ("digit(y, 1)", 1, 7),
        ("1\n+ * 2", 2, 3),
        ("re_char(1/0, x)", 1, 11),
        ("1e400 + 1", 1, 1),
        ("norm_xi * 1e999", 1, 11),
    ],
)
def test_syntax_errors_report_position(text, line, col):
    """Синтаксические ошибки сообщают строку и позицию."""
    with pytest.raises(ExprSyntaxError) as info:
        parse_symbol(text)
    assert (info.value.line, info.value.col) == (line, col)
