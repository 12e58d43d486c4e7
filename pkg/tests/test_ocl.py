import math
import random

import pytest
from hypothesis import given, strategies as st

from knowcard import ocl
from knowcard.ocl import (
    Binary,
    BoolLit,
    Call,
    Env,
    EvalError,
    Ident,
    LexError,
    NumberLit,
    ParseError,
    TokenKind,
    TypeCheckError,
    Unary,
)

from generators import random_env, random_expr
from ocl_oracle import OracleError, oracle_evaluate

CONE_FORMULA = "external_tip_diameter + 2 * (cone_length * SIN(cone_angle))"
CONE_CONSTRAINT = f"context interior_diameter inv :\ninterior_diameter = {CONE_FORMULA}"

CONE_ENV_30 = {
    "interior_diameter": 7.0,
    "external_tip_diameter": 2.0,
    "cone_length": 5.0,
    "cone_angle": 30.0,
}

# frozen with an independent high-precision calculation (mpmath @ 60 dps):
# 2 + 10*sin(20 deg) and the corresponding residual against 7.0
EXPECTED_AT_20_DEG = 5.420201433256687
EXPECTED_RESIDUAL_20 = 1.579798566743313


# --- tokenizer ---------------------------------------------------------------


def test_tokenize_simple_expression():
    kinds = [(t.kind, t.lexeme) for t in ocl.tokenize("2 * (a)")]
    assert kinds == [
        (TokenKind.NUMBER, "2"),
        (TokenKind.OP, "*"),
        (TokenKind.LPAREN, "("),
        (TokenKind.IDENT, "a"),
        (TokenKind.RPAREN, ")"),
    ]


def test_tokenize_function_call_is_plain_ident():
    kinds = [(t.kind, t.lexeme) for t in ocl.tokenize("SIN(cone_angle)")]
    assert kinds == [
        (TokenKind.IDENT, "SIN"),
        (TokenKind.LPAREN, "("),
        (TokenKind.IDENT, "cone_angle"),
        (TokenKind.RPAREN, ")"),
    ]


def test_tokenize_bad_number_offset():
    with pytest.raises(LexError) as exc:
        ocl.tokenize("3..5")
    assert exc.value.offset == 2


def test_tokenize_illegal_character_offset():
    with pytest.raises(LexError) as exc:
        ocl.tokenize("a ? b")
    assert exc.value.offset == 2


def test_tokenize_keywords_are_case_sensitive():
    tokens = ocl.tokenize("and AND And")
    assert [t.kind for t in tokens] == [TokenKind.KEYWORD, TokenKind.IDENT, TokenKind.IDENT]


def test_tokenize_two_char_operators():
    lexemes = [t.lexeme for t in ocl.tokenize("a <= b >= c <> d < e > f")]
    assert lexemes == ["a", "<=", "b", ">=", "c", "<>", "d", "<", "e", ">", "f"]


def test_tokenize_offsets_strictly_increase_and_reproduce_source():
    source = "context x inv : a + 2.5e-1 * (b - c) <> d"
    tokens = ocl.tokenize(source)
    offsets = [t.offset for t in tokens]
    assert offsets == sorted(set(offsets))
    assert "".join(t.lexeme for t in tokens) == "".join(source.split())
    for token in tokens:
        if token.kind is TokenKind.NUMBER:
            assert math.isfinite(float(token.lexeme))


# --- parser ------------------------------------------------------------------


def test_parse_precedence_mul_over_add():
    expr = ocl.parse_expression_text("a + 2 * b")
    assert expr == Binary("+", Ident("a"), Binary("*", NumberLit(2.0), Ident("b")))


def test_parse_cone_formula_shape():
    expr = ocl.parse_expression_text(CONE_FORMULA)
    assert expr == Binary(
        "+",
        Ident("external_tip_diameter"),
        Binary(
            "*",
            NumberLit(2.0),
            Binary("*", Ident("cone_length"), Call("SIN", (Ident("cone_angle"),))),
        ),
    )


def test_parse_comparison_is_non_associative():
    with pytest.raises(ParseError):
        ocl.parse_expression_text("a = b = c")


def test_parse_left_associativity():
    assert ocl.parse_expression_text("a - b - c") == Binary(
        "-", Binary("-", Ident("a"), Ident("b")), Ident("c")
    )


def test_parse_not_binds_looser_than_comparison():
    assert ocl.parse_expression_text("not a = b") == Unary(
        "not", Binary("=", Ident("a"), Ident("b"))
    )


def test_parse_trailing_input_rejected():
    with pytest.raises(ParseError) as exc:
        ocl.parse_expression_text("a + b c")
    assert exc.value.offset == 6


def test_parse_unknown_function():
    with pytest.raises(ParseError):
        ocl.parse_expression_text("LOG(a)")


def test_parse_function_arity():
    with pytest.raises(ParseError):
        ocl.parse_expression_text("MIN(a)")
    with pytest.raises(ParseError):
        ocl.parse_expression_text("SIN(a, b)")


def test_parse_function_names_case_insensitive():
    assert ocl.parse_expression_text("sin(a)") == Call("SIN", (Ident("a"),))
    assert ocl.parse_expression_text("Max(a, b)") == Call("MAX", (Ident("a"), Ident("b")))


def test_parse_error_carries_expected_set():
    with pytest.raises(ParseError) as exc:
        ocl.parse_expression_text("(a + b")
    assert ")" in exc.value.expected


# --- constraints ---------------------------------------------------------------


def test_parse_constraint_full_form():
    constraint = ocl.parse_constraint(CONE_CONSTRAINT)
    assert constraint.context_name == "interior_diameter"
    assert isinstance(constraint.body, Binary) and constraint.body.op == "="
    assert constraint.body.left == Ident("interior_diameter")


def test_parse_constraint_non_boolean_body():
    with pytest.raises(TypeCheckError) as exc:
        ocl.parse_constraint("context x inv : 1 + 2")
    assert exc.value.code == "NON_BOOLEAN_BODY"


def test_parse_constraint_missing_context():
    with pytest.raises(ParseError):
        ocl.parse_constraint("inv : a = b")


def test_parse_constraint_inner_type_mismatch():
    with pytest.raises(TypeCheckError) as exc:
        ocl.parse_constraint("context x inv : (1 + true) = 2")
    assert exc.value.code == "TYPE_MISMATCH"


# --- evaluation -----------------------------------------------------------------


def test_evaluate_sin_zero():
    assert ocl.evaluate(ocl.parse_expression_text("SIN(cone_angle)"), Env({"cone_angle": 0.0})) == 0.0


def test_evaluate_cone_formula_at_30_degrees_is_exact():
    expr = ocl.parse_expression_text(CONE_FORMULA)
    env = Env({"external_tip_diameter": 2.0, "cone_length": 5.0, "cone_angle": 30.0})
    assert ocl.evaluate(expr, env) == 7.0


def test_evaluate_cone_formula_at_20_degrees_matches_oracle_value():
    expr = ocl.parse_expression_text(CONE_FORMULA)
    env = Env({"external_tip_diameter": 2.0, "cone_length": 5.0, "cone_angle": 20.0})
    assert ocl.evaluate(expr, env) == EXPECTED_AT_20_DEG


def test_evaluate_unbound_identifier():
    with pytest.raises(EvalError) as exc:
        ocl.evaluate(ocl.parse_expression_text("missing + 1"), Env({}))
    assert exc.value.code == "UNBOUND_IDENT"
    assert "missing" in str(exc.value)


def test_evaluate_division_by_zero():
    with pytest.raises(EvalError) as exc:
        ocl.evaluate(ocl.parse_expression_text("1 / (a - a)"), Env({"a": 3.0}))
    assert exc.value.code == "DIV_BY_ZERO"


def test_evaluate_no_bool_number_mixing():
    with pytest.raises(EvalError) as exc:
        ocl.evaluate(Binary("+", NumberLit(1.0), BoolLit(True)), Env({}))
    assert exc.value.code == "TYPE_MISMATCH"


def test_evaluate_sqrt_domain_error():
    with pytest.raises(EvalError) as exc:
        ocl.evaluate(ocl.parse_expression_text("SQRT(0 - 4)"), Env({}))
    assert exc.value.code == "DOMAIN_ERROR"


def test_evaluate_short_circuit_protects_right_side():
    guarded = ocl.parse_expression_text("false and 1 / z = 1")
    assert ocl.evaluate(guarded, Env({"z": 0.0})) is False
    guarded_or = ocl.parse_expression_text("true or 1 / z = 1")
    assert ocl.evaluate(guarded_or, Env({"z": 0.0})) is True


def test_evaluate_equality_uses_tolerance():
    expr = ocl.parse_expression_text("a = b")
    assert ocl.evaluate(expr, Env({"a": 1.0, "b": 1.0 + 1e-13})) is True
    assert ocl.evaluate(expr, Env({"a": 1.0, "b": 1.1})) is False
    assert ocl.evaluate(expr, Env({"a": 1.0, "b": 1.0 + 1e-13}), rel_tol=0.0, abs_tol=0.0) is False


# --- check_invariant -------------------------------------------------------------


def test_check_invariant_paper_values_hold_exactly():
    constraint = ocl.parse_constraint(CONE_CONSTRAINT)
    report = ocl.check_invariant(constraint, Env(CONE_ENV_30))
    assert report.holds is True
    assert report.lhs_value == 7.0
    assert report.rhs_value == 7.0
    assert report.residual == 0.0
    assert report.violated_subterms == ()


def test_check_invariant_violation_residual():
    constraint = ocl.parse_constraint(CONE_CONSTRAINT)
    env = Env({**CONE_ENV_30, "interior_diameter": 7.1})
    report = ocl.check_invariant(constraint, env)
    assert report.holds is False
    assert abs(report.residual - 0.1) <= 1e-12
    # the violated span covers the top-level equality in the source
    assert len(report.violated_subterms) == 1
    start, end = report.violated_subterms[0]
    assert CONE_CONSTRAINT[start:end].startswith("interior_diameter =")


def test_check_invariant_missing_binding():
    constraint = ocl.parse_constraint(CONE_CONSTRAINT)
    env = Env({k: v for k, v in CONE_ENV_30.items() if k != "cone_length"})
    with pytest.raises(EvalError) as exc:
        ocl.check_invariant(constraint, env)
    assert exc.value.code == "UNBOUND_IDENT"
    assert "cone_length" in str(exc.value)


def test_check_invariant_zero_tolerance_is_exact_equality():
    constraint = ocl.parse_constraint("context c inv : a = b")
    near = Env({"a": 1.0, "b": 1.0 + 1e-15})
    assert ocl.check_invariant(constraint, near).holds is True
    assert ocl.check_invariant(constraint, near, rel_tol=0.0, abs_tol=0.0).holds is False
    same = Env({"a": 1.5, "b": 1.5})
    assert ocl.check_invariant(constraint, same, rel_tol=0.0, abs_tol=0.0).holds is True


def test_check_report_residual_within_tolerance_when_holding():
    constraint = ocl.parse_constraint("context c inv : a = b")
    report = ocl.check_invariant(constraint, Env({"a": 100.0, "b": 100.0 + 1e-8}), rel_tol=1e-9)
    assert report.holds
    assert report.residual <= max(1e-12, 1e-9 * 100.0)


# --- pretty printing / round trip -------------------------------------------------


def test_pretty_print_known_forms():
    assert ocl.pretty_print(ocl.parse_expression_text("a + 2 * b")) == "a + 2 * b"
    assert ocl.pretty_print(ocl.parse_expression_text("(a + 2) * b")) == "(a + 2) * b"
    assert ocl.pretty_print(ocl.parse_expression_text("not (a and b)")) == "not (a and b)"
    assert ocl.pretty_print(ocl.parse_expression_text("a - (b - c)")) == "a - (b - c)"


def test_roundtrip_seeded_generator():
    rng = random.Random(20240817)
    for i in range(300):
        ast = random_expr(rng, want_bool=bool(i % 2), depth=rng.randint(0, 5))
        printed = ocl.pretty_print(ast)
        reparsed = ocl.parse_expression_text(printed)
        assert reparsed == ast, printed
        assert ocl.pretty_print(reparsed) == printed


def test_evaluation_is_pure():
    rng = random.Random(7)
    for _ in range(50):
        ast = random_expr(rng, want_bool=False, depth=4)
        env = random_env(rng)
        try:
            first = ocl.evaluate(ast, env)
        except EvalError:
            continue
        for _ in range(3):
            assert ocl.evaluate(ast, env) == first


# --- oracle equivalence ----------------------------------------------------------


def _agree(a, b) -> bool:
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    if a == b:
        return True
    return abs(a - b) <= math.ulp(max(abs(a), abs(b)))


def test_oracle_equivalence_sample():
    rng = random.Random(99)
    checked = 0
    while checked < 200:
        ast = random_expr(rng, want_bool=bool(checked % 3 == 0), depth=rng.randint(1, 5))
        env = random_env(rng)
        try:
            ours = ocl.evaluate(ast, env)
        except EvalError as exc:
            with pytest.raises(OracleError) as oracle_exc:
                oracle_evaluate(ast, env)
            assert oracle_exc.value.code == exc.code
            continue
        assert _agree(ours, oracle_evaluate(ast, env))
        checked += 1


# --- numeric properties (hypothesis) ----------------------------------------------

finite = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e12, max_value=1e12)


@given(finite, finite)
def test_numeric_equal_zero_tolerance_is_fp_equality(a, b):
    assert ocl.numeric_equal(a, b, 0.0, 0.0) == (a == b)


@given(finite)
def test_numeric_equal_reflexive(a):
    assert ocl.numeric_equal(a, a, 1e-9, 1e-12)


@given(st.floats(min_value=-720, max_value=720, allow_nan=False))
def test_angle_unit_contract(v):
    deg = ocl.evaluate(Call("SIN", (Ident("x"),)), Env({"x": v}, "degrees"))
    rad = ocl.evaluate(Call("SIN", (Ident("y"),)), Env({"y": v * math.pi / 180}, "radians"))
    assert abs(deg - rad) <= 1e-12


# --- bindings files -----------------------------------------------------------------


def test_parse_bindings_basic():
    env = ocl.parse_bindings(
        "# cone parameters\nangle_unit = radians\ncone_angle = 0.5\nwidth=2 # inline\n"
    )
    assert env.angle_unit == "radians"
    assert env.bindings == {"cone_angle": 0.5, "width": 2.0}


def test_parse_bindings_defaults_to_degrees():
    assert ocl.parse_bindings("a = 1\n").angle_unit == "degrees"


def test_parse_bindings_rejects_garbage():
    with pytest.raises(ocl.BindingsError) as exc:
        ocl.parse_bindings("a = 1\nnot a pair\n")
    assert exc.value.line_no == 2
    with pytest.raises(ocl.BindingsError):
        ocl.parse_bindings("a = banana\n")
    with pytest.raises(ocl.BindingsError):
        ocl.parse_bindings("angle_unit = gradians\n")


def test_env_rejects_non_finite():
    with pytest.raises(ValueError):
        Env({"a": float("inf")})
    with pytest.raises(ValueError):
        Env({"a": float("nan")})
