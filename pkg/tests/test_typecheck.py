import pytest

from speclang.errors import SpecTypeError
from speclang.parser import parse
from speclang.typecheck import ACTION, FUNCTION, VALUE, typecheck


def kind_of_error(source: str) -> str:
    with pytest.raises(SpecTypeError) as e:
        typecheck(parse(source))

    return e.value.kind


def test_function_in_data():
    assert kind_of_error("let f(x) = x; let a = [f];") == SpecTypeError.FUNCTION_IN_DATA


def test_function_in_map():
    assert kind_of_error("let f(x) = x; let a = {g: f};") == SpecTypeError.FUNCTION_IN_DATA


def test_self_reference_is_a_forward_reference():
    assert kind_of_error("let g = g;") == SpecTypeError.UNBOUND_NAME


def test_recursive_function():
    assert kind_of_error("let f(x) = f(x);") == SpecTypeError.RECURSION_FORBIDDEN


def test_forward_reference():
    assert kind_of_error("let a = b; let b = 1;") == SpecTypeError.UNBOUND_NAME


def test_arity_mismatch():
    assert kind_of_error("let id(x) = x; let y = id(1, 2);") == SpecTypeError.ARITY_MISMATCH


def test_builtin_arity():
    assert kind_of_error("let n = parseInt();") == SpecTypeError.ARITY_MISMATCH


def test_function_compared_as_a_value():
    assert kind_of_error("let f(x) = x; let b = f == 1;") == SpecTypeError.FUNCTION_AS_VALUE


def test_calling_a_value():
    assert kind_of_error("let v = 1; let w = v(2);") == SpecTypeError.NOT_A_FUNCTION


def test_inferred_kinds():
    kinds = typecheck(parse("let id(x) = x; let y = id(1); action go! = click!(`#go`) when y == 1;"))

    assert kinds["id"] == FUNCTION
    assert kinds["y"] == VALUE
    assert kinds["go!"] == ACTION
    assert kinds["loaded?"] == ACTION


def test_let_in_binds_locally():
    typecheck(parse("let ~p = { let v = 1; v + 1 };"))

    assert kind_of_error("let ~p = { let v = 1; v }; let q = v;") == SpecTypeError.UNBOUND_NAME


def test_happened_is_always_defined():
    typecheck(parse("let ~p = loaded? in happened;"))
