from fractions import Fraction

import pytest

import igusa

X2_Z3 = {"p": "3", "matrix": [["1"]]}


def test_zeta_of_a_square():
    z = igusa.zeta(X2_Z3, K=4)
    assert z["zeta"]["text"] == "(2/3) / (1 - (1/3)*t^2)"
    assert igusa.series(z) == [Fraction(2, 3), 0, Fraction(2, 9), 0]
    assert z["dispatch"].startswith("(i)")


def test_json_string_input():
    assert igusa.zeta('{"p": "3", "matrix": [["1"]]}') == igusa.zeta(X2_Z3)


def test_classify_two_adic():
    r = igusa.classify({"p": "2", "matrix": [["1", "0", "0"], ["0", "3", "0"], ["0", "0", "5"]]})
    assert [b["class"] for b in r["blocks"]] == ["Sq(1) + Hyp"]


def test_verify_against_the_oracle():
    r = igusa.verify({"p": "5", "matrix": [["1", "2"], ["2", "3"]], "linear": ["5", "0"], "constant": "25"}, K=5)
    assert r["status"] == "PASS"
    assert r["oracle_prefix"] == r["closed_form_prefix"]


def test_poincare_and_poles():
    assert igusa.poincare(X2_Z3)["poincare"]["text"] == "(1 + (1/3)*t) / (1 - (1/3)*t^2)"
    assert igusa.poles(X2_Z3)["text"] == "1 - (1/3)*t^2"


def test_errors():
    with pytest.raises(igusa.DomainError):
        igusa.zeta({"p": "4", "matrix": [["1"]]})
    with pytest.raises(igusa.ParseError):
        igusa.zeta({"p": "3", "matrix": [["1"]], "colour": "red"})
    with pytest.raises(ValueError):
        igusa.zeta({"p": "2", "matrix": [["1"]], "constant": "1"})
