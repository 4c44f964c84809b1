"""Tests for the JSON codecs of expressions and forms."""

from __future__ import annotations

import json

import pytest

from calculus.codec import expr_from_json, expr_to_json, form_from_json, form_to_json
from calculus.errors import CodecError
from calculus.expr import evaluate, sqrt, var
from calculus.forms import Form, Space


class TestExprCodec:
    def test_decodes_nested_payload(self) -> None:
        payload = {
            "op": "add",
            "args": [{"op": "pow", "base": {"var": 0}, "exp": 2}, {"const": 1.5}],
        }
        assert evaluate(expr_from_json(payload), [2.0]) == pytest.approx(5.5)

    def test_encoded_expression_evaluates_the_same(self) -> None:
        expr = sqrt(var(0) ** 2 + 1) / (var(1) - 3)
        decoded = expr_from_json(json.loads(json.dumps(expr_to_json(expr))))
        assert evaluate(decoded, [0.5, 1.0]) == pytest.approx(evaluate(expr, [0.5, 1.0]))

    @pytest.mark.parametrize(
        "payload",
        [
            {"const": "one"},
            {"var": 1.5},
            {"var": -1},
            {"op": "pow", "base": {"var": 0}, "exp": 0.5},
            {"op": "div", "args": [{"var": 0}]},
            {"op": "tan", "args": [{"var": 0}]},
            {"op": "add", "args": []},
            [1, 2],
        ],
    )
    def test_rejects_invalid_payloads(self, payload: object) -> None:
        with pytest.raises(CodecError):
            expr_from_json(payload)


class TestFormCodec:
    def test_form_payload(self) -> None:
        payload = {
            "degree": 2,
            "dim": 3,
            "space": "ambient",
            "terms": [{"indices": [1, 0], "coeff": {"var": 2}}],
        }
        form = form_from_json(payload)
        assert form.degree == 2
        assert evaluate(form.coefficient((0, 1)), [0.0, 0.0, 4.0]) == pytest.approx(-4.0)

    def test_form_to_json_is_decodable(self) -> None:
        form = Form.basis((0, 2), 3, Space.CHART, var(1) * 2)
        decoded = form_from_json(form_to_json(form))
        assert decoded.space is Space.CHART
        assert list(decoded.terms) == [(0, 2)]

    def test_rejects_wrong_index_length(self) -> None:
        payload = {"degree": 1, "dim": 3, "terms": [{"indices": [0, 1], "coeff": {"const": 1}}]}
        with pytest.raises(CodecError):
            form_from_json(payload)

    def test_rejects_bad_schema(self) -> None:
        with pytest.raises(CodecError):
            form_from_json({"degree": -1, "dim": 3})
