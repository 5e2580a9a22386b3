"""Tests for utility functions."""

import json

import pytest

from superefficiency_lab.utils import emit_error_object, parse_number_list, print_error, print_info


class TestParseNumberList:
    """Tests for parse_number_list function."""

    def test_none_passes_through(self):
        assert parse_number_list(None) is None

    def test_floats(self):
        assert parse_number_list("0, 0.5,1") == [0.0, 0.5, 1.0]

    def test_scientific_integers(self):
        """Test that 1e3 is accepted as an integer."""
        values = parse_number_list("10,100,1e3", integer=True)

        assert values == [10, 100, 1000]
        assert all(isinstance(v, int) for v in values)

    def test_trailing_comma(self):
        assert parse_number_list("1,2,", integer=True) == [1, 2]

    def test_infinity(self):
        assert parse_number_list("-inf,inf") == [float("-inf"), float("inf")]

    @pytest.mark.parametrize("text", ["", " , ", "1,abc"])
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            parse_number_list(text)

    @pytest.mark.parametrize("text", ["1.5", "inf"])
    def test_non_integral(self, text):
        with pytest.raises(ValueError, match="not an integer"):
            parse_number_list(text, integer=True)


class TestMessages:
    """Tests for stderr helpers."""

    def test_plain_when_not_a_tty(self, capsys):
        print_error("boom")
        print_info("note")

        captured = capsys.readouterr()
        assert captured.out == ""
        assert captured.err == "Error: boom\nnote\n"

    def test_error_object_is_one_json_line(self, capsys):
        emit_error_object({"key": "epsilon", "error": "invalid_config", "message": "must be positive"})

        err = capsys.readouterr().err
        assert err.count("\n") == 1
        assert json.loads(err) == {"error": "invalid_config", "key": "epsilon", "message": "must be positive"}
        assert err.index('"error"') < err.index('"key"')
