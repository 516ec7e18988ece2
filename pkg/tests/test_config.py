import math

import pytest

from magnonchain import (ValidationError, build_run, parse_angle,
                         parse_config)

MINIMAL = """
Delta = 100
lambda = 0.04
beta_p = 1
beta_q = 3
L = 99
command = chern
"""


class TestAngles:
    @pytest.mark.parametrize("text,value", [
        ("0.5", 0.5),
        ("pi", math.pi),
        ("-pi/4", -math.pi / 4),
        ("2pi/3", 2 * math.pi / 3),
        ("1.5pi", 1.5 * math.pi),
        ("pi/6", math.pi / 6),
    ])
    def test_accepted(self, text, value):
        assert parse_angle(text) == pytest.approx(value)

    def test_rejected(self):
        with pytest.raises(ValidationError):
            parse_angle("two pi")
        with pytest.raises(ValidationError):
            parse_angle("pi/0")


class TestParse:
    def test_minimal_document(self):
        cfg = build_run(parse_config(MINIMAL))
        assert cfg.command == "chern"
        assert cfg.params.Delta == 100.0
        assert cfg.params.lam == 0.04
        assert cfg.params.L == 99
        assert cfg.params.bc == "periodic"
        assert cfg.n_delta == 30

    def test_comments_and_blanks(self):
        text = MINIMAL + "\n# a comment\n\ndelta = pi/6  # inline\n"
        mapping = parse_config(text)
        assert mapping["delta"] == pytest.approx(math.pi / 6)

    def test_unknown_key_with_line_number(self):
        with pytest.raises(ValidationError, match=":8"):
            parse_config(MINIMAL + "typo_key = 3\n")

    def test_duplicate_key(self):
        with pytest.raises(ValidationError, match="duplicate"):
            parse_config(MINIMAL + "Delta = 5\n")

    def test_bad_syntax(self):
        with pytest.raises(ValidationError, match="key = value"):
            parse_config("just words\n")

    def test_bad_type(self):
        with pytest.raises(ValidationError, match="cannot parse"):
            parse_config("L = ninety\n")

    def test_bool_values(self):
        for raw, expect in [("true", True), ("off", False), ("1", True)]:
            assert parse_config(f"long_run = {raw}")["long_run"] is expect


class TestBuildRun:
    def test_missing_required(self):
        with pytest.raises(ValidationError, match="missing required"):
            build_run(parse_config("Delta = 5\ncommand = chern\n"))

    def test_missing_command(self):
        with pytest.raises(ValidationError, match="no command"):
            build_run(parse_config(MINIMAL.replace("command = chern\n", "")))

    def test_unknown_command(self):
        with pytest.raises(ValidationError, match="unknown command"):
            build_run(parse_config(MINIMAL), command="fly")

    def test_cli_command_wins(self):
        cfg = build_run(parse_config(MINIMAL), command="table1")
        assert cfg.command == "table1"

    def test_butterfly_defaults_open(self):
        cfg = build_run(parse_config(MINIMAL), command="butterfly")
        assert cfg.params.bc == "open"
        explicit = parse_config(MINIMAL + "bc = periodic\n")
        assert build_run(explicit, command="butterfly").params.bc == "periodic"

    def test_model_validation_propagates(self):
        bad = parse_config(MINIMAL.replace("beta_p = 1", "beta_p = 6"))
        with pytest.raises(ValidationError):
            build_run(bad)
