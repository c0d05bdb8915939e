"""Model-file compilation, validation hook, and serialization round trips."""
import pytest

from chronos.core import Period
from chronos.modelfile import (
    ModelFileError,
    ModelValidationError,
    format_model,
    parse_model,
)

P = Period


def test_compile_fixture(m0):
    m, st = m0.model, m0.speech
    assert st == 7
    assert m.timeline.size == 10
    assert m.consts["d_jan"] == P(3, 4)
    assert m.preds[("empty", 1)][("tank5",)] == frozenset({P(2, 5)})
    assert m.culms[("building", 2)][("housecorp", "bridge2")] is True
    assert len(m.cparts["minute"].blocks) == 10
    assert m.gparts["fivepm"].blocks == (P(3, 3), P(7, 7))


def test_round_trip(m0):
    text = format_model(m0.model, m0.speech)
    again = parse_model(text)
    assert again.model == m0.model
    assert again.speech == m0.speech
    assert parse_model(format_model(again.model, again.speech)).model == m0.model


def test_blocks_must_divide():
    text = "timeline 10\nspeech 0\ncpart minute = blocks 3\n"
    with pytest.raises(ModelFileError) as err:
        parse_model(text)
    assert "divide" in str(err.value)


def test_explicit_cpart_blocks():
    cm = parse_model(
        "timeline 5\nspeech 1\nobject a\npred q/1\nmaximal q(a) = [0,1]\n"
        "cpart c = [0,1] [2,4]\ngpart g = [1,1]\n"
    )
    assert cm.model.cparts["c"].blocks == (P(0, 1), P(2, 4))


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("timeline 0\nspeech 0\n", "positive size"),
        ("timeline 5\n", "missing speech"),
        ("speech 1\n", "missing timeline"),
        ("timeline 5\nspeech 9\n", "off the timeline"),
        ("timeline 5\nspeech 1\nnonsense 4\n", "unknown directive"),
        ("timeline 5\nspeech 1\nobject a\nobject a\n", "declared twice"),
        ("timeline 5\nspeech 1\nmaximal q(a) = [0,1]\n", "undeclared predicate"),
        ("timeline 5\nspeech 1\npred q/1\nmaximal q(a) = [0,1]\n", "undeclared constant"),
        ("timeline 5\nspeech 1\nobject a\npred q/2\nmaximal q(a) = [0,1]\n", "arguments"),
        ("timeline 5\nspeech 1\nobject a\npred q/1\nculm q(a) = yes\n", "true or false"),
        ("timeline 5\nspeech 1\nperiodconst d = [3,1]\n", "invalid period"),
        ("timeline 5\nspeech 1\ncpart c = [0,1] [1,4]\n", "overlapping"),
    ],
)
def test_compile_errors(text, fragment):
    with pytest.raises(ModelFileError) as err:
        parse_model(text)
    assert fragment in str(err.value)


def test_validation_failures_are_reported():
    merged = (
        "timeline 8\nspeech 2\nobject a\npred q/1\n"
        "maximal q(a) = [1,2] [3,4]\n"
    )
    with pytest.raises(ModelValidationError) as err:
        parse_model(merged)
    assert any(v.code == "MergeablePeriods" for v in err.value.violations)

    gapped = "timeline 8\nspeech 2\ncpart c = [0,2] [4,7]\n"
    with pytest.raises(ModelValidationError) as err:
        parse_model(gapped)
    assert any(v.code == "IncompletePartitioning" for v in err.value.violations)

    covering = "timeline 4\nspeech 2\ngpart g = [0,1] [2,3]\n"
    with pytest.raises(ModelValidationError) as err:
        parse_model(covering)
    assert any(v.code == "GappyCoversAll" for v in err.value.violations)


def test_error_carries_line_number():
    with pytest.raises(ModelFileError) as err:
        parse_model("timeline 5\nspeech 1\nbogus directive\n")
    assert err.value.line == 3


def test_comments_and_blanks_ignored():
    cm = parse_model(
        "# header\n\ntimeline 4   # four points\nspeech 2\n\n"
        "object a\npred q/1\nmaximal q(a) = [0,1]\n"
    )
    assert cm.model.timeline.size == 4
