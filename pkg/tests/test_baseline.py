from hypothesis import given, settings
from hypothesis import strategies as st

from refdoc.baseline import keyword_predict, load_rules
from refdoc.corpus import RefactoringType as RT


def test_bundled_rules_cover_the_six_stems():
    rules = load_rules()
    assert [r.stem for r in rules] == \
        ["renam", "extract", "inlin", "pull", "push", "mov"]
    mov = rules[-1]
    assert {"movie", "movement"} <= set(mov.exclusions)


def test_decorator_message_has_no_match():
    label, matches = keyword_predict("Change name of `Decorator' to `Events'")
    assert label is None
    assert matches == []


def test_extracting_transactions_matches_extract():
    label, _ = keyword_predict(
        "Extracting transactions from HadoopArchiveFileSystem.")
    assert label is RT.EXTRACT_METHOD


def test_movie_excluded_but_moved_matches():
    label, matches = keyword_predict("the movie was moved")
    assert label is RT.MOVE_METHOD
    assert matches == [RT.MOVE_METHOD]


def test_priority_order_on_multi_stem_message():
    label, matches = keyword_predict("moved and renamed the helper")
    assert label is RT.RENAME_METHOD
    assert matches == [RT.RENAME_METHOD, RT.MOVE_METHOD]


def test_stem_matches_as_infix():
    label, _ = keyword_predict("removed dead code")
    assert label is RT.MOVE_METHOD  # "mov" inside "removed"


def test_label_is_first_of_matches():
    for message in ("pull up and push down", "inline after extracting",
                    "renamed moved pushed"):
        label, matches = keyword_predict(message)
        assert label is matches[0]


@given(st.text(max_size=120))
@settings(max_examples=200, deadline=None)
def test_case_insensitive(message):
    assert keyword_predict(message) == keyword_predict(message.upper())


@given(st.text(alphabet="qwerty .,!", max_size=40))
@settings(max_examples=100, deadline=None)
def test_stem_free_suffix_never_changes_matches(noise):
    base = "pulled up some methods"
    _, with_noise = keyword_predict(base + " " + noise)
    _, without = keyword_predict(base)
    assert with_noise == without


@given(st.text(max_size=120))
@settings(max_examples=200, deadline=None)
def test_label_membership_property(message):
    label, matches = keyword_predict(message)
    if label is None:
        assert matches == []
    else:
        assert label in matches
