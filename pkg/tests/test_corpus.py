import pytest

from proptc.corpus import (
    LABELS,
    Article,
    TechniqueLabel,
    annotations_to_tsv,
    extract_fragment,
    load_corpus,
    parse_annotations,
    parse_article,
)
from proptc.errors import (
    EncodingError,
    FormatError,
    LabelError,
    MissingArticleError,
    SpanError,
)

CANONICAL = [
    "Loaded_Language",
    "Name_Calling,Labeling",
    "Repetition",
    "Doubt",
    "Exaggeration,Minimisation",
    "Appeal_to_fear-prejudice",
    "Flag-Waving",
    "Causal_Oversimplification",
    "Appeal_to_Authority",
    "Slogans",
    "Black-and-White_Fallacy",
    "Whataboutism,Straw_Men",
    "Thought-terminating_Cliches",
    "Bandwagon,Reductio_ad_hitlerum",
]


def test_label_schema_is_exactly_14():
    assert [str(l) for l in LABELS] == CANONICAL
    assert len(set(LABELS)) == 14


@pytest.mark.parametrize("spelling", CANONICAL)
def test_label_parse_print_round_trip(spelling):
    assert str(TechniqueLabel.parse(spelling)) == spelling


@pytest.mark.parametrize("bad", ["Foo", "slogans", " Slogans", "Slogans ", "", "Loaded Language"])
def test_label_rejects_unknown_spellings(bad):
    with pytest.raises(LabelError):
        TechniqueLabel.parse(bad)


def test_parse_article_reads_id_and_text(tmp_path):
    p = tmp_path / "article111.txt"
    p.write_text("Hello.", encoding="utf-8")
    article = parse_article(p)
    assert article.id == "111"
    assert article.text == "Hello."


def test_parse_article_empty_file(tmp_path):
    p = tmp_path / "article7.txt"
    p.write_text("", encoding="utf-8")
    article = parse_article(p)
    assert article.id == "7"
    assert article.text == ""


def test_parse_article_bad_filename(tmp_path):
    p = tmp_path / "notes.txt"
    p.write_text("x", encoding="utf-8")
    with pytest.raises(FormatError):
        parse_article(p)


def test_parse_article_rejects_invalid_utf8(tmp_path):
    p = tmp_path / "article3.txt"
    p.write_bytes(b"\xff\xfe\x00bad")
    with pytest.raises(EncodingError):
        parse_article(p)


def test_parse_article_preserves_newlines_and_unicode(tmp_path):
    text = "Līne one\n\nline three — ünïcode\n"
    p = tmp_path / "article42.txt"
    p.write_text(text, encoding="utf-8")
    assert parse_article(p).text == text


def test_parse_annotations_single_line(tmp_path):
    p = tmp_path / "ann.tsv"
    p.write_text("111\tSlogans\t10\t25\n", encoding="utf-8")
    assert parse_annotations(p) == [("111", TechniqueLabel.SLOGANS, 10, 25)]


def test_parse_annotations_inverted_span(tmp_path):
    p = tmp_path / "ann.tsv"
    p.write_text("111\tSlogans\t25\t10\n", encoding="utf-8")
    with pytest.raises(SpanError):
        parse_annotations(p)


def test_parse_annotations_unknown_label(tmp_path):
    p = tmp_path / "ann.tsv"
    p.write_text("111\tFoo\t0\t5\n", encoding="utf-8")
    with pytest.raises(LabelError):
        parse_annotations(p)


def test_parse_annotations_whitespace_label_rejected(tmp_path):
    p = tmp_path / "ann.tsv"
    p.write_text("111\t Slogans\t0\t5\n", encoding="utf-8")
    with pytest.raises(LabelError):
        parse_annotations(p)


def test_parse_annotations_wrong_column_count_reports_line(tmp_path):
    p = tmp_path / "ann.tsv"
    p.write_text("111\tSlogans\t0\t5\n111\tSlogans\t0\n", encoding="utf-8")
    with pytest.raises(FormatError, match=":2"):
        parse_annotations(p)


def test_parse_annotations_non_integer_offsets(tmp_path):
    p = tmp_path / "ann.tsv"
    p.write_text("111\tSlogans\tx\t5\n", encoding="utf-8")
    with pytest.raises(FormatError):
        parse_annotations(p)
    p.write_text("111\tSlogans\t-1\t5\n", encoding="utf-8")
    with pytest.raises(FormatError):
        parse_annotations(p)


def test_parse_annotations_skips_empty_lines_keeps_order(tmp_path):
    p = tmp_path / "ann.tsv"
    p.write_text("2\tDoubt\t0\t3\n\n1\tSlogans\t5\t9\n", encoding="utf-8")
    recs = parse_annotations(p)
    assert [r[0] for r in recs] == ["2", "1"]


def test_annotations_round_trip_byte_exact(tmp_path):
    content = "111\tSlogans\t10\t25\n9\tDoubt\t0\t2\n111\tSlogans\t10\t25\n"
    p = tmp_path / "ann.tsv"
    p.write_text(content, encoding="utf-8")
    assert annotations_to_tsv(parse_annotations(p)) == content


def test_extract_fragment_whole_text_slice():
    article = Article(id="1", text="Make America Great Again")
    frag = extract_fragment(article, 0, len(article.text), TechniqueLabel.SLOGANS)
    assert frag.text == "Make America Great Again"
    # The phrase is 24 characters; a span past the end is rejected.
    with pytest.raises(SpanError):
        extract_fragment(article, 0, 25, TechniqueLabel.SLOGANS)


def test_extract_fragment_single_char():
    frag = extract_fragment(Article(id="1", text="abc"), 0, 1, TechniqueLabel.DOUBT)
    assert frag.text == "a"


def test_extract_fragment_out_of_range():
    with pytest.raises(SpanError, match="1"):
        extract_fragment(Article(id="1", text="abc"), 2, 9, TechniqueLabel.DOUBT)


def _write_corpus(tmp_path):
    (tmp_path / "article1.txt").write_text("one two three", encoding="utf-8")
    (tmp_path / "article2.txt").write_text("four five", encoding="utf-8")
    ann = tmp_path / "ann.tsv"
    ann.write_text(
        "1\tDoubt\t0\t3\n2\tSlogans\t0\t4\n1\tDoubt\t4\t7\n", encoding="utf-8"
    )
    return ann


def test_load_corpus_order_and_count(tmp_path):
    ann = _write_corpus(tmp_path)
    frags = load_corpus(tmp_path, ann)
    assert len(frags) == 3
    assert [f.text for f in frags] == ["one", "four", "two"]
    for f in frags:
        article = parse_article(tmp_path / f"article{f.article_id}.txt")
        assert article.text[f.begin : f.end] == f.text


def test_load_corpus_missing_article(tmp_path):
    (tmp_path / "article1.txt").write_text("one", encoding="utf-8")
    ann = tmp_path / "ann.tsv"
    ann.write_text("1\tDoubt\t0\t3\n999\tDoubt\t0\t1\n", encoding="utf-8")
    with pytest.raises(MissingArticleError) as exc:
        load_corpus(tmp_path, ann)
    assert exc.value.article_ids == ["999"]


def test_load_corpus_dedup_flag(tmp_path):
    (tmp_path / "article1.txt").write_text("one two", encoding="utf-8")
    ann = tmp_path / "ann.tsv"
    ann.write_text("1\tDoubt\t0\t3\n1\tDoubt\t0\t3\n", encoding="utf-8")
    assert len(load_corpus(tmp_path, ann)) == 2
    assert len(load_corpus(tmp_path, ann, dedup=True)) == 1


def test_offsets_are_characters_not_bytes(tmp_path):
    (tmp_path / "article5.txt").write_text("é propaganda", encoding="utf-8")
    ann = tmp_path / "ann.tsv"
    ann.write_text("5\tDoubt\t2\t12\n", encoding="utf-8")
    frags = load_corpus(tmp_path, ann)
    assert frags[0].text == "propaganda"
