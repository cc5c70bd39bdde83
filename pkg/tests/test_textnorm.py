from chainmine.textnorm import (
    looks_cjk,
    normalize_alias,
    normalize_company,
    normalize_quote,
    normalize_quote_with_map,
)


def test_alias_case_and_whitespace():
    assert normalize_alias("  Huawei   Technologies ") == "huawei technologies"
    assert normalize_alias("HUAWEI") == normalize_alias("huawei")
    assert normalize_alias("A\tB\nC") == "a b c"


def test_quote_folds_typographic_characters():
    assert normalize_quote("it’s a “test”") == 'it\'s a "test"'
    # every dash variant folds to ascii hyphen
    assert normalize_quote("chip–maker") == "chip-maker"
    assert normalize_quote("chip—maker") == "chip-maker"


def test_quote_map_points_back_into_raw_text():
    raw = "A  “B”   C"
    norm, idx = normalize_quote_with_map(raw)
    assert norm == 'a "b" c'
    assert len(idx) == len(norm)
    for i, ch in enumerate(norm):
        if ch == " ":
            assert raw[idx[i]].isspace()
        elif ch == '"':
            assert raw[idx[i]] in "“”"
        else:
            assert raw[idx[i]].casefold() == ch


def test_quote_map_trailing_whitespace_dropped():
    norm, idx = normalize_quote_with_map("abc   ")
    assert norm == "abc"
    assert len(idx) == 3


def test_company_strips_corporate_suffixes():
    assert normalize_company("Huawei Technologies Co., Ltd.") == "huawei technologies"
    assert normalize_company("Lumina Semiconductor GmbH") == "lumina semiconductor"
    assert normalize_company("ACME Corp") == "acme"
    # repeated suffixes strip until none remain
    assert normalize_company("Foo Holdings Ltd.") == "foo"


def test_company_keeps_name_that_is_only_a_suffix():
    # stripping must not produce an empty string for a name like "Limited"
    assert normalize_company("Limited") == "limited"


def test_company_drops_punctuation():
    assert normalize_company("S&P Global") == "s p global"


def test_looks_cjk():
    assert looks_cjk("华为供应商")
    assert not looks_cjk("Huawei suppliers")
    assert not looks_cjk("")
    # mixed text crosses the threshold at one fifth
    assert looks_cjk("abcd华")
