"""Description-file parsing, validation, and error locations."""

import pytest
from mpmath import fabs, mp, mpf

from regprod import (
    SpecFileError,
    fibonacci_spec,
    is_plain_decimal,
    parse_spec_file,
    read_spec_file,
    regularized_product,
)

GOLDEN = """\
# the flagship sequence, declared through its recurrence parameters
name = golden
kind = lucas_u
P = 1
Q = -1
"""

GEOMETRIC = """\
name = doubling
kind = geometric
growth_ratio = 2
amplitude = 3
"""

TABLE = """\
name = listed
kind = table
growth_ratio = 2
amplitude = 3
correction_K = 0.001
correction_rho = 0.5
terms = 6 12 24 48 96 192 384 768 1536 3072 6144 12288 24576 49152 98304 196608
"""


def _write(tmp_path, text, name="seq.spec"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_plain_decimal_detector():
    for good in ("1", "-2", "+0.5", ".25", "3.", "1e9", "2.5E-3", "-0.125e+2"):
        assert is_plain_decimal(good), good
    for bad in ("inf", "nan", "0x10", "1_000", "1,5", "", "1e", "two", "1.2.3"):
        assert not is_plain_decimal(bad), bad


def test_lucas_file_reproduces_builtin(tmp_path):
    spec = parse_spec_file(_write(tmp_path, GOLDEN))
    assert spec.name == "golden"
    assert spec.supports_theta
    ours = regularized_product(spec, 20)
    builtin = regularized_product(fibonacci_spec(), 20)
    with mp.workdps(40):
        assert fabs(ours.delta.value - builtin.delta.value) < mpf("1e-25")


def test_geometric_and_table_files_parse(tmp_path):
    geo = parse_spec_file(_write(tmp_path, GEOMETRIC, "g.spec"))
    assert geo.name == "doubling"
    assert geo.max_index is None
    tab = parse_spec_file(_write(tmp_path, TABLE, "t.spec"))
    assert tab.max_index == 16
    with mp.workdps(30):
        assert tab.term_evaluator(9) == 1536


def test_missing_file_reports_path():
    with pytest.raises(SpecFileError) as info:
        parse_spec_file("/nonexistent/q.spec")
    assert "/nonexistent/q.spec" in str(info.value)
    assert info.value.lineno == 0


def test_malformed_lines_carry_line_numbers(tmp_path):
    path = _write(tmp_path, "name = x\nkind = geometric\njunk line\n")
    with pytest.raises(SpecFileError) as info:
        read_spec_file(path)
    assert info.value.lineno == 3
    assert "key = value" in str(info.value)

    path = _write(tmp_path, "name = x\n= 2\n", "a.spec")
    with pytest.raises(SpecFileError) as info:
        read_spec_file(path)
    assert info.value.lineno == 2

    path = _write(tmp_path, "name = x\nkind =\n", "b.spec")
    with pytest.raises(SpecFileError) as info:
        read_spec_file(path)
    assert info.value.lineno == 2


def test_duplicate_unknown_and_missing_keys(tmp_path):
    with pytest.raises(SpecFileError) as info:
        read_spec_file(_write(tmp_path, GOLDEN + "P = 2\n"))
    assert info.value.lineno == 6
    assert "duplicate" in str(info.value)

    with pytest.raises(SpecFileError) as info:
        read_spec_file(_write(tmp_path, GOLDEN + "flavor = ripe\n", "u.spec"))
    assert "unknown key 'flavor'" in str(info.value)

    with pytest.raises(SpecFileError) as info:
        read_spec_file(_write(tmp_path, "name = x\nkind = lucas_u\nP = 1\n", "m.spec"))
    assert "requires key 'Q'" in str(info.value)

    with pytest.raises(SpecFileError) as info:
        read_spec_file(_write(tmp_path, "name = x\nkind = mystery\n", "k.spec"))
    assert "unknown kind" in str(info.value)
    assert info.value.lineno == 2

    with pytest.raises(SpecFileError) as info:
        read_spec_file(_write(tmp_path, "kind = geometric\ngrowth_ratio = 2\namplitude = 1\n", "n.spec"))
    assert "'name'" in str(info.value)


def test_invalid_name_and_integer_fields(tmp_path):
    with pytest.raises(SpecFileError) as info:
        read_spec_file(_write(tmp_path, "name = 9lives\nkind = lucas_u\nP = 1\nQ = -1\n"))
    assert info.value.lineno == 1

    with pytest.raises(SpecFileError) as info:
        parse_spec_file(_write(tmp_path, "name = x\nkind = lucas_u\nP = 1.5\nQ = -1\n", "i.spec"))
    assert info.value.lineno == 3
    assert "integer" in str(info.value)


def test_semantic_errors_map_to_field_lines(tmp_path):
    # dominant-root condition fails: discriminant of (1, 1) is negative
    with pytest.raises(SpecFileError) as info:
        parse_spec_file(_write(tmp_path, "name = x\nkind = lucas_u\nP = 1\nQ = 1\n"))
    assert info.value.lineno == 2

    text = "name = x\nkind = geometric\ngrowth_ratio = 0.9\namplitude = 1\n"
    with pytest.raises(SpecFileError) as info:
        parse_spec_file(_write(tmp_path, text, "r.spec"))
    assert info.value.lineno == 3
    assert "growth ratio" in str(info.value)

    text = "name = x\nkind = geometric\ngrowth_ratio = 2\namplitude = -1\n"
    with pytest.raises(SpecFileError) as info:
        parse_spec_file(_write(tmp_path, text, "s.spec"))
    assert info.value.lineno == 4


def test_table_requirements(tmp_path):
    short = TABLE.replace(
        "terms = 6 12 24 48 96 192 384 768 1536 3072 6144 12288 24576 49152 98304 196608",
        "terms = 6 12 24 48 96 192 384")
    with pytest.raises(SpecFileError) as info:
        parse_spec_file(_write(tmp_path, short))
    assert "at least 8 terms" in str(info.value)
    assert info.value.lineno == 7

    broken = TABLE.replace(" 768 ", " 773 ")
    with pytest.raises(SpecFileError) as info:
        parse_spec_file(_write(tmp_path, broken, "v.spec"))
    assert info.value.lineno == 7
    assert "term 8" in str(info.value)

    bad_term = TABLE.replace(" 768 ", " 7x8 ")
    with pytest.raises(SpecFileError) as info:
        parse_spec_file(_write(tmp_path, bad_term, "w.spec"))
    assert "term 8 must be a decimal number" in str(info.value)
