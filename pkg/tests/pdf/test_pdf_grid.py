import numpy as np
import pytest

from ttspin.services.collider import load_pdf
from ttspin.services.pdf.grid import PdfGrid, canonical_flavor, parse_lhagrid
from ttspin.utils.errors import DataError, FlavorUnavailable, OutOfRange, ParseError, UnsupportedFormat


def test_canonical_flavor():
    assert canonical_flavor(0) == 21
    assert canonical_flavor(21) == 21
    assert canonical_flavor(-3) == -3


def test_parse_lhagrid_merges_blocks(small_grid_text):
    grid = parse_lhagrid(small_grid_text, name="small")

    assert list(grid.x_knots) == [1e-3, 1e-1, 1.0]
    assert list(grid.q_knots) == [10.0, 100.0, 1000.0]
    assert grid.flavor_ids == (-1, 1, 21)
    assert grid.values.shape == (3, 3, 3)


@pytest.mark.parametrize(
    "flavor,x,q,expected",
    [
        (21, 1e-3, 10.0, 2.0),
        (0, 1e-1, 100.0, 0.8),
        (-1, 1e-1, 10.0, 0.3),
        (1, 1e-3, 1000.0, 0.6),
        (21, 1e-1, 1000.0, 0.4),
    ],
)
def test_grid_is_exact_at_knots(small_grid_text, flavor, x, q, expected):
    grid = parse_lhagrid(small_grid_text)

    assert grid.xfx(flavor, x, q) == pytest.approx(expected, rel=1e-12)


def test_repeated_q_knot_keeps_lower_block(small_grid_text):
    grid = parse_lhagrid(small_grid_text)

    assert grid.xfx(1, 1e-3, 100.0) == pytest.approx(0.8, rel=1e-12)


def test_bilinear_midpoint_in_log_x(small_grid_text):
    grid = parse_lhagrid(small_grid_text)

    assert grid.xfx(21, 1e-2, 10.0) == pytest.approx(1.6, rel=1e-12)


def test_xfx_all_shape(small_grid_text):
    grid = parse_lhagrid(small_grid_text)
    values = grid.xfx_all(np.array([1e-3, 1e-2, 0.5]), 50.0)

    assert values.shape == (3, 3)


def test_q_is_clamped_to_grid(small_grid_text):
    grid = parse_lhagrid(small_grid_text)

    assert grid.xfx(21, 1e-3, 5.0) == pytest.approx(grid.xfx(21, 1e-3, 10.0), rel=1e-12)


def test_x_below_floor(small_grid_text):
    with pytest.raises(OutOfRange):
        parse_lhagrid(small_grid_text).xfx(21, 1e-4, 10.0)

    frozen = parse_lhagrid(small_grid_text, freeze_below_floor=True)
    assert frozen.xfx(21, 1e-4, 10.0) == pytest.approx(2.0, rel=1e-12)


def test_x_above_one(small_grid_text):
    with pytest.raises(OutOfRange):
        parse_lhagrid(small_grid_text).xfx(21, 1.5, 10.0)


def test_missing_flavor(small_grid_text):
    grid = parse_lhagrid(small_grid_text)

    assert not grid.has_flavor(2)
    with pytest.raises(FlavorUnavailable):
        grid.xfx(2, 0.1, 10.0)


def test_bytes_input(small_grid_text):
    grid = parse_lhagrid(small_grid_text.encode("utf-8"))

    assert grid.xfx(21, 1e-3, 10.0) == pytest.approx(2.0, rel=1e-12)


def test_non_numeric_token_position(small_grid_text):
    lines = small_grid_text.split("\n")
    lines[8] = "0.3 abc 1.2"

    with pytest.raises(ParseError) as excinfo:
        parse_lhagrid("\n".join(lines))

    assert excinfo.value.line == 9
    assert excinfo.value.column == 5


def test_unsupported_format(small_grid_text):
    with pytest.raises(UnsupportedFormat):
        parse_lhagrid(small_grid_text.replace("lhagrid1", "lhagrid2"))


def test_unterminated_header():
    with pytest.raises(ParseError):
        parse_lhagrid("Format: lhagrid1\nFlavors: [21]\n")


def test_short_value_table(small_grid_text):
    lines = small_grid_text.split("\n")
    del lines[9]

    with pytest.raises(ParseError):
        parse_lhagrid("\n".join(lines))


def test_wrong_column_count(small_grid_text):
    lines = small_grid_text.split("\n")
    lines[7] = "0.5 1.0"

    with pytest.raises(ParseError) as excinfo:
        parse_lhagrid("\n".join(lines))

    assert excinfo.value.line == 8


def test_declared_flavors_must_match(small_grid_text):
    with pytest.raises(ParseError):
        parse_lhagrid(small_grid_text.replace("Flavors: [-1, 1, 21]", "Flavors: [-2, 2, 21]"))


def test_bicubic_needs_four_knots(small_grid_text):
    with pytest.raises(ParseError):
        parse_lhagrid(small_grid_text, interpolation="bicubic")


def test_grid_rejects_descending_knots():
    with pytest.raises(ParseError):
        PdfGrid(x_knots=[0.5, 0.1], q_knots=[10.0, 100.0], flavors=(21,), values=np.ones((2, 2, 1)))


def test_load_pdf_missing_file(tmp_path):
    with pytest.raises(DataError):
        load_pdf(str(tmp_path / "missing.dat"))


def test_load_pdf_from_file(tmp_path, small_grid_text):
    path = tmp_path / "small_0000.dat"
    path.write_text(small_grid_text, encoding="utf-8")
    grid = load_pdf(str(path))

    assert grid.name == "small_0000"
    assert grid.xfx(21, 1e-3, 10.0) == pytest.approx(2.0, rel=1e-12)


def test_real_grid_gluon_dominates_small_x(grid_path):
    grid = load_pdf(grid_path)

    assert grid.xfx(21, 1e-2, 173.0) > grid.xfx(2, 1e-2, 173.0) > 0.0
    assert grid.xfx(2, 0.3, 173.0) > grid.xfx(-2, 0.3, 173.0)
