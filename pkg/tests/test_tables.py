"""Cell formatting, star rules, and table render round-trips."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svipanel.tables import (
    Cell,
    StudyTable,
    format_value,
    parse_cell,
    parse_csv,
    render_csv,
    render_text,
    stars_for_p,
)


class TestStars:
    def test_thresholds_strict(self):
        assert stars_for_p(0.009) == "***"
        assert stars_for_p(0.01) == "**"
        assert stars_for_p(0.049) == "**"
        assert stars_for_p(0.05) == "*"
        assert stars_for_p(0.099) == "*"
        assert stars_for_p(0.10) == ""
        assert stars_for_p(0.9) == ""

    def test_missing_p(self):
        assert stars_for_p(None) == ""
        assert stars_for_p(float("nan")) == ""


class TestFormatValue:
    def test_three_to_four_significant_figures(self):
        assert format_value(18.7412) == "18.741"
        assert format_value(0.0925) == "0.0925"
        assert format_value(7.01) == "7.01"
        assert format_value(3.85) == "3.85"
        assert format_value(6.284) == "6.284"

    def test_tiny_values_do_not_collapse(self):
        assert format_value(2.97e-06) == "0.00000297"
        assert format_value(-2.4e-05) == "-0.000024"

    def test_zero_and_nan(self):
        assert format_value(0.0) == "0"
        assert format_value(-0.0) == "0"
        assert format_value(float("nan")) == "nan"

    @given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_round_trips_within_rendered_precision(self, v):
        text = format_value(v)
        back = float(text)
        if v == 0 or abs(v) < 1e-12:
            assert back == 0
        else:
            assert back == pytest.approx(v, rel=5e-3, abs=1e-12)


class TestCellRender:
    def test_paper_style_significant(self):
        assert Cell(18.741, paren=7.01, p=0.004).render() == "18.741*** (7.01)"

    def test_paper_style_insignificant(self):
        assert Cell(3.85, paren=6.284, p=0.54).render() == "3.85 (6.284)"

    def test_paper_style_two_star(self):
        assert Cell(14.904, paren=7.56, p=0.03).render() == "14.904** (7.56)"

    def test_value_only(self):
        assert Cell(0.1273).render() == "0.1273"

    def test_parse_inverts(self):
        value, paren, stars = parse_cell("18.741*** (7.01)")
        assert value == 18.741 and paren == 7.01 and stars == "***"
        value, paren, stars = parse_cell("0.1273")
        assert value == 0.1273 and paren is None and stars == ""

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_cell("not a number")


def sample_table():
    table = StudyTable(
        title="Example study",
        row_labels=["Alpha", "Beta", "R^2"],
        col_labels=["Week 1", "Week 2"],
        footnotes=["standard errors in parentheses"],
    )
    table.set(0, 0, Cell(18.741, paren=7.01, p=0.004))
    table.set(0, 1, Cell(3.85, paren=6.284, p=0.54))
    table.set(1, 0, Cell(-0.512, paren=0.21, p=0.02))
    table.set(1, 1, Cell(14.904, paren=7.56, p=0.03))
    table.set(2, 0, Cell(0.114))
    table.set(2, 1, Cell(0.0909))
    return table


class TestStudyTable:
    def test_csv_round_trip(self):
        table = sample_table()
        text = render_csv(table, comment="config: seed=0")
        back = parse_csv(text)
        assert back.title == table.title
        assert back.row_labels == table.row_labels
        assert back.col_labels == table.col_labels
        for i in range(3):
            for j in range(2):
                orig = table.get(i, j)
                parsed = back.get(i, j)
                assert parsed.value == pytest.approx(float(format_value(orig.value)))
                assert parsed.stars == orig.stars

    def test_comment_line_first(self):
        text = render_csv(sample_table(), comment="config: seed=0")
        assert text.splitlines()[0] == "# config: seed=0"

    def test_stars_survive_round_trip(self):
        table = sample_table()
        back = parse_csv(render_csv(table))
        assert back.get(0, 0).stars == "***"
        assert back.get(1, 1).stars == "**"
        assert back.get(0, 1).stars == ""

    def test_text_render_contains_all_cells(self):
        table = sample_table()
        text = render_text(table, comment="config: seed=0")
        for i in range(3):
            for j in range(2):
                assert format_value(table.get(i, j).value) in text

    def test_missing_cells_render_empty(self):
        table = StudyTable(
            title="Sparse", row_labels=["a", "b"], col_labels=["x"], footnotes=[]
        )
        table.set(0, 0, Cell(1.0))
        text = render_csv(table)
        lines = text.splitlines()
        assert lines[2] == "b,"

    def test_by_label_access(self):
        table = sample_table()
        assert table.by_label("Beta", "Week 2").value == 14.904


class TestRoundTripProperty:
    @given(
        st.lists(
            st.tuples(
                st.floats(min_value=-1e4, max_value=1e4, allow_nan=False),
                st.floats(min_value=1e-4, max_value=1e3),
                st.floats(min_value=0.0, max_value=1.0),
            ),
            min_size=1,
            max_size=6,
        )
    )
    @settings(max_examples=100, deadline=None)
    def test_parse_recovers_printed_numbers(self, cells):
        table = StudyTable(
            title="Property",
            row_labels=[f"r{i}" for i in range(len(cells))],
            col_labels=["c"],
            footnotes=[],
        )
        for i, (v, se, p) in enumerate(cells):
            table.set(i, 0, Cell(v, paren=se, p=p))
        back = parse_csv(render_csv(table))
        for i, (v, se, p) in enumerate(cells):
            got = back.get(i, 0)
            assert got.value == float(format_value(v))
            assert got.paren == float(format_value(se))
            assert got.stars == stars_for_p(p)
