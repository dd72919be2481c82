"""Study-table container and its CSV / aligned-text renderings.

Cells hold a point value, an optional parenthetical (a standard error or
a p-value, stated in the footnotes), and the p-value that drives the
significance stars. Rendering is fixed-precision and re-parseable.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from decimal import Decimal


def stars_for_p(p: float | None) -> str:
    """Fixed rule: *** below 0.01, ** below 0.05, * below 0.10."""
    if p is None or p != p:
        return ""
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.10:
        return "*"
    return ""


def format_value(value: float) -> str:
    """Render a number to 3-4 significant figures.

    Two candidates are produced (three decimal places, four significant
    figures) and the one retaining more precision wins, so 18.741 and
    0.0925 both survive intact.
    """
    if value != value:
        return "nan"
    if value == 0 or abs(value) < 1e-12:
        return "0"
    fixed = f"{value:.3f}".rstrip("0").rstrip(".")
    sig = f"{value:.4g}"
    if "e" in sig or "E" in sig:
        sig = format(Decimal(sig), "f")
    sig = sig.rstrip("0").rstrip(".") if "." in sig else sig
    def digits(s: str) -> int:
        return len(s.lstrip("-0.").replace(".", ""))
    if fixed in ("", "-"):
        fixed = "0"
    return sig if digits(sig) > digits(fixed) else fixed


@dataclass
class Cell:
    """One table entry: value, optional parenthetical, optional p for stars."""

    value: float
    paren: float | None = None
    p: float | None = None

    @property
    def stars(self) -> str:
        return stars_for_p(self.p)

    def render(self) -> str:
        text = format_value(self.value) + self.stars
        if self.paren is not None:
            text += f" ({format_value(self.paren)})"
        return text


_CELL_RE = re.compile(
    r"^\s*(?P<value>-?\d+(?:\.\d+)?)(?P<stars>\*{0,3})"
    r"(?:\s+\((?P<paren>-?\d+(?:\.\d+)?)\))?\s*$"
)


def parse_cell(text: str) -> tuple[float, float | None, str]:
    """Invert :meth:`Cell.render`: (value, parenthetical, stars)."""
    m = _CELL_RE.match(text)
    if not m:
        raise ValueError(f"unparseable cell {text!r}")
    paren = m.group("paren")
    return (
        float(m.group("value")),
        float(paren) if paren is not None else None,
        m.group("stars"),
    )


@dataclass
class StudyTable:
    """A rectangular grid of labelled cells with footnotes."""

    title: str
    row_labels: list[str]
    col_labels: list[str]
    cells: dict[tuple[int, int], Cell] = field(default_factory=dict)
    footnotes: list[str] = field(default_factory=list)

    def set(self, row: int, col: int, cell: Cell) -> None:
        if not (0 <= row < len(self.row_labels) and 0 <= col < len(self.col_labels)):
            raise IndexError(f"cell ({row}, {col}) outside the grid")
        self.cells[(row, col)] = cell

    def get(self, row: int, col: int) -> Cell | None:
        return self.cells.get((row, col))

    def by_label(self, row_label: str, col_label: str) -> Cell | None:
        return self.get(self.row_labels.index(row_label), self.col_labels.index(col_label))


def render_csv(table: StudyTable, comment: str | None = None) -> str:
    """One header row, one line per table row, cells in combined form."""
    buf = io.StringIO()
    if comment:
        buf.write(f"# {comment}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([table.title] + list(table.col_labels))
    for i, label in enumerate(table.row_labels):
        row = [label]
        for j in range(len(table.col_labels)):
            cell = table.get(i, j)
            row.append(cell.render() if cell is not None else "")
        writer.writerow(row)
    for note in table.footnotes:
        writer.writerow([f"note: {note}"])
    return buf.getvalue()


def parse_csv(text: str) -> StudyTable:
    """Read back a table written by :func:`render_csv`."""
    rows = [
        r
        for r in csv.reader(io.StringIO(text))
        if r and not r[0].startswith("#")
    ]
    if not rows:
        raise ValueError("empty table text")
    title, *col_labels = rows[0]
    table = StudyTable(title=title, row_labels=[], col_labels=list(col_labels))
    for r in rows[1:]:
        if r[0].startswith("note: "):
            table.footnotes.append(r[0][len("note: "):])
            continue
        i = len(table.row_labels)
        table.row_labels.append(r[0])
        for j, cell_text in enumerate(r[1:]):
            if not cell_text.strip():
                continue
            value, paren, stars = parse_cell(cell_text)
            # recover a p consistent with the printed stars
            p = {"***": 0.001, "**": 0.02, "*": 0.07, "": None}[stars]
            table.set(i, j, Cell(value=value, paren=paren, p=p))
    return table


def render_text(table: StudyTable, comment: str | None = None) -> str:
    """Aligned plain text: value line with stars, parenthetical beneath."""
    top: list[list[str]] = []
    bottom: list[list[str]] = []
    for i in range(len(table.row_labels)):
        vals = []
        parens = []
        for j in range(len(table.col_labels)):
            cell = table.get(i, j)
            if cell is None:
                vals.append("")
                parens.append("")
            else:
                vals.append(format_value(cell.value) + cell.stars)
                parens.append(
                    f"({format_value(cell.paren)})" if cell.paren is not None else ""
                )
        top.append(vals)
        bottom.append(parens)

    headers = [table.title] + list(table.col_labels)
    widths = [len(h) for h in headers]
    for i, label in enumerate(table.row_labels):
        widths[0] = max(widths[0], len(label))
        for j in range(len(table.col_labels)):
            widths[j + 1] = max(widths[j + 1], len(top[i][j]), len(bottom[i][j]))

    def line(fields: list[str]) -> str:
        return "  ".join(f.ljust(w) for f, w in zip(fields, widths)).rstrip()

    out = []
    if comment:
        out.append(f"# {comment}")
    out.append(line(headers))
    out.append(line(["-" * w for w in widths]))
    for i, label in enumerate(table.row_labels):
        out.append(line([label] + top[i]))
        if any(bottom[i]):
            out.append(line([""] + bottom[i]))
    for note in table.footnotes:
        out.append(f"note: {note}")
    return "\n".join(out) + "\n"
