"""Panel input/output, transition counting, and spell extraction.

Two on-disk formats are understood:

* a text grid: one line per year, whitespace-separated state symbols,
  one column per parcel;
* tidy CSV with header ``parcel,year,state``, years forming the same
  contiguous 0-based range for every parcel.

A bundled 22-year, 43-parcel land-use panel ships with the package.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import ConstraintViolation, EmptyPanel, RaggedRows, UnknownSymbol
from .model import N_STATES, ParcelPanel, State

__all__ = [
    "parse_panel",
    "serialize_panel",
    "parse_panel_csv",
    "count_transitions",
    "counts_table",
    "SpellSample",
    "extract_spells",
    "load_landuse_panel",
]

_SYMBOLS = tuple(s.name for s in State)


def parse_panel(text: str) -> ParcelPanel:
    """Parse a text grid into a panel.

    Each nonblank line is one year; tokens are state symbols separated by
    whitespace.  Raises :class:`UnknownSymbol` (with 1-based line and token
    position) for a bad symbol, :class:`RaggedRows` if lines disagree on the
    number of parcels, and :class:`EmptyPanel` for input with no rows.
    """
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            continue
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise RaggedRows(
                f"line {lineno} has {len(tokens)} parcels, expected {width}"
            )
        row = np.empty(len(tokens), dtype=np.int8)
        for col, tok in enumerate(tokens, start=1):
            if tok not in _SYMBOLS:
                raise UnknownSymbol(tok, lineno, col)
            row[col - 1] = State[tok]
        rows.append(row)
    if not rows:
        raise EmptyPanel("panel input contains no rows")
    return ParcelPanel(np.vstack(rows))


def serialize_panel(panel: ParcelPanel) -> str:
    """Render a panel back to the text-grid format (inverse of :func:`parse_panel`)."""
    lines = []
    for y in range(panel.n_years):
        lines.append(" ".join(State(int(s)).name for s in panel.states[y]))
    return "\n".join(lines) + "\n"


def parse_panel_csv(text: str) -> ParcelPanel:
    """Parse tidy CSV with header ``parcel,year,state`` into a panel.

    Years must form a contiguous 0-based range, identical for every parcel.
    Parcels become columns, ordered numerically when every id is an integer
    and lexicographically otherwise.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyPanel("CSV input is empty") from None
    if [h.strip().lower() for h in header] != ["parcel", "year", "state"]:
        raise RaggedRows(f"expected header parcel,year,state, got {','.join(header)!r}")

    cells: dict[str, dict[int, int]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not f.strip() for f in row):
            continue
        if len(row) != 3:
            raise RaggedRows(f"line {lineno}: expected 3 fields, got {len(row)}")
        parcel, year_s, sym = (f.strip() for f in row)
        try:
            year = int(year_s)
        except ValueError:
            raise RaggedRows(f"line {lineno}: year {year_s!r} is not an integer") from None
        if sym not in _SYMBOLS:
            raise UnknownSymbol(sym, lineno, 3)
        col = cells.setdefault(parcel, {})
        if year in col:
            raise RaggedRows(f"line {lineno}: duplicate cell for parcel {parcel!r}, year {year}")
        col[year] = int(State[sym])
    if not cells:
        raise EmptyPanel("CSV input contains no data rows")

    years = None
    for parcel, col in cells.items():
        got = sorted(col)
        if got[0] != 0 or got != list(range(len(got))):
            raise RaggedRows(
                f"parcel {parcel!r}: years must form a contiguous range 0..N-1, got {got}"
            )
        if years is None:
            years = got
        elif got != years:
            raise RaggedRows(
                f"parcel {parcel!r} covers {len(got)} years, others cover {len(years)}"
            )

    ids = list(cells)
    try:
        ids.sort(key=int)
    except ValueError:
        ids.sort()
    states = np.empty((len(years), len(ids)), dtype=np.int8)
    for p, parcel in enumerate(ids):
        for y in years:
            states[y, p] = cells[parcel][y]
    return ParcelPanel(states)


def count_transitions(panel: ParcelPanel) -> np.ndarray:
    """Pool year-to-year transition counts over all parcels.

    Returns a 4x4 integer array ``n[e, e']`` in F, C, J, B order.  Requires
    at least two years of data.
    """
    if panel.n_years < 2:
        raise ConstraintViolation("transition counting needs at least two years")
    a = panel.states[:-1].ravel()
    b = panel.states[1:].ravel()
    counts = np.zeros((N_STATES, N_STATES), dtype=np.int64)
    np.add.at(counts, (a, b), 1)
    return counts


def counts_table(counts) -> dict:
    """Nested ``{from: {to: count}}`` mapping with symbolic state names."""
    counts = np.asarray(counts)
    return {
        State(i).name: {State(j).name: int(counts[i, j]) for j in range(N_STATES)}
        for i in range(N_STATES)
    }


@dataclass(frozen=True)
class SpellSample:
    """Completed holding-time spells of one state, pooled over parcels.

    ``durations`` lists the lengths (in years) of maximal runs of the state
    that ended with an observed exit, in parcel-then-year order.  Runs still
    in progress in the final observed year are censored: counted in
    ``n_censored`` and excluded from ``durations``.
    """

    state: State
    durations: np.ndarray
    n_censored: int

    def __post_init__(self):
        arr = np.asarray(self.durations, dtype=np.int64)
        arr.flags.writeable = False
        object.__setattr__(self, "durations", arr)
        object.__setattr__(self, "state", State(self.state))


def extract_spells(panel: ParcelPanel, state) -> SpellSample:
    """Collect completed holding-time spells of ``state`` from a panel.

    Parameters
    ----------
    panel : ParcelPanel
    state : State or str
        State whose spells to collect.

    Returns
    -------
    SpellSample
    """
    s = State.from_symbol(state) if isinstance(state, str) else State(state)
    durations = []
    n_censored = 0
    n_years = panel.n_years
    for p in range(panel.n_parcels):
        col = panel.states[:, p]
        y = 0
        while y < n_years:
            j = y
            while j < n_years and col[j] == col[y]:
                j += 1
            if col[y] == s:
                if j == n_years:
                    n_censored += 1
                else:
                    durations.append(j - y)
            y = j
    return SpellSample(state=s, durations=np.asarray(durations, dtype=np.int64), n_censored=n_censored)


def load_landuse_panel() -> ParcelPanel:
    """Load the bundled 22-year, 43-parcel land-use panel."""
    text = resources.files("markov_panel.data").joinpath("landuse_panel.txt").read_text()
    return parse_panel(text)
