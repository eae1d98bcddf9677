import logging
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import List, Tuple, Union

import numpy as np
import yaml
from scipy.interpolate import RegularGridInterpolator

from ttspin.utils.constants import PDG_GLUON
from ttspin.utils.errors import FlavorUnavailable, OutOfRange, ParseError, UnsupportedFormat

logger = logging.getLogger(__name__)

INTERPOLATION_METHODS = {"bilinear": "linear", "bicubic": "cubic"}
_TOKEN = re.compile(r"\S+")


def canonical_flavor(flavor: int) -> int:
    """Map the LHAPDF gluon alias 0 onto the PDG id 21."""
    return PDG_GLUON if flavor == 0 else int(flavor)


class PdfSet(ABC):
    """Anything that returns x f(x, Q) for a fixed list of PDG flavors."""

    name: str

    @property
    @abstractmethod
    def flavor_ids(self) -> Tuple[int, ...]:
        """PDG ids of the tabulated partons, in column order."""

    @abstractmethod
    def xfx_all(self, x, q) -> np.ndarray:
        """
        Momentum densities of every flavor.

        Args:
            x: Momentum fractions, scalar or 1-D array.
            q: Factorization scale in GeV, scalar or array broadcastable with x.

        Returns:
            np.ndarray: Array of shape (len(x), len(flavor_ids)).
        """

    def column(self, flavor: int) -> int:
        """
        Column of a flavor in xfx_all.

        Raises:
            FlavorUnavailable: If the flavor is not tabulated.
        """
        flavor = canonical_flavor(flavor)
        try:
            return self.flavor_ids.index(flavor)
        except ValueError:
            raise FlavorUnavailable(f"flavor {flavor} is not available in {self.name}")

    def has_flavor(self, flavor: int) -> bool:
        """True when the flavor is tabulated."""
        return canonical_flavor(flavor) in self.flavor_ids

    def xfx(self, flavor: int, x, q):
        """
        x f(x, Q) of a single flavor.

        Args:
            flavor (int): PDG id (0 and 21 both mean the gluon).
            x: Momentum fraction(s).
            q: Factorization scale(s) in GeV.

        Returns:
            float or np.ndarray: A float for scalar input, an array otherwise.
        """
        values = self.xfx_all(x, q)[:, self.column(flavor)]
        return float(values[0]) if np.ndim(x) == 0 and np.ndim(q) == 0 else values


@dataclass(frozen=True, eq=False)
class PdfGrid(PdfSet):
    """
    One member of a tabulated PDF set.

    Args:
        x_knots (np.ndarray): Ascending momentum fractions in (0, 1].
        q_knots (np.ndarray): Ascending scales in GeV.
        flavors (Tuple[int, ...]): PDG ids of the value columns.
        values (np.ndarray): x f(x, Q) with shape (len(x_knots), len(q_knots), len(flavors)).
        name (str): Label used in messages.
        interpolation (str): "bilinear" or "bicubic" in (ln x, ln Q^2).
        freeze_below_floor (bool): Evaluate x below the first knot at the first knot instead of failing.
        clamp_negative (bool): Replace negative interpolated values by zero.
    """

    x_knots: np.ndarray
    q_knots: np.ndarray
    flavors: Tuple[int, ...]
    values: np.ndarray
    name: str = "grid"
    interpolation: str = "bilinear"
    freeze_below_floor: bool = False
    clamp_negative: bool = False

    def __post_init__(self) -> None:
        """Freeze the tables and check the grid invariants."""
        x_knots = np.array(self.x_knots, dtype=float)
        q_knots = np.array(self.q_knots, dtype=float)
        values = np.array(self.values, dtype=float)
        if len(x_knots) < 2 or len(q_knots) < 2:
            raise ParseError("a grid needs at least two x knots and two Q knots")
        if np.any(np.diff(x_knots) <= 0.0) or np.any(np.diff(q_knots) <= 0.0):
            raise ParseError("knots must be strictly ascending")
        if x_knots[0] <= 0.0 or x_knots[-1] > 1.0 or q_knots[0] <= 0.0:
            raise ParseError("x knots must lie in (0, 1] and Q knots must be positive")
        if values.shape != (len(x_knots), len(q_knots), len(self.flavors)):
            raise ParseError(f"value table has shape {values.shape}, inconsistent with the knots and flavors")
        if not np.all(np.isfinite(values)):
            raise ParseError("value table contains non-finite entries")
        if self.interpolation not in INTERPOLATION_METHODS:
            raise ParseError(f"unknown interpolation {self.interpolation!r}")
        if self.interpolation == "bicubic" and min(len(x_knots), len(q_knots)) < 4:
            raise ParseError("bicubic interpolation needs at least four knots along x and Q")
        for array in (x_knots, q_knots, values):
            array.setflags(write=False)
        object.__setattr__(self, "x_knots", x_knots)
        object.__setattr__(self, "q_knots", q_knots)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "flavors", tuple(canonical_flavor(f) for f in self.flavors))

    @property
    def flavor_ids(self) -> Tuple[int, ...]:
        """PDG ids of the value columns."""
        return self.flavors

    @cached_property
    def _interpolator(self) -> RegularGridInterpolator:
        """Interpolator over (ln x, ln Q^2) returning every flavor at once."""
        return RegularGridInterpolator(
            (np.log(self.x_knots), 2.0 * np.log(self.q_knots)),
            self.values,
            method=INTERPOLATION_METHODS[self.interpolation],
        )

    def _log_x(self, x: np.ndarray) -> np.ndarray:
        """
        ln x after the range checks.

        Raises:
            OutOfRange: If x > 1, or x is below the grid floor and freeze_below_floor is off.
        """
        if np.any(x > 1.0) or np.any(x <= 0.0):
            raise OutOfRange(f"x must lie in (0, 1], got {x[(x > 1.0) | (x <= 0.0)][0]:.6g}")
        floor = self.x_knots[0]
        if np.any(x < floor):
            if not self.freeze_below_floor:
                raise OutOfRange(f"x = {x.min():.6g} is below the grid floor {floor:.6g} of {self.name}")
            x = np.maximum(x, floor)
        return np.log(x)

    def _log_q2(self, q: np.ndarray) -> np.ndarray:
        """ln Q^2 clamped to the tabulated range."""
        lo, hi = self.q_knots[0], self.q_knots[-1]
        if np.any(q < lo) or np.any(q > hi):
            logger.warning("clamping Q to the %s range [%.6g, %.6g] GeV", self.name, lo, hi)
        return 2.0 * np.log(np.clip(q, lo, hi))

    def xfx_all(self, x, q) -> np.ndarray:
        """
        Interpolated x f(x, Q) for every flavor.

        Args:
            x: Momentum fractions, scalar or 1-D array.
            q: Factorization scales in GeV, broadcastable with x.

        Returns:
            np.ndarray: Shape (len(x), len(flavors)).
        """
        x, q = np.broadcast_arrays(np.atleast_1d(np.asarray(x, dtype=float)), np.asarray(q, dtype=float))
        points = np.column_stack([self._log_x(x), self._log_q2(q)])
        out = self._interpolator(points)
        return np.maximum(out, 0.0) if self.clamp_negative else out


def _numbers(line: str, lineno: int, kind: type) -> List:
    """
    Convert every whitespace-separated token of a line.

    Raises:
        ParseError: Naming the line and column of the first bad token.
    """
    out = []
    for match in _TOKEN.finditer(line):
        try:
            out.append(kind(match.group()))
        except ValueError:
            raise ParseError(f"non-numeric token {match.group()!r}", line=lineno, column=match.start() + 1)
    if not out:
        raise ParseError("expected a list of numbers", line=lineno)
    return out


def _parse_header(lines: List[str]) -> Tuple[dict, int]:
    """
    Read the Key: value header up to the first '---' line.

    Returns:
        Tuple[dict, int]: The header mapping and the index of the separator line.
    """
    try:
        sep = next(i for i, line in enumerate(lines) if line.strip() == "---")
    except StopIteration:
        raise ParseError("header is not terminated by '---'", line=len(lines))
    try:
        header = yaml.safe_load("\n".join(lines[:sep])) or {}
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ParseError(
            f"malformed header: {getattr(exc, 'problem', exc)}",
            line=mark.line + 1 if mark else None,
            column=mark.column + 1 if mark else None,
        )
    if not isinstance(header, dict):
        raise ParseError("header must consist of 'Key: value' lines", line=1)
    if header.get("Format") != "lhagrid1":
        raise UnsupportedFormat(f"unsupported grid format {header.get('Format')!r}, expected 'lhagrid1'")
    return header, sep


def _parse_block(lines: List[str], start: int) -> Tuple[list, list, list, np.ndarray, int]:
    """
    Read one subgrid block starting at line index start.

    Returns:
        Tuple: x knots, Q knots, flavors, values with shape (nx, nq, nf), and the index after the block separator.
    """
    if start + 3 > len(lines):
        raise ParseError("truncated subgrid header", line=len(lines))
    x_knots = _numbers(lines[start], start + 1, float)
    q_knots = _numbers(lines[start + 1], start + 2, float)
    flavors = [canonical_flavor(f) for f in _numbers(lines[start + 2], start + 3, int)]
    n_rows = len(x_knots) * len(q_knots)
    rows = []
    for r in range(n_rows):
        i = start + 3 + r
        if i >= len(lines) or lines[i].strip() == "---":
            raise ParseError(f"value table has {r} rows, expected {n_rows}", line=i + 1)
        row = _numbers(lines[i], i + 1, float)
        if len(row) != len(flavors):
            raise ParseError(f"row {r + 1} has {len(row)} columns, expected {len(flavors)}", line=i + 1)
        rows.append(row)
    end = start + 3 + n_rows
    if end < len(lines) and lines[end].strip() != "---":
        raise ParseError(f"expected '---' after {n_rows} value rows", line=end + 1)
    values = np.array(rows).reshape(len(x_knots), len(q_knots), len(flavors))
    return x_knots, q_knots, flavors, values, end + 1


def parse_lhagrid(text: Union[str, bytes], name: str = "grid", **options) -> PdfGrid:
    """
    Parse one member file of a PDF set in the lhagrid1 layout.

    Subgrid blocks must share their x knots and flavors; they are concatenated along Q, and a Q knot repeated at a
    block boundary is kept once (with the value of the lower block).

    Args:
        text (Union[str, bytes]): File content.
        name (str): Label for messages.
        **options: interpolation, freeze_below_floor and clamp_negative, passed to PdfGrid.

    Returns:
        PdfGrid: The merged grid.

    Raises:
        ParseError: On malformed headers, non-numeric tokens or inconsistent tables.
        UnsupportedFormat: If the Format key is not lhagrid1.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.splitlines()
    header, sep = _parse_header(lines)

    blocks = []
    i = sep + 1
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        block_line = i + 1
        x_knots, q_knots, flavors, values, i = _parse_block(lines, i)
        if blocks and (x_knots != blocks[0][0] or flavors != blocks[0][2]):
            raise ParseError("subgrid blocks disagree on x knots or flavors", line=block_line)
        blocks.append((x_knots, q_knots, flavors, values))
    if not blocks:
        raise ParseError("no subgrid block after the header", line=sep + 1)

    x_knots, q_knots, flavors, values = blocks[0][0], list(blocks[0][1]), blocks[0][2], [blocks[0][3]]
    for _, q_next, _, v_next in blocks[1:]:
        if q_next[0] == q_knots[-1]:
            q_next, v_next = q_next[1:], v_next[:, 1:, :]
        q_knots.extend(q_next)
        values.append(v_next)

    declared = header.get("Flavors")
    if declared is not None and sorted(canonical_flavor(f) for f in declared) != sorted(flavors):
        raise ParseError(f"header declares flavors {declared}, the table has {flavors}")

    grid = PdfGrid(
        x_knots=np.array(x_knots),
        q_knots=np.array(q_knots),
        flavors=tuple(flavors),
        values=np.concatenate(values, axis=1),
        name=name,
        **options,
    )
    logger.debug("parsed %s: %d x knots, %d Q knots, %d flavors", name, len(x_knots), len(q_knots), len(flavors))
    return grid
