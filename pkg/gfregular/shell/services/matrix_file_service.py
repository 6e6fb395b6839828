"""
Reading and writing the plain-text matrix file format.

Layout::

    field 2 1 1 1          # or: ext p k s t
    3 7                    # rows cols
    1 0 0 1 1 0 1          # one row per line, integer element codes
    0 1 0 1 0 1 1
    0 0 1 0 1 1 1
    labels p1 p2 p3 p4 p5 p6 p7

The labels line is optional.  A label may carry roles, written
``x0[x_L0,X]``.  Blank lines and ``#`` comment lines are ignored by the
reader; the writer emits neither, so reading writer output and writing it
again reproduces the same bytes.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from gfregular.core.errors import FieldError, GFRegularError, MatrixFormatError
from gfregular.core.field import Field, field_from_header
from gfregular.core.linalg import Mat

logger = logging.getLogger(__name__)

_LABEL_RE = re.compile(r"^([^\s\[\],]+)(?:\[([^\s\[\]]*)\])?$")
_RANGE_RE = re.compile(r"^(.*?)(\d+)\.\.(.*?)(\d+)$")


@dataclass(frozen=True)
class MatrixFile:
    """A parsed matrix file: the matrix and its role -> labels map."""

    mat: Mat
    roles: Mapping[str, tuple[str, ...]] = dc_field(default_factory=dict)

    @property
    def field(self) -> Field:
        return self.mat.field

    def role(self, name: str) -> tuple[str, ...]:
        return tuple(self.roles.get(name, ()))


class MatrixFileService:
    """Static helpers for the matrix file format and label arguments."""

    # -- reading -----------------------------------------------------------

    @staticmethod
    def read(path: str) -> MatrixFile:
        """Parse the file at *path*.

        Raises:
            OSError: If the file cannot be read.
            MatrixFormatError: On a malformed header, size line, entry or label.
        """
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        parsed = MatrixFileService.parse(text)
        logger.info("read %s: %r", path, parsed.mat)
        return parsed

    @staticmethod
    def parse(text: str) -> MatrixFile:
        lines = [
            (number, line.split())
            for number, line in enumerate(text.splitlines(), start=1)
            if line.strip() and not line.lstrip().startswith("#")
        ]
        if not lines:
            raise MatrixFormatError("empty matrix file")

        number, tokens = lines[0]
        try:
            field = field_from_header(tokens)
        except FieldError as exc:
            raise MatrixFormatError(str(exc), number) from None

        if len(lines) < 2:
            raise MatrixFormatError("missing 'rows cols' line", number)
        number, tokens = lines[1]
        if len(tokens) != 2 or not all(tok.isdigit() for tok in tokens):
            raise MatrixFormatError("expected 'rows cols'", number)
        rows, cols = int(tokens[0]), int(tokens[1])

        body = lines[2:]
        if len(body) < rows:
            line = body[-1][0] if body else number
            raise MatrixFormatError(f"expected {rows} rows, found {len(body)}", line)
        entries = np.zeros((rows, cols), dtype=np.int64)
        for i, (number, tokens) in enumerate(body[:rows]):
            if len(tokens) != cols:
                raise MatrixFormatError(f"expected {cols} entries, found {len(tokens)}", number)
            for j, tok in enumerate(tokens):
                if not tok.isdigit():
                    raise MatrixFormatError(f"entry {tok!r} is not a non-negative integer", number)
                value = int(tok)
                if value >= field.order:
                    raise MatrixFormatError(
                        f"entry {value} is not an element of {field.describe()}", number
                    )
                entries[i, j] = value

        rest = body[rows:]
        labels: Optional[tuple[str, ...]] = None
        roles: dict[str, list[str]] = {}
        if rest:
            number, tokens = rest[0]
            if tokens[0] != "labels":
                raise MatrixFormatError(f"unexpected line after the entries: {tokens[0]!r}", number)
            if len(rest) > 1:
                raise MatrixFormatError("content after the labels line", rest[1][0])
            labels, roles = MatrixFileService._parse_labels_line(tokens[1:], cols, number)

        try:
            mat = Mat(field, entries, labels)
        except GFRegularError as exc:
            raise MatrixFormatError(str(exc), rest[0][0] if rest else None) from None
        return MatrixFile(mat, {name: tuple(members) for name, members in roles.items()})

    @staticmethod
    def _parse_labels_line(tokens: Sequence[str], cols: int, number: int
                           ) -> tuple[tuple[str, ...], dict[str, list[str]]]:
        if len(tokens) != cols:
            raise MatrixFormatError(f"expected {cols} labels, found {len(tokens)}", number)
        labels: list[str] = []
        roles: dict[str, list[str]] = {}
        for tok in tokens:
            match = _LABEL_RE.match(tok)
            if match is None:
                raise MatrixFormatError(f"malformed label {tok!r}", number)
            label, role_text = match.group(1), match.group(2)
            labels.append(label)
            if role_text:
                for name in role_text.split(","):
                    if not name:
                        raise MatrixFormatError(f"empty role in {tok!r}", number)
                    roles.setdefault(name, []).append(label)
        if len(set(labels)) != len(labels):
            raise MatrixFormatError("duplicate labels", number)
        return tuple(labels), roles

    # -- writing -----------------------------------------------------------

    @staticmethod
    def format(mat: Mat, roles: Optional[Mapping[str, Iterable[str]]] = None) -> str:
        """Render *mat* (and optional roles) in the matrix file format."""
        lines = [mat.field.header(), f"{mat.rows} {mat.cols}"]
        lines.extend(" ".join(str(int(x)) for x in row) for row in mat.entries)
        roles = roles or {}
        if mat.labels is not None or roles:
            carried: dict[str, list[str]] = {}
            for name, members in roles.items():
                for label in members:
                    carried.setdefault(label, []).append(name)
            tokens = [
                f"{label}[{','.join(carried[label])}]" if label in carried else label
                for label in mat.label_list()
            ]
            lines.append("labels " + " ".join(tokens))
        return "\n".join(lines) + "\n"

    @staticmethod
    def write(path: str, mat: Mat, roles: Optional[Mapping[str, Iterable[str]]] = None) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(MatrixFileService.format(mat, roles))
        logger.info("wrote %s: %r", path, mat)

    # -- label arguments ---------------------------------------------------

    @staticmethod
    def expand_labels(text: str) -> tuple[str, ...]:
        """Expand ``"p1..p3,x1"`` into ``("p1", "p2", "p3", "x1")``.

        An empty string is the empty set.
        """
        out: list[str] = []
        for part in (piece.strip() for piece in text.split(",")):
            if not part:
                continue
            match = _RANGE_RE.match(part)
            if match is None:
                out.append(part)
                continue
            prefix, lo, prefix2, hi = match.groups()
            if prefix != prefix2 or int(lo) > int(hi):
                raise MatrixFormatError(f"bad label range {part!r}")
            out.extend(f"{prefix}{i}" for i in range(int(lo), int(hi) + 1))
        return tuple(out)
