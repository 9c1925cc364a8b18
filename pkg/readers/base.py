"""Base reader class that all file readers inherit from."""

import math
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional

import pandas as pd

from models import DataError


class BaseReader(ABC):
    """
    Abstract base class for all input file readers.

    Each reader must implement:
    - file_kind: Short label used in error messages
    - read(): Parse and validate one file

    Optionally override:
    - required_columns: Columns that must appear in the header
    - allow_empty: Whether a header-only file is acceptable
    """

    file_kind: str = "csv"
    required_columns: tuple = ()
    allow_empty: bool = False

    @abstractmethod
    def read(self, path):
        """
        Parse a file into domain objects.

        Args:
            path: Path to the file

        Returns:
            The validated domain object(s)

        Raises:
            DataError: If the file is missing, empty or malformed
        """
        pass

    def _load_frame(self, path) -> pd.DataFrame:
        """
        Load a CSV as text cells.

        Every cell stays a string so that each reader decides what counts as
        empty or malformed. Header names are stripped and lower-cased.
        """
        path = Path(path)
        if not path.exists():
            raise DataError(f"{self.file_kind} file not found: {path}")
        try:
            frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
        except pd.errors.EmptyDataError:
            raise DataError(f"{self.file_kind} file is empty: {path}") from None
        except pd.errors.ParserError as e:
            raise DataError(f"{self.file_kind} file {path} is not valid CSV: {e}") from None

        frame.columns = [str(c).strip().lower() for c in frame.columns]
        missing = [c for c in self.required_columns if c not in frame.columns]
        if missing:
            raise DataError(f"{self.file_kind} file {path} is missing column(s) {', '.join(missing)}")
        duplicated = frame.columns[frame.columns.duplicated()].tolist()
        if duplicated:
            raise DataError(f"{self.file_kind} file {path} repeats column(s) {', '.join(duplicated)}")
        if frame.empty and not self.allow_empty:
            raise DataError(f"{self.file_kind} file has no data rows: {path}")
        return frame

    def _parse_float(self, cell: str, row: int, column: str,
                     allow_empty: bool = True) -> Optional[float]:
        """Parse a numeric cell; empty cells become None when allowed."""
        text = str(cell).strip()
        if not text:
            if allow_empty:
                return None
            raise DataError("empty cell", row=row, column=column)
        try:
            value = float(text)
        except ValueError:
            raise DataError(f"cannot parse '{text}' as a number", row=row, column=column) from None
        if math.isnan(value):
            return None if allow_empty else self._raise_missing(row, column)
        if math.isinf(value):
            raise DataError(f"non-finite value '{text}'", row=row, column=column)
        return value

    def _parse_int(self, cell: str, row: int, column: str) -> int:
        value = self._parse_float(cell, row, column, allow_empty=False)
        if value != int(value):
            raise DataError(f"expected an integer, got '{cell}'", row=row, column=column)
        return int(value)

    @staticmethod
    def _raise_missing(row: int, column: str):
        raise DataError("missing value", row=row, column=column)
