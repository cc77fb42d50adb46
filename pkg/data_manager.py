"""Result-row collection and CSV export for experiment runs."""

import logging
import os
from typing import Dict, List, Optional

import pandas as pd

from config import CSV_LINE_TERMINATOR

logger = logging.getLogger(__name__)


class ResultsManager:
    """Collects result rows for one command and writes them as CSV."""

    def __init__(self, columns: List[str]):
        self.columns = list(columns)
        self.rows: List[Dict] = []

    def add_row(self, row: Dict):
        """Add one result row; every declared column must be present."""
        missing = [c for c in self.columns if c not in row]
        if missing:
            raise KeyError(f"row is missing column(s): {', '.join(missing)}")
        self.rows.append({c: row[c] for c in self.columns})

    def add_rows(self, rows: List[Dict]):
        for row in rows:
            self.add_row(row)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=self.columns)

    def export_to_csv(self, filename: str) -> str:
        """Write the rows to filename; floats keep their full repr so reruns are byte-identical."""
        directory = os.path.dirname(filename)
        if directory:
            os.makedirs(directory, exist_ok=True)
        df = self.to_frame()
        if df.empty:
            logger.warning(f"No rows to export; writing header only to {filename}")
        df.to_csv(filename, index=False, lineterminator=CSV_LINE_TERMINATOR)
        logger.info(f"Exported {len(df)} rows to {filename}")
        return filename


def summary_path(filename: str) -> str:
    """results/fig4.csv -> results/fig4.summary.csv"""
    root, ext = os.path.splitext(filename)
    return f"{root}.summary{ext or '.csv'}"


def export_summary(summary: Dict, filename: str) -> Optional[str]:
    """Write a one-row summary next to a result file."""
    manager = ResultsManager(list(summary.keys()))
    manager.add_row(summary)
    return manager.export_to_csv(summary_path(filename))
