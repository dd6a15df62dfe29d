"""
Sweep Report Generator
Summary tables over stream records, grouped by vertex count
"""

import logging
import os
from typing import Dict, List

import pandas as pd

logger = logging.getLogger(__name__)


class SweepReportGenerator:
    """Tabulate sweep records with pandas"""

    def __init__(self, records: List[Dict], mode: str):
        """
        Args:
            records: Records emitted by SweepEngine.run
            mode: Stream mode the records came from
        """
        self.mode = mode
        self.records_df = self._records_to_dataframe(records)

    def _records_to_dataframe(self, records: List[Dict]) -> pd.DataFrame:
        rows = []
        for record in records:
            rows.append({
                'line': record['line'],
                'n': record.get('n'),
                'status': record['status'],
                'holds': record.get('holds'),
                'found': record.get('found'),
                'applies': record.get('applies'),
                'passed': record.get('passed'),
                'candidate': record.get('candidate'),
                'seconds': record.get('seconds'),
            })
        columns = ['line', 'n', 'status', 'holds', 'found', 'applies', 'passed', 'candidate', 'seconds']
        return pd.DataFrame(rows, columns=columns)

    def summary_table(self) -> pd.DataFrame:
        """One row per vertex count: graphs, budget overruns, errors and the mode's outcome counts"""
        df = self.records_df
        if df.empty:
            return pd.DataFrame(columns=['n', 'graphs', 'budget_exceeded', 'errors'])

        grouped = df.groupby('n', dropna=False)
        table = pd.DataFrame({
            'graphs': grouped.size(),
            'budget_exceeded': grouped['status'].apply(lambda s: int((s == 'budget_exceeded').sum())),
            'errors': grouped['status'].apply(lambda s: int((s == 'error').sum())),
        })
        for column in ('holds', 'found', 'applies', 'passed', 'candidate'):
            if df[column].notna().any():
                table[column] = grouped[column].apply(lambda s: int((s == True).sum()))  # noqa: E712
        if df['seconds'].notna().any():
            table['mean_seconds'] = grouped['seconds'].mean().round(6)
        return table.reset_index()

    def write_csv(self, path: str) -> str:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        self.summary_table().to_csv(path, index=False)
        logger.info(f"✓ Summary table saved: {path}")
        return path

    def format_summary(self, summary: Dict) -> str:
        """Human-readable block for stderr"""
        lines = ["=" * 60, f"{self.mode.upper()} SUMMARY", "=" * 60]
        for key, value in summary.items():
            lines.append(f"{key.replace('_', ' ').title()}: {value}")
        table = self.summary_table()
        if not table.empty:
            lines.append("")
            lines.append(table.to_string(index=False))
        return "\n".join(lines)
