"""
Export functionality for analysis reports
Supports Excel, CSV, and formatted text exports
"""
import csv
import logging
import os
from datetime import datetime
from typing import Any, Mapping

import pandas as pd

try:
    # Optional: Try to import openpyxl for Excel export
    import openpyxl
    from openpyxl.styles import Font
    from openpyxl.utils.dataframe import dataframe_to_rows
    EXCEL_AVAILABLE = True
except ImportError:
    EXCEL_AVAILABLE = False

from utils import format_number


def _cell(value: Any) -> Any:
    if isinstance(value, float):
        return format_number(value)
    if isinstance(value, tuple):
        return "(" + ", ".join(str(x) for x in value) + ")"
    return value


class ReportExporter:
    """Class for exporting a report summary and its tables in various formats"""

    def __init__(self, include_timestamps: bool = True):
        self.excel_available = EXCEL_AVAILABLE
        self.include_timestamps = include_timestamps
        self.logger = logging.getLogger(__name__)

    def export(self, filepath: str, title: str, summary: Mapping[str, Any],
               sections: Mapping[str, pd.DataFrame]) -> bool:
        """Pick the format from the file extension (.csv, .xlsx, anything else is text)"""
        extension = os.path.splitext(filepath)[1].lower()
        if extension == ".csv":
            return self.export_to_csv(filepath, title, summary, sections)
        if extension == ".xlsx":
            return self.export_to_excel(filepath, title, summary, sections)
        return self.export_to_text(filepath, title, summary, sections)

    def export_to_csv(self, filepath: str, title: str, summary: Mapping[str, Any],
                      sections: Mapping[str, pd.DataFrame]) -> bool:
        """
        Export report to CSV format

        Args:
            filepath: Output file path
            title: Report title
            summary: Label -> value pairs written first
            sections: Section name -> table

        Returns:
            True if successful, False otherwise
        """
        try:
            export_data = [[f"=== {title.upper()} ==="]]
            for label, value in summary.items():
                export_data.append([label, _cell(value)])
            export_data.append([''])

            for name, frame in sections.items():
                export_data.append([f"=== {name.upper()} ==="])
                export_data.append(list(frame.columns))
                for row in frame.itertuples(index=False):
                    export_data.append([_cell(v) for v in row])
                export_data.append([''])

            with open(filepath, 'w', newline='', encoding='utf-8') as csvfile:
                writer = csv.writer(csvfile)
                writer.writerows(export_data)

            self.logger.info(f"Report exported to CSV: {filepath}")
            return True

        except Exception as e:
            self.logger.error(f"CSV export failed: {e}")
            return False

    def export_to_excel(self, filepath: str, title: str, summary: Mapping[str, Any],
                        sections: Mapping[str, pd.DataFrame]) -> bool:
        """Export report to Excel: a summary sheet plus one sheet per section"""
        if not self.excel_available:
            self.logger.error("Excel export requires the 'openpyxl' package")
            return False

        try:
            workbook = openpyxl.Workbook()
            self._create_summary_sheet(workbook, title, summary)
            for name, frame in sections.items():
                self._create_table_sheet(workbook, name, frame)
            workbook.save(filepath)
            self.logger.info(f"Report exported to Excel: {filepath}")
            return True

        except Exception as e:
            self.logger.error(f"Excel export failed: {e}")
            return False

    def _create_summary_sheet(self, workbook, title: str, summary: Mapping[str, Any]):
        """Create summary sheet in Excel workbook"""
        ws = workbook.active
        ws.title = "Summary"

        ws['A1'] = title
        ws['A1'].font = Font(bold=True, size=14)
        row = 3
        for label, value in summary.items():
            ws[f'A{row}'] = label
            ws[f'A{row}'].font = Font(bold=True)
            ws[f'B{row}'] = _cell(value)
            row += 1

        self._fit_columns(ws, 50)

    def _create_table_sheet(self, workbook, name: str, frame: pd.DataFrame):
        """Create a sheet holding one report table"""
        ws = workbook.create_sheet(name[:31])
        printable = frame.apply(lambda column: column.map(_cell)) if len(frame) else frame
        for r in dataframe_to_rows(printable, index=False, header=True):
            ws.append(r)

        for cell in ws[1]:
            cell.font = Font(bold=True)

        self._fit_columns(ws, 30)

    @staticmethod
    def _fit_columns(ws, limit: int):
        """Auto-adjust column widths"""
        for column in ws.columns:
            max_length = 0
            for cell in column:
                if cell.value is not None:
                    max_length = max(max_length, len(str(cell.value)))
            ws.column_dimensions[column[0].column_letter].width = min(max_length + 2, limit)

    def export_to_text(self, filepath: str, title: str, summary: Mapping[str, Any],
                       sections: Mapping[str, pd.DataFrame]) -> bool:
        """Export report to formatted text file"""
        try:
            with open(filepath, 'w', encoding='utf-8') as f:
                f.write(self.format_text(title, summary, sections))

            self.logger.info(f"Report exported to text: {filepath}")
            return True

        except Exception as e:
            self.logger.error(f"Text export failed: {e}")
            return False

    def format_text(self, title: str, summary: Mapping[str, Any],
                    sections: Mapping[str, pd.DataFrame]) -> str:
        lines = ["=" * 60, title.upper(), "=" * 60, ""]
        if self.include_timestamps:
            lines += [f"Generated on: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}", ""]
        for label, value in summary.items():
            lines.append(f"{label + ':':<35} {_cell(value)}")
        lines.append("")

        for name, frame in sections.items():
            lines += [name.upper(), "-" * 60]
            if len(frame):
                lines.append(frame.apply(lambda column: column.map(_cell)).to_string(index=False))
            else:
                lines.append("(none)")
            lines.append("")
        return "\n".join(lines) + "\n"
