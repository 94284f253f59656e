"""
Excel workbook export of netfair report tables.
"""

from pathlib import Path
from typing import Dict, Optional, Union

import pandas as pd

from ..reports.manifest import RunManifest
from ..utils.constants import EXCEL_COLORS, RATE_COLUMNS

SHEET_NAMES = {
    'perception': 'Perception',
    'breakdown': 'Fair-Unfair Breakdown',
    'expectation_distribution': 'Expectation Dist',
    'degree_distribution': 'Degree Dist',
    'sweep': 'Visibility Sweep',
    'parity': 'Parity',
    'confusion': 'Confusion',
    'axioms': 'Axiom Verdicts',
}


def _cell(value):
    """xlsxwriter cannot write NaN or numpy scalars directly."""
    if value is None:
        return ''
    if isinstance(value, float) and value != value:
        return ''
    if hasattr(value, 'item'):
        return value.item()
    return value


def generate_excel_workbook(
    data: Dict[str, pd.DataFrame],
    output_path: Union[str, Path],
    manifest: Optional[RunManifest] = None,
) -> None:
    """
    Write report tables into one workbook, one sheet per table.

    Args:
        data: Tables keyed by report name
        output_path: Path for the .xlsx file
        manifest: Written to a leading 'Manifest' sheet when given
    """
    import xlsxwriter

    Path(output_path).parent.mkdir(parents=True, exist_ok=True)
    workbook = xlsxwriter.Workbook(str(output_path))

    header_format = workbook.add_format({
        'bold': True,
        'bg_color': EXCEL_COLORS['header_blue'],
        'font_color': EXCEL_COLORS['white'],
        'align': 'center',
        'valign': 'vcenter',
        'border': 1,
    })
    plain_format = workbook.add_format({'align': 'center', 'valign': 'vcenter'})
    rate_format = workbook.add_format({'num_format': '0.000', 'align': 'center', 'valign': 'vcenter'})
    alt_format = workbook.add_format({'bg_color': EXCEL_COLORS['alt_row'], 'align': 'center', 'valign': 'vcenter'})

    if manifest is not None:
        sheet = workbook.add_worksheet('Manifest')
        sheet.write(0, 0, 'key', header_format)
        sheet.write(0, 1, 'value', header_format)
        for row, (key, value) in enumerate(manifest.to_dict().items(), start=1):
            sheet.write(row, 0, key)
            sheet.write(row, 1, str(value))
        sheet.set_column(0, 0, 20)
        sheet.set_column(1, 1, 60)

    for key, df in data.items():
        if not isinstance(df, pd.DataFrame):
            continue

        sheet_name = SHEET_NAMES.get(key, key.replace('_', ' ').title())[:31]
        worksheet = workbook.add_worksheet(sheet_name)

        for col_num, column in enumerate(df.columns):
            worksheet.write(0, col_num, str(column), header_format)

        for row_num, row in enumerate(df.itertuples(index=False), start=1):
            for col_num, value in enumerate(row):
                if df.columns[col_num] in RATE_COLUMNS:
                    fmt = rate_format
                else:
                    fmt = alt_format if row_num % 2 == 0 else plain_format
                worksheet.write(row_num, col_num, _cell(value), fmt)

        # Auto-fit columns
        for col_num, column in enumerate(df.columns):
            max_len = max(
                len(str(column)),
                df[column].astype(str).str.len().max() if len(df) > 0 else 0
            )
            worksheet.set_column(col_num, col_num, min(max_len + 2, 30))

        worksheet.freeze_panes(1, 0)

    workbook.close()
