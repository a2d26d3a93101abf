"""
Hypertoric Duality Engine - Export Module
Handles exporting check reports to various formats
"""

import csv
import json
import pandas as pd
from pathlib import Path
from typing import List, Dict, Any, Optional
from datetime import datetime
import logging

from config import OUTPUT_DIR, EXPORT_FORMATS

logger = logging.getLogger(__name__)

CHECK_COLUMNS = ['Command', 'Check', 'Family', 'Passed', 'Informational', 'Detail', 'Witness']


class ReportExporter:
    """Export reports to CSV, Excel, and JSON formats"""

    def __init__(self, output_dir: Optional[str] = None):
        self.output_dir = Path(output_dir or OUTPUT_DIR)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def export_report(self, report: Dict[str, Any], format: str = 'json', name: Optional[str] = None) -> str:
        """Export one report envelope to file"""
        if format not in EXPORT_FORMATS:
            raise ValueError(f"Unsupported format: {format}")

        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        stem = name or report.get('data', {}).get('arrangement', 'arrangement')
        safe_name = "".join(c for c in str(stem) if c.isalnum() or c in ('-', '_')).rstrip()
        filename = f"{safe_name}_{report['command']}_{timestamp}"

        if format == 'csv':
            filepath = self._export_to_csv(report, filename)
        elif format == 'xlsx':
            filepath = self._export_to_excel(report, filename)
        else:
            filepath = self._export_to_json(report, filename)

        logger.info(f"💾 Exported {report['command']} report to {filepath}")
        return str(filepath)

    def _check_rows(self, report: Dict[str, Any]) -> List[Dict[str, Any]]:
        rows = []
        for check in report.get('checks', []):
            rows.append({
                'Command': report['command'],
                'Check': check['name'],
                'Family': check['name'].split('_')[0],
                'Passed': 'PASS' if check['passed'] else 'FAIL',
                'Informational': bool(check.get('informational')),
                'Detail': check.get('detail', ''),
                'Witness': json.dumps(check['witness'], default=str) if check.get('witness') else ''
            })
        return rows

    def _export_to_csv(self, report: Dict[str, Any], filename: str) -> Path:
        filepath = self.output_dir / f"{filename}.csv"
        with open(filepath, 'w', newline='', encoding='utf-8') as f:
            writer = csv.DictWriter(f, fieldnames=CHECK_COLUMNS)
            writer.writeheader()
            for row in self._check_rows(report):
                writer.writerow(row)
        return filepath

    def _export_to_excel(self, report: Dict[str, Any], filename: str) -> Path:
        """Overview sheet, one sheet per check family, and the calibration constants"""
        filepath = self.output_dir / f"{filename}.xlsx"
        rows = self._check_rows(report)

        with pd.ExcelWriter(filepath, engine='openpyxl') as writer:
            overview = pd.DataFrame([{
                'Command': report['command'],
                'Input Hash': report['input_hash'],
                'Result': 'PASS' if report['pass'] else 'FAIL',
                'Checks': len(rows),
                'Failed': sum(1 for r in rows if r['Passed'] == 'FAIL' and not r['Informational'])
            }])
            overview.to_excel(writer, sheet_name='Overview', index=False)

            if rows:
                df_checks = pd.DataFrame(rows, columns=CHECK_COLUMNS)
                for family, group in df_checks.groupby('Family', sort=True):
                    group.to_excel(writer, sheet_name=family[:31], index=False)

            records = report.get('data', {}).get('records')
            if records:
                pd.DataFrame(records).astype(str).to_excel(writer, sheet_name='Records', index=False)

            calibration = report.get('calibration') or {}
            if calibration:
                df_cal = pd.DataFrame([{'Convention': k, 'Value': str(v)} for k, v in calibration.items()])
                df_cal.to_excel(writer, sheet_name='Calibration', index=False)

            for sheet_name in writer.sheets:
                worksheet = writer.sheets[sheet_name]
                for column in worksheet.columns:
                    max_length = max((len(str(cell.value)) for cell in column if cell.value is not None), default=0)
                    worksheet.column_dimensions[column[0].column_letter].width = min(max_length + 2, 60)

        return filepath

    def _export_to_json(self, report: Dict[str, Any], filename: str) -> Path:
        filepath = self.output_dir / f"{filename}.json"
        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(report, f, indent=2, ensure_ascii=False, default=str)
        return filepath
