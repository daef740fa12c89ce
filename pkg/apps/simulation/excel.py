"""
스윕 요약 / 피크 테이블 엑셀 생성

CSV 는 문자열로 고정된 값을 쓰지만 엑셀에는 숫자 셀로 넣고
열마다 표시 형식을 지정합니다.
"""
from typing import NamedTuple, Optional

import openpyxl
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter


class Column(NamedTuple):
    key: str
    label: str
    width: int
    number_format: Optional[str] = None


TIME_FORMAT = '0.0'
VALUE_FORMAT = '0.000000'
DRIFT_FORMAT = '0.00E+00'

PEAK_COLUMNS = [
    Column('t_plot', 't', 10, TIME_FORMAT),
    Column('s_p', 'S(P)', 12, VALUE_FORMAT),
    Column('kind', '종류', 14),
    Column('envelope_amplitude', '포락선 진폭', 16, VALUE_FORMAT),
]

HEADER_FONT = Font(bold=True, color='FFFFFF')
HEADER_FILL = PatternFill(start_color='2F5496', end_color='2F5496', fill_type='solid')
THIN = Side(style='thin')
CELL_BORDER = Border(left=THIN, right=THIN, top=THIN, bottom=THIN)


def build_workbook(data, columns, sheet_title='Report'):
    """데이터를 openpyxl Workbook으로 변환

    Args:
        data: list[dict]: 각 dict는 한 행
        columns: list[Column] (key, label, width[, number_format])
        sheet_title: 시트 이름

    Returns:
        openpyxl.Workbook
    """
    wb = openpyxl.Workbook()
    ws = wb.active
    ws.title = sheet_title
    columns = [Column(*column) for column in columns]
    _write_header(ws, columns)
    for row_idx, row_data in enumerate(data, start=2):
        _write_row(ws, row_idx, row_data, columns)
    ws.freeze_panes = 'A2'
    return wb


def _write_header(ws, columns):
    for col_idx, column in enumerate(columns, start=1):
        cell = ws.cell(row=1, column=col_idx, value=column.label)
        cell.font = HEADER_FONT
        cell.fill = HEADER_FILL
        cell.alignment = Alignment(horizontal='center', vertical='center')
        cell.border = CELL_BORDER
        ws.column_dimensions[get_column_letter(col_idx)].width = column.width


def _write_row(ws, row_idx, row_data, columns):
    for col_idx, column in enumerate(columns, start=1):
        value = row_data.get(column.key, '')
        cell = ws.cell(row=row_idx, column=col_idx)
        if column.number_format:
            cell.value = _as_number(value)
            cell.number_format = column.number_format
            cell.alignment = Alignment(horizontal='right')
        else:
            cell.value = value
        cell.border = CELL_BORDER


def _as_number(value):
    """summary 행의 숫자 문자열 ('0.004', '1.2e-09') → float. 빈 값·None 은 빈 셀"""
    if value is None or value == '':
        return None
    try:
        return float(value)
    except (TypeError, ValueError):
        return value


def peak_workbook(records):
    """PeakRecord 리스트 → 피크 테이블 Workbook"""
    return build_workbook([r.to_dict() for r in records], PEAK_COLUMNS, sheet_title='Peaks')


def save_workbook(wb, path):
    wb.save(path)
    return path
