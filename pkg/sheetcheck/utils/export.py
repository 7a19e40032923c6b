"""
Экспорт таблиц: CSV через pandas и markdown
"""
import csv
from typing import Iterable, List, Sequence

import pandas as pd


def frame_to_csv(frame: pd.DataFrame) -> str:
    """CSV: запятая, все поля в кавычках, одна строка заголовка"""
    return frame.to_csv(index=False, quoting=csv.QUOTE_ALL, lineterminator="\n")


def _escape(value: object) -> str:
    return str(value).replace("|", "\\|").replace("\n", " ")


def markdown_table(headers: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    lines: List[str] = [
        "| " + " | ".join(_escape(h) for h in headers) + " |",
        "|" + "|".join("---" for _ in headers) + "|",
    ]
    for row in rows:
        lines.append("| " + " | ".join(_escape(v) for v in row) + " |")
    return "\n".join(lines)


def frame_to_markdown(frame: pd.DataFrame) -> str:
    headers = [str(frame.index.name or "")] + [str(c) for c in frame.columns]
    rows = ([index] + list(values) for index, values in zip(frame.index, frame.values.tolist()))
    return markdown_table(headers, rows)


__all__ = ["frame_to_csv", "frame_to_markdown", "markdown_table"]
