"""
sheetcheck: оценка сопровождаемости электронных таблиц по взвешенному чек-листу
"""

__version__ = "1.0.0"
