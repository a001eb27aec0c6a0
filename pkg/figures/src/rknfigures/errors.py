class FiguresError(Exception):
    """Base class for figure-rendering failures."""


class MissingColumn(FiguresError):
    """The CSV lacks a column the plot kind needs."""


class EmptyData(FiguresError):
    """No usable rows remain after dropping failed runs."""
