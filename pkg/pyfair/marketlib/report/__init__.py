# noqa: D104
from pyfair.marketlib.report.json_report import JsonReport  # noqa: F401
from pyfair.marketlib.report.csv_report import CsvReport  # noqa: F401
