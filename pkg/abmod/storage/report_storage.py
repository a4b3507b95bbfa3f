"""Storage of family documents and JSON reports."""

import json
import os

from abmod.core.errors import UsageError
from abmod.utils.family_format import parse_family


class ReportStorage:
    """Reads family documents and writes analysis reports."""

    def __init__(self, data_dir):
        """
        Initialize the report storage.

        Args:
            data_dir (str): Base directory for stored reports
        """
        self.data_dir = data_dir

    def get_reports_dir(self):
        """
        Get the directory path for reports.

        Returns:
            str: Path to the reports directory
        """
        return os.path.join(self.data_dir, "reports")

    def resolve_report_path(self, name):
        """
        Map a report name or path to a file path.

        Args:
            name (str): A bare name such as "example2" or an explicit path

        Returns:
            str: Path of the JSON file
        """
        if os.path.dirname(name):
            return name
        if not name.endswith(".json"):
            name = f"{name}.json"
        return os.path.join(self.get_reports_dir(), name)

    def save_report(self, report, name):
        """
        Save a report as canonical JSON.

        Args:
            report (dict): JSON-safe report
            name (str): Report name or path

        Returns:
            str: Path to the saved report
        """
        path = self.resolve_report_path(name)
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(dump_report(report))
        return path

    def load_report(self, name):
        """
        Load a saved report.

        Args:
            name (str): Report name or path

        Returns:
            dict: The report, or None if it does not exist
        """
        path = self.resolve_report_path(name)
        if not os.path.exists(path):
            return None
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)

    def load_family(self, path, defaults=None):
        """
        Read and parse a family document.

        Args:
            path (str): Path to the document
            defaults (dict): Option defaults the document may override

        Returns:
            FamilySpec: The validated spec
        """
        try:
            with open(path, "rb") as handle:
                data = handle.read()
        except OSError as exc:
            raise UsageError(f"cannot read family file '{path}': {exc.strerror}") from None
        return parse_family(data, defaults=defaults)


def dump_report(report):
    """The byte-stable JSON text of a report."""
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
