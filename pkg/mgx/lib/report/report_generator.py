import os
from datetime import datetime

import pandas as pd
from jinja2 import Environment, FileSystemLoader, select_autoescape

from ..logging import get_logger

logger = get_logger(__name__)


class ReportGenerator:
    """
    Renders a verification table to a standalone HTML page
    """

    def __init__(self, template: str = "verify_report.html"):
        self.env = Environment(loader=FileSystemLoader(searchpath=os.path.dirname(__file__)),
                               autoescape=select_autoescape(["html"]))
        self.base_template = self.env.get_template(template)

    def render(self, table: pd.DataFrame, version: str = "") -> str:
        """

        Args:
            table: output of run_verify
            version: package version shown in the header

        Returns:
            HTML text
        """
        counts = table["status"].value_counts()
        return self.base_template.render(
            suite=table.attrs.get("suite", ""),
            version=version,
            generated=datetime.now().strftime("%Y-%m-%d %H:%M"),
            passed=bool(table.attrs.get("passed", (table["status"] == "pass").all())),
            n_pass=int(counts.get("pass", 0)),
            n_fail=int(counts.get("fail", 0)),
            n_skipped=int(counts.get("skipped", 0)),
            rows=table.to_dict(orient="records"),
        )

    def generate_report(self, table: pd.DataFrame, path: str, version: str = ""):
        """

        Args:
            table: output of run_verify
            path: destination file
            version: package version shown in the header

        Returns:

        """
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.render(table, version))
        logger.info(f"Successfully wrote {path}.")
