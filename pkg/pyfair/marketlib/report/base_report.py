"""This module contains base class for report adapter."""

from __future__ import annotations

import logging
from typing import NoReturn

logger = logging.getLogger(__name__)


class BaseReport:
    """Base class for report adapter.

    Must be sub-classed per output format.
    """

    type = "report"
    extension = ""

    def dumps(self, report) -> NoReturn:
        """Serialize an audit report.

        Subclass **MUST** implement this method.

        :param report: An instance of :class:`~pyfair.marketlib.audit.AuditReport`.
        """
        raise NotImplementedError

    def write(self, report, path: str) -> str:
        """Write serialized report into a file.

        :param report: An instance of :class:`~pyfair.marketlib.audit.AuditReport`.
        :param path: Output path.
        :returns: The path written.
        """
        text = self.dumps(report)
        with open(path, "w", newline="") as f:
            f.write(text)
        logger.info(f"Wrote {self.type} report to {path}")
        return path
