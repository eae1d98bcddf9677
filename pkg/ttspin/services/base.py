from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import pandas as pd
from schema import Schema

from ttspin.services.collider import ColliderConfig
from ttspin.utils.errors import TTSpinError
from ttspin.utils.utils import clean_response, export_json, export_table, json_text, table_text


@dataclass
class SpinReportBase:
    """
    Base class for the reports computed from a collider configuration.

    Args:
        cfg (ColliderConfig): Collider, coupling and PDF choice.
    Attributes:
        response (dict): A dictionary to store the response data.
        rows (list): Table rows of tabular reports, one dictionary per row.
    """

    cfg: ColliderConfig = field(default_factory=ColliderConfig)
    response: dict = field(default_factory=lambda: {}, init=False)
    rows: list = field(default_factory=lambda: [], init=False)

    def collider_info(self) -> dict:
        """
        Describe the collider configuration for the response.

        Returns:
            dict: Beam, energy, top mass, coupling, scale rule and PDF name.
        """
        return {
            "beam": self.cfg.beam.value,
            "sqrtS": self.cfg.sqrt_s,
            "mTop": self.cfg.m_top,
            "alphaS": self.cfg.alpha_s,
            "qScale": self.cfg.q_scale_rule.value,
            "pdf": self.cfg.pdf,
        }

    def finalize(self, schema: Optional[Schema] = None) -> dict:
        """
        Clean the response and validate it.

        Args:
            schema (Schema, optional): Expected layout of the cleaned response.

        Returns:
            dict: The cleaned response.

        Raises:
            TTSpinError: If the response does not match the schema.
        """
        response = clean_response(self.response)
        if schema is not None and not schema.is_valid(response):
            raise TTSpinError(f"{type(self).__name__} produced a response that does not match its schema")
        return response

    def to_frame(self) -> pd.DataFrame:
        """
        Table form of the report.

        Returns:
            pd.DataFrame: One row per entry of rows.
        """
        return pd.DataFrame(clean_response(self.rows))

    def render(self, fmt: str = "csv") -> str:
        """Text of the report as a CSV table or as JSON."""
        return table_text(self.to_frame()) if fmt == "csv" else json_text(self.response)

    def export(self, path: Union[str, Path], fmt: str = "csv") -> Path:
        """
        Write the report as a CSV table or as JSON.

        Args:
            path (Union[str, Path]): Destination file.
            fmt (str): "csv" or "json".

        Returns:
            Path: The written file.
        """
        if fmt == "csv":
            return export_table(self.to_frame(), path)
        return export_json(self.response, path)
