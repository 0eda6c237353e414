"""
File formats and validation for lurecert inputs and reports
"""

from .nonlinearity import NonlinearityModel
from .report import CertificateReport, Report, WitnessReport
from .sector import SectorModel
from .signals import InputFileModel, SignalPairModel
from .system import SystemModel
from .validation import (
    format_validation_error,
    validate_input_file,
    validate_nonlinearity,
    validate_report,
    validate_result,
    validate_sector,
    validate_system,
)

__all__ = [
    "SystemModel",
    "SectorModel",
    "NonlinearityModel",
    "InputFileModel",
    "SignalPairModel",
    "Report",
    "CertificateReport",
    "WitnessReport",
    "format_validation_error",
    "validate_system",
    "validate_sector",
    "validate_nonlinearity",
    "validate_input_file",
    "validate_report",
    "validate_result",
]
