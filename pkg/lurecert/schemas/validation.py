"""
Schema validation utilities

Each validate_* parses raw JSON data into its model and raises ValueError with
one "location: message" line per problem.
"""

from typing import Any, Dict, List

from jsonschema import Draft202012Validator
from pydantic import BaseModel, ValidationError

from .nonlinearity import NonlinearityModel
from .report import CertificateReport, Report, WitnessReport
from .sector import SectorModel
from .signals import InputFileModel
from .system import SystemModel


def format_validation_error(e: ValidationError) -> List[str]:
    """One diagnostic per pydantic error, prefixed with the field path"""
    lines = []
    for err in e.errors():
        loc = ".".join(str(part) for part in err["loc"]) or "<root>"
        lines.append(f"{loc}: {err['msg']}")
    return lines


def _parse(model: type, data: Any, what: str) -> Any:
    if not isinstance(data, dict):
        raise ValueError(f"Invalid {what}: expected a JSON object, got {type(data).__name__}")
    try:
        return model(**data)
    except ValidationError as e:
        raise ValueError(f"Invalid {what}: " + "; ".join(format_validation_error(e)))


def validate_system(data: Dict[str, Any]) -> SystemModel:
    """Validate and parse a system file"""
    return _parse(SystemModel, data, "system")


def validate_sector(data: Dict[str, Any]) -> SectorModel:
    """Validate and parse a sector file"""
    return _parse(SectorModel, data, "sector")


def validate_nonlinearity(data: Dict[str, Any]) -> NonlinearityModel:
    """Validate and parse a nonlinearity file"""
    return _parse(NonlinearityModel, data, "nonlinearity")


def validate_input_file(data: Dict[str, Any]) -> InputFileModel:
    """Validate and parse an input-signal file"""
    return _parse(InputFileModel, data, "inputs")


def _schema_errors(data: Dict[str, Any], model: type) -> List[str]:
    validator = Draft202012Validator(model.model_json_schema())
    return [
        f"{'.'.join(str(p) for p in err.absolute_path) or '<root>'}: {err.message}"
        for err in sorted(validator.iter_errors(data), key=lambda err: [str(p) for p in err.absolute_path])
    ]


def validate_report(data: Dict[str, Any]) -> bool:
    """Validate a written report against the envelope JSON schema"""
    errors = _schema_errors(data, Report)
    if errors:
        raise ValueError("Report does not match its schema: " + "; ".join(errors))
    return True


def validate_result(data: Dict[str, Any], model: type) -> bool:
    """Validate a certificate or witness result block against its JSON schema"""
    if not (isinstance(model, type) and issubclass(model, BaseModel)):
        raise TypeError(f"{model!r} is not a report model")
    errors = _schema_errors(data, model)
    if errors:
        raise ValueError(f"{model.__name__} mismatch: " + "; ".join(errors))
    return True


__all__ = [
    "CertificateReport",
    "WitnessReport",
    "format_validation_error",
    "validate_input_file",
    "validate_nonlinearity",
    "validate_report",
    "validate_result",
    "validate_sector",
    "validate_system",
]
