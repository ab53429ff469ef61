import logging
from typing import Any, Optional, Tuple

import pydantic

from app.actions import action_handlers

from .errors import ActionNotFound, ConfigurationValidationError

logger = logging.getLogger(__name__)


def _invariant_messages(error: pydantic.ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"] if part != "__root__")
        parts.append(f"{location}: {item['msg']}" if location else item["msg"])
    return "; ".join(parts)


def get_handler(action_id: str):
    try:
        return action_handlers[action_id]
    except KeyError:
        raise ActionNotFound(f"Action '{action_id}' is not supported")


def build_config(action_id: str, config_data: Optional[dict] = None) -> pydantic.BaseModel:
    _, config_model = get_handler(action_id)
    try:
        return config_model.parse_obj(config_data or {})
    except pydantic.ValidationError as e:
        raise ConfigurationValidationError(f"Invalid configuration for '{action_id}': {_invariant_messages(e)}")


def execute_action(action_id: str, config_data: Optional[dict] = None) -> Tuple[pydantic.BaseModel, Any]:
    """Validate ``config_data`` against the handler's model and run it; returns (config, result)."""
    handler, _ = get_handler(action_id)
    action_config = build_config(action_id, config_data)
    logger.debug(f"Executing action '{action_id}' with config {action_config.dict()}")
    result = handler(action_config=action_config)
    return action_config, result
