import importlib
import inspect
from enum import Enum
from typing import Any, Callable, Dict, Optional, Tuple, Type

import pydantic
from pydantic import BaseModel


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class ActionConfiguration(BaseModel):
    output: Optional[str] = pydantic.Field(
        None, title="Output path", description="File to write; standard output when omitted."
    )
    format: OutputFormat = pydantic.Field(OutputFormat.CSV, title="Output format")

    class Config:
        extra = pydantic.Extra.forbid


class GenericActionConfiguration(ActionConfiguration):
    pass


HANDLERS_MODULE = "app.actions.handlers"
HANDLER_PREFIX = "action_"

ActionHandlers = Dict[str, Tuple[Callable[..., Any], Type[BaseModel]]]


def _config_model(func: Callable[..., Any]) -> Type[BaseModel]:
    # the handler's action_config annotation is the model its CLI options are validated against
    parameter = inspect.signature(func).parameters.get("action_config")
    if parameter is None or parameter.annotation is inspect.Parameter.empty:
        return GenericActionConfiguration
    return parameter.annotation


def discover_actions(module_name: str = HANDLERS_MODULE, prefix: str = HANDLER_PREFIX) -> ActionHandlers:
    """Map action ids to (handler, configuration model) for every ``<prefix><id>`` function in a module."""
    module = importlib.import_module(module_name)
    return {
        name[len(prefix):]: (func, _config_model(func))
        for name, func in inspect.getmembers(module, inspect.isfunction)
        if name.startswith(prefix) and func.__module__ == module.__name__
    }

