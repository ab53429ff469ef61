import logging
import time
from functools import wraps

logger = logging.getLogger(__name__)


def log_action_activity(action_id: str, title: str, level="INFO", config_data: dict = None, data: dict = None):
    """
        Helper to emit a structured activity record for a command.
        :param action_id: str id of the command being executed
        :param title: A human-readable summary of the activity
        :param level: The level of the log, e.g. DEBUG, INFO, WARNING, ERROR
        :param config_data: The command configuration as a dict
        :param data: Any extra data to be logged as a dict
        :return: None
        """
    logger.log(
        logging.getLevelName(level.upper()),
        title,
        extra={
            "action_id": action_id,
            "config_data": config_data or {},
            "data": data or {},
        },
    )


def activity_logger(on_start=True, on_completion=True, on_error=True):
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            action_id = func.__name__.replace("action_", "")
            action_config = kwargs.get("action_config")
            if action_config is None and args:
                action_config = args[0]
            config_data = action_config.dict() if hasattr(action_config, "dict") else {}
            if on_start:
                log_action_activity(action_id, f"Command '{action_id}' started", config_data=config_data)
            started = time.monotonic()
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                if on_error:
                    logger.exception(
                        f"Command '{action_id}' failed: {e}",
                        extra={"action_id": action_id, "config_data": config_data},
                    )
                raise e
            else:
                if on_completion:
                    log_action_activity(
                        action_id,
                        f"Command '{action_id}' complete",
                        config_data=config_data,
                        data={"elapsed_seconds": round(time.monotonic() - started, 3)},
                    )
                return result
        return wrapper
    return decorator
