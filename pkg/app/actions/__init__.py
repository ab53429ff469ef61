from .core import *


def setup_action_handlers() -> ActionHandlers:
    # one CLI command per action_<id> handler
    return discover_actions(HANDLERS_MODULE, HANDLER_PREFIX)


action_handlers = setup_action_handlers()
