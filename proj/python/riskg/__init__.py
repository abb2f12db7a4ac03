from ._riskg import *  # noqa: F401,F403
