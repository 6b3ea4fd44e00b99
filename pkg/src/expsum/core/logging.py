import logging

from expsum.core.config import ApplicationSettings, get_settings

_configured = False


def configure_logging(settings: ApplicationSettings | None = None, *, verbosity: int = 0) -> None:
    """Configure root logging once from settings; verbosity lowers the level."""
    global _configured
    config = settings or get_settings()

    level = logging.getLevelName(config.log_level.upper())
    if not isinstance(level, int):
        level = logging.WARNING
    if verbosity == 1:
        level = min(level, logging.INFO)
    elif verbosity >= 2:
        level = logging.DEBUG

    if _configured:
        logging.getLogger().setLevel(level)
        return

    logging.basicConfig(level=level, format=config.log_format)
    _configured = True
