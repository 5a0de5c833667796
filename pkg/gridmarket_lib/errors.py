# ---------- BASE ----------

class GridMarketError(Exception):
    """Root of every error raised by gridmarket_lib."""


# ---------- KERNEL ----------

class UnknownEntity(GridMarketError, LookupError):
    pass


class InvalidDelay(GridMarketError, ValueError):
    pass


class RunawayEntity(GridMarketError, RuntimeError):
    def __init__(self, entity_name: str, resumptions: int):
        super().__init__(
            f"Entity '{entity_name}' exceeded {resumptions} resumptions without finishing"
        )
        self.entity_name = entity_name
        self.resumptions = resumptions


# ---------- NETWORK / PROTOCOL ----------

class InvalidRate(GridMarketError, ValueError):
    pass


class ProtocolError(GridMarketError, RuntimeError):
    pass


# ---------- RESOURCES ----------

class InvalidResource(GridMarketError, ValueError):
    pass


class InvalidLoad(GridMarketError, ValueError):
    pass


class NoWork(GridMarketError, RuntimeError):
    pass


class NoFreePE(GridMarketError, RuntimeError):
    pass


# ---------- APPLICATION ----------

class InvalidFactor(GridMarketError, ValueError):
    pass


class InvalidRating(GridMarketError, ValueError):
    pass


# ---------- BROKER ----------

class NoResources(GridMarketError, ValueError):
    pass


class InfeasibleDeadline(GridMarketError, ValueError):
    pass


# ---------- STATISTICS / REPORTING ----------

class EmptyAccumulator(GridMarketError, ValueError):
    pass


class ReportIoError(GridMarketError, OSError):
    pass


# ---------- CONFIGURATION ----------

class ConfigError(GridMarketError, ValueError):
    def __init__(self, message: str, field: str = None, line: int = None):
        location = []
        if field:
            location.append(f"field '{field}'")
        if line is not None:
            location.append(f"line {line}")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(f"{message}{suffix}")
        self.field = field
        self.line = line


class DuplicateEntity(GridMarketError, ValueError):
    pass
