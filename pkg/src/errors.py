class AlarmMinerError(Exception):
    """Base class for every error raised by the miner"""


class DomainError(AlarmMinerError, ValueError):
    """An operation was called outside its precondition"""


class ConfigError(AlarmMinerError, ValueError):
    """Configuration values are invalid or infeasible"""


class LogParseError(AlarmMinerError, ValueError):
    """A line of an alarm log could not be parsed"""

    def __init__(self, line_number, line, reason):
        self.line_number = line_number
        self.line = line
        self.reason = reason
        super().__init__(f"line {line_number}: {reason} ({line.strip()!r})")
