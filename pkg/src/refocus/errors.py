# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""Exception hierarchy shared by every refocus module."""


class RefocusError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(RefocusError, ValueError):
    pass


class DecodeError(RefocusError, ValueError):
    pass


class EmptyRegion(RefocusError, ValueError):
    pass


class SpecError(RefocusError, ValueError):
    pass


class SchemaError(RefocusError, ValueError):

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DetectionFailed(RefocusError):
    pass


class LayoutMismatch(RefocusError):
    pass


class _LookupFailure(RefocusError):
    """A name that does not resolve against a known set of names."""

    kind = "label"

    def __init__(self, label, available, suggestion=None):
        self.label = label
        self.available = list(available)
        self.suggestion = suggestion
        message = f"unknown {self.kind} {label!r}; available: " + \
            ", ".join(repr(name) for name in self.available)
        if suggestion is not None:
            message += f" (did you mean {suggestion!r}?)"
        super().__init__(message)


class UnknownLabel(_LookupFailure):
    kind = "axis label"


class UnknownTarget(_LookupFailure):
    kind = "target"


class EmptyTargets(RefocusError, ValueError):
    pass


class TargetClassMismatch(RefocusError):
    pass


class ToolCallError(RefocusError):
    """Pseudocode with error diagnostics was handed to validation."""


class TransportError(RefocusError):
    pass


class AuthError(RefocusError):
    pass


class ReplayMiss(RefocusError):

    def __init__(self, fingerprint):
        self.fingerprint = fingerprint
        super().__init__(f"no recorded response for request {fingerprint}")


class StorageError(RefocusError):
    pass


class TurnLimitExceeded(RefocusError):
    pass


class JudgeUnavailable(RefocusError):
    pass
