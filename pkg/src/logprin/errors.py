"""Error taxonomy shared by all layers of the engine."""


class EngineError(Exception):
    """Base class for all structured failures raised by this package."""

    code = "EngineError"

    def __init__(self, message, **data):
        super().__init__(message)
        self.message = message
        self.data = dict(data)

    def record(self):
        """Machine readable error record (used by the CLI)."""
        rec = {"error": self.code, "message": self.message}
        if self.data:
            rec["detail"] = {k: _plain(v) for k, v in sorted(self.data.items())}
        return rec


def _plain(value):
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return str(value)


class NotSharp(EngineError):
    """The monoid generators span a cone containing a line."""

    code = "NotSharp"


class NotMonomialFixpoint(EngineError):
    """A derivation fixpoint failed to be generated by monomials."""

    code = "NotMonomialFixpoint"


class NotBalanced(EngineError):
    """The monomial saturation is not an invertible (principal) monomial ideal."""

    code = "NotBalanced"


class NoMaximalContact(EngineError):
    """No polynomially straightenable maximal contact element was found."""

    code = "NoMaximalContact"


class NotDivisible(EngineError):
    """A pullback failed the exceptional divisibility required by admissibility."""

    code = "NotDivisible"


class EmptyCenter(EngineError):
    """A blowup was requested along a center with no generators."""

    code = "EmptyCenter"


class DepthExceeded(EngineError):
    """The blowup tree exceeded the configured depth budget."""

    code = "DepthExceeded"


class NotSynchronized(EngineError):
    """Strict transform components were blown up at different stages."""

    code = "NotSynchronized"


class ParseError(EngineError):
    """Polynomial or problem text failed to parse; carries a position."""

    code = "ParseError"

    def __init__(self, message, text=None, pos=None):
        data = {}
        if text is not None:
            data["text"] = text
        if pos is not None:
            data["pos"] = pos
        super().__init__(message, **data)
        self.text = text
        self.pos = pos


class ValidationError(EngineError):
    """A problem document violated the input contract; carries a JSON path."""

    code = "ValidationError"

    def __init__(self, message, path="$"):
        super().__init__(message, path=path)
        self.path = path
