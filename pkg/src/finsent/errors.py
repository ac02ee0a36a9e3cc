"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all finsent errors."""


# -- corpus ingestion ---------------------------------------------------------

class MalformedLineError(ToolkitError):
    def __init__(self, line_no: int, reason: str = ""):
        self.line_no = line_no
        msg = f"malformed phrasebank line {line_no}"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class EncodingError(ToolkitError):
    pass


class InvalidRatiosError(ToolkitError):
    pass


class MalformedRecordError(ToolkitError):
    def __init__(self, index: int, reason: str = ""):
        self.index = index
        msg = f"malformed synthetic record {index}"
        super().__init__(f"{msg}: {reason}" if reason else msg)


# -- tokenization -------------------------------------------------------------

class DuplicateTokenError(ToolkitError):
    def __init__(self, token: str):
        self.token = token
        super().__init__(f"duplicate vocabulary token: {token!r}")


class MissingUnkError(ToolkitError):
    pass


# -- NSP pair generation ------------------------------------------------------

class InsufficientCorpusError(ToolkitError):
    pass


class InvalidSizeError(ToolkitError):
    pass


# -- concatenation ------------------------------------------------------------

class TooFewSentencesError(ToolkitError):
    pass


# -- scoring backends ---------------------------------------------------------

class ScorerUnavailableError(ToolkitError):
    pass


class RemoteError(ToolkitError):
    def __init__(self, status: int, detail: str = ""):
        self.status = status
        msg = f"backend returned status {status}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class InvalidInputError(ToolkitError):
    pass


# -- evaluation ---------------------------------------------------------------

class LengthMismatchError(ToolkitError):
    pass


class UnknownLabelError(ToolkitError):
    pass


class EmptyMatrixError(ToolkitError):
    pass


class InvalidProbabilityError(ToolkitError):
    pass


class InvalidSizesError(ToolkitError):
    pass


# -- freeze planning ----------------------------------------------------------

class InvalidConfigError(ToolkitError):
    pass


class InvalidLayerError(ToolkitError):
    pass
