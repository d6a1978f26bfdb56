"""Python bindings for the adprompt pipeline."""

from ._adprompt import *  # noqa: F401,F403
from ._adprompt import (  # noqa: F401
    AlignmentMismatchError,
    ConfigurationError,
    EncoderBackend,
    Error,
    NormalizationError,
    NumericError,
    ParseError,
    ValidationError,
)

CHECKPOINT_DIR_ENV = "ADPROMPT_CHECKPOINT_DIR"


def hf_backend(checkpoint, **kwargs):
    """Loads a pre-trained encoder through the transformers adapter."""
    from .hf_backend import HFEncoderBackend

    return HFEncoderBackend(checkpoint, **kwargs)
