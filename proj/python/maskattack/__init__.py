"""Black-box adversarial audio against speech recognizers via frequency masking."""

from maskattack._core import *  # noqa: F401,F403
from maskattack._core import __doc__  # noqa: F401
