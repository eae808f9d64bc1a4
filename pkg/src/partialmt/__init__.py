"""Partial structures, quasi-truth, and products/ultraproducts of finite
families of partial structures."""

from .syntax import *  # noqa: F401,F403
from .structures import *  # noqa: F401,F403
from .semantics import *  # noqa: F401,F403
from .products import *  # noqa: F401,F403

__version__ = "0.1.0"
