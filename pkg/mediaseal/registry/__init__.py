from . import rate_limit
from . import store
