from . import models
from . import registry
from . import components
