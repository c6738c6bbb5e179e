from . import core
from . import mapper
from . import entry_mapper
from . import backend_adapter
from . import binder
from . import exporter
from . import checker
from . import validator
from . import attack
from . import scenario
from . import listener
