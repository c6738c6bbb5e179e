from . import canonical
from . import container
from . import transformation
from . import trust
from . import manifest
from . import blocks
from . import watermark
from . import fingerprint
from . import outcome
from . import decision
from . import scenario
from . import backend
