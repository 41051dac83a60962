"""
Coriolis compensation in light-pulse atom interferometers.

Closed-form closure error and wave-packet overlap, a phase budget for
simultaneous conjugate interferometers, a seeded shot simulator, and the
ellipse and Gaussian fits that turn shots into rotation-rate scans.
"""

__version__ = "0.1.0"

from .model import *  # noqa: E402,F401,F403
from .kinematics import *  # noqa: E402,F401,F403
from .wavepacket import *  # noqa: E402,F401,F403
from .phases import *  # noqa: E402,F401,F403
from .synth import *  # noqa: E402,F401,F403
from .ellipse import *  # noqa: E402,F401,F403
from .analysis import *  # noqa: E402,F401,F403
from .tables import *  # noqa: E402,F401,F403
from .config import *  # noqa: E402,F401,F403
