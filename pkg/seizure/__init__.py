"""
Seizure detection on multichannel EEG with simple window features, classic
classifiers and deep belief networks, with embedded cost estimates.
"""

from seizure.config import settings as settings
from seizure.methods import dump, dumps
from seizure.methods import load
__version__ = "0.1.0"
__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

version_info = tuple(int(v) if v.isdigit()
                     else v for v in __version__.split('.'))
