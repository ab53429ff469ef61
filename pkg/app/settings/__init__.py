from .base import *
from .vortex import *
