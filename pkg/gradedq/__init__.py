import logging

from gradedq.algebra import Chart, GPoly, GVar
from gradedq.exceptions import *
from gradedq.nq import Derivation, q_square

__version__ = '0.1.0'

logging.getLogger(__name__).addHandler(logging.NullHandler())
