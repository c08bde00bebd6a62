from mmint.core import *
from mmint.meta import *
