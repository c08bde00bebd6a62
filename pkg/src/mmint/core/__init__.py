from mmint.core import gf2poly as gf
from mmint.core import mpolka as mp
from mmint.core import netmodel as nm
from mmint.core import simcore as sim
from mmint.core import telemetry as tel
from mmint.core import strategies as st
from mmint.core.gf2poly import Poly
