"""Convex integration step for the Euler-Reynolds system on the periodic box.

Fields are numpy arrays of shape (components, n, n, n) indexed [c, i1, i2, i3]
with x = (i1, i2, i3) / n on the unit torus. Symmetric tensors use the component
order xx, xy, xz, yy, yz, zz.
"""

from ._onsager import *  # noqa: F401,F403
from ._onsager import OnsagerError, __doc__  # noqa: F401
