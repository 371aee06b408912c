"""The six points of the Fano plane off one point, followed through every view.

    python3 demos/fano_walkthrough.py
"""

import numpy as np

from pgblock import codes
from pgblock.cutcheck import PointSet, is_cutting, is_rho_saturating, lift_to_extension
from pgblock.pg import Geometry

g = Geometry(2, 2)
S = PointSet.from_indices(g, range(1, 7))  # everything but (0,0,1)
print("points:", S.points)
print("cutting:", bool(is_cutting(S)))

# as columns of a generator matrix this is a minimal [6,3]_2 code
G = codes.code_from_pointset(S)
print("generator matrix:\n", G.entries)
print("weights:", sorted(set(codes.weights(G).tolist())))
print("minimal code:", bool(codes.is_minimal_code(G)))
print("bounds:", codes.check_bounds(G).to_record())

# drop one more point: some line now sits on a hyperplane's worth of S
T = PointSet.from_indices(g, range(2, 7))
v = is_cutting(T)
print("five points cutting:", bool(v), "witness:", v.witness.to_record() if v.witness else None)

# the same six points over GF(4) cover the plane by secants
L = lift_to_extension(S, 1)
print("1-saturating in PG(2,4):", bool(is_rho_saturating(L, 1)))
H = np.array(L.points).T
print("covering radius of the 3x6 parity-check matrix over GF(4):", codes.covering_radius(H, 4))
