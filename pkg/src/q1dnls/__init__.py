"""Quasi-1D anomalous-wave toolkit for multidimensional focusing NLS.

Closed-form Akhmediev/Peregrine solutions and their quasi-1D adiabatic
deformations, a matched-asymptotics fission/fusion predictor, a spectral
split-step solver in 1/2/3 spatial dimensions, and diagnostics comparing
the two quantitatively.
"""

__version__ = "0.1.0"
