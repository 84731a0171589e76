"""
wavedfs — decoherence-free-subspace control for qubit sensor networks.

A library and CLI for designing control sequences that decouple a network of
qubit sensors from correlated plane-wave noise while retaining sensitivity to
a plane-wave signal, together with the Fisher-information machinery needed to
compare entangled and product sensing strategies.

Modules
-------
wavefield   waves, sensors, phasors, field matrices
control     control sequences, Fourier transforms, coupling strengths
dfsbuild    DFS construction, placement, affine/approximate DFS, SNR
metrology   QFI/QFIM, dephasing, twirl, classical Fisher information
bounds      Hamming-ball bounds and separable-strategy suppression
wavecli     command-line front end
"""

__version__ = "0.1.0"
