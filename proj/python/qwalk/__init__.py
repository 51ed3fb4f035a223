"""Two-photon quantum walks on triangular photonic lattices."""

from ._qwalk import *  # noqa: F401,F403
from ._qwalk import QwalkError, __doc__  # noqa: F401


def default_walk(rings=3, spacing_um=15.0, coupling_per_mm=0.2, z_mm=11.0, ports=(-1, 1)):
    """Lattice, propagator and input sites of the default experiment."""
    lattice = build_hexagonal_lattice(rings, spacing_um)  # noqa: F405
    u = evolve(assemble_uniform(lattice, 0.0, coupling_per_mm), z_mm)  # noqa: F405
    sites = (lattice.port_site(ports[0]), lattice.port_site(ports[1]))
    return lattice, u, sites
