"""Sphere-guided training of implicit surface reconstructions.

Trains a neural signed-distance (or occupancy) field from multi-view
images by volumetric ray marching while jointly optimizing a cloud of
equal-radius spheres that tracks the estimated surface. The cloud
restricts both training-ray selection and per-ray sample placement to
the region it covers, which concentrates the rendering quadrature near
the surface.

Hot geometry kernels run through a compiled Cython core when available,
with a bit-compatible numpy fallback (see :mod:`sphereguide.backend`).
"""

from .backend import COMPILED, backend_name

__version__ = "0.1.0"

__all__ = ["COMPILED", "backend_name", "__version__"]
