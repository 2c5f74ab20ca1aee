"""Numerical lab for cycloids, gravity descent, layered rays, optics and wavefronts."""

__version__ = "0.1.0"

from .contact import ContactElement, contact_residual, elementary_wave, flow, lift, propagate_front, tangency_certificate
from .curves import PlanarCurve, arc_length, curvature_radius, evolute, involute
from .cycloid import Cycloid, FitTarget, descent_time_closed, fit
from .descent import compare_slides, descent_time, perturb_slide
from .errors import (
    CausticError,
    CycloidLabError,
    DomainError,
    PhysicalRegimeError,
    RegularityError,
    TotalInternalReflectionError,
    TurningPointError,
)
from .layered import LayeredMedium, RayPath, shoot, trace_ray
from .optics import Interface, fermat_certificate, huygens_refraction, reflect, refract

__all__ = [name for name in dir() if not name.startswith("_")]
