"""Torus-equivariant DT invariants of toric Calabi-Yau 4-folds via vertex and edge terms."""
from .characters import CharClass, NotDivisible, RatChar, bar, canonicalize, divide_exact, fixed_part, tilde
from .classes import COHOMOLOGICAL, K_THEORETIC, FactoredClass, FixedPartPresent, ThetaClass, euler, khat, theta
from .geometry import (
    ELLIPTIC,
    DTResult,
    FixedPoint,
    Insertion,
    InvalidGeometry,
    ToricGeometry,
    assemble_tvir,
    build_geometry,
    c4,
    dt_invariant,
    dt_series,
    enumerate_fixed_points,
    kp3,
    local_curve,
    sign_patching_check,
)
from .partitions import (
    CurvePartition,
    PlanePartition,
    SolidPartition,
    enumerate_curve,
    enumerate_plane,
    enumerate_solid,
    f_m,
    renormalized_volume,
    sigma_curve,
    sigma_edge,
    sigma_point,
)
from .rational import RationalFunction

__version__ = "0.1.0"
