"""Analytic 4-D geometry engine for double orthogonal and stereographic
images of objects on a 3-sphere."""

from .geometry4 import (
    INFINITY,
    DegenerateInput,
    Hyperplane3,
    PointAtInfinity,
    Sphere2in4,
    Sphere3,
    hyperplane_through,
    is_infinite,
    ray_sphere_intersect,
    section_sphere,
)
from .projections import (
    ConjugatedImages,
    NotOnSphere,
    ProjectionFrame,
    StereoConfig,
    concentric_sections_demo,
    hopf_frame,
    project_double,
    standard_frame,
    stereo_point_construction,
    stereo_project,
    stereo_unproject,
)
from .spherical import (
    AntipodalPair,
    CoincidentPoints,
    EmptyRange,
    GreatCircleArc,
    HypersphericalCoords,
    antipode,
    circumsphere2,
    great_arc,
    hexahedron,
    hyperspherical_point,
    invert_tetrahedron_demo,
    spherical_inversion,
    tetrahedron,
)
from .hopf import (
    BasePoint,
    CleliaSpec,
    FiberPoint,
    HopfPlacement,
    NotUnit,
    base_to_angles,
    clelia,
    hopf_fiber,
    hopf_map,
    hopf_torus,
    place_display,
    self_intersection_fibers,
)
from .scene import (
    ParseError,
    SceneDocument,
    SceneEntity,
    clip_radius,
    export_obj,
    parse,
    project_entity,
    serialize,
    tessellate_arc,
)

__version__ = "0.1.0"
