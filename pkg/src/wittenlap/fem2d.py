"""Weighted P1 finite elements for plane domains in the conformal disk models.

The three space forms are realized as conformal metrics rho^2 |dx|^2 on a
planar model (Poincare disk, plane, stereographic disk), so a single flat
P1 discretization covers all curvatures: the Dirichlet energy of the model
coordinates is conformally invariant in dimension two, hence the stiffness
matrix only carries the weight e^{-phi(t)}, while the mass matrix carries
the full area density rho^2 e^{-phi(t)}.

Meshes are unstructured Delaunay triangulations of a hexagonal interior
lattice fenced by an analytic boundary polyline, except for rectangles
(structured grid, exact corners) and disjoint-disk unions (two translated
disk meshes).  Boundary vertices sit on the analytic boundary to machine
precision; curved boundaries are polygonalized at the target resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import shapely
from scipy import sparse
from scipy.sparse import csgraph
from scipy.sparse.linalg import ArpackNoConvergence, eigsh
from scipy.spatial import Delaunay
from shapely.geometry import MultiPoint, Point, Polygon

from .errors import ConvergenceError, DomainError, MeshError
from .measure import triangle_midpoint_weights
from .radial import BoundaryCondition
from .spaceform import (
    Curvature,
    SpaceFormModel,
    conformal_factor,
    geodesic_distance,
    geodesic_distance_to_origin,
    mobius_shift,
)
from .weights import WeightProfile

__all__ = [
    "TriMesh",
    "FemField",
    "SpectrumResult",
    "ShapeSpec",
    "generate_mesh",
    "assemble",
    "solve_spectrum",
    "domain_spectrum",
    "rayleigh_quotient",
    "recenter_for_zero_mean",
    "nodal_domain_count",
    "interior_indices",
    "save_mesh",
    "load_mesh",
]

_AREA_FLOOR = 1e-14

# barycentric coordinates of the three edge midpoints (degree-2 Gauss rule)
_QPOINTS = np.array([[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]])


# ---------------------------------------------------------------------------
# mesh container


@dataclass(frozen=True)
class TriMesh:
    """Conforming triangulation in model coordinates.

    vertices: (nv, 2) float array; triangles: (nt, 3) int array, positively
    oriented; boundary_vertices: sorted indices of vertices incident to an
    edge of multiplicity one; h_max: longest edge length.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_vertices: np.ndarray
    h_max: float

    @classmethod
    def from_raw(cls, vertices, triangles) -> "TriMesh":
        vertices = np.asarray(vertices, dtype=float)
        triangles = np.asarray(triangles, dtype=np.int64)
        if vertices.ndim != 2 or vertices.shape[1] != 2:
            raise MeshError("vertices must be an (nv, 2) array")
        if triangles.ndim != 2 or triangles.shape[1] != 3:
            raise MeshError("triangles must be an (nt, 3) array")
        if triangles.size and (triangles.min() < 0 or triangles.max() >= len(vertices)):
            raise MeshError("triangle index out of range")
        tri = triangles.copy()
        a = vertices[tri[:, 0]]
        b = vertices[tri[:, 1]]
        c = vertices[tri[:, 2]]
        signed = 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
                        - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))
        flip = signed < 0
        tri[flip] = tri[flip][:, [0, 2, 1]]
        if np.any(np.abs(signed) <= _AREA_FLOOR):
            raise MeshError("degenerate triangle (area below 1e-14)")
        edges = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]])
        lengths = np.linalg.norm(
            vertices[edges[:, 0]] - vertices[edges[:, 1]], axis=1
        )
        und = np.sort(edges, axis=1)
        uniq, counts = np.unique(und, axis=0, return_counts=True)
        if np.any(counts > 2):
            raise MeshError("non-conforming mesh: edge shared by > 2 triangles")
        bnd_edges = uniq[counts == 1]
        boundary = np.unique(bnd_edges)
        return cls(vertices, tri, boundary, float(lengths.max()) if len(tri) else 0.0)

    @property
    def interior_vertices(self) -> np.ndarray:
        mask = np.ones(len(self.vertices), dtype=bool)
        mask[self.boundary_vertices] = False
        return np.nonzero(mask)[0]


def interior_indices(mesh: TriMesh) -> np.ndarray:
    return mesh.interior_vertices


@dataclass(frozen=True)
class FemField:
    """Nodal values of a P1 function on a mesh."""

    mesh: TriMesh
    nodal_values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.nodal_values, dtype=float)
        object.__setattr__(self, "nodal_values", vals)
        if self.mesh is not None and len(vals) != len(self.mesh.vertices):
            raise MeshError("field length does not match vertex count")
        if not np.all(np.isfinite(vals)):
            raise MeshError("field contains non-finite values")


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    eigenfields: list
    bc: BoundaryCondition
    weighted_volume: float
    residuals: np.ndarray = field(default=None)


# ---------------------------------------------------------------------------
# mesh file format: "nv nt" header, vertex lines, triangle lines, then a
# `boundary` sentinel followed by the boundary vertex indices


def save_mesh(mesh: TriMesh, path) -> None:
    lines = [f"{len(mesh.vertices)} {len(mesh.triangles)}"]
    for x, y in mesh.vertices:
        lines.append(f"{float(x)!r} {float(y)!r}")
    for i, j, k in mesh.triangles:
        lines.append(f"{i} {j} {k}")
    lines.append("boundary")
    for b in mesh.boundary_vertices:
        lines.append(str(int(b)))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_mesh(path) -> TriMesh:
    with open(path) as fh:
        tokens = fh.read().split("\n")
    tokens = [t for t in tokens if t.strip()]
    try:
        nv, nt = (int(x) for x in tokens[0].split())
        verts = np.array(
            [[float(w) for w in tokens[1 + i].split()] for i in range(nv)]
        )
        tris = np.array(
            [[int(w) for w in tokens[1 + nv + i].split()] for i in range(nt)],
            dtype=np.int64,
        )
        if tokens[1 + nv + nt].strip() != "boundary":
            raise MeshError("missing 'boundary' sentinel line")
        bnd = np.array([int(t) for t in tokens[2 + nv + nt:]], dtype=np.int64)
    except (ValueError, IndexError) as exc:
        raise MeshError(f"malformed mesh file {path}") from exc
    mesh = TriMesh.from_raw(verts, tris)
    if not np.array_equal(np.sort(bnd), mesh.boundary_vertices):
        raise MeshError("stored boundary set disagrees with edge topology")
    return mesh


# ---------------------------------------------------------------------------
# shape specifications and mesh generation


KNOWN_SHAPES = (
    "disk", "ellipse", "rectangle", "dumbbell", "two_disjoint_disks", "polygon"
)


@dataclass(frozen=True)
class ShapeSpec:
    """Named shape with numeric parameters.

    disk: cx, cy, r (or just r, centered)   ellipse: a, b [, angle_deg [, cx, cy]]
    rectangle: w, h                          dumbbell: r, neck_w, neck_len, separation
    two_disjoint_disks: r, gap               polygon: x1, y1, x2, y2, ... (ccw)
    """

    name: str
    params: tuple

    @classmethod
    def parse(cls, text: str) -> "ShapeSpec":
        name, sep, raw = text.partition(":")
        params = ()
        if sep and raw.strip():
            try:
                params = tuple(float(x) for x in raw.split(","))
            except ValueError as exc:
                raise MeshError(f"bad shape parameters in '{text}'") from exc
        return cls(name.strip(), params)

    def __str__(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{p:g}" for p in self.params)


def _close_polyline(points: np.ndarray) -> np.ndarray:
    if np.allclose(points[0], points[-1]):
        return points[:-1]
    return points


def _circle_points(cx, cy, r, h, a0=0.0, a1=2 * math.pi, closed=True):
    arc = abs(a1 - a0) * r
    n = max(8 if closed else 2, int(math.ceil(arc / h)))
    angles = np.linspace(a0, a1, n, endpoint=not closed)
    return np.stack([cx + r * np.cos(angles), cy + r * np.sin(angles)], axis=1)


def _segment_points(p, q, h, include_start=True):
    p, q = np.asarray(p, float), np.asarray(q, float)
    n = max(1, int(math.ceil(np.linalg.norm(q - p) / h)))
    ts = np.linspace(0.0, 1.0, n, endpoint=False)
    if not include_start:
        ts = ts[1:]
    return p[None, :] + ts[:, None] * (q - p)[None, :]


def _ellipse_points(a, b, angle, cx, cy, h):
    # Ramanujan perimeter estimate sets the sample count
    per = math.pi * (3 * (a + b) - math.sqrt((3 * a + b) * (a + 3 * b)))
    n = max(16, int(math.ceil(per / h)))
    th = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    x, y = a * np.cos(th), b * np.sin(th)
    ca, sa = math.cos(angle), math.sin(angle)
    return np.stack([cx + ca * x - sa * y, cy + sa * x + ca * y], axis=1)


def _dumbbell_outline(r, neck_w, neck_len, separation, h):
    if neck_w <= 0 or neck_w >= 2 * r:
        raise MeshError("dumbbell neck width must satisfy 0 < neck_w < 2r")
    if separation < 0:
        raise MeshError("dumbbell separation must be nonnegative")
    s = 2 * r + separation                      # center-to-center distance
    half_chord = math.sqrt(r * r - 0.25 * neck_w * neck_w)
    x_junction = 0.5 * s - half_chord           # where the neck meets each lobe
    if neck_len < 2 * x_junction:
        raise MeshError("dumbbell neck too short to bridge the lobes")
    phi_n = math.asin(0.5 * neck_w / r)
    # counterclockwise outline: right lobe arc, top neck edge, left lobe arc,
    # bottom neck edge; all points exactly on circles / neck lines
    right = _circle_points(
        0.5 * s, 0.0, r, h, a0=-(math.pi - phi_n), a1=math.pi - phi_n, closed=False
    )
    top = _segment_points(
        [x_junction, 0.5 * neck_w], [-x_junction, 0.5 * neck_w], h, include_start=True
    )
    left = _circle_points(
        -0.5 * s, 0.0, r, h, a0=phi_n, a1=2 * math.pi - phi_n, closed=False
    )
    bottom = _segment_points(
        [-x_junction, -0.5 * neck_w], [x_junction, -0.5 * neck_w], h, include_start=True
    )
    return np.concatenate([right, top, left, bottom])


def _polygon_resampled(coords, h):
    coords = np.asarray(coords, float).reshape(-1, 2)
    if len(coords) < 3:
        raise MeshError("polygon needs at least 3 vertices")
    pieces = []
    for i in range(len(coords)):
        pieces.append(_segment_points(coords[i], coords[(i + 1) % len(coords)], h))
    return np.concatenate(pieces)


def _hex_lattice(xmin, xmax, ymin, ymax, h):
    dy = h * math.sqrt(3.0) / 2.0
    rows = []
    ny = int(math.ceil((ymax - ymin) / dy)) + 1
    nx = int(math.ceil((xmax - xmin) / h)) + 2
    for iy in range(ny + 1):
        y = ymin + iy * dy
        off = 0.5 * h if iy % 2 else 0.0
        xs = xmin + off + h * np.arange(nx)
        rows.append(np.stack([xs, np.full_like(xs, y)], axis=1))
    return np.concatenate(rows)


def _delaunay_domain(outline: np.ndarray, target_h: float) -> TriMesh:
    """Triangulate the region bounded by a closed polyline."""
    outline = _close_polyline(np.asarray(outline, float))
    poly = Polygon(outline)
    if not poly.is_valid:
        raise MeshError("boundary polyline is self-intersecting")
    h = 0.9 * target_h
    for _ in range(4):
        xmin, ymin, xmax, ymax = poly.bounds
        lattice = _hex_lattice(xmin, xmax, ymin, ymax, h)
        inside = shapely.contains_xy(poly, lattice[:, 0], lattice[:, 1])
        pts = lattice[inside]
        if len(pts):
            dist = shapely.distance(poly.boundary, shapely.points(pts))
            pts = pts[dist >= 0.5 * h]
        cloud = np.concatenate([outline, pts])
        tri = Delaunay(cloud)
        cent = cloud[tri.simplices].mean(axis=1)
        keep = shapely.contains_xy(poly, cent[:, 0], cent[:, 1])
        simplices = tri.simplices[keep]
        # drop slivers; then drop orphaned points and remap indices
        a = cloud[simplices[:, 0]]
        b = cloud[simplices[:, 1]]
        c = cloud[simplices[:, 2]]
        area = 0.5 * np.abs(
            (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
            - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
        )
        simplices = simplices[area > _AREA_FLOOR]
        used = np.unique(simplices)
        remap = -np.ones(len(cloud), dtype=np.int64)
        remap[used] = np.arange(len(used))
        mesh = TriMesh.from_raw(cloud[used], remap[simplices])
        if mesh.h_max <= 1.5 * target_h:
            return mesh
        h *= 0.85
    raise MeshError("could not reach the requested resolution")


def _structured_rectangle(w: float, ht: float, target_h: float) -> TriMesh:
    nx = max(2, int(math.ceil(w / (target_h / math.sqrt(2.0)))))
    ny = max(2, int(math.ceil(ht / (target_h / math.sqrt(2.0)))))
    xs = np.linspace(-0.5 * w, 0.5 * w, nx + 1)
    ys = np.linspace(-0.5 * ht, 0.5 * ht, ny + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    verts = np.stack([X.ravel(), Y.ravel()], axis=1)

    def vid(i, j):
        return i * (ny + 1) + j

    tris = []
    for i in range(nx):
        for j in range(ny):
            v00, v10 = vid(i, j), vid(i + 1, j)
            v01, v11 = vid(i, j + 1), vid(i + 1, j + 1)
            tris.append((v00, v10, v11))
            tris.append((v00, v11, v01))
    return TriMesh.from_raw(verts, np.array(tris))


def _translate(mesh: TriMesh, dx: float, dy: float) -> TriMesh:
    return TriMesh(
        mesh.vertices + np.array([dx, dy]),
        mesh.triangles,
        mesh.boundary_vertices,
        mesh.h_max,
    )


def _reflect_x(mesh: TriMesh) -> TriMesh:
    # exact in floating point (negation), so a radial weight centered on the
    # axis sees two bitwise-congruent components and degenerate pairs stay
    # degenerate to rounding
    v = mesh.vertices.copy()
    v[:, 0] = -v[:, 0]
    return TriMesh(
        v,
        mesh.triangles[:, [0, 2, 1]].copy(),
        mesh.boundary_vertices,
        mesh.h_max,
    )


def _concatenate(ma: TriMesh, mb: TriMesh) -> TriMesh:
    off = len(ma.vertices)
    return TriMesh(
        np.concatenate([ma.vertices, mb.vertices]),
        np.concatenate([ma.triangles, mb.triangles + off]),
        np.concatenate([ma.boundary_vertices, mb.boundary_vertices + off]),
        max(ma.h_max, mb.h_max),
    )


def generate_mesh(
    shape: ShapeSpec, target_h: float, model: SpaceFormModel | None = None
) -> TriMesh:
    """Mesh one of the named shapes at resolution target_h (h_max <= 1.5 target_h)."""
    if target_h <= 0:
        raise MeshError("target_h must be positive")
    p = shape.params
    if shape.name == "disk":
        if len(p) == 1:
            cx, cy, r = 0.0, 0.0, p[0]
        elif len(p) == 3:
            cx, cy, r = p
        else:
            raise MeshError("disk takes (r) or (cx, cy, r)")
        if r <= 0:
            raise MeshError("disk radius must be positive")
        mesh = _delaunay_domain(_circle_points(cx, cy, r, 0.9 * target_h), target_h)
    elif shape.name == "ellipse":
        if len(p) == 2:
            a, b, ang, cx, cy = p[0], p[1], 0.0, 0.0, 0.0
        elif len(p) == 3:
            a, b, ang, cx, cy = p[0], p[1], math.radians(p[2]), 0.0, 0.0
        elif len(p) == 5:
            a, b, ang, cx, cy = p[0], p[1], math.radians(p[2]), p[3], p[4]
        else:
            raise MeshError("ellipse takes (a, b[, angle_deg[, cx, cy]])")
        if a <= 0 or b <= 0:
            raise MeshError("ellipse semi-axes must be positive")
        mesh = _delaunay_domain(
            _ellipse_points(a, b, ang, cx, cy, 0.9 * target_h), target_h
        )
    elif shape.name == "rectangle":
        if len(p) != 2 or p[0] <= 0 or p[1] <= 0:
            raise MeshError("rectangle takes positive (w, h)")
        mesh = _structured_rectangle(p[0], p[1], target_h)
    elif shape.name == "dumbbell":
        if len(p) != 4:
            raise MeshError("dumbbell takes (r, neck_w, neck_len, separation)")
        mesh = _delaunay_domain(_dumbbell_outline(*p, 0.9 * target_h), target_h)
    elif shape.name == "two_disjoint_disks":
        if len(p) != 2 or p[0] <= 0 or p[1] <= 0:
            raise MeshError("two_disjoint_disks takes positive (r, gap)")
        r, gap = p
        one = _delaunay_domain(_circle_points(0.0, 0.0, r, 0.9 * target_h), target_h)
        right = _translate(one, r + 0.5 * gap, 0.0)
        mesh = _concatenate(_reflect_x(right), right)
    elif shape.name == "polygon":
        if len(p) < 6 or len(p) % 2:
            raise MeshError("polygon takes an even list of >= 6 coordinates")
        mesh = _delaunay_domain(_polygon_resampled(p, 0.9 * target_h), target_h)
    else:
        raise MeshError(f"unknown shape '{shape.name}'")

    if model is not None:
        rad = np.linalg.norm(mesh.vertices, axis=1)
        if model.kappa == Curvature.HYPERBOLIC and rad.max() >= 1.0 - 1e-12:
            raise DomainError("shape does not fit inside the Poincare disk")
        if model.kappa == Curvature.SPHERICAL and rad.max() > 1.0 + 1e-12:
            raise DomainError("shape does not fit inside the closed model disk")
    return mesh


# ---------------------------------------------------------------------------
# assembly


def _p1_geometry(mesh: TriMesh):
    """Flat areas and constant P1 gradients (nt, 2, 3) per triangle."""
    v = mesh.vertices[mesh.triangles]
    a, b, c = v[:, 0], v[:, 1], v[:, 2]
    det = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (
        c[:, 0] - a[:, 0]
    )
    area = 0.5 * det
    grads = np.empty((len(v), 2, 3))
    grads[:, 0, 0] = b[:, 1] - c[:, 1]
    grads[:, 1, 0] = c[:, 0] - b[:, 0]
    grads[:, 0, 1] = c[:, 1] - a[:, 1]
    grads[:, 1, 1] = a[:, 0] - c[:, 0]
    grads[:, 0, 2] = a[:, 1] - b[:, 1]
    grads[:, 1, 2] = b[:, 0] - a[:, 0]
    grads /= det[:, None, None]
    return area, grads


def _coerce_bc(bc) -> BoundaryCondition:
    if isinstance(bc, BoundaryCondition):
        return bc
    return BoundaryCondition.parse(str(bc))


def assemble(
    mesh: TriMesh,
    model: SpaceFormModel,
    profile: WeightProfile,
    bc: BoundaryCondition,
    origin=(0.0, 0.0),
):
    """Weighted stiffness and mass matrices (CSR, symmetric).

    Stiffness: int grad u . grad v e^{-phi} dx in flat model coordinates (the
    conformal factor cancels in two dimensions).  Mass: int u v rho^2 e^{-phi}.
    Dirichlet matrices are restricted to interior vertices.
    """
    bc = _coerce_bc(bc)
    if model.dimension != 2:
        raise DomainError("FEM assembly is two-dimensional")
    area, grads = _p1_geometry(mesh)
    v = mesh.vertices[mesh.triangles]
    mids = 0.5 * (v + np.roll(v, -1, axis=1))       # edge midpoints per triangle
    flat = mids.reshape(-1, 2)
    dist = geodesic_distance(model, flat, origin)
    profile.require_domain(float(dist.max()))
    ephi = np.exp(-np.asarray(profile.phi(dist), dtype=float)).reshape(-1, 3)
    rho2 = (conformal_factor(model, flat) ** 2).reshape(-1, 3)

    # midpoint m_q sits opposite vertex q: barycentric rows of _QPOINTS
    # (mids[0] is the a-b midpoint, i.e. opposite c -> reorder to match)
    qmat = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])

    ke = np.einsum("tia,tib,t,t->tab", grads, grads, area, ephi.mean(axis=1))
    gmass = rho2 * ephi
    me = np.einsum("qa,tq,qb,t->tab", qmat, gmass, qmat, area / 3.0)

    rows = np.repeat(mesh.triangles, 3, axis=1).reshape(-1)
    cols = np.tile(mesh.triangles, (1, 3)).reshape(-1)
    n = len(mesh.vertices)
    K = sparse.coo_matrix((ke.reshape(-1), (rows, cols)), shape=(n, n)).tocsr()
    M = sparse.coo_matrix((me.reshape(-1), (rows, cols)), shape=(n, n)).tocsr()
    if bc == BoundaryCondition.DIRICHLET:
        free = mesh.interior_vertices
        K = K[free][:, free].tocsr()
        M = M[free][:, free].tocsr()
    return K, M


# ---------------------------------------------------------------------------
# eigensolve


def _deterministic_completion(a: np.ndarray) -> np.ndarray:
    """Orthogonal c x c matrix whose first column is a/|a| (canonical fill)."""
    c = len(a)
    q = np.empty((c, c))
    q[:, 0] = a / np.linalg.norm(a)
    k = int(np.argmax(np.abs(a)))
    cols = [i for i in range(c) if i != k]
    basis = np.eye(c)[:, cols]
    mat = np.concatenate([q[:, :1], basis], axis=1)
    qq, _ = np.linalg.qr(mat)
    # qr may flip the first column's sign; undo to keep it a/|a|
    if np.dot(qq[:, 0], q[:, 0]) < 0:
        qq[:, 0] *= -1
    return qq


def _refine_subspace(K, M, sigma, vals, vecs):
    """Block inverse iteration with Rayleigh-Ritz extraction.

    ARPACK's back-transformed residuals can sit near 1e-7 for interior pairs;
    a few subspace iterations with the cached shifted factorization push
    every pair to machine-precision residuals.
    """
    from scipy.linalg import cholesky, eigh, solve_triangular
    from scipy.sparse.linalg import splu

    def _worst(vv, V):
        w = 0.0
        for i in range(V.shape[1]):
            ku = K @ V[:, i]
            mu = M @ V[:, i]
            r = np.linalg.norm(ku - vv[i] * mu)
            w = max(w, r / max(np.linalg.norm(ku), np.linalg.norm(mu), 1e-300))
        return w

    V = vecs
    lu = None
    for _ in range(6):
        if _worst(vals, V) <= 1e-10:
            break
        if lu is None:
            lu = splu((K - sigma * M).tocsc())
        V = lu.solve(M @ V)
        B = V.T @ (M @ V)
        L = cholesky(B, lower=True)
        V = solve_triangular(L, V.T, lower=True).T
        A = V.T @ (K @ V)
        w, S = eigh(0.5 * (A + A.T))
        vals, V = w, V @ S
    return vals, V


def _rotate_clusters(vals: np.ndarray, vecs: np.ndarray, M) -> np.ndarray:
    """Deterministically rotate exactly degenerate eigenspaces.

    Within each cluster, the first vector maximizes the weighted mean
    (component along M 1) and the remaining vectors have exactly zero
    weighted mean, which forces a sign change on disconnected domains
    (identical disjoint components make the low pairs degenerate to
    rounding).  The threshold is kept at the residual tolerance so mixing
    never degrades eigenpair residuals: near-degenerate but split discrete
    pairs are left in ARPACK's deterministic frame.
    """
    mom = M @ np.ones(M.shape[0])
    i = 0
    while i < len(vals):
        j = i + 1
        scale = max(abs(vals[i]), 1.0)
        while j < len(vals) and abs(vals[j] - vals[i]) <= 1e-9 * scale:
            j += 1
        if j - i > 1:
            block = vecs[:, i:j]
            a = block.T @ mom
            if np.linalg.norm(a) > 1e-10:
                vecs[:, i:j] = block @ _deterministic_completion(a)
        i = j
    return vecs


def solve_spectrum(
    stiffness,
    mass,
    bc: BoundaryCondition,
    k: int,
    mesh: TriMesh | None = None,
    model: SpaceFormModel | None = None,
    profile: WeightProfile | None = None,
    origin=(0.0, 0.0),
    maxiter: int = 5000,
) -> SpectrumResult:
    """k smallest generalized eigenpairs K u = lambda M u by shift-invert.

    Deterministic: the start vector is the all-ones combination of canonical
    basis vectors, and degenerate clusters are rotated to a canonical frame.
    """
    bc = _coerce_bc(bc)
    if k < 1:
        raise DomainError("need k >= 1 eigenvalues")
    n = stiffness.shape[0]
    if k >= n:
        raise DomainError("k must be below the matrix dimension")
    v0 = np.ones(n) / math.sqrt(n)
    if bc == BoundaryCondition.DIRICHLET:
        sigma = 0.0
    else:
        sigma = -0.01 * float(stiffness.diagonal().sum() / mass.diagonal().sum()) - 1e-9
    last_exc = None
    for attempt in range(3):
        try:
            vals, vecs = eigsh(
                stiffness, k=k, M=mass, sigma=sigma, which="LM", v0=v0, maxiter=maxiter
            )
            break
        except ArpackNoConvergence as exc:
            raise ConvergenceError(f"eigensolver did not converge: {exc}") from exc
        except RuntimeError as exc:     # singular factorization: nudge the shift
            last_exc = exc
            sigma = sigma - 1e-8 * (1.0 + abs(sigma))
    else:
        raise ConvergenceError(f"shifted factorization failed: {last_exc}")

    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    vals, vecs = _refine_subspace(stiffness, mass, sigma, vals, vecs)
    vecs = _rotate_clusters(vals, vecs, mass)

    # weighted orthonormalization (Gram-Schmidt in the M inner product)
    for i in range(k):
        for j in range(i):
            vecs[:, i] -= (vecs[:, j] @ (mass @ vecs[:, i])) * vecs[:, j]
        nrm = math.sqrt(max(vecs[:, i] @ (mass @ vecs[:, i]), 0.0))
        if nrm == 0.0:
            raise ConvergenceError("zero eigenvector after orthogonalization")
        vecs[:, i] /= nrm
    for i in range(k):
        lead = int(np.argmax(np.abs(vecs[:, i])))
        if vecs[lead, i] < 0:
            vecs[:, i] *= -1

    resid = np.empty(k)
    for i in range(k):
        ku = stiffness @ vecs[:, i]
        mu = mass @ vecs[:, i]
        r = np.linalg.norm(ku - vals[i] * mu)
        # the Neumann constant mode has |K u| ~ 0, so scale by |M u| there
        denom = max(np.linalg.norm(ku), np.linalg.norm(mu), 1e-300)
        resid[i] = r / denom
        if resid[i] > 1e-8:
            raise ConvergenceError(
                f"eigenpair {i} residual {resid[i]:.2e} exceeds 1e-8"
            )

    fields = []
    if mesh is not None:
        if bc == BoundaryCondition.DIRICHLET:
            free = mesh.interior_vertices
            for i in range(k):
                full = np.zeros(len(mesh.vertices))
                full[free] = vecs[:, i]
                fields.append(FemField(mesh, full))
        else:
            fields = [FemField(mesh, vecs[:, i].copy()) for i in range(k)]

    if mesh is not None and model is not None and profile is not None:
        area, w = triangle_midpoint_weights(
            model, profile, mesh.vertices, mesh.triangles, origin=origin
        )
        volume = float(np.sum(area / 3.0 * w.sum(axis=1)))
    elif bc == BoundaryCondition.NEUMANN:
        volume = float(mass.sum())
    else:
        volume = float("nan")

    if bc == BoundaryCondition.NEUMANN:
        if abs(vals[0]) > 1e-8 * max(abs(vals[-1]), 1.0):
            raise ConvergenceError(
                f"Neumann ground eigenvalue {vals[0]:.2e} is not numerically zero"
            )
    return SpectrumResult(vals, fields, bc, volume, resid)


def domain_spectrum(
    mesh: TriMesh,
    model: SpaceFormModel,
    profile: WeightProfile,
    bc: BoundaryCondition,
    k: int,
    origin=(0.0, 0.0),
) -> SpectrumResult:
    """Assemble and solve in one step."""
    K, M = assemble(mesh, model, profile, bc, origin=origin)
    return solve_spectrum(
        K, M, bc, k, mesh=mesh, model=model, profile=profile, origin=origin
    )


def rayleigh_quotient(field, stiffness, mass) -> float:
    """(f^T K f) / (f^T M f) for a FemField or plain coefficient vector."""
    if isinstance(field, FemField):
        vals = field.nodal_values
        if field.mesh is not None and len(vals) != stiffness.shape[0]:
            vals = vals[field.mesh.interior_vertices]
    else:
        vals = np.asarray(field, dtype=float)
    denom = float(vals @ (mass @ vals))
    if denom <= 0.0:
        raise DomainError("Rayleigh quotient of a zero field")
    return float(vals @ (stiffness @ vals)) / denom


# ---------------------------------------------------------------------------
# nodal domains


def nodal_domain_count(field: FemField, rel_tol: float = 1e-8) -> int:
    """Connected sign regions of the nodal values.

    Vertices with |f| below rel_tol * max|f| are treated as on the nodal set
    and belong to no domain; edges join strictly same-sign vertices.
    """
    f = field.nodal_values
    mesh = field.mesh
    tau = rel_tol * float(np.max(np.abs(f)))
    if tau == 0.0:
        raise DomainError("cannot count nodal domains of the zero field")
    sign = np.where(f > tau, 1, np.where(f < -tau, -1, 0))
    edges = np.concatenate(
        [mesh.triangles[:, [0, 1]], mesh.triangles[:, [1, 2]], mesh.triangles[:, [2, 0]]]
    )
    same = (sign[edges[:, 0]] == sign[edges[:, 1]]) & (sign[edges[:, 0]] != 0)
    e = edges[same]
    n = len(f)
    adj = sparse.coo_matrix(
        (np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n)
    )
    ncomp, labels = csgraph.connected_components(adj + adj.T, directed=False)
    return len(np.unique(labels[sign != 0]))


# ---------------------------------------------------------------------------
# Brouwer recentering for the zero-mean constraint


def recenter_for_zero_mean(
    mesh: TriMesh,
    model: SpaceFormModel,
    profile: WeightProfile,
    h_interp,
    start=(0.0, 0.0),
    tol_factor: float = 1e-8,
    max_iter: int = 60,
):
    """Shift s with int h(t_s) (x - s)/t_s deta = 0 (both components).

    t_s is geodesic distance from the shifted origin and the weight is
    recentered along with the trial functions.  Damped Newton on the 2-D
    moment map; the iterate must stay inside the convex hull of the mesh.
    Returns the shift as a length-2 array.
    """
    hull = MultiPoint([tuple(v) for v in mesh.vertices]).convex_hull
    v = mesh.vertices[mesh.triangles]
    mids = 0.5 * (v + np.roll(v, -1, axis=1))
    flat = mids.reshape(-1, 2)
    a, b, c = v[:, 0], v[:, 1], v[:, 2]
    area = 0.5 * np.abs(
        (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
        - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    )
    wq = np.repeat(area / 3.0, 3)
    rho2 = conformal_factor(model, flat) ** 2

    def moment(s):
        w = mobius_shift(model, flat, s)
        t = geodesic_distance_to_origin(model, w)
        profile.require_domain(float(t.max()) + 1e-15)
        eta = rho2 * np.exp(-np.asarray(profile.phi(t), dtype=float))
        hv = np.asarray(h_interp(t), dtype=float)
        r = np.linalg.norm(w, axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            direction = np.where(r[:, None] > 1e-14, w / r[:, None], 0.0)
        integrand = hv[:, None] * direction * (eta * wq)[:, None]
        F = integrand.sum(axis=0)
        scale = float(np.max(np.abs(hv))) * float(np.sum(eta * wq))
        return F, scale

    s = np.asarray(start, dtype=float).copy()
    F, scale = moment(s)
    tol = tol_factor * max(scale, 1e-300)
    step_h = 1e-6
    for _ in range(max_iter):
        if np.linalg.norm(F) <= tol:
            return s
        J = np.empty((2, 2))
        for d in range(2):
            e = np.zeros(2)
            e[d] = step_h
            Fp, _ = moment(s + e)
            Fm, _ = moment(s - e)
            J[:, d] = (Fp - Fm) / (2 * step_h)
        try:
            delta = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            delta = -F / max(np.linalg.norm(F), 1e-300) * step_h
        lam = 1.0
        for _ in range(25):
            cand = s + lam * delta
            if hull.buffer(1e-12).contains(Point(cand)):
                Fc, _ = moment(cand)
                if np.linalg.norm(Fc) < np.linalg.norm(F):
                    s, F = cand, Fc
                    break
            lam *= 0.5
        else:
            raise ConvergenceError(
                "recentering step left the convex hull or stalled"
            )
    if np.linalg.norm(F) <= tol:
        return s
    raise ConvergenceError(
        f"recentering did not reach the moment tolerance ({np.linalg.norm(F):.2e} > {tol:.2e})"
    )
