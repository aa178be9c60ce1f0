"""Oriented closed triangulated surfaces: generators, OFF files, validation.

Meshes carry an optional explicit edge-length table so that abstract flat
metrics (the square torus) can be used without an isometric embedding;
all downstream geometry (angles, areas, dual weights) is computed
intrinsically from lengths via the law of cosines and Heron's formula.
"""

from __future__ import annotations

import math

import numpy as np


class MeshError(ValueError):
    """Base class for mesh construction and validation failures."""


class OffParseError(MeshError):
    """Malformed OFF input."""


class NonTriangleFaceError(MeshError):
    """A face with vertex count different from three."""


class NonManifoldError(MeshError):
    """An edge incident to a number of faces different from two."""


class NonOrientableError(MeshError):
    """Orientations cannot be propagated consistently."""


class DegenerateTriangleError(MeshError):
    """A triangle with vanishing area."""


def _canon(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class SimplicialSurface:
    """Closed, consistently oriented triangle mesh.

    vertices: (V, 3) float positions; triangles: (F, 3) int, each oriented.
    edge_lengths, when given, overrides position-derived lengths (keyed by
    the canonical edge list order built here).
    """

    def __init__(self, vertices, triangles, edge_lengths=None, name: str = "mesh"):
        self.vertices = np.asarray(vertices, dtype=float)
        self.triangles = np.asarray(triangles, dtype=int)
        self.name = name
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 3:
            raise MeshError("vertices must be a (V, 3) array")
        if self.triangles.ndim != 2 or self.triangles.shape[1] != 3:
            raise NonTriangleFaceError("triangles must be a (F, 3) array")
        nv = len(self.vertices)
        if self.triangles.size and (self.triangles.min() < 0 or self.triangles.max() >= nv):
            raise MeshError("triangle vertex index out of range")
        for tri in self.triangles:
            if len(set(tri.tolist())) != 3:
                raise DegenerateTriangleError(f"repeated vertex in triangle {tri}")

        self._build_edges()
        self._check_closed_oriented()

        if edge_lengths is not None:
            lengths = np.asarray(edge_lengths, dtype=float)
            if lengths.shape != (len(self.edges),):
                raise MeshError("edge_lengths has wrong size")
            self.edge_lengths = lengths
        else:
            self.edge_lengths = np.array([
                np.linalg.norm(self.vertices[u] - self.vertices[v])
                for u, v in self.edges
            ])
        if np.any(self.edge_lengths <= 0):
            raise DegenerateTriangleError("nonpositive edge length")
        self.triangle_areas = self._heron_areas()
        if np.any(self.triangle_areas <= 1e-12):
            raise DegenerateTriangleError("triangle area below 1e-12")

    def _build_edges(self):
        edge_index: dict[tuple[int, int], int] = {}
        edges: list[tuple[int, int]] = []
        tri_edges = np.zeros_like(self.triangles)
        tri_edge_signs = np.zeros_like(self.triangles)
        for f, (a, b, c) in enumerate(self.triangles):
            for k, (u, v) in enumerate(((a, b), (b, c), (c, a))):
                key = _canon(int(u), int(v))
                e = edge_index.get(key)
                if e is None:
                    e = len(edges)
                    edge_index[key] = e
                    edges.append(key)
                tri_edges[f, k] = e
                tri_edge_signs[f, k] = 1 if (u, v) == key else -1
        self.edges = np.array(edges, dtype=int) if edges else np.zeros((0, 2), dtype=int)
        self.edge_index = edge_index
        self.triangle_edge_ids = tri_edges
        self.triangle_edge_signs = tri_edge_signs

    def _check_closed_oriented(self):
        # each undirected edge must occur exactly twice, once per direction
        directed: dict[tuple[int, int], int] = {}
        for a, b, c in self.triangles:
            for u, v in ((a, b), (b, c), (c, a)):
                directed[(int(u), int(v))] = directed.get((int(u), int(v)), 0) + 1
        counts: dict[tuple[int, int], int] = {}
        for (u, v), c in directed.items():
            counts[_canon(u, v)] = counts.get(_canon(u, v), 0) + c
        for key, c in counts.items():
            if c != 2:
                raise NonManifoldError(f"edge {key} lies in {c} triangles, expected 2")
        for (u, v), c in directed.items():
            if c != 1:
                raise NonOrientableError(f"directed edge {(u, v)} repeats; orientation inconsistent")

    def _heron_areas(self) -> np.ndarray:
        areas = np.zeros(len(self.triangles))
        for f in range(len(self.triangles)):
            la, lb, lc = self.edge_lengths[self.triangle_edge_ids[f]]
            s = (la + lb + lc) / 2
            val = s * (s - la) * (s - lb) * (s - lc)
            areas[f] = math.sqrt(val) if val > 0 else 0.0
        return areas

    # -- simple queries ------------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_triangles

    def total_area(self) -> float:
        return float(self.triangle_areas.sum())

    def corner_lengths(self, f: int):
        """Per-corner data for triangle f: for corner k (vertex
        triangles[f][k]) return (opposite length, adjacent1, adjacent2)."""
        ids = self.triangle_edge_ids[f]
        l_ab, l_bc, l_ca = self.edge_lengths[ids]
        # corner 0 = vertex a: opposite edge is bc
        return [(l_bc, l_ab, l_ca), (l_ca, l_ab, l_bc), (l_ab, l_bc, l_ca)]

    def __repr__(self) -> str:
        return (f"<SimplicialSurface {self.name}: V={self.num_vertices} "
                f"E={self.num_edges} F={self.num_triangles} chi={self.euler_characteristic()}>")


# -- generators ---------------------------------------------------------------


def icosphere(k: int) -> SimplicialSurface:
    """k-fold 4-to-1 subdivided icosahedron projected to the unit sphere."""
    if not 0 <= k <= 7:
        raise ValueError(f"subdivision level must be in 0..7, got {k}")
    phi = (1 + math.sqrt(5)) / 2
    raw = [
        (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
        (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
        (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
    ]
    verts = [np.array(v) / np.linalg.norm(v) for v in raw]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    # enforce outward orientation deterministically
    oriented = []
    for a, b, c in faces:
        normal = np.cross(verts[b] - verts[a], verts[c] - verts[a])
        center = (verts[a] + verts[b] + verts[c]) / 3
        oriented.append((a, b, c) if float(np.dot(normal, center)) > 0 else (a, c, b))
    faces = oriented

    for _ in range(k):
        midpoint: dict[tuple[int, int], int] = {}

        def mid(u: int, v: int) -> int:
            key = _canon(u, v)
            idx = midpoint.get(key)
            if idx is None:
                m = verts[u] + verts[v]
                verts.append(m / np.linalg.norm(m))
                idx = len(verts) - 1
                midpoint[key] = idx
            return idx

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new_faces += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
        faces = new_faces

    return SimplicialSurface(np.array(verts), np.array(faces), name=f"icosphere:{k}")


def flat_torus(m: int) -> SimplicialSurface:
    """m x m periodic grid on the unit square, one diagonal per cell.

    The metric is the flat square metric, supplied as explicit edge
    lengths; vertex positions are the planar lattice points and are used
    for nothing but reference.
    """
    if m < 3:
        raise ValueError(f"grid resolution must be >= 3, got {m}")
    h = 1.0 / m

    def vid(i: int, j: int) -> int:
        return (i % m) * m + (j % m)

    verts = np.zeros((m * m, 3))
    for i in range(m):
        for j in range(m):
            verts[vid(i, j)] = (i * h, j * h, 0.0)

    faces = []
    for i in range(m):
        for j in range(m):
            v00, v10 = vid(i, j), vid(i + 1, j)
            v11, v01 = vid(i + 1, j + 1), vid(i, j + 1)
            faces.append((v00, v10, v11))
            faces.append((v00, v11, v01))
    faces = np.array(faces, dtype=int)

    # lattice displacement of each canonical edge determines its flat length
    mesh_tmp = SimplicialSurface.__new__(SimplicialSurface)
    mesh_tmp.vertices = verts
    mesh_tmp.triangles = faces
    mesh_tmp._build_edges()
    lengths = np.zeros(len(mesh_tmp.edges))
    for e, (u, v) in enumerate(mesh_tmp.edges):
        iu, ju = divmod(int(u), m)
        iv, jv = divmod(int(v), m)
        di = min(abs(iu - iv), m - abs(iu - iv))
        dj = min(abs(ju - jv), m - abs(ju - jv))
        lengths[e] = math.hypot(di, dj) * h
    return SimplicialSurface(verts, faces, edge_lengths=lengths, name=f"torus:{m}")


# -- orientation repair ---------------------------------------------------------


def orient_faces(faces: np.ndarray) -> np.ndarray:
    """Fix a consistent orientation by breadth-first propagation; keeps the
    orientation of the first face of each connected component."""
    faces = [tuple(int(x) for x in f) for f in faces]
    edge_faces: dict[tuple[int, int], list[int]] = {}
    for f, (a, b, c) in enumerate(faces):
        for u, v in ((a, b), (b, c), (c, a)):
            edge_faces.setdefault(_canon(u, v), []).append(f)
    for key, fs in edge_faces.items():
        if len(fs) > 2:
            raise NonManifoldError(f"edge {key} lies in {len(fs)} triangles")

    def directed_edges(f):
        a, b, c = faces[f]
        return ((a, b), (b, c), (c, a))

    oriented = [None] * len(faces)
    for start in range(len(faces)):
        if oriented[start] is not None:
            continue
        oriented[start] = faces[start]
        queue = [start]
        while queue:
            f = queue.pop()
            a, b, c = oriented[f]
            for u, v in ((a, b), (b, c), (c, a)):
                for g in edge_faces[_canon(u, v)]:
                    if g == f:
                        continue
                    # neighbor must traverse the shared edge oppositely
                    gd = directed_edges(g) if oriented[g] is None else (
                        lambda t: ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])))(oriented[g])
                    if (v, u) in gd:
                        consistent = True
                    elif (u, v) in gd:
                        consistent = False
                    else:  # pragma: no cover - incidence map guarantees membership
                        raise MeshError("incidence bookkeeping failure")
                    if oriented[g] is None:
                        x, y, z = faces[g]
                        oriented[g] = (x, y, z) if consistent else (x, z, y)
                        queue.append(g)
                    elif not consistent:
                        raise NonOrientableError(
                            f"faces {f} and {g} disagree across edge {_canon(u, v)}")
    return np.array(oriented, dtype=int)


# -- OFF input/output -----------------------------------------------------------


def load_off(path) -> SimplicialSurface:
    """Read an ASCII OFF triangle mesh, repair orientation, validate."""
    try:
        with open(path, "r", encoding="ascii") as fh:
            text = fh.read()
    except OSError as exc:
        raise OffParseError(f"cannot read {path}: {exc}") from exc

    tokens = []
    for line in text.splitlines():
        body = line.split("#", 1)[0].strip()
        if body:
            tokens.extend(body.split())
    if not tokens or tokens[0].upper() != "OFF":
        raise OffParseError("missing OFF header")
    try:
        nv, nf, _ne = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except (IndexError, ValueError) as exc:
        raise OffParseError("malformed count line") from exc
    pos = 4
    try:
        verts = np.array([
            [float(tokens[pos + 3 * i + k]) for k in range(3)] for i in range(nv)
        ])
        pos += 3 * nv
        faces = []
        for _ in range(nf):
            cnt = int(tokens[pos])
            if cnt != 3:
                raise NonTriangleFaceError(f"face with {cnt} vertices; only triangles supported")
            faces.append([int(tokens[pos + 1]), int(tokens[pos + 2]), int(tokens[pos + 3])])
            pos += 1 + cnt
    except NonTriangleFaceError:
        raise
    except (IndexError, ValueError) as exc:
        raise OffParseError("truncated or malformed OFF body") from exc

    oriented = orient_faces(np.array(faces, dtype=int))
    return SimplicialSurface(verts, oriented, name=str(path))


def save_off(mesh: SimplicialSurface, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write("OFF\n")
        fh.write(f"{mesh.num_vertices} {mesh.num_triangles} {mesh.num_edges}\n")
        for v in mesh.vertices:
            fh.write(f"{float(v[0])!r} {float(v[1])!r} {float(v[2])!r}\n")
        for a, b, c in mesh.triangles:
            fh.write(f"3 {a} {b} {c}\n")
