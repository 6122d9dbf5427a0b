"""
Geometric models: hyperplanes, integration loops and affine slice grids.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from utils.geometry_utils import normalize_projective

GAUSS_ORDER = 16  # nodes per Gauss-Legendre panel on polygon edges


def _pairs(vector) -> List[List[float]]:
    return [[float(c.real), float(c.imag)] for c in np.asarray(vector, dtype=complex)]


def _from_pairs(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=complex)


@dataclass(eq=False)
class Hyperplane:
    """
    Hyperplane {z : sum_j z_j n_j = 0} with a normalized coefficient covector.

    For a commutative tuple the normal is (phi(A_0), ..., phi(A_n)) for a
    multiplicative functional phi.
    """

    normal: np.ndarray
    multiplicity: int = 1

    def __post_init__(self):
        raw = np.asarray(self.normal, dtype=complex).ravel()
        if not np.any(raw):
            raise ValueError("Hyperplane normal must be nonzero")
        self.normal = normalize_projective(raw)

    def evaluate(self, z) -> np.ndarray:
        """Defining linear form <z, n> = sum_j z_j n_j (no conjugation)."""
        return np.asarray(z, dtype=complex) @ self.normal

    def random_point(self, rng: np.random.Generator) -> np.ndarray:
        """Random point of the hyperplane (orthogonal projection of a Gaussian vector)."""
        dim = self.normal.shape[0]
        z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        conj = np.conj(self.normal)
        return z - (self.evaluate(z) / np.vdot(conj, conj)) * conj

    def to_dict(self) -> Dict:
        return {'normal': _pairs(self.normal), 'multiplicity': int(self.multiplicity)}

    @classmethod
    def from_dict(cls, data: Dict) -> 'Hyperplane':
        return cls(_from_pairs(data['normal']), int(data.get('multiplicity', 1)))


@dataclass(eq=False)
class Loop:
    """
    Closed integration path in C^{n+1}.

    kind 'circle': z(theta) = center + radius * e^{i theta} * direction.
    kind 'polygon': straight edges through `vertices`, closed back to the first vertex.
    """

    kind: str = 'circle'
    center: Optional[np.ndarray] = None
    direction: Optional[np.ndarray] = None
    radius: float = 0.0
    vertices: Optional[np.ndarray] = None
    samples: int = 256

    def __post_init__(self):
        if self.kind == 'circle':
            if self.center is None or self.direction is None:
                raise ValueError("Circle loop needs center and direction")
            self.center = np.asarray(self.center, dtype=complex).ravel()
            self.direction = np.asarray(self.direction, dtype=complex).ravel()
            if self.center.shape != self.direction.shape:
                raise ValueError("Center and direction must have the same length")
            if self.radius < 0:
                raise ValueError("Radius must be nonnegative")
        elif self.kind == 'polygon':
            if self.vertices is None or len(self.vertices) < 1:
                raise ValueError("Polygon loop needs at least one vertex")
            self.vertices = np.atleast_2d(np.asarray(self.vertices, dtype=complex))
        else:
            raise ValueError(f"Unknown loop kind: {self.kind}")
        if self.samples < 2:
            raise ValueError("Loop needs at least two samples")

    @property
    def dimension(self) -> int:
        """Number of coordinates n+1."""
        if self.kind == 'circle':
            return self.center.shape[0]
        return self.vertices.shape[1]

    @property
    def num_edges(self) -> int:
        return self.vertices.shape[0] if self.kind == 'polygon' else 0

    def base_point(self) -> np.ndarray:
        """The point at parameter 0."""
        if self.kind == 'circle':
            return self.center + self.radius * self.direction
        return self.vertices[0].copy()

    def _edges(self) -> Tuple[np.ndarray, np.ndarray]:
        starts = self.vertices
        ends = np.roll(self.vertices, -1, axis=0)
        return starts, ends - starts

    def path(self, num: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Ordered points along the loop, final point excluded.

        Returns:
            (parameters, points) where the parameter is theta for circles and
            edge index + fraction for polygons
        """
        if self.kind == 'circle':
            theta = 2 * np.pi * np.arange(num) / num
            points = self.center[None, :] + self.radius * np.exp(1j * theta)[:, None] * self.direction[None, :]
            return theta, points
        per_edge = max(1, num // self.num_edges)
        s = np.arange(per_edge) / per_edge
        starts, deltas = self._edges()
        points = (starts[:, None, :] + s[None, :, None] * deltas[:, None, :]).reshape(-1, self.dimension)
        params = (np.arange(self.num_edges)[:, None] + s[None, :]).ravel()
        return params, points

    def quadrature(self, num: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Nodes and weighted tangents for the line integral.

        The integral of sum_j f_j(z) dz_j is approximated by
        sum_s sum_j f_j(points[s]) * dz[s, j]. Circles use the trapezoid rule
        on a uniform theta grid; polygons use composite Gauss-Legendre on
        each edge.

        Returns:
            (parameters, points, dz)
        """
        if self.kind == 'circle':
            theta = 2 * np.pi * np.arange(num) / num
            rotor = np.exp(1j * theta)
            points = self.center[None, :] + self.radius * rotor[:, None] * self.direction[None, :]
            dz = (2 * np.pi / num) * 1j * self.radius * rotor[:, None] * self.direction[None, :]
            return theta, points, dz
        panels = max(1, num // (GAUSS_ORDER * self.num_edges))
        x, w = np.polynomial.legendre.leggauss(GAUSS_ORDER)
        # panel p of an edge covers [p/panels, (p+1)/panels]
        s = ((np.arange(panels)[:, None] + (x[None, :] + 1) / 2) / panels).ravel()
        weights = np.tile(w / (2 * panels), panels)
        starts, deltas = self._edges()
        points = (starts[:, None, :] + s[None, :, None] * deltas[:, None, :]).reshape(-1, self.dimension)
        dz = (weights[None, :, None] * deltas[:, None, :]).reshape(-1, self.dimension)
        params = (np.arange(self.num_edges)[:, None] + s[None, :]).ravel()
        return params, points, dz

    def to_dict(self) -> Dict:
        if self.kind == 'circle':
            return {
                'kind': 'circle',
                'center': _pairs(self.center),
                'direction': _pairs(self.direction),
                'radius': float(self.radius),
                'samples': int(self.samples),
            }
        return {
            'kind': 'polygon',
            'vertices': [_pairs(v) for v in self.vertices],
            'samples': int(self.samples),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'Loop':
        kind = data.get('kind', 'circle')
        samples = int(data.get('samples', 256))
        if kind == 'circle':
            return cls(
                kind='circle',
                center=_from_pairs(data['center']),
                direction=_from_pairs(data['direction']),
                radius=float(data['radius']),
                samples=samples,
            )
        if kind == 'polygon':
            return cls(kind='polygon', vertices=np.array([_from_pairs(v) for v in data['vertices']]), samples=samples)
        raise ValueError(f"Unknown loop kind: {kind}")


@dataclass
class SliceGrid:
    """Rectangle [x_min, x_max] x [y_min, y_max] sampled at resolution x resolution points."""

    x_min: float = -2.0
    x_max: float = 2.0
    y_min: float = -2.0
    y_max: float = 2.0
    resolution: int = 101

    def __post_init__(self):
        if self.resolution < 2:
            raise ValueError("Grid resolution must be at least 2")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("Grid rectangle is empty")

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        return (np.linspace(self.x_min, self.x_max, self.resolution),
                np.linspace(self.y_min, self.y_max, self.resolution))


@dataclass(eq=False)
class HyperplaneArrangement:
    """Deduplicated hyperplanes of a commutative tuple."""

    planes: List[Hyperplane] = field(default_factory=list)
    full_space: bool = False  # some functional vanishes on every A_j, so P(A) = C^{n+1}
    zero_functionals: int = 0

    @property
    def total_multiplicity(self) -> int:
        return sum(p.multiplicity for p in self.planes) + self.zero_functionals

    def __len__(self) -> int:
        return len(self.planes)

    def __iter__(self):
        return iter(self.planes)

    def __getitem__(self, index: int) -> Hyperplane:
        return self.planes[index]

    def to_dict(self) -> Dict:
        return {
            'planes': [p.to_dict() for p in self.planes],
            'full_space': self.full_space,
            'zero_functionals': self.zero_functionals,
        }
