"""Meshes, grid functions, modulars, and Luxemburg norms.

Domains are intervals (1D) or axis-aligned rectangles (2D, split into right
triangles). All integrals use one fixed quadrature rule on the piecewise
linear interpolant: midpoint per segment in 1D, vertex average per triangle in
2D. Keeping a single rule everywhere makes modulars, norms, and the solver's
weak forms mutually consistent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError
from .young import YoungFunction, estimate_indices, power

__all__ = [
    "Mesh",
    "GridFunction",
    "NormReport",
    "CoercivityReport",
    "modular",
    "luxemburg_norm",
    "holder_pairing_check",
    "poincare_modular_check",
    "coercivity_bound_check",
    "basis_w1a_norms",
    "unit_ball_measure",
]


def unit_ball_measure(dimension):
    """Measure of the unit ball: 2 in 1D, pi in 2D."""
    if dimension == 1:
        return 2.0
    if dimension == 2:
        return float(np.pi)
    raise DomainError(f"unsupported dimension {dimension}")


class Mesh:
    """Structured mesh on an interval or axis-aligned rectangle.

    毎 element carries its quadrature atoms (points, weights, and local basis
    values) so grid-function integrals vectorize over one flat array.
    """

    def __init__(self, dimension, geometry, resolution, node_coords, elements, boundary_mask):
        self.dimension = int(dimension)
        self.geometry = geometry
        self.resolution = resolution
        self.node_coords = node_coords
        self.elements = elements
        self.boundary_mask = boundary_mask
        self.interior_idx = np.where(~boundary_mask)[0]
        self.n_nodes = node_coords.shape[0]
        self.n_elements = elements.shape[0]
        self._build_quadrature()

    # -- constructors --------------------------------------------------------

    @classmethod
    def interval(cls, x0, x1, n_nodes):
        if not (x1 > x0) or n_nodes < 3:
            raise DomainError("interval mesh needs x1 > x0 and at least 3 nodes")
        coords = np.linspace(x0, x1, n_nodes)[:, None]
        elements = np.column_stack([np.arange(n_nodes - 1), np.arange(1, n_nodes)])
        boundary = np.zeros(n_nodes, dtype=bool)
        boundary[0] = boundary[-1] = True
        return cls(1, [[float(x0), float(x1)]], [int(n_nodes)], coords, elements, boundary)

    @classmethod
    def rectangle(cls, x_extent, y_extent, nx, ny):
        (x0, x1), (y0, y1) = x_extent, y_extent
        if not (x1 > x0 and y1 > y0) or nx < 3 or ny < 3:
            raise DomainError("rectangle mesh needs positive extents and >= 3 nodes per axis")
        xs = np.linspace(x0, x1, nx)
        ys = np.linspace(y0, y1, ny)
        X, Yc = np.meshgrid(xs, ys, indexing="xy")
        coords = np.column_stack([X.ravel(), Yc.ravel()])  # node id = j*nx + i

        def nid(i, j):
            return j * nx + i

        tris = []
        for j in range(ny - 1):
            for i in range(nx - 1):
                a, b = nid(i, j), nid(i + 1, j)
                c, d = nid(i + 1, j + 1), nid(i, j + 1)
                tris.append((a, b, c))
                tris.append((a, c, d))
        elements = np.asarray(tris, dtype=int)
        boundary = np.zeros(nx * ny, dtype=bool)
        I, J = np.meshgrid(np.arange(nx), np.arange(ny), indexing="xy")
        edge = (I == 0) | (I == nx - 1) | (J == 0) | (J == ny - 1)
        boundary[(J * nx + I)[edge]] = True
        return cls(
            2,
            [[float(x0), float(x1)], [float(y0), float(y1)]],
            [int(nx), int(ny)],
            coords,
            elements,
            boundary,
        )

    # -- quadrature and P1 calculus -------------------------------------------

    def _build_quadrature(self):
        pts = self.node_coords[self.elements]  # (E, dim+1, dim)
        if self.dimension == 1:
            h = pts[:, 1, 0] - pts[:, 0, 0]
            self.element_measures = h
            self.qp_coords = pts.mean(axis=1)[:, None, :]  # midpoint, (E, 1, dim)
            self.qp_weights = h[:, None]
            self.basis_at_qp = np.array([[0.5, 0.5]])  # (Q, dim+1)
            grads = np.empty((self.n_elements, 2, 1))
            grads[:, 0, 0] = -1.0 / h
            grads[:, 1, 0] = 1.0 / h
            self.basis_gradients = grads
        else:
            v0, v1, v2 = pts[:, 0], pts[:, 1], pts[:, 2]
            d1 = v1 - v0
            d2 = v2 - v0
            det = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
            self.element_measures = 0.5 * np.abs(det)
            self.qp_coords = pts  # the three vertices, (E, 3, dim)
            self.qp_weights = np.repeat(self.element_measures[:, None] / 3.0, 3, axis=1)
            self.basis_at_qp = np.eye(3)
            # P1 gradients: grad phi_k constant per triangle
            grads = np.empty((self.n_elements, 3, 2))
            for k, (a, b) in enumerate(((1, 2), (2, 0), (0, 1))):
                edge = pts[:, b] - pts[:, a]  # edge opposite vertex k
                grads[:, k, 0] = -edge[:, 1] / det
                grads[:, k, 1] = edge[:, 0] / det
            self.basis_gradients = grads
        self.domain_measure = float(np.sum(self.element_measures))
        self.n_qp = self.basis_at_qp.shape[0]

    def values_at_qp(self, values):
        """Interpolate nodal values to quadrature points, shape (E, Q)."""
        elem_vals = values[self.elements]  # (E, dim+1)
        return elem_vals @ self.basis_at_qp.T

    def element_gradients(self, values):
        """Constant P1 gradient per element, shape (E, dim)."""
        elem_vals = values[self.elements]
        return np.einsum("eld,el->ed", self.basis_gradients, elem_vals)

    def integrate_qp(self, qp_values):
        """Integrate a quantity sampled at quadrature points, shape (E, Q)."""
        return float(np.sum(self.qp_weights * qp_values))

    # -- serialization ---------------------------------------------------------

    def to_json(self):
        return json.dumps(
            {
                "dimension": self.dimension,
                "geometry": self.geometry,
                "resolution": self.resolution,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text):
        spec = json.loads(text)
        return cls.from_spec(spec)

    @classmethod
    def from_spec(cls, spec):
        dim = spec["dimension"]
        geom = spec["geometry"]
        res = spec["resolution"]
        if dim == 1:
            return cls.interval(geom[0][0], geom[0][1], res[0])
        if dim == 2:
            return cls.rectangle(tuple(geom[0]), tuple(geom[1]), res[0], res[1])
        raise DomainError(f"unsupported mesh dimension {dim}")


class GridFunction:
    """Nodal values of a scalar field on a mesh."""

    def __init__(self, mesh: Mesh, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (mesh.n_nodes,):
            raise DomainError(
                f"GridFunction: {values.shape} values for {mesh.n_nodes} nodes"
            )
        self.mesh = mesh
        self.values = values

    @classmethod
    def constant(cls, mesh, c):
        return cls(mesh, np.full(mesh.n_nodes, float(c)))

    @classmethod
    def zeros(cls, mesh):
        return cls(mesh, np.zeros(mesh.n_nodes))

    @classmethod
    def from_callable(cls, mesh, fn):
        return cls(mesh, np.asarray(fn(mesh.node_coords), dtype=float).reshape(-1))

    def copy(self):
        return GridFunction(self.mesh, self.values.copy())

    def zero_trace(self):
        """Copy with boundary nodes pinned to zero exactly."""
        out = self.values.copy()
        out[self.mesh.boundary_mask] = 0.0
        return GridFunction(self.mesh, out)

    @property
    def is_zero_trace(self):
        return bool(np.all(self.values[self.mesh.boundary_mask] == 0.0))

    # small arithmetic surface used by the solver and tests
    def __add__(self, other):
        return GridFunction(self.mesh, self.values + self._vals(other))

    def __sub__(self, other):
        return GridFunction(self.mesh, self.values - self._vals(other))

    def __rmul__(self, c):
        return GridFunction(self.mesh, float(c) * self.values)

    def _vals(self, other):
        return other.values if isinstance(other, GridFunction) else other

    def abs(self):
        return GridFunction(self.mesh, np.abs(self.values))

    def max_abs(self):
        return float(np.max(np.abs(self.values)))

    def to_csv(self, path):
        coords = self.mesh.node_coords
        header = "x,value" if self.mesh.dimension == 1 else "x,y,value"
        data = np.column_stack([coords, self.values])
        np.savetxt(path, data, delimiter=",", header=header, comments="")

    @classmethod
    def from_csv(cls, mesh, path):
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        if data.ndim == 1:
            data = data[None, :]
        if data.shape[0] != mesh.n_nodes:
            raise DomainError(
                f"CSV has {data.shape[0]} rows for a mesh with {mesh.n_nodes} nodes"
            )
        return cls(mesh, data[:, -1])


# -- modulars and norms ---------------------------------------------------------


@dataclass(frozen=True)
class NormReport:
    modular_value: float
    luxemburg_norm: float
    lambda_bracket: tuple


def modular(u: GridFunction, A: YoungFunction):
    """Integral of A(|u|) with the mesh's fixed quadrature rule.

    Returns +inf when a quadrature value exceeds the finite limit of A.
    """
    vals = np.abs(u.mesh.values_at_qp(u.values))
    if not np.all(np.isfinite(vals)):
        raise DomainError("modular: non-finite nodal values")
    avals = np.asarray(A.eval(vals.ravel()), dtype=float).reshape(vals.shape)
    return float(np.sum(u.mesh.qp_weights * avals))


def _gradient_modular(u: GridFunction, A: YoungFunction, scale=1.0):
    g = u.mesh.element_gradients(u.values)
    mag = np.linalg.norm(g, axis=1)
    avals = np.asarray(A.eval(scale * mag), dtype=float)
    return float(np.sum(u.mesh.element_measures * avals))


def _luxemburg_from_samples(weights, samples, A: YoungFunction, rel_tol=1e-11):
    """Luxemburg norm of quadrature atoms: inf{lam : sum w A(|s|/lam) <= 1}."""
    samples = np.abs(np.asarray(samples, dtype=float))
    weights = np.asarray(weights, dtype=float)
    if not np.any(samples > 0):
        return 0.0, (0.0, 0.0)

    def mod(lam):
        vals = np.asarray(A.eval(samples / lam), dtype=float)
        return float(np.sum(weights * vals))

    lam = max(float(np.max(samples)) * 1e-6, 1e-280)
    hi = None
    lo = None
    for _ in range(4000):
        if mod(lam) <= 1.0:
            hi = lam
            break
        lam *= 2.0
    if hi is None:
        raise DomainError("luxemburg norm: bracket expansion failed upward")
    lam = hi
    for _ in range(4000):
        lam /= 2.0
        if mod(lam) > 1.0:
            lo = lam
            break
        hi = lam
    if lo is None:
        return 0.0, (0.0, hi)  # modular stays <= 1 down to 0: norm 0 edge
    for _ in range(200):
        mid = np.sqrt(lo * hi)
        if mod(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= rel_tol * hi:
            break
    return float(0.5 * (lo + hi)), (float(lo), float(hi))


def luxemburg_norm(u: GridFunction, A: YoungFunction) -> NormReport:
    """Luxemburg norm inf{lam > 0 : modular(u/lam) <= 1} by log bisection."""
    vals = np.abs(u.mesh.values_at_qp(u.values))
    norm, bracket = _luxemburg_from_samples(u.mesh.qp_weights.ravel(), vals.ravel(), A)
    return NormReport(modular(u, A), norm, bracket)


def gradient_luxemburg_norm(u: GridFunction, A: YoungFunction) -> NormReport:
    """Luxemburg norm of |grad u| (element-wise constant gradients)."""
    g = u.mesh.element_gradients(u.values)
    mag = np.linalg.norm(g, axis=1)
    norm, bracket = _luxemburg_from_samples(u.mesh.element_measures, mag, A)
    mod_val = float(
        np.sum(u.mesh.element_measures * np.asarray(A.eval(mag), dtype=float))
    )
    return NormReport(mod_val, norm, bracket)


def holder_pairing_check(u: GridFunction, v: GridFunction, A: YoungFunction, conj=None):
    """Check the generalized Holder inequality int|uv| <= 2 ||u||_A ||v||_conj(A)."""
    from .young import conjugate

    Atil = conj if conj is not None else conjugate(A)
    uq = u.mesh.values_at_qp(u.values)
    vq = v.mesh.values_at_qp(v.values)
    lhs = float(np.sum(u.mesh.qp_weights * np.abs(uq * vq)))
    nu = luxemburg_norm(u, A).luxemburg_norm
    nv_samples = np.abs(v.mesh.values_at_qp(v.values))
    nv, _ = _luxemburg_from_samples(v.mesh.qp_weights.ravel(), nv_samples.ravel(), Atil)
    rhs = 2.0 * nu * nv
    slack = rhs - lhs
    return bool(lhs <= rhs + 1e-8 * (1.0 + rhs)), slack


def poincare_modular_check(u: GridFunction, A: YoungFunction):
    """Modular Poincare bound: int A(|u|) <= int A(c |grad u|).

    c = omega_n^{-1/n} |Omega|^{1/n} with omega_n the unit-ball measure of the
    mesh dimension. Requires u in the zero-trace subspace.
    """
    if not u.is_zero_trace:
        raise PreconditionError("poincare_modular_check: u must vanish on the boundary")
    n = u.mesh.dimension
    c = unit_ball_measure(n) ** (-1.0 / n) * u.mesh.domain_measure ** (1.0 / n)
    lhs = modular(u, A)
    rhs = _gradient_modular(u, A, scale=c)
    slack = rhs - lhs
    return bool(lhs <= rhs + 1e-12 * (1.0 + abs(rhs))), slack


@dataclass(frozen=True, eq=False)
class CoercivityReport:
    k1: float
    k2: float
    k3: float
    i_inf_infinity: float
    margins: tuple
    holds: bool


def coercivity_bound_check(v: GridFunction, A: YoungFunction, i_inf_infinity=None, seed=0):
    """Measure the modular-vs-norm coercivity bound for i_A^inf > 1.

    The equivalence constants k1 <= k2 between A and its near-infinity power
    surrogate t^{i} (anchored at the top of the trusted window) are measured
    as extreme Luxemburg-norm ratios over a probe family; k3 is then the
    smallest nonnegative constant making

        modular(w, A) >= k1^i ||w||_A^i - k3

    hold across the probes. Requires ||v||_A >= 1/k1.
    """
    mesh = v.mesh
    if i_inf_infinity is None:
        i_inf_infinity = estimate_indices(A).i_inf_infinity
    i = float(i_inf_infinity)
    if i <= 1.0:
        raise PreconditionError("coercivity_bound_check: needs i_A^infinity > 1")
    t0 = A.domain_cap / 100.0
    anchor = float(np.asarray(A.eval(t0))) / t0**i
    surrogate = power(i, scale=anchor) if anchor > 0 else power(i)

    rng = np.random.default_rng(seed)
    probes = [GridFunction.constant(mesh, c) for c in np.geomspace(1.0, 1e3, 8)]
    probes += [GridFunction(mesh, s * v.values) for s in (0.5, 1.0, 2.0)]
    for _ in range(3):
        probes.append(GridFunction(mesh, rng.uniform(0.5, 50.0, mesh.n_nodes)))

    ratios = []
    data = []
    for w in probes:
        nA = luxemburg_norm(w, A).luxemburg_norm
        nS = luxemburg_norm(w, surrogate).luxemburg_norm
        if nA > 0:
            ratios.append(nS / nA)
            data.append((w, nA))
    k1 = float(min(ratios))
    k2 = float(max(ratios))

    nv = luxemburg_norm(v, A).luxemburg_norm
    if nv < 1.0 / k1:
        raise PreconditionError(
            f"coercivity_bound_check: ||v|| = {nv:.3g} below 1/k1 = {1.0 / k1:.3g}"
        )

    deficits = []
    for w, nA in data:
        deficits.append(k1**i * nA**i - modular(w, A))
    k3 = max(0.0, float(max(deficits)))
    margins = tuple(float(modular(w, A) - (k1**i * nA**i - k3)) for w, nA in data)
    holds = all(m >= -1e-9 for m in margins)
    return CoercivityReport(k1, k2, k3, i, margins, holds)


def basis_w1a_norms(mesh: Mesh, A: YoungFunction):
    """W^{1,A} Luxemburg norms of interior hat functions, vectorized.

    Returns an array over interior nodes of ||phi_i||_{L^A} + ||grad phi_i||_{L^A},
    the normalizers of the residual dual-norm surrogate.
    """
    n_int = mesh.interior_idx.size
    node_to_row = -np.ones(mesh.n_nodes, dtype=int)
    node_to_row[mesh.interior_idx] = np.arange(n_int)

    # value atoms: phi_i at quadrature points of adjacent elements
    elems = mesh.elements  # (E, L)
    L = elems.shape[1]
    rows_v, w_v, val_v = [], [], []
    for loc in range(L):
        vals = mesh.basis_at_qp[:, loc]  # (Q,)
        for q in range(mesh.n_qp):
            if vals[q] == 0.0:
                continue
            r = node_to_row[elems[:, loc]]
            keep = r >= 0
            rows_v.append(r[keep])
            w_v.append(mesh.qp_weights[keep, q])
            val_v.append(np.full(keep.sum(), vals[q]))
    rows_v = np.concatenate(rows_v)
    w_v = np.concatenate(w_v)
    val_v = np.concatenate(val_v)

    # gradient atoms: |grad phi_i| constant per adjacent element
    rows_g, w_g, val_g = [], [], []
    for loc in range(L):
        mag = np.linalg.norm(mesh.basis_gradients[:, loc, :], axis=1)
        r = node_to_row[elems[:, loc]]
        keep = r >= 0
        rows_g.append(r[keep])
        w_g.append(mesh.element_measures[keep])
        val_g.append(mag[keep])
    rows_g = np.concatenate(rows_g)
    w_g = np.concatenate(w_g)
    val_g = np.concatenate(val_g)

    def seg_lux(rows, weights, vals):
        lam = np.full(n_int, 1.0)

        def mod(lam_vec):
            contrib = weights * np.asarray(A.eval(vals / lam_vec[rows]), dtype=float)
            return np.bincount(rows, weights=contrib, minlength=n_int)

        for _ in range(200):  # expand upward where modular > 1
            m = mod(lam)
            over = m > 1.0
            if not np.any(over):
                break
            lam[over] *= 2.0
        hi = lam.copy()
        lo = hi / 2.0
        for _ in range(200):  # expand downward where still <= 1
            m = mod(lo)
            under = m <= 1.0
            if not np.any(under):
                break
            hi[under] = lo[under]
            lo[under] /= 2.0
        for _ in range(70):
            mid = np.sqrt(lo * hi)
            m = mod(mid)
            le = m <= 1.0
            hi[le] = mid[le]
            lo[~le] = mid[~le]
        return 0.5 * (lo + hi)

    return seg_lux(rows_v, w_v, val_v) + seg_lux(rows_g, w_g, val_g)
