"""Quantitative behavior of linear images of point sets.

Everything here asks one of two questions about a map image:

* collisions: which well-separated pairs land close together, how does
  the chance of that scale in the tolerance, and what does it cost to
  invert the map on the set (inverse modulus, pointwise Holder exponent,
  log-Lipschitz defect)?
* decoding: given a (possibly noisy) image point, recover the atom it
  came from, or find a sphere point that a perturbed map sends back to
  the value at the origin.

All estimators are deterministic given their seed and report enough of
their configuration to reproduce the run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .dimension import fit_loglog
from .linalg import sample_e_batch

PAIR_BLOCK = 2048
EXACT_SCAN_LIMIT = 20_000


@dataclass
class CollisionReport:
    """Well-separated pairs whose images nearly coincide.

    in_regime records whether 2*eps <= delta (the regime the scaling law
    addresses); scans outside it are valid but labeled.
    """

    eps: float
    delta: float
    mode: str
    n_points: int
    pairs: list  # (i, j, point_distance, image_distance), i < j
    map_descriptor: str = ""
    in_regime: bool = True

    @property
    def count(self):
        return len(self.pairs)


def _image_of(points, op):
    """Images under op: None (identity), LinearOperator-like (has apply),
    a plain matrix, or a callable acting on the (n, N) batch."""
    if op is None:
        return np.asarray(points, dtype=float)
    apply = getattr(op, "apply", None)
    if apply is not None:
        return apply(points)
    if callable(op):
        return np.atleast_2d(np.asarray(op(points), dtype=float))
    return np.asarray(points, dtype=float) @ np.asarray(op, dtype=float).T


def _describe_map(op):
    if op is None:
        return "identity"
    if hasattr(op, "apply"):
        return "operator %dx%d" % (op.rows.shape[0], op.rows.shape[1]) \
            if hasattr(op, "rows") else type(op).__name__
    if callable(op):
        return getattr(op, "__name__", "callable")
    arr = np.asarray(op)
    return "matrix %dx%d" % (arr.shape[0], arr.shape[1])


def points_provenance(points):
    """Short content hash of a float array, for report provenance."""
    import hashlib

    arr = np.ascontiguousarray(np.asarray(points, dtype=float))
    return hashlib.sha256(arr.tobytes()).hexdigest()[:16]


def _exact_scan(points, images, delta, eps):
    pairs = []
    n = len(points)
    for start in range(0, n, PAIR_BLOCK):
        block = slice(start, min(start + PAIR_BLOCK, n))
        pd = np.linalg.norm(points[block, None, :] - points[None, :, :], axis=2)
        im = np.linalg.norm(images[block, None, :] - images[None, :, :], axis=2)
        hits = np.nonzero((pd >= delta) & (im <= eps))
        for a, b in zip(*hits):
            i = start + a
            if i < b:
                pairs.append((int(i), int(b), float(pd[a, b]), float(im[a, b])))
    return pairs


def _bucketed_scan(points, images, delta, eps):
    """Image-space grid with cells of side eps; close images must share a
    cell or touch a neighboring one, so only those candidates are checked."""
    cells = np.floor(images / eps).astype(np.int64)
    buckets = {}
    for idx, cell in enumerate(map(tuple, cells)):
        buckets.setdefault(cell, []).append(idx)
    k = images.shape[1]
    offsets = [np.array(o) for o in np.ndindex(*([3] * k))]
    pairs = []
    for cell, members in buckets.items():
        cell = np.array(cell)
        cand = []
        for off in offsets:
            neighbor = tuple(cell + off - 1)
            cand.extend(buckets.get(neighbor, []))
        for i in members:
            for j in cand:
                if j <= i:
                    continue
                im = float(np.linalg.norm(images[i] - images[j]))
                if im > eps:
                    continue
                pd = float(np.linalg.norm(points[i] - points[j]))
                if pd >= delta:
                    pairs.append((i, j, pd, im))
    return sorted(set(pairs))


def collision_scan(points, op, eps, delta, mode="auto"):
    """All pairs at point distance >= delta with image distance <= eps.

    mode 'exact' compares every pair blockwise; 'bucketed' hashes images
    onto an eps-grid first and only checks neighbor cells (the cell side
    equals eps, so no qualifying pair can escape the neighborhood).  Both
    see every qualifying pair; 'auto' picks exact below 20000 points.
    eps = 0 asks for exact image collisions and always scans exactly.
    """
    if eps < 0 or delta <= 0:
        raise ValueError("need eps >= 0 and delta > 0")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    images = np.atleast_2d(_image_of(points, op))
    if mode == "auto":
        mode = "exact" if len(points) <= EXACT_SCAN_LIMIT or eps == 0 \
            else "bucketed"
    if mode == "exact":
        pairs = _exact_scan(points, images, delta, eps)
    elif mode == "bucketed":
        if eps == 0:
            raise ValueError("bucketed mode needs eps > 0")
        pairs = _bucketed_scan(points, images, delta, eps)
    else:
        raise ValueError("unknown mode %r" % mode)
    return CollisionReport(
        eps=float(eps),
        delta=float(delta),
        mode=mode,
        n_points=len(points),
        pairs=sorted(pairs),
        map_descriptor=_describe_map(op),
        in_regime=bool(2 * eps <= delta),
    )


def collision_probability(points, base_index, delta, eps_grid, k, n_maps, seed):
    """Chance over random maps that some far point lands eps-close to the
    base point's image.

    For each sampled map the statistic is the minimum image distance from
    the base to the points at distance >= delta; the per-eps count is how
    many maps push that minimum below eps.  Returns the counts and a
    log2-log2 fit of frequency against eps.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    eps_grid = np.sort(np.asarray(eps_grid, dtype=float))[::-1]
    if eps_grid.size < 2:
        raise ValueError("need at least two tolerance levels")
    if np.any(2 * eps_grid > delta):
        raise ValueError("grid leaves the regime 2*eps <= delta")
    warnings = []
    if n_maps < 100:
        warnings.append("fewer than 100 maps: low statistical power")
    base = points[base_index]
    far = points[np.linalg.norm(points - base, axis=1) >= delta]
    if len(far) == 0:
        raise ValueError("no points at distance >= delta from the base")
    rows = sample_e_batch(points.shape[1], k, n_maps, seed)
    mins = np.empty(n_maps)
    diffs = far - base
    for m in range(n_maps):
        mins[m] = np.linalg.norm(diffs @ rows[m].T, axis=1).min()
    counts = [(float(e), int(np.count_nonzero(mins <= e))) for e in eps_grid]
    positive = [(e, c) for e, c in counts if c > 0]
    fit = None
    if len(positive) >= 3:
        es = np.array([e for e, _ in positive])
        fr = np.array([c / n_maps for _, c in positive])
        slope, intercept, r2 = fit_loglog(es, fr)
        # fit_loglog regresses against log2(1/eps); collision frequency
        # grows with eps, so flip to report d log2(freq) / d log2(eps)
        fit = {"slope": -slope, "intercept": intercept, "r_squared": r2}
    return {
        "delta": float(delta),
        "k": k,
        "n_maps": n_maps,
        "n_far": int(len(far)),
        "seed": seed,
        "sampler": "unit-ball-rows",
        "points_hash": points_provenance(points),
        "warnings": warnings,
        "table": counts,
        "min_distances": mins,
        "fit": fit,
    }


def transversality_fraction(x, z, eps_grid, k, n_maps, seed):
    """Empirical P(|Lx + z| <= eps) over the random map family.

    Returns per-eps counts, the log2-log2 slope of the frequency, and the
    calibrated constant C = max over the grid of freq * |x|^k / eps^k.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    eps_grid = np.sort(np.asarray(eps_grid, dtype=float))[::-1]
    rows = sample_e_batch(x.size, k, n_maps, seed)
    vals = np.linalg.norm(rows @ x + z, axis=1)
    xnorm = float(np.linalg.norm(x))
    table = []
    c_values = []
    for e in eps_grid:
        c = int(np.count_nonzero(vals <= e))
        table.append((float(e), c))
        c_values.append((c / n_maps) * xnorm**k / e**k)
    positive = [(e, c) for e, c in table if c > 0]
    fit = None
    if len(positive) >= 3:
        es = np.array([e for e, _ in positive])
        fr = np.array([c / n_maps for _, c in positive])
        slope, intercept, r2 = fit_loglog(es, fr)
        fit = {"slope": -slope, "intercept": intercept, "r_squared": r2}
    return {
        "k": k,
        "n_maps": n_maps,
        "seed": seed,
        "sampler": "unit-ball-rows",
        "x_norm": xnorm,
        "table": table,
        "fit": fit,
        "c_hat": float(max(c_values)),
        "c_by_eps": [float(c) for c in c_values],
    }


def inverse_continuity_modulus(points, op, delta_grid):
    """eps(delta) = smallest image distance among pairs at least delta apart.

    Nondecreasing in delta by construction (shrinking the pair set can only
    raise the minimum).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    images = np.atleast_2d(_image_of(points, op))
    delta_grid = np.sort(np.asarray(delta_grid, dtype=float))
    g = len(delta_grid)
    suffix_min2 = np.full(g, np.inf)
    suffix_count = np.zeros(g, dtype=np.int64)
    n = len(points)
    # squared distances via the Gram identity; cancellation noise caps
    # the resolution of reported minima near sqrt(machine eps)
    x_sq = np.einsum("ij,ij->i", points, points)
    y_sq = np.einsum("ij,ij->i", images, images)
    cols = np.arange(n)
    for start in range(0, n, PAIR_BLOCK):
        stop = min(start + PAIR_BLOCK, n)
        pd2 = x_sq[start:stop, None] + x_sq[None, :] \
            - 2.0 * points[start:stop] @ points.T
        im2 = y_sq[start:stop, None] + y_sq[None, :] \
            - 2.0 * images[start:stop] @ images.T
        upper = cols[None, :] > np.arange(start, stop)[:, None]
        for j, d in enumerate(delta_grid):
            mask = upper & (pd2 >= d * d)
            cnt = int(np.count_nonzero(mask))
            if cnt:
                suffix_min2[j] = min(suffix_min2[j],
                                     float(np.where(mask, im2, np.inf).min()))
                suffix_count[j] += cnt
    if suffix_count[0] == 0:
        raise ValueError("no pairs at the smallest delta")
    table = []
    for j, d in enumerate(delta_grid):
        if suffix_count[j] == 0:
            break
        table.append((float(d), math.sqrt(max(float(suffix_min2[j]), 0.0))))
    return table


@dataclass
class HolderEstimate:
    """Largest exponent a with |x - y| <= M |px - py|^a across the set.

    Distances are normalized by twice the image diameter so the modulus
    question is scale free; alpha_hat is the minimum over pairs that
    actually constrain the inequality, math.inf when none do, and 0 when
    an exact collision leaves no positive exponent.
    """

    base_index: int
    m_const: float
    alpha_hat: float
    witness: int | None
    normalizer: float
    n_binding: int


def pointwise_holder(points, op, base_index, m_const):
    """Best pointwise Holder exponent of the inverse at one base point."""
    if m_const < 1:
        raise ValueError("M must be at least 1 (normalized distances)")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    images = np.atleast_2d(_image_of(points, op))
    normalizer = 2.0 * set_diameter(images)
    if normalizer == 0.0:
        raise ValueError("image has zero diameter")
    x = points[base_index]
    px = images[base_index]
    pd = np.linalg.norm(points - x, axis=1) / normalizer
    im = np.linalg.norm(images - px, axis=1) / normalizer
    others = np.arange(len(points)) != base_index
    nontrivial = others & (pd > 0)
    collide = nontrivial & (im == 0.0)
    if np.any(collide):
        witness = int(np.nonzero(collide)[0][0])
        return HolderEstimate(base_index, float(m_const), 0.0, witness,
                              normalizer, int(np.count_nonzero(collide)))
    binding = nontrivial & (pd > m_const * im)
    if not np.any(binding):
        return HolderEstimate(base_index, float(m_const), math.inf, None,
                              normalizer, 0)
    idx = np.nonzero(binding)[0]
    ceilings = np.log2(pd[idx] / m_const) / np.log2(im[idx])
    best = int(np.argmin(ceilings))
    alpha = max(0.0, float(ceilings[best]))
    return HolderEstimate(base_index, float(m_const), alpha, int(idx[best]),
                          normalizer, int(len(idx)))


def set_diameter(points):
    """Exact diameter of a point array.

    The diameter is attained on convex-hull vertices, so large sets in
    dimension >= 2 are reduced to their hull before the pairwise scan;
    degenerate (flat) inputs fall back to the direct blockwise scan.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] == 1:
        return float(points.max() - points.min()) if len(points) else 0.0
    if len(points) > 4 * PAIR_BLOCK:
        try:
            hull = ConvexHull(points)
            points = points[hull.vertices]
        except QhullError:
            pass
    best = 0.0
    for start in range(0, len(points), PAIR_BLOCK):
        block = slice(start, min(start + PAIR_BLOCK, len(points)))
        d = np.linalg.norm(points[block, None, :] - points[None, :, :], axis=2)
        best = max(best, float(d.max()))
    return best


def log_lipschitz_defect(points, op, base_index, big_r, eta, theta):
    """Smallest constant ratio against the modulus u / log2(2R/u)^(eta/theta).

    c_hat = min over y of |px - py| / f(|x - y|); the modulus is only
    monotone below R, so R must be at least the point-set diameter (pass
    None to use the diameter itself).  A c_hat of zero certifies an exact
    collision; for the identity map the ratio is log2(2R/u)^(eta/theta)
    >= 1 everywhere.
    """
    if eta <= 1:
        raise ValueError("eta must exceed 1")
    if theta <= 0:
        raise ValueError("theta must be positive")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    images = np.atleast_2d(_image_of(points, op))
    diam = set_diameter(points)
    if big_r is None:
        big_r = diam
    if big_r < diam:
        raise ValueError("R must be at least the point-set diameter")
    x = points[base_index]
    px = images[base_index]
    pd = np.linalg.norm(points - x, axis=1)
    im = np.linalg.norm(images - px, axis=1)
    keep = pd > 0
    pd, im = pd[keep], im[keep]
    idx = np.nonzero(keep)[0]
    if pd.size == 0:
        raise ValueError("base point has no distinct partners")
    f = pd / np.log2(2.0 * big_r / pd) ** (eta / theta)
    ratios = im / f
    best = int(np.argmin(ratios))
    return {
        "base_index": base_index,
        "eta": float(eta),
        "theta": float(theta),
        "R": float(big_r),
        "c_hat": float(ratios[best]),
        "witness": int(idx[best]),
    }


def nearest_point_decode(atoms, op, y):
    """Atom whose image is nearest to y; ties resolve to the lowest index.

    atoms may be an AtomicMeasure/PointSet (its points are mapped through
    op) or a plain array; op None means the atoms are already images.
    """
    pts = getattr(atoms, "points", atoms)
    images = np.atleast_2d(_image_of(pts, op))
    return int(np.argmin(np.linalg.norm(images - np.asarray(y), axis=1)))


def _sphere_mesh(dim, count, rng):
    if dim == 2:
        ang = np.linspace(0, 2 * np.pi, count, endpoint=False)
        return np.column_stack([np.cos(ang), np.sin(ang)])
    if dim == 3:
        i = np.arange(count, dtype=float)
        z = 1.0 - (2 * i + 1) / count
        theta = np.pi * (3.0 - np.sqrt(5.0)) * i
        rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        return np.column_stack([rho * np.cos(theta), rho * np.sin(theta), z])
    mesh = rng.standard_normal((count, dim))
    return mesh / np.linalg.norm(mesh, axis=1, keepdims=True)


def perturbed_preimage_search(op, perturbation, J, radius, seed=0,
                              resolution=None):
    """Search r S_J for a point the perturbed map sends to its value at 0.

    The map is y -> L y + f(y) with f a callable perturbation (None means
    unperturbed); the target is the image of the origin.  The sphere is
    meshed at the requested resolution (default r/100, which is also the
    coarsest allowed), the best mesh point is refined locally, and for the
    unperturbed full-rank case the kernel is solved exactly.  Success
    means a residual below r * 1e-4.
    """
    rows = np.atleast_2d(np.asarray(getattr(op, "rows", op), dtype=float))
    J = list(J)
    if resolution is None:
        resolution = radius / 100.0
    if resolution > radius / 100.0 + 1e-15:
        raise ValueError("mesh resolution must be at most r/100")
    rng = np.random.default_rng(seed)
    sub = rows[:, J]
    dim = len(J)

    def embed(local):
        out = np.zeros((len(local), rows.shape[1]))
        out[:, J] = local
        return out

    def values(local):
        pts = embed(local)
        base = pts @ rows.T
        if perturbation is not None:
            base = base + np.atleast_2d(perturbation(pts))
        return base

    target = values(np.zeros((1, dim)))[0]

    if perturbation is None:
        _, s, vt = np.linalg.svd(sub)
        if s.size < dim or s[-1] <= 1e-10:
            y = radius * vt[-1]
            residual = float(np.linalg.norm(values(y[None, :])[0] - target))
            return {"found": residual < radius * 1e-4, "y": embed(y[None, :])[0],
                    "residual": residual, "exact": True}

    count = max(64, int(np.ceil((3.9 * radius / resolution) ** (dim - 1))))
    count = min(count, 400_000)
    mesh = _sphere_mesh(dim, count, rng) * radius
    res = np.linalg.norm(values(mesh) - target, axis=1)
    best = int(np.argmin(res))
    center = mesh[best] / radius
    spread = max(resolution / radius, 4.0 / np.sqrt(count))
    # shrink slower than the sampler converges so the minimum stays inside
    # the sampled neighborhood at every round
    for _ in range(8):
        local = center + spread * rng.standard_normal((512, dim))
        local /= np.linalg.norm(local, axis=1, keepdims=True)
        local = np.vstack([center, local]) * radius
        r_loc = np.linalg.norm(values(local) - target, axis=1)
        b = int(np.argmin(r_loc))
        center = local[b] / radius
        spread /= 4.0
    y_local = center * radius
    residual = float(np.linalg.norm(values(y_local[None, :])[0] - target))
    return {"found": residual < radius * 1e-4, "y": embed(y_local[None, :])[0],
            "residual": residual, "exact": False}
