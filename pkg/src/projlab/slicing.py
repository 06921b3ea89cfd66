"""Conditional structure of atomic measures on projection slabs.

A slab is the preimage of a small ball under orthogonal projection onto a
plane; conditioning an atomic measure on it gives the empirical slice.
The near-Dirac score asks how concentrated such a slice is: the smallest
radius at which a ball around some atom already holds a 1 - tau share of
the slice.  Translate-pair systems (two copies of one contraction shifted
by a vector orthogonal to the slab plane) are the canonical example where
every slice splits into two matched copies and the score stays near the
translation length.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .dimension import local_dimension
from .geom import AtomicMeasure
from .linalg import Plane, orthonormalize_rows, project


@dataclass
class SlabSlice:
    """Conditional measure on {x : |P_V x - a| <= delta}."""

    plane: Plane
    center: np.ndarray
    half_width: float
    raw_mass: float
    indices: np.ndarray  # positions of the surviving atoms in the parent
    measure: AtomicMeasure | None

    @property
    def empty(self):
        return self.measure is None


def slab_conditional(measure, plane, center, half_width):
    """Condition an atomic measure on a closed projection slab.

    Atoms whose projection lies within half_width of the center survive
    with renormalized weights; a slab that catches no mass is returned
    flagged empty rather than raising.
    """
    if half_width <= 0:
        raise ValueError("half_width must be positive")
    center = np.atleast_1d(np.asarray(center, dtype=float))
    coords = project(plane, measure.points)
    keep = np.linalg.norm(coords - center, axis=1) <= half_width
    raw = float(measure.weights[keep].sum())
    if raw <= 0.0:
        return SlabSlice(plane, center, float(half_width), 0.0,
                         np.nonzero(keep)[0], None)
    labels = None
    if measure.labels is not None:
        labels = [measure.labels[i] for i in np.nonzero(keep)[0]]
    sliced = AtomicMeasure(measure.points[keep],
                           measure.weights[keep] / raw, labels=labels)
    return SlabSlice(plane, center, float(half_width), raw,
                     np.nonzero(keep)[0], sliced)


def dirac_score(slice_or_measure, tau):
    """Smallest radius at which one atom-centered ball holds mass 1 - tau.

    Returns (rho_star, center_index).  Zero radius means a 1 - tau
    majority sits on a single atom (Dirac behavior up to tau); a positive
    score is the diameter cost of collecting that much mass.  Candidate
    centers are the atoms themselves and the threshold is inclusive: mass
    exactly 1 - tau counts.
    """
    if not 0 < tau < 1:
        raise ValueError("tau must lie in (0,1)")
    measure = getattr(slice_or_measure, "measure", slice_or_measure)
    if measure is None:
        raise ValueError("cannot score an empty slice")
    pts = measure.points
    w = measure.weights
    need = 1.0 - tau - 1e-12
    best = np.inf
    best_center = -1
    for c in range(len(pts)):
        d = np.linalg.norm(pts - pts[c], axis=1)
        order = np.argsort(d, kind="stable")
        cum = np.cumsum(w[order])
        hit = int(np.searchsorted(cum, need, side="left"))
        if hit < len(d) and float(d[order][hit]) < best:
            best = float(d[order][hit])
            best_center = c
    return best, best_center


def _complement_plane(t):
    """Orthonormal basis of the hyperplane orthogonal to t."""
    t = np.asarray(t, dtype=float)
    n = t.size
    unit = t / np.linalg.norm(t)
    seedlings = np.eye(n)
    rows = [unit]
    for e in seedlings:
        try:
            rows.append(orthonormalize_rows(np.vstack(rows + [e]))[-1])
        except ValueError:
            continue
        if len(rows) == n:
            break
    return Plane(np.vstack(rows[1:]))


def nn_spacing_at(coords, center):
    """Distance from center to the nearest distinct projected point."""
    coords = np.atleast_2d(coords)
    d = np.linalg.norm(coords - np.atleast_1d(center), axis=1)
    positive = d[d > 0]
    return float(positive.min()) if positive.size else 0.0


def translate_pair_test(spec, depth, half_width=None, n_slices=64, seed=0,
                        tau=0.25, tol=0.05):
    """Slice structure of a two-branch system phi2 = phi1 + t.

    Builds the depth-d atoms of the pair system, projects onto a plane
    orthogonal to t (constructed here; orthogonality asserted to 1e-10),
    and on slabs around sampled projected atoms checks that:

    * the two branch slices carry exactly the same composition labels
      (membership is branch independent when the plane kills t);
    * matched atoms differ by t exactly;
    * the mixed slice is never Dirac: its score at level tau stays at or
      above (1 - tol) * |t|.

    Default half_width per slab is twice the nearest projected-neighbor
    spacing at the sampled center.
    """
    if len(spec.ratios) != 2:
        raise ValueError("need exactly two maps")
    if abs(spec.ratios[0] - spec.ratios[1]) > 1e-12 or \
            np.abs(spec.orthogonals[0] - spec.orthogonals[1]).max() > 1e-12:
        raise ValueError("the pair must share its linear part")
    translate = spec.shifts[1] - spec.shifts[0]
    t_norm = float(np.linalg.norm(translate))
    if t_norm == 0:
        raise ValueError("the two maps coincide (t = 0)")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    plane = _complement_plane(translate)
    gap = float(np.abs(plane.basis @ translate).max())
    if gap > 1e-10:
        raise ValueError("slab plane is not orthogonal to the translate")

    from .constructions import ifs_atoms

    nu = ifs_atoms(spec, depth)
    branches = np.array([lab[0] for lab in nu.labels])
    tails = [lab[1:] for lab in nu.labels]
    coords = project(plane, nu.points)

    rng = np.random.default_rng(seed)
    checked = 0
    label_matches = 0
    shift_ok = 0
    mixed_seen = 0
    min_mixed_score = np.inf
    for _ in range(n_slices):
        pick = rng.integers(0, len(coords))
        a = coords[pick]
        width = half_width
        if width is None:
            spacing = nn_spacing_at(coords, a)
            width = 2.0 * spacing if spacing > 0 else 2.0 * t_norm
        sl = slab_conditional(nu, plane, a, width)
        if sl.empty:
            continue
        checked += 1
        got_b = branches[sl.indices]
        got_t = [tails[i] for i in sl.indices]
        tails1 = sorted(t for b, t in zip(got_b, got_t) if b == 1)
        tails2 = sorted(t for b, t in zip(got_b, got_t) if b == 2)
        if tails1 == tails2:
            label_matches += 1
        by_key = {(b, t): nu.points[i]
                  for b, t, i in zip(got_b, got_t, sl.indices)}
        ok = all(
            np.allclose(by_key[(2, t)], by_key[(1, t)] + translate, atol=1e-9)
            for (b, t) in by_key if b == 1 and (2, t) in by_key
        )
        shift_ok += bool(ok)
        if tails1 and tails2:
            mixed_seen += 1
            score, _ = dirac_score(sl, tau)
            min_mixed_score = min(min_mixed_score, score)
    return {
        "depth": depth,
        "n_slices_checked": checked,
        "n_mixed": mixed_seen,
        "all_labels_match": label_matches == checked and checked > 0,
        "all_shifts_match": shift_ok == checked and checked > 0,
        "min_mixed_score": float(min_mixed_score),
        "translate_norm": t_norm,
        "score_floor": (1.0 - tol) * t_norm,
        "passes_floor": bool(min_mixed_score >= (1.0 - tol) * t_norm),
        "plane": plane,
        "measure": nu,
    }


def slice_local_dimension(measure, plane, n_slices, half_width, radii, seed,
                          min_atoms=8):
    """Local dimension fits of random slab slices at their own atoms.

    Draws slab centers from the measure's projected atoms (weighted), and
    for each nonempty slice fits log2 slice-mass of balls against log2 r
    at a weighted random atom of the slice.  Returns the per-slice fits
    and their median slope.
    """
    rng = np.random.default_rng(seed)
    coords = project(plane, measure.points)
    slopes = []
    fits = []
    tries = 0
    while len(fits) < n_slices and tries < 20 * n_slices:
        tries += 1
        pick = rng.choice(len(coords), p=measure.weights)
        sl = slab_conditional(measure, plane, coords[pick], half_width)
        if sl.empty or sl.measure.n < min_atoms:
            continue
        at = rng.choice(sl.measure.n, p=sl.measure.weights)
        try:
            fit = local_dimension(sl.measure, sl.measure.points[at], radii)
        except ValueError:
            continue
        fits.append(fit)
        slopes.append(fit.slope)
    if not fits:
        raise ValueError("no usable slices found")
    return {
        "half_width": float(half_width),
        "n_slices": len(fits),
        "slopes": slopes,
        "median_slope": float(np.median(slopes)),
        "fits": fits,
    }
