"""Quantitative comparison of simulation against theory.

Event detection follows the crest-curvature criterion: a crest whose
transverse curvature of |u|^2 crosses zero from below fissions there; the
reverse crossing at a merged crest is fusion. Peak bookkeeping (births,
deaths, nearest-neighbor chains) only confirms and localizes the events,
because bare peak counting is fragile on the lattice right at the merging
instant.

All positions here are physical lattice coordinates (x, y[, z]); callers
working in slow units Y = delta*y rescale at the boundary.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft
from scipy import ndimage

from .analytic import Q1DProfiles, _breather_core
from .core import ComplexField, ModelSpec, PeriodicGrid, SimulationConfig, make_grid
from .mae import Event

__all__ = [
    "PeakRecord",
    "DiagnosticsSeries",
    "uniform_distance",
    "breather_comparator",
    "track_peaks",
    "detect_fission_fusion",
    "fit_critical_exponent",
    "mi_domain_scan",
    "ring_radius",
    "level_set_topology",
]

log = logging.getLogger(__name__)


@dataclass
class PeakRecord:
    """Strict local maxima of |u| above threshold at one instant."""

    time: float
    positions: np.ndarray  # (n, dim) refined physical coordinates
    heights: np.ndarray  # (n,)
    curvatures: np.ndarray  # (n,) d^2|u|^2/dy^2 at the crest (nan in 1-D)
    indices: np.ndarray  # (n, dim) lattice indices
    cell: tuple[float, ...]
    lengths: tuple[float, ...]
    threshold: float

    @property
    def n(self) -> int:
        return len(self.heights)


@dataclass
class DiagnosticsSeries:
    """Per-comparison-time record of distances, peaks and conserved drift."""

    times: list[float] = field(default_factory=list)
    distances: list[float] = field(default_factory=list)
    peak_records: list[PeakRecord] = field(default_factory=list)
    conserved: list[tuple[float, float, float]] = field(default_factory=list)

    def max_distance(self) -> float:
        return max(self.distances) if self.distances else 0.0


def uniform_distance(num: ComplexField, evaluator, t: float | None = None) -> float:
    """Sup over the lattice of |u_num - u_analytic|.

    evaluator(grid, t) must return the analytic field on the same lattice.
    """
    t = num.time if t is None else t
    ref = evaluator(num.grid, t)
    if ref.shape != num.values.shape:
        raise ValueError("evaluator returned a field of the wrong shape")
    d = num.values - ref
    return float(np.sqrt(np.max(d.real * d.real + d.imag * d.imag)))


def breather_comparator(profiles: Q1DProfiles, delta: float):
    """Evaluator for the adiabatic breather deformation u1 on a lattice.

    Planar profiles map the grid's y axis to Y = delta*y; radial profiles
    map (y, z) to R = delta*sqrt(y^2 + z^2). The returned callable has
    signature (grid, t) -> complex array.
    """
    phi = profiles.phi
    k = 2.0 * np.cos(phi)
    sigma = 2.0 * np.sin(2.0 * phi)
    cache: dict[int, tuple] = {}

    def maps(grid: PeriodicGrid):
        key = id(grid)
        if key not in cache:
            if profiles.kind == "radial":
                if grid.dim != 3:
                    raise ValueError("radial profiles need a 3-axis grid")
                slow = delta * np.hypot(
                    grid.coords[1][:, None], grid.coords[2][None, :]
                )
            else:
                if grid.dim != 2:
                    raise ValueError("planar profiles need a 2-axis grid")
                slow = delta * grid.coords[1]
            cache.clear()
            cache[key] = (profiles.x1_of(slow), profiles.t1_of(slow))
        return cache[key]

    def evaluate(grid: PeriodicGrid, t: float):
        x1v, t1v = maps(grid)
        x = grid.coords[0].reshape((-1,) + (1,) * (grid.dim - 1))
        core = _breather_core(k * (x - x1v), sigma * (t - t1v), phi)
        return core * np.exp(2j * t + 2j * phi)

    return evaluate


def _abs_with_neighbors(mod: np.ndarray):
    """Boolean mask of strict local maxima over the full 3^dim stencil,
    periodic wrap included."""
    mask = np.ones(mod.shape, dtype=bool)
    dim = mod.ndim
    offsets = np.array(np.meshgrid(*([[-1, 0, 1]] * dim), indexing="ij"))
    offsets = offsets.reshape(dim, -1).T
    for off in offsets:
        if not np.any(off):
            continue
        shifted = np.roll(mod, shift=tuple(-off), axis=tuple(range(dim)))
        mask &= mod > shifted
    return mask


def track_peaks(snapshot: ComplexField, threshold: float) -> PeakRecord:
    """All strict local maxima of |u| above threshold, with per-axis
    quadratic sub-lattice refinement and the transverse curvature of |u|^2
    (spectral second derivative along the slow axis) at each crest."""
    if threshold <= 1.0:
        raise ValueError("threshold must exceed the background modulus 1")
    grid = snapshot.grid
    v = snapshot.values
    mod = np.abs(v)
    mask = _abs_with_neighbors(mod) & (mod > threshold)
    idx = np.argwhere(mask)
    dim = grid.dim

    if dim >= 2:
        b = mod * mod
        ky = grid.wavenumbers[1]
        shape = [1] * dim
        shape[1] = ky.size
        byy = sfft.ifft(
            sfft.fft(b, axis=1) * (-(ky.reshape(shape) ** 2)), axis=1
        ).real

    positions = np.empty((len(idx), dim))
    heights = np.empty(len(idx))
    curvatures = np.full(len(idx), np.nan)
    for row, ind in enumerate(idx):
        pos = []
        h = mod[tuple(ind)]
        for a in range(dim):
            im = list(ind)
            ip = list(ind)
            im[a] = (ind[a] - 1) % grid.counts[a]
            ip[a] = (ind[a] + 1) % grid.counts[a]
            fm, f0, fp = mod[tuple(im)], mod[tuple(ind)], mod[tuple(ip)]
            den = fm - 2 * f0 + fp
            if den < 0:
                off = 0.5 * (fm - fp) / den
                h += -((fm - fp) ** 2) / (8 * den)
            else:
                off = 0.0
            pos.append(grid.coords[a][ind[a]] + off * grid.spacings[a])
        positions[row] = pos
        heights[row] = h
        if dim >= 2:
            curvatures[row] = byy[tuple(ind)]
    return PeakRecord(
        time=snapshot.time,
        positions=positions,
        heights=heights,
        curvatures=curvatures,
        indices=idx,
        cell=grid.spacings,
        lengths=grid.lengths,
        threshold=threshold,
    )


def _slow_coord(rec: PeakRecord):
    """Scalar slow coordinate per peak: y in 2-D, sqrt(y^2+z^2) in 3-D."""
    if rec.positions.shape[1] >= 3:
        return np.hypot(rec.positions[:, 1], rec.positions[:, 2])
    if rec.positions.shape[1] == 2:
        return rec.positions[:, 1].copy()
    return rec.positions[:, 0].copy()


def _periodic_dist(a, b, L, periodic=True):
    d = np.abs(a - b)
    return np.minimum(d, L - d) if periodic else d


def _match_chains(records, max_jump_cells=3.0):
    """Nearest-neighbor association of peaks between consecutive records.

    Returns forward maps fwd[i][j] = peak index in record i+1 chained to
    peak j of record i, or -1."""
    fwd = []
    for r0, r1 in zip(records[:-1], records[1:]):
        s0, s1 = _slow_coord(r0), _slow_coord(r1)
        L = r0.lengths[1] if len(r0.lengths) > 1 else r0.lengths[0]
        periodic = len(r0.lengths) == 2  # radial coordinate is not periodic
        cell = r0.cell[1] if len(r0.cell) > 1 else r0.cell[0]
        jump = max_jump_cells * cell
        m = np.full(r0.n, -1, dtype=int)
        taken = np.zeros(r1.n, dtype=bool)
        order = np.argsort(-r0.heights)  # tallest first
        for j in order:
            if r1.n == 0:
                break
            d = _periodic_dist(s0[j], s1, L, periodic)
            d = np.where(taken, np.inf, d)
            jbest = int(np.argmin(d))
            if d[jbest] <= jump:
                m[j] = jbest
                taken[jbest] = True
        fwd.append(m)
    return fwd


def detect_fission_fusion(
    records: list[PeakRecord],
    max_jump_cells: float = 3.0,
    persistence: int = 5,
) -> list[Event]:
    """Fission/fusion events from a densely sampled peak-record series.

    Fission signatures, all anchored on the curvature zero-crossing:
      - a chained crest whose curvature crosses 0 from below (interpolated);
      - a crest dying into >= 2 newborn products (crossing extrapolated from
        its last two curvature samples);
      - a surviving crest with rising negative curvature that sheds an
        adjacent newborn product (split too slow to break the chain).
    Fusion is the reverse 2 -> 1 merge: either a chained crest's curvature
    crossing 0 from above, or two approaching crests dying into one birth,
    with the time extrapolated from the squared separation (the square-root
    approach law makes separation^2 linear in t). Merges without a recorded
    approach history are kept but flagged low confidence (lattice plateau
    jitter near a fission produces such pairs).

    A fission is high confidence when the peak count stays above the
    pre-event count for `persistence` consecutive records. Also emits one
    first-appearance-max event at the earliest time the tracked maximum
    height reaches its global maximum (parabola-refined); the series can
    plateau afterwards, so the first reach is the crest time.
    """
    records = [r for r in records]
    events: list[Event] = []
    if len(records) < 3:
        return events
    fwd = _match_chains(records, max_jump_cells)

    n_rec = len(records)
    slow = [_slow_coord(r) for r in records]
    L_slow = records[0].lengths[1] if len(records[0].lengths) > 1 else records[0].lengths[0]
    periodic = len(records[0].lengths) == 2
    cell = records[0].cell[1] if len(records[0].cell) > 1 else records[0].cell[0]

    bwd = [np.full(records[i + 1].n, -1, dtype=int) for i in range(n_rec - 1)]
    for i, m in enumerate(fwd):
        for j, jn in enumerate(m):
            if jn >= 0:
                bwd[i][jn] = j

    def curvature_history(i, j, depth=2):
        """Last `depth` (time, curvature) chain samples ending at peak j of
        record i, oldest first."""
        out = [(records[i].time, records[i].curvatures[j])]
        jj, ii = j, i
        while len(out) < depth and ii > 0 and bwd[ii - 1][jj] >= 0:
            jj = bwd[ii - 1][jj]
            ii -= 1
            out.append((records[ii].time, records[ii].curvatures[jj]))
        return out[::-1]

    def extrapolate_zero(hist, t_lo, t_hi):
        """Linear zero-crossing of a rising negative curvature pair."""
        if len(hist) == 2 and hist[1][1] > hist[0][1] and hist[1][1] < 0:
            (ta, ca), (tb, cb) = hist
            return min(tb + (0.0 - cb) * (tb - ta) / (cb - ca), t_hi)
        return 0.5 * (t_lo + t_hi)

    def pair_separation(i, site, window_cells=40.0):
        """Separation of the two peaks nearest to `site` in record i, both
        within the window; None when no such pair exists. Chain-history-free,
        so it survives the infinite-speed approach breaking the chains."""
        if records[i].n < 2:
            return None
        d = _periodic_dist(slow[i], site, L_slow, periodic)
        order = np.argsort(d)
        if d[order[1]] > window_cells * cell:
            return None
        return float(
            _periodic_dist(slow[i][order[0]], slow[i][order[1]], L_slow, periodic)
        )

    def fusion_time_and_confidence(i, site, sep1, t0, t1):
        """Extrapolate the squared pair separation to zero; high confidence
        only when the pair was genuinely approaching."""
        sep0 = pair_separation(i - 1, site) if i > 0 else None
        if sep0 is not None and sep1 is not None and sep0 > sep1 > 0:
            tprev = records[i - 1].time
            t_ext = t0 + sep1**2 * (t0 - tprev) / (sep0**2 - sep1**2)
            return min(max(t_ext, t0), t1), "high"
        return 0.5 * (t0 + t1), "low"

    def add_event(kind, t, x, s, confidence):
        for ev in events:
            if (
                ev.kind == kind
                and abs(ev.time - t) < 0.06
                and _periodic_dist(ev.slow, s, L_slow, periodic) < 6 * cell
            ):
                if confidence == "high" and ev.confidence == "low":
                    ev.confidence = "high"
                return
        events.append(Event(kind, float(t), float(x), float(s), confidence=confidence))

    def fission_confirmed(i_event):
        base = records[i_event].n
        run = 0
        for i in range(i_event + 1, n_rec):
            if records[i].n >= max(2, base + 1):
                run += 1
                if run >= persistence:
                    return True
            else:
                run = 0
        return False

    # in-chain curvature crossings (crest survives on the lattice)
    for i in range(n_rec - 1):
        for j, jn in enumerate(fwd[i]):
            if jn < 0:
                continue
            c0 = records[i].curvatures[j]
            c1 = records[i + 1].curvatures[jn]
            if np.isnan(c0) or np.isnan(c1):
                continue
            t0, t1 = records[i].time, records[i + 1].time
            if c0 < 0.0 <= c1:
                t_star = t0 + (0.0 - c0) * (t1 - t0) / (c1 - c0)
                conf = "high" if fission_confirmed(i) else "low"
                add_event("fission", t_star, records[i].positions[j][0], slow[i][j], conf)
            elif c0 > 0.0 >= c1:
                # only a genuine merge if a neighboring crest vanished while
                # the pair was approaching; otherwise it is lattice jitter of
                # a crest sliding off the post-fission saddle
                conf = "low"
                for j2 in range(records[i].n):
                    if j2 == j or fwd[i][j2] >= 0:
                        continue
                    sep1 = _periodic_dist(slow[i][j2], slow[i][j], L_slow, periodic)
                    if sep1 > 8 * cell:
                        continue
                    _, conf = fusion_time_and_confidence(i, slow[i][j], sep1, t0, t1)
                add_event("fusion", t0 + (0.0 - c0) * (t1 - t0) / (c1 - c0),
                          records[i + 1].positions[jn][0], slow[i + 1][jn], conf)

    # death/birth topology changes
    for i in range(n_rec - 1):
        t0, t1 = records[i].time, records[i + 1].time
        deaths = [j for j in range(records[i].n) if fwd[i][j] < 0]
        births = [j for j in range(records[i + 1].n) if bwd[i][j] < 0]
        if not births and not deaths:
            continue
        birth_of_death = {j: [] for j in deaths}
        death_of_birth = {j: [] for j in births}
        for jb in births:
            if deaths:
                d = [_periodic_dist(slow[i + 1][jb], slow[i][jd], L_slow, periodic) for jd in deaths]
                birth_of_death[deaths[int(np.argmin(d))]].append(jb)
        for jd in deaths:
            if births:
                d = [_periodic_dist(slow[i][jd], slow[i + 1][jb], L_slow, periodic) for jb in births]
                death_of_birth[births[int(np.argmin(d))]].append(jd)

        # crest died splitting into >= 2 products
        for jd, assigned in birth_of_death.items():
            if len(assigned) < 2:
                continue
            conf = "high" if fission_confirmed(i) else "low"
            if records[i].heights[jd] < records[i].threshold * 1.02:
                conf = "low"
            t_star = extrapolate_zero(curvature_history(i, jd), t0, t1)
            add_event("fission", t_star, records[i].positions[jd][0], slow[i][jd], conf)

        # surviving crest shedding an adjacent product (split below max_jump)
        for jb in births:
            d_all = [
                (_periodic_dist(slow[i + 1][jb], slow[i][j], L_slow, periodic), j)
                for j in range(records[i].n)
                if fwd[i][j] >= 0
            ]
            if not d_all:
                continue
            dist, j = min(d_all)
            if dist > 8 * cell:
                continue
            hist = curvature_history(i, j)
            rising_neg = (
                len(hist) == 2 and hist[1][1] < 0 and hist[1][1] > hist[0][1]
            )
            if not rising_neg:
                continue
            conf = "high" if fission_confirmed(i) else "low"
            t_star = extrapolate_zero(hist, t0, t1)
            add_event("fission", t_star, records[i].positions[j][0], slow[i][j], conf)

        # merge by chain collision: a crest dies while the neighboring
        # chain's continuation claims the merged peak (approach slower than
        # the matching jump, so only one chain breaks)
        for jd in deaths:
            if birth_of_death.get(jd):
                continue  # handled as a split above
            cand = []
            for j2 in range(records[i].n):
                if j2 == jd or fwd[i][j2] < 0:
                    continue
                sep1 = _periodic_dist(slow[i][j2], slow[i][jd], L_slow, periodic)
                if sep1 <= 8 * cell:
                    cand.append((sep1, j2))
            if not cand:
                continue
            sep1, j2 = min(cand)
            site = 0.5 * (slow[i][jd] + slow[i][j2])
            t_star, conf = fusion_time_and_confidence(i, site, sep1, t0, t1)
            if conf != "high":
                continue  # separating neighbors: plateau jitter, not a merge
            jn = fwd[i][j2]
            add_event("fusion", t_star, records[i + 1].positions[jn][0],
                      slow[i + 1][jn], "high")

        # >= 2 crests merged into one
        for jb, assigned in death_of_birth.items():
            if len(assigned) < 2:
                continue
            sA, sB = slow[i][assigned[0]], slow[i][assigned[1]]
            sep1 = _periodic_dist(sA, sB, L_slow, periodic)
            t_star, conf = fusion_time_and_confidence(i, slow[i + 1][jb], sep1, t0, t1)
            if records[i + 1].heights[jb] < records[i + 1].threshold * 1.02:
                conf = "low"
            add_event("fusion", t_star, records[i + 1].positions[jb][0], slow[i + 1][jb], conf)

    # crest (first-appearance) maximum of the tracked height; the series
    # plateaus after fission (products keep the crest amplitude), so limit
    # the search to just past the first detected fission
    hmax = np.array([r.heights.max() if r.n else -np.inf for r in records])
    if np.isfinite(hmax).any():
        cadence = records[1].time - records[0].time
        fissions = [e.time for e in events if e.kind == "fission"]
        t_cut = (min(fissions) + 2 * cadence) if fissions else np.inf
        sel = np.array([r.time <= t_cut for r in records])
        hsel = np.where(sel, hmax, -np.inf)
        i_pk = int(np.argmax(hsel))
        t_star = records[i_pk].time
        if 0 < i_pk < n_rec - 1 and np.isfinite(hmax[i_pk - 1]) and np.isfinite(hmax[i_pk + 1]):
            tm, tc, tp = (records[i_pk - 1].time, records[i_pk].time, records[i_pk + 1].time)
            fm, f0, fp = hmax[i_pk - 1], hmax[i_pk], hmax[i_pk + 1]
            den = fm - 2 * f0 + fp
            if den < 0:
                off = np.clip(0.5 * (fm - fp) / den, -1.0, 1.0)
                t_star = tc + off * 0.5 * (tp - tm)
        j = int(np.argmax(records[i_pk].heights))
        events.append(
            Event(
                "first-appearance-max",
                float(t_star),
                float(records[i_pk].positions[j][0]),
                float(slow[i_pk][j]),
            )
        )

    events.sort(key=lambda e: e.time)
    return events


def fit_critical_exponent(samples, t_event: float, window: float = 0.5):
    """Least-squares power-law fit of |position| against (t - t_event).

    samples: iterable of (t, position offset from the event site). Uses the
    fit window 0 < t - t_event <= window and needs at least 8 samples there.
    Returns {"exponent", "amplitude", "residual"}.
    """
    arr = np.asarray(list(samples), dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("samples must be (t, position) pairs")
    tau = arr[:, 0] - t_event
    pos = np.abs(arr[:, 1])
    keep = (tau > 0) & (tau <= window) & (pos > 0)
    if keep.sum() < 8:
        raise ValueError(
            f"need >= 8 samples with 0 < t - t_event <= {window}, got {int(keep.sum())}"
        )
    lt, lp = np.log(tau[keep]), np.log(pos[keep])
    A = np.column_stack([lt, np.ones_like(lt)])
    coef, *_ = np.linalg.lstsq(A, lp, rcond=None)
    resid = lp - A @ coef
    return {
        "exponent": float(coef[0]),
        "amplitude": float(np.exp(coef[1])),
        "residual": float(np.sqrt(np.mean(resid**2))),
    }


def ring_radius(field: ComplexField, threshold: float = 1.5):
    """Radius of the transverse crest ring of a 3-D field.

    Takes the x-slab of maximal |u|, bins |u| by R = sqrt(y^2 + z^2) with
    the y spacing, and refines the peak bin quadratically. Returns nan when
    nothing exceeds the threshold."""
    if field.grid.dim != 3:
        raise ValueError("ring radius needs a 3-axis field")
    mod = np.abs(field.values)
    ix = int(np.argmax(np.max(mod, axis=(1, 2))))
    slab = mod[ix]
    if slab.max() <= threshold:
        return float("nan")
    g = field.grid
    R = np.hypot(g.coords[1][:, None], g.coords[2][None, :])
    dr = g.spacings[1]
    nb = int(np.ceil(R.max() / dr)) + 1
    bins = np.minimum((R / dr).astype(int), nb - 1)
    prof = np.full(nb, -np.inf)
    np.maximum.at(prof, bins.ravel(), slab.ravel())
    j = int(np.argmax(prof))
    if 0 < j < nb - 1 and np.isfinite(prof[j - 1]) and np.isfinite(prof[j + 1]):
        fm, f0, fp = prof[j - 1], prof[j], prof[j + 1]
        den = fm - 2 * f0 + fp
        off = 0.5 * (fm - fp) / den if den < 0 else 0.0
    else:
        off = 0.0
    return float((j + off) * dr)


def _euler_characteristic(occ: np.ndarray) -> int:
    """Euler characteristic V - E + F - C of the cubical complex made of the
    occupied voxels (treated as unit cubes in Z^3, no periodic wrap)."""
    idx = np.argwhere(occ)
    if idx.size == 0:
        return 0
    dims = np.asarray(occ.shape) + 1
    corners = np.array([[i, j, k] for i in (0, 1) for j in (0, 1) for k in (0, 1)])

    def count_unique(base_offsets, tag_count):
        rows = []
        for tag, offs in enumerate(base_offsets):
            pts = (idx[:, None, :] + np.asarray(offs)[None, :, :]).reshape(-1, 3)
            code = np.ravel_multi_index((pts[:, 0], pts[:, 1], pts[:, 2]), dims)
            rows.append(code * tag_count + tag)
        return np.unique(np.concatenate(rows)).size

    V = count_unique([corners], 1)
    edge_bases = []
    for d in range(3):
        offs = corners[corners[:, d] == 0]
        edge_bases.append(offs)
    E = count_unique(edge_bases, 3)
    face_bases = []
    for d in range(3):
        offs = corners[(corners[:, (d + 1) % 3] == 0) & (corners[:, (d + 2) % 3] == 0)]
        face_bases.append(offs)
    F = count_unique(face_bases, 3)
    C = idx.shape[0]
    return int(V - E + F - C)


def level_set_topology(field: ComplexField, level: float) -> dict:
    """Connected components and Euler characteristic of {|u| > level}.

    Components are counted with periodic wrap; the Euler characteristic is
    computed on the voxel complex without identification, so it is reliable
    when the set stays clear of the box faces (true for the centered
    post-fission rings). A single component with characteristic 0 is
    reported as ring topology."""
    mod = np.abs(field.values)
    occ = mod > level
    labeled, n = ndimage.label(occ)
    if n > 1:  # merge labels across periodic faces
        parent = list(range(n + 1))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for axis in range(occ.ndim):
            lo = np.take(labeled, 0, axis=axis).ravel()
            hi = np.take(labeled, -1, axis=axis).ravel()
            for a, b in zip(lo, hi):
                if a and b:
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[rb] = ra
        components = len({find(a) for a in range(1, n + 1)})
    else:
        components = n
    if occ.ndim == 3:
        chi = _euler_characteristic(occ)
    else:
        chi = None
    return {
        "components": components,
        "euler_characteristic": chi,
        "occupied": int(occ.sum()),
        "is_ring": bool(components == 1 and chi == 0),
    }


def mi_domain_scan(
    model: ModelSpec,
    k_points,
    epsilon: float,
    t_max: float,
    dt: float = 1e-3,
    counts=(32, 32),
    threshold: float = 1.5,
    cadence: float = 0.05,
) -> list[dict]:
    """Classify each (kx, ky) as fission / no-fission / no-growth.

    Builds the doubly periodic datum on one period per axis, evolves to
    t_max, tracks peaks at the given cadence, and applies the fission
    detector; a point with no peak above threshold at any time is
    no-growth. Per-point failures are recorded and the scan continues.
    """
    from .initialdata import build_doubly_periodic
    from .solver import evolve

    results = []
    for kx, ky in k_points:
        entry = {"kx": float(kx), "ky": float(ky), "s": float(kx**2 - ky**2)}
        try:
            import warnings as _w

            grid = make_grid([2 * np.pi / kx, 2 * np.pi / ky], counts)
            with _w.catch_warnings():
                _w.simplefilter("ignore")
                f0 = build_doubly_periodic(epsilon, kx, ky, grid)
            records: list[PeakRecord] = []
            out_times = np.round(np.arange(cadence, t_max + cadence / 2, cadence), 10)
            cfg = SimulationConfig(
                model, grid, dt, t_max, tuple(out_times), conservation_cadence=10000
            )
            evolve(f0, model, cfg, sink=lambda fl: records.append(track_peaks(fl, threshold)))
            grew = any(r.n for r in records)
            if not grew:
                entry["classification"] = "no-growth"
            else:
                events = detect_fission_fusion(records)
                fission = [e for e in events if e.kind == "fission" and e.confidence == "high"]
                entry["classification"] = "fission" if fission else "no-fission"
                crest = [e for e in events if e.kind == "first-appearance-max"]
                if crest:
                    entry["t_crest"] = crest[0].time
                if fission:
                    entry["t_fission"] = fission[0].time
        except Exception as exc:  # noqa: BLE001 - per-point failures recorded
            log.warning("scan point (%.4g, %.4g) failed: %s", kx, ky, exc)
            entry["classification"] = "error"
            entry["error"] = str(exc)
        results.append(entry)
    return results
