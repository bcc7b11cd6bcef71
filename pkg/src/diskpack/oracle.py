"""Exact optimum for small instances by vertex enumeration.

The objective sum(r_i^d) is convex, so its maximum over the feasibility
polytope {r >= 0, r_i + r_j <= dist(i, j)} is attained at a vertex.  Every
vertex is the unique solution of n active constraints drawn from the pair
equalities r_i + r_j = dist(i, j) and the sign equalities r_i = 0.  We
enumerate all n-subsets, solve the square systems in batches, filter the
feasible solutions, and keep the best.  Costly, but it is the ground truth
the fast solvers are validated against.

The constraint matrices are 0/1 patterns that do not depend on the point
coordinates, so for n <= 7 the nonsingular subsets and their inverses are
computed once per (n, forced set) and reused across instances; an instance
then costs one batched matrix-vector product.  Larger n streams subsets.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapExceededError, InvalidInputError
from .geometry import (
    Instance,
    RadiusAssignment,
    distance_matrix,
    objective_power,
    shrink_to_feasible,
)

DEFAULT_N_CAP = 8

_CHUNK = 131072
_FEAS_TOL = 1e-9
_CACHE_MAX_N = 7
_pattern_cache: dict = {}


@dataclass(frozen=True)
class VertexCertificate:
    """The active constraint set that pins the returned optimum."""

    active: tuple  # entries ("pair", i, j) and ("zero", i)
    radii: tuple
    power: float


@dataclass(frozen=True)
class OracleResult:
    assignment: RadiusAssignment
    certificate: VertexCertificate


def _structure(n: int):
    """Constraint rows and labels: pairs (i<j) in lex order, then zeros."""
    m = n * (n - 1) // 2 + n
    rows = np.zeros((m, n))
    bits = np.zeros(m, dtype=np.int64)
    labels = []
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            rows[k, i] = rows[k, j] = 1.0
            bits[k] = (1 << i) | (1 << j)
            labels.append(("pair", i, j))
            k += 1
    for i in range(n):
        rows[k, i] = 1.0
        bits[k] = 1 << i
        labels.append(("zero", i))
        k += 1
    return rows, bits, labels


def _normalize_forced(n: int, forced_zero) -> tuple:
    fz = sorted(set(int(i) for i in forced_zero))
    for i in fz:
        if not 0 <= i < n:
            raise InvalidInputError(f"forced_zero index {i} out of range for n = {n}")
    return tuple(fz)


def _pattern_tables(n: int, fz: tuple):
    """Covered, nonsingular subset index array plus precomputed inverses.

    The determinant of a 0/1 constraint matrix is an integer, so the
    singularity test here is exact.
    """
    key = (n, fz)
    if key in _pattern_cache:
        return _pattern_cache[key]
    rows, bits, labels = _structure(n)
    zero_base = n * (n - 1) // 2
    forced_rows = tuple(zero_base + i for i in fz)
    free = [k for k in range(len(rows)) if k not in set(forced_rows)]
    pick = n - len(forced_rows)
    full_mask = (1 << n) - 1
    forced_bits = 0
    for k in forced_rows:
        forced_bits |= int(bits[k])

    kept_idx = []
    kept_inv = []
    combos = itertools.combinations(free, pick)
    while True:
        block = list(itertools.islice(combos, _CHUNK))
        if not block:
            break
        idx = np.asarray(block, dtype=np.int64)
        cover = np.bitwise_or.reduce(bits[idx], axis=1) | forced_bits
        idx = idx[cover == full_mask]
        if not len(idx):
            continue
        mats = rows[idx]
        if forced_rows:
            rep = np.broadcast_to(rows[list(forced_rows)], (len(idx), len(forced_rows), n))
            mats = np.concatenate([rep, mats], axis=1)
        dets = np.rint(np.linalg.det(mats))
        good = dets != 0
        idx, mats = idx[good], mats[good]
        if not len(idx):
            continue
        kept_idx.append(idx)
        kept_inv.append(np.linalg.inv(mats))
    idx = np.concatenate(kept_idx) if kept_idx else np.zeros((0, pick), dtype=np.int64)
    inv = np.concatenate(kept_inv) if kept_inv else np.zeros((0, n, n))
    tables = (idx, inv, labels, forced_rows)
    if n <= _CACHE_MAX_N:
        _pattern_cache[key] = tables
    return tables


def _vertex_solutions(instance: Instance, forced_zero=()):
    """Yield (radii_chunk, subset_rows_chunk, labels, forced_rows) over all
    feasible polytope vertices."""
    n = instance.n
    fz = _normalize_forced(n, forced_zero)
    dmat = distance_matrix(instance)
    iu, ju = np.triu_indices(n, k=1)
    pair_d = dmat[iu, ju]
    rhs = np.concatenate([pair_d, np.zeros(n)])

    if n <= _CACHE_MAX_N:
        idx, inv, labels, forced_rows = _pattern_tables(n, fz)
        nfz = len(forced_rows)
        for lo in range(0, len(idx), _CHUNK):
            sub = idx[lo : lo + _CHUNK]
            b = rhs[sub]
            if nfz:
                b = np.concatenate([np.zeros((len(sub), nfz)), b], axis=1)
            sol = np.matmul(inv[lo : lo + _CHUNK], b[:, :, None])[:, :, 0]
            feas = (sol >= -_FEAS_TOL).all(axis=1)
            feas &= (sol[:, iu] + sol[:, ju] <= pair_d + _FEAS_TOL).all(axis=1)
            if feas.any():
                yield sol[feas], sub[feas], labels, forced_rows
        return

    # streaming path for n = 8 (or any size past the cache)
    rows, bits, labels = _structure(n)
    zero_base = n * (n - 1) // 2
    forced_rows = tuple(zero_base + i for i in fz)
    free = [k for k in range(len(rows)) if k not in set(forced_rows)]
    pick = n - len(forced_rows)
    full_mask = (1 << n) - 1
    forced_bits = 0
    for k in forced_rows:
        forced_bits |= int(bits[k])
    combos = itertools.combinations(free, pick)
    while True:
        block = list(itertools.islice(combos, _CHUNK))
        if not block:
            return
        idx = np.asarray(block, dtype=np.int64)
        cover = np.bitwise_or.reduce(bits[idx], axis=1) | forced_bits
        idx = idx[cover == full_mask]
        if not len(idx):
            continue
        mats = rows[idx]
        vecs = rhs[idx]
        if forced_rows:
            nfz = len(forced_rows)
            rep = np.broadcast_to(rows[list(forced_rows)], (len(idx), nfz, n))
            mats = np.concatenate([rep, mats], axis=1)
            vecs = np.concatenate([np.zeros((len(idx), nfz)), vecs], axis=1)
        dets = np.rint(np.linalg.det(mats))
        good = dets != 0
        idx, mats, vecs = idx[good], mats[good], vecs[good]
        if not len(idx):
            continue
        sol = np.linalg.solve(mats, vecs[:, :, None])[:, :, 0]
        feas = (sol >= -_FEAS_TOL).all(axis=1)
        feas &= (sol[:, iu] + sol[:, ju] <= pair_d + _FEAS_TOL).all(axis=1)
        if feas.any():
            yield sol[feas], idx[feas], labels, forced_rows


def solve_exact(instance: Instance, n_cap: int = DEFAULT_N_CAP, forced_zero=()) -> OracleResult:
    """Exact optimum by full vertex enumeration; refuses n beyond n_cap.

    Points in forced_zero keep radius 0 but still constrain the others.
    On ties the vertex with the lexicographically largest radii wins.
    """
    n = instance.n
    if n > n_cap:
        raise CapExceededError(f"oracle handles n <= {n_cap}, got n = {n}")
    d = instance.dimension
    best_power = -1.0
    best_radii = None
    best_active = None
    for sol, idx, labels, forced_rows in _vertex_solutions(instance, forced_zero):
        powers = (np.clip(sol, 0.0, None) ** d).sum(axis=1)
        top = float(powers.max())
        if top < best_power:
            continue
        for k in np.flatnonzero(powers == top):
            radii = tuple(np.clip(sol[k], 0.0, None))
            if (
                best_radii is None
                or top > best_power
                or (top == best_power and radii > best_radii)
            ):
                best_power = top
                best_radii = radii
                best_active = tuple(labels[t] for t in forced_rows) + tuple(
                    labels[t] for t in idx[k]
                )
    if best_radii is None:
        raise InvalidInputError("no feasible vertex found; instance is malformed")
    repaired = shrink_to_feasible(instance, np.asarray(best_radii))
    assignment = RadiusAssignment(instance, repaired, "oracle")
    cert = VertexCertificate(active=best_active, radii=best_radii, power=objective_power(assignment))
    return OracleResult(assignment=assignment, certificate=cert)


def enumerate_optima(
    instance: Instance,
    n_cap: int = DEFAULT_N_CAP,
    forced_zero=(),
    value_tol: float = 1e-9,
    round_decimals: int = 9,
) -> tuple[float, list]:
    """All distinct radii vectors attaining the maximum power (within
    value_tol), deduplicated after rounding.  Used by the gadget verifiers
    to count maximum configurations."""
    n = instance.n
    if n > n_cap:
        raise CapExceededError(f"oracle handles n <= {n_cap}, got n = {n}")
    d = instance.dimension
    best = -1.0
    pool: list[tuple[float, tuple]] = []
    for sol, idx, labels, forced_rows in _vertex_solutions(instance, forced_zero):
        powers = (np.clip(sol, 0.0, None) ** d).sum(axis=1)
        top = float(powers.max())
        if top > best:
            best = top
            pool = [(p, r) for p, r in pool if p >= best - value_tol]
        keep = np.flatnonzero(powers >= best - value_tol)
        for k in keep:
            pool.append((float(powers[k]), tuple(np.clip(sol[k], 0.0, None))))
    seen = {}
    for p, r in pool:
        if p < best - value_tol:
            continue
        key = tuple(np.round(r, round_decimals))
        if key not in seen:
            seen[key] = np.asarray(r)
    return best, sorted(seen.values(), key=lambda v: tuple(v))


def upper_bound_by_partition(instance: Instance, parts, n_cap: int = DEFAULT_N_CAP) -> float:
    """Sum of exact optima over a partition of the points.

    Any feasible assignment restricted to a part is feasible for that part
    alone, so the sum of part optima bounds the full optimum from above.
    Parts must be disjoint, cover every index, and hold at least 2 points
    (a lone point would make the bound vacuous).
    """
    seen: set[int] = set()
    norm = []
    for part in parts:
        idx = sorted(int(i) for i in part)
        if len(idx) < 2:
            raise InvalidInputError("partition parts need at least 2 points each")
        if len(idx) > n_cap:
            raise CapExceededError(f"partition part of size {len(idx)} exceeds oracle cap {n_cap}")
        if seen.intersection(idx):
            raise InvalidInputError("partition parts overlap")
        seen.update(idx)
        norm.append(idx)
    if seen != set(range(instance.n)):
        raise InvalidInputError("partition must cover every point index")
    total = 0.0
    for idx in norm:
        sub = instance.subset(idx)
        total += objective_power(solve_exact(sub, n_cap=n_cap).assignment)
    return total
