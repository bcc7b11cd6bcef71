"""Exact simplex for the perimeter LP: maximize sum(r) subject to
r_i + r_j <= b_e on the edges of a constraint graph and r >= 0.

All right-hand sides are positive, so the slack basis is feasible and a
single-phase primal simplex suffices.  Arithmetic is exact rational on
inputs snapped to a 1e-12 grid; degenerate geometric ties (squares,
lattices) then resolve identically on every run.  Pivoting uses the
largest-reduced-cost rule with a Bland fallback after a generous pivot
budget, which guarantees termination without giving up speed.

gmpy2's rationals are used when available; fractions.Fraction otherwise.
"""

from dataclasses import dataclass

from .errors import InvalidInputError, MalformedGraphError

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 is normally present
    from fractions import Fraction as _Q

SNAP_DENOM = 10**12


def snap(x: float) -> "_Q":
    """Nearest rational on the 1e-12 grid."""
    return _Q(round(float(x) * SNAP_DENOM), SNAP_DENOM)


@dataclass
class PairLPResult:
    values: list  # exact rationals, one per variable
    objective: object  # exact rational
    tight_pairs: list  # edge indices with zero slack
    zero_vars: list  # variable indices at exactly 0


def solve_pair_lp(n: int, edges: list) -> PairLPResult:
    """Maximize sum of n variables subject to x_i + x_j <= w per edge, x >= 0.

    edges: list of (i, j, weight) with float weights (snapped internally).
    Unbounded means some variable appears in no edge, which is reported as
    a malformed graph.
    """
    if n <= 0:
        raise InvalidInputError("need at least one variable")
    m = len(edges)
    touched = [False] * n
    rows = []
    for i, j, w in edges:
        if not (0 <= i < n and 0 <= j < n and i != j):
            raise InvalidInputError(f"bad edge ({i}, {j})")
        b = snap(w)
        if b <= 0:
            raise InvalidInputError("edge weights must be positive")
        touched[i] = touched[j] = True
        rows.append((i, j, b))
    if not all(touched):
        missing = [i for i, t in enumerate(touched) if not t]
        raise MalformedGraphError(f"objective unbounded: vertices {missing[:5]} have no edge")

    zero = _Q(0)
    one = _Q(1)
    width = n + m + 1  # structural vars, slacks, rhs
    tab = []
    for r, (i, j, b) in enumerate(rows):
        row = [zero] * width
        row[i] = one
        row[j] = one
        row[n + r] = one
        row[-1] = b
        tab.append(row)
    # objective row holds negated reduced costs: start with -c
    obj = [-one] * n + [zero] * (m + 1)
    basis = [n + r for r in range(m)]

    bland_after = 50 * (m + n) + 1000
    it = 0
    while True:
        it += 1
        # entering column
        col = -1
        if it <= bland_after:
            best = zero
            for c in range(n + m):
                v = obj[c]
                if v < best:
                    best = v
                    col = c
        else:  # Bland: first improving column
            for c in range(n + m):
                if obj[c] < zero:
                    col = c
                    break
        if col < 0:
            break
        # ratio test; ties by smallest basic variable index (Bland-compatible)
        leave = -1
        best_ratio = None
        for r in range(m):
            a = tab[r][col]
            if a > zero:
                ratio = tab[r][-1] / a
                if best_ratio is None or ratio < best_ratio or (
                    ratio == best_ratio and basis[r] < basis[leave]
                ):
                    best_ratio = ratio
                    leave = r
        if leave < 0:
            raise MalformedGraphError("objective unbounded")
        piv = tab[leave][col]
        prow = tab[leave]
        if piv != one:
            inv = one / piv
            tab[leave] = prow = [v * inv for v in prow]
        for r in range(m):
            if r == leave:
                continue
            f = tab[r][col]
            if f != zero:
                row = tab[r]
                tab[r] = [row[c] - f * prow[c] for c in range(width)]
        f = obj[col]
        if f != zero:
            obj = [obj[c] - f * prow[c] for c in range(width)]
        basis[leave] = col

    values = [zero] * n
    for r, bv in enumerate(basis):
        if bv < n:
            values[bv] = tab[r][-1]
    objective = sum(values, zero)
    tight = []
    for r, (i, j, b) in enumerate(rows):
        if values[i] + values[j] == b:
            tight.append(r)
    zeros = [i for i in range(n) if values[i] == zero]
    return PairLPResult(values=values, objective=objective, tight_pairs=tight, zero_vars=zeros)
