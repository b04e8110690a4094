"""Sparse Gaussian elimination over K."""

from __future__ import annotations

from .ratfunc import RatFunc

__all__ = ["LinearSolution", "solve_linear"]


class LinearSolution:
    """Outcome of ``solve_linear``: a particular solution and the nullity."""

    __slots__ = ("values", "nullity", "consistent")

    def __init__(self, values, nullity: int, consistent: bool):
        self.values = values
        self.nullity = nullity
        self.consistent = consistent

    @property
    def unique(self) -> bool:
        return self.consistent and self.nullity == 0

    def __repr__(self):
        return f"LinearSolution(consistent={self.consistent}, nullity={self.nullity})"


def _weight(c: RatFunc) -> int:
    return len(c.num) + len(c.den)


def solve_linear(rows: list[dict], rhs: list, ncols: int) -> LinearSolution:
    """Solve sum_j rows[i][j] * u_j = rhs[i] exactly.

    ``rows`` are sparse {column: RatFunc}.  Pivots are picked by a Markowitz
    style score (short rows, simple entries) to limit fill-in.  Free unknowns
    are set to zero in the returned particular solution.
    """
    work = [(dict(r), rhs[i]) for i, r in enumerate(rows)]
    work = [(r, b) for r, b in work if r or b]
    pivots: list[tuple[int, dict, RatFunc]] = []
    while True:
        for r, b in work:
            if not r and b:
                return LinearSolution(None, 0, False)
        work = [(r, b) for r, b in work if r]
        if not work:
            break
        col_count: dict = {}
        for r, _ in work:
            for j in r:
                col_count[j] = col_count.get(j, 0) + 1
        best = None
        for idx, (r, _) in enumerate(work):
            for j, c in r.items():
                score = ((len(r) - 1) * (col_count[j] - 1), _weight(c))
                if best is None or score < best[0]:
                    best = (score, idx, j)
        _, idx, j = best
        prow, pb = work.pop(idx)
        inv = prow[j].inverse()
        prow = {k: v * inv for k, v in prow.items()}
        pb = pb * inv
        new_work = []
        for r, b in work:
            f = r.get(j)
            if f is None:
                new_work.append((r, b))
                continue
            nr = dict(r)
            del nr[j]
            for k, v in prow.items():
                if k == j:
                    continue
                s = nr.get(k)
                s = -(f * v) if s is None else s - f * v
                if s:
                    nr[k] = s
                else:
                    nr.pop(k, None)
            new_work.append((nr, b - f * pb))
        work = new_work
        pivots.append((j, prow, pb))
    values = [RatFunc.zero()] * ncols
    for j, prow, pb in reversed(pivots):
        acc = pb
        for k, v in prow.items():
            if k != j and values[k]:
                acc = acc - v * values[k]
        values[j] = acc
    return LinearSolution(values, ncols - len(pivots), True)
