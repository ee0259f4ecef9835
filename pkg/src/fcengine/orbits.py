"""Nilpotent orbit combinatorics: partitions, dominance, dimensions.

Partitions are tuples of positive ints sorted descending.  Ordered
classes (partition plus placement composition) compare through their
unordered projections.
"""

from fractions import Fraction


class OrbitError(Exception):
    pass


def normalize_partition(parts):
    p = tuple(sorted((int(x) for x in parts), reverse=True))
    if any(x <= 0 for x in p):
        raise OrbitError(f"not a partition: {parts}")
    return p


def transpose(p):
    p = normalize_partition(p)
    if not p:
        return ()
    return tuple(sum(1 for x in p if x >= j) for j in range(1, p[0] + 1))


def dominance_cmp(a, b):
    """'less', 'greater', 'equal' or 'incomparable' in the dominance order."""
    a, b = normalize_partition(a), normalize_partition(b)
    if sum(a) != sum(b):
        return "incomparable"
    la = max(len(a), len(b))
    pa = pb = 0
    le = ge = True
    for k in range(la):
        pa += a[k] if k < len(a) else 0
        pb += b[k] if k < len(b) else 0
        if pa > pb:
            le = False
        if pa < pb:
            ge = False
    if le and ge:
        return "equal"
    if le:
        return "less"
    if ge:
        return "greater"
    return "incomparable"


def orbit_dim(p) -> int:
    p = normalize_partition(p)
    n = sum(p)
    return n * n - sum(x * x for x in transpose(p))


def gk_dim(p) -> int:
    """Half the orbit dimension (always an integer)."""
    return orbit_dim(p) // 2


def partitions(n, max_part=None):
    """All partitions of n, descending parts, in reverse lex order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def jordan_matrix(p):
    """Upper Jordan form of type p as sparse {(i,j): 1}."""
    p = normalize_partition(p)
    m, off = {}, 0
    for part in p:
        for k in range(part - 1):
            m[(off + k + 1, off + k + 2)] = 1
        off += part
    return m


def centralizer_dim_oracle(p) -> int:
    """dim of the centralizer of a nilpotent of type p, by exact linear algebra.

    Solves XA = AX for A the Jordan matrix; returns n^2 - rank of the
    commutator system over Q.
    """
    p = normalize_partition(p)
    n = sum(p)
    A = jordan_matrix(p)
    idx = {(i, j): (i - 1) * n + (j - 1) for i in range(1, n + 1) for j in range(1, n + 1)}
    rows = []
    for pp in range(1, n + 1):
        for q in range(1, n + 1):
            row = {}
            # (XA - AX)[p][q] = sum_k X[p,k] A[k,q] - A[p,k] X[k,q]
            for (k, qq), v in A.items():
                if qq == q:
                    row[idx[(pp, k)]] = row.get(idx[(pp, k)], 0) + v
            for (ppp, k), v in A.items():
                if ppp == pp:
                    row[idx[(k, q)]] = row.get(idx[(k, q)], 0) - v
            row = {c: v for c, v in row.items() if v}
            if row:
                rows.append(row)
    return n * n - _sparse_rank(rows)


def _sparse_rank(rows):
    """Rank of sparse rows over Q (Fraction Gaussian elimination)."""
    pivots = {}  # col -> normalized row
    rank = 0
    for row in rows:
        row = {c: Fraction(v) for c, v in row.items()}
        while row:
            c = min(row)
            if c in pivots:
                f = row[c]
                for pc, pv in pivots[c].items():
                    nv = row.get(pc, Fraction(0)) - f * pv
                    if nv:
                        row[pc] = nv
                    else:
                        row.pop(pc, None)
            else:
                f = row[c]
                pivots[c] = {pc: pv / f for pc, pv in row.items()}
                rank += 1
                break
    return rank


def fmt_partition(p) -> str:
    """Exponent-grouped string, e.g. (4,1^2)."""
    p = tuple(p)
    out = []
    i = 0
    while i < len(p):
        j = i
        while j < len(p) and p[j] == p[i]:
            j += 1
        out.append(f"{p[i]}^{j - i}" if j - i > 1 else f"{p[i]}")
        i = j
    return "(" + ",".join(out) + ")"


def parse_partition(s) -> tuple:
    """Inverse of fmt_partition; also accepts ungrouped lists like 4,1,1."""
    s = s.strip().strip("()")
    parts = []
    if s:
        for tok in s.split(","):
            tok = tok.strip()
            if "^" in tok:
                base, exp = tok.split("^")
                parts.extend([int(base)] * int(exp))
            else:
                parts.append(int(tok))
    return normalize_partition(parts)


def strip_ones(seq):
    return tuple(x for x in seq if x != 1)


def same_up_to_ones(a, b) -> bool:
    """Equal ordered sequences after deleting parts equal to 1."""
    return strip_ones(a) == strip_ones(b) and sum(a) == sum(b)


def ordered_cmp(a, b):
    """Compare two ordered classes by their unordered projections."""
    return dominance_cmp(normalize_partition(a), normalize_partition(b))
