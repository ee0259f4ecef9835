"""Constructive conjugation and the partition bookkeeping around it.

Four jobs live here: normalizing a full-radical character to pairwise
incomparable support (swept block pair by block pair with solved
clearing elements), emitting a replayable script that reaches a given
incomparable character from the canonical start of its orbit, the
two-step recursion for the candidate partition sets together with the
dimension filter on top of it, and a brute-force conjugacy search used
to double-check prose-level equivalence claims.

Clearing coefficients are never hard-coded: the charge moved by a
one-parameter element is affine in the coefficient here, so two
character evaluations pin each solution exactly.
"""

import itertools
from functools import lru_cache
from math import comb

from . import coeffs as cf
from .coeffs import is_zero
from .corpus import fn_script
from .engine import conjugate
from .fc import FCError, build_orbit_fc, classify
from .lattice import LatticeError, TorusElem, UnipElem, WeylPerm, conj_vec
from .orbits import gk_dim, normalize_partition


class AlgosError(Exception):
    pass


class NotRadicalDomain(AlgosError):
    """The domain is not the full radical of a block composition."""


class NotNless(AlgosError):
    """The character's support is not pairwise incomparable."""


class OrbitMismatch(AlgosError):
    """The requested partition is not the target's orbit class."""


class BudgetExceeded(AlgosError):
    """The search stopped before exhausting its candidate space."""


# -- candidate partition sets ------------------------------------------


class ASet:
    """Ordered candidate partitions attached to (n, k)."""

    def __init__(self, n, k, elements):
        self.n = n
        self.k = k
        self.elements = tuple(tuple(int(p) for p in e) for e in elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, item):
        return tuple(item) in self.elements

    def __eq__(self, other):
        return (isinstance(other, ASet)
                and (self.n, self.k) == (other.n, other.k)
                and set(self.elements) == set(other.elements))

    def __repr__(self):
        body = ", ".join("(" + ",".join(map(str, e)) + ")"
                         for e in self.elements)
        return f"ASet(n={self.n}, k={self.k}, {{{body}}})"


def _f0(part):
    return (part[0] + 1, 1) + tuple(part[1:])


def _f1(part, k):
    return (k + 1, part[0] - k + 3) + tuple(part[1:])


@lru_cache(maxsize=None)
def _an_elements(n, k, op):
    if n == 2:
        return ((k + 1, 1),)
    if n == 3:
        return ((k + 2, 1, 1), (k + 1, 3))
    img0 = tuple(_f0(p) for p in _an_elements(n - 1, k, op))
    img1 = tuple(_f1(p, k) for p in _an_elements(n - 2, k, op))
    if op == "union":
        return img0 + tuple(p for p in img1 if p not in img0)
    return tuple(p for p in img0 if p in img1)


def an_sets(n, k=2, op="union"):
    """Candidate ordered partitions for the (n, k) family.

    Each element sums to 2n + k - 2, in generation order: one-step
    lifts first, then the two-step ones.  The one-step image always
    leads with a part >= k + 2 and the two-step image with exactly
    k + 1, so the two are disjoint and "intersection" comes out empty
    from n = 4 on; "union" is the default and the other reading stays
    selectable so reports can surface the difference.
    """
    if n < 2 or k < 2:
        raise ValueError(f"A-sets need n >= 2 and k >= 2, got ({n}, {k})")
    if op not in ("union", "intersection"):
        raise ValueError(f"unknown combination operator: {op!r}")
    return ASet(n, k, _an_elements(n, k, op))


def fn_domain_dim(n, k=2):
    """Domain dimension of the (n, k) convolution family member."""
    return comb(k - 2, 2) + 2 * n * (k - 2) + n * n + n * (n - 1) // 2


def finite_candidates(n, k=2, op="union"):
    """A-set members whose orbit dimension matches the family domain."""
    dom = fn_domain_dim(n, k)
    keep = [a for a in an_sets(n, k, op)
            if gk_dim(normalize_partition(a)) == dom]
    return ASet(n, k, keep)


def fn_script_generate(n, k=2):
    """Replayable derivation script for the (n, k) family member."""
    if n < 2 or k < 2:
        raise ValueError(f"family scripts need n >= 2 and k >= 2, got ({n}, {k})")
    return fn_script(n, k)


# -- solved one-parameter elements -------------------------------------


def _kill_coeff(fc, pos, target):
    """Coefficient c killing the charge at target under u = 1 + c E_pos.

    The transported charge is ell(u^-1 w u), affine in c for the
    element/target pairs used here; evaluate at c = 0 and c = 1 and
    solve.  None when no coefficient works (or the probe leaves the
    domain span, or the dependence fails to stay affine).
    """
    try:
        base = fc.ell({target: 1})
        shifted = fc.ell(conj_vec(UnipElem(pos, -1), {target: 1}))
    except FCError:
        return None
    slope = cf.csub(shifted, base)
    if is_zero(slope):
        return None
    c = cf.cdiv(cf.cneg(base), slope)
    try:
        check = fc.ell(conj_vec(UnipElem(pos, cf.cneg(c)), {target: 1}))
    except FCError:
        return None
    if not is_zero(check):
        return None
    return c


def _transposition(n, a, b):
    perm = list(range(1, n + 1))
    perm[a - 1], perm[b - 1] = b, a
    return perm


# -- normalization to incomparable support -----------------------------


def _radical_roots(parts):
    block = _block_index(parts)
    n = sum(parts)
    return {(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
            if block[i] < block[j]}


def _block_index(parts):
    block = {}
    nxt = 1
    for b, size in enumerate(parts):
        for _ in range(size):
            block[nxt] = b
            nxt += 1
    return block


def _composition_of(fc):
    """Composition whose full radical is the domain, else None."""
    roots = set()
    for row, _ in fc.pairs():
        if len(row) != 1:
            return None
        roots.add(next(iter(row)))
    parts = []
    size = 1
    for i in range(1, fc.n):
        if (i, i + 1) in roots:
            parts.append(size)
            size = 1
        else:
            size += 1
    parts.append(size)
    if roots != _radical_roots(parts):
        return None
    return parts


def _front_perm(n, start, size, lead):
    """Permutation of one block moving the lead columns to its front."""
    cols = list(range(start, start + size))
    order = list(lead) + [c for c in cols if c not in lead]
    perm = list(range(1, n + 1))
    for newpos, old in zip(cols, order):
        perm[old - 1] = newpos
    if perm == list(range(1, n + 1)):
        return None
    return perm


def nless_normalize(fc):
    """Conjugate a full-radical character to incomparable support.

    Returns (elems, result): block-diagonal elements, upper unipotent
    in the first block, whose sequential conjugation turns fc into
    result, and result itself with pairwise incomparable charged roots.

    The charge rectangle of each adjacent block pair is swept top left
    first: a row with no remaining charge drops out; otherwise the row
    is rotated so its first active column is charged, the rest of the
    row is cleared by lower elements of the column block, the rest of
    the column by upper elements of the row block, and the position is
    pinned.  Clearing inside block t leaks charge into the finished
    rectangle on its left, but the pinned columns there were compacted
    to the front of the block, so the leak always lands on a pinned
    column and a solved element one level down removes it, recursively.
    """
    parts = _composition_of(fc)
    if parts is None:
        raise NotRadicalDomain(
            "domain is not the full unipotent radical of a composition")
    fc.validate()
    if fc.in_R_nless():
        return [], fc

    starts = []
    s = 1
    for p in parts:
        starts.append(s)
        s += p

    elems = []
    cur = fc

    def push(g):
        nonlocal cur
        cur = conjugate(cur, [g])
        elems.append(g)

    def charge(pos):
        return cur.ell({pos: 1})

    def clear(pos, target):
        c = _kill_coeff(cur, pos, target)
        if c is None:
            raise AlgosError(f"no element at {pos} clears {target}")
        push(UnipElem(pos, c))

    pinrows = {}
    pincols = {}

    def cascade(t, lo, hi):
        # an element inside block t mixed column lo <- hi of the
        # finished rectangle on its left; restore its pinned shape
        if t == 0:
            return
        cols, rows = pincols[t - 1], pinrows[t - 1]
        if hi not in cols:
            return
        src = rows[cols.index(hi)]
        if is_zero(charge((src, lo))):
            return
        # lo < hi and the pins sit at the block front, so lo is pinned
        comp = rows[cols.index(lo)]
        clear((comp, src), (src, lo))
        cascade(t - 1, comp, src)

    for t in range(len(parts) - 1):
        rows_active = list(range(starts[t], starts[t] + parts[t]))
        cols_active = list(range(starts[t + 1], starts[t + 1] + parts[t + 1]))
        prow, pcol = [], []
        while rows_active and cols_active:
            r = rows_active[0]
            hot = [j for j in cols_active if not is_zero(charge((r, j)))]
            if not hot:
                rows_active.pop(0)
                continue
            c0 = cols_active[0]
            if hot[0] != c0:
                push(WeylPerm(_transposition(cur.n, hot[0], c0)))
            for j in cols_active[1:]:
                if not is_zero(charge((r, j))):
                    clear((j, c0), (r, j))
            for i in rows_active[1:]:
                if not is_zero(charge((i, c0))):
                    clear((r, i), (i, c0))
                    cascade(t, r, i)
            prow.append(r)
            pcol.append(c0)
            rows_active.pop(0)
            cols_active.pop(0)
        perm = _front_perm(cur.n, starts[t + 1], parts[t + 1], pcol)
        if perm is not None:
            push(WeylPerm(perm))
            pcol = list(range(starts[t + 1], starts[t + 1] + len(pcol)))
        pinrows[t] = prow
        pincols[t] = pcol

    if not cur.in_R_nless():
        raise AlgosError("normalization did not reach incomparable support")
    return elems, cur


# -- scripts from the canonical orbit start ----------------------------


def _chain_nodes(fc):
    """Charged roots grouped head to tail: list of (nodes, values)."""
    sup = fc.support_roots()
    nxt = {a: (b, v) for (a, b), v in sup}
    tails = {b for (a, b), _ in sup}
    chains = []
    for (a, b), _ in sorted(sup):
        if a in tails:
            continue
        nodes = [a]
        vals = []
        while nodes[-1] in nxt:
            b, v = nxt[nodes[-1]]
            nodes.append(b)
            vals.append(v)
        chains.append((nodes, vals))
    return chains


def _triangles(chains):
    out = set()
    for nodes, _ in chains:
        for x in range(len(nodes)):
            for y in range(x + 1, len(nodes)):
                out.add((nodes[x], nodes[y]))
    return out


def _indicator(n, j):
    v = [0] * n
    v[j - 1] = 1
    return v


def smallc_construct(target, lam):
    """Script from the canonical descending start of orbit lam to target.

    The records replay in module engine: the start keeps only the
    triangles spanned by its charge threads (single-root constant-term
    drops, short spans first, so every intermediate stays bracket
    closed), one block-diagonal permutation carries those threads onto
    the target's, a torus sets the charge values, and the target's
    radical is refilled (long spans first).
    """
    t_parts = _composition_of(target)
    if t_parts is None:
        raise NotNless("target domain is not the full radical of a composition")
    target.validate()
    if not target.in_R_nless():
        raise NotNless("target support is not pairwise incomparable")
    lam_n = normalize_partition(lam)
    cls = classify(target)
    if cls != lam_n:
        raise OrbitMismatch(f"target classifies as {cls}, not {lam_n}")

    n = target.n
    header = {"fcs": 1, "n": n,
              "label": "smallc-" + "-".join(map(str, lam_n)),
              "init": {"kind": "orbit", "partition": [int(p) for p in lam_n],
                       "variant": "down"}}
    source = build_orbit_fc(lam_n, "down")
    if target.equal(source):
        return [header]

    records = [header]
    at = "root"
    count = 0

    def emit(rec):
        # key order matches the bundled scripts: op (mode) at ... as
        nonlocal at, count
        count += 1
        out = {"op": rec.pop("op")}
        if "mode" in rec:
            out["mode"] = rec.pop("mode")
        out["at"] = at
        out.update(rec)
        out["as"] = f"v{count}"
        at = out["as"]
        records.append(out)

    s_chains = _chain_nodes(source)
    t_chains = _chain_nodes(target)
    s_parts = _composition_of(source)

    keep = _triangles(s_chains)
    for (i, j) in sorted(_radical_roots(s_parts) - keep,
                         key=lambda r: (r[1] - r[0], r)):
        emit({"op": "cts", "roots": [[i, j]], "cochars": [_indicator(n, j)],
              "mode": "drop"})

    def order(chain):
        return (-len(chain[0]), chain[0][0])

    s_sorted = sorted(s_chains, key=order)
    t_sorted = sorted(t_chains, key=order)
    if [len(c[0]) for c in s_sorted] != [len(c[0]) for c in t_sorted]:
        raise AlgosError("thread lengths of source and target disagree")
    perm = list(range(1, n + 1))
    used_s, used_t = set(), set()
    for (s_nodes, _), (t_nodes, _) in zip(s_sorted, t_sorted):
        for a, b in zip(s_nodes, t_nodes):
            perm[a - 1] = b
        used_s.update(s_nodes)
        used_t.update(t_nodes)
    rest_s = [i for i in range(1, n + 1) if i not in used_s]
    rest_t = [i for i in range(1, n + 1) if i not in used_t]
    for a, b in zip(rest_s, rest_t):
        perm[a - 1] = b
    if perm != list(range(1, n + 1)):
        emit({"op": "conjugate", "g": [{"kind": "weyl", "perm": perm}]})

    diag = [1] * (n + 1)
    scaled = False
    for t_nodes, t_vals in t_sorted:
        for idx, v in enumerate(t_vals):
            a, b = t_nodes[idx], t_nodes[idx + 1]
            diag[b] = cf.cmul(v, diag[a])
            if not cf.ceq(v, 1):
                scaled = True
    if scaled:
        emit({"op": "conjugate",
              "g": [{"kind": "torus",
                     "diag": [cf.to_str(d) for d in diag[1:]]}]})

    keep_t = _triangles(t_chains)
    for (i, j) in sorted(_radical_roots(t_parts) - keep_t,
                         key=lambda r: (r[0] - r[1], r)):
        emit({"op": "cts", "roots": [[i, j]], "cochars": [_indicator(n, j)],
              "mode": "adjoin"})
    return records


# -- brute-force conjugacy search --------------------------------------


def _torus_match(n, have, want):
    """Torus diagonal carrying the charge values `have` to `want`."""
    ratio = {r: cf.cdiv(want[r], have[r]) for r in have}
    adj = {}
    for (i, j), rho in ratio.items():
        adj.setdefault(i, []).append((j, rho, True))
        adj.setdefault(j, []).append((i, rho, False))
    val = {}
    for start in range(1, n + 1):
        if start in val or start not in adj:
            continue
        val[start] = 1
        stack = [start]
        while stack:
            x = stack.pop()
            for (y, rho, fwd) in adj[x]:
                dy = cf.cmul(val[x], rho) if fwd else cf.cdiv(val[x], rho)
                if y in val:
                    if not cf.ceq(val[y], dy):
                        return None
                else:
                    val[y] = dy
                    stack.append(y)
    return [val.get(i, 1) for i in range(1, n + 1)]


def _align(fc1, fc2, perm):
    """Witness starting with the given permutation, or None.

    After the permutation, charges that fc2 does not carry are removed
    greedily by solved single-root elements (first workable root in
    lexicographic order), then one solved torus matches the values.
    """
    n = fc1.n
    elems = []
    cur = fc1
    if perm != list(range(1, n + 1)):
        g = WeylPerm(perm)
        try:
            cur = conjugate(fc1, [g])
        except (FCError, LatticeError):
            return None
        elems = [g]
    try:
        want = dict(fc2.support_roots())
    except FCError:
        return None
    for _ in range(4 * n * n):
        try:
            have = dict(cur.support_roots())
        except FCError:
            return None
        extras = sorted(set(have) - set(want))
        if not extras:
            break
        step = None
        for pos in itertools.permutations(range(1, n + 1), 2):
            c = _kill_coeff(cur, pos, extras[0])
            if c is None or is_zero(c):
                continue
            g = UnipElem(pos, c)
            try:
                nxt = conjugate(cur, [g])
            except (FCError, LatticeError):
                continue
            step = (g, nxt)
            break
        if step is None:
            return None
        g, cur = step
        elems.append(g)
    else:
        return None
    have = dict(cur.support_roots())
    if set(have) != set(want):
        return None
    if not cur.equal(fc2):
        diag = _torus_match(n, have, want)
        if diag is None:
            return None
        g = TorusElem(diag)
        try:
            cur = conjugate(cur, [g])
        except (FCError, LatticeError):
            return None
        elems.append(g)
    if cur.equal(fc2):
        return elems
    return None


def conjugator_search(fc1, fc2, budget=None):
    """Element list g with conjugate(fc1, g) equal to fc2.

    Candidates are permutations in lexicographic order (identity
    first), each extended by a greedy run of solved single-root
    elements and one solved torus.  Returns [] for equal inputs, None
    when the whole space was enumerated without a hit, and raises
    BudgetExceeded after `budget` permutation candidates.  Without a
    budget the rank must stay enumerable (n <= 6).
    """
    if fc1.n != fc2.n or fc1.domain_dim() != fc2.domain_dim():
        return None
    if fc1.equal(fc2):
        return []
    n = fc1.n
    cap = None
    if budget is None:
        if n > 6:
            raise BudgetExceeded(
                f"{n}! permutation candidates; pass an explicit budget")
    else:
        cap = int(budget)
    tried = 0
    for perm in itertools.permutations(range(1, n + 1)):
        if cap is not None and tried >= cap:
            raise BudgetExceeded(f"gave up after {tried} candidates")
        tried += 1
        found = _align(fc1, fc2, list(perm))
        if found is not None:
            return found
    return None
