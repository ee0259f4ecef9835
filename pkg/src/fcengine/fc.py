"""Fourier-coefficient data: a unipotent domain with an additive character.

An FC is a subspace V of the strictly upper triangular n x n matrices
(closed under the Lie bracket, i.e. the log of a unipotent subgroup
stable under coordinates we use) together with a linear functional on V
vanishing on [V, V].  V is stored as a reduced row echelon basis over
the root positions in (i, j)-lex order; each basis row carries the
character value of its generator.  Row operations act on character
values linearly, which is what makes conjugation bookkeeping exact.
"""

from fractions import Fraction

from . import coeffs as cf
from .coeffs import cadd, cdiv, ceq, cmul, cneg, is_zero
from .orbits import normalize_partition, transpose


class FCError(Exception):
    pass


class NotAGroup(FCError):
    """The stored span is not closed under the Lie bracket."""


class CharacterNotHomomorphism(FCError):
    """The character fails to vanish on [V, V]."""


class InconsistentCharacter(FCError):
    """Two generators with the same span disagree on character values."""


class TiedNontrivialGenerator(FCError):
    """A charged generator has multi-root support."""


class NotABase(FCError):
    """The charged roots do not form disjoint chains."""


class DegenerateSample(FCError):
    """A parameter sample kills or blows up a charged coefficient."""


class EmptyClass(FCError):
    """No FC exists over the requested block composition."""


class PartitionMismatch(FCError):
    """Block composition does not refine the requested partition."""


class StabilizerMismatch(FCError):
    """Outer rank differs from the number of threads of the inner FC."""


def _vec_add(acc, pos, c):
    cur = acc.get(pos)
    new = cadd(cur, c) if cur is not None else c
    if is_zero(new):
        acc.pop(pos, None)
    else:
        acc[pos] = new


def vec_scale(vec, c):
    return {p: cmul(v, c) for p, v in vec.items()}


def vec_sub_scaled(vec, other, c):
    """vec - c * other, dropping cancelled entries."""
    out = dict(vec)
    for p, v in other.items():
        _vec_add(out, p, cneg(cmul(c, v)))
    return out


def lie_bracket_vec(u, v):
    """Commutator uv - vu of two strictly upper sparse matrices."""
    out = {}
    for (i, j), a in u.items():
        for (k, l), b in v.items():
            if j == k:
                _vec_add(out, (i, l), cmul(a, b))
            if l == i:
                _vec_add(out, (k, j), cneg(cmul(a, b)))
    return out


def rref(pairs):
    """Reduced echelon form of (vector, charval) generators.

    Dependent generators must carry consistent character values.
    Returns rows sorted by pivot position.
    """
    pivot_rows = {}  # pivot pos -> [vec, charval]
    for vec, cv in pairs:
        vec = dict(vec)
        while vec:
            p = min(vec)
            hit = pivot_rows.get(p)
            if hit is None:
                c = vec[p]
                vec = vec_scale(vec, cdiv(1, c))
                cv = cmul(cv, cdiv(1, c))
                pivot_rows[p] = [vec, cv]
                cv = None
                break
            f = vec[p]
            vec = vec_sub_scaled(vec, hit[0], f)
            cv = cadd(cv, cneg(cmul(f, hit[1])))
        else:
            if cv is not None and not is_zero(cv):
                raise InconsistentCharacter(
                    "dependent generator with conflicting character value")
    order = sorted(pivot_rows)
    for idx in range(len(order) - 1, -1, -1):
        p = order[idx]
        vec, cv = pivot_rows[p]
        for q in order[idx + 1:]:
            f = vec.get(q)
            if f is None or q not in pivot_rows:
                continue
            ov, ocv = pivot_rows[q]
            vec = vec_sub_scaled(vec, ov, f)
            cv = cadd(cv, cneg(cmul(f, ocv)))
        pivot_rows[p] = [vec, cv]
    return [(pivot_rows[p][0], pivot_rows[p][1]) for p in order]


class FC:
    def __init__(self, n, rows, char, param_excl=None):
        self.n = n
        self.rows = rows
        self.char = char
        self.param_excl = dict(param_excl or {})

    @classmethod
    def make(cls, n, pairs, param_excl=None):
        for vec, _ in pairs:
            for (i, j) in vec:
                if not (1 <= i < j <= n):
                    raise FCError(f"position {(i, j)} outside strict upper GL_{n}")
        rows = rref(pairs)
        return cls(n, [r[0] for r in rows], [r[1] for r in rows], param_excl)

    # -- span queries ------------------------------------------------

    def pivots(self):
        return [min(r) for r in self.rows]

    def reduce(self, vec):
        """Reduce vec against the basis; (residual, character value used)."""
        vec = dict(vec)
        ell = 0
        for row, cv in zip(self.rows, self.char):
            p = min(row)
            f = vec.get(p)
            if f is None:
                continue
            vec = vec_sub_scaled(vec, row, f)
            ell = cadd(ell, cmul(f, cv))
        return vec, ell

    def contains(self, vec) -> bool:
        residual, _ = self.reduce(vec)
        return not residual

    def ell(self, vec):
        """Character value of a span member; FCError if vec is outside."""
        residual, ell = self.reduce(vec)
        if residual:
            raise FCError(f"vector not in the domain span: {sorted(residual)}")
        return ell

    def domain_dim(self) -> int:
        return len(self.rows)

    def live_params(self):
        names = set()
        for row, cv in zip(self.rows, self.char):
            for v in row.values():
                names.update(cf.free_params(v))
            names.update(cf.free_params(cv))
        return tuple(sorted(names))

    def with_rows(self, pairs, param_excl=None):
        return FC.make(self.n, pairs,
                       self.param_excl if param_excl is None else param_excl)

    def pairs(self):
        return list(zip([dict(r) for r in self.rows], list(self.char)))

    def equal(self, other) -> bool:
        if self.n != other.n or len(self.rows) != len(other.rows):
            return False
        for r1, c1, r2, c2 in zip(self.rows, self.char, other.rows, other.char):
            if set(r1) != set(r2):
                return False
            if not all(ceq(r1[p], r2[p]) for p in r1):
                return False
            if not ceq(c1, c2):
                return False
        return True

    # -- structural checks -------------------------------------------

    def validate(self):
        """Bracket closure and triviality of the character on [V, V]."""
        rows = self.rows
        for a in range(len(rows)):
            for b in range(a + 1, len(rows)):
                br = lie_bracket_vec(rows[a], rows[b])
                if not br:
                    continue
                residual, ell = self.reduce(br)
                if residual:
                    raise NotAGroup(
                        f"bracket of rows {min(rows[a])},{min(rows[b])} "
                        f"escapes the span at {sorted(residual)}")
                if not is_zero(ell):
                    raise CharacterNotHomomorphism(
                        f"character is {cf.to_str(ell)} != 0 on the bracket "
                        f"of rows {min(rows[a])},{min(rows[b])}")
        return self

    def support_roots(self):
        """(root, charval) for charged generators; charged rows must be plain."""
        out = []
        for row, cv in zip(self.rows, self.char):
            if is_zero(cv):
                continue
            if len(row) != 1:
                raise TiedNontrivialGenerator(
                    f"charged generator with support {sorted(row)}")
            out.append((next(iter(row)), cv))
        return out

    def in_R_nless(self) -> bool:
        from .lattice import root_less
        roots = [r for r, _ in self.support_roots()]
        for a in range(len(roots)):
            for b in range(a + 1, len(roots)):
                if root_less(roots[a], roots[b]) != "incomparable":
                    return False
        return True


# -- classification ---------------------------------------------------


def _chains(fc):
    """Charged roots grouped into chains by head-to-tail adjacency."""
    roots = sorted(r for r, _ in fc.support_roots())
    succ, pred = {}, {}
    by_head = {}
    for r in roots:
        if r[0] in by_head:
            raise NotABase(f"roots {by_head[r[0]]} and {r} share a row")
        by_head[r[0]] = r
    for r in roots:
        nxt = by_head.get(r[1])
        if nxt is not None:
            if r in succ or nxt in pred:
                raise NotABase(f"three charged roots share a chain node at {r[1]}")
            succ[r] = nxt
            pred[nxt] = r
    chains = []
    for r in roots:
        if r not in pred:
            chain = [r]
            while chain[-1] in succ:
                chain.append(succ[chain[-1]])
            chains.append(chain)
    return chains


def classify(fc):
    """Unordered class of an R_nless state: chain lengths + 1, padded with 1s."""
    if not fc.in_R_nless():
        raise FCError("classify requires a pairwise-incomparable charged support")
    chains = _chains(fc)
    parts = [len(c) + 1 for c in chains]
    covered = sum(parts)
    if covered > fc.n:
        raise NotABase("chains cover more positions than the ambient rank")
    parts += [1] * (fc.n - covered)
    return normalize_partition(parts)


def classify_ordered(fc, Q):
    """Ordered class over the composition Q: parts placed at the adjacent
    block pair their chain meets first; slots without a chain hold 1s."""
    if sum(Q) != fc.n:
        raise FCError(f"composition {Q} does not sum to {fc.n}")
    if not fc.in_R_nless():
        raise FCError("classify requires a pairwise-incomparable charged support")
    block = {}
    pos = 0
    for bi, sz in enumerate(Q):
        for _ in range(sz):
            pos += 1
            block[pos] = bi
    placed = []  # (slot key, first root, part)
    for chain in _chains(fc):
        keys = [block[i] for (i, j) in chain if block[j] == block[i] + 1]
        if not keys:
            raise NotABase(
                f"chain starting at {chain[0]} never crosses adjacent blocks of {Q}")
        placed.append((min(keys), chain[0], len(chain) + 1))
    placed.sort()
    ones = fc.n - sum(p for _, _, p in placed)
    out = []
    by_slot = {}
    for key, _, part in placed:
        by_slot.setdefault(key, []).append(part)
    for slot in range(len(Q) - 1):
        if slot in by_slot:
            out.extend(by_slot[slot])
        elif ones > 0:
            out.append(1)
            ones -= 1
    out.extend([1] * ones)
    return tuple(out)


def jordan_oracle(fc, sample=None):
    """Partition via ranks of powers of the transposed character matrix.

    Charged pivot values are evaluated at the rational sample point;
    vanishing or undefined values raise DegenerateSample.
    """
    sample = sample or {}
    entries = {}
    for row, cv in zip(fc.rows, fc.char):
        if is_zero(cv):
            continue
        val = cf.subs_params(cv, sample)
        if not cf.is_number(val):
            raise DegenerateSample(f"character value {cf.to_str(cv)} stays symbolic")
        if val == 0:
            raise DegenerateSample(f"sample kills the value at {min(row)}")
        i, j = min(row)
        entries[(j, i)] = Fraction(val)
    n = fc.n
    dense = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), v in entries.items():
        dense[i - 1][j - 1] = v

    def matmul(A, B):
        return [[sum((A[i][k] * B[k][j] for k in range(n)), Fraction(0))
                 for j in range(n)] for i in range(n)]

    def rank(A):
        M = [row[:] for row in A]
        r = 0
        for col in range(n):
            piv = next((i for i in range(r, n) if M[i][col] != 0), None)
            if piv is None:
                continue
            M[r], M[piv] = M[piv], M[r]
            f = M[r][col]
            M[r] = [x / f for x in M[r]]
            for i in range(n):
                if i != r and M[i][col] != 0:
                    g = M[i][col]
                    M[i] = [x - g * y for x, y in zip(M[i], M[r])]
            r += 1
        return r

    ranks = [n]
    P = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    while True:
        P = matmul(P, dense)
        r = rank(P)
        ranks.append(r)
        if r == 0:
            break
    lam_t = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    return transpose(lam_t)


# -- canonical orbit FCs ----------------------------------------------


def _block_data(blocks):
    """Start offset and member positions of each (0-indexed) block."""
    starts, pos = [], 1
    for sz in blocks:
        starts.append(pos)
        pos += sz
    return starts


def _threads(parts, blocks):
    """Slot assignment of threads over the block composition.

    Thread i (for the i-th largest part) lives in the blocks of size
    >= i+1... precisely {b : blocks[b] >= rank}, which is an interval for
    unimodal compositions.  Within a block, threads are ordered by
    (last block, first block, thread index).
    """
    windows = []
    for rank in range(1, len(parts) + 1):
        win = [b for b, sz in enumerate(blocks) if sz >= rank]
        if win != list(range(win[0], win[-1] + 1)):
            raise EmptyClass(f"thread window {win} not contiguous in {blocks}")
        if len(win) != parts[rank - 1]:
            raise PartitionMismatch(
                f"window of thread {rank} has length {len(win)} != {parts[rank - 1]}")
        windows.append((win[0], win[-1]))
    starts = _block_data(blocks)
    pos = {}
    for b in range(len(blocks)):
        members = [t for t, (f, l) in enumerate(windows) if f <= b <= l]
        members.sort(key=lambda t: (windows[t][1], windows[t][0], t))
        if len(members) != blocks[b]:
            raise PartitionMismatch(f"block {b} holds {len(members)} threads")
        for slot, t in enumerate(members):
            pos[(t, b)] = starts[b] + slot
    return windows, pos


def _unimodal(blocks) -> bool:
    diffs = [blocks[i + 1] - blocks[i] for i in range(len(blocks) - 1)]
    seen_drop = False
    for d in diffs:
        if d < 0:
            seen_drop = True
        elif d > 0 and seen_drop:
            return False
    return True


def build_orbit_fc(parts, variant="down", blocks=None):
    """Canonical FC of the given class over a block composition.

    variant 'down' uses increasing block sizes, 'up' decreasing, and
    'explicit' takes the composition as given (it must be unimodal and
    refine the transpose of the class).
    """
    parts = normalize_partition(parts)
    lam_t = transpose(parts)
    if variant == "down":
        blocks = sorted(lam_t)
    elif variant == "up":
        blocks = sorted(lam_t, reverse=True)
    elif variant == "explicit":
        blocks = list(blocks)
        if sorted(blocks, reverse=True) != list(lam_t):
            raise PartitionMismatch(
                f"blocks {blocks} are not a rearrangement of {lam_t}")
        if not _unimodal(blocks):
            raise EmptyClass(f"no such FC: {blocks} is not unimodal")
    else:
        raise FCError(f"unknown variant: {variant}")
    n = sum(parts)
    windows, pos = _threads(parts, blocks)
    charged = set()
    for t, (f, l) in enumerate(windows):
        for b in range(f, l):
            charged.add((pos[(t, b)], pos[(t, b + 1)]))
    starts = _block_data(blocks)
    block_of = {}
    for b, sz in enumerate(blocks):
        for k in range(sz):
            block_of[starts[b] + k] = b
    pairs = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if block_of[i] < block_of[j]:
                pairs.append(({(i, j): 1}, 1 if (i, j) in charged else 0))
    return FC.make(n, pairs).validate()


def _recover_structure(fc):
    """Blocks and threads of a canonical orbit FC, from its span and chains."""
    n = fc.n
    blocks, size = [], 1
    for i in range(1, n):
        if fc.contains({(i, i + 1): 1}):  # radical position: block boundary
            blocks.append(size)
            size = 1
        else:
            size += 1
    blocks.append(size)
    starts = _block_data(blocks)
    block_of = {}
    for b, sz in enumerate(blocks):
        for k in range(sz):
            block_of[starts[b] + k] = b
    chains = _chains(fc)
    threads = []
    used = set()
    for chain in chains:
        positions = [chain[0][0]] + [r[1] for r in chain]
        threads.append(positions)
        used.update(positions)
    for p in range(1, n + 1):
        if p not in used:
            threads.append([p])
    info = []
    for positions in threads:
        bl = [block_of[p] for p in positions]
        if bl != list(range(bl[0], bl[-1] + 1)):
            raise FCError(f"thread {positions} does not cross consecutive blocks")
        info.append({"first": bl[0], "last": bl[-1],
                     "pos": dict(zip(bl, positions))})
    info.sort(key=lambda t: (t["last"], t["first"], t["pos"][t["first"]]))
    return blocks, info


def convolution_build(outer, inner):
    """Convolve a generic rank-`outer` class against the inner FC.

    The inner class' threads index a GL_outer stabilizer; its root (r, s)
    contributes the sum of E at the (r, s) slot pair over all shared
    blocks, charged when s = r + 1.  The result is closed under brackets
    by adjoining commutators at character zero.
    """
    blocks, threads = _recover_structure(inner)
    m = len(threads)
    if outer != m:
        raise StabilizerMismatch(
            f"outer rank {outer} != thread count {m} of the inner class")
    pairs = inner.pairs()
    for r in range(m):
        for s in range(r + 1, m):
            shared = [b for b in threads[r]["pos"] if b in threads[s]["pos"]]
            if not shared:
                continue
            vec = {}
            for b in sorted(shared):
                i, j = threads[r]["pos"][b], threads[s]["pos"][b]
                if i >= j:
                    raise FCError(f"slot order violated at block {b}: {(i, j)}")
                vec[(i, j)] = 1
            pairs.append((vec, 1 if s == r + 1 else 0))
    fc = FC.make(inner.n, pairs)
    # close under brackets at character zero
    while True:
        new = []
        for a in range(len(fc.rows)):
            for b in range(a + 1, len(fc.rows)):
                br = lie_bracket_vec(fc.rows[a], fc.rows[b])
                if not br:
                    continue
                residual, _ = fc.reduce(br)
                if residual:
                    new.append((residual, 0))
        if not new:
            break
        fc = fc.with_rows(fc.pairs() + new)
    return fc.validate()
