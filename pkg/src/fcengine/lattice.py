"""Root positions of GL_n, their order, brackets, and conjugation.

A root is a pair (i, j) with 1 <= i < j <= n, the position of the
elementary matrix E_ij.  Group elements are small typed wrappers; their
action on spans is by exact sparse matrix conjugation v -> g v g^-1.
"""

from dataclasses import dataclass

from .coeffs import cadd, cdiv, cmul, cneg, is_zero, parse_coeff, to_str


class LatticeError(Exception):
    pass


class LowerTriangularImage(LatticeError):
    """Conjugation would move a needed position onto or below the diagonal."""


class UnrepresentableDomain(LatticeError):
    """Image of a domain vector leaves the strictly upper triangular part."""


def check_root(r, n):
    i, j = r
    if not (1 <= i < j <= n):
        raise LatticeError(f"not a root position for GL_{n}: {r}")
    return (i, j)


def root_less(a, b) -> str:
    """Order two roots by whether their difference is again a root.

    a < b iff b - a is a positive root: same row with b strictly to the
    right, or same column with b strictly above.  Returns one of 'less',
    'greater', 'equal', 'incomparable'.  Two distinct roots are
    comparable exactly when they share a row or a column.
    """
    (i, j), (k, l) = a, b
    if a == b:
        return "equal"
    if (i == k and j < l) or (j == l and k < i):
        return "less"
    if (i == k and l < j) or (j == l and i < k):
        return "greater"
    return "incomparable"


def bracket(a, b):
    """[E_a, E_b] as (root, sign) or None when it vanishes."""
    (i, j), (k, l) = a, b
    if j == k and l != i:
        return ((i, l), 1)
    if l == i and j != k:
        return ((k, j), -1)
    return None


@dataclass(frozen=True)
class WeylPerm:
    """Permutation matrix; perm[i-1] = w(i)."""

    perm: tuple

    def __post_init__(self):
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise LatticeError(f"not a permutation: {self.perm}")

    def apply(self, i: int) -> int:
        return self.perm[i - 1]


@dataclass(frozen=True)
class TorusElem:
    """Diagonal matrix with the given nonzero entries."""

    diag: tuple

    def __post_init__(self):
        for d in self.diag:
            if is_zero(d):
                raise LatticeError("torus entry is zero")


@dataclass(frozen=True)
class UnipElem:
    """I + coeff * E_root; root may sit below the diagonal."""

    root: tuple
    coeff: object

    def __post_init__(self):
        i, j = self.root
        if i == j:
            raise LatticeError("unipotent root on the diagonal")


def elem_from_payload(d, n):
    kind = d["kind"]
    if kind == "unip":
        i, j = d["pos"]
        if not (1 <= i <= n and 1 <= j <= n):
            raise LatticeError(f"position out of range: {(i, j)}")
        return UnipElem((i, j), parse_coeff(d["coeff"]))
    if kind == "weyl":
        perm = tuple(d["perm"])
        if len(perm) != n:
            raise LatticeError("permutation length != n")
        return WeylPerm(perm)
    if kind == "torus":
        diag = tuple(parse_coeff(x) for x in d["diag"])
        if len(diag) != n:
            raise LatticeError("torus length != n")
        return TorusElem(diag)
    raise LatticeError(f"unknown element kind: {kind}")


def elem_to_payload(g):
    if isinstance(g, UnipElem):
        return {"kind": "unip", "pos": list(g.root), "coeff": to_str(g.coeff)}
    if isinstance(g, WeylPerm):
        return {"kind": "weyl", "perm": list(g.perm)}
    if isinstance(g, TorusElem):
        return {"kind": "torus", "diag": [to_str(d) for d in g.diag]}
    raise LatticeError(f"not an element: {g!r}")


def _vec_add(acc, pos, c):
    cur = acc.get(pos)
    new = cadd(cur, c) if cur is not None else c
    if is_zero(new):
        acc.pop(pos, None)
    else:
        acc[pos] = new


def conj_vec(g, vec: dict) -> dict:
    """g (sum c E_pos) g^-1 as a sparse {(i,j): coeff} over all of gl_n."""
    if isinstance(g, WeylPerm):
        return {(g.apply(i), g.apply(j)): c for (i, j), c in vec.items()}
    if isinstance(g, TorusElem):
        out = {}
        for (i, j), c in vec.items():
            out[(i, j)] = cmul(c, cdiv(g.diag[i - 1], g.diag[j - 1]))
        return out
    if isinstance(g, UnipElem):
        a, b = g.root
        t = g.coeff
        out = {}
        for (i, j), c in vec.items():
            # (I + tE_ab) E_ij (I - tE_ab)
            _vec_add(out, (i, j), c)
            if b == i:
                _vec_add(out, (a, j), cmul(t, c))
            if j == a:
                _vec_add(out, (i, b), cneg(cmul(t, c)))
            if b == i and j == a:
                _vec_add(out, (a, b), cneg(cmul(cmul(t, t), c)))
        return out
    raise LatticeError(f"not an element: {g!r}")


def conj_vec_upper(g, vec: dict, strict_cls=UnrepresentableDomain) -> dict:
    """conj_vec, raising if the image leaves the strictly upper triangle."""
    out = conj_vec(g, vec)
    for (i, j) in out:
        if i >= j:
            raise strict_cls(f"image has support at {(i, j)}")
    return out


def conj_root(g, root, coeff=1):
    """Image of coeff*E_root, as a sorted list of (root, coeff) terms.

    Weyl images below the diagonal raise LowerTriangularImage; unipotent
    or torus images that leave the upper triangle raise
    UnrepresentableDomain.
    """
    cls = LowerTriangularImage if isinstance(g, WeylPerm) else UnrepresentableDomain
    out = conj_vec_upper(g, {tuple(root): coeff}, strict_cls=cls)
    return sorted(out.items())
