"""Exact scalar arithmetic for domain and character coefficients.

Values stay plain ``int``/``Fraction`` until a named parameter enters, at
which point they become sympy expressions.  Every helper accepts both
representations; nothing else in the package touches sympy directly.
"""

from fractions import Fraction

import sympy


def is_number(c):
    return isinstance(c, (int, Fraction))


def param(name: str):
    """A named free parameter (a1, a2, ...)."""
    return sympy.Symbol(name)


def promote(c):
    if is_number(c):
        return sympy.Rational(c)
    return c


def demote(c):
    """Collapse a parameter-free sympy value back to Fraction/int."""
    if is_number(c):
        return c
    if not c.free_symbols:
        r = sympy.nsimplify(c, rational=True) if not c.is_Rational else c
        r = sympy.Rational(r)
        return int(r) if r.q == 1 else Fraction(r.p, r.q)
    return c


def cadd(a, b):
    if is_number(a) and is_number(b):
        r = Fraction(a) + Fraction(b)
        return int(r) if r.denominator == 1 else r
    return demote(sympy.cancel(promote(a) + promote(b)))


def cneg(a):
    if is_number(a):
        return -a
    return -a


def csub(a, b):
    return cadd(a, cneg(b))


def cmul(a, b):
    if is_number(a) and is_number(b):
        r = Fraction(a) * Fraction(b)
        return int(r) if r.denominator == 1 else r
    return demote(sympy.cancel(promote(a) * promote(b)))


def cdiv(a, b):
    if is_number(a) and is_number(b):
        r = Fraction(a) / Fraction(b)
        return int(r) if r.denominator == 1 else r
    return demote(sympy.cancel(promote(a) / promote(b)))


def is_zero(c) -> bool:
    if is_number(c):
        return c == 0
    return sympy.cancel(c) == 0


def ceq(a, b) -> bool:
    return is_zero(csub(a, b))


def free_params(c):
    """Sorted names of parameters appearing in c."""
    if is_number(c):
        return ()
    return tuple(sorted(s.name for s in c.free_symbols))


def subs_params(c, mapping):
    """Substitute {name: coeff} into c and demote if parameter-free."""
    if is_number(c) or not mapping:
        return c
    sub = {sympy.Symbol(k): promote(v) for k, v in mapping.items()}
    return demote(sympy.cancel(promote(c).subs(sub)))


def to_str(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def parse_coeff(s):
    """Parse a coefficient string: plain rationals fast, sympy otherwise."""
    if isinstance(s, int):
        return s
    s = s.strip()
    try:
        r = Fraction(s)
        return int(r) if r.denominator == 1 else r
    except ValueError:
        pass
    expr = sympy.sympify(s, rational=True)
    return demote(sympy.cancel(expr))
