"""Truncated exponential generating functions with exact rational coefficients."""

from __future__ import annotations

import ast
import math
from fractions import Fraction

DEFAULT_ORDER = 12


class EGF:
    """``sum c_n t^n`` for ``n <= order``.  ``dims()`` gives ``n! c_n``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is not None:
            cs = (cs + [Fraction(0)] * (order + 1))[: order + 1]
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def t(cls, order=DEFAULT_ORDER) -> EGF:
        return cls([0, 1], order)

    @classmethod
    def constant(cls, c, order=DEFAULT_ORDER) -> EGF:
        return cls([c], order)

    @classmethod
    def from_dims(cls, dims, order=None) -> EGF:
        """Series with ``dims[n-1] / n!`` at ``t^n``."""
        cs = [0] + [Fraction(d, math.factorial(n)) for n, d in enumerate(dims, start=1)]
        return cls(cs, order if order is not None else len(dims))

    def __getitem__(self, n):
        return self.coeffs[n]

    def __eq__(self, other):
        if not isinstance(other, EGF):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"EGF({[str(c) for c in self.coeffs]})"

    def _check(self, other: EGF):
        if other.order != self.order:
            raise ValueError(f"truncation orders differ: {self.order} vs {other.order}")

    def _lift(self, other):
        if isinstance(other, EGF):
            self._check(other)
            return other
        return EGF.constant(other, self.order)

    def __add__(self, other):
        other = self._lift(other)
        return EGF([a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return EGF([-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, EGF):
            return EGF([a * Fraction(other) for a in self.coeffs])
        self._check(other)
        n = self.order
        a, b = self.coeffs, other.coeffs
        return EGF([sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n + 1)])

    __rmul__ = __mul__

    def scale(self, c) -> EGF:
        return self * Fraction(c)

    def __pow__(self, k: int) -> EGF:
        if k < 0:
            return self.reciprocal() ** (-k)
        out = EGF.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def reciprocal(self) -> EGF:
        a = self.coeffs
        if not a[0]:
            raise ValueError("constant term is zero; series is not invertible")
        b = [1 / a[0]]
        for k in range(1, self.order + 1):
            b.append(-sum(a[i] * b[k - i] for i in range(1, k + 1)) / a[0])
        return EGF(b)

    def __truediv__(self, other):
        if not isinstance(other, EGF):
            return self * (1 / Fraction(other))
        return self * other.reciprocal()

    def derivative(self) -> EGF:
        return EGF([k * self.coeffs[k] for k in range(1, self.order + 1)], self.order)

    def shift_down(self) -> EGF:
        """``f(t) / t`` for ``f(0) = 0``, with a zero appended at the top."""
        if self.coeffs[0]:
            raise ValueError("f(0) must vanish to divide by t")
        return EGF(self.coeffs[1:], self.order)

    def compose(self, g: EGF) -> EGF:
        """``self(g(t))``; requires ``g(0) = 0`` (Horner scheme)."""
        self._check(g)
        if g.coeffs[0]:
            raise ValueError("inner series must have zero constant term")
        out = EGF.constant(self.coeffs[-1], self.order)
        for c in reversed(self.coeffs[:-1]):
            out = out * g + c
        return out

    def to_dims(self) -> list[int | Fraction]:
        """``n! c_n`` for ``n = 1..order``."""
        out = []
        for n in range(1, self.order + 1):
            v = self.coeffs[n] * math.factorial(n)
            out.append(int(v) if v.denominator == 1 else v)
        return out


def exp(f: EGF) -> EGF:
    """``exp(f)`` for ``f(0) = 0``, via ``E' = f' E``."""
    if f.coeffs[0]:
        raise ValueError("exp needs f(0) = 0")
    n = f.order
    df = [k * f.coeffs[k] for k in range(n + 1)]
    e = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        e[k] = sum(df[i] * e[k - i] for i in range(1, k + 1)) / k
    return EGF(e)


def log1p(f: EGF) -> EGF:
    """``log(1 + f)`` for ``f(0) = 0``."""
    if f.coeffs[0]:
        raise ValueError("log1p needs f(0) = 0")
    g = (f + 1).reciprocal() * f.derivative()
    return EGF([0] + [g.coeffs[k - 1] / k for k in range(1, f.order + 1)])


def comp_inverse(f: EGF) -> EGF:
    """Compositional inverse by Lagrange inversion.

    ``[t^n] g = (1/n) [t^(n-1)] (t / f)^n``.
    """
    if f.coeffs[0] or not f.coeffs[1]:
        raise ValueError("compositional inverse needs f(0) = 0 and f'(0) != 0")
    h = f.shift_down().reciprocal()  # t / f(t)
    g = [Fraction(0)]
    power = EGF.constant(1, f.order)
    for n in range(1, f.order + 1):
        power = power * h
        g.append(power.coeffs[n - 1] / n)
    return EGF(g)


def comp_inverse_newton(f: EGF) -> EGF:
    """Compositional inverse by Newton iteration on ``f(g) - t = 0``."""
    if f.coeffs[0] or not f.coeffs[1]:
        raise ValueError("compositional inverse needs f(0) = 0 and f'(0) != 0")
    t = EGF.t(f.order)
    g = t / f.coeffs[1]
    df = f.derivative()
    precision = 1
    while precision < f.order:
        g = g - (f.compose(g) - t) / df.compose(g)
        precision *= 2
    return g


def tree_egf(order=DEFAULT_ORDER) -> EGF:
    """The solution of ``f = t exp(f)``, computed by fixed-point iteration."""
    t = EGF.t(order)
    f = EGF.constant(0, order)
    for _ in range(order):
        f = t * exp(f)
    return f


def euler_presets(order=DEFAULT_ORDER) -> dict[str, EGF]:
    """Euler characteristic series of the minimal-model generators of Com ▽0 Lie."""
    t = EGF.t(order)
    log1pt = log1p(t)
    exp_neg = exp(-t)
    return {
        "s-1 Com coalgebra": -log1pt + t,
        "s-1 Lie coalgebra": exp_neg - 1 + t,
        "Lie coalgebra o s-1 Com coalgebra": 1 + log1pt - t - (1 + t) * exp_neg,
    }


def lie_coalgebra_series(order=DEFAULT_ORDER) -> EGF:
    t = EGF.t(order)
    return 1 - t - exp(-t)


def com_coalgebra_series(order=DEFAULT_ORDER) -> EGF:
    t = EGF.t(order)
    return log1p(t) - t


def chain_check(order=DEFAULT_ORDER) -> dict:
    """Verify the generating-function chain; returns named boolean legs."""
    if order < 2:
        raise ValueError("order must be >= 2")
    t = EGF.t(order)
    presets = euler_presets(order)
    total = sum(presets.values(), EGF.constant(0, order))
    target = t - t * exp(-t)
    inner = com_coalgebra_series(order)
    # f_{Lie^ o s^-1 Com^} as the composite 1 - x - exp(-x) at x = -(log(1+t) - t)
    composite = lie_coalgebra_series(order).compose(-inner)
    f_pl = comp_inverse(t - total)
    n_pow = [n ** (n - 1) for n in range(1, order + 1)]
    return {
        "composite formula": composite == presets["Lie coalgebra o s-1 Com coalgebra"],
        "sum equals t - t exp(-t)": total == target,
        "inverse has dims n^(n-1)": f_pl.to_dims() == n_pow,
        "t exp(-t) composed with f_PL is t": (t * exp(-t)).compose(f_pl) == t,
        "f_PL solves f = t exp(f)": f_pl == t * exp(f_pl),
        "Lagrange agrees with Newton": f_pl == comp_inverse_newton(t - total),
    }


# ---------------------------------------------------------------------------
# a tiny formula language for the command line: t, rationals, + - * / **,
# exp(), log1p(), log(1 + ...)


def evaluate(text: str, order=DEFAULT_ORDER) -> EGF:
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse series formula {text!r}: {exc.msg}") from None
    return _eval(tree.body, order)


def _eval(node, order):
    if isinstance(node, ast.Name) and node.id == "t":
        return EGF.t(order)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return EGF.constant(node.value, order)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, order)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise ValueError("only integer powers are supported")
            return _eval(node.left, order) ** node.right.value
        a, b = _eval(node.left, order), _eval(node.right, order)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and len(node.args) == 1:
        arg = _eval(node.args[0], order)
        if node.func.id == "exp":
            c = arg.coeffs[0]
            if c:
                raise ValueError("exp of a series with nonzero constant term is not rational")
            return exp(arg)
        if node.func.id == "log1p":
            return log1p(arg)
        if node.func.id == "log":
            if arg.coeffs[0] != 1:
                raise ValueError("log needs constant term 1")
            return log1p(arg - 1)
    raise ValueError(f"unsupported construct in series formula: {ast.dump(node)}")
