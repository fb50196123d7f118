"""Finite Laurent polynomials and real trigonometric polynomials.

Everything downstream (holomorphic data, singularity criteria, convergence
certificates) is built from three small symbolic types:

* ``LaurentPoly``  -- finite sums  sum_k c_k z^k  with integer exponents of
  either sign and complex coefficients.
* ``TrigPoly``     -- real trigonometric polynomials
  a_0 + sum_k (a_k cos kt + b_k sin kt).
* ``RealPoly``     -- ordinary real polynomials in one variable.

The two real families are closed under products and differentiation, and both
embed into Laurent polynomials restricted to the relevant curve: trig
polynomials via  cos kt = (z^k + z^-k)/2,  sin kt = (z^k - z^-k)/(2i)  on the
unit circle, ordinary polynomials by substituting the real variable for z.

Sup norms over a closed annulus or rectangle are reported as a pair: a dense
grid estimate and a rigorous coefficient-sum upper bound
sum_k |c_k| max(r_lo^k, r_hi^k), where [r_lo, r_hi] encloses |z| on the
domain.  Certificates downstream always consume the rigorous member.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

# Coefficients below this magnitude are treated as convolution noise and
# pruned; identities asserted elsewhere use looser tolerances on top of it.
PRUNE_TOL = 1e-14

_TWO_PI = 2.0 * math.pi


def _wrap_angle(d):
    """Reduce an angle difference to the principal interval [-pi, pi)."""
    return np.mod(np.asarray(d) + math.pi, _TWO_PI) - math.pi


class LaurentPoly:
    """Finite Laurent polynomial ``sum_k c_k z^k`` stored as {exponent: coeff}."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, complex] | None = None):
        c = {}
        if coeffs:
            for k, v in coeffs.items():
                v = complex(v)
                if abs(v) > PRUNE_TOL:
                    kk = int(k)
                    c[kk] = c.get(kk, 0j) + v
        self._c = {k: v for k, v in c.items() if abs(v) > PRUNE_TOL}

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def const(cls, c: complex) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def from_poly_coeffs(cls, coeffs: Sequence[complex]) -> "LaurentPoly":
        """Ascending ordinary-polynomial coefficients, exponents 0..len-1."""
        return cls({k: c for k, c in enumerate(coeffs)})

    # -- inspection --------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, complex]:
        return dict(self._c)

    def c(self, k: int) -> complex:
        return self._c.get(k, 0j)

    @property
    def support(self) -> list[int]:
        return sorted(self._c)

    @property
    def is_zero(self) -> bool:
        return not self._c

    @property
    def valuation(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no valuation")
        return min(self._c)

    @property
    def degree(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no degree")
        return max(self._c)

    def max_abs_coeff(self) -> float:
        return max((abs(v) for v in self._c.values()), default=0.0)

    def coeff_distance(self, other: "LaurentPoly") -> float:
        """max_k |c_k(self) - c_k(other)|, the coefficientwise gap."""
        keys = set(self._c) | set(other._c)
        return max((abs(self.c(k) - other.c(k)) for k in keys), default=0.0)

    def isclose(self, other: "LaurentPoly", tol: float = 1e-12) -> bool:
        return self.coeff_distance(other) <= tol

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self) -> str:
        items = ", ".join(f"{k}: {v:.6g}" for k, v in sorted(self._c.items()))
        return f"LaurentPoly({{{items}}})"

    # -- algebra ------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0j) + v
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return LaurentPoly({k: v * other for k, v in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict[int, complex] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                k = k1 + k2
                out[k] = out.get(k, 0j) + v1 * v2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined for LaurentPoly")
        out = LaurentPoly.const(1.0)
        for _ in range(n):
            out = out * self
        return out

    # -- analysis ------------------------------------------------------------

    def __call__(self, z):
        """Evaluate at a complex scalar or ndarray.

        Raises ValueError at z = 0 when negative exponents are present.
        """
        zs = np.asarray(z, dtype=complex)
        if self._c and min(self._c) < 0 and np.any(zs == 0):
            raise ValueError("evaluation at z = 0 with negative exponents")
        out = np.zeros_like(zs)
        for k, v in self._c.items():
            out = out + v * zs**k
        if np.isscalar(z) or np.asarray(z).shape == ():
            return complex(out)
        return out

    def differentiate(self) -> "LaurentPoly":
        return LaurentPoly({k - 1: k * v for k, v in self._c.items() if k != 0})

    def antiderivative(self) -> "Antiderivative":
        """Termwise antiderivative; the z^-1 coefficient goes to the log term."""
        poly = {k + 1: v / (k + 1) for k, v in self._c.items() if k != -1}
        return Antiderivative(LaurentPoly(poly), self._c.get(-1, 0j))


@dataclasses.dataclass(frozen=True)
class Antiderivative:
    """Antiderivative of a Laurent polynomial: polynomial part + c_-1 log z.

    ``re_integral(z, z0)`` evaluates Re of the path integral from z0 to z
    along the radial-then-arc path (radial to |z|, then the short arc, angular
    detour in [-pi, pi)).  When ``Im log_coeff == 0`` the value is
    path-independent and equals
    Re[P(z) - P(z0)] + Re(log_coeff) ln(|z|/|z0|),
    i.e. Re of the integral is single-valued on an annulus exactly in that
    case.
    """

    poly_part: LaurentPoly
    log_coeff: complex

    def single_valued(self, tol: float = 1e-12) -> bool:
        return abs(self.log_coeff.imag) < tol

    def re_integral(self, z, z0):
        zs = np.asarray(z, dtype=complex)
        z0 = complex(z0)
        singular_origin = (self.log_coeff != 0
                           or (not self.poly_part.is_zero and self.poly_part.valuation < 0))
        if singular_origin and (z0 == 0 or np.any(zs == 0)):
            raise ValueError("path endpoint at the singular point z = 0")
        val = (self.poly_part(zs) - self.poly_part(z0)).real
        if self.log_coeff != 0:
            val = val + self.log_coeff.real * np.log(np.abs(zs) / abs(z0))
            if self.log_coeff.imag != 0.0:
                dtheta = _wrap_angle(np.angle(zs) - np.angle(z0))
                val = val - self.log_coeff.imag * dtheta
        if np.isscalar(z) or np.asarray(z).shape == ():
            return float(val)
        return val


@dataclasses.dataclass(frozen=True)
class RationalMap:
    """Quotient of two Laurent polynomials, kept unreduced."""

    num: LaurentPoly
    den: LaurentPoly

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def __repr__(self) -> str:
        return f"RationalMap({self.num!r} / {self.den!r})"


def divide_exact(num: LaurentPoly, den: LaurentPoly,
                 rel_tol: float = 1e-12) -> LaurentPoly | None:
    """Exact Laurent division num/den, or None when the remainder is nonzero.

    Both arguments are shifted to ordinary polynomials by their valuations,
    long division runs in descending degree, and the remainder is compared
    against rel_tol times the numerator scale.
    """
    if den.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero:
        return LaurentPoly.zero()
    vn, vd = num.valuation, den.valuation
    n_len = num.degree - vn + 1
    d_len = den.degree - vd + 1
    if n_len < d_len:
        return None
    N = np.zeros(n_len, dtype=complex)
    for k, v in num.coeffs.items():
        N[k - vn] = v
    D = np.zeros(d_len, dtype=complex)
    for k, v in den.coeffs.items():
        D[k - vd] = v
    scale = np.max(np.abs(N))
    q = np.zeros(n_len - d_len + 1, dtype=complex)
    r = N.copy()
    lead = D[-1]
    for i in range(len(q) - 1, -1, -1):
        coef = r[i + d_len - 1] / lead
        q[i] = coef
        if coef != 0:
            r[i : i + d_len] -= coef * D
    if np.max(np.abs(r)) > rel_tol * max(scale, 1.0):
        return None
    shift = vn - vd
    return LaurentPoly({i + shift: c for i, c in enumerate(q)})


class TrigPoly:
    """Real trigonometric polynomial a0 + sum(a_k cos kt) + sum(b_k sin kt)."""

    __slots__ = ("const", "_cos", "_sin")

    def __init__(self, const: float = 0.0,
                 cos: Mapping[int, float] | None = None,
                 sin: Mapping[int, float] | None = None):
        a0 = float(const)
        cc: dict[int, float] = {}
        ss: dict[int, float] = {}
        for src, dst in ((cos, cc), (sin, ss)):
            if not src:
                continue
            for k, v in src.items():
                k = int(k)
                v = float(v)
                if k < 0:
                    raise ValueError("harmonic index must be nonnegative")
                if k == 0:
                    if dst is cc:
                        a0 += v
                    # sin(0 t) contributes nothing
                    continue
                if abs(v) > PRUNE_TOL:
                    dst[k] = dst.get(k, 0.0) + v
        self.const = 0.0 if abs(a0) <= PRUNE_TOL else a0
        self._cos = {k: v for k, v in cc.items() if abs(v) > PRUNE_TOL}
        self._sin = {k: v for k, v in ss.items() if abs(v) > PRUNE_TOL}

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls) -> "TrigPoly":
        return cls()

    @classmethod
    def constant(cls, c: float) -> "TrigPoly":
        return cls(const=c)

    @classmethod
    def cosine(cls, k: int, a: float = 1.0) -> "TrigPoly":
        return cls(cos={k: a})

    @classmethod
    def sine(cls, k: int, b: float = 1.0) -> "TrigPoly":
        return cls(sin={k: b})

    @classmethod
    def harmonic(cls, k: int, amplitude: float = 1.0, phase: float = 0.0) -> "TrigPoly":
        """amplitude * cos(k t + phase)."""
        return cls(cos={k: amplitude * math.cos(phase)},
                   sin={k: -amplitude * math.sin(phase)})

    # -- inspection ----------------------------------------------------------

    @property
    def cos_coeffs(self) -> dict[int, float]:
        return dict(self._cos)

    @property
    def sin_coeffs(self) -> dict[int, float]:
        return dict(self._sin)

    @property
    def degree(self) -> int:
        return max([0] + list(self._cos) + list(self._sin))

    def max_abs_coeff(self) -> float:
        vals = [abs(self.const)]
        vals += [abs(v) for v in self._cos.values()]
        vals += [abs(v) for v in self._sin.values()]
        return max(vals)

    def is_zero(self, tol: float = PRUNE_TOL) -> bool:
        return self.max_abs_coeff() <= tol

    def __repr__(self) -> str:
        return (f"TrigPoly(const={self.const:.6g}, cos={self._cos!r}, "
                f"sin={self._sin!r})")

    # -- complex Fourier form -------------------------------------------------

    def complex_coeffs(self) -> dict[int, complex]:
        """Coefficients c_m with self(t) = sum_m c_m e^{imt}; c_-m = conj(c_m)."""
        out: dict[int, complex] = {}
        if self.const:
            out[0] = complex(self.const)
        for k, a in self._cos.items():
            out[k] = out.get(k, 0j) + a / 2.0
            out[-k] = out.get(-k, 0j) + a / 2.0
        for k, b in self._sin.items():
            out[k] = out.get(k, 0j) + b / (2.0j)
            out[-k] = out.get(-k, 0j) - b / (2.0j)
        return out

    @classmethod
    def from_complex_coeffs(cls, c: Mapping[int, complex],
                            tol: float = 1e-10) -> "TrigPoly":
        const = 0.0
        cos: dict[int, float] = {}
        sin: dict[int, float] = {}
        seen = set()
        for m in c:
            k = abs(m)
            if k in seen:
                continue
            seen.add(k)
            cp = complex(c.get(k, 0j))
            cm = complex(c.get(-k, 0j))
            if abs(cp - cm.conjugate()) > tol * max(1.0, abs(cp), abs(cm)):
                raise ValueError("coefficients are not conjugate-symmetric")
            if k == 0:
                const = cp.real
            else:
                cos[k] = (cp + cm).real
                sin[k] = (1j * (cp - cm)).real
        return cls(const=const, cos=cos, sin=sin)

    # -- algebra ---------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = TrigPoly.constant(float(other))
        if not isinstance(other, TrigPoly):
            return NotImplemented
        cos = dict(self._cos)
        for k, v in other._cos.items():
            cos[k] = cos.get(k, 0.0) + v
        sin = dict(self._sin)
        for k, v in other._sin.items():
            sin[k] = sin.get(k, 0.0) + v
        return TrigPoly(self.const + other.const, cos, sin)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(-self.const,
                        {k: -v for k, v in self._cos.items()},
                        {k: -v for k, v in self._sin.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = TrigPoly.constant(float(other))
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            s = float(other)
            return TrigPoly(self.const * s,
                            {k: v * s for k, v in self._cos.items()},
                            {k: v * s for k, v in self._sin.items()})
        if not isinstance(other, TrigPoly):
            return NotImplemented
        # multiply in the complex exponential basis, then symmetrize back
        a = self.complex_coeffs()
        b = other.complex_coeffs()
        out: dict[int, complex] = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = m1 + m2
                out[m] = out.get(m, 0j) + c1 * c2
        return TrigPoly.from_complex_coeffs(out)

    __rmul__ = __mul__

    # -- analysis -----------------------------------------------------------

    def __call__(self, t):
        ts = np.asarray(t, dtype=float)
        out = np.full_like(ts, self.const, dtype=float)
        for k, a in self._cos.items():
            out = out + a * np.cos(k * ts)
        for k, b in self._sin.items():
            out = out + b * np.sin(k * ts)
        if np.isscalar(t) or np.asarray(t).shape == ():
            return float(out)
        return out

    def differentiate(self) -> "TrigPoly":
        cos = {k: k * b for k, b in self._sin.items()}
        sin = {k: -k * a for k, a in self._cos.items()}
        return TrigPoly(0.0, cos, sin)

    def to_laurent(self) -> LaurentPoly:
        """Laurent extension through z = e^{it} off the unit circle."""
        return LaurentPoly(self.complex_coeffs())


class RealPoly:
    """Real polynomial with ascending coefficients (c0 + c1 t + ...)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[float] = ()):
        cs = [float(c) for c in coeffs]
        while cs and abs(cs[-1]) <= PRUNE_TOL:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls) -> "RealPoly":
        return cls()

    @classmethod
    def constant(cls, c: float) -> "RealPoly":
        return cls((c,))

    @classmethod
    def identity(cls) -> "RealPoly":
        """The polynomial t."""
        return cls((0.0, 1.0))

    @property
    def degree(self) -> int:
        return max(len(self.coeffs) - 1, 0)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def is_zero(self, tol: float = PRUNE_TOL) -> bool:
        return self.max_abs_coeff() <= tol

    def __repr__(self) -> str:
        return f"RealPoly({list(self.coeffs)!r})"

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = RealPoly.constant(float(other))
        if not isinstance(other, RealPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n)
        a[: len(self.coeffs)] = self.coeffs
        b = np.zeros(n)
        b[: len(other.coeffs)] = other.coeffs
        return RealPoly(a + b)

    __radd__ = __add__

    def __neg__(self):
        return RealPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = RealPoly.constant(float(other))
        if not isinstance(other, RealPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return RealPoly([c * float(other) for c in self.coeffs])
        if not isinstance(other, RealPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return RealPoly.zero()
        return RealPoly(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __call__(self, t):
        ts = np.asarray(t, dtype=float)
        out = np.zeros_like(ts)
        for c in reversed(self.coeffs):
            out = out * ts + c
        if np.isscalar(t) or np.asarray(t).shape == ():
            return float(out)
        return out

    def differentiate(self) -> "RealPoly":
        return RealPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def to_laurent(self) -> LaurentPoly:
        """Extension obtained by substituting the complex variable for t."""
        return LaurentPoly.from_poly_coeffs(self.coeffs)


ScalarPoly = Union[TrigPoly, RealPoly]


# ---------------------------------------------------------------------------
# domains


@dataclasses.dataclass(frozen=True)
class Annulus:
    r_in: float
    r_out: float

    def __post_init__(self):
        if not (0.0 < self.r_in < self.r_out):
            raise ValueError("annulus requires 0 < r_in < r_out")

    def contains(self, z: complex, tol: float = 1e-12) -> bool:
        r = abs(z)
        return self.r_in - tol <= r <= self.r_out + tol

    def contains_mask(self, z, tol: float = 1e-12) -> np.ndarray:
        r = np.abs(np.asarray(z, dtype=complex))
        return (r >= self.r_in - tol) & (r <= self.r_out + tol)

    def grid(self, samples: int) -> np.ndarray:
        """Closed samples x samples grid (radial rim included, angle wraps)."""
        rs = np.linspace(self.r_in, self.r_out, samples)
        ts = np.linspace(0.0, _TWO_PI, samples, endpoint=False)
        return rs[:, None] * np.exp(1j * ts)[None, :]

    def radius_bounds(self) -> tuple[float, float]:
        return (self.r_in, self.r_out)


@dataclasses.dataclass(frozen=True)
class Rectangle:
    u_min: float
    u_max: float
    v_min: float
    v_max: float

    def __post_init__(self):
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise ValueError("rectangle requires u_min < u_max and v_min < v_max")

    def contains(self, z: complex, tol: float = 1e-12) -> bool:
        z = complex(z)
        return (self.u_min - tol <= z.real <= self.u_max + tol
                and self.v_min - tol <= z.imag <= self.v_max + tol)

    def contains_mask(self, z, tol: float = 1e-12) -> np.ndarray:
        zs = np.asarray(z, dtype=complex)
        return ((zs.real >= self.u_min - tol) & (zs.real <= self.u_max + tol)
                & (zs.imag >= self.v_min - tol) & (zs.imag <= self.v_max + tol))

    def grid(self, samples: int) -> np.ndarray:
        us = np.linspace(self.u_min, self.u_max, samples)
        vs = np.linspace(self.v_min, self.v_max, samples)
        return us[:, None] + 1j * vs[None, :]

    def radius_bounds(self) -> tuple[float, float]:
        corners = [complex(self.u_min, self.v_min), complex(self.u_min, self.v_max),
                   complex(self.u_max, self.v_min), complex(self.u_max, self.v_max)]
        r_hi = max(abs(c) for c in corners)
        if self.contains(0.0):
            return (0.0, r_hi)
        # closest approach of |z| on the boundary: clamp 0 onto each edge
        u0 = min(max(0.0, self.u_min), self.u_max)
        v0 = min(max(0.0, self.v_min), self.v_max)
        r_lo = min(
            abs(complex(u0, self.v_min)), abs(complex(u0, self.v_max)),
            abs(complex(self.u_min, v0)), abs(complex(self.u_max, v0)),
        )
        return (r_lo, r_hi)


Domain = Union[Annulus, Rectangle]


# ---------------------------------------------------------------------------
# module-level operations (thin wrappers over the methods)


def differentiate(p: LaurentPoly) -> LaurentPoly:
    return p.differentiate()


def antiderivative(p: LaurentPoly) -> Antiderivative:
    return p.antiderivative()


def trig_to_laurent(q: TrigPoly) -> LaurentPoly:
    """Unit-circle extension: cos kt -> (z^k+z^-k)/2, sin kt -> (z^k-z^-k)/2i."""
    return q.to_laurent()


@dataclasses.dataclass(frozen=True)
class SupNorm:
    """Grid estimate together with the rigorous coefficient-sum bound."""

    grid: float
    bound: float


def coefficient_bound(p: LaurentPoly, d: Domain) -> float:
    """Rigorous sup bound sum_k |c_k| max(r_lo^k, r_hi^k) on the closed domain."""
    r_lo, r_hi = d.radius_bounds()
    total = 0.0
    for k, v in p.coeffs.items():
        if k >= 0:
            total += abs(v) * max(r_lo**k, r_hi**k)
        else:
            if r_lo == 0.0:
                return math.inf
            total += abs(v) * r_lo**k
    return total


def sup_norm(p: LaurentPoly | Sequence[LaurentPoly], d: Domain,
             samples: int = 256) -> SupNorm:
    """Sup norm of a Laurent polynomial (or componentwise max of a 3-vector).

    Returns the max modulus over a closed samples x samples grid together with
    the coefficient-sum upper bound; grid <= bound always holds.
    """
    if samples < 64:
        raise ValueError("sup_norm needs samples >= 64")
    comps = [p] if isinstance(p, LaurentPoly) else list(p)
    zs = d.grid(samples)
    grid_val = 0.0
    bound_val = 0.0
    for comp in comps:
        if comp.is_zero:
            continue
        grid_val = max(grid_val, float(np.max(np.abs(comp(zs)))))
        bound_val = max(bound_val, coefficient_bound(comp, d))
    return SupNorm(grid=grid_val, bound=bound_val)
