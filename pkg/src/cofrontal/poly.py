"""Exact multivariate polynomials over the rationals.

A polynomial is a sparse map from exponent tuples to ``Fraction`` coefficients.
Values are immutable; every operation returns a new polynomial.  Terms are
ordered graded-lexicographically (total degree first, then lex with ``x1`` the
most significant variable) for display, hashing and leading-term selection.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from itertools import permutations
from numbers import Rational
from typing import Callable, Iterable, Iterator, Mapping, Sequence

Monomial = tuple[int, ...]


def grlex_key(mono: Monomial) -> tuple[int, Monomial]:
    return (sum(mono), mono)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def default_names(nvars: int) -> list[str]:
    return [f"x{i + 1}" for i in range(nvars)]


class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables with rational coefficients."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        if nvars < 1:
            raise ValueError("a polynomial needs at least one variable")
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} has wrong length for {nvars} variables")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            c = _as_fraction(coeff)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> Polynomial:
        return cls(nvars)

    @classmethod
    def constant(cls, value, nvars: int) -> Polynomial:
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, index: int, nvars: int) -> Polynomial:
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        mono = [0] * nvars
        mono[index] = 1
        return cls(nvars, {tuple(mono): 1})

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Monomial, Fraction]) -> Polynomial:
        # trusted path: terms already clean
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lex order."""
        for mono in sorted(self._terms, key=grlex_key, reverse=True):
            yield mono, self._terms[mono]

    def monomials(self) -> list[Monomial]:
        return sorted(self._terms, key=grlex_key, reverse=True)

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((m[index] for m in self._terms), default=-1)

    def min_degree(self) -> int:
        """Order of vanishing at the origin; -1 for zero."""
        return min((sum(m) for m in self._terms), default=-1)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self._terms, key=grlex_key)

    def leading_coefficient(self) -> Fraction:
        return self._terms[self.leading_monomial()]

    def depends_on(self, index: int) -> bool:
        return any(m[index] for m in self._terms)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return Polynomial.constant(_as_fraction(other), self.nvars)

    def __add__(self, other) -> Polynomial:
        if not isinstance(other, (Polynomial, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> Polynomial:
        if not isinstance(other, (Polynomial, int, Fraction)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return Polynomial.zero(self.nvars)
            return Polynomial._raw(self.nvars, {m: v * c for m, v in self._terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        other = self._coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(mono, 0) + c1 * c2
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return Polynomial._raw(self.nvars, out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                raise ZeroDivisionError("division of a polynomial by zero")
            return self * (1 / c)
        if isinstance(other, Polynomial):
            return divide_exact(self, other)
        return NotImplemented

    def __pow__(self, exponent: int) -> Polynomial:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers need a non-negative integer exponent")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, tuple(self.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {render(self)!r})"

    def __str__(self) -> str:
        return render(self)

    # -- convenience wrappers ----------------------------------------------

    def __call__(self, *point):
        return evaluate(self, point)

    def subs(self, images: Sequence[Polynomial]) -> Polynomial:
        return substitute(self, images)

    def diff(self, index: int) -> Polynomial:
        return partial(self, index)

    def truncate(self, degree: int) -> Polynomial:
        return jet_truncate(self, degree)

    def extend(self, nvars: int, offset: int = 0) -> Polynomial:
        """Embed into a ring with ``nvars`` variables, shifting variable ``i`` to ``i + offset``."""
        if offset + self.nvars > nvars:
            raise ValueError("target ring too small")
        pad_after = nvars - offset - self.nvars
        return Polynomial._raw(
            nvars,
            {(0,) * offset + m + (0,) * pad_after: c for m, c in self._terms.items()},
        )

    def drop_variables(self, keep: int) -> Polynomial:
        """Restrict to the first ``keep`` variables; the remaining ones must not occur."""
        for m in self._terms:
            if any(m[keep:]):
                raise ValueError(f"polynomial depends on a variable beyond x{keep}")
        return Polynomial._raw(keep, {m[:keep]: c for m, c in self._terms.items()})


# -- parsing and rendering ----------------------------------------------------


class PolynomialParseError(ValueError):
    """Raised for malformed polynomial text; ``position`` is a 0-based column."""

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class UnknownVariableError(PolynomialParseError):
    pass


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse_polynomial(text: str, variable_names: Sequence[str] | None = None,
                     nvars: int | None = None) -> Polynomial:
    """Parse ``text`` such as ``"x1^2 - 3/2*x1*x2 + 1"``.

    Either ``variable_names`` or ``nvars`` (which implies ``x1..xn``) is required.
    """
    if variable_names is None:
        if nvars is None:
            raise ValueError("pass variable_names or nvars")
        variable_names = default_names(nvars)
    names = {name: i for i, name in enumerate(variable_names)}
    n = len(variable_names)
    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expect_int() -> int:
        kind, value, pos = take()
        if kind != "int":
            raise PolynomialParseError("expected an integer", pos, text)
        return int(value)

    def parse_power(mono: list[int]) -> None:
        kind, value, pos = take()
        if kind != "name":
            raise PolynomialParseError("expected a variable", pos, text)
        if value not in names:
            raise UnknownVariableError(f"unknown variable {value!r}", pos, text)
        exp = 1
        if peek()[1] == "^":
            take()
            exp = expect_int()
        mono[names[value]] += exp

    def parse_term(sign: int) -> tuple[Monomial, Fraction]:
        mono = [0] * n
        coeff = Fraction(sign)
        kind, value, pos = peek()
        if kind == "int":
            take()
            num = int(value)
            den = 1
            if peek()[1] == "/":
                take()
                den_pos = peek()[2]
                den = expect_int()
                if den == 0:
                    raise PolynomialParseError("zero denominator", den_pos, text)
            coeff *= Fraction(num, den)
            if peek()[1] != "*":
                return tuple(mono), coeff
            take()
            parse_power(mono)
        elif kind == "name":
            parse_power(mono)
        else:
            raise PolynomialParseError("expected a term", pos, text)
        while peek()[1] == "*":
            take()
            parse_power(mono)
        return tuple(mono), coeff

    if peek()[0] == "end":
        raise PolynomialParseError("empty polynomial", 0, text)
    terms: dict[Monomial, Fraction] = {}
    sign = 1
    if peek()[1] in "+-" and peek()[0] == "op":
        sign = -1 if take()[1] == "-" else 1
    while True:
        mono, coeff = parse_term(sign)
        terms[mono] = terms.get(mono, Fraction(0)) + coeff
        kind, value, pos = peek()
        if kind == "end":
            break
        if value not in ("+", "-"):
            raise PolynomialParseError(f"unexpected {value!r}", pos, text)
        take()
        sign = -1 if value == "-" else 1
    return Polynomial(n, terms)


def _render_monomial(mono: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def render(p: Polynomial, variable_names: Sequence[str] | None = None) -> str:
    """Canonical text: descending graded-lex terms, ``p/q`` coefficients."""
    names = variable_names or default_names(p.nvars)
    if p.is_zero():
        return "0"
    out = []
    for k, (mono, c) in enumerate(p.items()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = _render_monomial(mono, names)
        if not body:
            text = str(a)
        elif a == 1:
            text = body
        else:
            text = f"{a}*{body}"
        if k == 0:
            out.append(("-" if sign == "-" else "") + text)
        else:
            out.append(f" {sign} {text}")
    return "".join(out)


# -- evaluation and calculus --------------------------------------------------


def evaluate(p: Polynomial, point: Sequence):
    """Value of ``p`` at ``point``; exact for rational input, float for float input."""
    if len(point) != p.nvars:
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {p.nvars} variables")
    total = 0
    for mono, c in p._terms.items():
        term = c
        for x, e in zip(point, mono):
            if e:
                term = term * x ** e
        total = total + term
    return Fraction(total) if isinstance(total, int) else total


def float_function(p: Polynomial) -> Callable[[Sequence[float]], float]:
    """Fast float evaluator for numerical work."""
    terms = [(float(c), mono) for mono, c in p._terms.items()]

    def f(x) -> float:
        s = 0.0
        for c, mono in terms:
            t = c
            for xi, e in zip(x, mono):
                if e:
                    t *= xi ** e
            s += t
        return s

    return f


def substitute(p: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    """Composite ``p(images[0], ..., images[n-1])``."""
    if len(images) != p.nvars:
        raise ValueError(f"need {p.nvars} images, got {len(images)}")
    if not images:
        raise ValueError("no images")
    target = images[0].nvars
    if any(img.nvars != target for img in images):
        raise ValueError("images must share a variable count")
    power_cache: dict[tuple[int, int], Polynomial] = {}

    def power(i: int, e: int) -> Polynomial:
        key = (i, e)
        if key not in power_cache:
            power_cache[key] = images[i] ** e
        return power_cache[key]

    result = Polynomial.zero(target)
    for mono, c in p._terms.items():
        term = Polynomial.constant(c, target)
        for i, e in enumerate(mono):
            if e:
                term = term * power(i, e)
        result = result + term
    return result


def partial(p: Polynomial, var_index: int) -> Polynomial:
    if not 0 <= var_index < p.nvars:
        raise IndexError(f"variable index {var_index} out of range for {p.nvars} variables")
    out: dict[Monomial, Fraction] = {}
    for mono, c in p._terms.items():
        e = mono[var_index]
        if e:
            m = list(mono)
            m[var_index] = e - 1
            out[tuple(m)] = c * e
    return Polynomial._raw(p.nvars, out)


def jet_truncate(p: Polynomial, degree: int) -> Polynomial:
    """Drop every term of total degree above ``degree``."""
    if degree < 0:
        raise ValueError("jet degree must be non-negative")
    return Polynomial._raw(p.nvars, {m: c for m, c in p._terms.items() if sum(m) <= degree})


# -- division ------------------------------------------------------------------


class NotDivisibleError(ArithmeticError):
    pass


def divmod_grlex(a: Polynomial, b: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Division by a single divisor in graded-lex order: ``a = q*b + r``."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    n = a.nvars
    lm_b = b.leading_monomial()
    lc_b = b._terms[lm_b]
    rest = dict(a._terms)
    q: dict[Monomial, Fraction] = {}
    r: dict[Monomial, Fraction] = {}
    b_items = list(b._terms.items())
    while rest:
        lm = max(rest, key=grlex_key)
        lc = rest[lm]
        if all(x >= y for x, y in zip(lm, lm_b)):
            shift = tuple(x - y for x, y in zip(lm, lm_b))
            factor = lc / lc_b
            q[shift] = q.get(shift, 0) + factor
            for mono, c in b_items:
                key = tuple(x + y for x, y in zip(mono, shift))
                s = rest.get(key, 0) - factor * c
                if s:
                    rest[key] = s
                else:
                    rest.pop(key, None)
        else:
            r[lm] = lc
            del rest[lm]
    return Polynomial(n, q), Polynomial._raw(n, r)


def divide_exact(a: Polynomial, b: Polynomial) -> Polynomial:
    q, r = divmod_grlex(a, b)
    if not r.is_zero():
        raise NotDivisibleError(f"{render(b)} does not divide {render(a)}")
    return q


def divides(b: Polynomial, a: Polynomial) -> bool:
    if b.is_zero():
        return a.is_zero()
    return divmod_grlex(a, b)[1].is_zero()


# -- gcd -----------------------------------------------------------------------


def content_factor(p: Polynomial) -> Fraction:
    """Positive rational ``c`` with ``p / c`` integral and primitive over the integers."""
    if p.is_zero():
        return Fraction(0)
    coeffs = list(p._terms.values())
    den = reduce(math.lcm, (c.denominator for c in coeffs), 1)
    num = reduce(math.gcd, (c.numerator for c in coeffs), 0)
    return Fraction(num, den)


def normalize(p: Polynomial) -> Polynomial:
    """Primitive over the integers with positive graded-lex leading coefficient."""
    if p.is_zero():
        return p
    c = content_factor(p)
    if p.leading_coefficient() < 0:
        c = -c
    return p * (1 / c)


def _coefficients_in(p: Polynomial, var: int) -> dict[int, Polynomial]:
    out: dict[int, dict[Monomial, Fraction]] = {}
    for mono, c in p._terms.items():
        e = mono[var]
        m = mono[:var] + (0,) + mono[var + 1:]
        out.setdefault(e, {})[m] = c
    return {e: Polynomial._raw(p.nvars, t) for e, t in out.items()}


def _from_coefficients(coeffs: Mapping[int, Polynomial], var: int, nvars: int) -> Polynomial:
    out: dict[Monomial, Fraction] = {}
    for e, poly in coeffs.items():
        for mono, c in poly._terms.items():
            out[mono[:var] + (e,) + mono[var + 1:]] = c
    return Polynomial._raw(nvars, out)


def _content(p: Polynomial, var: int) -> Polynomial:
    return _gcd_pair_vars(list(_coefficients_in(p, var).values()), var)


def _gcd_pair_vars(polys: list[Polynomial], active: int) -> Polynomial:
    """Gcd of polynomials that only involve variables ``< active``."""
    polys = [q for q in polys if not q.is_zero()]
    if not polys:
        raise ValueError("content of the zero polynomial")
    g = polys[0]
    for q in polys[1:]:
        g = _gcd(g, q, active)
        if g.is_constant():
            break
    return g


def _pseudo_remainder(a: Polynomial, b: Polynomial, var: int) -> Polynomial:
    ca = _coefficients_in(a, var)
    cb = _coefficients_in(b, var)
    db = max(cb)
    lc = cb[db]
    n = a.nvars
    while ca and max(ca) >= db:
        da = max(ca)
        lead = ca[da]
        shift = da - db
        new: dict[int, Polynomial] = {}
        for e, c in ca.items():
            if e != da:
                new[e] = c * lc
        for e, c in cb.items():
            if e == db:
                continue
            key = e + shift
            val = new.get(key, Polynomial.zero(n)) - lead * c
            new[key] = val
        ca = {e: c for e, c in new.items() if not c.is_zero()}
    return _from_coefficients(ca, var, n)


def _gcd(a: Polynomial, b: Polynomial, active: int) -> Polynomial:
    """Gcd up to a rational constant; ``active`` variables ``0..active-1`` may occur."""
    n = a.nvars
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if active == 0 or a.is_constant() or b.is_constant():
        return Polynomial.constant(1, n)
    var = active - 1
    if not a.depends_on(var) and not b.depends_on(var):
        return _gcd(a, b, active - 1)
    ca = _content(a, var) if a.depends_on(var) else a
    cb = _content(b, var) if b.depends_on(var) else b
    c = _gcd(ca, cb, var)
    if not a.depends_on(var) or not b.depends_on(var):
        return c
    pa = divide_exact(a, ca)
    pb = divide_exact(b, cb)
    if pa.degree_in(var) < pb.degree_in(var):
        pa, pb = pb, pa
    while not pb.is_zero() and pb.depends_on(var):
        r = _pseudo_remainder(pa, pb, var)
        pa = pb
        if r.is_zero():
            pb = r
        else:
            pb = normalize(divide_exact(r, _content(r, var)) if r.depends_on(var) else r)
    if pb.is_zero():
        g = normalize(divide_exact(pa, _content(pa, var)))
    else:
        # remainder became free of var: the primitive parts are coprime in var
        g = Polynomial.constant(1, n)
    return normalize(c * g)


def gcd_many(ps: Sequence[Polynomial]) -> Polynomial:
    """Normalized greatest common divisor; ``0`` when every input is zero."""
    ps = list(ps)
    if not ps:
        raise ValueError("gcd_many needs at least one polynomial")
    nvars = ps[0].nvars
    if any(p.nvars != nvars for p in ps):
        raise ValueError("all inputs must share a variable count")
    g = Polynomial.zero(nvars)
    for p in ps:
        if p.is_zero():
            continue
        g = p if g.is_zero() else _gcd(g, p, nvars)
        if not g.is_zero() and g.is_constant():
            return Polynomial.constant(1, nvars)
    return normalize(g)


def associated_at_origin(p: Polynomial, q: Polynomial) -> bool:
    """True if ``p = u*q`` for a unit ``u`` of the local ring at the origin."""
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    g = gcd_many([p, q])
    return (divide_exact(p, g).constant_term() != 0
            and divide_exact(q, g).constant_term() != 0)


# -- matrices ------------------------------------------------------------------


class PolyMatrix:
    """Row-major matrix of polynomials sharing one variable count."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable[Polynomial]):
        entries = tuple(entries)
        if rows < 1 or cols < 1 or len(entries) != rows * cols:
            raise ValueError("entry count does not match the shape")
        if len({e.nvars for e in entries}) != 1:
            raise ValueError("matrix entries must share a variable count")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Polynomial]]) -> PolyMatrix:
        return cls(len(rows), len(rows[0]), [e for row in rows for e in row])

    @property
    def nvars(self) -> int:
        return self.entries[0].nvars

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Polynomial]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list[Polynomial]]:
        return [self.row(i) for i in range(self.rows)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> PolyMatrix:
        return PolyMatrix(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def matvec(self, vector: Sequence[Polynomial]) -> list[Polynomial]:
        if len(vector) != self.cols:
            raise ValueError("vector length does not match column count")
        out = []
        for i in range(self.rows):
            acc = Polynomial.zero(self.nvars)
            for j in range(self.cols):
                acc = acc + self[i, j] * vector[j]
            out.append(acc)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(", ".join(render(e) for e in r) for r in self.to_rows())
        return f"PolyMatrix([{body}])"


def _det_bareiss(M: PolyMatrix) -> Polynomial:
    n = M.rows
    a = [row[:] for row in M.to_rows()]
    sign = 1
    prev = Polynomial.constant(1, M.nvars)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Polynomial.zero(M.nvars)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = divide_exact(num, prev)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def _det_leibniz(M: PolyMatrix) -> Polynomial:
    n = M.rows
    total = Polynomial.zero(M.nvars)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Polynomial.constant(-1 if inversions % 2 else 1, M.nvars)
        for i, j in enumerate(perm):
            term = term * M[i, j]
            if term.is_zero():
                break
        total = total + term
    return total


def determinant(M: PolyMatrix, method: str = "bareiss") -> Polynomial:
    """Exact determinant by fraction-free elimination (or Leibniz expansion)."""
    if M.rows != M.cols:
        raise ValueError(f"determinant of a non-square {M.rows}x{M.cols} matrix")
    if method == "bareiss":
        return _det_bareiss(M)
    if method == "leibniz":
        return _det_leibniz(M)
    raise ValueError(f"unknown determinant method {method!r}")
