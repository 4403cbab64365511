"""Exact evaluation of expressions in a finite model: zero-tolerance identity tests.

A realization assigns to every generator a concrete form

    sum of  (odd legs) x (trigonometric monomial on a torus) x (matrix),

where the legs combine coordinate differentials, vertical legs for delta(phi),
and auxiliary odd legs carrying ghost parity; the scalar part is a Fourier
monomial exp(i k.theta) with Gaussian-integer coefficients, and the matrix
lives in gl(n).  Products, brackets (matrix commutators), pairings (traces)
and coordinate derivatives are all exact, so an identity passes only when it
evaluates to the literal zero form.

The model is sound in the Schwartz-Zippel sense: every identity tested is a
polynomial in the randomly drawn coefficients, so a nonzero identity survives
several independent draws with negligible probability, while a true identity
vanishes on all of them identically.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd
from typing import Optional

from .core import EvalError, FieldSymbol, GradingError
from .expr import (
    AHol,
    Bracket,
    Const,
    D,
    Del,
    Expr,
    Gen,
    Hol,
    Neg,
    Pair,
    Prod,
    Star,
    Sum,
    mono_grading,
    normalize,
)
from .theory import Theory

# ---------------------------------------------------------------------------
# Gaussian-integer scalars and matrices


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


_CZERO = (0, 0)
_CONE = (1, 0)


def _mat_eye(n, c=_CONE):
    return tuple(tuple(c if i == j else _CZERO for j in range(n)) for i in range(n))


def _mat_add(A, B):
    return tuple(tuple(_cadd(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def _mat_scale(A, c):
    return tuple(tuple(_cmul(a, c) for a in row) for row in A)


def _mat_iszero(A):
    return all(a == _CZERO for row in A for a in row)


def _mat_mul(A, B, n):
    return tuple(
        tuple(
            (
                sum(A[i][k][0] * B[k][j][0] - A[i][k][1] * B[k][j][1] for k in range(n)),
                sum(A[i][k][0] * B[k][j][1] + A[i][k][1] * B[k][j][0] for k in range(n)),
            )
            for j in range(n)
        )
        for i in range(n)
    )


def _mat_comm(A, B, n):
    AB = _mat_mul(A, B, n)
    BA = _mat_mul(B, A, n)
    return tuple(tuple((ab[0] - ba[0], ab[1] - ba[1]) for ab, ba in zip(ra, rb)) for ra, rb in zip(AB, BA))


def _mat_trace(A, n):
    re = sum(A[i][i][0] for i in range(n))
    im = sum(A[i][i][1] for i in range(n))
    return (re, im)


def gram_determinant(n: int) -> int:
    """Determinant of the trace-form Gram matrix on the elementary basis of gl(n)."""
    basis = [(i, j) for i in range(n) for j in range(n)]
    size = len(basis)
    gram = [[0] * size for _ in range(size)]
    for a, (i, j) in enumerate(basis):
        for b, (k, l) in enumerate(basis):
            gram[a][b] = 1 if (j == k and l == i) else 0
    # integer Gauss elimination on a permutation-like matrix
    mat = [row[:] for row in gram]
    det = 1
    for col in range(size):
        pivot = next((r for r in range(col, size) if mat[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        for r in range(col + 1, size):
            if mat[r][col]:
                f = Fraction(mat[r][col], mat[col][col])
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[col])]
    return det


# ---------------------------------------------------------------------------
# Concrete forms


def _merge_sign(mask1: int, mask2: int) -> int:
    """Koszul sign for merging two ascending odd-leg words."""
    sign = 1
    m2 = mask2
    while m2:
        b = m2 & -m2
        above = mask1 >> (b.bit_length())
        if above.bit_count() & 1:
            sign = -sign
        m2 ^= b
    return sign


class ConcreteForm:
    """Exact inhomogeneous form: {legmask: {mode: matrix}} with a rational prefactor."""

    __slots__ = ("data", "scale", "n")

    def __init__(self, data, scale: Fraction, n: int):
        self.data = data
        self.scale = scale
        self.n = n

    @classmethod
    def zero(cls, n: int) -> "ConcreteForm":
        return cls({}, Fraction(1), n)

    @classmethod
    def scalar(cls, value: Fraction, n: int, s: int) -> "ConcreteForm":
        if not value:
            return cls.zero(n)
        return cls({0: {(0,) * s: _mat_eye(n)}}, value, n)

    def is_zero(self) -> bool:
        return not self.data

    def copy_pruned(self):
        data = {}
        for mask, modes in self.data.items():
            kept = {k: M for k, M in modes.items() if not _mat_iszero(M)}
            if kept:
                data[mask] = kept
        return ConcreteForm(data, self.scale, self.n)

    def first_witness(self, ctx_m: int, V: int) -> Optional[str]:
        for mask in sorted(self.data):
            for mode in sorted(self.data[mask]):
                M = self.data[mask][mode]
                for i, row in enumerate(M):
                    for j, c in enumerate(row):
                        if c != _CZERO:
                            dx = [b for b in range(ctx_m) if mask >> b & 1]
                            eps = [b - ctx_m for b in range(ctx_m, ctx_m + V) if mask >> b & 1]
                            ghost = [b - ctx_m - V for b in range(ctx_m + V, mask.bit_length()) if mask >> b & 1]
                            val = (self.scale * c[0], self.scale * c[1])
                            return (
                                f"dx{dx} eps{eps} ghost{ghost} mode{tuple(mode)} "
                                f"entry({i},{j}) = {val[0]}{'+' if val[1] >= 0 else ''}{val[1]}i"
                            )
        return None


def _common_scale(f1: Fraction, f2: Fraction):
    num = gcd(f1.numerator, f2.numerator)
    den = (f1.denominator * f2.denominator) // gcd(f1.denominator, f2.denominator)
    common = Fraction(num, den)
    return common, int(f1 / common), int(f2 / common)


def cf_add(x: ConcreteForm, y: ConcreteForm) -> ConcreteForm:
    if x.is_zero():
        return y
    if y.is_zero():
        return x
    common, fx, fy = _common_scale(x.scale, y.scale)
    data = {}
    for src, f in ((x, fx), (y, fy)):
        cf = (f, 0)
        for mask, modes in src.data.items():
            dst = data.setdefault(mask, {})
            for mode, M in modes.items():
                scaled = _mat_scale(M, cf) if f != 1 else M
                cur = dst.get(mode)
                dst[mode] = scaled if cur is None else _mat_add(cur, scaled)
    out = ConcreteForm(data, common, x.n).copy_pruned()
    return out


def cf_scale(x: ConcreteForm, c: Fraction) -> ConcreteForm:
    if not c or x.is_zero():
        return ConcreteForm.zero(x.n)
    return ConcreteForm(x.data, x.scale * c, x.n)


def _cf_combine(x: ConcreteForm, y: ConcreteForm, kind: str) -> ConcreteForm:
    """Graded product / bracket / pairing of two concrete forms."""
    n = x.n
    data: dict = {}
    for mask1, modes1 in x.data.items():
        for mask2, modes2 in y.data.items():
            if mask1 & mask2:
                continue
            sign = _merge_sign(mask1, mask2)
            mask = mask1 | mask2
            dst = data.setdefault(mask, {})
            for k1, M1 in modes1.items():
                for k2, M2 in modes2.items():
                    mode = tuple(a + b for a, b in zip(k1, k2))
                    if kind == "prod":
                        M = _mat_mul(M1, M2, n)
                    elif kind == "bracket":
                        M = _mat_comm(M1, M2, n)
                    else:
                        M = _mat_eye(n, _mat_trace(_mat_mul(M1, M2, n), n))
                    if sign < 0:
                        M = _mat_scale(M, (-1, 0))
                    cur = dst.get(mode)
                    dst[mode] = M if cur is None else _mat_add(cur, M)
    return ConcreteForm(data, x.scale * y.scale, n).copy_pruned()


def cf_mul(x, y):
    return _cf_combine(x, y, "prod")


def cf_bracket(x, y):
    return _cf_combine(x, y, "bracket")


def cf_pair(x, y):
    return _cf_combine(x, y, "pair")


# ---------------------------------------------------------------------------
# Realization


@dataclass
class RealizationParams:
    n: int = 2
    K: int = 1
    V: int = 3
    stratum_dim: Optional[int] = None
    pool_copies: int = 3
    conjugate_modes: bool = False


class Realization:
    """Deterministic exact model of a theory's field content on a torus."""

    def __init__(self, theory: Theory, seed: int, params: RealizationParams, antifield_seed=None):
        self.theory = theory
        self.seed = seed
        self.params = params
        self.m = theory.m
        self.s = params.stratum_dim if params.stratum_dim is not None else theory.m
        if not 1 <= self.s <= self.m:
            raise EvalError(f"stratum dimension {self.s} outside 1..{self.m}")
        self.n = params.n
        self.V = params.V
        if params.n >= 2 and gram_determinant(params.n) == 0:
            raise EvalError(f"trace form degenerate for n={params.n}")
        if theory.uses_brackets() and params.n < 2:
            raise EvalError("n=1 cannot realize a nonabelian bracket")
        self._pool_next = self.m + self.V
        self.assignments: dict = {}
        self.vertical: dict = {}
        self._atom_cache: dict = {}
        rng = random.Random(seed)
        af_rng = random.Random(antifield_seed) if antifield_seed is not None else None
        for sym in sorted(theory.roster, key=lambda s: s.name):
            # always consume the shared stream, then override antifield draws from
            # the side stream so non-antifield assignments stay bitwise identical
            pre_pool = self._pool_next
            value = self._draw(sym, rng, vertical=False)
            vert = self._draw(sym, rng, vertical=True)
            if af_rng is not None and sym.antifield_of is not None:
                post_pool = self._pool_next
                self._pool_next = pre_pool
                value = self._draw(sym, af_rng, vertical=False)
                vert = self._draw(sym, af_rng, vertical=True)
                assert self._pool_next == post_pool
            self.assignments[sym.name] = value
            self.vertical[sym.name] = vert

    # -- drawing ------------------------------------------------------------

    def _fresh_pool_bit(self) -> int:
        b = self._pool_next
        self._pool_next += 1
        return 1 << b

    def _rand_mode(self, rng) -> tuple:
        while True:
            k = tuple(rng.randint(-self.params.K, self.params.K) for _ in range(self.s))
            if any(k):
                return k

    def _rand_matrix(self, rng):
        return tuple(
            tuple((rng.randint(-3, 3), 0) for _ in range(self.n)) for _ in range(self.n)
        )

    def _legsets(self, h: int, rng, all_of_them: bool):
        combos = list(itertools.combinations(range(self.s), h))
        if not all_of_them and len(combos) > 1:
            rng.shuffle(combos)
            combos = combos[:1]
        return [sum(1 << b for b in c) for c in combos]

    def _split_leg_terms(self, sym: FieldSymbol, rng):
        """Leg-locked terms for split generators: pure dz or the complement."""
        out = []
        if sym.leg == "hol":
            # f dz = f dx0 + i f dx1
            mode = self._rand_mode(rng)
            M = self._rand_matrix(rng)
            out.append((1 << 0, mode, M))
            out.append((1 << 1, mode, _mat_scale(M, (0, 1))))
        else:
            mode = self._rand_mode(rng)
            M = self._rand_matrix(rng)
            out.append((1 << 0, mode, M))
            out.append((1 << 1, mode, _mat_scale(M, (0, -1))))
            for b in range(2, self.s):
                out.append((1 << b, self._rand_mode(rng), self._rand_matrix(rng)))
        return out

    def _draw(self, sym: FieldSymbol, rng, vertical: bool) -> ConcreteForm:
        if sym.h > self.s:
            return ConcreteForm.zero(self.n)  # transverse legs dropped on the stratum
        ghost_odd = sym.gh & 1
        data: dict = {}

        def put(mask, mode, M):
            dst = data.setdefault(mask, {})
            cur = dst.get(mode)
            dst[mode] = M if cur is None else _mat_add(cur, M)

        copies = range(self.V) if vertical else (
            range(self.params.pool_copies) if ghost_odd else range(1)
        )
        for copy_idx in copies:
            extra = 0
            if vertical:
                extra |= 1 << (self.m + copy_idx)
            if ghost_odd:
                extra |= self._fresh_pool_bit()
            if sym.leg is not None:
                if sym.h != 1:
                    raise GradingError(f"split leg on non-1-form field {sym.name}")
                for mask, mode, M in self._split_leg_terms(sym, rng):
                    put(mask | extra, mode, M)
                continue
            full_support = not ghost_odd and not vertical
            # with conjugate_modes each copy carries a +-k pair shared across
            # the leg sets, so products of different components reach the
            # constant mode and torus integrals are generically nonzero
            k = self._rand_mode(rng)
            kbar = tuple(-x for x in k)
            for legmask in self._legsets(sym.h, rng, full_support):
                put(legmask | extra, k, self._rand_matrix(rng))
                if self.params.conjugate_modes:
                    put(legmask | extra, kbar, self._rand_matrix(rng))
                if rng.random() < 0.5:
                    put(legmask | extra, (0,) * self.s, self._rand_matrix(rng))
        return ConcreteForm(data, Fraction(1), self.n).copy_pruned()

    # -- derivative and star actions ----------------------------------------

    def _apply_direction(self, x: ConcreteForm, direction: int, mult_fn) -> ConcreteForm:
        data: dict = {}
        bit = 1 << direction
        for mask, modes in x.data.items():
            if mask & bit:
                continue
            sign = -1 if ((mask & (bit - 1)).bit_count() & 1) else 1
            dst = data.setdefault(mask | bit, {})
            for mode, M in modes.items():
                c = mult_fn(mode)
                if c == _CZERO:
                    continue
                if sign < 0:
                    c = (-c[0], -c[1])
                scaled = _mat_scale(M, c)
                cur = dst.get(mode)
                dst[mode] = scaled if cur is None else _mat_add(cur, scaled)
        return ConcreteForm(data, x.scale, x.n).copy_pruned()

    def apply_d(self, x: ConcreteForm) -> ConcreteForm:
        out = ConcreteForm.zero(self.n)
        for mu in range(self.s):
            out = cf_add(out, self._apply_direction(x, mu, lambda k, mu=mu: (0, k[mu])))
        return out

    def apply_hol(self, x: ConcreteForm) -> ConcreteForm:
        # dz wedge d/dz with z = theta_0 + i theta_1: coefficient (i k0 + k1)/2
        if self.s < 2:
            raise EvalError("complex split needs at least two coordinates")
        p0 = self._apply_direction(x, 0, lambda k: (k[1], k[0]))
        p1 = self._apply_direction(x, 1, lambda k: _cmul((0, 1), (k[1], k[0])))
        out = cf_add(p0, p1)
        return cf_scale(out, Fraction(1, 2))

    def apply_antihol(self, x: ConcreteForm) -> ConcreteForm:
        p0 = self._apply_direction(x, 0, lambda k: (-k[1], k[0]))
        p1 = self._apply_direction(x, 1, lambda k: _cmul((0, -1), (-k[1], k[0])))
        out = cf_add(p0, p1)
        return cf_scale(out, Fraction(1, 2))

    def apply_op(self, x: ConcreteForm, op: str) -> ConcreteForm:
        if op == "D":
            return self.apply_d(x)
        if op == "h":
            return self.apply_hol(x)
        if op == "a":
            return self.apply_antihol(x)
        raise EvalError(f"unknown derivative op {op!r}")  # pragma: no cover

    def apply_star(self, x: ConcreteForm) -> ConcreteForm:
        metric = self.theory.metric
        if metric is None:
            raise EvalError("star evaluated in a realization with no metric")
        data: dict = {}
        dx_all = (1 << self.m) - 1
        for mask, modes in x.data.items():
            dx_part = mask & dx_all
            rest = mask & ~dx_all
            if metric == "euclidean":
                comp = dx_all & ~dx_part
                sign = _merge_sign(dx_part, comp)
                entries = [(comp | rest, sign)]
            elif metric == "lightcone":
                # 2d boundary star on the first two legs; transverse legs pulled back to zero
                if dx_part & ~0b11:
                    continue
                table = {0b00: (0b11, 1), 0b01: (0b10, -1), 0b10: (0b01, -1), 0b11: (0b00, -1)}
                newdx, sign = table[dx_part]
                entries = [(newdx | rest, sign)]
            else:
                raise EvalError(f"unknown metric {metric!r}")
            for newmask, sign in entries:
                dst = data.setdefault(newmask, {})
                for mode, M in modes.items():
                    scaled = _mat_scale(M, (sign, 0)) if sign < 0 else M
                    cur = dst.get(mode)
                    dst[mode] = scaled if cur is None else _mat_add(cur, scaled)
        return ConcreteForm(data, x.scale, x.n).copy_pruned()

    # -- evaluation ----------------------------------------------------------

    def eval_atom(self, atom) -> ConcreteForm:
        cached = self._atom_cache.get(atom)
        if cached is not None:
            return cached
        kind = atom[0]
        if kind == "g":
            name, word, dl = atom[1], atom[2], atom[3]
            if name not in self.assignments:
                raise EvalError(f"generator {name!r} not covered by the realization")
            out = self.vertical[name] if dl else self.assignments[name]
            for op in reversed(word):
                out = self.apply_op(out, op)
        elif kind == "b":
            out = cf_bracket(self.eval_atom(atom[1]), self.eval_atom(atom[2]))
        elif kind == "p":
            out = cf_pair(self.eval_atom(atom[1]), self.eval_atom(atom[2]))
        elif kind == "s":
            inner = self.eval_mono(atom[1])
            out = self.apply_star(inner)
            for op in reversed(atom[2]):
                out = self.apply_op(out, op)
        else:  # pragma: no cover
            raise EvalError(f"unknown atom kind {kind!r}")
        self._atom_cache[atom] = out
        return out

    def eval_mono(self, mono) -> ConcreteForm:
        out = ConcreteForm.scalar(Fraction(1), self.n, self.s)
        for atom in mono:
            out = cf_mul(out, self.eval_atom(atom))
            if out.is_zero():
                return out
        return out

    def eval_nf(self, nf: dict) -> ConcreteForm:
        g_v = max((mono_grading(m, self.theory.ctx).v for m in nf), default=0)
        if g_v > self.V:
            raise EvalError(f"vertical degree {g_v} exceeds the leg budget V={self.V}")
        out = ConcreteForm.zero(self.n)
        for mono, c in nf.items():
            out = cf_add(out, cf_scale(self.eval_mono(mono), c))
        return out

    def eval(self, e) -> ConcreteForm:
        """Structural evaluation; Del subtrees are normalized first."""
        if isinstance(e, dict):
            return self.eval_nf(e)
        if isinstance(e, Const):
            return ConcreteForm.scalar(e.value, self.n, self.s)
        if isinstance(e, Gen):
            members = self.theory.ctx.superfields.get(e.name)
            if members is not None:
                out = ConcreteForm.zero(self.n)
                for name in members:
                    out = cf_add(out, self.eval(Gen(name)))
                return out
            if e.name not in self.assignments:
                raise EvalError(f"generator {e.name!r} not covered by the realization")
            return self.assignments[e.name]
        if isinstance(e, Sum):
            out = ConcreteForm.zero(self.n)
            for t in e.terms:
                out = cf_add(out, self.eval(t))
            return out
        if isinstance(e, Neg):
            return cf_scale(self.eval(e.arg), Fraction(-1))
        if isinstance(e, Prod):
            # a bare product of two algebra-valued factors has open indices;
            # its evaluation is defined through the canonical form, where the
            # factor order is fixed (matrix slots do not graded-commute)
            from .expr import mono_valuation

            vector_factors = 0
            for f in e.factors:
                nf = normalize(f, self.theory.ctx)
                if any(mono_valuation(m, self.theory.ctx) != "scalar" for m in nf):
                    vector_factors += 1
            if vector_factors > 1:
                return self.eval_nf(normalize(e, self.theory.ctx))
            out = ConcreteForm.scalar(Fraction(1), self.n, self.s)
            for f in e.factors:
                out = cf_mul(out, self.eval(f))
            return out
        if isinstance(e, Bracket):
            return cf_bracket(self.eval(e.a), self.eval(e.b))
        if isinstance(e, Pair):
            return cf_pair(self.eval(e.a), self.eval(e.b))
        if isinstance(e, D):
            return self.apply_d(self.eval(e.arg))
        if isinstance(e, Hol):
            return self.apply_hol(self.eval(e.arg))
        if isinstance(e, AHol):
            return self.apply_antihol(self.eval(e.arg))
        if isinstance(e, Star):
            return self.apply_star(self.eval(e.arg))
        if isinstance(e, Del):
            return self.eval_nf(normalize(e, self.theory.ctx))
        raise EvalError(f"cannot evaluate {e!r}")

    def integral_top(self, e) -> ConcreteForm:
        """Exact fiber integral over the stratum torus (only the constant mode survives)."""
        nf = normalize(e, self.theory.ctx) if not isinstance(e, ConcreteForm) else None
        if nf is not None:
            for mono in nf:
                if mono_grading(mono, self.theory.ctx).h != self.s:
                    raise EvalError(
                        f"integral over a {self.s}-stratum needs a form of degree {self.s}"
                    )
            value = self.eval_nf(nf)
        else:
            value = e
        dx_all = (1 << self.m) - 1
        full = (1 << self.s) - 1
        zero_mode = (0,) * self.s
        data = {}
        for mask, modes in value.data.items():
            if (mask & dx_all) != full:
                continue
            M = modes.get(zero_mode)
            if M is None or _mat_iszero(M):
                continue
            data[mask & ~dx_all] = {zero_mode: M}
        return ConcreteForm(data, value.scale, value.n).copy_pruned()


def restricted_realization(theory: Theory, codim: int, seed: int, **kwargs) -> "Realization":
    """Per-stratum model: transverse legs dropped, fields live on a torus of
    dimension m - codim.  Components of degree above the stratum dimension
    evaluate to zero, which is the restriction used by the integrated checks."""
    if not 0 <= codim < theory.m:
        raise EvalError(f"codimension {codim} outside 0..{theory.m - 1}")
    return sample_realization(theory, seed, stratum_dim=theory.m - codim, **kwargs)


def sample_realization(
    theory: Theory,
    seed: int,
    n: int = 2,
    K: int = 1,
    V: int = 3,
    stratum_dim: Optional[int] = None,
    antifield_seed: Optional[int] = None,
    conjugate_modes: bool = False,
) -> Realization:
    """Deterministic realization of a theory; same seed gives the same assignment."""
    if K < 1:
        raise EvalError("Fourier cutoff K must be >= 1")
    params = RealizationParams(n=n, K=K, V=V, stratum_dim=stratum_dim,
                               conjugate_modes=conjugate_modes)
    return Realization(theory, seed, params, antifield_seed=antifield_seed)


# ---------------------------------------------------------------------------
# Check reports


SOUNDNESS_NOTE = (
    "identities are polynomial in the drawn coefficients; pass on independent "
    "random draws is a Schwartz-Zippel-style certificate, exact zero per draw"
)


@dataclass
class CheckReport:
    name: str
    theory: str
    status: str  # "pass" | "fail"
    trials: int
    realizations: list = dc_field(default_factory=list)
    witness: Optional[str] = None
    millis: float = 0.0
    soundness: str = SOUNDNESS_NOTE
    anchor: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        out = {
            "name": self.name,
            "theory": self.theory,
            "anchor": self.anchor,
            "status": self.status,
            "trials": self.trials,
            "millis": round(self.millis, 3),
        }
        if self.witness:
            out["witness"] = self.witness
        return out


def _trial_params(theory: Theory, trials: int, n_values=(2, 3)):
    """Alternate matrix sizes across trials; bracket-free theories may use n=1."""
    sizes = list(n_values) if theory.uses_brackets() else [1, 2]
    for t in range(trials):
        yield t, sizes[t % len(sizes)]


def is_zero(
    e,
    theory: Theory,
    trials: int = 5,
    name: str = "is-zero",
    seed: int = 0,
    stratum_dim: Optional[int] = None,
    n_values=(2, 3),
    anchor: str = "",
) -> CheckReport:
    """Certify that an expression evaluates to the exact zero form on every trial."""
    t0 = time.perf_counter()
    nf = normalize(e, theory.ctx)
    realizations = []
    witness = None
    status = "pass"
    for t, n in _trial_params(theory, trials, n_values):
        r = sample_realization(theory, seed=seed * 1000003 + t, n=n, stratum_dim=stratum_dim)
        realizations.append({"seed": r.seed, "n": n, "K": r.params.K, "V": r.V, "stratum": r.s})
        value = r.eval_nf(nf)
        if not value.is_zero():
            status = "fail"
            witness = value.first_witness(theory.m, r.V)
            break
    return CheckReport(
        name=name,
        theory=theory.name,
        status=status,
        trials=len(realizations),
        realizations=realizations,
        witness=witness,
        millis=(time.perf_counter() - t0) * 1000,
        anchor=anchor,
    )


def equal_mod_d(
    e1,
    e2,
    theory: Theory,
    trials: int = 5,
    stratum_dim: Optional[int] = None,
    name: str = "equal-mod-d",
    seed: int = 0,
    anchor: str = "",
) -> CheckReport:
    """Probabilistic certificate that e1 - e2 integrates to zero on a closed stratum."""
    t0 = time.perf_counter()
    ctx = theory.ctx
    nf1 = normalize(e1, ctx)
    nf2 = normalize(e2, ctx)
    diff = dict(nf1)
    for mono, c in nf2.items():
        cur = diff.get(mono, Fraction(0)) - c
        if cur:
            diff[mono] = cur
        else:
            diff.pop(mono, None)
    realizations = []
    witness = None
    status = "pass"
    for t, n in _trial_params(theory, trials):
        r = sample_realization(theory, seed=seed * 7777 + t, n=n, stratum_dim=stratum_dim,
                               conjugate_modes=True)
        realizations.append({"seed": r.seed, "n": n, "stratum": r.s})
        value = r.integral_top(diff)
        if not value.is_zero():
            status = "fail"
            witness = value.first_witness(theory.m, r.V)
            break
    rep = CheckReport(
        name=name,
        theory=theory.name,
        status=status,
        trials=len(realizations),
        realizations=realizations,
        witness=witness,
        millis=(time.perf_counter() - t0) * 1000,
        anchor=anchor,
    )
    rep.soundness = (
        "probabilistic certificate of d-exactness on a closed stratum "
        "(exact torus integration per draw); " + SOUNDNESS_NOTE
    )
    return rep
