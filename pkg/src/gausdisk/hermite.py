"""Hermite polynomials (probabilists' normalization) and the matched-moment
quadrature rules built from their roots.

The polynomials follow He_0 = 1, He_1 = x, He_{m+1} = x*He_m - m*He_{m-1},
which are orthogonal for the standard Gaussian weight.  A k-point rule
places nodes at the roots of He_k with weights
(k-1)! / (k * He_{k-1}(x_i)**2); it reproduces the Gaussian moments
0, 1, 0, 3, ... up to degree 2k-1 and its nodes all lie inside
[-sqrt(4k+2), sqrt(4k+2)].

Nodes are found by symmetric tridiagonal eigenvalues in double precision
(off-diagonal entries sqrt(1), sqrt(2), ...) and then polished by Newton
iteration at elevated precision, using He_k' = k*He_{k-1}.  Weights are
renormalized so they sum to one exactly at working precision before the
final rounding, making the rule a probability measure to within the
stated precision.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np
from mpmath.libmp import (
    fone,
    from_int,
    fzero,
    mpf_add,
    mpf_ceil,
    mpf_cmp,
    mpf_div,
    mpf_mul,
    mpf_mul_int,
    mpf_neg,
    mpf_pos,
    mpf_pow_int,
    mpf_shift,
    mpf_sub,
    round_nearest,
    to_float,
    to_int,
)

from .errors import (
    ConfigError,
    ConvergenceError,
    MathInvariantError,
    SupportViolation,
)
from .precision import MIN_BITS, PComplex, PReal, _check_bits

__all__ = [
    "QuadratureRule",
    "hermite_pair",
    "build_rule",
    "moment",
    "k_for_support",
    "rule_to_csv",
    "rule_from_csv",
]

_RND = round_nearest


def hermite_pair(n: int, x):
    """Return (He_n(x), He_{n-1}(x)); He_{-1} is taken to be 0.

    ``x`` may be a PReal, a PComplex, an int, or a float; the result has
    the same kind and stated precision as ``x``.  The recurrence runs
    with 64 guard bits before the final rounding.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ConfigError(f"hermite_pair expects an integer n >= 0, got {n!r}")
    if isinstance(x, (int, float)):
        x = PReal(x)
    if not isinstance(x, (PReal, PComplex)):
        raise ConfigError(f"hermite_pair expects a scalar, got {type(x).__name__}")
    bits = x.bits
    xw = x.round_to(bits + 64)
    one = (PReal(1) if isinstance(x, PReal) else PComplex(1, 0)).round_to(bits + 64)
    zero = one - one
    if n == 0:
        return one.round_to(bits), zero.round_to(bits)
    prev, cur = one, xw
    for m in range(1, n):
        prev, cur = cur, xw * cur - m * prev
    return cur.round_to(bits), prev.round_to(bits)


def _he_pair_raw(n: int, x, prec: int):
    """(He_n(x), He_{n-1}(x)) on raw libmp tuples, n >= 1."""
    prev, cur = fone, x
    for m in range(1, n):
        nxt = mpf_sub(
            mpf_mul(x, cur, prec, _RND),
            mpf_mul_int(prev, m, prec, _RND),
            prec,
            _RND,
        )
        prev, cur = cur, nxt
    return cur, prev


@dataclass(frozen=True)
class QuadratureRule:
    """A k-point matched-moment rule for the standard Gaussian.

    Nodes are sorted ascending and symmetric about zero; weights are
    positive and sum to one at the stated precision.
    """

    k: int
    bits: int
    nodes: tuple[PReal, ...]
    weights: tuple[PReal, ...]

    @property
    def support_radius(self) -> PReal:
        return abs(self.nodes[-1])

    def atoms(self) -> Iterable[tuple[PReal, PReal]]:
        return zip(self.nodes, self.weights)


_RULE_CACHE: dict[tuple[int, int], QuadratureRule] = {}


def _polished_positive_roots(k: int, bits: int) -> list:
    """Newton-refined positive roots of He_k as raw tuples."""
    off = np.sqrt(np.arange(1.0, k))
    jacobi = np.diag(off, 1) + np.diag(off, -1)
    seeds = np.linalg.eigvalsh(jacobi)
    positive = [float(s) for s in seeds if s > 1e-9]

    work = bits + 128
    tol_exp = -(bits + 80)
    max_iter = 4 * bits
    roots = []
    for seed in positive:
        x = PReal(seed, work).raw
        for _ in range(max_iter):
            he_k, he_km1 = _he_pair_raw(k, x, work)
            step = mpf_div(he_k, mpf_mul_int(he_km1, k, work, _RND), work, _RND)
            x = mpf_sub(x, step, work, _RND)
            if step[1] == 0 or (step[2] + step[3]) <= tol_exp:
                break
        else:
            raise ConvergenceError(
                f"node refinement for k={k} did not reach 2^{tol_exp} "
                f"in {max_iter} iterations"
            )
        roots.append(x)
    # Doubles are enough to order the well-separated refined roots.
    roots.sort(key=lambda r: to_float(r, rnd=_RND))
    return roots


def build_rule(k: int, bits: int = 256) -> QuadratureRule:
    """Build (and cache) the k-point rule at the stated precision."""
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ConfigError(f"rule size must be an integer k >= 1, got {k!r}")
    _check_bits(bits)
    key = (k, bits)
    cached = _RULE_CACHE.get(key)
    if cached is not None:
        return cached

    work = bits + 128
    if k == 1:
        rule = QuadratureRule(
            k=1,
            bits=bits,
            nodes=(PReal(0, bits),),
            weights=(PReal(1, bits),),
        )
        _RULE_CACHE[key] = rule
        return rule

    positives = _polished_positive_roots(k, bits)
    if len(positives) != k // 2:
        raise MathInvariantError(
            f"expected {k // 2} positive roots for k={k}, found {len(positives)}"
        )

    centers = [] if k % 2 == 0 else [fzero]

    fact = from_int(math.factorial(k - 1))
    half_weights = []
    for x in centers + positives:
        _, he_km1 = _he_pair_raw(k, x, work)
        denom = mpf_mul_int(mpf_mul(he_km1, he_km1, work, _RND), k, work, _RND)
        half_weights.append(mpf_div(fact, denom, work, _RND))
    raw_weights = list(reversed(half_weights[len(centers):])) + half_weights

    total = fzero
    for w in raw_weights:
        total = mpf_add(total, w, work, _RND)
    raw_weights = [mpf_div(w, total, work, _RND) for w in raw_weights]

    # Round to the stated precision, mirroring negatives exactly so the
    # rule stays symmetric bit for bit.
    half_nodes = [mpf_pos(r, bits, _RND) for r in centers + positives]
    neg_nodes = [mpf_neg(r) for r in reversed(half_nodes[len(centers):])]
    node_vals = tuple(PReal._wrap(r, bits) for r in neg_nodes + half_nodes)

    w_half = [PReal._wrap(mpf_pos(w, bits, _RND), bits) for w in raw_weights[k // 2:]]
    weight_vals = tuple(list(reversed(w_half[len(centers):])) + w_half)

    check = fzero
    for w in weight_vals:
        check = mpf_add(check, w.raw, bits + 32, _RND)
    drift = mpf_sub(check, fone, bits + 32, _RND)
    if drift[1] != 0 and (drift[2] + drift[3]) > -(bits - 16):
        raise MathInvariantError(
            f"rule weights for k={k} sum to 1 only within 2^{drift[2] + drift[3]}"
        )

    bound = mpf_shift(from_int(4 * k + 2), 0)
    top = node_vals[-1].raw
    if mpf_cmp(mpf_mul(top, top, work, _RND), bound) > 0:
        raise SupportViolation(
            f"largest node of the k={k} rule escaped sqrt({4 * k + 2})"
        )

    rule = QuadratureRule(k=k, bits=bits, nodes=node_vals, weights=weight_vals)
    _RULE_CACHE[key] = rule
    return rule


def moment(rule: QuadratureRule, i: int) -> PReal:
    """The i-th moment sum(w * x**i) of the rule.

    Mirror nodes are paired before summing, so odd moments come out as
    exact zeros rather than rounding residue.
    """
    if not isinstance(i, int) or isinstance(i, bool) or i < 0:
        raise ConfigError(f"moment order must be an integer >= 0, got {i!r}")
    work = rule.bits + 64
    n = len(rule.nodes)
    total = fzero
    for j in range(n // 2):
        x = rule.nodes[n - 1 - j].raw
        pow_pos = mpf_pow_int(x, i, work, _RND)
        pow_neg = mpf_neg(pow_pos) if i % 2 else pow_pos
        paired = mpf_add(pow_pos, pow_neg, work, _RND)
        total = mpf_add(
            total, mpf_mul(rule.weights[j].raw, paired, work, _RND), work, _RND
        )
    if n % 2:
        mid = rule.nodes[n // 2].raw
        if mid[1] != 0:
            term = mpf_mul(
                rule.weights[n // 2].raw, mpf_pow_int(mid, i, work, _RND), work, _RND
            )
            total = mpf_add(total, term, work, _RND)
        elif i == 0:
            total = mpf_add(total, rule.weights[n // 2].raw, work, _RND)
    return PReal._wrap(mpf_pos(total, rule.bits, _RND), rule.bits)


def k_for_support(a) -> int:
    """Smallest admissible rule size ceil(a**2 / 8) for support [-a, a].

    Raises SupportViolation when the resulting rule's node interval
    sqrt(4k+2) would not fit inside [-a, a].
    """
    if isinstance(a, (int, float)):
        a = PReal(a)
    if not isinstance(a, PReal):
        raise ConfigError(f"k_for_support expects a real scalar, got {type(a).__name__}")
    if a < 1:
        raise ConfigError("support half-width must be at least 1")
    exact = 2 * a.bits + 8
    sq = mpf_mul(a.raw, a.raw, exact, _RND)
    eighth = mpf_shift(sq, -3)
    k = int(to_int(mpf_ceil(eighth, exact, _RND)))
    if mpf_cmp(from_int(4 * k + 2), sq) > 0:
        raise SupportViolation(
            f"a={float(a):g} cannot host the k={k} rule: "
            f"sqrt({4 * k + 2}) exceeds a"
        )
    return k


def rule_to_csv(rule: QuadratureRule, out: TextIO) -> None:
    """Write the rule as CSV with exact value tags."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["node", "weight"])
    for x, w in rule.atoms():
        writer.writerow([x.serialize(), w.serialize()])


def rule_from_csv(src: TextIO) -> QuadratureRule:
    """Rebuild a rule written by :func:`rule_to_csv`, bit for bit."""
    reader = csv.reader(src)
    header = next(reader, None)
    if header != ["node", "weight"]:
        raise ConfigError("expected a CSV with header node,weight")
    nodes, weights = [], []
    for row in reader:
        if not row:
            continue
        if len(row) != 2:
            raise ConfigError(f"malformed rule row {row!r}")
        nodes.append(PReal.parse(row[0]))
        weights.append(PReal.parse(row[1]))
    if not nodes:
        raise ConfigError("rule CSV contained no atoms")
    bits = max(v.bits for v in nodes + weights)
    return QuadratureRule(
        k=len(nodes), bits=bits, nodes=tuple(nodes), weights=tuple(weights)
    )
