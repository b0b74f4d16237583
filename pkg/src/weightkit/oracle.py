"""Deterministic instance generation and theorem batteries.

Every trial draws its instance from a ``random.Random`` seeded by
``trial_seed(seed, i)``, so a failing trial replays from its seed alone.
Batteries return a :class:`BatteryReport`; failures carry the instance
serialized in the text file format.
"""

from __future__ import annotations

import hashlib
import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .complexes import (ChainMap, Complex, FgModule, canonical_decompose, chain_map_basis, direct_sum,
                        direct_sum_maps, homology)
from .errors import GenerationFailure, UnknownBattery
from .fileformat import Document, serialize_document
from .functor_consv import conservativity_check
from .homotopy import is_null_homotopic, sim_interval, stupid_membership, weakly_homotopic
from .pd_one import (COHOMOLOGICAL, HOMOLOGICAL, coefficient_family, coefficient_vanishes,
                     coskeleton_membership, hom_decomposition, kill_criterion_pd1, skeleton_membership,
                     without_weights_pd1)
from .ring_linalg import CoeffRing, Dual, Matrix, nullspace
from .weights import (MODES, kills_weights, perturbed_truncation, stupid_truncate,
                      weight_complex_via_tower, weight_range, without_weights)

DEFAULT_SEED = 20240601
MAX_SPAN = 6


def trial_seed(seed: int, i: int, salt: str = "") -> int:
    """64-bit per-trial seed derived from ``(seed, salt, i)``."""
    h = hashlib.blake2b(f"{seed}:{salt}:{i}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


def parse_ring_name(name: str) -> CoeffRing:
    """``"Z"``, ``"Q"``, ``"F2"``, ``"F 3"``, ``"Zeps2"`` …"""
    s = name.replace(" ", "")
    if s in ("Z", "Q"):
        return CoeffRing(s)
    if s.startswith("Zeps"):
        return CoeffRing.dual_numbers(int(s[4:] or 2))
    if s.startswith("F"):
        return CoeffRing.prime_field(int(s[1:]))
    raise ValueError(f"unknown ring {name!r}")


# ---------------------------------------------------------------------------
# Generation

@dataclass(frozen=True)
class GenParams:
    ring: CoeffRing
    degree_lo: int
    degree_hi: int
    max_dim: int
    entry_bound: int = 3
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.degree_hi - self.degree_lo + 1 > MAX_SPAN:
            raise ValueError(f"degree span exceeds {MAX_SPAN}")
        if self.degree_hi < self.degree_lo:
            raise ValueError("empty degree range")
        if self.max_dim < 0 or self.entry_bound < 1:
            raise ValueError("max_dim must be >= 0 and entry_bound >= 1")


def _entry(ring: CoeffRing, rng: random.Random, bound: int):
    if ring.tag == "Zeps":
        return Dual(rng.randrange(ring.p), rng.randrange(ring.p), ring.p)
    if ring.tag == "F":
        return rng.randrange(ring.p)
    return rng.randint(-bound, bound)


def _random_matrix(ring, r, c, rng, bound, density) -> Matrix:
    vals = [_entry(ring, rng, bound) if rng.random() < density else 0 for _ in range(r * c)]
    return Matrix(ring, r, c, vals) if r * c else Matrix.zeros(ring, r, c)


def _in_bound(ring, row, bound) -> bool:
    return ring.tag not in ("Z", "Q") or all(abs(x) <= bound for x in row)


def _next_differential(ring, prev: Matrix, rows: int, rng, bound, tries: int = 4) -> Matrix:
    """A random ``rows × prev.rows`` matrix ``D`` with ``D·prev = 0``.

    A few unconstrained draws are tried first; if none composes to zero the
    draw is repaired row by row: each row becomes a random combination of a
    basis of the left kernel of ``prev``, kept only if it respects the entry
    bound.
    """
    cols = prev.rows
    for _ in range(tries):
        D = _random_matrix(ring, rows, cols, rng, bound, rng.choice((0.3, 0.6, 1.0)))
        if (D @ prev).is_zero():
            return D
    K = nullspace(prev.T)            # columns span {x : x·prev = 0}
    basis = [K.submatrix(range(K.rows), [k]).T for k in range(K.cols)]
    out = []
    for _ in range(rows):
        row = Matrix.zeros(ring, 1, cols)
        if basis and rng.random() < 0.85:
            for v in basis:
                c = _entry(ring, rng, 1) if ring.tag in ("Z", "Q") else _entry(ring, rng, bound)
                row = row + v.scale(c)
            if ring.tag in ("Z", "Q") and rng.random() < 0.3:
                row = row.scale(rng.randint(2, max(2, bound)))
            if not _in_bound(ring, row.entries, bound):
                row = Matrix.zeros(ring, 1, cols)
        out.append(list(row.entries))
    D = Matrix.from_rows(ring, out, cols=cols)
    if not (D @ prev).is_zero():
        raise GenerationFailure("repair did not produce a complex")
    return D


def random_complex(params: GenParams, rng: random.Random | None = None) -> Complex:
    """A random bounded complex with the given shape bounds."""
    rng = rng or random.Random(params.seed)
    ring = params.ring
    lo, hi = params.degree_lo, params.degree_hi
    for _ in range(8):
        dims = [rng.randint(0, params.max_dim) for _ in range(lo, hi + 1)]
        if params.max_dim and not any(dims):
            continue
        break
    diffs = []
    prev = Matrix.zeros(ring, dims[0], 0)
    for k in range(len(dims) - 1):
        D = _next_differential(ring, prev, dims[k + 1], rng, params.entry_bound)
        diffs.append(D)
        prev = D
    return Complex(ring, lo, dims, diffs)


def random_chain_map(M: Complex, N: Complex, rng: random.Random, coeff_bound: int = 1) -> ChainMap:
    """A random combination of a basis of the chain maps ``M → N``."""
    basis = chain_map_basis(M, N)
    f = ChainMap.zero(M, N)
    ring = M.ring
    for b in basis:
        if ring.tag in ("Z", "Q"):
            c = rng.randint(-coeff_bound, coeff_bound)
        else:
            c = _entry(ring, rng, coeff_bound)
        f = f + b.scale(c)
    if not f.src == M or not f.tgt == N:
        raise GenerationFailure("chain map generation lost its endpoints")
    return f


def gen_random(params: GenParams, with_map: bool = False):
    """``Complex`` or, with ``with_map``, a triple ``(M, N, g)``; deterministic in ``params.seed``."""
    rng = random.Random(params.seed)
    M = random_complex(params, rng)
    if not with_map:
        return M
    N = random_complex(params, rng)
    return M, N, random_chain_map(M, N, rng)


def _random_shape(rng: random.Random, ring, span_max: int, max_dim: int, bound: int = 3,
                  lo_range=(-2, 1)) -> GenParams:
    span = rng.randint(1, span_max)
    lo = rng.randint(*lo_range)
    return GenParams(ring, lo, lo + span - 1, max_dim, bound, rng.getrandbits(64))


def _complex(rng, ring, span_max=4, max_dim=3, bound=3, lo_range=(-2, 1)) -> Complex:
    p = _random_shape(rng, ring, span_max, max_dim, bound, lo_range)
    return random_complex(p, rng)


def _map(rng, ring, span_max=4, max_dim=3, bound=3, same_prob=0.3):
    M = _complex(rng, ring, span_max, max_dim, bound)
    if rng.random() < same_prob:
        N = M
    else:
        N = _complex(rng, ring, span_max, max_dim, bound)
    g = random_chain_map(M, N, rng)
    if N is M and rng.random() < 0.3:
        g = ChainMap.identity(M).scale(rng.choice((1, 2, 3)) if ring.tag in ("Z", "Q") else 1)
    return M, N, g


def _weight_window(*cs: Complex) -> tuple[int, int]:
    lo, hi = None, None
    for c in cs:
        if c.is_zero():
            continue
        a, b = weight_range(c)
        lo = a if lo is None else min(lo, a)
        hi = b if hi is None else max(hi, b)
    if lo is None:
        return 0, 0
    return lo - 1, hi + 1


def _range(rng, *cs) -> tuple[int, int]:
    lo, hi = _weight_window(*cs)
    m = rng.randint(lo, hi)
    n = rng.randint(m, min(hi, m + 3))
    return m, n


# ---------------------------------------------------------------------------
# Exhaustive enumeration over F_2

def _all_matrices(ring, r, c) -> Iterator[Matrix]:
    p = ring.p
    for vals in itertools.product(range(p), repeat=r * c):
        yield Matrix(ring, r, c, list(vals)) if r * c else Matrix.zeros(ring, r, c)


def enumerate_small(ring: CoeffRing, degree_lo: int, degree_hi: int, max_dim: int) -> Iterator[Complex]:
    """Every complex over ``F_2`` with terms in ``[degree_lo, degree_hi]`` and ranks ``≤ max_dim``, once each."""
    if ring.tag != "F" or ring.p != 2:
        raise ValueError("enumerate_small works over F_2")
    span = degree_hi - degree_lo + 1
    if span > 3 or max_dim > 2 or span < 1:
        raise ValueError("enumerate_small needs span <= 3 and max_dim <= 2")
    seen_zero = False
    for dims in itertools.product(range(max_dim + 1), repeat=span):
        if not any(dims):
            if seen_zero:
                continue
            seen_zero = True
            yield Complex.zero(ring)
            continue
        # distinct rank vectors in one window give distinct complexes
        shapes = [list(_all_matrices(ring, dims[k + 1], dims[k])) for k in range(span - 1)]
        for ds in itertools.product(*shapes):
            if any(not (ds[k + 1] @ ds[k]).is_zero() for k in range(len(ds) - 1)):
                continue
            yield Complex(ring, degree_lo, list(dims), list(ds))


def enumerate_chain_maps(M: Complex, N: Complex) -> Iterator[ChainMap]:
    """All chain maps ``M → N`` over a prime field (the span of a basis)."""
    ring = M.ring
    basis = chain_map_basis(M, N)
    for coeffs in itertools.product(range(ring.p), repeat=len(basis)):
        f = ChainMap.zero(M, N)
        for c, b in zip(coeffs, basis):
            if c:
                f = f + b.scale(c)
        yield f


def find_weak_pairs(ring: CoeffRing, complexes, limit: int = 1):
    """Maps ``f : M → N`` with ``f ∼ 0`` weakly but not null-homotopic.

    ``complexes`` is a finite iterable of complexes over a finite ring; all
    chain maps between all pairs are examined.
    """
    cs = list(complexes)
    found = []
    for M in cs:
        for N in cs:
            for f in _all_chain_maps(M, N):
                if f.is_zero():
                    continue
                if weakly_homotopic(f, ChainMap.zero(M, N)) is not None and is_null_homotopic(f) is None:
                    found.append(f)
                    if len(found) >= limit:
                        return found
    return found


def _all_chain_maps(M: Complex, N: Complex) -> Iterator[ChainMap]:
    ring = M.ring
    if ring.tag == "F":
        yield from enumerate_chain_maps(M, N)
        return
    if ring.tag != "Zeps":
        raise ValueError("exhaustive map enumeration needs a finite ring")
    # the basis is an F_p-basis of the chain-map space
    basis = chain_map_basis(M, N)
    for coeffs in itertools.product(range(ring.p), repeat=len(basis)):
        f = ChainMap.zero(M, N)
        for c, b in zip(coeffs, basis):
            if c:
                f = f + b.scale(c)
        yield f


def small_dual_complexes(p: int = 2, degree_lo: int = -1, degree_hi: int = 0, max_dim: int = 1):
    """Every complex over ``F_p[e]/e²`` in a tiny window (span ≤ 2, ranks ≤ 1)."""
    ring = CoeffRing.dual_numbers(p)
    if degree_hi - degree_lo + 1 > 2 or max_dim > 1:
        raise ValueError("small_dual_complexes is limited to span 2 and rank 1")
    elems = [Dual(a, b, p) for a in range(p) for b in range(p)]
    span = degree_hi - degree_lo + 1
    out = []
    for dims in itertools.product(range(max_dim + 1), repeat=span):
        if not any(dims):
            continue
        if span == 2 and dims[0] and dims[1]:
            for x in elems:
                # d∘d = 0 is automatic for two terms
                out.append(Complex(ring, degree_lo, list(dims), [Matrix(ring, 1, 1, [x])]))
        else:
            out.append(Complex(ring, degree_lo, list(dims)))
    return out


# ---------------------------------------------------------------------------
# Batteries

@dataclass
class TrialOutcome:
    ok: bool
    detail: str = ""
    instance: Document | None = None
    stats: dict = field(default_factory=dict)


@dataclass
class Failure:
    trial: int
    ring: str
    seed: int
    detail: str
    dump: str

    def to_json(self) -> dict:
        return {"trial": self.trial, "ring": self.ring, "seed": self.seed,
                "detail": self.detail, "dump": self.dump}


@dataclass
class BatteryReport:
    name: str
    seed: int
    trials: int
    checks: int
    failures: list
    elapsed: float
    stats: dict = field(default_factory=dict)
    assertive: bool = True

    @property
    def passed(self) -> bool:
        return not self.failures or not self.assertive

    def to_json(self) -> dict:
        return {"battery": self.name, "seed": self.seed, "trials": self.trials, "checks": self.checks,
                "passed": self.passed, "assertive": self.assertive,
                "elapsed_seconds": round(self.elapsed, 3), "stats": self.stats,
                "failures": [f.to_json() for f in self.failures]}


@dataclass
class Battery:
    name: str
    description: str
    trial: Callable[[random.Random, CoeffRing], TrialOutcome]
    rings: tuple = ("Z",)
    default_trials: int = 100
    exhaustive: Callable[[], Iterator[TrialOutcome]] | None = None
    assertive: bool = True


BATTERIES: dict[str, Battery] = {}


def register(b: Battery) -> Battery:
    BATTERIES[b.name] = b
    return b


def battery_names() -> list[str]:
    return sorted(BATTERIES)


def _doc(ring, complexes: dict, maps: dict | None = None) -> Document:
    return Document(ring, dict(complexes), dict(maps or {}))


def _map_doc(g: ChainMap, extra: dict | None = None) -> Document:
    cs = {"M": g.src}
    tgt = "M"
    if g.tgt != g.src:
        cs["N"] = g.tgt
        tgt = "N"
    return _doc(g.ring, cs, {"g": g})


def _merge_stats(acc: dict, new: dict):
    for k, v in new.items():
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            acc[k] = acc.get(k, 0) + v
        elif isinstance(v, bool):
            acc[k] = acc.get(k, 0) + int(v)
        else:
            acc.setdefault(k, v)


def run_trial(name: str, ring_name: str, seed_i: int) -> TrialOutcome:
    """Replay one trial from its seed."""
    b = BATTERIES.get(name)
    if b is None:
        raise UnknownBattery(f"no battery named {name!r}; known: {', '.join(battery_names())}")
    return b.trial(random.Random(seed_i), parse_ring_name(ring_name))


def run_battery(name: str, trials: int | None = None, seed: int = DEFAULT_SEED,
                rings: tuple | None = None, exhaustive: bool = True,
                max_failures: int = 5) -> BatteryReport:
    """Run ``trials`` trials per ring (plus any exhaustive phase)."""
    b = BATTERIES.get(name)
    if b is None:
        raise UnknownBattery(f"no battery named {name!r}; known: {', '.join(battery_names())}")
    trials = b.default_trials if trials is None else trials
    rings = tuple(rings or b.rings)
    t0 = time.perf_counter()
    failures: list[Failure] = []
    stats: dict = {}
    checks = 0
    if exhaustive and b.exhaustive is not None:
        for k, out in enumerate(b.exhaustive()):
            checks += 1
            _merge_stats(stats, out.stats)
            if not out.ok and len(failures) < max_failures:
                dump = serialize_document(out.instance) if out.instance else ""
                failures.append(Failure(k, "exhaustive", -1, out.detail, dump))
    for ring_name in rings:
        ring = parse_ring_name(ring_name)
        for i in range(trials):
            s = trial_seed(seed, i, f"{name}/{ring_name}")
            out = b.trial(random.Random(s), ring)
            checks += 1
            _merge_stats(stats, out.stats)
            if not out.ok and len(failures) < max_failures:
                dump = serialize_document(out.instance) if out.instance else ""
                failures.append(Failure(i, ring_name, s, out.detail, dump))
    return BatteryReport(name, seed, trials, checks, failures, time.perf_counter() - t0, stats,
                         b.assertive)


# -- seven-condition equivalence ------------------------------------------------

def _pkillw_trial(rng: random.Random, ring: CoeffRing) -> TrialOutcome:
    M, N, g = _map(rng, ring)
    m, n = _range(rng, M, N)
    verdicts = {}
    for mode in MODES:
        verdicts[mode] = kills_weights(g, m, n, mode=mode, rng=rng) is not None
    for k in range(3):
        rows = (perturbed_truncation(M, n, rng), perturbed_truncation(N, m - 1, rng))
        verdicts[f"7/perturbed{k}"] = kills_weights(g, m, n, mode="7", rows=rows) is not None
    ok = len(set(verdicts.values())) == 1
    return TrialOutcome(ok, f"range [{m},{n}] verdicts {verdicts}", _map_doc(g),
                        {"kills": verdicts["1"]})


register(Battery("pkillw-equivalence",
                 "all conditions for 'g kills weights m..n' agree, including perturbed decompositions",
                 _pkillw_trial, ("F2", "Z"), 500))


# -- Hom formula -----------------------------------------------------------------

def _hom_trial(rng, ring) -> TrialOutcome:
    M = _complex(rng, ring)
    N = _complex(rng, ring)
    hd = hom_decomposition(M, N)
    return TrialOutcome(hd.matches, f"predicted {hd.predicted} actual {hd.actual}",
                        _doc(ring, {"M": M, "N": N}), {"nonzero": not hd.actual.is_zero()})


register(Battery("hom-formula", "Hom in the homotopy category equals Hom ⊕ Ext of homology",
                 _hom_trial, ("Z",), 200))


# -- homology criteria for killing ----------------------------------------------------

def _pd1_trial(rng, ring) -> TrialOutcome:
    M, N, g = _map(rng, ring)
    m, n = _range(rng, M, N)
    a = kill_criterion_pd1(g, m)
    b = kills_weights(g, m, m) is not None
    c = without_weights_pd1(M, m, n)
    d = without_weights(M, m, n) is not None
    ok = a == b and c == d
    return TrialOutcome(ok, f"m={m} n={n}: criterion {a} vs kills {b}; pd1 without {c} vs without {d}",
                        _map_doc(g), {"kills": b, "without": d})


register(Battery("pd1-criteria", "homology criteria agree with the exact decisions",
                 _pd1_trial, ("Z",), 500))


def _skeleton_trial(rng, ring) -> TrialOutcome:
    M = _complex(rng, ring)
    lo, hi = _weight_window(M)
    bad = []
    for n in range(lo, hi + 1):
        if skeleton_membership(M, n) != (stupid_membership(M, "le", n) is not None):
            bad.append(("le", n))
        if coskeleton_membership(M, n) != (stupid_membership(M, "ge", n) is not None):
            bad.append(("ge", n))
    if coskeleton_membership(M, 0) != (stupid_membership(M, "ge", 0) is not None):
        bad.append(("ge", 0))
    return TrialOutcome(not bad, f"disagreements at {bad}", _doc(ring, {"M": M}))


register(Battery("skeleton", "homology criteria for w<=n and w>=n membership", _skeleton_trial,
                 ("Z",), 500))


# -- closure laws -----------------------------------------------------------------------

class _Kills:
    """Memoised ``kills_weights`` with pruning by range monotonicity."""

    def __init__(self, g: ChainMap):
        self.g = g
        self.cache: dict = {}

    def __call__(self, m: int, n: int) -> bool:
        key = (m, n)
        if key not in self.cache:
            if n > m and (not self(m, m) or not self(n, n)):
                # a range is killed only if every point of it is
                self.cache[key] = False
            else:
                self.cache[key] = kills_weights(self.g, m, n) is not None
        return self.cache[key]


def _killing_map(rng, ring, M: Complex, N: Complex) -> ChainMap:
    """A random map biased towards killing weights: often it factors through a truncation."""
    g = random_chain_map(M, N, rng)
    r = rng.random()
    if r < 0.25:
        return ChainMap.zero(M, N)
    if r < 0.6 and not M.is_zero():
        k = rng.randint(-M.hi - 1, -M.lo)
        t = stupid_truncate(M, k)
        # g restricted to the upper part: M → upper → N via a map upper → N
        h = random_chain_map(t.upper, N, rng)
        return h @ t.proj
    return g


def _closure_trial(rng, ring) -> TrialOutcome:
    M = _complex(rng, ring, 3, 2)
    N = _complex(rng, ring, 3, 2)
    P = _complex(rng, ring, 3, 2)
    g = _killing_map(rng, ring, M, N)
    h = _killing_map(rng, ring, N, P)
    lo, hi = _weight_window(M, N, P)
    kg, kh, khg = _Kills(g), _Kills(h), _Kills(h @ g)
    bad = []
    stats = {"laws_exercised": 0}

    # monotonicity
    m = rng.randint(lo, hi)
    n = rng.randint(m, hi)
    if kg(m, n):
        stats["laws_exercised"] += 1
        for a in range(m, n + 1):
            for b in range(a, n + 1):
                if not kg(a, b):
                    bad.append(f"monotonicity: kills [{m},{n}] but not [{a},{b}]")
    # ideal property
    if kg(m, n):
        hp = random_chain_map(P, M, rng)
        if not _Kills(g @ hp)(m, n):
            bad.append(f"ideal: g∘h' fails on [{m},{n}]")
        if not khg(m, n):
            bad.append(f"ideal: h∘g fails on [{m},{n}]")
    # adjacent ranges
    for mm in range(lo, hi + 1):
        for nn in range(mm, min(hi, mm + 2) + 1):
            if not kg(mm, nn):
                continue
            for m2 in range(max(lo, mm - 2), mm):
                if kh(m2, mm - 1):
                    stats["laws_exercised"] += 1
                    if not khg(m2, nn):
                        bad.append(f"adjacent: g kills [{mm},{nn}], h kills [{m2},{mm - 1}] but h∘g fails")
    # direct sums
    g2 = _killing_map(rng, ring, N, M)
    s = direct_sum_maps([g, g2])
    ks, kg2 = _Kills(s), _Kills(g2)
    if ks(m, n) != (kg(m, n) and kg2(m, n)):
        bad.append(f"direct sum: [{m},{n}] sum {ks(m, n)} parts {kg(m, n)}, {kg2(m, n)}")
    # per-weight characterisation for objects
    O = direct_sum([M, N]) if rng.random() < 0.5 else M
    wlo, whi = _weight_window(O)
    a = rng.randint(wlo, whi)
    b = rng.randint(a, whi)
    whole = without_weights(O, a, b) is not None
    each = all(without_weights(O, i, i) is not None for i in range(a, b + 1))
    if whole != each:
        bad.append(f"objects: without [{a},{b}] is {whole}, pointwise {each}")
    # componentwise composition
    comp_ok, comp_used = _componentwise(rng, ring, lo + 1, hi - 1)
    stats["componentwise_chains"] = int(comp_used)
    if not comp_ok:
        bad.append("componentwise: chain of weakly-null factors does not kill the range")
    docs = {"M": M, "N": N, "P": P}
    return TrialOutcome(not bad, "; ".join(bad), _doc(ring, docs, {"g": g, "h": h}), stats)


def _componentwise(rng, ring, lo, hi) -> tuple[bool, bool]:
    """Chain ``f_m, …, f_n`` with ``f_i ∼_[-i,-i] 0``; the composite must kill ``m..n``."""
    if hi < lo:
        lo, hi = hi, lo
    m = rng.randint(lo, hi)
    n = rng.randint(m, min(hi, m + 1))
    objs = [_complex(rng, ring, 3, 3) for _ in range(n - m + 2)]
    fs = []
    for k, i in enumerate(range(m, n + 1)):
        A, B = objs[k], objs[k + 1]
        f = None
        for _ in range(6):
            if rng.random() < 0.5:
                cand = _killing_map(rng, ring, A, B)
            else:
                # through a complex with no term in degree -i
                X = _complex(rng, ring, 3, 3, lo_range=(-i + 1, -i + 1)) if rng.random() < 0.5 \
                    else _complex(rng, ring, 3, 3, lo_range=(-i - 3, -i - 3))
                cand = random_chain_map(X, B, rng) @ random_chain_map(A, X, rng)
            if cand.is_zero():
                continue
            if sim_interval(cand, ChainMap.zero(A, B), -i, -i) is not None:
                f = cand
                break
        if f is None:
            f = ChainMap.zero(A, B)
        fs.append(f)
    comp = fs[0]
    for f in fs[1:]:
        comp = f @ comp
    used = not comp.is_zero()
    return kills_weights(comp, m, n) is not None, used


register(Battery("closure-laws",
                 "monotonicity, ideal, adjacent ranges, direct sums, per-weight objects, componentwise chains",
                 _closure_trial, ("Z",), 200))


# -- conservativity over dual numbers -----------------------------------------------------

def _consv_trial(rng, ring) -> TrialOutcome:
    M = _complex(rng, ring, 4, 2)
    lo, hi = weight_range(M)
    bad, stats = [], {"ranges": 0, "nonvacuous": 0, "hidden_terms": 0}
    for m in range(lo, hi + 1):
        for n in range(m, hi + 1):
            rep = conservativity_check(M, m, n)
            stats["ranges"] += 1
            if not rep.vacuous:
                stats["nonvacuous"] += 1
                if any(M.dim(-i) for i in range(m, n + 1)):
                    stats["hidden_terms"] += 1
            if not rep.implication_holds:
                bad.append(f"[{m},{n}]")
            elif rep.witness is not None and not rep.witness.verify():
                bad.append(f"[{m},{n}] witness fails")
    return TrialOutcome(not bad, f"implication fails on {bad}", _doc(ring, {"M": M}), stats)


register(Battery("conservativity", "reduction mod e detects the absence of weights", _consv_trial,
                 ("Zeps2",), 300))


# -- tower invariance -----------------------------------------------------------------------

def _tower_trial(rng, ring) -> TrialOutcome:
    M = _complex(rng, ring, 4, 2)
    choices = {}
    if not M.is_zero():
        lo, hi = weight_range(M)
        for n in range(lo - 1, hi + 1):
            if rng.random() < 0.7:
                choices[n] = perturbed_truncation(M, n, rng, pads=rng.randint(0, 2))
    t = weight_complex_via_tower(M, choices)
    want = canonical_decompose(M).piece_multiset() if not M.is_zero() else []
    got = canonical_decompose(t).piece_multiset() if not t.is_zero() else []
    return TrialOutcome(want == got, f"pieces {list(map(str, want))} vs {list(map(str, got))}",
                        _doc(ring, {"M": M, "t": t}), {"perturbed_choices": len(choices)})


register(Battery("tower-invariance", "the truncation tower recovers the object's pieces",
                 _tower_trial, ("Z",), 200))


# -- pure functors detect killed weights -----------------------------------------------------

def _homology_extras(ring, *cs):
    extra = []
    for c in cs:
        if c.is_zero():
            continue
        for j in range(-c.hi, -c.lo + 1):
            for q in homology(c, j).torsion:
                extra.append(FgModule(ring, 0, (q,)))
    return extra


def _pure_check(g: ChainMap, family, m_range) -> tuple[list, int]:
    bad, hits = [], 0
    for m in m_range:
        if kills_weights(g, m, m) is None:
            continue
        hits += 1
        for G in family:
            for var in (HOMOLOGICAL, COHOMOLOGICAL):
                if not coefficient_vanishes(g, G, m, var):
                    bad.append(f"m={m} Γ={G} {var}")
    return bad, hits


def _pure_trial(rng, ring) -> TrialOutcome:
    M, N, g = _map(rng, ring)
    fam = coefficient_family(ring, _homology_extras(ring, M, N) if ring.tag == "Z" else ())
    lo, hi = _weight_window(M, N)
    bad, hits = _pure_check(g, fam, range(lo, hi + 1))
    return TrialOutcome(not bad, "; ".join(bad), _map_doc(g), {"killing_instances": hits})


PURE_SHAPES = ((-1, 0, 2), (-1, 1, 1))


def _pure_exhaustive() -> Iterator[TrialOutcome]:
    """All pairs of small F_2 complexes and all chain maps between them."""
    ring = CoeffRing.prime_field(2)
    fam = coefficient_family(ring)
    for lo, hi, md in PURE_SHAPES:
        cs = list(enumerate_small(ring, lo, hi, md))
        for M in cs:
            for N in cs:
                for g in enumerate_chain_maps(M, N):
                    bad, hits = _pure_check(g, fam, range(-hi - 1, -lo + 2))
                    yield TrialOutcome(not bad, "; ".join(bad), _map_doc(g), {"killing_instances": hits})


register(Battery("pure-detection", "killed weights are invisible to coefficient (co)homology",
                 _pure_trial, ("Z",), 300, _pure_exhaustive))


# -- weak versus strict homotopy -------------------------------------------------------------

def _weak_exhaustive() -> Iterator[TrialOutcome]:
    pairs = find_weak_pairs(CoeffRing.dual_numbers(2), small_dual_complexes(2), limit=1)
    ok = bool(pairs)
    stats = {"weak_not_strict_over_dual_numbers": len(pairs)}
    yield TrialOutcome(ok, "no weakly-null, non-null-homotopic map found over F_2[e]", None, stats)
    ring = CoeffRing.prime_field(2)
    field_pairs = find_weak_pairs(ring, enumerate_small(ring, -1, 1, 1), limit=1)
    yield TrialOutcome(not field_pairs, "weakly-null map that is not null-homotopic over F_2",
                       _map_doc(field_pairs[0]) if field_pairs else None,
                       {"weak_not_strict_over_F2": len(field_pairs)})


def _weak_trial(rng, ring) -> TrialOutcome:
    M, N, g = _map(rng, ring, 3, 2)
    w = weakly_homotopic(g, ChainMap.zero(M, N))
    s = is_null_homotopic(g)
    ok = (s is None or w is not None) and (w is None or w.verify()) and (s is None or s.verify())
    return TrialOutcome(ok, "null-homotopic map is not weakly null", _map_doc(g),
                        {"weak": w is not None, "strict": s is not None})


register(Battery("weak-pair", "strict implies weak homotopy; a weak-but-not-strict pair exists",
                 _weak_trial, ("Z", "F2"), 100, _weak_exhaustive))


# -- open question: pointwise versus range killing for morphisms -------------------------------

def _range_trial(rng, ring) -> TrialOutcome:
    M, N, g = _map(rng, ring, 4, 3)
    lo, hi = _weight_window(M, N)
    kg = _Kills(g)
    found = []
    for m in range(lo, hi):
        for n in range(m + 1, min(hi, m + 3) + 1):
            if all(kg(i, i) for i in range(m, n + 1)):
                if kills_weights(g, m, n) is None:
                    found.append((m, n))
    return TrialOutcome(not found, f"pointwise but not range killing on {found}", _map_doc(g),
                        {"pointwise_not_range": len(found)})


register(Battery("range-vs-pointwise",
                 "search: does killing each weight separately imply killing the range? (not asserted)",
                 _range_trial, ("Z", "F2"), 200, assertive=False))


def weak_pair_fixture():
    """The regression fixture ``(M, f)``: ``M = (R →e R)`` in degrees -1, 0 over ``F_2[e]``, ``f = (0, e)``."""
    ring = CoeffRing.dual_numbers(2)
    e = Dual(0, 1, 2)
    M = Complex(ring, -1, [1, 1], [Matrix(ring, 1, 1, [e])])
    f = ChainMap(M, M, {0: Matrix(ring, 1, 1, [e])})
    return M, f
