"""Cyclic run-length statistics of binary words.

A word of length L lives on a circle: position i is bit i-1 and position L
wraps to position 1.  The run profile of a word is the pair of descending
run-length sequences (ones-runs, zeros-runs).  The profile comparison rule
(ones-profile lexicographically beats zeros-profile, with zero padding for
unequal lengths) defines the run-dominance junta families; the tie-length
statistic measures how many leading run lengths the two profiles share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import ResourceCapError
from .report import Report

EXACT_CAP_L = 25
MAX_L = 63
_BLOCK = 1 << 21


@dataclass(frozen=True)
class RunProfile:
    """Descending cyclic run lengths of a binary word."""

    ones: tuple[int, ...]
    zeros: tuple[int, ...]
    length: int
    weight: int


@dataclass(frozen=True)
class RunComparison:
    """Leading-tie length of the two run profiles, and which one wins.

    ``ones_dominant`` is None for even word lengths, where the profiles can
    tie outright and dominance is not defined.
    """

    tie_len: int
    ones_dominant: Optional[bool]


def _check_word(word: int, length: int) -> None:
    if not 1 <= length <= MAX_L:
        raise ValueError(f"word length {length} outside [1, {MAX_L}]")
    if word < 0 or word >> length:
        raise ValueError(f"word {word:#x} has bits outside its length {length}")


def run_profile(word: int, length: int) -> RunProfile:
    """Cyclic maximal runs of the word, wrap-around merged, sorted descending."""
    _check_word(word, length)
    weight = word.bit_count()
    if weight == length:
        return RunProfile(ones=(length,), zeros=(), length=length, weight=weight)
    if weight == 0:
        return RunProfile(ones=(), zeros=(length,), length=length, weight=0)
    bits = [(word >> i) & 1 for i in range(length)]
    start = next(i for i in range(length) if bits[i - 1] != bits[i])
    ones: list[int] = []
    zeros: list[int] = []
    i = 0
    while i < length:
        val = bits[(start + i) % length]
        j = i
        while j < length and bits[(start + j) % length] == val:
            j += 1
        (ones if val else zeros).append(j - i)
        i = j
    ones.sort(reverse=True)
    zeros.sort(reverse=True)
    return RunProfile(ones=tuple(ones), zeros=tuple(zeros), length=length, weight=weight)


def runseq_compare(u: tuple[int, ...], z: tuple[int, ...]) -> int:
    """Lexicographic comparison of descending run lists, zero-padded.

    Returns 1 if u wins, -1 if z wins, 0 on a full tie.
    """
    for name, seq in (("u", u), ("z", z)):
        if any(seq[i] < seq[i + 1] for i in range(len(seq) - 1)):
            raise ValueError(f"run list {name}={seq} is not descending")
    m = max(len(u), len(z))
    pu = tuple(u) + (0,) * (m - len(u))
    pz = tuple(z) + (0,) * (m - len(z))
    return (pu > pz) - (pu < pz)


def ones_runs_dominate(word: int, length: int) -> bool:
    """Membership rule of the run-dominance family: ones-profile beats zeros-profile.

    Only defined on odd lengths, where a tie is impossible.
    """
    if length % 2 == 0:
        raise ValueError("run dominance needs an odd word length")
    p = run_profile(word, length)
    return runseq_compare(p.ones, p.zeros) > 0


def compare_run_profiles(word: int, length: int) -> RunComparison:
    """Tie length of the padded profiles plus the dominance flag (odd L only)."""
    p = run_profile(word, length)
    m = max(len(p.ones), len(p.zeros))
    pu = p.ones + (0,) * (m - len(p.ones))
    pz = p.zeros + (0,) * (m - len(p.zeros))
    tie = 0
    while tie < m and pu[tie] == pz[tie]:
        tie += 1
    if tie == m:
        tie = len(p.ones)  # identical profiles (even length only)
    dominant = None if length % 2 == 0 else (pu > pz)
    return RunComparison(tie_len=tie, ones_dominant=dominant)


def count_long_runs(word: int, length: int, t: int) -> int:
    """Number of maximal runs (both symbols) of length >= t."""
    if t < 1:
        raise ValueError(f"run length threshold t={t} must be >= 1")
    p = run_profile(word, length)
    return sum(1 for r in p.ones if r >= t) + sum(1 for r in p.zeros if r >= t)


# ---------------------------------------------------------------------------
# Vectorized scan over arrays of words
# ---------------------------------------------------------------------------


def _scan_block(words: np.ndarray, length: int):
    """Per-word tie length, dominance and run-count sums for a word block.

    Returns (tie, dominant, tied_out, nrun_sums, nrun_sumsq) where nrun_sums[t]
    is the sum over words of N(t) = number of maximal runs of length >= t.
    """
    dt = words.dtype.type
    full = dt((1 << length) - 1)
    one = dt(1)
    w = words
    wc = (~w) & full
    # bit p-1 of prev_one is set iff position p-1 (cyclically) holds a 1
    prev_one = ((w << one) & full) | (w >> dt(length - 1))
    rot1, rot0 = w.copy(), wc.copy()
    acc1, acc0 = w.copy(), wc.copy()
    is_full = w == full
    is_zero = w == 0
    tie = np.full(w.shape, 255, dtype=np.uint8)
    dominant = np.zeros(w.shape, dtype=bool)
    tied = np.ones(w.shape, dtype=bool)
    runs_total = None
    nrun_sums = np.zeros(length + 1, dtype=np.int64)
    nrun_sumsq = np.zeros(length + 1, dtype=np.int64)
    for t in range(1, length + 1):
        s1 = acc1 & ~prev_one
        s0 = acc0 & prev_one
        nu = np.bitwise_count(s1).astype(np.uint8)
        nz = np.bitwise_count(s0).astype(np.uint8)
        nu += is_full
        nz += is_zero
        both = nu.astype(np.int64) + nz
        nrun_sums[t] = both.sum()
        nrun_sumsq[t] = (both * both).sum()
        diff = nu != nz
        np.minimum(tie, np.minimum(nu, nz), out=tie, where=diff)
        # ascending t with overwrite: the last differing t (the largest) wins
        dominant = np.where(diff, nu > nz, dominant)
        tied &= ~diff
        if t == 1:
            runs_total = nu.copy()
        if t < length:
            rot1 = (rot1 >> one) | ((rot1 & one) << dt(length - 1))
            rot0 = (rot0 >> one) | ((rot0 & one) << dt(length - 1))
            acc1 &= rot1
            acc0 &= rot0
    tie = np.where(tied, runs_total, tie).astype(np.uint8)
    return tie, dominant, tied, nrun_sums, nrun_sumsq


def scan_words(words: np.ndarray, length: int):
    """Tie lengths and dominance flags for an arbitrary array of words."""
    _check_word(0, length)
    dtype = np.uint32 if length <= 30 else np.uint64
    arr = np.asarray(words).astype(dtype)
    tie, dom, _, nrun_sums, nrun_sumsq = _scan_block(arr, length)
    return tie, dom, nrun_sums, nrun_sumsq


@lru_cache(maxsize=2)
def in_t_table(length: int) -> np.ndarray:
    """Dominance membership for every word of the given odd length.

    Returns a read-only bool array of size 2^length: entry w is True iff the
    ones-profile of w beats the zeros-profile.
    """
    if length % 2 == 0:
        raise ValueError("run dominance needs an odd word length")
    if length > EXACT_CAP_L:
        raise ResourceCapError(f"exact enumeration capped at length {EXACT_CAP_L}")
    total = 1 << length
    out = np.empty(total, dtype=bool)
    dtype = np.uint32 if length <= 30 else np.uint64
    for lo in range(0, total, _BLOCK):
        hi = min(lo + _BLOCK, total)
        block = np.arange(lo, hi, dtype=dtype)
        _, dom, _, _, _ = _scan_block(block, length)
        out[lo:hi] = dom
    out.setflags(write=False)
    return out


def _fit_alpha(rows) -> Optional[float]:
    """Tightest alpha with Pr[tie >= k] <= 2^(-alpha log2(k)^2) on the data."""
    alphas = []
    for row in rows:
        k, p = row["k"], float(row["prob"])
        if k >= 2 and p > 0:
            alphas.append(-math.log2(p) / math.log2(k) ** 2)
    return min(alphas) if alphas else None


def _expected_runs_rows(length: int, sums, sumsq, total: int, exact: bool):
    rows = []
    odd = length % 2 == 1
    half_window = (length - 1) // 2
    for t in range(1, length + 1):
        if exact:
            expected = Fraction(int(sums[t]), total)
            approx = float(expected)
            stderr = None
        else:
            approx = sums[t] / total
            var = max(sumsq[t] / total - approx * approx, 0.0)
            stderr = math.sqrt(var / total)
            expected = approx
        row = {"t": t, "expected_runs": expected}
        if stderr is not None:
            row["stderr"] = stderr
        if odd:
            cand_full = length * 2.0 ** (-t)
            cand_half = half_window * 2.0 ** (-t)
            row["candidate_full_window"] = cand_full
            row["candidate_half_window"] = cand_half
            row["ratio_to_full"] = approx / cand_full if cand_full else None
            row["ratio_to_half"] = approx / cand_half if cand_half else None
            row["closer_candidate"] = (
                "full_window"
                if abs(approx - cand_full) <= abs(approx - cand_half)
                else "half_window"
            )
        rows.append(row)
    return rows


def rho_distribution(
    length: int,
    mode: str = "exact",
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> Report:
    """Distribution of the profile tie length, plus expected long-run counts.

    Exact mode enumerates all 2^length words under the uniform measure
    (length <= 25); mc mode draws ``samples`` words from a counter-based
    generator keyed by ``seed`` and reports standard errors.
    """
    report = Report(
        command="rho-dist",
        parameters={"L": length, "mode": mode, "samples": samples},
        seed=seed,
    )
    _check_word(0, length)
    kmax = length // 2
    if mode == "exact":
        if length > EXACT_CAP_L:
            raise ResourceCapError(f"exact enumeration capped at length {EXACT_CAP_L}")
        total = 1 << length
        hist = np.zeros(kmax + 2, dtype=np.int64)
        nrun_sums = np.zeros(length + 1, dtype=np.int64)
        nrun_sumsq = np.zeros(length + 1, dtype=np.int64)
        dom_count = 0
        dtype = np.uint32 if length <= 30 else np.uint64
        for lo in range(0, total, _BLOCK):
            hi = min(lo + _BLOCK, total)
            block = np.arange(lo, hi, dtype=dtype)
            tie, dom, _, s, s2 = _scan_block(block, length)
            hist += np.bincount(tie, minlength=kmax + 2)[: kmax + 2]
            nrun_sums += s
            nrun_sumsq += s2
            dom_count += int(dom.sum())
        tail = np.concatenate([np.cumsum(hist[::-1])[::-1], [0]])
        rows = [
            {"k": k, "prob": Fraction(int(tail[k]), total), "stderr": None}
            for k in range(0, kmax + 1)
        ]
        report.add_table("rho_tail", rows)
        report.add_table(
            "expected_runs", _expected_runs_rows(length, nrun_sums, nrun_sumsq, total, True)
        )
        if length % 2 == 1:
            report.check("dominant_count", 1 << (length - 1), dom_count)
    elif mode == "mc":
        if samples is None or samples < 1:
            raise ValueError("mc mode needs samples >= 1")
        if seed is None:
            seed = 0
            report.seed = 0
        rng = np.random.Generator(np.random.Philox(key=seed))
        words = rng.integers(0, 1 << length, size=samples, dtype=np.uint64)
        tie, dom, nrun_sums, nrun_sumsq = scan_words(words, length)
        hist = np.bincount(tie, minlength=kmax + 2)[: kmax + 2]
        tail = np.concatenate([np.cumsum(hist[::-1])[::-1], [0]])
        rows = []
        for k in range(0, kmax + 1):
            p = tail[k] / samples
            rows.append(
                {"k": k, "prob": p, "stderr": math.sqrt(max(p * (1 - p), 0.0) / samples)}
            )
        report.add_table("rho_tail", rows)
        report.add_table(
            "expected_runs",
            _expected_runs_rows(length, nrun_sums, nrun_sumsq, samples, False),
        )
        if length % 2 == 1:
            share = int(dom.sum()) / samples
            report.note(f"dominant share {share:.6f} (exact value is 1/2 for odd length)")
    else:
        raise ValueError(f"unknown mode {mode!r}")

    probs = [float(r["prob"]) for r in report.tables["rho_tail"]]
    report.check(
        "tail_nonincreasing",
        True,
        all(probs[i] >= probs[i + 1] for i in range(len(probs) - 1)),
    )
    report.check("tail_starts_at_one", 1.0, probs[0])
    alpha = _fit_alpha(report.tables["rho_tail"])
    if alpha is not None:
        report.note(f"fitted decay constant alpha={alpha:.4f} (reported, not asserted)")
    return report.finish()
