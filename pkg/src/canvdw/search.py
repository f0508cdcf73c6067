"""Exhaustive search for the least interval length with no witness-free
colouring.

Two engines compute the same quantity.  The pruned engine walks the tree of
canonical colouring prefixes depth first, cutting a branch the moment the
freshly coloured position completes a witness; the naive engine enumerates
every canonical colouring of every length and checks each one from scratch.
The naive engine exists to cross-check the pruned one and shares none of its
pruning logic.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .coloring import TypedColouring, enumerate_colourings
from .polynomial import PolynomialFamily
from .witness import (
    D_POLICIES,
    POLICY_ANY,
    POLICY_NONZERO,
    _mono_step_ok,
    _rainbow_step_ok,
    _window_bound,
    find_witness,
    verify_certificate,
)

NAIVE_ENUMERATION_CAP = 2_000_000


class EnumerationCapExceeded(RuntimeError):
    """The naive engine refused to enumerate past its hard cap."""


@dataclass(frozen=True)
class SearchConfig:
    """Everything a search run depends on.

    worker_count and split_depth only steer execution; results and reports
    are identical for any worker_count.  self_check re-verifies every prune
    against the full witness scanner and round-trips every witness through
    its certificate.
    """

    mono_family: PolynomialFamily | None
    rainbow_family: PolynomialFamily | None = None
    h: int = 0
    d_policy: str = POLICY_NONZERO
    max_classes: int | None = None
    n_start: int = 1
    n_limit: int = 12
    node_budget: int | None = None
    worker_count: int = 1
    split_depth: int = 4
    self_check: bool = False

    def validate(self) -> None:
        if self.d_policy not in D_POLICIES:
            raise ValueError(f"unknown d policy {self.d_policy!r}")
        if self.n_start < 1 or self.n_limit < self.n_start:
            raise ValueError(f"need 1 <= n_start <= n_limit, got {self.n_start}..{self.n_limit}")
        if self.max_classes is not None and self.max_classes < 1:
            raise ValueError(f"max_classes must be positive, got {self.max_classes}")
        if self.worker_count < 1:
            raise ValueError(f"worker_count must be positive, got {self.worker_count}")
        if self.node_budget is not None and self.node_budget < 1:
            raise ValueError(f"node_budget must be positive, got {self.node_budget}")
        if self.split_depth < 0:
            raise ValueError(f"split_depth must be non-negative, got {self.split_depth}")
        if self.h < 0:
            raise ValueError(f"h must be non-negative, got {self.h}")
        no_mono = self.mono_family is None or not self.mono_family.polys
        no_rain = self.rainbow_family is None or not self.rainbow_family.polys
        if no_mono and no_rain:
            raise ValueError("at least one family must be non-empty")


@dataclass(frozen=True)
class SearchResult:
    """Outcome of one engine run.

    canonical_number is None when no length in range was conclusive;
    exhausted marks that case (length range or node budget ran out).
    witness_free_per_length[i] counts witness-free canonical colourings of
    length i+1, up to the last fully explored length.
    """

    canonical_number: int | None
    extremal_count_at_nminus1: int
    nodes_expanded: int
    wall_time: float
    exhausted: bool
    witness_free_per_length: tuple[int, ...]
    engine: str


class _Tally:
    __slots__ = ("nodes", "budget")

    def __init__(self, budget: int | None):
        self.nodes = 0
        self.budget = budget


class _BudgetExhausted(Exception):
    pass


class _CollectorFull(Exception):
    pass


class _Collector:
    __slots__ = ("items", "limit")

    def __init__(self, limit: int | None):
        self.items: list[tuple[int, ...]] = []
        self.limit = limit

    def add(self, item: tuple[int, ...]) -> None:
        self.items.append(item)
        if self.limit is not None and len(self.items) >= self.limit:
            raise _CollectorFull


def _position_plans(
    mono_family: PolynomialFamily | None,
    rainbow_family: PolynomialFamily | None,
    depth_cap: int,
    h: int,
    d_policy: str,
) -> tuple[tuple[tuple[bool, tuple[int, ...]], ...], ...]:
    # plans[t] lists the probes completed by colouring position t+1: every
    # witness lying inside [t+1] whose largest element is t+1.  A probe is
    # (is_mono, zero-based element indices).
    fams: list[tuple[bool, PolynomialFamily]] = []
    if mono_family is not None and mono_family.polys:
        fams.append((True, mono_family))
    if rainbow_family is not None and rainbow_family.polys:
        fams.append((False, rainbow_family))
    plans: list[list[tuple[bool, tuple[int, ...]]]] = [[] for _ in range(depth_cap)]
    seen: list[set[tuple[bool, tuple[int, ...]]]] = [set() for _ in range(depth_cap)]
    for is_mono, fam in fams:
        bound = _window_bound(fam, depth_cap)
        steps: list[int] = [0] if d_policy == POLICY_ANY else []
        for size in range(1, bound + 1):
            steps.extend((size, -size))
        for d in steps:
            if is_mono and not _mono_step_ok(d_policy, d):
                continue
            if not is_mono and not _rainbow_step_ok(d_policy, d, h):
                continue
            offsets = (0,) + tuple(p.evaluate(d) for p in fam.polys)
            if not is_mono and len(set(offsets)) != len(offsets):
                continue
            lo = min(offsets)
            hi = max(offsets)
            for pos in range(1, depth_cap + 1):
                a = pos - hi
                if a < 1 or a + lo < 1:
                    continue
                idx = tuple(a + off - 1 for off in offsets)
                key = (is_mono, idx)
                if key not in seen[pos - 1]:
                    seen[pos - 1].add(key)
                    plans[pos - 1].append(key)
    return tuple(tuple(p) for p in plans)


def _blocked(labels: list[int], probes) -> bool:
    # Does the newly coloured position complete a witness inside the prefix?
    for is_mono, idx in probes:
        first = labels[idx[0]]
        if is_mono:
            for i in idx[1:]:
                if labels[i] != first:
                    break
            else:
                return True
        else:
            seen = {first}
            clash = False
            for i in idx[1:]:
                lab = labels[i]
                if lab in seen:
                    clash = True
                    break
                seen.add(lab)
            if not clash:
                return True
    return False


class _CheckCtx:
    __slots__ = ("mono_family", "rainbow_family", "h", "d_policy", "checks")

    def __init__(self, cfg: SearchConfig):
        self.mono_family = cfg.mono_family
        self.rainbow_family = cfg.rainbow_family
        self.h = cfg.h
        self.d_policy = cfg.d_policy
        self.checks = 0

    def assert_pruned_prefix_has_witness(self, labels: list[int]) -> None:
        truncated = TypedColouring.single(tuple(labels))
        cert = find_witness(
            truncated, self.mono_family, self.rainbow_family, self.h, self.d_policy
        )
        if cert is None:
            raise AssertionError(
                f"pruned prefix {tuple(labels)} has no witness inside itself"
            )
        verdict = verify_certificate(truncated, cert)
        if not verdict.ok:
            raise AssertionError(
                f"certificate for pruned prefix {tuple(labels)} failed: {verdict.reason}"
            )
        self.checks += 1


def _explore(
    labels: list[int],
    used: int,
    counts: list[int],
    plans,
    depth_cap: int,
    max_classes: int | None,
    tally: _Tally,
    check_ctx: _CheckCtx | None,
    collector: _Collector | None,
) -> None:
    # Depth-first walk of witness-free prefixes, children in label order so
    # complete colourings appear in lexicographic canonical order.
    depth = len(labels)
    counts[depth] += 1
    if depth == depth_cap:
        if collector is not None:
            collector.add(tuple(labels))
        return
    probes = plans[depth]
    cap = used + 1 if (max_classes is None or used < max_classes) else used
    for v in range(cap):
        labels.append(v)
        tally.nodes += 1
        if tally.budget is not None and tally.nodes > tally.budget:
            labels.pop()
            raise _BudgetExhausted
        if _blocked(labels, probes):
            if check_ctx is not None:
                check_ctx.assert_pruned_prefix_has_witness(labels)
        else:
            _explore(
                labels,
                used + 1 if v == used else used,
                counts,
                plans,
                depth_cap,
                max_classes,
                tally,
                check_ctx,
                collector,
            )
        labels.pop()


def _collect_roots(
    labels: list[int],
    used: int,
    split: int,
    counts: list[int],
    plans,
    max_classes: int | None,
    tally: _Tally,
    check_ctx: _CheckCtx | None,
    roots: list[tuple[tuple[int, ...], int]],
) -> None:
    depth = len(labels)
    if depth == split:
        roots.append((tuple(labels), used))
        return
    counts[depth] += 1
    probes = plans[depth]
    cap = used + 1 if (max_classes is None or used < max_classes) else used
    for v in range(cap):
        labels.append(v)
        tally.nodes += 1
        if tally.budget is not None and tally.nodes > tally.budget:
            labels.pop()
            raise _BudgetExhausted
        if _blocked(labels, probes):
            if check_ctx is not None:
                check_ctx.assert_pruned_prefix_has_witness(labels)
        else:
            _collect_roots(
                labels,
                used + 1 if v == used else used,
                split,
                counts,
                plans,
                max_classes,
                tally,
                check_ctx,
                roots,
            )
        labels.pop()


def _run_tree(
    cfg: SearchConfig, depth_cap: int, collect_limit: int | None = None, collect: bool = False
) -> tuple[list[int] | None, int, list[tuple[int, ...]]]:
    """Walk the witness-free prefix tree to depth_cap.

    Returns (per-depth counts or None if the budget ran out, nodes expanded,
    collected complete colourings).  Results do not depend on worker_count:
    subtrees are disjoint and merged in lexicographic root order.
    """
    plans = _position_plans(
        cfg.mono_family, cfg.rainbow_family, depth_cap, cfg.h, cfg.d_policy
    )
    split = min(cfg.split_depth, depth_cap)
    counts = [0] * (depth_cap + 1)
    tally = _Tally(cfg.node_budget)
    check_ctx = _CheckCtx(cfg) if cfg.self_check else None
    roots: list[tuple[tuple[int, ...], int]] = []
    try:
        _collect_roots(
            [], 0, split, counts, plans, cfg.max_classes, tally, check_ctx, roots
        )
    except _BudgetExhausted:
        return None, tally.nodes, []

    collected: list[tuple[int, ...]] = []
    sequential = cfg.worker_count == 1 or cfg.node_budget is not None

    def explore_subtree(root: tuple[tuple[int, ...], int], shared_tally: _Tally | None):
        prefix, used = root
        local_counts = [0] * (depth_cap + 1)
        local_tally = shared_tally if shared_tally is not None else _Tally(None)
        local_collector = _Collector(collect_limit) if collect else None
        try:
            _explore(
                list(prefix),
                used,
                local_counts,
                plans,
                depth_cap,
                cfg.max_classes,
                local_tally,
                check_ctx,
                local_collector,
            )
        except _CollectorFull:
            pass
        items = local_collector.items if local_collector is not None else []
        return local_counts, local_tally.nodes, items

    if sequential:
        for root in roots:
            try:
                local_counts, _, items = explore_subtree(root, tally)
            except _BudgetExhausted:
                return None, tally.nodes, []
            for i, c in enumerate(local_counts):
                counts[i] += c
            collected.extend(items)
            if collect and collect_limit is not None and len(collected) >= collect_limit:
                collected = collected[:collect_limit]
                break
    else:
        with ThreadPoolExecutor(max_workers=cfg.worker_count) as pool:
            results = list(pool.map(lambda r: explore_subtree(r, None), roots))
        for local_counts, local_nodes, items in results:
            for i, c in enumerate(local_counts):
                counts[i] += c
            tally.nodes += local_nodes
            collected.extend(items)
        if collect and collect_limit is not None:
            collected = collected[:collect_limit]
    return counts, tally.nodes, collected


def canonical_number(cfg: SearchConfig) -> SearchResult:
    """Least length in [n_start, n_limit] all of whose canonical colourings
    contain a witness, found by pruned depth-first search.

    A branch is cut as soon as the newly coloured position completes a
    witness, since every extension keeps that witness.  Witness-free
    colourings of length t are exactly the surviving prefixes of length t,
    so one tree walk settles every length at once.
    """
    cfg.validate()
    t0 = time.perf_counter()
    counts, nodes, _ = _run_tree(cfg, cfg.n_limit)
    wall = time.perf_counter() - t0
    if counts is None:
        return SearchResult(None, 0, nodes, wall, True, (), "pruned")
    found = None
    for length in range(cfg.n_start, cfg.n_limit + 1):
        if counts[length] == 0:
            found = length
            break
    per_length = tuple(counts[1:])
    if found is None:
        return SearchResult(None, counts[cfg.n_limit], nodes, wall, True, per_length, "pruned")
    return SearchResult(found, counts[found - 1], nodes, wall, False, per_length, "pruned")


def extremal_colourings(cfg: SearchConfig, length: int, limit: int | None = None) -> list[TypedColouring]:
    """Witness-free canonical colourings of the given length in
    lexicographic order, up to limit."""
    cfg.validate()
    if not 1 <= length <= cfg.n_limit:
        raise ValueError(f"length {length} outside 1..{cfg.n_limit}")
    if limit is not None and limit < 1:
        raise ValueError(f"limit must be positive, got {limit}")
    _, _, collected = _run_tree(cfg, length, collect_limit=limit, collect=True)
    return [TypedColouring.single(labels) for labels in collected]


def naive_canonical_number(cfg: SearchConfig) -> SearchResult:
    """Independent oracle for canonical_number by brute force.

    Enumerates every canonical colouring of every length and runs the full
    witness scanner on each; no pruning, no sharing of work between lengths.
    Refuses to enumerate more than node_budget colourings (or a built-in cap
    when no budget is set).
    """
    cfg.validate()
    t0 = time.perf_counter()
    cap = cfg.node_budget if cfg.node_budget is not None else NAIVE_ENUMERATION_CAP
    examined = 0

    def witness_free_count(length: int) -> int:
        nonlocal examined
        free = 0
        for col in enumerate_colourings(length, cfg.max_classes):
            examined += 1
            if examined > cap:
                raise EnumerationCapExceeded(
                    f"naive engine exceeded its enumeration cap of {cap}"
                )
            cert = find_witness(
                col, cfg.mono_family, cfg.rainbow_family, cfg.h, cfg.d_policy
            )
            if cert is None:
                free += 1
            elif cfg.self_check:
                verdict = verify_certificate(col, cert)
                if not verdict.ok:
                    raise AssertionError(
                        f"witness certificate failed re-check: {verdict.reason}"
                    )
        return free

    prev = 1 if cfg.n_start == 1 else witness_free_count(cfg.n_start - 1)
    per_length: list[int] = []
    for length in range(cfg.n_start, cfg.n_limit + 1):
        free = witness_free_count(length)
        per_length.append(free)
        if free == 0:
            wall = time.perf_counter() - t0
            return SearchResult(
                length, prev, examined, wall, False, tuple(per_length), "naive"
            )
        prev = free
    wall = time.perf_counter() - t0
    return SearchResult(None, prev, examined, wall, True, tuple(per_length), "naive")


def run_report(cfg: SearchConfig, result: SearchResult, timing: bool = False) -> str:
    """Machine-readable run report.

    Echoes the semantic configuration only; execution knobs (worker count,
    split depth, self checks) never change results and are omitted so that
    reports are byte-identical across them.  Timing is off by default for
    the same reason.
    """
    def fam(f: PolynomialFamily | None):
        return None if f is None else f.coeff_lists()

    obj: dict = {
        "config": {
            "mono": fam(cfg.mono_family),
            "rainbow": fam(cfg.rainbow_family),
            "h": cfg.h,
            "d_policy": cfg.d_policy,
            "max_classes": cfg.max_classes,
            "n_start": cfg.n_start,
            "n_limit": cfg.n_limit,
            "node_budget": cfg.node_budget,
        },
        "engine": result.engine,
        "canonical_number": result.canonical_number,
        "extremal_count": result.extremal_count_at_nminus1,
        "witness_free_per_length": list(result.witness_free_per_length),
        "nodes_expanded": result.nodes_expanded,
        "exhausted": result.exhausted,
    }
    if timing:
        obj["wall_time"] = result.wall_time
    return json.dumps(obj, indent=2) + "\n"


def with_workers(cfg: SearchConfig, worker_count: int) -> SearchConfig:
    """Copy of a config with a different worker count (results unchanged)."""
    return replace(cfg, worker_count=worker_count)
