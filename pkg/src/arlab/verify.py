"""Named property suites behind `arlab verify`, plus the seeded random
generators (trees, realizable samples) they and the test suite share.

Each suite returns a list of (check_name, passed, detail) triples; the CLI
prints one line per check and exits nonzero on any failure.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from . import classes, dims, harness, learners
from .core import FiniteClass, cot_trace


# ---------------------------------------------------------------------------
# Seeded random structures
# ---------------------------------------------------------------------------


def random_tree(
    rng: random.Random,
    depth: int,
    p_both: float = 0.4,
    p_one: float = 0.5,
    node_cap: int = 63,
) -> frozenset[str]:
    """Random prefix-closed binary tree of depth <= depth with <= node_cap
    nodes; grown breadth-first, expansion stops once the cap is reached."""
    paths = {""}
    frontier = [""]
    count = 1
    for _ in range(depth):
        nxt = []
        for p in frontier:
            if count + 2 > node_cap:
                break
            u = rng.random()
            if u < p_both:
                kids = ["0", "1"]
            elif u < p_both + p_one:
                kids = [rng.choice("01")]
            else:
                kids = []
            for b in kids:
                q = p + b
                paths.add(q)
                nxt.append(q)
                count += 1
        frontier = nxt
        if not frontier:
            break
    return frozenset(paths)


def enumerate_all_trees(max_nodes: int):
    """Every rooted binary tree (left/right-distinguished) with at most
    max_nodes nodes, as prefix-path sets."""

    def shapes(n: int):
        if n == 1:
            yield frozenset({""})
            return
        for left_n in range(0, n):
            right_n = n - 1 - left_n
            lefts = (
                [None] if left_n == 0 else list(shapes(left_n))
            )
            rights = (
                [None] if right_n == 0 else list(shapes(right_n))
            )
            for lt in lefts:
                for rt in rights:
                    paths = {""}
                    if lt is not None:
                        paths.update("0" + p for p in lt)
                    if rt is not None:
                        paths.update("1" + p for p in rt)
                    yield frozenset(paths)

    for n in range(1, max_nodes + 1):
        yield from shapes(n)


def random_realizable_cot_sample(
    cls: FiniteClass,
    rng: random.Random,
    m: int,
    T: int,
    prompt_pool: list[str],
):
    """A CoT sample labeled by a uniformly drawn member of the class."""
    target = cls[rng.randrange(len(cls))]
    xs = [prompt_pool[rng.randrange(len(prompt_pool))] for _ in range(m)]
    return (
        learners.CotSample(tuple((x, cot_trace(target, x, T)) for x in xs), T),
        target,
    )


def mixed_prompt_pool(rng: random.Random, max_len: int, chain_len: int) -> list[str]:
    pool = ["0" * t for t in range(1, chain_len + 1)]
    for _ in range(12):
        ln = rng.randrange(max_len + 1)
        pool.append("".join(rng.choice("01") for _ in range(ln)))
    return list(dict.fromkeys(pool))


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def suite_lemmas(seed: int = 0, trials: int | None = None):
    checks = []

    N = classes.IntervalSet((1, 3, 4))
    cls = classes.make_shifted_subset_class(N, s_max=16, H=32)
    dom = dims.chain_domain(8)
    got = tuple(
        dims.vc_dimension(dims.restrict_e2e(cls, dom, T)) for T in range(1, 7)
    )
    want = tuple(classes.interval_density(N, T) for T in range(1, 7))
    checks.append(
        (
            "taxonomy identity: vc(e2e restriction) == interval density, N={1,3,4}",
            got == want == (1, 2, 2, 3, 3, 3),
            f"got {got}",
        )
    )

    full = classes.make_full_class(10)
    dom10 = dims.chain_domain(5)
    got_full = tuple(
        dims.vc_dimension(dims.restrict_e2e(full, dom10, T)) for T in range(1, 4)
    )
    checks.append(
        (
            "full-class linearity (H=10 smoke): vc(e2e) == T for T=1..3",
            got_full == (1, 2, 3),
            f"got {got_full}",
        )
    )

    r = classes.RateTable(tuple(math.isqrt(T - 1) + 1 for T in range(1, 65)))
    Nr = classes.rate_to_set(r)
    rt_ok = all(classes.interval_density(Nr, T) == r(T) for T in range(1, 65))
    checks.append(("rate round trip: ceil(sqrt(T)) to T_max=64", rt_ok, ""))

    N13 = classes.IntervalSet((1, 3))
    part = classes.make_shifted_subset_class(N13, s_max=8, H=16)
    prod = classes.make_product_class([part, part])
    prefixes = classes.relocation_prefixes(2)
    pdom = tuple(p + "0" * t for p in prefixes for t in range(1, 4))
    base_vc = dims.vc_dimension(dims.restrict_base(prod, pdom))
    part_vc = dims.vc_dimension(
        dims.restrict_base(part, dims.chain_domain(3))
    )
    e2e_vc = dims.vc_dimension(dims.restrict_e2e(prod, pdom, 2))
    single = dims.vc_dimension(dims.restrict_e2e(part, dims.chain_domain(3), 2))
    checks.append(
        (
            "product additivity: base VC sums, e2e VC doubles at T=2",
            base_vc == 2 * part_vc and e2e_vc == 2 * single,
            f"base {base_vc} vs 2*{part_vc}, e2e {e2e_vc} vs 2*{single}",
        )
    )

    at = classes.make_atdim_example_class(4, H=64)
    labels = tuple(classes.atdim_node_label(i) for i in range(1, 32))
    vc_at = dims.vc_dimension(dims.restrict_base(at, labels))
    atd = dims.atdim_realized(at, labels, 6)
    ldim = dims.littlestone_dimension(at, labels, depth_cap=12)
    checks.append(
        (
            "branch class: VC = 1, realized ATdim = 1, Littlestone >= 4",
            vc_at == 1 and atd == 1 and ldim >= 4,
            f"vc {vc_at}, atdim {atd}, L {ldim}",
        )
    )

    n_classes = trials if trials is not None else 50
    rng = random.Random(seed)
    growth_ok = True
    detail = ""
    for _ in range(n_classes):
        cls_r, dom_r = _random_small_class(rng)
        T = rng.randrange(1, 4)
        base = dims.restrict_base(cls_r, dom_r)
        traces = dims.restrict_cot(cls_r, dom_r, T)
        vc = dims.vc_dimension(base)
        for m in range(len(dom_r) + 1):
            gb = dims.growth_function(base, m)
            gt = dims.growth_function(traces, m)
            if gb > gt:
                growth_ok = False
                detail = f"projection growth {gb} > trace growth {gt}"
            if m >= 1 and gb > (2 * math.e * m) ** (2 * max(vc, 0)) and vc > 0:
                growth_ok = False
                detail = f"SSP violated at m={m}"
            if vc == 0 and gb > 1:
                growth_ok = False
                detail = "VC 0 but more than one pattern"
    checks.append(
        (
            f"growth inequalities on {n_classes} random classes",
            growth_ok,
            detail,
        )
    )
    return checks


def _random_small_class(rng: random.Random):
    kind = rng.randrange(3)
    if kind == 0:
        full = classes.make_full_class(6)
        idx = sorted(rng.sample(range(len(full)), rng.randrange(2, 13)))
        cls = FiniteClass(tuple(full[i] for i in idx), full.horizon)
        dom = _random_domain(rng, cls.horizon - 3, 5)
    elif kind == 1:
        pts = sorted(rng.sample(range(1, 6), rng.randrange(1, 4)))
        cls = classes.make_shifted_subset_class(
            classes.IntervalSet(tuple(pts)), s_max=rng.randrange(0, 4), H=12
        )
        dom = _random_domain(rng, 6, 5)
    else:
        cls = classes.make_parity_class(3, H=16)
        dom = tuple(["01", "001", "0001", "011", "11"][: rng.randrange(2, 6)])
    return cls, dom


def _random_domain(rng: random.Random, max_len: int, count: int):
    out = []
    while len(out) < count:
        ln = rng.randrange(max_len + 1)
        s = "".join(rng.choice("01") for _ in range(ln))
        if s not in out:
            out.append(s)
    return tuple(out)


def suite_compression(seed: int = 0, trials: int | None = None):
    checks = []
    n = trials if trials is not None else 500
    rng = random.Random(seed)

    N = classes.IntervalSet((1, 3, 4))
    cls = classes.make_shifted_subset_class(N, s_max=16, H=32)
    cache = learners.EvalCache(cls)
    pool = mixed_prompt_pool(rng, 6, 8)
    failures = 0
    for i in range(n):
        m = rng.randrange(1, 21)
        T = rng.randrange(1, 5)
        S, _ = random_realizable_cot_sample(cls, rng, m, T, pool)
        comp = learners.cot_compress(cls, S, rng_seed=seed * 1000003 + i, cache=cache)
        hyp = learners.cot_reconstruct(cls, comp, T, cache=cache)
        if any(hyp(x) != y for x, y in S):
            failures += 1
    checks.append(
        (
            f"CoT compression round trip on {n} samples over F(N={{1,3,4}})",
            failures == 0,
            f"{failures} failures",
        )
    )

    lin_failures = 0
    size_viol = 0
    stab_viol = 0
    for i in range(n):
        d = rng.randrange(1, 4)
        grid = classes.enumerate_linear_class(d, 2, H=64)
        m = rng.randrange(1, 16)
        T = rng.randrange(1, 4)
        pool_l = _random_domain(rng, 6, 8)
        S, _ = random_realizable_cot_sample(grid, rng, m, T, list(pool_l))
        kernel = learners.stable_compress_cot(S, d)
        if len(kernel) > d + 1:
            size_viol += 1
        hyp = learners.stable_reconstruct_cot(kernel, d, T)
        if any(hyp(x) != y for x, y in S):
            lin_failures += 1
        kern = set(kernel.examples)
        first = {}
        for j, ex in enumerate(S.examples):
            first.setdefault(ex, j)
        for j, ex in enumerate(S.examples):
            if ex in kern and first[ex] == j:
                continue
            rest = learners.CotSample(
                S.examples[:j] + S.examples[j + 1:], S.T
            )
            if learners.stable_compress_cot(rest, d).examples != kernel.examples:
                stab_viol += 1
    checks.append(
        (
            f"linear stable compression on {n} samples: kernel <= d+1",
            size_viol == 0,
            f"{size_viol} oversize kernels",
        )
    )
    checks.append(
        (
            "linear stable compression: round-trip consistency",
            lin_failures == 0,
            f"{lin_failures} failures",
        )
    )
    checks.append(
        (
            "linear stable compression: deletion stability off the kernel",
            stab_viol == 0,
            f"{stab_viol} violations",
        )
    )
    return checks


def suite_parity(seed: int = 0, trials: int | None = None):
    checks = []
    R = trials if trials is not None else 200
    cls = classes.make_parity_class(8, H=64)
    dom = tuple("0" * k + "1" for k in range(1, 9)) + ("11", "0110", "01000")
    for T in (2, 4):
        pats = dims.restrict_e2e(cls, dom, T)
        checks.append(
            (
                f"parity class: e2e restriction at T={T} is a single pattern (VC 0)",
                len(pats) == 1 and dims.vc_dimension(pats) == 0,
                f"{len(pats)} patterns",
            )
        )
    stats = harness.parity_lower_bound_experiment(cls, k_max=8, n=4, R=R, seed=seed)
    checks.append(
        (
            f"parity lower bound: freq(error >= 1/4) >= 0.4 over R={R}",
            stats.frequency_quarter >= Fraction(2, 5),
            f"freq {float(stats.frequency_quarter):.3f}",
        )
    )
    nonties = stats.above_half + stats.below_half
    slack = 4.5 * math.sqrt(max(nonties, 1))
    checks.append(
        (
            "parity lower bound: bad-count symmetry about |J|/2 (sign test)",
            abs(stats.above_half - stats.below_half) <= slack,
            f"above {stats.above_half}, below {stats.below_half}",
        )
    )
    return checks


def suite_sauer(seed: int = 0, trials: int | None = None):
    checks = []
    n = trials if trials is not None else 1000
    rng = random.Random(seed)
    bound_viol = 0
    oracle_viol = 0
    for _ in range(n):
        t = random_tree(rng, 10)
        padded = dims.pad_to_depth(t, 10)
        if not dims.leaf_count_bound_check(padded):
            bound_viol += 1
        if dims.leveled_subtree_depth(t) != dims.leveled_subtree_depth_exhaustive(t):
            oracle_viol += 1
    checks.append(
        (
            f"leveled-subtree Sauer bound on {n} random depth-10 trees",
            bound_viol == 0,
            f"{bound_viol} violations",
        )
    )
    checks.append(
        (
            "fast leveled-subtree depth == exhaustive oracle on the same trees",
            oracle_viol == 0,
            f"{oracle_viol} disagreements",
        )
    )
    small_viol = 0
    count = 0
    for t in enumerate_all_trees(7):
        count += 1
        if dims.leveled_subtree_depth(t) != dims.leveled_subtree_depth_exhaustive(t):
            small_viol += 1
    checks.append(
        (
            f"oracle agreement on all {count} trees with <= 7 nodes",
            small_viol == 0,
            f"{small_viol} disagreements",
        )
    )
    return checks
