"""
불변식 일괄 검증 (treemix verify)

각 검사는 CheckResult 를 반환하고, 실패 시 detail 에 첫 번째 반례를 담는다.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Tuple

from .chain import (
    down_up_kernel, intertwining_check, plancherel_measure, stationarity_check,
    up_down_kernel, verify_reversibility,
)
from .config import TreeMixConfig, load_config
from .errors import InvariantError
from .operators import (
    commutator_check, growth_matrix, growth_power, pruning_matrix, pruning_power, symmetry_identity_check,
)
from .spectral import (
    ROUTE_EIGEN, ROUTE_MATRIX, ROUTE_RECURRENCE, exact_geometric_tail, extremal_pairs,
    limit_value, scaled_kernel_powers, separation_bruteforce, separation_curve,
    separation_eigen, separation_float, separation_updown, separation_updown_bruteforce,
    tv_distance,
    verify_annihilation, verify_trace_identities,
)
from .tree_core import (
    canonicalize, count_trees, enumerate_trees, pairing_total, terminal_count,
    to_parent_list, tree_stats,
)
from ..utils.logger_config import setup_logger

logger = setup_logger("verify")

R_MAX_ROUTES = 25
R_MAX_PROPERTIES = 20


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _first_failure(items, predicate: Callable) -> str:
    for item in items:
        if not predicate(item):
            return str(item)
    return ""


def check_tree_counts(cfg: TreeMixConfig) -> str:
    return _first_failure(
        range(1, cfg.VERIFY_COUNT_MAX_N + 1),
        lambda n: len(enumerate_trees(n)) == count_trees(n),
    )


def check_tree_stats(cfg: TreeMixConfig) -> str:
    for n in range(1, min(10, cfg.VERIFY_COUNT_MAX_N) + 1):
        total = 0
        for tree in enumerate_trees(n):
            stats = tree_stats(tree)
            if stats.m * stats.hook_product != math.factorial(n):
                return f"hook: {tree}"
            if stats.n_weight * stats.sg_order != stats.m:
                return f"sym: {tree}"
            if canonicalize(to_parent_list(tree)) != tree:
                return f"idempotence: {tree}"
            total += stats.m * stats.n_weight
        if total != pairing_total(n):
            return f"normalization: n={n}"
    return ""


def check_commutator(cfg: TreeMixConfig) -> str:
    return _first_failure(range(1, cfg.VERIFY_OPERATOR_MAX_N + 1), commutator_check)


def check_row_sums(cfg: TreeMixConfig) -> str:
    for n in range(1, cfg.VERIFY_OPERATOR_MAX_N + 1):
        if any(s != n for s in growth_matrix(n).row_sums()):
            return f"G row sums: n={n}"
        table = enumerate_trees(n)
        if pruning_matrix(n).row_sums() != [terminal_count(t) for t in table]:
            return f"P row sums: n={n}"
    return ""


def check_operator_identities(cfg: TreeMixConfig) -> str:
    top = min(9, cfg.VERIFY_OPERATOR_MAX_N)
    for n in range(1, top + 1):
        for k in range(1, n + 1):
            if not symmetry_identity_check(k, n):
                return f"symmetry: k={k}, n={n}"
        growth = growth_power(1, n - 1)
        pruned = pruning_power(n, n - 1)
        for j, tree in enumerate(enumerate_trees(n)):
            stats = tree_stats(tree)
            if growth.get(0, j) != stats.n_weight or pruned.get(j, 0) != stats.m:
                return f"k-step: {tree}"
    return ""


def check_chain(cfg: TreeMixConfig) -> str:
    for n in range(2, cfg.VERIFY_KERNEL_MAX_N + 1):
        plancherel_measure(n)
        up_down_kernel(n - 1)
        if not verify_reversibility(n):
            return f"reversibility: n={n}"
        if not stationarity_check(n):
            return f"stationarity: n={n}"
        if n < cfg.VERIFY_KERNEL_MAX_N and not intertwining_check(n):
            return f"intertwining: n={n}"
    return ""


def check_worked_example(cfg: TreeMixConfig) -> str:
    if plancherel_measure(4).probs != (Fraction(1, 18), Fraction(1, 9), Fraction(1, 2), Fraction(1, 3)):
        return f"π_4 = {plancherel_measure(4).probs}"
    expected = [
        [Fraction(1, 6), Fraction(1, 3), Fraction(1, 2), 0],
        [Fraction(1, 6), Fraction(1, 3), Fraction(1, 2), 0],
        [Fraction(1, 18), Fraction(1, 9), Fraction(1, 2), Fraction(1, 3)],
        [0, 0, Fraction(1, 2), Fraction(1, 2)],
    ]
    if down_up_kernel(4).as_lists() != expected:
        return "K_4 불일치"
    return ""


def check_spectrum(cfg: TreeMixConfig) -> str:
    for n in range(4, cfg.VERIFY_KERNEL_MAX_N + 1):
        try:
            verify_trace_identities(n)
        except InvariantError as e:
            return e.counterexample
        if not verify_annihilation(n):
            return f"annihilation: n={n}"
    return ""


def check_separation_routes(cfg: TreeMixConfig) -> str:
    for n in range(4, min(cfg.VERIFY_KERNEL_MAX_N, cfg.BRUTEFORCE_MAX_N) + 1):
        curves = [separation_curve(n, R_MAX_ROUTES, route) for route in (ROUTE_EIGEN, ROUTE_RECURRENCE, ROUTE_MATRIX)]
        for r in range(1, R_MAX_ROUTES + 1):
            values = [curve.values[r] for curve in curves]
            if len(set(values)) != 1:
                return f"n={n}, r={r}: {[str(v) for v in values]}"
        for r in (1, n - 2, n, R_MAX_ROUTES):
            _, pairs = separation_bruteforce(n, r)
            if not set(extremal_pairs(n)) <= set(pairs):
                return f"extremal pair: n={n}, r={r}"
    return ""


def check_updown(cfg: TreeMixConfig) -> str:
    for n in range(3, cfg.VERIFY_KERNEL_MAX_N):
        for r in range(1, R_MAX_PROPERTIES + 1):
            if separation_updown(n, r) != separation_eigen(n + 1, r + 1):
                return f"n={n}, r={r}"
    for n in range(2, min(5, cfg.BRUTEFORCE_MAX_N - 1) + 1):
        for r in range(1, 8):
            if separation_updown_bruteforce(n, r)[0] != separation_updown(n, r):
                return f"DU 거듭제곱: n={n}, r={r}"
    return ""


def check_separation_properties(cfg: TreeMixConfig) -> str:
    for n in range(3, cfg.VERIFY_KERNEL_MAX_N + 1):
        s = [separation_eigen(n, r) for r in range(R_MAX_PROPERTIES + 1)]
        for r in range(R_MAX_PROPERTIES):
            if s[r + 1] > s[r]:
                return f"monotone: n={n}, r={r}"
        for r1 in range(R_MAX_PROPERTIES + 1):
            for r2 in range(R_MAX_PROPERTIES + 1 - r1):
                if s[r1 + r2] > s[r1] * s[r2]:
                    return f"submultiplicative: n={n}, r1={r1}, r2={r2}"
        if n > 6:
            continue
        probs = plancherel_measure(n).probs
        for r, power, scale in scaled_kernel_powers(down_up_kernel(n), R_MAX_PROPERTIES):
            fractions = [[Fraction(v, scale) for v in row] for row in power]
            if tv_distance(fractions, probs) > s[r]:
                return f"total variation: n={n}, r={r}"
    return ""


def check_geometric(cfg: TreeMixConfig) -> str:
    for n in range(3, cfg.VERIFY_KERNEL_MAX_N + 1):
        for r in range(1, 16):
            if exact_geometric_tail(n, r) != separation_eigen(n, r):
                return f"n={n}, r={r}"
    return ""


def check_limit(cfg: TreeMixConfig) -> str:
    limit = limit_value(1.0, 1e-12).value
    errors = [abs(separation_float(n, math.ceil(n * n)) - limit) for n in (20, 40, 80, 160)]
    if any(b >= a for a, b in zip(errors, errors[1:])):
        return f"오차 비단조: {errors}"
    return ""


CHECKS: List[Tuple[str, Callable[[TreeMixConfig], str]]] = [
    ("tree_counts", check_tree_counts),
    ("tree_stats", check_tree_stats),
    ("commutator", check_commutator),
    ("operator_row_sums", check_row_sums),
    ("operator_identities", check_operator_identities),
    ("chain_balance", check_chain),
    ("worked_example", check_worked_example),
    ("spectrum", check_spectrum),
    ("separation_routes", check_separation_routes),
    ("updown_identity", check_updown),
    ("separation_properties", check_separation_properties),
    ("geometric_representation", check_geometric),
    ("limit_convergence", check_limit),
]


def run_suite(stop_on_failure: bool = True) -> List[CheckResult]:
    """
    전체 검증 실행

    Raises:
        InvariantError: stop_on_failure 이고 실패한 검사가 있을 때 (첫 반례)
    """
    cfg = load_config()
    results = []
    for name, check in CHECKS:
        try:
            detail = check(cfg)
        except InvariantError as e:
            detail = e.counterexample
        result = CheckResult(name, not detail, detail)
        results.append(result)
        if result.ok:
            logger.info(f"[통과] {name}")
        else:
            logger.error(f"[실패] {name}: {detail}")
            if stop_on_failure:
                raise InvariantError(name, detail)
    return results
