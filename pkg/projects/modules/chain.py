"""
Plancherel 형 측도 π_n 과 상/하 전이 커널, down-up / up-down 체인

모든 커널 항목은 fractions.Fraction (부동소수점 없음).
"""
import math
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from .config import load_config
from .errors import InvariantError, TreeDomainError
from .operators import CountMatrix, growth_matrix, pruning_matrix
from .tree_core import CanonicalTree, TreeTable, enumerate_trees, pairing_total, tree_stats
from ..utils import exact_matrix
from ..utils.logger_config import setup_logger

logger = setup_logger("chain")

RNG_ALGORITHM = "numpy.PCG64"
_TWO_64 = 2**64


@dataclass(frozen=True)
class Measure:
    """트리 테이블 위의 정확 확률측도"""

    table: TreeTable
    probs: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.probs) != len(self.table):
            raise InvariantError("measure_shape", f"{len(self.probs)} != {len(self.table)}")
        if sum(self.probs) != 1:
            raise InvariantError("measure_sum", f"n={self.table.size}, 합계={sum(self.probs)}")
        for tree, p in zip(self.table, self.probs):
            if p <= 0:
                raise InvariantError("measure_positive", f"π({tree}) = {p}")

    def __getitem__(self, tree) -> Fraction:
        return self.probs[self.table.position(tree)]


@dataclass(frozen=True)
class RationalKernel:
    """정확 유리수 전이 커널 (행 합 = 1, 항목 ≥ 0)"""

    from_table: TreeTable
    to_table: TreeTable
    entries: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        for tree, row in zip(self.from_table, self.entries):
            if len(row) != len(self.to_table):
                raise InvariantError("kernel_shape", f"행 {tree} 길이 {len(row)}")
            if any(v < 0 for v in row):
                raise InvariantError("kernel_nonnegative", f"행 {tree}")
            if sum(row) != 1:
                raise InvariantError("kernel_row_sum", f"행 {tree} 합계 {sum(row)}")

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.from_table), len(self.to_table)

    def at(self, source, target) -> Fraction:
        return self.entries[self.from_table.position(source)][self.to_table.position(target)]

    def __matmul__(self, other: 'RationalKernel') -> 'RationalKernel':
        product = exact_matrix.matmul(self.entries, other.entries, len(other.to_table))
        return RationalKernel(
            self.from_table, other.to_table,
            tuple(tuple(Fraction(v) for v in row) for row in product),
        )

    def as_lists(self) -> list:
        return [list(row) for row in self.entries]


def _freeze(rows) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


def _check_kernel_size(n: int, minimum: int):
    if n < minimum:
        raise TreeDomainError(f"n ≥ {minimum} 이어야 합니다 (n={n})")
    load_config().require("kernel", n, 'KERNEL_MAX_N')


@lru_cache(maxsize=None)
def _stats(n: int) -> tuple:
    return tuple(tree_stats(t) for t in enumerate_trees(n))


def measure_second_form(n: int) -> Tuple[Fraction, ...]:
    """π_n(t) = n·2^{n-1} / (|SG(t)|·∏h(v)²)"""
    numerator = n * 2 ** (n - 1)
    return tuple(Fraction(numerator, s.sg_order * s.hook_product ** 2) for s in _stats(n))


@lru_cache(maxsize=None)
def plancherel_measure(n: int) -> Measure:
    """
    π_n(t) = m(t)·n(t) / ∏_{i=2}^n C(i,2)

    Raises:
        InvariantError: 두 번째 형태와 불일치
    """
    if n < 1:
        raise TreeDomainError(f"n ≥ 1 이어야 합니다 (n={n})")
    table = enumerate_trees(n)
    total = pairing_total(n)
    probs = tuple(Fraction(s.m * s.n_weight, total) for s in _stats(n))
    second = measure_second_form(n)
    for tree, p, q in zip(table, probs, second):
        if p != q:
            raise InvariantError("measure_second_form", f"t={tree}: {p} != {q}")
    logger.info(f"π_{n} 생성 (T_n={len(table)})")
    return Measure(table, probs)


@lru_cache(maxsize=None)
def up_kernel(n: int) -> RationalKernel:
    """
    P_u: T_{n-1} → T_n
    P_u(t,t') = m(t,t')n(t') / (C(n,2)n(t)) = n(t,t')m(t') / (C(n,2)m(t))
    """
    _check_kernel_size(n, 2)
    source, target = enumerate_trees(n - 1), enumerate_trees(n)
    small, large = _stats(n - 1), _stats(n)
    pairs = math.comb(n, 2)
    pruning = pruning_matrix(n)     # [t', t] = m(t,t')
    growth = growth_matrix(n - 1)   # [t, t'] = n(t,t')

    rows = [[Fraction(0)] * len(target) for _ in source]
    for (j, i), m_count in pruning.entries.items():
        rows[i][j] = Fraction(m_count * large[j].n_weight, pairs * small[i].n_weight)

    for i in range(len(source)):
        for j in range(len(target)):
            second = Fraction(growth.get(i, j) * large[j].m, pairs * small[i].m)
            if rows[i][j] != second:
                raise InvariantError("up_kernel_forms", f"({source[i]}, {target[j]}): {rows[i][j]} != {second}")
    return RationalKernel(source, target, _freeze(rows))


@lru_cache(maxsize=None)
def down_kernel(n: int) -> RationalKernel:
    """
    P_d: T_n → T_{n-1}
    P_d(t,t') = m(t',t)m(t') / m(t)
    """
    _check_kernel_size(n, 2)
    source, target = enumerate_trees(n), enumerate_trees(n - 1)
    large, small = _stats(n), _stats(n - 1)
    rows = [[Fraction(0)] * len(target) for _ in source]
    for (i, j), m_count in pruning_matrix(n).entries.items():
        rows[i][j] = Fraction(m_count * small[j].m, large[i].m)
    return RationalKernel(source, target, _freeze(rows))


def _conjugate(counts: CountMatrix, n: int, pairs: int) -> list:
    """(1/pairs)·A·M·A^{-1}: 항목별 m(t')/m(t) 배율"""
    stats = _stats(n)
    size = len(counts.rows)
    rows = [[Fraction(0)] * size for _ in range(size)]
    for (i, j), value in counts.entries.items():
        rows[i][j] = Fraction(value * stats[j].m, pairs * stats[i].m)
    return rows


@lru_cache(maxsize=None)
def down_up_kernel(n: int) -> RationalKernel:
    """
    K_n = P_d ∘ P_u, 독립적으로 K_n = (1/C(n,2))·A·G·P·A^{-1} 와 비교

    K_1 은 1×1 단위행렬로 정의.
    """
    if n == 1:
        table = enumerate_trees(1)
        return RationalKernel(table, table, ((Fraction(1),),))
    _check_kernel_size(n, 2)
    composed = down_kernel(n) @ up_kernel(n)
    conjugated = _conjugate(pruning_matrix(n) @ growth_matrix(n - 1), n, math.comb(n, 2))
    if composed.as_lists() != conjugated:
        raise InvariantError("down_up_construction", f"n={n}: 합성 K 와 켤레 K 불일치")
    logger.info(f"down-up 커널 생성: n={n}, shape={composed.shape}")
    return composed


@lru_cache(maxsize=None)
def up_down_kernel(n: int) -> RationalKernel:
    """DU_n = P_u ∘ P_d on T_n, 독립적으로 DU_n = (1/C(n+1,2))·A·P·G·A^{-1} 와 비교"""
    if n < 1:
        raise TreeDomainError(f"n ≥ 1 이어야 합니다 (n={n})")
    load_config().require("kernel", n + 1, 'KERNEL_MAX_N')
    composed = up_kernel(n + 1) @ down_kernel(n + 1)
    conjugated = _conjugate(growth_matrix(n) @ pruning_matrix(n + 1), n, math.comb(n + 1, 2))
    if composed.as_lists() != conjugated:
        raise InvariantError("up_down_construction", f"n={n}: 합성 DU 와 켤레 DU 불일치")
    logger.info(f"up-down 커널 생성: n={n}, shape={composed.shape}")
    return composed


def push_forward(measure: Measure, kernel: RationalKernel) -> Tuple[Fraction, ...]:
    """μ·K (행 벡터)"""
    result = [Fraction(0)] * len(kernel.to_table)
    for p, row in zip(measure.probs, kernel.entries):
        for j, value in enumerate(row):
            if value:
                result[j] += p * value
    return tuple(result)


def intertwining_check(n: int) -> bool:
    """π_{n-1}·P_u = π_n 및 π_{n+1}·P_d = π_n"""
    target = plancherel_measure(n).probs
    up_ok = n < 2 or push_forward(plancherel_measure(n - 1), up_kernel(n)) == target
    down_ok = push_forward(plancherel_measure(n + 1), down_kernel(n + 1)) == target
    if not (up_ok and down_ok):
        logger.warning(f"intertwining 불성립: n={n}, up={up_ok}, down={down_ok}")
    return up_ok and down_ok


def stationarity_check(n: int, kernel: Optional[RationalKernel] = None) -> bool:
    """π_n·K = π_n (기본 K = down-up)"""
    kernel = kernel or down_up_kernel(n)
    measure = plancherel_measure(n)
    return push_forward(measure, kernel) == measure.probs


def verify_reversibility(n: int) -> bool:
    """상세균형 π(t)K(t,t') = π(t')K(t',t) 전수 검사"""
    kernel = down_up_kernel(n)
    probs = plancherel_measure(n).probs
    size = len(probs)
    for i in range(size):
        for j in range(i + 1, size):
            if probs[i] * kernel.entries[i][j] != probs[j] * kernel.entries[j][i]:
                logger.warning(f"상세균형 불성립: ({kernel.from_table[i]}, {kernel.from_table[j]})")
                return False
    return True


@dataclass(frozen=True)
class TrajectorySample:
    """down-up 체인 궤적 (states[k+1] 은 intermediates[k] 를 거쳐 도달)"""

    states: Tuple[int, ...]
    intermediates: Tuple[int, ...]
    seed: int
    n: int
    algorithm: str = RNG_ALGORITHM


def _inverse_cdf_rows(kernel: RationalKernel) -> list:
    """행별 (정수 임계값 목록, 열 인덱스 목록): u < ceil(cdf·2^64) ⇔ u/2^64 < cdf"""
    rows = []
    for row in kernel.entries:
        thresholds, targets = [], []
        cdf = Fraction(0)
        for j, value in enumerate(row):
            if value:
                cdf += value
                thresholds.append(-((-cdf.numerator * _TWO_64) // cdf.denominator))
                targets.append(j)
        rows.append((thresholds, targets))
    return rows


def _pick(row: tuple, draw: int) -> int:
    thresholds, targets = row
    return targets[bisect_right(thresholds, draw)]


def sample_trajectory(n: int, steps: int, start: CanonicalTree, seed: int) -> TrajectorySample:
    """
    K 의 몬테카를로 궤적: 매 단계 P_d 로 내려간 뒤 P_u 로 올라감

    균등 64비트 난수 u 를 유리수 u/2^64 로 보고 정렬 테이블 순서의 정확 누적분포와 비교.
    """
    if start.size != n:
        raise TreeDomainError(f"시작 트리 크기 {start.size} != n={n}")
    if steps < 0:
        raise TreeDomainError(f"steps ≥ 0 이어야 합니다 (steps={steps})")
    table = enumerate_trees(n)
    state = table.position(start)
    if steps == 0 or n == 1:
        return TrajectorySample((state,) * (steps + 1), (), seed, n)

    down_rows = _inverse_cdf_rows(down_kernel(n))
    up_rows = _inverse_cdf_rows(up_kernel(n))
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.integers(0, _TWO_64 - 1, size=2 * steps, dtype=np.uint64, endpoint=True).tolist()

    states, intermediates = [state], []
    for k in range(steps):
        middle = _pick(down_rows[state], draws[2 * k])
        state = _pick(up_rows[middle], draws[2 * k + 1])
        intermediates.append(middle)
        states.append(state)
    logger.info(f"궤적 샘플링 완료: n={n}, steps={steps}, seed={seed}")
    return TrajectorySample(tuple(states), tuple(intermediates), seed, n)


def empirical_frequencies(sample: TrajectorySample, thin: int = 1) -> Tuple[int, ...]:
    """상태별 방문 횟수 (테이블 순서, thin 간격 추출)"""
    counts = Counter(sample.states[::thin])
    return tuple(counts.get(i, 0) for i in range(len(enumerate_trees(sample.n))))
