"""
성장 연산자 G / 가지치기 연산자 P 와 행렬 형태

행렬은 행 = 출발 트리, 열 = 도착 트리 (행 벡터 규약).
연산자 합성 "G 다음 P" 는 행렬곱 G @ P 에 해당한다.
"""
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

from sortedcontainers import SortedDict

from .config import load_config
from .errors import TreeDomainError
from .tree_core import (
    CLOSE, LEAF, OPEN, CanonicalTree, TreeTable, _canon, _leaf_insertions,
    enumerate_trees, tree_stats,
)
from ..utils.logger_config import setup_logger

logger = setup_logger("operator")


def grow(tree: CanonicalTree) -> Dict[CanonicalTree, int]:
    """
    G(t) = Σ n(t,t') t'

    Returns:
        dict: {t': 잎을 붙였을 때 t' 가 되는 정점 수}, 합계 = |t|
    """
    counts: Dict[str, int] = defaultdict(int)
    for grown in _leaf_insertions(tree.encoding):
        counts[_canon(grown)] += 1
    return {CanonicalTree(e): c for e, c in sorted(counts.items())}


def _leaf_removals(encoding: str) -> list:
    """말단 정점 "()" 하나씩 삭제한 (비정규) 문자열 목록"""
    return [
        encoding[:pos] + encoding[pos + 2:]
        for pos in range(1, len(encoding) - 2)
        if encoding[pos] == OPEN and encoding[pos + 1] == CLOSE
    ]


def prune(tree: CanonicalTree) -> Dict[CanonicalTree, int]:
    """
    P(t) = Σ m(t',t) t'  (P(•) = 0 → 빈 dict)

    Returns:
        dict: {t': 삭제 시 t' 가 되는 말단 간선 수}, 합계 = 말단 정점 수
    """
    if tree.encoding == LEAF:
        return {}
    counts: Dict[str, int] = defaultdict(int)
    for pruned in _leaf_removals(tree.encoding):
        counts[_canon(pruned)] += 1
    return {CanonicalTree(e): c for e, c in sorted(counts.items())}


@dataclass(frozen=True)
class CountMatrix:
    """
    희소 정수 행렬 (0 은 저장하지 않음)

    cols 가 None 이면 크기 0 의 공역 (P(•) = 0 의 행렬 형태, T_n × 0).
    """

    rows: TreeTable
    cols: Optional[TreeTable]
    entries: SortedDict

    def __post_init__(self):
        n_cols = self.shape[1]
        for (i, j), value in self.entries.items():
            if value <= 0:
                raise ValueError(f"CountMatrix 항목은 양수여야 합니다: ({i},{j})={value}")
            if not (0 <= i < len(self.rows) and 0 <= j < n_cols):
                raise IndexError(f"CountMatrix 인덱스 범위 초과: ({i},{j})")

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), 0 if self.cols is None else len(self.cols)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def get(self, i: int, j: int) -> int:
        return self.entries.get((i, j), 0)

    def at(self, row_tree: CanonicalTree, col_tree: CanonicalTree) -> int:
        """트리 쌍으로 항목 조회"""
        return self.get(self.rows.position(row_tree), self.cols.position(col_tree))

    def row(self, i: int) -> Dict[int, int]:
        keys = self.entries.irange((i, 0), (i, self.shape[1]), inclusive=(True, False))
        return {j: self.entries[(i, j)] for (_, j) in keys}

    def row_sums(self) -> list:
        sums = [0] * len(self.rows)
        for (i, _), value in self.entries.items():
            sums[i] += value
        return sums

    def to_dense(self) -> list:
        dense = [[0] * self.shape[1] for _ in range(self.shape[0])]
        for (i, j), value in self.entries.items():
            dense[i][j] = value
        return dense

    def __matmul__(self, other: 'CountMatrix') -> 'CountMatrix':
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"행렬곱 차원 불일치: {self.shape} @ {other.shape}")
        other_rows: Dict[int, list] = defaultdict(list)
        for (k, j), value in other.entries.items():
            other_rows[k].append((j, value))
        acc: Dict[Tuple[int, int], int] = defaultdict(int)
        for (i, k), left in self.entries.items():
            for j, right in other_rows.get(k, ()):
                acc[(i, j)] += left * right
        return CountMatrix(self.rows, other.cols, SortedDict({k: v for k, v in acc.items() if v}))

    def __sub__(self, other: 'CountMatrix') -> Dict[Tuple[int, int], int]:
        """차이 (음수 가능하므로 dict 로 반환, 0 항목 제외)"""
        if self.shape != other.shape:
            raise ValueError(f"행렬 차원 불일치: {self.shape} - {other.shape}")
        diff: Dict[Tuple[int, int], int] = defaultdict(int)
        for key, value in self.entries.items():
            diff[key] += value
        for key, value in other.entries.items():
            diff[key] -= value
        return {k: v for k, v in sorted(diff.items()) if v}

    @classmethod
    def identity(cls, table: TreeTable) -> 'CountMatrix':
        return cls(table, table, SortedDict({(i, i): 1 for i in range(len(table))}))

    @classmethod
    def zero(cls, rows: TreeTable, cols: Optional[TreeTable]) -> 'CountMatrix':
        return cls(rows, cols, SortedDict())


def _check_size(n: int):
    if n < 1:
        raise TreeDomainError(f"트리 크기는 1 이상이어야 합니다 (n={n})")


@lru_cache(maxsize=None)
def growth_matrix(n: int) -> CountMatrix:
    """G: T_n → T_{n+1}, 형태 T_n × T_{n+1}"""
    _check_size(n)
    load_config().require("growth_matrix", n + 1, 'ENUMERATE_MAX_N')
    source, target = enumerate_trees(n), enumerate_trees(n + 1)
    entries = SortedDict()
    for i, tree in enumerate(source):
        for grown, count in grow(tree).items():
            entries[(i, target.position(grown))] = count
    matrix = CountMatrix(source, target, entries)
    logger.debug(f"G 행렬 생성: n={n}, shape={matrix.shape}, nnz={matrix.nnz}")
    return matrix


@lru_cache(maxsize=None)
def pruning_matrix(n: int) -> CountMatrix:
    """P: T_n → T_{n-1}, 형태 T_n × T_{n-1} (n = 1 이면 1 × 0)"""
    _check_size(n)
    source = enumerate_trees(n)
    if n == 1:
        return CountMatrix.zero(source, None)
    target = enumerate_trees(n - 1)
    entries = SortedDict()
    for i, tree in enumerate(source):
        for pruned, count in prune(tree).items():
            entries[(i, target.position(pruned))] = count
    matrix = CountMatrix(source, target, entries)
    logger.debug(f"P 행렬 생성: n={n}, shape={matrix.shape}, nnz={matrix.nnz}")
    return matrix


def growth_power(n: int, k: int) -> CountMatrix:
    """G^k: T_n → T_{n+k}, G^k[s,t] = n(s,t)"""
    _check_size(n)
    if k < 0:
        raise TreeDomainError(f"단계 수 k 는 0 이상이어야 합니다 (k={k})")
    power = CountMatrix.identity(enumerate_trees(n))
    for size in range(n, n + k):
        power = power @ growth_matrix(size)
    return power


def pruning_power(n: int, k: int) -> CountMatrix:
    """
    P^k: T_n → T_{n-k}, P^k[t,s] = m(s,t)

    Raises:
        TreeDomainError: k < 0 또는 n - k < 1
    """
    _check_size(n)
    if not 0 <= k <= n - 1:
        raise TreeDomainError(f"가지치기 단계 수는 0 ≤ k ≤ n - 1 이어야 합니다 (n={n}, k={k})")
    power = CountMatrix.identity(enumerate_trees(n))
    for size in range(n, n - k, -1):
        power = power @ pruning_matrix(size)
    return power


def k_step_counts(n: int, k: int) -> Tuple[CountMatrix, CountMatrix]:
    """
    (G^k, P^k) - 크기 n 출발, 단일 단계 행렬의 연쇄 곱

    Raises:
        TreeDomainError: n < 1, k < 0 또는 n - k < 1
    """
    pruned = pruning_power(n, k)
    return growth_power(n, k), pruned


def commutator_matrix(n: int) -> Dict[Tuple[int, int], int]:
    """PG - GP on T_n (0 이 아닌 항목만). n = 1 이면 GP 는 0 행렬."""
    _check_size(n)
    grow_then_prune = growth_matrix(n) @ pruning_matrix(n + 1)
    if n == 1:
        prune_then_grow = CountMatrix.zero(grow_then_prune.rows, grow_then_prune.cols)
    else:
        prune_then_grow = pruning_matrix(n) @ growth_matrix(n - 1)
    return grow_then_prune - prune_then_grow


def commutator_check(n: int) -> bool:
    """PG - GP = nI 정확 성립 여부"""
    diff = commutator_matrix(n)
    expected = {(i, i): n for i in range(len(enumerate_trees(n)))}
    ok = diff == expected
    if ok:
        logger.info(f"교환관계 PG - GP = {n}I 확인 (T_n={len(expected)})")
    else:
        logger.warning(f"교환관계 불성립: n={n}")
    return ok


def symmetry_identity_check(k: int, n: int) -> bool:
    """모든 s ∈ T_k, t ∈ T_n 에 대해 n(s,t)·|SG(t)| = m(s,t)·|SG(s)|"""
    if not 1 <= k <= n:
        raise TreeDomainError(f"1 ≤ k ≤ n 이어야 합니다 (k={k}, n={n})")
    growth = growth_power(k, n - k)
    pruned = pruning_power(n, n - k)
    small, large = enumerate_trees(k), enumerate_trees(n)
    small_sg = [tree_stats(s).sg_order for s in small]
    large_sg = [tree_stats(t).sg_order for t in large]
    for i in range(len(small)):
        for j in range(len(large)):
            if growth.get(i, j) * large_sg[j] != pruned.get(j, i) * small_sg[i]:
                logger.warning(f"대칭 항등식 불성립: s={small[i]}, t={large[j]}")
                return False
    return True
