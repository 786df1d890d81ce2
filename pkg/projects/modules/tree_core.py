"""
루트 트리 (rooted unlabeled tree) 정규형 / 열거 / 조합 통계

정규형: 괄호 문자열. 각 정점의 자식 부분문자열은 바이트 사전순 오름차순.
"""
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Optional, Sequence, Tuple

from .config import load_config
from .errors import MalformedTreeError, TreeDomainError
from ..utils.logger_config import setup_logger

logger = setup_logger("tree")

OPEN = "("
CLOSE = ")"
LEAF = OPEN + CLOSE


@dataclass(frozen=True, order=True)
class CanonicalTree:
    """정규형 루트 트리 (값 타입)"""

    encoding: str

    def __post_init__(self):
        if canonicalize_encoding(self.encoding) != self.encoding:
            raise MalformedTreeError(f"정규형이 아닌 인코딩: {self.encoding!r}")

    @property
    def size(self) -> int:
        return len(self.encoding) // 2

    def __str__(self):
        return self.encoding


def _split_children(encoding: str) -> list:
    """루트 바로 아래 자식 부분문자열 목록 (입력 순서 그대로)"""
    children = []
    depth = 0
    start = 1
    for pos in range(1, len(encoding) - 1):
        depth += 1 if encoding[pos] == OPEN else -1
        if depth == 0:
            children.append(encoding[start:pos + 1])
            start = pos + 1
    return children


def _check_balanced(encoding: str):
    if not encoding or encoding[0] != OPEN or encoding[-1] != CLOSE:
        raise MalformedTreeError(f"괄호 인코딩 형식 오류: {encoding!r}")
    depth = 0
    for pos, ch in enumerate(encoding):
        if ch == OPEN:
            depth += 1
        elif ch == CLOSE:
            depth -= 1
        else:
            raise MalformedTreeError(f"허용되지 않는 문자 {ch!r}: {encoding!r}")
        # 루트가 닫히기 전에 깊이 0 이 되면 포레스트
        if depth == 0 and pos != len(encoding) - 1:
            raise MalformedTreeError(f"포레스트 인코딩: {encoding!r}")
        if depth < 0:
            raise MalformedTreeError(f"불균형 괄호: {encoding!r}")
    if depth != 0:
        raise MalformedTreeError(f"불균형 괄호: {encoding!r}")


@lru_cache(maxsize=None)
def _canon(encoding: str) -> str:
    children = sorted(_canon(child) for child in _split_children(encoding))
    return OPEN + "".join(children) + CLOSE


def canonicalize_encoding(encoding: str) -> str:
    """임의의 균형 괄호 문자열 → 정규형 문자열"""
    _check_balanced(encoding)
    return _canon(encoding)


def canonicalize(parent_list: Sequence[Optional[int]]) -> CanonicalTree:
    """
    부모 리스트 → 정규형 트리

    Args:
        parent_list: parent_list[v] = v 의 부모 인덱스, 루트는 None 또는 -1

    Raises:
        MalformedTreeError: 루트 0개/2개 이상, 범위 밖 인덱스, 사이클
    """
    size = len(parent_list)
    if size == 0:
        raise MalformedTreeError("빈 부모 리스트")

    roots = [v for v, p in enumerate(parent_list) if p is None or p == -1]
    if len(roots) != 1:
        raise MalformedTreeError(f"루트가 정확히 1개여야 합니다 (발견: {len(roots)}개)")

    children: Dict[int, list] = {v: [] for v in range(size)}
    for v, p in enumerate(parent_list):
        if p is None or p == -1:
            continue
        if not 0 <= p < size or p == v:
            raise MalformedTreeError(f"정점 {v} 의 부모 인덱스 {p} 가 올바르지 않습니다")
        children[p].append(v)

    # 루트에서 도달 가능한 정점 수로 사이클/포레스트 판정
    order = []
    stack = [roots[0]]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(children[v])
    if len(order) != size:
        raise MalformedTreeError(f"사이클 또는 포레스트 (도달 {len(order)}/{size})")

    encoded: Dict[int, str] = {}
    for v in reversed(order):
        encoded[v] = OPEN + "".join(sorted(encoded[c] for c in children[v])) + CLOSE
    return CanonicalTree(encoded[roots[0]])


def to_parent_list(tree: CanonicalTree) -> list:
    """정규형 트리 → 부모 리스트 (정점 번호 = 인코딩의 여는 괄호 순서, 루트 -1)"""
    parents = []
    stack = []
    for ch in tree.encoding:
        if ch == OPEN:
            parents.append(stack[-1] if stack else -1)
            stack.append(len(parents) - 1)
        else:
            stack.pop()
    return parents


def path_tree(n: int) -> CanonicalTree:
    """정점 n개 경로 (말단 정점 1개)"""
    _check_size(n)
    return CanonicalTree(OPEN * n + CLOSE * n)


def star_tree(n: int) -> CanonicalTree:
    """루트 + 잎 n-1개 (말단 정점 n-1개)"""
    _check_size(n)
    return CanonicalTree(OPEN + LEAF * (n - 1) + CLOSE)


def terminal_count(tree: CanonicalTree) -> int:
    """말단 정점 수 (단일 정점은 0: P(•) = 0)"""
    if tree.size == 1:
        return 0
    return tree.encoding.count(LEAF)


def _check_size(n: int):
    if n < 1:
        raise TreeDomainError(f"트리 크기는 1 이상이어야 합니다 (n={n})")


@dataclass(frozen=True)
class TreeTable:
    """크기 n 정규형 트리 전체의 색인 테이블 (바이트 사전순 오름차순)"""

    size: int
    trees: Tuple[CanonicalTree, ...]
    index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, 'index', {t.encoding: i for i, t in enumerate(self.trees)}
        )

    def __len__(self):
        return len(self.trees)

    def __getitem__(self, position: int) -> CanonicalTree:
        return self.trees[position]

    def __iter__(self):
        return iter(self.trees)

    def position(self, tree) -> int:
        """트리(또는 인코딩) → 테이블 위치"""
        encoding = tree.encoding if isinstance(tree, CanonicalTree) else tree
        return self.index[encoding]

    def encodings(self) -> list:
        return [t.encoding for t in self.trees]


def _leaf_insertions(encoding: str) -> list:
    """각 정점에 잎 하나를 붙인 (비정규) 문자열 목록, 정점 순서"""
    return [
        encoding[:pos + 1] + LEAF + encoding[pos + 1:]
        for pos, ch in enumerate(encoding) if ch == OPEN
    ]


@lru_cache(maxsize=None)
def _enumerate(n: int) -> TreeTable:
    if n == 1:
        return TreeTable(1, (CanonicalTree(LEAF),))
    found = set()
    for tree in _enumerate(n - 1):
        for grown in _leaf_insertions(tree.encoding):
            found.add(_canon(grown))
    return TreeTable(n, tuple(CanonicalTree(e) for e in sorted(found)))


def enumerate_trees(n: int) -> TreeTable:
    """
    크기 n 트리 전체 열거 (n-1 테이블에서 잎 추가 후 중복 제거)

    Raises:
        TreeDomainError: n < 1
        ResourceLimitError: n > ENUMERATE_MAX_N
    """
    _check_size(n)
    load_config().require("enumerate_trees", n, 'ENUMERATE_MAX_N')
    cached = _enumerate.cache_info().currsize
    table = _enumerate(n)
    if _enumerate.cache_info().currsize != cached:
        logger.info(f"트리 열거 완료: n={n}, T_n={len(table)}")
    return table


@lru_cache(maxsize=None)
def _otter_counts(limit: int) -> Tuple[int, ...]:
    # S = ∏_{k<m} (1-x^k)^{-T_k}, T_m = [x^{m-1}] S
    counts = [0]
    series = [1] + [0] * (limit - 1)
    for k in range(1, limit + 1):
        t_k = series[k - 1]
        counts.append(t_k)
        if k == limit:
            break
        updated = list(series)
        for degree in range(k, limit):
            total = 0
            for j in range(1, degree // k + 1):
                total += math.comb(t_k + j - 1, j) * series[degree - k * j]
            updated[degree] = series[degree] + total
        series = updated
    return tuple(counts)


def count_trees(n: int) -> int:
    """
    T_n (Otter 재귀, 멱급수 계수 추출) - 열거와 독립

    Raises:
        TreeDomainError: n < 1
    """
    _check_size(n)
    return _otter_counts(n)[n]


@dataclass(frozen=True)
class TreeStats:
    """트리 조합 통계"""

    m: int                          # 제거 순서 수 m(t)
    n_weight: int                   # 생성 순서 수 n(t) (Connes-Moscovici weight)
    sg_order: int                   # |SG(t)|
    subtree_sizes: Tuple[int, ...]  # h(v), 인코딩 정점 순서

    @property
    def hook_product(self) -> int:
        return math.prod(self.subtree_sizes)


def subtree_sizes(tree: CanonicalTree) -> Tuple[int, ...]:
    """h(v) 목록 (여는 괄호 순서)"""
    sizes = [0] * tree.size
    stack = []
    vertex = 0
    for pos, ch in enumerate(tree.encoding):
        if ch == OPEN:
            stack.append((vertex, pos))
            vertex += 1
        else:
            v, start = stack.pop()
            sizes[v] = (pos - start + 1) // 2
    return tuple(sizes)


def hook_product(tree: CanonicalTree) -> int:
    return tree_stats(tree).hook_product


@lru_cache(maxsize=None)
def _symmetry_order(encoding: str) -> int:
    children = _split_children(encoding)
    order = 1
    for count in Counter(children).values():
        order *= math.factorial(count)
    for child in children:
        order *= _symmetry_order(child)
    return order


def tree_stats(tree: CanonicalTree) -> TreeStats:
    """m(t) = n!/∏h(v), |SG(t)| = ∏ k_j!, n(t) = m(t)/|SG(t)|"""
    sizes = subtree_sizes(tree)
    m, rem = divmod(math.factorial(tree.size), math.prod(sizes))
    assert rem == 0, f"hook 공식 나눗셈 오류: {tree}"
    sg_order = _symmetry_order(tree.encoding)
    n_weight, rem = divmod(m, sg_order)
    assert rem == 0, f"|SG(t)| 가 m(t) 를 나누지 않음: {tree}"
    return TreeStats(m=m, n_weight=n_weight, sg_order=sg_order, subtree_sizes=sizes)


def pairing_total(n: int) -> int:
    """∏_{i=2}^n C(i,2) (π_n 의 분모)"""
    return math.prod(math.comb(i, 2) for i in range(2, n + 1))

