"""
정확 유리수 / 정수 조밀 행렬 유틸리티 (0 항목 건너뛰기 곱)
"""
import math
from fractions import Fraction
from typing import List, Sequence, Tuple

Matrix = List[List]


def identity(size: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(size)] for i in range(size)]


def nonzero_rows(matrix: Sequence[Sequence]) -> list:
    """행별 (열, 값) 목록 (0 제외)"""
    return [[(j, v) for j, v in enumerate(row) if v] for row in matrix]


def matmul(left: Sequence[Sequence], right: Sequence[Sequence], n_cols: int = None) -> Matrix:
    """
    행렬곱 (Fraction / int 공용)

    Args:
        n_cols: right 가 0행일 때 결과 열 수
    """
    if n_cols is None:
        n_cols = len(right[0]) if right else 0
    right_nz = nonzero_rows(right)
    result = []
    for row in left:
        acc = [0] * n_cols
        for k, a in enumerate(row):
            if a:
                for j, b in right_nz[k]:
                    acc[j] += a * b
        result.append(acc)
    return result


def trace(matrix: Sequence[Sequence]):
    return sum(matrix[i][i] for i in range(len(matrix)))


def trace_of_product(left: Sequence[Sequence], right: Sequence[Sequence]):
    """trace(left @ right) - 곱 전체를 만들지 않음"""
    size = len(left)
    return sum(left[i][j] * right[j][i] for i in range(size) for j in range(size) if left[i][j])


def common_denominator(matrix: Sequence[Sequence[Fraction]]) -> int:
    den = 1
    for row in matrix:
        for value in row:
            if value:
                den = math.lcm(den, Fraction(value).denominator)
    return den


def scale_to_int(matrix: Sequence[Sequence[Fraction]]) -> Tuple[Matrix, int]:
    """Fraction 행렬 → (정수 행렬 D·M, D)"""
    den = common_denominator(matrix)
    return [[int(Fraction(v) * den) for v in row] for row in matrix], den


def is_zero(matrix: Sequence[Sequence]) -> bool:
    return all(not v for row in matrix for v in row)


def subtract_scalar(matrix: Sequence[Sequence[Fraction]], scalar: Fraction) -> Matrix:
    """M - λI"""
    return [
        [v - scalar if i == j else v for j, v in enumerate(row)]
        for i, row in enumerate(matrix)
    ]
