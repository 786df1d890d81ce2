"""
down-up 체인 K_n 의 스펙트럼과 최대 분리거리 s*(r)

세 가지 독립 경로:
    eigen-formula  - 고유값 닫힌식 (정확 유리수)
    A-recurrence   - A_n(r,k) 재귀 (정확 유리수)
    matrix-power   - K^r 직접 계산 후 전수 최대 (정확 유리수, 소형 n)
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from .chain import RationalKernel, down_up_kernel, plancherel_measure, up_down_kernel
from .config import load_config
from .errors import InvariantError, TreeDomainError
from .tree_core import count_trees, enumerate_trees, pairing_total, path_tree, star_tree
from ..utils import exact_matrix
from ..utils.logger_config import setup_logger

logger = setup_logger("spectral")

ROUTE_EIGEN = "eigen-formula"
ROUTE_RECURRENCE = "A-recurrence"
ROUTE_MATRIX = "matrix-power"
ROUTE_FLOAT = "eigen-float"
ROUTES = (ROUTE_EIGEN, ROUTE_RECURRENCE, ROUTE_MATRIX, ROUTE_FLOAT)

Number = Union[Fraction, float]


def _require(n: int, minimum: int, what: str):
    if n < minimum:
        raise TreeDomainError(f"{what}: n ≥ {minimum} 이어야 합니다 (n={n})")


def eigenvalue(n: int, i: int) -> Fraction:
    """λ_i = 1 - C(i,2)/C(n,2)"""
    return 1 - Fraction(math.comb(i, 2), math.comb(n, 2))


@dataclass(frozen=True)
class Spectrum:
    """K_n 의 서로 다른 고유값과 중복도"""

    n: int
    pairs: Tuple[Tuple[Fraction, int], ...]

    def __post_init__(self):
        total = sum(mult for _, mult in self.pairs)
        if total != count_trees(self.n):
            raise InvariantError("spectrum_multiplicity", f"n={self.n}: Σ중복도 {total} != T_n")

    def power_sum(self, p: int) -> Fraction:
        """Σ 중복도·λ^p (= trace(K^p))"""
        return sum((mult * value ** p for value, mult in self.pairs), Fraction(0))

    def distinct(self) -> List[Fraction]:
        return [value for value, _ in self.pairs]


def spectrum(n: int) -> Spectrum:
    """1 (중복도 1) 과 λ_i (중복도 T_i - T_{i-1}), 3 ≤ i ≤ n"""
    _require(n, 2, "spectrum")
    pairs = [(Fraction(1), 1)]
    pairs += [(eigenvalue(n, i), count_trees(i) - count_trees(i - 1)) for i in range(3, n + 1)]
    return Spectrum(n, tuple(pairs))


def verify_trace_identities(n: int, max_power: int = 4) -> bool:
    """
    trace(K_n^p) = Σ 중복도·λ^p, p = 1..max_power (정확)

    Raises:
        InvariantError: 첫 번째 불일치 p
    """
    eigen = spectrum(n)
    scaled, den = exact_matrix.scale_to_int(down_up_kernel(n).entries)
    powers = [None, scaled]
    for _ in range(2, (max_power + 1) // 2 + 1):
        powers.append(exact_matrix.matmul(powers[-1], scaled))
    for p in range(1, max_power + 1):
        a, b = (p + 1) // 2, p // 2
        raw = exact_matrix.trace(powers[a]) if b == 0 else exact_matrix.trace_of_product(powers[a], powers[b])
        observed = Fraction(raw, den ** p)
        expected = eigen.power_sum(p)
        if observed != expected:
            raise InvariantError("trace_identity", f"n={n}, p={p}: trace={observed}, 고유값 합={expected}")
    logger.info(f"trace 항등식 확인: n={n}, p ≤ {max_power}")
    return True


def verify_annihilation(n: int) -> bool:
    """∏_{서로 다른 λ} (K_n - λI) = 0 (대각화 가능성 증거)"""
    entries = down_up_kernel(n).entries
    product = None
    for value in spectrum(n).distinct():
        factor, _ = exact_matrix.scale_to_int(exact_matrix.subtract_scalar(entries, value))
        product = factor if product is None else exact_matrix.matmul(product, factor)
    ok = exact_matrix.is_zero(product)
    if not ok:
        logger.warning(f"소거 다항식 불성립: n={n}")
    return ok


def _eigen_coefficient(n: int, i: int) -> Fraction:
    """(-1)^{i-1}(2i-1)(i+1)(i-2)(n!)² / (2n(n-i)!(n+i-1)!)"""
    numerator = (2 * i - 1) * (i + 1) * (i - 2) * math.factorial(n) ** 2
    denominator = 2 * n * math.factorial(n - i) * math.factorial(n + i - 1)
    return (-1) ** (i - 1) * Fraction(numerator, denominator)


def _separation_at_zero(n: int) -> Fraction:
    # K^0 = I: 상태가 2개 이상이면 비대각 쌍에서 1
    return Fraction(1) if count_trees(n) >= 2 else Fraction(0)


def separation_eigen(n: int, r: int) -> Fraction:
    """s*(r) 닫힌식, i = 3..n-1 (λ_n = 0 항은 r ≥ 1 에서 소멸)"""
    _require(n, 2, "separation_eigen")
    if r < 0:
        raise TreeDomainError(f"r ≥ 0 이어야 합니다 (r={r})")
    if r == 0:
        return _separation_at_zero(n)
    assert eigenvalue(n, n) == 0
    return sum(
        (_eigen_coefficient(n, i) * eigenvalue(n, i) ** r for i in range(3, n)),
        Fraction(0),
    )


def separation_from_eigenvalues(eigenvalues: Sequence[Fraction], r: int) -> Fraction:
    """Σ_i λ_i^r ∏_{j≠i} (1-λ_j)/(λ_i-λ_j) (1 을 제외한 서로 다른 고유값)"""
    total = Fraction(0)
    for i, lam in enumerate(eigenvalues):
        weight = Fraction(1)
        for j, other in enumerate(eigenvalues):
            if j != i:
                weight *= (1 - other) / (lam - other)
        total += lam ** r * weight
    return total


def a_coefficients(n: int, r: int) -> List[int]:
    """
    A_n(r,k), k = 0..n
    A_n(r,k) = A_n(r-1,k-1) + A_n(r-1,k)[C(n,2) - C(n-k,2)], A_n(0,·) = δ_0
    """
    pairs = math.comb(n, 2)
    row = [1] + [0] * n
    for _ in range(r):
        row = [
            (row[k - 1] if k else 0) + row[k] * (pairs - math.comb(n - k, 2))
            for k in range(n + 1)
        ]
    return row


def separation_recurrence(n: int, r: int) -> Fraction:
    """s*(r) = 1 - ∏_{i=2}^n C(i,2) / C(n,2)^r · [A_n(r,n-2) + A_n(r,n-1)]"""
    _require(n, 3, "separation_recurrence")
    if r < 0:
        raise TreeDomainError(f"r ≥ 0 이어야 합니다 (r={r})")
    a = a_coefficients(n, r)
    return 1 - Fraction(pairing_total(n) * (a[n - 2] + a[n - 1]), math.comb(n, 2) ** r)


def _max_separation_scaled(power: Sequence[Sequence[int]], scale: int,
                           probs: Sequence[Fraction]) -> Tuple[Fraction, List[Tuple[int, int]]]:
    """max_{x,y} 1 - K^r(x,y)/π(y), K^r = power/scale. 달성 쌍 전부 (테이블 순서)"""
    best, pairs = None, []
    for i, row in enumerate(power):
        for j, value in enumerate(row):
            candidate = 1 - Fraction(value) / (scale * probs[j])
            if best is None or candidate > best:
                best, pairs = candidate, [(i, j)]
            elif candidate == best:
                pairs.append((i, j))
    return best, pairs


def max_separation(kernel: RationalKernel, probs: Sequence[Fraction],
                   r: int) -> Tuple[Fraction, List[Tuple[int, int]]]:
    """임의 커널의 전수 최대 분리거리 (K^r 은 정수 배율 행렬 거듭제곱)"""
    scaled, den = exact_matrix.scale_to_int(kernel.entries)
    power = exact_matrix.identity(len(scaled))
    for _ in range(r):
        power = exact_matrix.matmul(power, scaled)
    return _max_separation_scaled(power, den ** r, probs)


def scaled_kernel_powers(kernel: RationalKernel, r_max: int):
    """(r, K^r 정수 배율 행렬, 배율) 을 r = 0..r_max 순서로 생성"""
    scaled, den = exact_matrix.scale_to_int(kernel.entries)
    power = exact_matrix.identity(len(scaled))
    yield 0, power, 1
    for r in range(1, r_max + 1):
        power = exact_matrix.matmul(power, scaled)
        yield r, power, den ** r


def _check_bruteforce_cap(n: int):
    load_config().require("separation_bruteforce", n, 'BRUTEFORCE_MAX_N')


def separation_bruteforce(n: int, r: int) -> Tuple[Fraction, List[Tuple[int, int]]]:
    """
    s*(r) = max_{t,t'} [1 - K^r(t,t')/π(t')] 전수 계산

    Returns:
        (값, 달성 쌍 목록) - 쌍은 테이블 인덱스, 테이블 순서

    Raises:
        ResourceLimitError: n > BRUTEFORCE_MAX_N
    """
    _require(n, 2, "separation_bruteforce")
    _check_bruteforce_cap(n)
    return max_separation(down_up_kernel(n), plancherel_measure(n).probs, r)


def extremal_pairs(n: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """(경로, 스타) 와 (스타, 경로) 의 테이블 인덱스"""
    table = enumerate_trees(n)
    path, star = table.position(path_tree(n)), table.position(star_tree(n))
    return (path, star), (star, path)


def tv_distance(power: Sequence[Sequence[Fraction]], probs: Sequence[Fraction]) -> Fraction:
    """max_t (1/2)Σ_{t'} |K^r(t,t') - π(t')|"""
    return max(
        Fraction(1, 2) * sum(abs(Fraction(v) - p) for v, p in zip(row, probs))
        for row in power
    )


def separation_updown(n: int, r: int) -> Fraction:
    """up-down 체인 DU_n 의 s*(r): 고유값 μ_i = 1 - C(i,2)/C(n+1,2), i = 3..n"""
    _require(n, 2, "separation_updown")
    if r < 1:
        raise TreeDomainError(f"r ≥ 1 이어야 합니다 (r={r})")
    mus = [1 - Fraction(math.comb(i, 2), math.comb(n + 1, 2)) for i in range(3, n + 1)]
    return separation_from_eigenvalues(mus, r)


def separation_updown_bruteforce(n: int, r: int) -> Tuple[Fraction, List[Tuple[int, int]]]:
    """DU_n 직접 거듭제곱 (정상분포 π_n)"""
    _require(n, 1, "separation_updown_bruteforce")
    _check_bruteforce_cap(n + 1)
    return max_separation(up_down_kernel(n), plancherel_measure(n).probs, r)


def _geometric_parameters(n: int) -> List[Fraction]:
    pairs = math.comb(n, 2)
    return [Fraction(math.comb(i, 2), pairs) for i in range(3, n + 1)]


def exact_geometric_tail(n: int, r: int) -> Fraction:
    """
    P(T > r), T = Σ_{i=3}^n X_i, X_i ~ Geom(C(i,2)/C(n,2)) (지지 {1,2,...})

    기하분포 pmf 를 r 까지 잘라 정확히 합성곱. 고유값 경로와 독립.
    """
    _require(n, 3, "exact_geometric_tail")
    pmf = [Fraction(1)] + [Fraction(0)] * r  # T = 0 에서 시작
    for p in _geometric_parameters(n):
        geometric = [Fraction(0)] + [p * (1 - p) ** (k - 1) for k in range(1, r + 1)]
        pmf = [
            sum((pmf[a] * geometric[t - a] for a in range(t + 1)), Fraction(0))
            for t in range(r + 1)
        ]
    return 1 - sum(pmf, Fraction(0))


def geometric_tail_curve(n: int, r_max: int, samples: int, seed: int) -> Dict[int, float]:
    """
    P(T > r), r = 1..r_max 몬테카를로 추정 (numpy PCG64, 재현 가능)

    한 번의 표본 T_1..T_samples 를 모든 r 에 공유한다.
    """
    _require(n, 3, "geometric_tail")
    if samples < 1:
        raise TreeDomainError(f"samples ≥ 1 이어야 합니다 (samples={samples})")
    rng = np.random.default_rng(seed)
    total = np.zeros(samples, dtype=np.int64)
    for p in _geometric_parameters(n):
        total += rng.geometric(float(p), size=samples)
    tails = {r: float(np.count_nonzero(total > r)) / samples for r in range(1, r_max + 1)}
    logger.info(f"기하 꼬리 추정: n={n}, r ≤ {r_max}, samples={samples}, seed={seed}")
    return tails


def geometric_tail(n: int, r: int, samples: int, seed: int) -> float:
    """P(T > r) 몬테카를로 추정"""
    if r < 1:
        raise TreeDomainError(f"r ≥ 1 이어야 합니다 (r={r})")
    return geometric_tail_curve(n, r, samples, seed)[r]


def binomial_sigma(p: float, samples: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / samples)


@dataclass(frozen=True)
class LimitSeries:
    """lim s*(cn²) 급수의 부분합"""

    c: float
    value: float
    terms_used: int
    tail_bound: float


def _limit_term_magnitude(c: float, i: int) -> float:
    return math.exp(math.log((2 * i - 1) * (i + 1) * (i - 2) / 2) - c * i * (i - 1))


def limit_value(c: float, tol: float) -> LimitSeries:
    """
    Σ_{i≥3} (-1)^{i-1}/2·(2i-1)(i+1)(i-2)·e^{-ci(i-1)}

    항 크기가 감소하기 시작한 뒤 다음 항 크기 < tol 이면 중단. 그 전까지는 모두 합산.
    """
    if c <= 0 or tol <= 0:
        raise TreeDomainError(f"c > 0, tol > 0 이어야 합니다 (c={c}, tol={tol})")
    terms = []
    previous = None
    i = 3
    while True:
        magnitude = _limit_term_magnitude(c, i)
        # 로그 오목이므로 한 번 감소하면 계속 감소
        decreasing = previous is not None and magnitude < previous
        if decreasing and magnitude < tol:
            break
        terms.append(magnitude if i % 2 == 1 else -magnitude)
        previous = magnitude
        i += 1
    return LimitSeries(c=c, value=math.fsum(terms), terms_used=len(terms), tail_bound=magnitude)


def separation_float(n: int, r: int) -> float:
    """
    닫힌식의 부동소수점 평가 (n 수백 규모)

    계수는 c_3 = 10(n-1)(n-2)/((n+1)(n+2)) 에서 시작해 비율
    c_{i+1}/c_i = -(n-i)(2i+1)(i+2)(i-1) / ((n+i)(2i-1)(i+1)(i-2)) 로 갱신, fsum 으로 합산.
    """
    _require(n, 3, "separation_float")
    if r < 0:
        raise TreeDomainError(f"r ≥ 0 이어야 합니다 (r={r})")
    if r == 0:
        return float(_separation_at_zero(n))
    pairs = math.comb(n, 2)
    coefficient = 10.0 * (n - 1) * (n - 2) / ((n + 1) * (n + 2))
    terms = []
    for i in range(3, n):
        log_lambda = math.log1p(-math.comb(i, 2) / pairs)
        terms.append(coefficient * math.exp(r * log_lambda))
        coefficient *= -((n - i) * (2 * i + 1) * (i + 2) * (i - 1)) / ((n + i) * (2 * i - 1) * (i + 1) * (i - 2))
    return math.fsum(terms)


@dataclass(frozen=True)
class SeparationCurve:
    """r → s*(r) (경로 태그 포함)"""

    n: int
    route: str
    values: Dict[int, Number] = field(default_factory=dict)

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"알 수 없는 경로: {self.route}")
        slack = 1e-12 if self.route == ROUTE_FLOAT else 0
        previous = None
        for r in sorted(self.values):
            value = self.values[r]
            if not -slack <= value <= 1 + slack:
                raise InvariantError("separation_range", f"n={self.n}, r={r}: {value}")
            if previous is not None and value > previous + slack:
                raise InvariantError("separation_monotone", f"n={self.n}, r={r}: {value} > {previous}")
            previous = value


def separation_curve(n: int, r_max: int, route: str) -> SeparationCurve:
    """r = 1..r_max 분리거리 곡선"""
    if route == ROUTE_EIGEN:
        values = {r: separation_eigen(n, r) for r in range(1, r_max + 1)}
    elif route == ROUTE_RECURRENCE:
        values = {r: separation_recurrence(n, r) for r in range(1, r_max + 1)}
    elif route == ROUTE_FLOAT:
        values = {r: separation_float(n, r) for r in range(1, r_max + 1)}
    elif route == ROUTE_MATRIX:
        _require(n, 2, "separation_bruteforce")
        _check_bruteforce_cap(n)
        probs = plancherel_measure(n).probs
        values = {
            r: _max_separation_scaled(power, scale, probs)[0]
            for r, power, scale in scaled_kernel_powers(down_up_kernel(n), r_max) if r >= 1
        }
    else:
        raise ValueError(f"알 수 없는 경로: {route}")
    logger.info(f"분리거리 곡선: n={n}, r ≤ {r_max}, 경로={route}")
    return SeparationCurve(n, route, values)
