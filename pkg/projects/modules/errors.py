"""
treemix 예외 정의
"""


class TreeMixError(Exception):
    """treemix 공통 예외"""


class MalformedTreeError(TreeMixError, ValueError):
    """부모 리스트 / 괄호 인코딩이 올바른 루트 트리가 아님 (사이클, 포레스트, 불균형 괄호)"""


class TreeDomainError(TreeMixError, ValueError):
    """수학적 정의역 밖의 인자 (n = 0, 음수 k 등)"""


class ResourceLimitError(TreeMixError):
    """설정된 크기 상한 초과"""

    def __init__(self, what: str, n: int, cap: int):
        self.what = what
        self.n = n
        self.cap = cap
        super().__init__(f"{what}: n={n} 이 상한 {cap} 을 초과합니다 (TREEMIX_MAX_N 으로 상향 가능)")


class InvariantError(TreeMixError):
    """정확 등식 검증 실패 (첫 번째 반례 포함)"""

    def __init__(self, check: str, counterexample: str):
        self.check = check
        self.counterexample = counterexample
        super().__init__(f"[{check}] 반례: {counterexample}")
