"""
treemix 설정 관리
"""
import os
from enum import Enum
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, model_validator

from .errors import ResourceLimitError
from ..utils.logger_config import setup_logger

logger = setup_logger("setting")

load_dotenv()

SEED_MAX = 2**64 - 1


class TreeMixConfig:
    """크기 상한 / 기본값 설정 클래스"""

    def __init__(self):
        # ========== 열거 / 계수 상한 ==========
        self.ENUMERATE_MAX_N = int(os.getenv('ENUMERATE_MAX_N', 14))
        self.COUNT_MAX_N = int(os.getenv('COUNT_MAX_N', 25))

        # ========== 커널 상한 ==========
        self.KERNEL_MAX_N = int(os.getenv('KERNEL_MAX_N', 12))
        self.BRUTEFORCE_MAX_N = int(os.getenv('BRUTEFORCE_MAX_N', 8))

        # ========== verify 상한 ==========
        self.VERIFY_KERNEL_MAX_N = int(os.getenv('VERIFY_KERNEL_MAX_N', 7))
        self.VERIFY_COUNT_MAX_N = int(os.getenv('VERIFY_COUNT_MAX_N', 12))
        self.VERIFY_OPERATOR_MAX_N = int(os.getenv('VERIFY_OPERATOR_MAX_N', 10))

        # ========== 상한 일괄 상향 (비지원 영역) ==========
        self.MAX_N_OVERRIDE = os.getenv('TREEMIX_MAX_N')
        if self.MAX_N_OVERRIDE:
            override = int(self.MAX_N_OVERRIDE)
            logger.warning(f"TREEMIX_MAX_N={override} 적용 - 비지원 영역입니다")
            for key in self._cap_keys():
                setattr(self, key, max(getattr(self, key), override))

        logger.debug("TreeMixConfig 로드 완료")
        self.logger_info_config()

    @staticmethod
    def _cap_keys():
        return (
            'ENUMERATE_MAX_N', 'COUNT_MAX_N', 'KERNEL_MAX_N', 'BRUTEFORCE_MAX_N',
            'VERIFY_KERNEL_MAX_N', 'VERIFY_COUNT_MAX_N', 'VERIFY_OPERATOR_MAX_N',
        )

    def logger_info_config(self):
        """설정 출력"""
        logger.debug(f"""
    ┌──────────────────────────────────────────────┐
    │              treemix 설정                     │
    ├──────────────────────────────────────────────┤
    │  열거 상한: n ≤ {self.ENUMERATE_MAX_N:<3d}                          │
    │  계수 상한: n ≤ {self.COUNT_MAX_N:<3d}                          │
    │  커널 상한: n ≤ {self.KERNEL_MAX_N:<3d}                          │
    │  전수 탐색 상한: n ≤ {self.BRUTEFORCE_MAX_N:<3d}                     │
    ├──────────────────────────────────────────────┤
    │  verify 커널: n ≤ {self.VERIFY_KERNEL_MAX_N:<3d}                        │
    │  verify 계수: n ≤ {self.VERIFY_COUNT_MAX_N:<3d}                        │
    │  verify 연산자: n ≤ {self.VERIFY_OPERATOR_MAX_N:<3d}                      │
    └──────────────────────────────────────────────┘
        """)

    def require(self, what: str, n: int, cap_key: str):
        """
        상한 체크

        Raises:
            ResourceLimitError: n 이 상한 초과
        """
        cap = getattr(self, cap_key)
        if n > cap:
            raise ResourceLimitError(what, n, cap)

    def to_dict(self) -> dict:
        """딕셔너리로 변환 (JSON meta 용)"""
        return {key: getattr(self, key) for key in self._cap_keys()}


@lru_cache(maxsize=1)
def load_config() -> TreeMixConfig:
    """프로세스 공용 설정 (cache_clear() 로 재로드)"""
    return TreeMixConfig()


class Command(str, Enum):
    """CLI 서브커맨드"""
    ENUMERATE = "enumerate"
    STATS = "stats"
    MEASURE = "measure"
    KERNEL = "kernel"
    SPECTRUM = "spectrum"
    SEPARATION = "separation"
    LIMIT = "limit"
    SAMPLE = "sample"
    VERIFY = "verify"
    MATRIX = "matrix"


class Route(str, Enum):
    """분리거리 계산 경로"""
    EIGEN = "eigen"
    RECURRENCE = "recurrence"
    BRUTEFORCE = "bruteforce"
    ALL = "all"


class Operator(str, Enum):
    """matrix 커맨드 대상 연산자"""
    GROWTH = "growth"
    PRUNING = "pruning"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


# n 이 필요한 커맨드
_NEEDS_N = {
    Command.ENUMERATE, Command.STATS, Command.MEASURE, Command.KERNEL,
    Command.SPECTRUM, Command.SEPARATION, Command.SAMPLE, Command.MATRIX,
}


class RunConfig(BaseModel):
    """CLI 실행 설정 (커맨드별 필수 필드 검증)"""

    model_config = {"frozen": True, "use_enum_values": False}

    command: Command
    n: Optional[int] = Field(default=None, ge=1)
    r_max: int = Field(default=10, ge=0)
    c: float = Field(default=1.0, gt=0)
    tol: float = Field(default=1e-12, gt=0)
    samples: int = Field(default=100_000, ge=1)
    seed: int = Field(default=0, ge=0, le=SEED_MAX)
    route: Route = Route.EIGEN
    operator: Operator = Operator.GROWTH
    power: int = Field(default=1, ge=1)
    output_path: Optional[str] = None
    format: OutputFormat = OutputFormat.CSV

    @model_validator(mode="after")
    def _check_command_fields(self):
        if self.command in _NEEDS_N and self.n is None:
            raise ValueError(f"'{self.command.value}' 커맨드에는 --n 이 필요합니다")
        if self.command == Command.SEPARATION:
            if self.r_max < 1:
                raise ValueError("separation 은 --r-max ≥ 1 이 필요합니다")
            if self.route in (Route.RECURRENCE, Route.ALL) and self.n < 3:
                raise ValueError("recurrence 경로는 n ≥ 3 이 필요합니다")
            if self.n < 2:
                raise ValueError("separation 은 n ≥ 2 가 필요합니다")
        if self.command == Command.SPECTRUM and self.n < 2:
            raise ValueError("spectrum 은 n ≥ 2 가 필요합니다")
        return self

    def echo(self) -> dict:
        """JSON meta 용 설정 에코"""
        return self.model_dump(mode="json")
