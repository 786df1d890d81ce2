import os
import tempfile

# 로거는 import 시점에 구성되므로 패키지 import 전에 환경변수 설정
os.environ.setdefault("TREEMIX_LOG_DIR", tempfile.mkdtemp(prefix="treemix-logs-"))
os.environ.setdefault("TREEMIX_LOG_TO_FILE", "false")
os.environ.setdefault("TREEMIX_LOG_LEVEL", "WARNING")

import pytest

from projects.modules.config import load_config

CAP_KEYS = (
    "ENUMERATE_MAX_N", "COUNT_MAX_N", "KERNEL_MAX_N", "BRUTEFORCE_MAX_N",
    "VERIFY_KERNEL_MAX_N", "VERIFY_COUNT_MAX_N", "VERIFY_OPERATOR_MAX_N", "TREEMIX_MAX_N",
)


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch):
    """테스트마다 .env / 셸 상한 설정 무시 후 기본 설정 재로드"""
    for key in CAP_KEYS:
        monkeypatch.delenv(key, raising=False)
    load_config.cache_clear()
    yield
    load_config.cache_clear()
