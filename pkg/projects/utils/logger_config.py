"""
로깅 설정 모듈
"""
import logging
import os
from datetime import datetime


class CustomFormatter(logging.Formatter):
    """커스텀 포맷터: error/info/wrong 구분 및 에러 위치 강조"""

    def format(self, record):
        # 레벨명을 error/info/wrong으로 변환
        level_map = {
            'DEBUG': 'debug',
            'INFO': 'info',
            'WARNING': 'wrong',
            'ERROR': 'error',
            'CRITICAL': 'error'
        }
        level_display = level_map.get(record.levelname, record.levelname.lower())

        # 에러인 경우 위치를 크게 표시
        if record.levelno >= logging.ERROR:
            filename = os.path.basename(record.pathname)
            location = f"\n{'='*80}\n>>> ERROR LOCATION: {filename}:{record.lineno} <<<\n{'='*80}\n"
            message = f"{location}{record.getMessage()}"
        else:
            message = record.getMessage()

        timestamp = datetime.fromtimestamp(record.created).strftime(
            self.datefmt or '%Y-%m-%d %H:%M:%S'
        )

        return f"{timestamp} [{record.name}:{level_display}] {message}"


def _env_flag(key: str, default: str) -> bool:
    return os.getenv(key, default).lower() == 'true'


def setup_logger(name='treemix', log_dir=None):
    """
    로거 설정 (콘솔 + 파일)

    콘솔 핸들러는 stderr 로 출력한다. stdout 은 CSV/JSON 데이터 전용.

    Args:
        name: 로거 이름 (파일명 접두사)
        log_dir: 로그 디렉토리 (기본값: TREEMIX_LOG_DIR 또는 'logs')

    Returns:
        logger: 설정된 로거
    """
    log_dir = log_dir or os.getenv('TREEMIX_LOG_DIR', 'logs')
    level = getattr(logging, os.getenv('TREEMIX_LOG_LEVEL', 'INFO').upper(), logging.INFO)

    logger = logging.getLogger(f"treemix.{name}")
    logger.setLevel(level)
    logger.propagate = False

    # 기존 핸들러 제거
    if logger.handlers:
        for handler in list(logger.handlers):
            handler.close()
        logger.handlers.clear()

    console_fmt = CustomFormatter(datefmt='%H:%M:%S')
    file_fmt = CustomFormatter(datefmt='%Y-%m-%d %H:%M:%S')

    # 1. 콘솔 (stderr)
    console = logging.StreamHandler()
    console.setFormatter(console_fmt)
    logger.addHandler(console)

    if not _env_flag('TREEMIX_LOG_TO_FILE', 'true'):
        return logger

    os.makedirs(log_dir, exist_ok=True)

    # 2. 날짜별 파일
    today = datetime.now().strftime('%Y%m%d')
    log_file = os.path.join(log_dir, f'{name}_{today}.log')
    file_handler = logging.FileHandler(log_file, encoding='utf-8')
    file_handler.setFormatter(file_fmt)
    logger.addHandler(file_handler)

    # 3. 에러 전용 파일
    error_file = os.path.join(log_dir, f'{name}_error_{today}.log')
    error_handler = logging.FileHandler(error_file, encoding='utf-8', delay=True)
    error_handler.setLevel(logging.ERROR)
    error_handler.setFormatter(file_fmt)
    logger.addHandler(error_handler)

    logger.debug(f"로거 초기화 (파일: {log_file})")

    return logger
