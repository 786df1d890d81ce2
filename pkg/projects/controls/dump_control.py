"""
플랫 파일 덤프 제어 모듈 (테이블 / 행렬 / 커널 / 측도 / 곡선 / JSON)
"""
import csv
import io
import json
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence

from sortedcontainers import SortedDict

from ..utils.logger_config import setup_logger

logger = setup_logger("dump")

# ========== 값 포맷 ==========

def format_rational(value) -> str:
    """정확 유리수 → "p/q" (정수는 "p/1")"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_float(value: float) -> str:
    """부동소수점 → 유효숫자 17자리"""
    return format(value, ".17g")


def format_number(value) -> str:
    if isinstance(value, float):
        return format_float(value)
    return format_rational(value)


def json_number(value):
    """JSON 직렬화: 유리수 {"num", "den"} / 부동소수점 그대로"""
    if isinstance(value, float):
        return value
    value = Fraction(value)
    return {"num": str(value.numerator), "den": str(value.denominator)}


# ========== 트리 테이블 ==========

def format_table_dump(size: int, encodings: Sequence[str]) -> str:
    """헤더 "n=<size> count=<T_n>" + 줄마다 인코딩"""
    lines = [f"n={size} count={len(encodings)}"]
    lines.extend(encodings)
    return "\n".join(lines) + "\n"


# ========== 희소 행렬 ==========

def format_matrix_dump(shape: tuple, entries: SortedDict) -> str:
    """헤더 "rows=<n> cols=<m> nnz=<k>" + 행 우선 정렬 "i j value" """
    rows, cols = shape
    lines = [f"rows={rows} cols={cols} nnz={len(entries)}"]
    lines.extend(f"{i} {j} {value}" for (i, j), value in entries.items())
    return "\n".join(lines) + "\n"


# ========== CSV ==========

def _csv_text(header: Optional[Sequence[str]], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if header is not None:
        writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def format_kernel_csv(row_encodings: Sequence[str], col_encodings: Sequence[str],
                      entries: Sequence[Sequence[Fraction]]) -> str:
    """헤더 행/열이 트리 인코딩인 CSV, 값은 "p/q" """
    return _csv_text(
        [""] + list(col_encodings),
        ([enc] + [format_rational(v) for v in row] for enc, row in zip(row_encodings, entries)),
    )


def format_measure_csv(encodings: Sequence[str], probs: Sequence[Fraction]) -> str:
    """두 열 CSV (encoding, rational)"""
    return _csv_text(None, ([enc, format_rational(p)] for enc, p in zip(encodings, probs)))


def format_rows_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """일반 CSV (유리수 "p/q", 부동소수점 17자리)"""
    return _csv_text(header, (
        [format_number(v) if isinstance(v, (Fraction, float)) else v for v in row]
        for row in rows
    ))


def format_curve_csv(curves: Sequence) -> str:
    """곡선 CSV: (n, r, s_star, route), r 오름차순, 같은 r 은 입력 경로 순서"""
    rows = []
    all_r = sorted({r for curve in curves for r in curve.values})
    for r in all_r:
        for curve in curves:
            if r in curve.values:
                rows.append([curve.n, r, curve.values[r], curve.route])
    return format_rows_csv(["n", "r", "s_star", "route"], rows)


# ========== JSON ==========

def format_json(command: str, version: str, config: Dict[str, Any], data: List[Any]) -> str:
    """{"meta": {command, version, config}, "data": [...]}"""
    payload = {
        "meta": {"command": command, "version": version, "config": config},
        "data": data,
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


# ========== 출력 ==========

def save_output(text: str, output_path: Optional[str]) -> Optional[str]:
    """
    파일 저장 (경로 없으면 None 반환 → 호출측이 stdout 출력)

    Raises:
        OSError: 파일 쓰기 실패 (로그 후 재발생)
    """
    if not output_path:
        return None
    try:
        with open(output_path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info(f"출력 저장: {output_path} ({len(text)} bytes)")
        return output_path
    except OSError as e:
        logger.error(f"출력 저장 실패: {output_path} - {e}")
        raise
