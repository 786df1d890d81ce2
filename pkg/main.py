import math
import sys

import click
from pydantic import ValidationError

from projects import __version__
from projects.utils.logger_config import setup_logger
from projects.controls.dump_control import (
    format_curve_csv, format_json, format_kernel_csv, format_measure_csv,
    format_matrix_dump, format_rows_csv, format_table_dump, json_number, save_output,
)
from projects.modules.chain import down_up_kernel, empirical_frequencies, plancherel_measure, sample_trajectory
from projects.modules.config import Command, Operator, OutputFormat, Route, RunConfig, load_config
from projects.modules.errors import InvariantError, ResourceLimitError, TreeMixError
from projects.modules.operators import growth_power, pruning_power
from projects.modules.spectral import (
    ROUTE_EIGEN, ROUTE_MATRIX, ROUTE_RECURRENCE, geometric_tail_curve, limit_value,
    separation_curve, separation_eigen, separation_float, spectrum,
)
from projects.modules.tree_core import enumerate_trees, path_tree, tree_stats
from projects.modules.verification import run_suite


# 로깅 설정
logger = setup_logger('treemix')

EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

_ROUTES = {
    Route.EIGEN: [ROUTE_EIGEN],
    Route.RECURRENCE: [ROUTE_RECURRENCE],
    Route.BRUTEFORCE: [ROUTE_MATRIX],
    Route.ALL: [ROUTE_EIGEN, ROUTE_RECURRENCE, ROUTE_MATRIX],
}


class TreeMixMain:
    """커맨드 실행 통합 클래스 (커맨드별 (csv 텍스트, json 데이터) 생성)"""

    def __init__(self, config: RunConfig):
        self.config = config
        self.settings = load_config()
        logger.debug(f"TreeMixMain 초기화: {config.command.value}")

    def run_enumerate(self):
        """트리 테이블 덤프"""
        table = enumerate_trees(self.config.n)
        encodings = table.encodings()
        return format_table_dump(table.size, encodings), encodings

    def run_stats(self):
        """트리별 m, n, |SG|, ∏h"""
        self.settings.require("stats", self.config.n, 'COUNT_MAX_N')
        rows = []
        for tree in enumerate_trees(self.config.n):
            stats = tree_stats(tree)
            rows.append([tree.encoding, stats.m, stats.n_weight, stats.sg_order, stats.hook_product])
        header = ["encoding", "m", "n", "sg_order", "hook_product"]
        data = [dict(zip(header, [row[0]] + [str(v) for v in row[1:]])) for row in rows]
        return format_rows_csv(header, rows), data

    def run_measure(self):
        """π_n 두 열 CSV"""
        measure = plancherel_measure(self.config.n)
        encodings = measure.table.encodings()
        data = [{"encoding": e, "pi": json_number(p)} for e, p in zip(encodings, measure.probs)]
        return format_measure_csv(encodings, measure.probs), data

    def run_kernel(self):
        """down-up 커널 K_n CSV"""
        kernel = down_up_kernel(self.config.n)
        rows = kernel.from_table.encodings()
        cols = kernel.to_table.encodings()
        data = [
            {"encoding": enc, "row": [json_number(v) for v in row]}
            for enc, row in zip(rows, kernel.entries)
        ]
        return format_kernel_csv(rows, cols, kernel.entries), data

    def run_matrix(self):
        """G^k / P^k 희소 행렬 덤프"""
        n, k = self.config.n, self.config.power
        if self.config.operator == Operator.GROWTH:
            matrix = growth_power(n, k)
        else:
            matrix = pruning_power(n, k)
        entries = [[i, j, str(v)] for (i, j), v in matrix.entries.items()]
        rows, cols = matrix.shape
        data = [{"rows": rows, "cols": cols, "entries": entries}]
        return format_matrix_dump(matrix.shape, matrix.entries), data

    def run_spectrum(self):
        """고유값 / 중복도"""
        self.settings.require("spectrum", self.config.n, 'COUNT_MAX_N')
        eigen = spectrum(self.config.n)
        rows = [[value, mult] for value, mult in eigen.pairs]
        data = [{"eigenvalue": json_number(v), "multiplicity": str(m)} for v, m in eigen.pairs]
        return format_rows_csv(["eigenvalue", "multiplicity"], rows), data

    def run_separation(self):
        """분리거리 곡선 (route=all 이면 세 경로 일치 확인)"""
        n, r_max = self.config.n, self.config.r_max
        curves = [separation_curve(n, r_max, route) for route in _ROUTES[self.config.route]]
        if len(curves) > 1:
            for r in range(1, r_max + 1):
                values = {curve.route: curve.values[r] for curve in curves}
                if len(set(values.values())) != 1:
                    detail = ", ".join(f"{k}={v}" for k, v in values.items())
                    raise InvariantError("separation_routes", f"n={n}, r={r}: {detail}")
            logger.info(f"세 경로 일치: n={n}, r ≤ {r_max}")
        data = [
            {"n": n, "r": r, "s_star": json_number(curve.values[r]), "route": curve.route}
            for r in range(1, r_max + 1) for curve in curves
        ]
        return format_curve_csv(curves), data

    def run_limit(self):
        """극한 급수 (n 지정 시 s*(⌈cn²⌉) 부동소수점 값 병기)"""
        series = limit_value(self.config.c, self.config.tol)
        header = ["c", "value", "terms_used", "tail_bound"]
        row = [series.c, series.value, series.terms_used, series.tail_bound]
        if self.config.n is not None:
            n = self.config.n
            r = math.ceil(self.config.c * n * n)
            header += ["n", "r", "s_star_float"]
            row += [n, r, separation_float(n, r)]
        return format_rows_csv(header, [row]), [dict(zip(header, row))]

    def run_sample(self):
        """궤적 상태 빈도 vs π_n, 기하 꼬리 추정 vs 정확값"""
        n, samples, seed = self.config.n, self.config.samples, self.config.seed
        self.settings.require("sample", n, 'KERNEL_MAX_N')
        trajectory = sample_trajectory(n, samples, path_tree(n), seed)
        counts = empirical_frequencies(trajectory)
        measure = plancherel_measure(n)
        visits = len(trajectory.states)
        rows = [
            ["state", tree.encoding, count / visits, p]
            for tree, count, p in zip(measure.table, counts, measure.probs)
        ]
        if n >= 3 and self.config.r_max >= 1:
            tails = geometric_tail_curve(n, self.config.r_max, samples, seed)
            rows += [["tail", r, tails[r], separation_eigen(n, r)] for r in sorted(tails)]
        header = ["kind", "key", "observed", "expected"]
        data = [
            {"kind": kind, "key": key, "observed": observed, "expected": json_number(expected)}
            for kind, key, observed, expected in rows
        ]
        return format_rows_csv(header, rows), data

    def run_verify(self):
        """불변식 일괄 검증 (실패 시 InvariantError)"""
        results = run_suite(stop_on_failure=True)
        rows = [[r.name, "ok" if r.ok else "fail", r.detail] for r in results]
        data = [{"check": r.name, "ok": r.ok, "detail": r.detail} for r in results]
        return format_rows_csv(["check", "status", "detail"], rows), data

    def run(self) -> str:
        """커맨드 실행 후 출력 텍스트 반환 (output_path 지정 시 파일 저장)"""
        handler = getattr(self, f"run_{self.config.command.value}")
        csv_text, data = handler()
        if self.config.format == OutputFormat.JSON:
            text = format_json(self.config.command.value, __version__, self.config.echo(), data)
        else:
            text = csv_text
        save_output(text, self.config.output_path)
        return text


def execute(ctx: click.Context, command: Command, **options):
    """RunConfig 검증 → 실행 → 출력, 예외를 종료 코드로 변환"""
    try:
        config = RunConfig(command=command, **options)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        raise click.UsageError(messages, ctx=ctx)

    try:
        text = TreeMixMain(config).run()
    except ResourceLimitError as e:
        logger.error(f"자원 상한 초과: {e}")
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_RESOURCE)
    except InvariantError as e:
        logger.error(f"불변식 실패: {e}")
        click.echo(f"counterexample: {e}", err=True)
        ctx.exit(EXIT_INVARIANT)
    except (TreeMixError, ValueError) as e:
        logger.error(f"잘못된 입력: {e}")
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_USAGE)
    except OSError as e:
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_INVARIANT)

    if not config.output_path:
        click.echo(text, nl=False)


# ========== 공통 옵션 ==========

def _n_option(required=True):
    return click.option("--n", "n", type=int, required=required, help="트리 크기")


_format_option = click.option(
    "--format", "format", type=click.Choice([f.value for f in OutputFormat]), default="csv",
)
_output_option = click.option("--output", "output_path", type=click.Path(dir_okay=False), default=None)
_seed_option = click.option("--seed", type=int, default=0, help="64비트 시드")


def _io_options(func):
    return _output_option(_format_option(func))


@click.group()
@click.version_option(__version__, prog_name="treemix")
def cli():
    """루트 트리 Plancherel 측도 / down-up 체인 / 분리거리 도구"""


@cli.command("enumerate")
@_n_option()
@_io_options
@click.pass_context
def enumerate_command(ctx, **options):
    """크기 n 트리 전체 (정규형, 오름차순)"""
    execute(ctx, Command.ENUMERATE, **options)


@cli.command("stats")
@_n_option()
@_io_options
@click.pass_context
def stats_command(ctx, **options):
    """트리별 m(t), n(t), |SG(t)|"""
    execute(ctx, Command.STATS, **options)


@cli.command("measure")
@_n_option()
@_io_options
@click.pass_context
def measure_command(ctx, **options):
    """Plancherel 형 측도 π_n"""
    execute(ctx, Command.MEASURE, **options)


@cli.command("kernel")
@_n_option()
@_io_options
@click.pass_context
def kernel_command(ctx, **options):
    """down-up 커널 K_n"""
    execute(ctx, Command.KERNEL, **options)


@cli.command("matrix")
@_n_option()
@click.option("--operator", type=click.Choice([o.value for o in Operator]), default="growth")
@click.option("--power", type=int, default=1, help="단계 수 k")
@_io_options
@click.pass_context
def matrix_command(ctx, **options):
    """성장 / 가지치기 연산자 G^k, P^k 희소 행렬"""
    execute(ctx, Command.MATRIX, **options)


@cli.command("spectrum")
@_n_option()
@_io_options
@click.pass_context
def spectrum_command(ctx, **options):
    """K_n 고유값과 중복도"""
    execute(ctx, Command.SPECTRUM, **options)


@cli.command("separation")
@_n_option()
@click.option("--r-max", "r_max", type=int, default=10)
@click.option("--route", type=click.Choice([r.value for r in Route]), default="eigen")
@_io_options
@click.pass_context
def separation_command(ctx, **options):
    """최대 분리거리 s*(r), r = 1..r_max"""
    execute(ctx, Command.SEPARATION, **options)


@cli.command("limit")
@click.option("--c", "c", type=float, default=1.0)
@click.option("--tol", type=float, default=1e-12)
@_n_option(required=False)
@_io_options
@click.pass_context
def limit_command(ctx, **options):
    """lim s*(cn²) 급수 값"""
    execute(ctx, Command.LIMIT, **options)


@cli.command("sample")
@_n_option()
@click.option("--samples", type=int, default=100_000, help="궤적 단계 수 / 기하 표본 수")
@click.option("--r-max", "r_max", type=int, default=10)
@_seed_option
@_io_options
@click.pass_context
def sample_command(ctx, **options):
    """몬테카를로: 궤적 빈도와 기하 꼬리"""
    execute(ctx, Command.SAMPLE, **options)


@cli.command("verify")
@_io_options
@click.pass_context
def verify_command(ctx, **options):
    """불변식 일괄 검증"""
    execute(ctx, Command.VERIFY, **options)


if __name__ == "__main__":
    try:
        cli()
    except KeyboardInterrupt:
        logger.info("\n종료")
        sys.exit(0)
