"""
Командная строка osmolearn.

    python -m osmolearn.main generate --config simple.cfg --out out/
    python -m osmolearn.main train --config simple.cfg --set epochs=5
    python -m osmolearn.main eval --run out/
    python -m osmolearn.main export-simmat --run out/ --agents 0,1 --split test
    python -m osmolearn.main export-clusters --run out/

Коды выхода: 0 - успех, 1 - ошибка конфигурации, 2 - ошибка выполнения
(численная, контракт, барьер), 3 - ошибка ввода-вывода. Ход работы пишется
в stderr, машинные результаты - только в файлы.
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

from osmolearn.core.core_exceptions import ConfigurationException, OsmoticException
from osmolearn.core.core_logger import OSMO_LOG_LEVELS, get_logger, set_level
from osmolearn.core.core_utils import CoreUtils
from osmolearn.datagen.datagen_generators import DEFAULT_CONSTANTS, gen_context
from osmolearn.datagen.datagen_storage import save_context
from osmolearn.datagen.datagen_types import Split
from osmolearn.diffuser.diffuser_trace import read_cluster_trace
from osmolearn.diffuser.diffuser_types import SubContextPartition
from osmolearn.metrics.metrics_export import write_metrics_csv
from osmolearn.orchestrator.orchestrator_artifacts import (
    TRACE_NAME, export_clusters, read_run_metadata, write_similarity_exports
)
from osmolearn.orchestrator.orchestrator_checkpoint import restore
from osmolearn.orchestrator.orchestrator_config import RunConfig, build_config, load_config
from osmolearn.orchestrator.orchestrator_evaluation import embed_split, evaluate
from osmolearn.orchestrator.orchestrator_trainer import load_datasets, train

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_IO = 3


class CliArgumentParser(argparse.ArgumentParser):
    """Ошибки разбора аргументов - это ошибки конфигурации (код 1)"""

    def error(self, message):
        raise ConfigurationException(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = CliArgumentParser(prog='osmolearn', description='Симулятор осмотического обучения')
    parser.add_argument('--log', choices=sorted(OSMO_LOG_LEVELS), help='уровень журнала (перекрывает OSMO_LOG)')
    subparsers = parser.add_subparsers(dest='command', required=True, parser_class=CliArgumentParser)

    def add_config_options(sub):
        sub.add_argument('--config', help='файл конфигурации (key=value или .json)')
        sub.add_argument('--set', dest='overrides', action='append', default=[], metavar='KEY=VALUE',
                         help='переопределение ключа конфигурации (повторяемое)')
        sub.add_argument('--seed', type=int, help='seed запуска')
        sub.add_argument('--out', help='каталог результатов')

    add_config_options(subparsers.add_parser('generate', help='сгенерировать ряды агентов в <out>/data'))
    add_config_options(subparsers.add_parser('train', help='обучение'))

    eval_parser = subparsers.add_parser('eval', help='оценка сохраненного запуска (eval.csv)')
    eval_parser.add_argument('--run', required=True, help='каталог запуска')

    simmat_parser = subparsers.add_parser('export-simmat', help='матрица сходства пары агентов')
    simmat_parser.add_argument('--run', required=True, help='каталог запуска')
    simmat_parser.add_argument('--agents', required=True, help='пара агентов, например 0,1')
    simmat_parser.add_argument('--split', choices=[s.value for s in Split], default=Split.TEST.value)

    clusters_parser = subparsers.add_parser('export-clusters', help='clusters.jsonl -> clusters.csv')
    clusters_parser.add_argument('--run', required=True, help='каталог запуска')
    clusters_parser.add_argument('--output', help='путь CSV (по умолчанию <run>/clusters.csv)')
    return parser


def _restore_run(run_dir: Path):
    """Конфигурация, ряды, модели и последнее разбиение сохраненного запуска"""
    config = build_config(read_run_metadata(run_dir)['config'])
    datasets = load_datasets(config)
    models = restore(run_dir / 'checkpoints', expected_agents=sorted(datasets[Split.TRAIN]))
    partitions = read_cluster_trace(run_dir / TRACE_NAME) if (run_dir / TRACE_NAME).exists() else []
    partition = partitions[-1] if partitions else SubContextPartition.global_context(sorted(models))
    return config, datasets, models, partition


def command_generate(args) -> int:
    config = load_config(args.config, args.overrides, args.seed, args.out)
    datasets = gen_context(config.context_spec())
    save_context(datasets, Path(config.out_dir) / 'data',
                 header={'generator': config.context.value, 'seed': config.seed,
                         'constants': DEFAULT_CONSTANTS.to_dict()})
    return EXIT_OK


def command_train(args) -> int:
    config: RunConfig = load_config(args.config, args.overrides, args.seed, args.out)
    artifacts = train(config)
    final = artifacts.final_record(Split.TEST)
    if final is not None and final.context_accuracy is not None:
        logger.info(f"📊 Итоговая точность контекста (test): {final.context_accuracy:.4f}")
    return EXIT_OK


def command_eval(args) -> int:
    run_dir = Path(args.run)
    config, datasets, models, partition = _restore_run(run_dir)
    records = [evaluate(models, datasets[split], partition, config, config.epochs, split)[0]
               for split in (Split.TRAIN, Split.TEST)]
    write_metrics_csv(records, run_dir / 'eval.csv')
    return EXIT_OK


def command_export_simmat(args) -> int:
    agents = CoreUtils.parse_agent_list(args.agents)
    if len(agents) == 1:
        agents = agents * 2
    if len(agents) != 2:
        raise ConfigurationException(f"--agents: ожидалась пара агентов, получено {args.agents!r}")
    run_dir = Path(args.run)
    split = Split(args.split)
    config, datasets, models, partition = _restore_run(run_dir)
    result = embed_split(models, datasets[split], partition, config.window, config.batch,
                         config.loss_config(), config.strategy)
    write_similarity_exports(run_dir / 'simmat', split, result.embeddings, result.indices, config.beta,
                             pairs=[(agents[0], agents[1])])
    return EXIT_OK


def command_export_clusters(args) -> int:
    export_clusters(args.run, args.output)
    return EXIT_OK


COMMANDS = {
    'generate': command_generate,
    'train': command_train,
    'eval': command_eval,
    'export-simmat': command_export_simmat,
    'export-clusters': command_export_clusters
}


def run_cli(argv: Optional[List[str]] = None) -> int:
    """Точка входа; возвращает код выхода"""
    try:
        args = build_parser().parse_args(argv)
        if args.log:
            set_level(OSMO_LOG_LEVELS[args.log])
        return COMMANDS[args.command](args)
    except OsmoticException as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"❌ Ошибка ввода-вывода: {e}")
        return EXIT_IO


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
