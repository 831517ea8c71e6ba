"""
Протокол обучения по эпохам:

  1. диффузор фиксирует seed, агенты получают собственные подпотоки и конфигурацию;
  2-3. каждый агент кодирует свой пакет и отправляет эмбеддинги;
  4-5. диффузор строит центроиды групп и рассылает контекст;
  6. агент считает суммарные потери и делает один шаг Adam;
  7. повтор по всем пакетам эпохи;
  8. по расписанию - перекластеризация по S общим случайным окнам.
После каждой эпохи оцениваются обе выборки (эпоха 0 - базовая оценка до обучения).
"""
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, TypeVar

from osmolearn.core.core_exceptions import ConfigurationException, NumericException, OsmoticException
from osmolearn.core.core_logger import get_logger
from osmolearn.datagen.datagen_generators import gen_context
from osmolearn.datagen.datagen_storage import load_context
from osmolearn.datagen.datagen_types import ContextDatasets, Split
from osmolearn.datagen.datagen_windows import check_alignment, sliding_windows, window_array
from osmolearn.diffuser.diffuser_manager import Diffuser
from osmolearn.model.model_types import AgentModel, WindowBatch, init_agent_model
from osmolearn.numerics.numerics_random import RngStream
from osmolearn.orchestrator.orchestrator_agent import AgentWorker
from osmolearn.orchestrator.orchestrator_artifacts import RunArtifacts
from osmolearn.orchestrator.orchestrator_config import RunConfig
from osmolearn.orchestrator.orchestrator_evaluation import SplitEmbeddings, evaluate

logger = get_logger(__name__)

T = TypeVar('T')


def check_window_length(datasets: ContextDatasets, window: int):
    """Ряды каждой выборки выровнены и не короче окна"""
    for split in (Split.TRAIN, Split.TEST):
        length = check_alignment(datasets[split])
        if length < window:
            raise ConfigurationException(f"window={window} больше длины рядов {split.value} ({length})")


def load_datasets(config: RunConfig) -> ContextDatasets:
    """Внешние CSV из data_dir или генерация контекста по seed"""
    if config.data_dir is not None:
        datasets = load_context(config.data_dir)
        check_window_length(datasets, config.window)
        return datasets
    return gen_context(config.context_spec())


class OsmoticTrainer:
    """Оркестратор запуска: агенты, диффузор, оценка и артефакты"""

    def __init__(self, config: RunConfig, datasets: Optional[ContextDatasets] = None,
                 artifacts: Optional[RunArtifacts] = None):
        self.config = config
        self.datasets = datasets if datasets is not None else load_datasets(config)
        self.artifacts = artifacts if artifacts is not None else RunArtifacts(config.out_dir)

        train = self.datasets[Split.TRAIN]
        self.agent_ids = sorted(train)
        if sorted(self.datasets[Split.TEST]) != self.agent_ids:
            raise ConfigurationException(f"Агенты train {self.agent_ids} и test "
                                         f"{sorted(self.datasets[Split.TEST])} не совпадают")
        check_window_length(self.datasets, config.window)

        # Шаг 1: единый seed; агенты с одинаковым числом признаков получают
        # одни и те же начальные опорные параметры
        self.rng = RngStream(config.seed)
        self.workers: Dict[str, AgentWorker] = {
            agent_id: AgentWorker(init_agent_model(agent_id, train[agent_id].n_features,
                                                   self._reference_stream(train[agent_id].n_features)),
                                  config.loss_config(), config.lr)
            for agent_id in self.agent_ids
        }
        self.diffuser = Diffuser(self.agent_ids, self.rng.spawn('diffuser'), tau=config.tau, beta=config.beta,
                                 sample_size=config.cluster_samples, period=config.cluster_period,
                                 strategy=config.strategy, trace=self.artifacts.trace)

        self.batches: Dict[str, List[WindowBatch]] = {
            agent_id: sliding_windows(train[agent_id], config.window, config.batch) for agent_id in self.agent_ids
        }
        self.train_windows = {agent_id: window_array(train[agent_id], config.window) for agent_id in self.agent_ids}
        self.executor = ThreadPoolExecutor(max_workers=config.workers) if config.workers > 1 else None

        self.loss_history: List[float] = []
        self.last_evaluation: Dict[Split, SplitEmbeddings] = {}

        logger.info(f"OsmoticTrainer инициализирован: контекст {config.context.value}, агенты {self.agent_ids}, "
                    f"пакетов на эпоху {len(self.batches[self.agent_ids[0]])}, потоков {config.workers}")

    def _reference_stream(self, n_features: int) -> RngStream:
        return self.rng.spawn('reference', n_features)

    @property
    def models(self) -> Dict[str, AgentModel]:
        return {agent_id: worker.model for agent_id, worker in self.workers.items()}

    def _map(self, fn: Callable[[AgentWorker], T]) -> Dict[str, T]:
        """Вызов для каждого агента; результаты в порядке отсортированных идентификаторов"""
        workers = [self.workers[agent_id] for agent_id in self.agent_ids]
        if self.executor is None:
            results = [fn(worker) for worker in workers]
        else:
            results = list(self.executor.map(fn, workers))
        return dict(zip(self.agent_ids, results))

    def _train_epoch(self, epoch: int) -> float:
        losses = []
        for position in range(len(self.batches[self.agent_ids[0]])):
            step = self.diffuser.step
            try:
                submissions = self._map(lambda worker: worker.forward(step, self.batches[worker.agent_id][position]))
                broadcast = self.diffuser.aggregate(step, submissions)
                step_losses = self._map(lambda worker: worker.receive(broadcast))
            except NumericException as e:
                logger.error(f"❌ Эпоха {epoch}, пакет {position}: {e}")
                raise NumericException(f"Обучение прервано на эпохе {epoch}, пакет {position}: {e}")
            losses.extend(step_losses[agent_id] for agent_id in self.agent_ids)
        mean_loss = float(sum(losses) / len(losses)) if losses else 0.0
        logger.info(f"🔄 Эпоха {epoch}: средние потери обучения {mean_loss:.6f}, шаг {self.diffuser.step}")
        return mean_loss

    def _recluster(self, epoch: int):
        """Шаг 8: эмбеддинги всех агентов на одних и тех же S окнах"""
        n_windows = self.train_windows[self.agent_ids[0]][1].shape[0]
        positions = self.diffuser.draw_sample_positions(n_windows, epoch)
        samples = {}
        for agent_id in self.agent_ids:
            windows, indices = self.train_windows[agent_id]
            samples[agent_id] = self.workers[agent_id].embed(
                WindowBatch(agent_id=agent_id, windows=windows[positions], indices=indices[positions]))
        self.diffuser.recluster(epoch, samples)

    def _evaluate(self, epoch: int):
        for split in (Split.TRAIN, Split.TEST):
            record, result = evaluate(self.models, self.datasets[split], self.diffuser.partition,
                                      self.config, epoch, split)
            self.artifacts.add_record(record)
            self.last_evaluation[split] = result

    def train(self) -> RunArtifacts:
        """Полный запуск: базовая оценка, эпохи 1..E, запись артефактов"""
        started = time.monotonic()
        try:
            self._evaluate(0)
            for epoch in range(1, self.config.epochs + 1):
                self.loss_history.append(self._train_epoch(epoch))
                if self.diffuser.should_recluster(epoch):
                    self._recluster(epoch)
                self._evaluate(epoch)
        except OsmoticException as e:
            logger.error(f"❌ Запуск прерван: {e}")
            raise
        finally:
            if self.executor is not None:
                self.executor.shutdown(wait=True)

        self._write_artifacts(time.monotonic() - started)
        return self.artifacts

    def _write_artifacts(self, wall_time: float):
        self.artifacts.write_metrics()
        self.artifacts.write_checkpoints(self.models)
        diagonals = {split.value: self.artifacts.write_similarity(split, result.embeddings, result.indices,
                                                                  self.config.beta).diagonals
                     for split, result in self.last_evaluation.items()}
        self.artifacts.write_run_metadata({
            'config': self.config.to_dict(),
            'agents': self.agent_ids,
            'wall_time_seconds': wall_time,
            'train_loss': self.loss_history,
            'embedding_spread': {f"{r.epoch}/{r.split}": r.embedding_spread for r in self.artifacts.records},
            'similarity_diagonals': diagonals,
            'diffuser': self.diffuser.get_stats()
        })
        logger.info(f"✅ Запуск завершен за {wall_time:.1f} с, артефакты в {self.artifacts.out_dir}")


def train(config: RunConfig, datasets: Optional[ContextDatasets] = None) -> RunArtifacts:
    return OsmoticTrainer(config, datasets).train()
