"""
MODS 主循环

逐步执行升级计划：每一步为两幅图生成合成视图、检测并描述特征、反投影回原图，
追加到累计特征列表后整体重新匹配，去重，估计几何模型并做 LAF 检查；
LAF 检查后的内点数达到 θm 即停止。
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from app.core.descriptors import describe_frames, reproject_features
from app.core.descriptors.base import DescribedFeature
from app.core.errors import InsufficientCorrespondences, NoModel, NoSolution
from app.core.features import detect
from app.core.imgproc import Image, downsample
from app.core.logging_utils import log_debug, log_step_start, log_step_summary, log_success, log_warning
from app.core.matching import TentativeCorrespondence, filter_duplicates, match_features
from app.core.synth import SynthView, ViewParams, enumerate_views, synthesize_view
from app.core.verify import VerifiedResult, auto_model, laf_check
from app.schemas.config import ModsConfig, RansacConfig, StepConfig
from app.schemas.report import CorrespondenceRecord, MatchReport, StepTiming


@dataclass
class ModsState:
    """循环状态：当前步骤、累计特征、验证内点数、逐步统计"""
    iter: int = 0
    features1: List[DescribedFeature] = field(default_factory=list)
    features2: List[DescribedFeature] = field(default_factory=list)
    n_matches: int = 0
    timings: List[StepTiming] = field(default_factory=list)
    next_view_id: List[int] = field(default_factory=lambda: [0, 0])
    views_synthesized: int = 0

    def features(self, side: int) -> List[DescribedFeature]:
        return self.features1 if side == 0 else self.features2


@dataclass
class _ViewTask:
    side: int
    params: ViewParams
    view_id: int
    view: Optional[SynthView] = None
    frames: list = field(default_factory=list)
    features: List[DescribedFeature] = field(default_factory=list)


@dataclass
class _Attempt:
    """某一步的验证结果"""
    step: int
    tcs: List[TentativeCorrespondence]
    result: Optional[VerifiedResult]

    @property
    def n_matches(self) -> int:
        return self.result.n_matches if self.result else 0


def _ms(start: float) -> float:
    return (time.perf_counter() - start) * 1000.0


class ModsMatcher:
    """
    MODS 匹配器

    视图级流水线在线程池上分块执行，每块依次经过合成、检测、描述三个阶段，
    结果按提交顺序收集，报告内容与线程数无关。
    """

    def __init__(self, config: Optional[ModsConfig] = None, threads: int = 1, seed: Optional[int] = None):
        self.config = config or ModsConfig.default()
        self.threads = max(1, int(threads))
        ransac = self.config.ransac
        if seed is not None:
            ransac = ransac.model_copy(update={"rng_seed": int(seed)})
        self.ransac: RansacConfig = ransac
        self.state = ModsState()

    # ------------------------------
    # 视图处理
    # ------------------------------
    def _make_tasks(self, step: StepConfig) -> List[_ViewTask]:
        tasks = []
        params = enumerate_views(step.synthesis)
        for side in (0, 1):
            for p in params:
                tasks.append(_ViewTask(side=side, params=p, view_id=self.state.next_view_id[side]))
                self.state.next_view_id[side] += 1
        return tasks

    def _process_views(self, images: Tuple[Image, Image], step: StepConfig,
                       executor: ThreadPoolExecutor, timing: StepTiming) -> None:
        syn = step.synthesis
        start = time.perf_counter()
        scaled: Dict[Tuple[int, float], Image] = {}
        for side, img in enumerate(images):
            for S in sorted(set(syn.scales)):
                scaled[(side, S)] = img if S == 1.0 else downsample(img, S, syn.sigma_base)
        timing.ms_synth += _ms(start)

        tasks = self._make_tasks(step)
        for begin in range(0, len(tasks), self.threads):
            chunk = tasks[begin:begin + self.threads]

            start = time.perf_counter()
            views = executor.map(
                lambda task: synthesize_view(images[task.side], task.params, syn.sigma_base,
                                             scaled[(task.side, task.params[0])], task.view_id),
                chunk)
            for task, view in zip(chunk, views):
                task.view = view
            timing.ms_synth += _ms(start)

            start = time.perf_counter()
            for task, frames in zip(chunk, executor.map(
                    lambda task: detect(task.view.image, step.detector, step.detector_params), chunk)):
                task.frames = frames
            timing.ms_detect += _ms(start)

            start = time.perf_counter()
            for task, feats in zip(chunk, executor.map(
                    lambda task: reproject_features(describe_frames(task.view.image, task.frames, step.descriptor),
                                                    task.view), chunk)):
                task.features = feats
            timing.ms_describe += _ms(start)

        for task in tasks:
            self.state.features(task.side).extend(task.features)
            timing.view_area += task.view.area
            log_debug(f"图{task.side + 1} 视图 {task.view_id} {task.params}: {len(task.features)} 个特征", 2)
        timing.views = len(tasks)
        self.state.views_synthesized += len(tasks)

    # ------------------------------
    # 匹配与验证
    # ------------------------------
    def _match_and_verify(self, step: StepConfig, timing: StepTiming) -> Tuple[List[TentativeCorrespondence],
                                                                                Optional[VerifiedResult]]:
        start = time.perf_counter()
        tcs = match_features(self.state.features1, self.state.features2, step.matching)
        tcs = filter_duplicates(tcs, step.matching.duplicate_radius_px)
        timing.ms_match += _ms(start)

        start = time.perf_counter()
        result = None
        try:
            model = auto_model(tcs, self.ransac)
            result = laf_check(tcs, model, self.ransac)
        except (InsufficientCorrespondences, NoModel) as e:
            log_debug(f"几何验证失败: {e}", 1)
        timing.ms_verify += _ms(start)
        return tcs, result

    def run_step(self, index: int, images: Tuple[Image, Image], executor: ThreadPoolExecutor) -> _Attempt:
        """执行第 index 步（从 1 开始），结果追加到状态中"""
        step = self.config.steps[index - 1]
        log_step_start(index, step.describe())
        timing = StepTiming(step=index)
        step_start = time.perf_counter()

        self._process_views(images, step, executor, timing)
        tcs, result = self._match_and_verify(step, timing)

        timing.ms_total = _ms(step_start)
        timing.features1 = len(self.state.features1)
        timing.features2 = len(self.state.features2)
        timing.tentatives = len(tcs)
        if result is not None:
            timing.inliers = result.n_matches
            timing.laf_discarded = result.discarded_by_laf
            timing.model_kind = result.model.kind.value
        self.state.iter = index
        self.state.n_matches = timing.inliers
        self.state.timings.append(timing)
        log_step_summary(index, timing.views, {"image1": timing.features1, "image2": timing.features2},
                         timing.tentatives, timing.inliers, timing.laf_discarded, timing.stage_ms(),
                         timing.model_kind)
        return _Attempt(step=index, tcs=tcs, result=result)

    # ------------------------------
    # 主循环
    # ------------------------------
    def match(self, img1: Image, img2: Image) -> MatchReport:
        """
        执行 MODS 主循环

        Args:
            img1: 图1
            img2: 图2

        Returns:
            solved=True 的 MatchReport

        Raises:
            NoSolution: 执行完 s_max 步仍未达到 θm，异常的 report 为最佳尝试
        """
        self.state = ModsState()
        best: Optional[_Attempt] = None
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            for index in range(1, self.config.s_max + 1):
                attempt = self.run_step(index, (img1, img2), executor)
                if best is None or attempt.n_matches > best.n_matches:
                    best = attempt
                if attempt.n_matches >= self.config.theta_m:
                    log_success(f"第 {index} 步求解成功: {attempt.n_matches} 个验证内点")
                    return self._build_report(attempt, solved=True)

        report = self._build_report(best, solved=False)
        log_warning(f"{self.config.s_max} 步后仍未求解，最佳尝试 {report.n_matches} 个内点（第 {report.step} 步）")
        raise NoSolution(f"{self.config.s_max} 步后验证内点不足 {self.config.theta_m}", report)

    def _build_report(self, attempt: Optional[_Attempt], solved: bool) -> MatchReport:
        report = MatchReport(
            solved=solved,
            steps_executed=self.state.iter,
            timings=[t.model_copy() for t in self.state.timings],
            config=self.config.model_dump(mode="json"),
        )
        if attempt is None or attempt.result is None:
            return report

        result = attempt.result
        model = result.model
        kept = set(result.inliers_after_laf)
        residuals = dict(zip(model.inliers, model.residuals))
        records = []
        for i in model.inliers:
            tc = attempt.tcs[i]
            records.append(CorrespondenceRecord(
                x1=float(tc.p1[0]), y1=float(tc.p1[1]), x2=float(tc.p2[0]), y2=float(tc.p2[1]),
                distance_ratio=float(tc.distance_ratio), prune_count=int(tc.prune_count),
                laf_consistent=i in kept, residual_px=float(residuals.get(i, 0.0)),
            ))
        report.step = attempt.step
        report.model_kind = model.kind.value
        report.model = model.row_major()
        report.n_matches = result.n_matches
        report.correspondences = records
        return report


def run_mods(img1: Image, img2: Image, cfg: Optional[ModsConfig] = None, threads: int = 1,
             seed: Optional[int] = None) -> MatchReport:
    """
    用升级计划匹配两幅图像

    Args:
        img1: 图1
        img2: 图2
        cfg: MODS 配置，默认 7 步标准计划
        threads: 视图流水线线程数
        seed: 覆盖配置中的 RANSAC 随机种子

    Returns:
        MatchReport

    Raises:
        NoSolution: 未求解，report 为最佳尝试
    """
    return ModsMatcher(cfg, threads=threads, seed=seed).match(img1, img2)


def run_single_config(img1: Image, img2: Image, step: StepConfig, theta_m: int = 15,
                      ransac: Optional[RansacConfig] = None, threads: int = 1) -> MatchReport:
    """只执行一个步骤、不升级的匹配"""
    return run_mods(img1, img2, ModsConfig.single(step, theta_m, ransac), threads=threads)
