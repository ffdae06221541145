"""
日志工具模块

分节标题 + emoji 前缀的日志辅助函数，统一经由名为 "mods" 的 logger 输出到 stderr，
命令行可以安全地把 JSON 结果写到 stdout。
"""

import logging
import sys
from typing import Dict, Optional

logger = logging.getLogger("mods")


def setup_logging(level: str = "INFO") -> None:
    """
    配置 mods logger

    Args:
        level: 日志级别名称，如 "INFO"、"DEBUG"
    """
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(handler)
    logger.setLevel(getattr(logging, str(level).upper(), logging.INFO))
    logger.propagate = False


def log_section_start(title: str, char: str = "="):
    """打印分隔线开始的标题"""
    logger.info(f"\n{char*80}")
    logger.info(f" {title} ".center(80, char))
    logger.info(f"{char*80}")


def log_section_end(char: str = "="):
    """打印分隔线结束"""
    logger.info(f"{char*80}\n")


def log_info(message: str, indent: int = 0):
    """打印信息日志"""
    logger.info("  " * indent + f"ℹ️  {message}")


def log_success(message: str, indent: int = 0):
    """打印成功日志"""
    logger.info("  " * indent + f"✅ {message}")


def log_warning(message: str, indent: int = 0):
    """打印警告日志"""
    logger.warning("  " * indent + f"⚠️  {message}")


def log_error(message: str, indent: int = 0):
    """打印错误日志"""
    logger.error("  " * indent + f"❌ {message}")


def log_debug(message: str, indent: int = 0):
    """打印调试日志（默认级别下关闭）"""
    logger.debug("  " * indent + f"🔍 {message}")


def log_step_start(step_index: int, description: str):
    """打印 MODS 步骤开始日志"""
    log_section_start(f"MODS 步骤 {step_index}: {description}", "-")


def log_step_summary(step_index: int,
                     views: int,
                     features: Dict[str, int],
                     tentatives: int,
                     inliers: int,
                     laf_discarded: int,
                     timings_ms: Dict[str, float],
                     model_kind: Optional[str] = None):
    """专门打印单个步骤的摘要日志"""
    log_info(f"合成视图数: {views}", 1)
    log_info(f"累计特征数: 图1={features.get('image1', 0)}, 图2={features.get('image2', 0)}", 1)
    log_info(f"候选对应数 (去重后): {tentatives}", 1)
    if model_kind:
        log_success(f"模型: {model_kind}, LAF 检查后内点: {inliers} (剔除 {laf_discarded})", 1)
    else:
        log_warning("本步骤未得到几何模型", 1)
    stages = ", ".join(f"{name}={value:.1f}ms" for name, value in timings_ms.items())
    log_info(f"耗时: {stages}", 1)
    log_section_end("-")
