# app/main_full.py
"""
MODS 宽基线双视图匹配服务 - 主应用
上传两幅图像，按升级计划（或单步预设）匹配，返回 JSON 匹配报告
"""

import json
import time
import traceback
from typing import Optional

from fastapi import FastAPI, File, Form, HTTPException, UploadFile
from fastapi.middleware.cors import CORSMiddleware

from app import __version__
from app.core.errors import ConfigError, ModsError, NoSolution
from app.core.imgproc import decode_image
from app.core.logging_utils import (
    log_error,
    log_info,
    log_section_end,
    log_section_start,
    log_success,
    log_warning,
    setup_logging,
)
from app.core.orchestrator import run_mods
from app.core.settings import Settings
from app.schemas.config import SINGLE_DETECTOR_PRESETS, ModsConfig
from app.schemas.report import MatchReport

settings = Settings.from_env()
setup_logging(settings.log_level)

app = FastAPI(
    title="MODS 宽基线匹配服务",
    description="视图合成 + 多检测器升级的双视图匹配",
    version=__version__,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


def _base_config() -> ModsConfig:
    if settings.config_path:
        return ModsConfig.from_json_file(settings.config_path)
    return ModsConfig.default()


def _resolve_config(config: Optional[str], preset: Optional[str]) -> ModsConfig:
    """请求中的 JSON 配置优先，其次是单步预设，最后是服务默认配置"""
    if config:
        try:
            data = json.loads(config)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config 不是合法 JSON: {e}") from e
        return ModsConfig.from_dict(data)
    if preset:
        if preset not in SINGLE_DETECTOR_PRESETS:
            raise ConfigError(f"未知预设: {preset}")
        return ModsConfig.single(SINGLE_DETECTOR_PRESETS[preset])
    return _base_config()


def log_match_summary(report: MatchReport, total_time: float):
    """专门打印一次匹配请求的摘要日志"""
    log_section_start("匹配请求完成", "=")
    if report.solved:
        log_success(f"第 {report.step} 步求解，模型 {report.model_kind}，验证内点 {report.n_matches}")
    else:
        log_warning(f"未求解，最佳尝试 {report.n_matches} 个内点")
    log_info(f"执行步数: {report.steps_executed}")
    log_info(f"总耗时: {total_time:.2f}秒")
    log_section_end("=")


# ------------------------------------------------------------------------------
# API路由
# ------------------------------------------------------------------------------
@app.get("/")
async def root():
    return {"message": f"欢迎使用 MODS 宽基线匹配服务（V{__version__}）"}


@app.get("/health")
async def health_check():
    return {"status": "ok", "version": __version__}


@app.get("/api/v1/system/status")
async def system_status():
    return {
        "status": "ok",
        "version": __version__,
        "threads": settings.threads,
        "seed": settings.seed,
        "components": {
            "detectors": ["Fast", "DoG", "HessAff"],
            "descriptors": ["Binary", "RootSift"],
            "verification": ["LO-RANSAC (H/F)", "LAF-check"],
        },
    }


@app.get("/api/v1/config/default")
async def default_config():
    """服务使用的默认升级计划"""
    try:
        return _base_config().model_dump(mode="json")
    except ConfigError as e:
        raise HTTPException(status_code=500, detail=str(e))


@app.get("/api/v1/config/presets")
async def list_presets():
    """单检测器预设名称"""
    return {"presets": sorted(SINGLE_DETECTOR_PRESETS)}


@app.post("/api/v1/match", response_model=MatchReport)
def match_images(
    image1: UploadFile = File(..., description="图1"),
    image2: UploadFile = File(..., description="图2"),
    config: Optional[str] = Form(None, description="ModsConfig JSON 文本"),
    preset: Optional[str] = Form(None, description="单检测器预设名称"),
    seed: Optional[int] = Form(None, description="RANSAC 随机种子"),
):
    """匹配两幅上传的图像；未求解时返回 solved=false 的最佳尝试"""
    start_time = time.time()
    log_section_start("开始处理匹配请求", "-")
    log_info(f"图1: {image1.filename}, 图2: {image2.filename}")
    log_section_end("-")

    try:
        cfg = _resolve_config(config, preset)
        img1 = decode_image(image1.file.read())
        img2 = decode_image(image2.file.read())
    except ModsError as e:
        log_error(f"请求无效: {e}")
        raise HTTPException(status_code=400, detail=str(e))

    try:
        report = run_mods(img1, img2, cfg, threads=settings.threads,
                          seed=settings.seed if seed is None else seed)
    except NoSolution as e:
        report = e.report if e.report is not None else MatchReport()
    except ModsError as e:
        log_error(f"匹配失败: {e}")
        raise HTTPException(status_code=400, detail=f"匹配失败: {str(e)}")
    except Exception as e:
        log_error(f"匹配失败: {str(e)}\n{traceback.format_exc()}")
        raise HTTPException(status_code=500, detail=f"匹配失败: {str(e)}")

    log_match_summary(report, time.time() - start_time)
    return report


if __name__ == "__main__":
    import uvicorn

    log_section_start("启动 MODS 宽基线匹配服务", "=")
    log_info(f"端口: {settings.port}")
    log_info(f"线程数: {settings.threads}")
    log_info(f"默认配置: {settings.config_path or '7 步标准计划'}")
    log_section_end("=")

    uvicorn.run(
        "app.main_full:app",
        host="0.0.0.0",
        port=settings.port,
        reload=False,
    )
