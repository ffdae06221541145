"""
运行设置模块

从 .env 与环境变量读取进程级设置（线程数、随机种子、日志级别等）。
"""

import os
from typing import Optional

import dotenv
from pydantic import BaseModel, Field


class Settings(BaseModel):
    """进程级设置"""
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1, description="并行线程数")
    seed: int = Field(0, ge=0, description="RANSAC 随机种子")
    log_level: str = Field("INFO", description="日志级别")
    config_path: Optional[str] = Field(None, description="默认 MODS 配置文件路径")
    port: int = Field(8000, ge=1, le=65535, description="服务端口")

    @classmethod
    def from_env(cls, env_file: Optional[str] = None) -> "Settings":
        """
        加载 .env 后从环境变量构造设置

        Args:
            env_file: .env 文件路径，为 None 时在当前目录查找

        Returns:
            设置对象
        """
        env_file = env_file or os.path.join(os.getcwd(), ".env")
        if os.path.exists(env_file):
            dotenv.load_dotenv(env_file)

        values = {}
        if os.environ.get("MODS_THREADS"):
            values["threads"] = int(os.environ["MODS_THREADS"])
        if os.environ.get("MODS_SEED"):
            values["seed"] = int(os.environ["MODS_SEED"])
        if os.environ.get("MODS_LOG_LEVEL"):
            values["log_level"] = os.environ["MODS_LOG_LEVEL"]
        if os.environ.get("MODS_CONFIG"):
            values["config_path"] = os.environ["MODS_CONFIG"]
        if os.environ.get("PORT"):
            values["port"] = int(os.environ["PORT"])
        return cls(**values)
