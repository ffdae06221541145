#!/usr/bin/env python3
"""
MODS 宽基线匹配服务 - 带环境变量加载的启动脚本
"""

import os

import dotenv
import uvicorn


def load_env():
    """加载.env文件中的环境变量"""
    env_file = os.path.join(os.path.dirname(__file__), '.env')
    if os.path.exists(env_file):
        print(f"正在从{env_file}加载环境变量...")
        dotenv.load_dotenv(env_file)

        for name in ("MODS_THREADS", "MODS_SEED", "MODS_LOG_LEVEL", "MODS_CONFIG"):
            print(f"{name}: {os.environ.get(name) or '未设置（使用默认值）'}")
    else:
        print(f"提示: 未找到.env文件: {env_file}，使用默认设置")


def main():
    """主函数"""
    load_env()

    config_path = os.environ.get("MODS_CONFIG")
    if config_path and not os.path.exists(config_path):
        print(f"警告: MODS_CONFIG 指向的配置文件不存在: {config_path}")

    port = int(os.environ.get("PORT", 8000))

    print(f"启动 MODS 宽基线匹配服务 在端口 {port}...")
    uvicorn.run("app.main_full:app", host="0.0.0.0", port=port, reload=False)


if __name__ == "__main__":
    main()
