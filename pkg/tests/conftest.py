"""
测试公共夹具
"""

import pytest

from app.core.imgproc import Image
from app.core.logging_utils import setup_logging
from tests.helpers import make_texture


@pytest.fixture(autouse=True, scope="session")
def quiet_logging():
    setup_logging("WARNING")


@pytest.fixture(scope="session")
def texture() -> Image:
    return make_texture(160, 160, seed=1)


@pytest.fixture(scope="session")
def other_texture() -> Image:
    return make_texture(160, 160, seed=2)
