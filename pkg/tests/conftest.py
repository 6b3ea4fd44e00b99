import random
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest

from expsum.core.config import ApplicationSettings
from expsum.models.finite_field import FieldDescriptor, build_field
from expsum.models.padic import PadicContext
from expsum.services.padic_tower import padic_context


@pytest.fixture
def settings_factory() -> Callable[..., ApplicationSettings]:
    def build(**overrides: Any) -> ApplicationSettings:
        return ApplicationSettings(_env_file=None, **overrides)

    return build


@pytest.fixture
def settings(settings_factory: Callable[..., ApplicationSettings]) -> ApplicationSettings:
    return settings_factory()


@pytest.fixture
def f7() -> FieldDescriptor:
    return build_field(7, 1)


@pytest.fixture
def f49() -> FieldDescriptor:
    return build_field(7, 2)


@pytest.fixture
def ctx7() -> PadicContext:
    return padic_context(7)


@pytest.fixture
def ctx49() -> PadicContext:
    return padic_context(7, 2)


@pytest.fixture
def census_root(tmp_path: Path) -> Path:
    return tmp_path / "census"


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)
