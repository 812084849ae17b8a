from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from fdokit import Dataset, ShapeRegistry, load_shapes, merge_datasets, parse_trig

settings.register_profile(
    "default",
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
    deadline=None,
)
settings.load_profile("default")

DATA_DIR = Path(__file__).parent / "data"

CORPUS_FILES = (
    "amazon_top50_identification.trig",
    "amazon_top50_metadata.trig",
    "amazon_top50_media.trig",
)

EX = "https://w3id.org/fdof/fois23-paper/ex1/"


def corpus_paths() -> list[Path]:
    return [DATA_DIR / name for name in CORPUS_FILES]


@pytest.fixture(scope="session")
def corpus_texts() -> list[str]:
    return [path.read_text(encoding="utf-8") for path in corpus_paths()]


@pytest.fixture(scope="session")
def corpus(corpus_texts) -> Dataset:
    return merge_datasets([parse_trig(text) for text in corpus_texts])


@pytest.fixture(scope="session")
def shapes_text() -> str:
    return (DATA_DIR / "shapes.yaml").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def shapes(shapes_text) -> ShapeRegistry:
    return load_shapes(shapes_text)
