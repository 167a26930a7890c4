"""Manifold spec files shipped with the package."""

from importlib import resources

from ..errors import SpecError
from .specfile import loads

SUFFIX = ".manifold"


def _root():
    return resources.files("geoverify") / "fixtures"


def list_fixtures():
    return sorted(p.name[: -len(SUFFIX)] for p in _root().iterdir() if p.name.endswith(SUFFIX))


def fixture_text(name: str) -> str:
    path = _root() / f"{name}{SUFFIX}"
    if not path.is_file():
        raise SpecError(f"no bundled fixture named {name!r}; available: {', '.join(list_fixtures())}")
    return path.read_text(encoding="utf-8")


def load_fixture(name: str):
    return loads(fixture_text(name), f"<fixture {name}>")
