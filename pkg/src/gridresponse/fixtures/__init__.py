"""Packaged catalog and scenario fixtures shipped with the distribution."""

from importlib import resources


def fixture_text(name: str) -> str:
    """Return the text of a packaged fixture file."""
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")
