"""Bundled desk-scale dataset used by the tests and the CLI demo."""

from importlib import resources

from ..parsing import parse_dataset


def t1_text() -> tuple[str, str]:
    base = resources.files(__name__)
    return (base / "t1.facts").read_text(), (base / "t1.bias").read_text()


def load_t1():
    facts, bias = t1_text()
    dataset, _ = parse_dataset(facts, bias)
    return dataset
