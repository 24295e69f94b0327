"""Bundled derivations (``*.nd`` proof files)."""

from importlib import resources


def names():
    return sorted(p.name[:-3] for p in resources.files(__name__).iterdir() if p.name.endswith(".nd"))


def text(name):
    return resources.files(__name__).joinpath(name + ".nd").read_text()


def load(name, sig=None):
    from ..proof import parse_proof
    return parse_proof(text(name), sig, source=name + ".nd")
