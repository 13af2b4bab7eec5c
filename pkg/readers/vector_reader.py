from models.overlap_model import OverlapVector, PVector
from utils.validators import ConfigurationError


class VectorReader:
    """Reads a plain-text vector: one real per line, blank lines and # comments ignored."""

    def __init__(self, path):
        self.path = path
        self.file = None

    def __enter__(self):
        try:
            self.file = open(self.path, "r", encoding="utf-8")
        except OSError as exc:
            raise ConfigurationError(f"cannot read vector file {self.path}: {exc}") from exc
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.file:
            self.file.close()

    def values(self):
        if self.file is None:
            raise RuntimeError("VectorReader used outside a with block")
        values = []
        for number, line in enumerate(self.file, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError as exc:
                raise ConfigurationError(f"{self.path}:{number}: not a number: {text!r}") from exc
        return tuple(values)


def read_pvector(path):
    with VectorReader(path) as reader:
        return PVector(probs=reader.values())


def read_overlaps(path):
    with VectorReader(path) as reader:
        return OverlapVector(overlaps=reader.values())
