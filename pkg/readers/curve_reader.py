import pandas as pd

from models.curve_model import CSV_COLUMNS, MiCurve
from utils.validators import ConfigurationError


def read_curve(path, system_entropy_nats, n=None):
    """Load a curve CSV written by CSVWriter; N defaults to the largest l."""
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise ConfigurationError(f"cannot read curve {path}: {exc}") from exc
    missing = [c for c in CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise ConfigurationError(f"curve {path} lacks columns {missing}")
    if frame.empty:
        raise ConfigurationError(f"curve {path} has no points")
    frame = frame.sort_values("l", kind="stable")
    n = int(frame["l"].max()) if n is None else n
    return MiCurve.from_frame(frame[CSV_COLUMNS], n, system_entropy_nats)
