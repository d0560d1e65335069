"""
CSV emission of evaluation tables
"""
from pathlib import Path
from typing import Sequence

import pandas as pd


def write_csv(frame: pd.DataFrame, path) -> Path:
    """Write a table as CSV, creating parent directories"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    return path


def concat_frames(frames: Sequence[pd.DataFrame]) -> pd.DataFrame:
    frames = [f for f in frames if not f.empty]
    if not frames:
        return pd.DataFrame()
    return pd.concat(frames, ignore_index=True, sort=False)
