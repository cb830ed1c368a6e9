from typing import Iterable, Optional

import numpy as np
import pandas as pd

from robustprod.enums.enums import CANONICAL_MEASURES, Measure, Scale
from robustprod.schemas.dataset import PanelDataset


def make_panel(
    rows: Iterable[dict],
    scale: Scale = Scale.log,
    measures: Optional[list] = None,
) -> PanelDataset:
    """Panel from dicts holding farm_id, year and measure values."""
    frame = pd.DataFrame(list(rows))
    frame["farm_id"] = frame["farm_id"].astype(str)
    frame["year"] = frame["year"].astype(int)
    if measures is None:
        measures = [m for m in CANONICAL_MEASURES if m.value in frame.columns]
    frame.insert(0, "record_id", [f"{f}:{y}" for f, y in zip(frame["farm_id"], frame["year"])])
    frame = frame[["record_id", "farm_id", "year"] + [m.value for m in measures]]
    return PanelDataset(frame=frame.reset_index(drop=True), scale=scale, measures=list(measures))


def ar_panel(
    rng: np.random.Generator,
    n_farms: int,
    periods: int,
    measures=(Measure.labour, Measure.capital),
    persistence: float = 0.8,
) -> pd.DataFrame:
    """Persistent random inputs on a balanced panel, as a frame."""
    rows = []
    for farm in range(n_farms):
        values = {m: rng.normal() for m in measures}
        for t in range(periods):
            values = {m: persistence * v + rng.normal() for m, v in values.items()}
            rows.append(
                {"farm_id": f"f{farm:03d}", "year": 2001 + t, **{m.value: v for m, v in values.items()}}
            )
    return pd.DataFrame(rows)
