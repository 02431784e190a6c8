import datetime

import numpy as np
import pytest

from hydrocast import TimeSeries

START = datetime.date(2004, 2, 5)


@pytest.fixture
def make_series():
    """TimeSeries factory with the default daily step."""

    def _make(values, start=START, label="test"):
        return TimeSeries(start_date=start, values=np.asarray(values, float), label=label)

    return _make
