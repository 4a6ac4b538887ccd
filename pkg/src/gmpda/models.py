"""Generative model kinds and symbolic variance specifications."""

from __future__ import annotations

import enum
import math
import re
from typing import Union

from .errors import ParameterError

SigmaSpec = Union[float, int, str]

_MU_OVER = re.compile(r"^mu\s*/\s*(\d+(?:\.\d+)?)$")


class Model(str, enum.Enum):
    CLOCK = "clock"
    RANDOM_WALK = "rw"

    @classmethod
    def parse(cls, value) -> "Model":
        if isinstance(value, Model):
            return value
        key = str(value).strip().lower().replace("_", "").replace("-", "")
        if key in ("clock", "c"):
            return cls.CLOCK
        if key in ("rw", "randomwalk"):
            return cls.RANDOM_WALK
        raise ParameterError(f"unknown model {value!r}; expected 'clock' or 'rw'")


def resolve_sigma(spec: SigmaSpec, mu: float) -> float:
    """Evaluate a variance spec for period ``mu``.

    ``spec`` is a number, ``"log"`` (natural log of ``mu``) or ``"mu/k"``.

    >>> resolve_sigma("mu/8", 80)
    10.0
    >>> round(resolve_sigma("log", 50), 4)
    3.912
    """
    if isinstance(spec, (int, float)):
        value = float(spec)
    else:
        text = str(spec).strip().lower()
        if text == "log":
            value = math.log(mu)
        elif (m := _MU_OVER.match(text)) is not None:
            value = mu / float(m.group(1))
        else:
            try:
                value = float(text)
            except ValueError:
                raise ParameterError(f"cannot parse sigma spec {spec!r}") from None
    if not math.isfinite(value) or value < 0:
        raise ParameterError(f"sigma must be finite and >= 0, got {value}")
    return value


def check_sigma_spec(spec: SigmaSpec) -> SigmaSpec:
    """Validate ``spec`` eagerly and return it unchanged."""
    resolve_sigma(spec, 10.0)
    return spec
