# Copyright (c) 2026 The ergofit authors
# SPDX-License-Identifier: Apache-2.0
"""Goodness-of-fit tests for ergodic diffusion processes.

Thin wrapper over the compiled core: parametric and simple diffusion models,
path simulation, EDF / local-time estimators, CvM and KS test statistics,
limit-law samplers and Monte Carlo threshold calibration.
"""

from ergofit._core import *  # noqa: F401,F403
from ergofit._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
