# SPDX-License-Identifier: Apache-2.0
"""4-pixel Gabor-mask planar odometry: simulator, decoder, optimizer."""

try:
    from ._core import *  # noqa: F401,F403  (installed package layout)
except ImportError:  # in-tree build: the extension sits on sys.path
    from _core import *  # noqa: F401,F403

__version__ = "0.1.0"
