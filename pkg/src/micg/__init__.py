"""Multi-user magnetic-induction links through the air-soil boundary.

Modules: ``circuit`` (multi-frequency resonant networks), ``channel``
(cross-ground field and coupling), ``link`` (path loss, bandwidth,
capacity), ``multiuser`` (band allocation and BER), ``scenario`` and
``cli`` (configuration and the ``micg`` command).
"""

__version__ = "0.1.0"
