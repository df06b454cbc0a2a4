"""Simulator of three-party dense-coding quantum secret sharing.

Subpackages: ``qcore`` (exact state vectors, Bell sets, printed tables),
``protocol`` (sessions, checks, sifting); modules ``channel``, ``adversary``,
``metrics``, ``selftest`` and ``cli``.
"""
__version__ = "0.1.0"
