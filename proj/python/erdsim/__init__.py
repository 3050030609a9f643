"""Simulator for encoded-pair storage, decoupling pulse sequences, and
recoupled logic on small spin registers."""

from erdsim._core import *  # noqa: F401,F403
