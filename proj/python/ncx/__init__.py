"""Splitting-norm verification for Khintchine and Paley inequalities."""

from ._ncx import *  # noqa: F401,F403
