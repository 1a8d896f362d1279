"""
Tests for gazeforge.

Unit tests per package under ``unit/``; command-line runs under
``integration/``. Shared fixtures live in ``conftest.py``.
"""
