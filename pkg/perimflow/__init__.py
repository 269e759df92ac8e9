"""
Version info.

perimflow follows the version numbers at
https://packaging.python.org/en/latest/specifications/version-specifiers/#version-specifiers

The version is written into every report header, so regressions in
a sweep can be tied back to the code that produced them.

Flit pulls into the pyproject.toml using "dynamic".
"""

__version__ = "0.3.0"
