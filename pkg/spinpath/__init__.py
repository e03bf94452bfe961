"""
spinpath package
"""

# This file should NEVER import anything (unless it is from the standard
# library). It MUST remain importable by setup.py before any requirements
# have been installed.

__version__ = '0.1.0'
