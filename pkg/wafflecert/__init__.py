# -*- coding: utf-8 -*-
"""
init file
"""

__version__ = "0.3.0"
