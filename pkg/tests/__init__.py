# -*- coding: utf-8 -*-
"""
init file
"""
