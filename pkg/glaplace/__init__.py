#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Exact analysis and integration of linear overdetermined PDE systems in the
plane by generalized Laplace transformations.
"""
