#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import os
import sys

# Packages are imported from the repository root.
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
