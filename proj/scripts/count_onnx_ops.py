#!/usr/bin/env python3
# Copyright 2026 The edgeroof Authors.
# SPDX-License-Identifier: Apache-2.0
"""Print op-type counts of an ONNX graph (independent check for importer tests).

Usage: count_onnx_ops.py MODEL.onnx
"""
import collections
import sys

import onnx

counts = collections.Counter(n.op_type for n in onnx.load(sys.argv[1], load_external_data=False).graph.node)
for op, n in sorted(counts.items()):
    print(f"{op} {n}")
