#!/usr/bin/env python3
# Copyright 2026 The edgeroof Authors.
# SPDX-License-Identifier: Apache-2.0
"""Export torchvision ResNet-50 to ONNX with BatchNorm kept as separate nodes.

Weight payloads are dropped (dims are kept) so the fixture stays small; the
importer only needs tensor shapes. Usage: export_resnet50.py OUT.onnx
"""
import io
import sys

import onnx
import torch
import torchvision


def main(out_path: str) -> None:
    model = torchvision.models.resnet50(weights=None).eval()
    buf = io.BytesIO()
    torch.onnx.export(
        model,
        torch.zeros(1, 3, 224, 224),
        buf,
        opset_version=13,
        do_constant_folding=False,
        training=torch.onnx.TrainingMode.PRESERVE,
        input_names=["input"],
        output_names=["logits"],
        dynamo=False,
    )
    proto = onnx.load_from_string(buf.getvalue())
    for init in proto.graph.initializer:
        if init.data_type == onnx.TensorProto.FLOAT:
            init.ClearField("raw_data")
            del init.float_data[:]
    onnx.save(proto, out_path)


if __name__ == "__main__":
    main(sys.argv[1])
