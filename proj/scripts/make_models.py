#!/usr/bin/env python3
# Copyright 2026 The edgeroof Authors.
# SPDX-License-Identifier: Apache-2.0
"""Write the native-IR demo models under data/models/.

Usage: make_models.py OUT_DIR
"""
import json
import os
import sys


def layer(id_, kind, inputs=(), **params):
    return {"id": id_, "kind": kind, "params": params, "inputs": list(inputs)}


def conv1():
    return {
        "name": "conv1",
        "precision": "FP32",
        "default_batch": 1,
        "inputs": {"conv": [1, 3, 8, 8]},
        "layers": [layer("conv", "Conv2d", out_channels=8, kernel=3, stride=1, padding=1)],
    }


def tiny_cnn():
    layers = [
        layer("stem", "Conv2d", out_channels=16, kernel=3, stride=2, padding=1, activation="relu"),
        layer("block_a", "Conv2d", ["stem"], out_channels=16, kernel=3, padding=1),
        layer("block_a_bn", "BatchNorm", ["block_a"]),
        layer("block_a_add", "Elementwise", ["block_a_bn", "stem"], op="add"),
        layer("block_a_relu", "Activation", ["block_a_add"], activation="relu"),
        layer("dw", "Conv2d", ["block_a_relu"], out_channels=16, kernel=3, padding=1, groups=16, activation="hardswish"),
        layer("pw", "Conv2d", ["dw"], out_channels=32, kernel=1, activation="relu"),
        layer("pool", "Pool2d", ["pw"], mode="avg", **{"global": 1}),
        layer("flatten", "Reshape", ["pool"]),
        layer("fc", "Linear", ["flatten"], out_features=10),
        layer("softmax", "Softmax", ["fc"], axis=1),
    ]
    return {"name": "tiny_cnn", "precision": "FP32", "default_batch": 1,
            "inputs": {"stem": [1, 3, 32, 32]}, "layers": layers}


def bert_large(seq=128, d=1024, heads=16, ffn=4096, blocks=24, vocab=30522):
    layers = [layer("embed", "Embedding", vocab=vocab, dim=d), layer("embed_ln", "LayerNorm", ["embed"])]
    prev = "embed_ln"
    for b in range(blocks):
        p = f"l{b}_"
        layers += [
            layer(p + "attn", "Attention", [prev], heads=heads),
            layer(p + "attn_add", "Elementwise", [p + "attn", prev], op="add"),
            layer(p + "attn_ln", "LayerNorm", [p + "attn_add"]),
            layer(p + "ffn_up", "Linear", [p + "attn_ln"], out_features=ffn, activation="gelu"),
            layer(p + "ffn_down", "Linear", [p + "ffn_up"], out_features=d),
            layer(p + "ffn_add", "Elementwise", [p + "ffn_down", p + "attn_ln"], op="add"),
            layer(p + "ffn_ln", "LayerNorm", [p + "ffn_add"]),
        ]
        prev = p + "ffn_ln"
    return {"name": "bert_large", "precision": "FP32", "default_batch": 1,
            "inputs": {"embed": [1, seq]}, "layers": layers}


def lstm(seq=50, vocab=10000, d=128, hidden=128, classes=10):
    layers = [
        layer("embed", "Embedding", vocab=vocab, dim=d),
        layer("lstm1", "LSTMCell", ["embed"], hidden=hidden),
        layer("lstm2", "LSTMCell", ["lstm1"], hidden=hidden),
        layer("last", "Reshape", ["lstm2"], shape=[-1]),
        layer("fc", "Linear", ["last"], out_features=classes),
    ]
    return {"name": "lstm", "precision": "FP32", "default_batch": 1,
            "inputs": {"embed": [1, seq]}, "layers": layers}


def main(out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    for name, doc in (("conv1", conv1()), ("tiny_cnn", tiny_cnn()), ("bert_large", bert_large()), ("lstm", lstm())):
        with open(os.path.join(out_dir, name + ".json"), "w") as f:
            f.write(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
