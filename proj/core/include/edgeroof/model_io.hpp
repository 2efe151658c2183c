// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "edgeroof/model_graph.hpp"

namespace edgeroof {

/// Parses the native JSON IR:
///   {"name", "precision", "default_batch", "inputs": {id: [dims]},
///    "layers": [{"id", "kind", "params": {...}, "inputs": [ids]}]}
/// Unknown fields are rejected. Errors: SchemaError, UnknownKind,
/// DanglingInput, CyclicGraph.
ModelGraph parse_model(std::string_view text);

/// Inverse of parse_model; key order and formatting are fixed so output is
/// byte-stable.
std::string serialize_model(const ModelGraph& graph);

/// Imports an ONNX ModelProto (opset >= 13) through the op mapping table.
/// Errors: DecodeError, UnsupportedOp (lists every unmapped op type),
/// MissingShape.
ModelGraph import_onnx(std::span<const std::uint8_t> bytes);

/// Reads a model file, dispatching on extension (.onnx -> import_onnx,
/// anything else -> parse_model). ONNX models are named after the file stem.
/// Throws IoError when unreadable.
ModelGraph load_model_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace edgeroof
