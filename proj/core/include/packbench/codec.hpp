#pragma once

#include <string>
#include <string_view>

#include "packbench/model.hpp"

// Canonical text forms:
//   instance  {"capacity":[W,H],"items":[[w0,h0],...]}
//   solution  {"bins":[{"placements":[{"item":i,"x":x,"y":y},...]},...]}
//   dataset   {"generator":"splitmix64","instances":[...],"params":{...},"seed":s}
// Keys are emitted in sorted order, no whitespace, integral coordinates
// without a fractional part.
namespace packbench {

std::string encode_instance(const Instance& instance);
Instance decode_instance(std::string_view text);

std::string encode_solution(const Solution& solution);

/// Parses candidate output and resolves item indices against `instance`.
/// Throws Error with kMalformedOutput, kUnknownItemIndex or
/// kNonNumericCoordinate.
Solution decode_solution(std::string_view text, const Instance& instance);

std::string encode_dataset(const Dataset& dataset);
Dataset decode_dataset(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace packbench
