#pragma once

#include <string>

#include "warpverify/warp_spec.hpp"

namespace warpverify {

/// Parse a spec file (strict JSON schema mirroring WarpSpec: n1, n2, d,
/// lambda, eps1, eps2, alpha1, alpha2, phi1, f1, phi2, f2, domain). Profiles
/// come from the named catalog (constant, linear, quadratic, exp, trajectory).
/// Unknown fields are rejected; all schema violations are collected into a
/// single SpecParseError.
WarpSpec parse_spec(const std::string& path);
WarpSpec parse_spec_text(const std::string& text, const std::string& origin = "<string>");

/// Serialize a WarpSpec built from catalog profiles back to canonical JSON
/// text (deterministic field order). Throws ParameterError for custom
/// (non-catalog) profiles or trajectory profiles without a file path.
std::string serialize_spec(const WarpSpec& spec);

}  // namespace warpverify
