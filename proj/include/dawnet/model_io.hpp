#pragma once

#include <string>

#include "dawnet/trace.hpp"

namespace dawnet {

enum class TraceFormat { Json, Xes };

/// Reads and fully validates a model file (schema 1). Structural, guard and
/// write-set defects throw with a location hint.
DawNet parse_model(const std::string& path, bool validate = true);
DawNet parse_model_text(const std::string& text, const std::string& origin = "<string>",
                        bool validate = true);

/// Canonical model serialization; parse_model_text(serialize_model(w)) == w.
std::string serialize_model(const DawNet& w, const std::string& name = "");

/// Reads an ordered trace. JSON: [{"t": "T3", "w": {...}, "d": [...]}, ...].
/// XES: the first <trace> element; concept:name names the transition, other
/// string/int attributes of declared variables become writes, anything else
/// is ignored. Values are resolved against the variable domains of `w`.
Trace parse_trace(const std::string& path, TraceFormat format, const DawNet& w);
Trace parse_trace_text(const std::string& text, TraceFormat format, const DawNet& w);

std::string serialize_trace(const Trace& tau);

/// Reads a whole file; IoError on failure.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace dawnet
