#pragma once

#include <string>

#include "knotcert/bounds.hpp"
#include "knotcert/geometry.hpp"
#include "knotcert/pipeline.hpp"

namespace knotcert {

// Line-oriented "key = value" text with [section] headers in a fixed order.
// No wall-clock content: identical inputs give identical bytes.
std::string certificate_text(const CompositeBezier& curve, const Approximation& result);
std::string certificate_json(const CompositeBezier& curve, const Approximation& result);

std::string certificate_text(const CompositeBezier& curve, const ExternalVerification& result);
std::string certificate_json(const CompositeBezier& curve, const ExternalVerification& result);

// Timestamp sidecar, kept apart from the certificate so byte comparison holds.
std::string certificate_meta_json();

std::string pipe_report_text(const PipeSpec& pipe);
std::string bound_report_text(const std::vector<SegmentBound>& bounds, double r);

}  // namespace knotcert
