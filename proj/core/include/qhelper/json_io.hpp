#pragma once

#include <variant>

#include "qhelper/region.hpp"
#include "qhelper/ri.hpp"

namespace qhelper::io {

using AnyState = std::variant<DensityOperator, PureState>;

// State schema:
//   {"labels": ["A","B"], "dims": [2,2], "matrix": [[[re,im],...],...]}
// row-major; pure states carry "vector": [[re,im],...] instead.
std::string state_to_json(const DensityOperator& rho, int indent = 2);
std::string state_to_json(const PureState& psi, int indent = 2);
AnyState state_from_json(const std::string& text);

DensityOperator as_density(const AnyState& s);

// Channel schema: {"kind": "kraus"|"stinespring"|"preset"|"params", ...}.
// Presets resolve against the dimension of the system they act on;
// "preset" with name "replace" carries a "sigma" state.
class ChannelSpec {
public:
  struct ReplacePreset {
    DensityOperator sigma;
  };
  using Payload = std::variant<KrausChannel, StinespringIsometry, ChannelParams,
                               std::string, ReplacePreset>;

  explicit ChannelSpec(Payload payload) : payload_(std::move(payload)) {}
  static ChannelSpec preset(const std::string& name) { return ChannelSpec(Payload(name)); }

  StinespringIsometry resolve(int dim_in) const;
  const Payload& payload() const { return payload_; }

private:
  Payload payload_;
};

ChannelSpec channel_from_json(const std::string& text);
std::string channel_to_json(const KrausChannel& ch, int indent = 2);
std::string channel_to_json(const StinespringIsometry& v, int indent = 2);
std::string channel_to_json(const ChannelParams& p, int indent = 2);

// Frontier outputs.
std::string frontier_csv(const region::FrontierResult& result);
std::string hull_datafile(const region::FrontierResult& result);
std::string frontier_json(const region::FrontierConfig& cfg,
                          const region::FrontierResult& result, int indent = 2);

// Rate report: {"r1":..., "r2":..., "naive":..., "residuals": {...}, ...}.
std::string rates_report_json(const rates::RatePoint& point, double naive,
                              const std::map<std::string, double>& residuals,
                              const rates::DirectPartTotal& direct, int indent = 2);

std::string audit_report_json(const std::vector<rates::AuditCheck>& checks, int n,
                              std::uint64_t seed, int indent = 2);

// Certificate file: {"target": ..., "steps": [...], "bindings": {...},
// "samples": {"count":..,"labels":[..],"dims":[..],"seed":..}}. RI fields
// are statement text or "builtin:NAME".
struct CertificateSpec {
  ri::RIStatement target;
  std::vector<ri::RIStatement> steps;
  ri::Binding binding;
  ri::CertifyOptions options;
  int sample_count = 50;
  LabelList sample_labels = {"A", "B", "R"};
  std::vector<int> sample_dims = {2, 2, 2};
  std::uint64_t seed = 1;
};

CertificateSpec certificate_from_json(const std::string& text);
std::vector<PureState> certificate_samples(const CertificateSpec& spec);

std::string certify_report_json(const ri::CertifyReport& report, int indent = 2);

/// Fixed "%.12g" rendering used by the CSV and datafile writers.
std::string format_double(double v);

}  // namespace qhelper::io
