#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ptcpsim/cc/cubic.hpp"
#include "ptcpsim/cc/hstcp.hpp"
#include "ptcpsim/cc/htcp.hpp"
#include "ptcpsim/cc/newreno.hpp"
#include "ptcpsim/cc/scalable.hpp"

namespace ptcpsim {

inline constexpr std::array<std::string_view, 5> kVariantNames = {
    "newreno", "scalable", "htcp", "hstcp", "cubic"};

inline bool is_known_variant(std::string_view name) {
  for (auto v : kVariantNames)
    if (v == name) return true;
  return false;
}

// Variant selection by exact lowercase name.
inline std::unique_ptr<CcLaw> make_cc_law(std::string_view name,
                                          const VariantParams& params = {}) {
  if (name == "newreno") return std::make_unique<NewRenoLaw>();
  if (name == "scalable") return std::make_unique<ScalableLaw>(params);
  if (name == "htcp") return std::make_unique<HtcpLaw>(params);
  if (name == "hstcp") return std::make_unique<HstcpLaw>(params);
  if (name == "cubic") return std::make_unique<CubicLaw>(params);
  throw std::invalid_argument("unknown TCP variant: " + std::string(name));
}

}  // namespace ptcpsim
