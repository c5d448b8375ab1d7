#pragma once

#include <cmath>
#include <stdexcept>

#include "onebit/types.hpp"

namespace onebit {

enum class CostScheme { kExhaustive, kCiMapping, kSymbolScaling, kPokemon };

// Analytical real-operation counts per transmit frame. The exhaustive count
// is evaluated through a floating-point power so antenna counts far beyond
// integer range stay finite. The symbol-scaling count is the exact stage
// sum (transform + allocation + refinement), not its quadratic
// approximation; see symbol_scaling_flops_approx for the latter.
inline double flops(CostScheme scheme, Index nt, Index k, Index n_max = 1) {
  if (k < 1 || nt < k) throw std::invalid_argument("need nt >= k >= 1");
  if (n_max < 1) throw std::invalid_argument("need n_max >= 1");
  const double dn = static_cast<double>(nt);
  const double dk = static_cast<double>(k);
  switch (scheme) {
    case CostScheme::kExhaustive:
      return 8.0 * dk * dn * std::exp2(2.0 * dn);
    case CostScheme::kCiMapping:
      return 8.0 * std::sqrt(2.0) * std::pow(dk + dn, 1.5) * dn * dn +
             2.0 * dn;
    case CostScheme::kSymbolScaling:
      return 8.0 * dk * dn + (2.0 * dn - 1.0) * (2.0 * dk + 2.0 * dn) +
             16.0 * dn * dn;
    case CostScheme::kPokemon:
      return static_cast<double>(n_max) * (8.0 * dn * dn + 4.0 * dn);
  }
  throw std::invalid_argument("unknown cost scheme");
}

// Closed-form approximation of the symbol-scaling count; exceeds the exact
// stage sum by roughly ten percent at practical sizes.
inline double symbol_scaling_flops_approx(Index nt, Index k) {
  if (k < 1 || nt < k) throw std::invalid_argument("need nt >= k >= 1");
  const double dn = static_cast<double>(nt);
  const double dk = static_cast<double>(k);
  return 20.0 * dn * dn + 12.0 * dk * dn;
}

// Cost of symbol scaling relative to the iterative reference scheme;
// approaches 2.5/n_max as the antenna count grows with fixed users.
inline double ratio_to_pokemon(Index nt, Index k, Index n_max) {
  return flops(CostScheme::kSymbolScaling, nt, k) /
         flops(CostScheme::kPokemon, nt, k, n_max);
}

}  // namespace onebit
