#pragma once

#include <string>
#include <string_view>

#include "theta/mp.hpp"

namespace theta {

// h and h' are phi-quotients at positive and negated nomes; l and l' are the
// psi-quotients at negated and positive nomes.
enum class Family { H, HPrime, L, LPrime };

struct ParamSpec {
  Family family = Family::H;
  Rational k{1};
  Rational n{1};

  // "h(3,15)", "l'(5,4/3)"
  std::string to_string() const;
  bool operator==(const ParamSpec&) const = default;
};

std::string_view family_name(Family f);
// Accepts h, h', l, l'; throws std::invalid_argument otherwise.
Family parse_family(std::string_view text);

}  // namespace theta
