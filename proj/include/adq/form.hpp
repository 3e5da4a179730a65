#pragma once

#include <optional>
#include <string>

namespace adq {

// The two functional-equation shapes the workbench studies.
//   shifted:   f(p + q - 2) = f(p) + f(q) - f(2)   over prime pairs p <= q
//   primesm1:  f(a + b)     = f(a) + f(b)          over a <= b, a,b in {p-1}
enum class Form { shifted, primesm1 };

inline std::string to_string(Form f) {
  return f == Form::shifted ? "shifted" : "primesm1";
}

inline std::optional<Form> parse_form(const std::string& s) {
  if (s == "shifted") return Form::shifted;
  if (s == "primesm1") return Form::primesm1;
  return std::nullopt;
}

}  // namespace adq
