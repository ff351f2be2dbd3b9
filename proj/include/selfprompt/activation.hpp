#pragma once

#include <string>

namespace selfprompt::nn {

enum class Activation { kIdentity, kGelu, kTanh, kRelu };

std::string to_string(Activation act);

// GELU is the exact erf form: 0.5 x (1 + erf(x / sqrt 2)).
double activate(Activation act, double x);
double activate_derivative(Activation act, double x);

}  // namespace selfprompt::nn
