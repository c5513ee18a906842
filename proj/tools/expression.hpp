#ifndef PLANDIS_TOOLS_EXPRESSION_HPP
#define PLANDIS_TOOLS_EXPRESSION_HPP

#include <string>
#include <vector>

namespace plandis::tools {

// Radial closed-form mini-language for -u flags: numbers, |x|, + - * / ^,
// parentheses and implicit multiplication ("2|x|", "3(|x|+1)"). The CLI
// substitutes the tokens d and beta numerically before parsing, so e.g.
// "d^(-2|x|)" and "0.5*beta^|x| + |x|^-2" work.
//
// Throws plandis::ParseError on malformed input.
double evaluate_radial_expression(const std::string& expr, double radius);

std::vector<double> evaluate_radial_profile(const std::string& expr, int max_radius);

// Whole-word substitution of `name` by a numeric literal.
std::string substitute_symbol(const std::string& expr, const std::string& name, double value);

}  // namespace plandis::tools

#endif  // PLANDIS_TOOLS_EXPRESSION_HPP
