#pragma once

#include <map>
#include <string>

#include "json.hpp"
#include "qsym/models.hpp"

namespace qsym {

// Arithmetic on numbers and named parameters: + - * / ^, unary minus, parentheses,
// sqrt sin cos tan exp log abs, and the constant pi.
double evaluate_expression(const std::string& expr, const std::map<std::string, double>& params);

// JSON model format:
//   name, description, dim, parameters {name: value},
//   hamiltonian, jumps [{name, matrix}], symmetries [{name, matrix}],
//   partition [[1, 2], [3]] (1-based), expect [{symmetry, I, II, III}].
// A matrix is either dense rows of entries or {"sparse": [[row, col, entry], ...]} with
// 1-based indices. An entry is a number, an expression string, or [re, im] of those.
Model parse_model(const std::string& text);
Model load_model(const std::string& path);

nlohmann::json model_to_json(const Model& m);
std::string write_model(const Model& m);

nlohmann::json matrix_to_json(const Mat& M);

}  // namespace qsym
