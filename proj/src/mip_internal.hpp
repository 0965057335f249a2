#pragma once

#include <string>
#include <vector>

#include "dagopt/mip.hpp"

namespace dagopt::mip_detail {

/// Affine expression sum(terms) + constant.
struct Affine {
  std::vector<LinearTerm> terms;
  double constant = 0.0;
};

std::string var_name(const char* prefix, std::size_t a, std::size_t b);  // 0-based in, 1-based out

/// The binary expression that is 1 exactly when arc j->k is allowed.
Affine arc_indicator(const MipModel& model, std::size_t j, std::size_t k);

/// Accumulates scaled affine pieces and emits a row with constants moved to the rhs.
class RowBuilder {
 public:
  RowBuilder& add(const Affine& a, double scale = 1.0);
  RowBuilder& add(std::size_t var, double coef);
  Constraint finish(std::string name, Sense sense, double rhs) const;

 private:
  std::vector<LinearTerm> terms_;
  double constant_ = 0.0;
};

}  // namespace dagopt::mip_detail
