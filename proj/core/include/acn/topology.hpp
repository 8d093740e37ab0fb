#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace acn {

using HiddenWidths = std::vector<std::size_t>;

std::string format_hidden(const HiddenWidths& hidden);
/// Parses "[64, 64]" (brackets optional, whitespace ignored).
HiddenWidths parse_hidden(std::string_view text);

/// Architecture genome of one MLP: input width, hidden widths, output width.
struct TopologySpec {
  std::size_t input_width = 0;
  HiddenWidths hidden;
  std::size_t output_width = 0;

  /// Throws std::invalid_argument unless all widths are >= 1 and there is at
  /// least one hidden layer.
  void validate() const;

  std::size_t layer_count() const { return hidden.size() + 1; }
  /// Input width of affine layer i (i == hidden.size() is the output layer).
  std::size_t fan_in(std::size_t layer) const;
  std::size_t fan_out(std::size_t layer) const;

  /// Hidden widths in bracket form, e.g. "[136, 72]".
  std::string to_string() const { return format_hidden(hidden); }

  bool operator==(const TopologySpec&) const = default;
};

}  // namespace acn
