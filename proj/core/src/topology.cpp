#include "acn/topology.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace acn {

void TopologySpec::validate() const {
  if (input_width == 0) throw std::invalid_argument("TopologySpec: input width must be >= 1");
  if (output_width == 0) throw std::invalid_argument("TopologySpec: output width must be >= 1");
  if (hidden.empty()) throw std::invalid_argument("TopologySpec: at least one hidden layer required");
  for (std::size_t w : hidden) {
    if (w == 0) throw std::invalid_argument("TopologySpec: hidden widths must be >= 1");
  }
}

std::size_t TopologySpec::fan_in(std::size_t layer) const {
  if (layer > hidden.size()) throw std::out_of_range("TopologySpec::fan_in: bad layer");
  return layer == 0 ? input_width : hidden[layer - 1];
}

std::size_t TopologySpec::fan_out(std::size_t layer) const {
  if (layer > hidden.size()) throw std::out_of_range("TopologySpec::fan_out: bad layer");
  return layer == hidden.size() ? output_width : hidden[layer];
}

std::string format_hidden(const HiddenWidths& hidden) {
  std::string out = "[";
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(hidden[i]);
  }
  out += "]";
  return out;
}

HiddenWidths parse_hidden(std::string_view text) {
  std::string cleaned;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) cleaned += c;
  }
  const bool open = !cleaned.empty() && cleaned.front() == '[';
  const bool close = !cleaned.empty() && cleaned.back() == ']';
  if (open != close || (open && cleaned.size() < 2)) {
    throw std::invalid_argument("invalid hidden widths: \"" + std::string(text) + "\"");
  }
  if (open) cleaned = cleaned.substr(1, cleaned.size() - 2);
  HiddenWidths widths;
  std::size_t pos = 0;
  while (pos <= cleaned.size() && !cleaned.empty()) {
    const std::size_t comma = cleaned.find(',', pos);
    const std::string_view tok =
        std::string_view(cleaned).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t w = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), w);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || w == 0) {
      throw std::invalid_argument("invalid hidden widths: \"" + std::string(text) + "\"");
    }
    widths.push_back(w);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (widths.empty()) throw std::invalid_argument("invalid hidden widths: \"" + std::string(text) + "\"");
  return widths;
}

}  // namespace acn
