#include "treeshift/address.hpp"

#include <charconv>

#include "treeshift/errors.hpp"

namespace treeshift {

std::string to_string(const VertexAddress& addr) {
  std::string out = "(" + std::to_string(addr.up) + ";";
  if (!addr.path.empty()) {
    out += ' ';
    for (std::size_t i = 0; i < addr.path.size(); ++i) {
      if (i != 0) out += '.';
      out += std::to_string(addr.path[i]);
    }
  }
  out += ')';
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::uint32_t parse_index(std::string_view token, std::string_view whole) {
  token = trim(token);
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError("malformed vertex address '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

VertexAddress parse_address(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  if (text.size() < 3 || text.front() != '(' || text.back() != ')') {
    throw ParseError("malformed vertex address '" + std::string(whole) + "'");
  }
  text = text.substr(1, text.size() - 2);
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) {
    throw ParseError("malformed vertex address '" + std::string(whole) + "'");
  }
  VertexAddress addr;
  addr.up = parse_index(text.substr(0, semi), whole);
  std::string_view rest = trim(text.substr(semi + 1));
  while (!rest.empty()) {
    const auto dot = rest.find('.');
    addr.path.push_back(parse_index(rest.substr(0, dot), whole));
    if (dot == std::string_view::npos) break;
    rest = rest.substr(dot + 1);
    if (rest.empty()) throw ParseError("malformed vertex address '" + std::string(whole) + "'");
  }
  return addr;
}

std::size_t VertexAddressHash::operator()(const VertexAddress& a) const noexcept {
  std::size_t h = std::hash<std::uint32_t>{}(a.up) ^ 0x9e3779b97f4a7c15ULL;
  for (auto i : a.path) {
    h ^= std::hash<std::uint32_t>{}(i) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace treeshift
