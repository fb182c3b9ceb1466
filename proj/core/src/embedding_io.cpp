#include <charconv>
#include <cstdlib>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "lingshift/embedding.hpp"
#include "lingshift/error.hpp"
#include "lingshift/text.hpp"

namespace lingshift {

void write_embeddings(std::ostream& out, const EmbeddingSpace& space) {
  out << space.size() << ' ' << space.dim() << '\n';
  char buf[32];
  const RowMatrix& v = space.vectors();
  for (std::size_t i = 0; i < space.size(); ++i) {
    out << space.words()[i];
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
      std::snprintf(buf, sizeof buf, " %.6g", v(static_cast<Eigen::Index>(i), k));
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed to write embeddings for " + space.label());
}

EmbeddingSpace read_embeddings(std::istream& in, std::string label) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing embedding header", 1);
  const auto header = text::split_whitespace(line);
  std::size_t rows = 0;
  std::size_t dim = 0;
  auto parse_size = [](std::string_view s, std::size_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
  };
  if (header.size() != 2 || !parse_size(header[0], rows) ||
      !parse_size(header[1], dim) || dim == 0) {
    throw ParseError("embedding header must be '<vocab_size> <dim>'", 1);
  }
  std::vector<std::string> words;
  words.reserve(rows);
  RowMatrix vectors(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) {
      throw ParseError("expected " + std::to_string(rows) + " vectors", r + 2);
    }
    const auto fields = text::split_whitespace(line);
    if (fields.size() != dim + 1) {
      throw ParseError("vector line needs a word and " + std::to_string(dim) +
                           " values",
                       r + 2);
    }
    words.emplace_back(fields[0]);
    for (std::size_t k = 0; k < dim; ++k) {
      const std::string field(fields[k + 1]);
      char* end = nullptr;
      const double value = std::strtod(field.c_str(), &end);
      if (end != field.c_str() + field.size()) {
        throw ParseError("bad number '" + field + "'", r + 2);
      }
      vectors(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = value;
    }
  }
  return EmbeddingSpace(std::move(label), std::move(words), std::move(vectors),
                        false);
}

}  // namespace lingshift
