#include "packing/sdpa.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace packing {

void export_sdpa(const SdpProblem<MpReal>& prob, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");

  const int m = static_cast<int>(prob.rows.size());
  const int nb = static_cast<int>(prob.blocks.size());
  out << m << "\n" << nb << "\n";
  for (int b = 0; b < nb; ++b) out << prob.blocks[static_cast<size_t>(b)].size << (b + 1 < nb ? " " : "\n");
  if (nb == 0) out << "\n";

  auto fmt = [](const MpReal& v) { return v.to_string(MpReal::roundtrip_digits(v.prec())); };

  for (int i = 0; i < m; ++i)
    out << fmt(prob.rows[static_cast<size_t>(i)].rhs) << (i + 1 < m ? " " : "\n");
  if (m == 0) out << "\n";

  // F0 = -C; every stored entry is emitted, zeros included, so that the
  // sparsity pattern survives a round trip
  for (const auto& e : prob.objective)
    out << "0 " << e.block + 1 << " " << e.q + 1 << " " << e.p + 1 << " " << fmt(-e.v) << "\n";
  for (int i = 0; i < m; ++i)
    for (const auto& e : prob.rows[static_cast<size_t>(i)].a)
      out << i + 1 << " " << e.block + 1 << " " << e.q + 1 << " " << e.p + 1 << " " << fmt(e.v)
          << "\n";
}

SdpProblem<MpReal> import_sdpa(const std::string& path, Prec precision) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  // tokenize, skipping comment lines and the punctuation the format allows
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && (line[0] == '"' || line[0] == '*')) continue;
    for (char& c : line)
      if (c == ',' || c == '(' || c == ')' || c == '{' || c == '}') c = ' ';
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) tokens.push_back(t);
  }
  size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= tokens.size()) throw std::runtime_error("truncated sdpa file " + path);
    return tokens[pos++];
  };
  auto next_int = [&]() { return std::stoi(next()); };

  SdpProblem<MpReal> prob;
  prob.precision = precision;
  const int m = next_int();
  const int nb = next_int();
  for (int b = 0; b < nb; ++b) {
    int s = next_int();
    if (s < 0) s = -s;  // negative size marks a diagonal block; treat as dense
    prob.blocks.push_back({"blk" + std::to_string(b + 1), s});
  }
  for (int i = 0; i < m; ++i) {
    ConstraintRow<MpReal> row;
    row.rhs = MpReal::parse(next(), precision);
    row.label = "sdpa:" + std::to_string(i + 1);
    prob.rows.push_back(std::move(row));
  }
  while (pos < tokens.size()) {
    int matno = next_int();
    int blk = next_int() - 1;
    int i = next_int() - 1;
    int j = next_int() - 1;
    MpReal v = MpReal::parse(next(), precision);
    int p = std::max(i, j), q = std::min(i, j);
    if (matno == 0) {
      prob.objective.push_back({blk, p, q, -v});  // C = -F0
    } else {
      prob.rows[static_cast<size_t>(matno - 1)].a.push_back({blk, p, q, v});
    }
  }
  // keep entries in deterministic order
  for (auto& row : prob.rows)
    std::sort(row.a.begin(), row.a.end(), [](const RowEntry<MpReal>& a, const RowEntry<MpReal>& b) {
      return std::tie(a.block, a.p, a.q) < std::tie(b.block, b.p, b.q);
    });
  std::sort(prob.objective.begin(), prob.objective.end(),
            [](const RowEntry<MpReal>& a, const RowEntry<MpReal>& b) {
              return std::tie(a.block, a.p, a.q) < std::tie(b.block, b.p, b.q);
            });
  return prob;
}

}  // namespace packing
