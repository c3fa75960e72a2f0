#include "lucasmon/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "lucasmon/errors.hpp"

namespace lucasmon {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (const auto& h : header) *this << h;
  end_row();
}

CsvWriter& CsvWriter::operator<<(const std::string& field) {
  if (in_row_ > 0) out_ << ',';
  if (field.find_first_of(",\"\n\r") != std::string::npos) {
    out_ << '"';
    for (char ch : field) {
      if (ch == '"') out_ << '"';
      out_ << ch;
    }
    out_ << '"';
  } else {
    out_ << field;
  }
  ++in_row_;
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) {
    throw Error("CSV row has " + std::to_string(in_row_) + " fields, header has " +
                std::to_string(columns_));
  }
  out_ << '\n';
  in_row_ = 0;
}

std::vector<BFileEntry> parse_bfile(std::istream& in) {
  std::vector<BFileEntry> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string idx, val, extra;
    if (!(fields >> idx)) continue;
    auto fail = [&](const std::string& why) {
      throw ParseError("b-file line " + std::to_string(line_no) + ": " + why);
    };
    if (!(fields >> val)) fail("expected 'index value'");
    if (fields >> extra) fail("trailing field '" + extra + "'");
    BFileEntry e;
    const auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), e.index);
    if (ec != std::errc() || ptr != idx.data() + idx.size()) fail("bad index '" + idx + "'");
    const bool digits = !val.empty() && val.find_first_not_of("0123456789", val[0] == '-' ? 1 : 0) ==
                                            std::string::npos && val != "-";
    if (!digits) fail("bad value '" + val + "'");
    e.value = BigInt(val, 10);
    if (!out.empty() && e.index != out.back().index + 1) fail("indices are not consecutive");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<BFileEntry> read_bfile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open b-file '" + path + "'");
  return parse_bfile(in);
}

PrefixComparison compare_prefix(const std::vector<BFileEntry>& bfile, const std::vector<BigInt>& stream) {
  PrefixComparison out;
  out.compared = std::min(bfile.size(), stream.size());
  for (std::size_t i = 0; i < out.compared; ++i) {
    if (bfile[i].value != stream[i]) {
      out.mismatch_index = bfile[i].index;
      out.expected = bfile[i].value;
      out.actual = stream[i];
      return out;
    }
    ++out.agreement;
  }
  return out;
}

nlohmann::json to_json(const ConstantsBundle& c) {
  return {
      {"P", c.p},
      {"Q", c.q},
      {"f0_size", c.f0_size},
      {"log_phi", c.log_phi},
      {"A", c.A},
      {"b", c.b},
      {"k1", c.k1},
      {"kappa1", c.kappa1},
      {"kappa1_direct", c.kappa1_direct},
      {"kappa2", c.kappa2},
      {"a1", c.a1},
      {"a2", c.a2},
      {"b1_statement", c.b1_statement},
      {"b1_proof", c.b1_proof},
      {"b2", c.b2},
      {"c1", c.c1},
      {"v0", c.v0},
      {"precision_bits", c.precision_bits},
      {"truncation_L", c.truncation_L},
      {"achieved_precision", c.achieved_precision},
  };
}

ConstantsBundle constants_from_json(const nlohmann::json& j) {
  ConstantsBundle c;
  try {
    j.at("P").get_to(c.p);
    j.at("Q").get_to(c.q);
    j.at("f0_size").get_to(c.f0_size);
    j.at("log_phi").get_to(c.log_phi);
    j.at("A").get_to(c.A);
    j.at("b").get_to(c.b);
    j.at("k1").get_to(c.k1);
    j.at("kappa1").get_to(c.kappa1);
    j.at("kappa1_direct").get_to(c.kappa1_direct);
    j.at("kappa2").get_to(c.kappa2);
    j.at("a1").get_to(c.a1);
    j.at("a2").get_to(c.a2);
    j.at("b1_statement").get_to(c.b1_statement);
    j.at("b1_proof").get_to(c.b1_proof);
    j.at("b2").get_to(c.b2);
    j.at("c1").get_to(c.c1);
    j.at("v0").get_to(c.v0);
    j.at("precision_bits").get_to(c.precision_bits);
    j.at("truncation_L").get_to(c.truncation_L);
    j.at("achieved_precision").get_to(c.achieved_precision);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("constants JSON: ") + e.what());
  }
  return c;
}

nlohmann::json generators_json(const GeneratorSet& gens, int n_max) {
  auto entry = [](const Generator& g) {
    return nlohmann::json{{"index", g.term.index},
                          {"value", g.term.value.get_str()},
                          {"log_value", g.term.log_value},
                          {"primitive_prime", g.primitive_prime.get_str()}};
  };
  nlohmann::json f0 = nlohmann::json::array();
  for (const auto& g : gens.f0()) f0.push_back(entry(g));
  nlohmann::json tail = nlohmann::json::array();
  for (int n = GeneratorSet::kFirstTailIndex; n <= n_max; ++n) tail.push_back(entry(gens.generator(n)));
  return {{"P", gens.params().p_sum()}, {"Q", gens.params().q_prod()}, {"v0", gens.v0()},
          {"f0", f0},                   {"tail", tail}};
}

}  // namespace lucasmon
