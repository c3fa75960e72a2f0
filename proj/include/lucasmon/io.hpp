#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lucasmon/analytic.hpp"
#include "lucasmon/factor.hpp"
#include "lucasmon/lucas.hpp"

namespace lucasmon {

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

// CSV with a header row, ',' separator and '.' decimals. Fields holding a
// comma, quote or newline are quoted.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  CsvWriter& operator<<(const std::string& field);
  CsvWriter& operator<<(const char* field) { return *this << std::string(field); }
  CsvWriter& operator<<(double v) { return *this << format_double(v); }
  CsvWriter& operator<<(long long v) { return *this << std::to_string(v); }
  CsvWriter& operator<<(int v) { return *this << std::to_string(v); }
  CsvWriter& operator<<(unsigned long long v) { return *this << std::to_string(v); }
  CsvWriter& operator<<(unsigned long v) { return *this << std::to_string(v); }
  CsvWriter& operator<<(long v) { return *this << std::to_string(v); }
  CsvWriter& operator<<(const BigInt& v) { return *this << v.get_str(); }
  // Ends the current row; throws if the field count differs from the header.
  void end_row();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

struct BFileEntry {
  long long index = 0;
  BigInt value;
};

// OEIS b-file: "index value" per line, '#' comments and blank lines skipped.
// Indices must be consecutive. Throws ParseError with the line number.
std::vector<BFileEntry> parse_bfile(std::istream& in);
std::vector<BFileEntry> read_bfile(const std::string& path);

struct PrefixComparison {
  std::size_t compared = 0;  // min of the two lengths
  std::size_t agreement = 0; // leading entries that match
  std::optional<long long> mismatch_index;
  BigInt expected;  // b-file value at the mismatch
  BigInt actual;

  [[nodiscard]] bool agrees() const { return !mismatch_index; }
};

// Compares b-file values with stream[0], stream[1], ... in order.
PrefixComparison compare_prefix(const std::vector<BFileEntry>& bfile, const std::vector<BigInt>& stream);

nlohmann::json to_json(const ConstantsBundle& c);
ConstantsBundle constants_from_json(const nlohmann::json& j);

// Finite part f0 plus tail generators with index <= n_max. Big integers are
// decimal strings.
nlohmann::json generators_json(const GeneratorSet& gens, int n_max);

}  // namespace lucasmon
