#include <doctest.h>

#include <sstream>

#include "lucasmon/errors.hpp"
#include "lucasmon/io.hpp"
#include "lucasmon/monoid.hpp"

using namespace lucasmon;

namespace {

std::string data(const char* name) { return std::string(LUCASMON_TEST_DATA) + "/" + name; }

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23, 4.2}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(4.2) == "4.2");
}

TEST_CASE("csv writer") {
  std::ostringstream out;
  CsvWriter csv(out, {"a", "b"});
  csv << 1 << "x,y";
  csv.end_row();
  csv << 2.5 << "say \"hi\"";
  csv.end_row();
  CHECK(out.str() == "a,b\n1,\"x,y\"\n2.5,\"say \"\"hi\"\"\"\n");
  csv << 1;
  CHECK_THROWS_AS(csv.end_row(), Error);
}

TEST_CASE("b-file parsing") {
  std::istringstream in("# comment\n\n5 8\n6 13  # trailing\n7 123456789012345678901234567890\n");
  const auto e = parse_bfile(in);
  REQUIRE(e.size() == 3);
  CHECK(e[0].index == 5);
  CHECK(e[2].value == BigInt("123456789012345678901234567890"));

  for (const char* bad : {"1 2 3\n", "1\n", "a 2\n", "1 2x\n", "1 1\n3 2\n", "1 -\n"}) {
    std::istringstream b(bad);
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_bfile(b), ParseError);
  }
  std::istringstream empty("# nothing\n");
  CHECK(parse_bfile(empty).empty());
  CHECK_THROWS_AS(read_bfile(data("missing.txt")), ParseError);
  CHECK_THROWS_AS(read_bfile(data("malformed_b.txt")), ParseError);
}

TEST_CASE("prefix comparison against the fixtures") {
  const GeneratorSet fib = GeneratorSet::build(LucasParams::fibonacci());
  std::vector<BigInt> stream;
  for (const auto& el : enumerate_upto(fib, 100'000)) stream.emplace_back(std::to_string(el.value));

  for (const char* f : {"a065108_prefix.txt", "a065108_upto_1e5.txt"}) {
    const auto b = read_bfile(data(f));
    const auto cmp = compare_prefix(b, stream);
    CHECK(cmp.agrees());
    CHECK(cmp.agreement == b.size());
  }
  CHECK(read_bfile(data("a065108_upto_1e5.txt")).size() == stream.size());

  const auto fibs = read_bfile(data("a000045_b.txt"));
  const auto terms = lucas_values(LucasParams::fibonacci(), 300);
  CHECK(compare_prefix(fibs, terms).agreement == 301);

  const auto none = compare_prefix(read_bfile(data("empty_b.txt")), stream);
  CHECK(none.agrees());
  CHECK(none.compared == 0);

  auto broken = read_bfile(data("a065108_prefix.txt"));
  broken[9].value = 11;
  const auto cmp = compare_prefix(broken, stream);
  CHECK_FALSE(cmp.agrees());
  CHECK(*cmp.mismatch_index == 10);
  CHECK(cmp.agreement == 9);
  CHECK(cmp.actual == 12);
}

TEST_CASE("constants JSON round-trips") {
  for (const auto& params : {LucasParams::fibonacci(), LucasParams::mersenne(), LucasParams::make(5, 3)}) {
    const ConstantsBundle c = constants_bundle(GeneratorSet::build(params));
    const auto j = to_json(c);
    const auto text = j.dump();
    const ConstantsBundle back = constants_from_json(nlohmann::json::parse(text));
    CHECK(to_json(back) == j);
    CHECK(back.b1_proof == c.b1_proof);
    CHECK(back.q == c.q);
  }
  CHECK_THROWS_AS(constants_from_json(nlohmann::json{{"P", 1}}), ParseError);
}

TEST_CASE("generator JSON") {
  const GeneratorSet fib = GeneratorSet::build(LucasParams::fibonacci());
  const auto j = generators_json(fib, 100);
  CHECK(j["f0"].size() == 8);
  CHECK(j["tail"].size() == 88);
  CHECK(j["tail"][0]["value"] == "233");
  // F(100) exceeds 64 bits and is kept exact as a string.
  CHECK(j["tail"].back()["value"] == "354224848179261915075");
  CHECK(nlohmann::json::parse(j.dump()) == j);
}
