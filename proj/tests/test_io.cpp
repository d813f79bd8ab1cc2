#include <gtest/gtest.h>

#include <filesystem>

#include "bap/gen.hpp"
#include "bap/io.hpp"
#include "fixtures.hpp"

using namespace bap;

TEST(Io, InstanceRoundTripIsByteIdentical) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    gen::RandomInstanceParams prm;
    prm.max_assign_cost = 1.0;
    prm.target_k = 2.0 + static_cast<double>(seed % 5) / 3.0;
    Instance inst = gen::random_instance(prm, seed);
    std::string text = io::dump(io::to_json(inst));
    Instance back = io::instance_from_json(io::Json::parse(text));
    EXPECT_EQ(back, inst);
    EXPECT_EQ(io::dump(io::to_json(back)), text);
  }
}

TEST(Io, SolutionRoundTrip) {
  Instance inst = fixtures::reference_2x2();
  auto si = scale_budget(inst);
  auto sol = solve_relaxation(si, RelaxationMode::scaled(0.3));
  std::string text = io::dump(io::to_json(sol));
  auto back = io::fractional_from_json(io::Json::parse(text), inst);
  EXPECT_EQ(back.values, sol.values);
  EXPECT_EQ(back.lp_value, sol.lp_value);
  EXPECT_EQ(back.mode.epsilon, 0.3);
  EXPECT_EQ(io::dump(io::to_json(back)), text);
}

TEST(Io, RlppRoundTrip) {
  auto r = gen::rlpp_grid({}, 4);
  std::string text = io::dump(io::to_json(r));
  auto back = io::rlpp_from_json(io::Json::parse(text));
  EXPECT_EQ(back, r);
  EXPECT_EQ(io::dump(io::to_json(back)), text);
}

TEST(Io, MalformedInputs) {
  EXPECT_THROW(io::instance_from_json(io::Json::parse(R"({"bins": []})")), Error);
  auto j = io::to_json(fixtures::reference_2x2());
  j["L"] = 3;
  EXPECT_THROW(io::instance_from_json(j), Error);
  j = io::to_json(fixtures::reference_2x2());
  j["links"].push_back(j["links"][0]);
  EXPECT_THROW(io::instance_from_json(j), Error);
  EXPECT_THROW(io::read_json_file("/nonexistent/file.json"), Error);
}

TEST(Io, ReadInstanceFileDetectsRlpp) {
  auto dir = std::filesystem::temp_directory_path();
  auto core = (dir / "bap_io_core.json").string(), rlpp = (dir / "bap_io_rlpp.json").string();
  io::write_text_file(core, io::dump(io::to_json(fixtures::reference_2x2())));
  auto r = gen::rlpp_from_max_k_cover({2, {{0, 1}, {1}}, 1});
  io::write_text_file(rlpp, io::dump(io::to_json(r)));
  EXPECT_EQ(io::read_instance_file(core), fixtures::reference_2x2());
  EXPECT_EQ(io::read_instance_file(rlpp), gen::rlpp_build(r));
  std::filesystem::remove(core);
  std::filesystem::remove(rlpp);
}
