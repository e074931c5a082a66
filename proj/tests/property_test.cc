#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "conjtm/bb.h"
#include "conjtm/composer.h"
#include "conjtm/engine.h"
#include "conjtm/harness.h"
#include "conjtm/optimizer.h"
#include "conjtm/oracles.h"

namespace conjtm {
namespace {

const std::string kData = CONJTM_DATA_DIR;

// n >= 2 states named S0.., each action present with probability `fill`.
Machine random_machine(std::mt19937& rng, int n, double fill) {
  std::bernoulli_distribution present(fill), coin(0.5);
  std::uniform_int_distribution<int> target(0, n - 1);
  MachineBuilder b("random");
  for (int s = 0; s < n; ++s) {
    for (Symbol read : {Symbol::Zero, Symbol::One}) {
      if (s == 0 && read == Symbol::Zero) continue;
      if (!present(rng)) continue;
      b.add("S" + std::to_string(s), read,
            {coin(rng) ? Symbol::One : Symbol::Zero, coin(rng) ? Move::Right : Move::Left,
             "S" + std::to_string(target(rng))});
    }
  }
  // Always leave the blank start, so runs do something.
  b.add("S0", Symbol::Zero, {Symbol::One, Move::Right, "S1"});
  return b.build("S0");
}

RunLimits steps(std::uint64_t n, bool cycle = false) {
  RunLimits l;
  l.max_steps = n;
  l.cycle_check = cycle;
  return l;
}

TEST(EngineProperty, DeterminismAndStepAccounting) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    Machine m = random_machine(rng, 2 + trial % 4, 0.85);
    RunOutcome a = run(m, initial_configuration(m), steps(500));
    RunOutcome b = run(m, initial_configuration(m), steps(500));
    ASSERT_EQ(a.kind, b.kind);
    ASSERT_EQ(a.final, b.final);
    // Running k steps and then the rest lands on the same configuration.
    RunOutcome half = run(m, initial_configuration(m), steps(200));
    if (half.kind == OutcomeKind::StepLimitExceeded) {
      RunOutcome rest = run(m, half.final, steps(300));
      ASSERT_EQ(rest.final, a.final);
      ASSERT_EQ(rest.kind, a.kind);
    }
    ASSERT_LE(a.steps(), 500u);
  }
}

TEST(EngineProperty, ExtentGrowsAtMostOneCellPerStep) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Machine m = random_machine(rng, 4, 0.9);
    Configuration start = initial_configuration(m);
    start.tape = encode_tape(UnaryLayout{{1 + trial % 5, 2}, {}});
    std::uint64_t initial = start.tape.extent_size();
    RunOutcome r = run(m, start, steps(400));
    ASSERT_LE(r.final.tape.extent_size(), initial + r.steps());
    if (auto s = r.final.tape.support()) {
      ASSERT_LE(static_cast<std::uint64_t>(s->second - s->first + 1), initial + r.steps());
    }
  }
}

TEST(EngineProperty, HaltingIsSound) {
  std::mt19937 rng(13);
  int halted = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Machine m = random_machine(rng, 3, 0.7);
    RunOutcome r = run(m, initial_configuration(m), steps(1000));
    if (r.kind != OutcomeKind::Halted) continue;
    ++halted;
    StateId s = *r.state;
    if (m.is_defined(s)) {
      ASSERT_FALSE(m.action(s, r.final.tape.read_head()).has_value());
    }
  }
  EXPECT_GT(halted, 50);
}

TEST(EngineProperty, CyclesAreSound) {
  std::mt19937 rng(17);
  int cycles = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Machine m = random_machine(rng, 3, 1.0);
    RunOutcome r = run(m, initial_configuration(m), steps(2000, true));
    if (r.kind != OutcomeKind::CycleDetected) continue;
    ++cycles;
    ASSERT_GT(r.period, 0u);
    RunOutcome again = run(m, r.final, steps(r.period));
    ASSERT_EQ(again.kind, OutcomeKind::StepLimitExceeded);
    ASSERT_EQ(fingerprint(again.final), fingerprint(r.final));
  }
  EXPECT_GT(cycles, 10);
}

TEST(OracleProperty, PrimesMatchSieve) {
  constexpr std::uint32_t kMax = 1'000'000;
  std::vector<bool> composite(kMax + 1, false);
  composite[0] = composite[1] = true;
  for (std::uint32_t i = 2; i * i <= kMax; ++i) {
    if (composite[i]) continue;
    for (std::uint32_t j = i * i; j <= kMax; j += i) composite[j] = true;
  }
  for (std::uint32_t n = 0; n <= kMax; ++n) ASSERT_EQ(is_prime(n), !composite[n]) << n;
}

TEST(OracleProperty, SquaresMatchEnumeration) {
  constexpr std::uint32_t kMax = 1'000'000;
  std::uint32_t next_root = 0;
  for (std::uint32_t n = 0; n <= kMax; ++n) {
    bool square = next_root * next_root == n;
    // perfect_square_root checks isqrt against odd subtraction internally.
    auto r = perfect_square_root(n);
    ASSERT_EQ(r.has_value(), square) << n;
    if (square) {
      ASSERT_EQ(*r, next_root);
      ++next_root;
    }
  }
}

TEST(OracleProperty, FermatClosedForm) {
  for (unsigned n = 0; n <= 6; ++n) {
    EXPECT_EQ(fermat_number(n), (Natural(1) << (1u << n)) + 1) << n;
  }
}

TEST(CodecProperty, RoundTrip) {
  std::mt19937 rng(19);
  std::uniform_int_distribution<int> len(1, 64), count(1, 4);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<Natural> blocks(count(rng));
    for (auto& b : blocks) b = len(rng);
    Tape t = encode_tape(UnaryLayout{blocks, {}});
    DecodeSpec spec;
    spec.expected_blocks = blocks.size();
    ASSERT_EQ(decode_tape(t, spec), blocks);
  }
}

TEST(ComposerProperty, PrimeSectionPreserved) {
  SectionManifest manifest = load_manifest(kData + "/fermat.manifest");
  Machine prime = section_machine(manifest, "prime");
  Machine all = compose(manifest).machine;
  for (int x = 2; x <= 14; ++x) {
    Tape tape = encode_tape(UnaryLayout{{x}, {}});
    RunOutcome alone = run(prime, Configuration{prime.id("1"), tape, 0});
    RunOptions stop;
    stop.stop_states = {all.id("square.0")};
    RunOutcome inside = run(all, Configuration{all.id("prime.1"), tape, 0}, {}, stop);
    ASSERT_EQ(alone.steps(), inside.steps()) << x;
    ASSERT_EQ(alone.final.tape, inside.final.tape) << x;
    if (alone.kind == OutcomeKind::Halted && prime.name(*alone.state) == "NM") {
      ASSERT_EQ(inside.kind, OutcomeKind::EnteredStopState) << x;
    } else {
      ASSERT_EQ(alone.kind, inside.kind) << x;
    }
  }
}

TEST(OptimizerProperty, CountDropsByOnePerPair) {
  Machine m = load_machine(kData + "/fermat.manifest");
  MergeOptions o;
  o.use_profile = false;
  MergePlan full = propose_merges(m, profile_reads(m, {}), o);
  ASSERT_FALSE(full.pairs.empty());
  std::mt19937 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    MergePlan subset;
    for (const auto& p : full.pairs) {
      if (rng() % 2) subset.pairs.push_back(p);
    }
    ASSERT_EQ(state_count(apply_merges(m, subset)), state_count(m) - subset.pairs.size());
  }
}

TEST(BBProperty, CertificatesReplay) {
  std::mt19937 rng(29);
  int certified = 0;
  for (int trial = 0; trial < 400 && certified < 30; ++trial) {
    Machine m = random_machine(rng, 4, 1.0);
    if (state_count(m) != 4) continue;
    RunOutcome r = run(m, initial_configuration(m), steps(108));
    auto c = certify_nonhalt(m, r);
    if (!c) continue;
    ++certified;
    ASSERT_TRUE(replay_certificate(m, *c));
  }
  EXPECT_GT(certified, 0);
}

}  // namespace
}  // namespace conjtm
