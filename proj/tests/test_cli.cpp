// Drives the repsim executable end to end through its public flags.

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "oracles.hpp"
#include "repsim/bundle.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        dir_ = new oracle::TempDir("cli");
        const auto r = run("selftest --seed 3 --emit " + dir_->path().string());
        ASSERT_EQ(r.status, 0) << r.out << r.err;
    }
    static void TearDownTestSuite() {
        delete dir_;
        dir_ = nullptr;
    }

    static RunResult run(const std::string& args, const std::string& env = "") {
        const auto out = dir_->path() / "stdout.txt";
        const auto err = dir_->path() / "stderr.txt";
        const std::string cmd = env + " " + std::string(REPSIM_CLI) + " " + args + " >" + out.string() + " 2>" +
                                err.string();
        const int raw = std::system(cmd.c_str());
        return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
    }

    static std::string bundle(const std::string& name) { return (dir_->path() / name).string(); }

    static std::vector<std::vector<std::string>> csv(const std::string& text) {
        std::vector<std::vector<std::string>> rows;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            std::vector<std::string> cells;
            std::istringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
            rows.push_back(cells);
        }
        return rows;
    }

    static inline oracle::TempDir* dir_ = nullptr;
};

} // namespace

TEST_F(CliTest, SelftestReportsAllChecksPassing) {
    const auto r = run("selftest --seed 3");
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("selftest: 7/7 passed"), std::string::npos) << r.out;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, CompareSelfHasUnitDiagonal) {
    const auto r = run("compare --a " + bundle("base") + " --b " + bundle("base") + " --method gbs-lsim --k 5");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto rows = csv(r.out);
    ASSERT_EQ(rows.size(), 7u);
    EXPECT_EQ(rows[0][0], "layer");
    EXPECT_EQ(rows[0][1], "layer0");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ASSERT_EQ(rows[i].size(), 7u);
        EXPECT_NEAR(std::stod(rows[i][i]), 1.0, 1e-9);
    }
}

TEST_F(CliTest, CompareWritesOutFileForEveryMethod) {
    for (const std::string flags : {"--method cka", "--method cka --kernel rbf --bandwidth 0.8",
                                    "--method cka --kernel cosine", "--method sparse-cka --m 20",
                                    "--method gbs-degree --k 4"}) {
        const auto path = dir_->path() / "cmp.csv";
        const auto r = run("compare --a " + bundle("base") + " " + flags + " --out " + path.string());
        ASSERT_EQ(r.status, 0) << flags << ": " << r.err;
        EXPECT_EQ(csv(slurp(path)).size(), 7u) << flags;
    }
}

TEST_F(CliTest, SanityOnOrthogonalTwin) {
    const auto r = run("sanity --a " + bundle("base") + " --b " + bundle("twin") + " --method gbs-lsim");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["accuracy"], 1.0);
    ASSERT_EQ(j["matches"].size(), 6u);
    EXPECT_EQ(j["matches"][3]["best_match"], "layer3");
    EXPECT_EQ(j["matches"][3]["tie"], false);
}

TEST_F(CliTest, MotifsOneRowPerLayer) {
    const auto r = run("motifs --a " + bundle("clustered") + " --k 5");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto rows = csv(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"layer", "type1", "type2", "type3", "total", "type1_ratio"}));
    EXPECT_EQ(rows[1][0], "noise");
    EXPECT_EQ(rows[3][0], "fine");
    EXPECT_LT(std::stod(rows[1][5]), std::stod(rows[3][5]));
}

TEST_F(CliTest, GraphEdgeListIsSortedUpperTriangle) {
    const auto r = run("graph --a " + bundle("base") + " --layer layer2 --k 3");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto rows = csv(r.out);
    ASSERT_GT(rows.size(), 150u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"src", "dst", "weight"}));
    std::pair<long, long> prev{-1, -1};
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::pair<long, long> cur{std::stol(rows[i][0]), std::stol(rows[i][1])};
        EXPECT_LT(cur.first, cur.second);
        EXPECT_LT(prev, cur);
        prev = cur;
    }
}

TEST_F(CliTest, ValidationErrorsExitOneWithKindPrefix) {
    auto r = run("compare --a " + bundle("base") + " --method sparse-cka");
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(r.err.rfind("parameter_error: ", 0), 0u) << r.err;

    r = run("compare --a " + bundle("base") + " --method gbs-lsim --m 4");
    EXPECT_EQ(r.status, 1);
    r = run("compare --a " + bundle("base") + " --method cka --k 4");
    EXPECT_EQ(r.status, 1);
    r = run("compare --a " + bundle("base") + " --method svcca");
    EXPECT_EQ(r.status, 1);
    r = run("graph --a " + bundle("base") + " --layer nope");
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(r.err.rfind("validation_error: ", 0), 0u) << r.err;
    r = run("compare --a " + bundle("base") + " --b " + bundle("clustered"));
    EXPECT_EQ(r.status, 1);
    r = run("frobnicate");
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST_F(CliTest, IoErrorsExitTwo) {
    const auto r = run("motifs --a " + (dir_->path() / "does_not_exist").string());
    EXPECT_EQ(r.status, 2);
    EXPECT_EQ(r.err.rfind("io_error: ", 0), 0u) << r.err;
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST_F(CliTest, ThreadsFromEnvironmentMatchesFlag) {
    const std::string args = "compare --a " + bundle("base") + " --b " + bundle("twin");
    const auto env = run(args, "REPSIM_THREADS=4");
    const auto flag = run(args + " --threads 1");
    ASSERT_EQ(env.status, 0);
    EXPECT_EQ(env.out, flag.out);
}
