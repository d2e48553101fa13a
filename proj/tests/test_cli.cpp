#include "probframe/cli.hpp"
#include "probframe/json_io.hpp"
#include "support/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace probframe;
using doctest::Approx;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

Json invoke_json(std::vector<std::string> args) {
    const Run r = invoke(std::move(args));
    REQUIRE_MESSAGE(r.code == cli::kOk, r.err);
    return Json::parse(r.out);
}

}  // namespace

TEST_CASE("analyze on the point mass at one") {
    const Json j = invoke_json({"analyze", "--fixture", "delta_one"});
    CHECK(j.at("is_frame") == true);
    CHECK(j.at("redundancy") == 0);
    CHECK(invoke_json({"analyze", "--fixture", "mu2"}).at("redundancy") == 2);
}

TEST_CASE("certify the product coupling") {
    const Json j = invoke_json({"certify", "--fixture", "delta_one_x_eta"});
    CHECK(j.at("classification") == "approximate");
    CHECK(j.at("deviation").get<double>() == Approx(7.0 / 12));
    CHECK(invoke_json({"certify", "--fixture", "singular_pair"}).at("classification") == "none");
    CHECK(invoke_json({"certify", "--fixture", "zero_mean_product"}).at("classification") == "none");
}

TEST_CASE("certify by search") {
    const Json j = invoke_json({"certify", "--mu", R"({"atoms": [-1, 1]})", "--nu",
                                R"({"atoms": [-1, 1]})"});
    CHECK(j.at("search").at("dual_found") == true);
    CHECK(j.at("classification") == "exact");
}

TEST_CASE("w2 on the converging sequence") {
    const Json j = invoke_json({"w2", "--fixture", "mu_k1_vs_delta_one"});
    CHECK(std::abs(j.at("w2").get<double>() - 1.0 / (2.0 * std::sqrt(2.0))) <= 1e-12);
}

TEST_CASE("dual constructions") {
    Json j = invoke_json({"neumann", "--fixture", "half_pair", "--terms", "3"});
    REQUIRE(j.at("steps").size() == 4);
    CHECK(j.at("steps")[3].at("deviation").get<double>() == Approx(1.0 / 16));

    j = invoke_json({"rescue", "--fixture", "half_pair"});
    CHECK(j.at("certificate").at("classification") == "exact");

    j = invoke_json({"pushforward", "--fixture", "rotation_pushforward"});
    CHECK(j.at("certificate").at("classification") == "exact");

    j = invoke_json({"approx-dual", "--fixture", "delta_one_scaled"});
    CHECK(j.at("certificate").at("deviation").get<double>() == Approx(0.5));

    j = invoke_json({"uncertainty", "--fixture", "scalar_dual_pair", "--f", "[1]"});
    CHECK(j.at("lhs").get<double>() == Approx(1.25));

    j = invoke_json({"bounds-ineq", "--fixture", "delta_one_x_eta"});
    CHECK(j.at("slack_nu").get<double>() == Approx(1.0 / 144));
}

TEST_CASE("perturbation commands") {
    Json j = invoke_json({"perturb", "--fixture", "perturb_mu_k1", "--mode", "frame-bound"});
    CHECK(j.at("claim_holds") == true);
    j = invoke_json({"perturb", "--fixture", "perturb_mu_k1"});
    CHECK(j.at("certificate").at("deviation").get<double>() == Approx(0.25));

    const Run r = invoke({"perturb", "--mu", R"({"atoms": [1]})", "--eta", R"({"atoms": [3]})",
                          "--mode", "frame-bound"});
    CHECK(r.code == cli::kHypothesisFailed);
}

TEST_CASE("sample-dual is deterministic") {
    const std::vector<std::string> args{"sample-dual", "--fixture", "gaussian_cloud", "--samples",
                                        "20", "--seed", "7"};
    const Run first = invoke(args);
    const Run second = invoke(args);
    CHECK(first.code == cli::kOk);
    CHECK(first.out == second.out);
    const Json j = Json::parse(first.out);
    CHECK(j.at("report").at("certificate").at("deviation").get<double>() < 1.0);
}

TEST_CASE("gaussian cloud fixture matches its generator") {
    const Json j = invoke_json({"analyze", "--fixture", "gaussian_cloud"});
    CHECK(j.at("atom_count") == 100);
    const DiscreteMeasure cloud = testing::shifted_gaussian_cloud(7, 100);
    const Matrix s = frame_operator(cloud);
    CHECK(matrix_from_json(j.at("frame_operator")) == s);
}

TEST_CASE("text output") {
    const Run r = invoke({"analyze", "--fixture", "mu1", "--output", "text"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("redundancy: 1\n") != std::string::npos);
    CHECK(r.out.find("second_moment: 1.25\n") != std::string::npos);
}

TEST_CASE("invocation errors") {
    CHECK(invoke({}).code == cli::kValidation);
    CHECK(invoke({"frobnicate"}).code == cli::kValidation);
    CHECK(invoke({"analyze"}).code == cli::kValidation);
    CHECK(invoke({"analyze", "--mu", "{\"atoms\": [1], \"weights\": [0.3]}"}).code == cli::kValidation);
    CHECK(invoke({"analyze", "--fixture", "no_such_fixture"}).code == cli::kValidation);
    CHECK(invoke({"analyze", "--fixture", "delta_one", "--output", "xml"}).code == cli::kValidation);
    CHECK(invoke({"neumann", "--fixture", "singular_pair"}).code == cli::kValidation);
    const Run r = invoke({"rescue", "--fixture", "singular_pair"});
    CHECK(r.code == cli::kValidation);
    CHECK(r.err.find("SingularMixedOperator") != std::string::npos);
}
