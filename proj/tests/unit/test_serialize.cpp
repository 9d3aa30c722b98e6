#include <algorithm>
#include <charconv>
#include <filesystem>

#include "doctest.h"
#include "fslab/corpus.hpp"
#include "fslab/dilation.hpp"
#include "fslab/serialize.hpp"

using namespace fslab;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    auto dir = fs::temp_directory_path() / "fslab_serialize_test";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("format_double round-trips exactly") {
    for (double x : {0.0, 1.0, -1.0, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, 0.5299731159}) {
        const std::string s = format_double(x);
        double back = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(res.ec == std::errc());
        CHECK(back == x);
    }
    CHECK(format_double(0.25) == "0.25");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("exponent json uses inf sentinel") {
    CHECK(exponent_to_json(LpExponent::infinity()) == Json("inf"));
    CHECK(exponent_to_json(LpExponent(2.0)) == Json(2.0));
    CHECK(exponent_from_json(Json("inf")).is_inf());
    CHECK(exponent_from_json(Json(1.5)).value() == 1.5);
    CHECK_THROWS_AS(exponent_from_json(Json("two")), UsageError);
    CHECK_THROWS_AS(exponent_from_json(Json::array()), UsageError);
}

TEST_CASE("name round-trips for family and variant") {
    for (auto fam : {Family::Besov, Family::TriebelLizorkin})
        CHECK(family_from_string(to_string(fam)) == fam);
    for (auto v : {NormVariant::Inhomogeneous01, NormVariant::Inhomogeneous0Inf,
                   NormVariant::Homogeneous0Inf})
        CHECK(norm_variant_from_string(to_string(v)) == v);
    CHECK(to_string(NormVariant::Homogeneous0Inf) == "homogeneous_0inf");
    CHECK_THROWS_AS(family_from_string("sobolev"), UsageError);
    CHECK_THROWS_AS(norm_variant_from_string("homogeneous"), UsageError);
}

TEST_CASE("grid function json round-trips bit-exactly") {
    const auto f = make_profile(CorpusProfile::SmoothBump, 1, 4, 2.0, 1.0);
    const Json j = to_json(f);
    CHECK(j.at("dim") == 1);
    CHECK(j.at("level") == 4);
    const auto g = grid_function_from_json(j);
    CHECK(g.dim() == f.dim());
    CHECK(g.level() == f.level());
    CHECK(g.extent() == f.extent());
    CHECK(g.support_radius() == f.support_radius());
    CHECK(g.values() == f.values());

    Json broken = j;
    broken.erase("values");
    CHECK_THROWS_AS(grid_function_from_json(broken), UsageError);
}

TEST_CASE("params json round-trips and validates") {
    SmoothnessParams prm;
    prm.family = Family::TriebelLizorkin;
    prm.s = 0.8;
    prm.p = LpExponent(2.0);
    prm.q = LpExponent::infinity();
    prm.r = 2;
    const auto back = smoothness_params_from_json(to_json(prm));
    CHECK(back.family == prm.family);
    CHECK(back.s == prm.s);
    CHECK(back.p == prm.p);
    CHECK(back.q == prm.q);
    CHECK(back.r == prm.r);

    Json bad = to_json(prm);
    bad["s"] = -1.0;
    CHECK_THROWS_AS(smoothness_params_from_json(bad), UsageError);

    SeqSpaceParams sp;
    sp.s = 1.25;
    sp.levels = 3;
    sp.sizes = {1, 2, 4};
    sp.beta_max = 1;
    sp.beta_dim = 2;
    const auto sp2 = seq_space_params_from_json(to_json(sp));
    CHECK(sp2.same_layout(sp));
    CHECK(sp2.s == sp.s);
    CHECK(sp2.c1 == sp.c1);
}

TEST_CASE("norm report json keeps key contract") {
    const auto f = make_profile(CorpusProfile::SmoothBump, 1, 5, 2.0, 0.5);
    SmoothnessParams prm;
    prm.s = 0.5;
    prm.p = LpExponent(2.0);
    prm.q = LpExponent(2.0);

    const Json inhom = to_json(besov_norm(f, prm, NormVariant::Inhomogeneous01));
    CHECK(inhom.at("variant") == "inhomogeneous_01");
    CHECK(inhom.contains("lp_part"));
    CHECK(inhom.at("total").get<double>() > 0.0);
    REQUIRE(inhom.at("scales").is_array());
    CHECK(inhom.at("scales").size() == 6); // k = 0..level
    const auto& first = inhom.at("scales").at(0);
    CHECK(first.contains("t"));
    CHECK(first.contains("contribution"));
    // scales ascend in t
    CHECK(first.at("t").get<double>() < inhom.at("scales").at(5).at("t").get<double>());

    const Json homog = to_json(besov_norm(f, prm, NormVariant::Homogeneous0Inf));
    CHECK(homog.at("variant") == "homogeneous_0inf");
    CHECK_FALSE(homog.contains("lp_part"));
    CHECK(homog.at("seminorm_part") == homog.at("total"));
}

TEST_CASE("csv documents match the declared headers") {
    const auto f = make_profile(CorpusProfile::SmoothBump, 1, 5, 2.0, 0.125);
    const auto curve = modulus_curve(f, LpExponent(2.0), 1, 0, 3);
    const std::string csv = modulus_curve_csv(curve);
    CHECK(csv.substr(0, 8) == "t,omega\n");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5); // header + 4 scales
    CHECK(csv.find("0.125,") != std::string::npos);

    SmoothnessParams prm;
    prm.s = 0.5;
    prm.p = LpExponent(2.0);
    prm.q = LpExponent(2.0);
    const auto hom = homogeneity_experiment(f, prm, 3);
    const std::string hcsv = homogeneity_csv(hom);
    CHECK(hcsv.substr(0, 12) == "lambda,norm\n");
    CHECK(hcsv.find("\n1,") != std::string::npos);     // lambda = 2^0
    CHECK(hcsv.find("\n0.125,") != std::string::npos); // lambda = 2^-3

    FitResult fit;
    fit.points = {{2.0, 0.5}, {3.0, 0.25}};
    const std::string ecsv = entropy_csv(fit);
    CHECK(ecsv == "k,e_k\n2,0.5\n3,0.25\n");

    CHECK_THROWS_AS(csv_document({"a", "b"}, {{"1"}}), UsageError);
}

TEST_CASE("atomic text write replaces the file and creates directories") {
    const auto dir = temp_dir() / "nested" / "deeper";
    const auto path = dir / "out.csv";
    fs::remove_all(temp_dir() / "nested");

    write_text(path, "k,e_k\n1,1\n");
    CHECK(read_text(path) == "k,e_k\n1,1\n");
    write_text(path, "k,e_k\n2,0.5\n");
    CHECK(read_text(path) == "k,e_k\n2,0.5\n");
    CHECK_FALSE(fs::exists(dir / "out.csv.tmp"));

    write_json(path, Json{{"a", 1}});
    const Json back = read_json(path);
    CHECK(back.at("a") == 1);
    CHECK_THROWS_AS(read_json(dir / "missing.json"), UsageError);

    write_text(path, "not json");
    CHECK_THROWS_AS(read_json(path), UsageError);
    fs::remove_all(temp_dir());
}

TEST_CASE("json serialization is byte-deterministic") {
    const auto f = make_profile(CorpusProfile::Zigzag, 1, 6, 2.0, 1.0);
    SmoothnessParams prm;
    prm.s = 0.6;
    prm.p = LpExponent(2.0);
    prm.q = LpExponent(1.0);
    const auto report = besov_norm(f, prm, NormVariant::Inhomogeneous0Inf);
    CHECK(to_json(report).dump(2) == to_json(report).dump(2));
    const auto hom = homogeneity_experiment(
        make_profile(CorpusProfile::SmoothBump, 1, 5, 2.0, 0.125), prm, 3);
    const Json j = to_json(hom);
    CHECK(j.at("predicted_slope") == hom.predicted_slope);
    CHECK(j.at("points").size() == 4);
    CHECK(j.at("norms").size() == 4);
}
