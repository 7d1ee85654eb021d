#include <doctest.h>

#include <fstream>
#include <sstream>

#include "../../tools/commands.hpp"
#include "gkeca/image.hpp"
#include "test_support.hpp"

using namespace gkeca;
using namespace gkeca::testing;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> small_flags() {
    return {"--image_width", "40", "--image_height", "40", "--gabor_scales", "2", "--gabor_orientations", "4",
            "--gabor_window", "15", "--block_size", "5"};
}

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) out.push_back(f);
    return out;
}

// Writes two enrolled identities plus an impostor and returns the manifest path.
std::filesystem::path write_dataset(const TempDir& dir) {
    Rng rng(12);
    std::ofstream m(dir / "manifest.csv");
    m << "path,label,role\n";
    auto add = [&](int id, const std::string& role, int count) {
        const auto base = synthetic_identity(id, 40, 40);
        for (int i = 0; i < count; ++i) {
            const auto name = "id" + std::to_string(id) + "_" + role + std::to_string(i) + ".pgm";
            save_pgm(perturbed(base, rng, 3.0), dir / name);
            m << name << ",s" << id << "," << role << "\n";
        }
    };
    add(0, "train", 4);
    add(1, "train", 4);
    add(0, "positive-test", 2);
    add(1, "positive-test", 2);
    add(2, "negative-test", 3);
    return dir / "manifest.csv";
}

}  // namespace

TEST_CASE("cli usage errors") {
    CHECK(run_cli({}).code != 0);
    CHECK(run_cli({"frobnicate"}).code != 0);
    CHECK(run_cli({"fit", "--manifest", "x.csv"}).code != 0);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("extract") {
    TempDir dir("cli_extract");
    SUBCASE("one image at the default geometry") {
        Rng rng(1);
        save_pgm(random_image(rng, 92, 112), dir / "a.pgm");
        std::ofstream(dir / "m.csv") << "path,label,role\na.pgm,s1,train\n";
        const auto r = run_cli({"extract", "--manifest", (dir / "m.csv").string()});
        REQUIRE(r.code == 0);
        const auto ls = lines(r.out);
        REQUIRE(ls.size() == 2);
        CHECK(fields(ls[0]).size() == 8321);
        CHECK(fields(ls[0])[8320] == "v8320");
        const auto row = fields(ls[1]);
        CHECK(row.size() == 8321);
        CHECK(row[0] == "s1");
    }
    SUBCASE("empty manifest gives a header-only csv") {
        std::ofstream(dir / "m.csv") << "path,label,role\n";
        const auto r = run_cli(with({"extract", "--manifest", (dir / "m.csv").string(), "--out",
                                     (dir / "f.csv").string()},
                                    small_flags()));
        CHECK(r.code == 0);
        const auto ls = lines(read_file(dir / "f.csv"));
        REQUIRE(ls.size() == 1);
        CHECK(fields(ls[0]).size() == 1 + 8 * 64);
    }
    SUBCASE("a bad image path is named in the error") {
        std::ofstream(dir / "m.csv") << "path,label,role\nnot_there.pgm,s1,train\n";
        const auto r = run_cli({"extract", "--manifest", (dir / "m.csv").string()});
        CHECK(r.code != 0);
        CHECK(r.out.empty());
        CHECK(r.err.find("not_there.pgm") != std::string::npos);
    }
}

TEST_CASE("gabor-dump writes one image per kernel") {
    TempDir dir("cli_dump");
    Rng rng(2);
    save_pgm(random_image(rng, 40, 40), dir / "a.pgm");
    const auto r = run_cli(with({"gabor-dump", "--image", (dir / "a.pgm").string(), "--out", (dir / "out").string()},
                                small_flags()));
    REQUIRE(r.code == 0);
    int count = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir / "out")) {
        const auto img = load_pgm(e.path());
        CHECK(img.width() == 40);
        ++count;
    }
    CHECK(count == 8);
    CHECK(std::filesystem::exists(dir / "out" / "gabor_nu1_mu3.pgm"));
}

TEST_CASE("fit, eval and predict") {
    TempDir dir("cli_flow");
    const auto manifest = write_dataset(dir).string();
    const auto model = (dir / "model.bin").string();

    const auto fit = run_cli(with({"fit", "--manifest", manifest, "--out", model, "--kernel", "gaussian",
                                   "--kernel_sigma", "0.5"},
                                  small_flags()));
    REQUIRE_MESSAGE(fit.code == 0, fit.err);
    CHECK(fit.err.empty());

    SUBCASE("refit is byte identical") {
        const auto again = (dir / "model2.bin").string();
        REQUIRE(run_cli(with({"fit", "--manifest", manifest, "--out", again, "--kernel", "gaussian", "--kernel_sigma",
                              "0.5", "--threads", "1"},
                             small_flags()))
                    .code == 0);
        CHECK(read_file(model) == read_file(again));
    }

    SUBCASE("requesting more axes than survive warns") {
        const auto big = (dir / "big.bin").string();
        const auto r = run_cli(with({"fit", "--manifest", manifest, "--out", big, "--k", "500"}, small_flags()));
        REQUIRE(r.code == 0);
        CHECK(r.err.find("warning") != std::string::npos);
    }

    SUBCASE("eval with a tau sweep emits one row per threshold") {
        const auto r = run_cli({"eval", "--manifest", manifest, "--model", model, "--tau_sweep", "0:5:10"});
        REQUIRE_MESSAGE(r.code == 0, r.err);
        const auto ls = lines(r.out);
        REQUIRE(ls.size() == 11);
        CHECK(ls[0] == "measure,tau,TP,FP,TN,FN,sensitivity,specificity,fpr,fnr,accuracy");
        long prev = -1;
        for (std::size_t i = 1; i < ls.size(); ++i) {
            const auto f = fields(ls[i]);
            const long accepted = std::stol(f[2]) + std::stol(f[3]);
            CHECK(accepted >= prev);
            prev = accepted;
        }
        // rerun is byte identical
        CHECK(run_cli({"eval", "--manifest", manifest, "--model", model, "--tau_sweep", "0:5:10"}).out == r.out);
    }

    SUBCASE("all measures from one model") {
        const auto csv = (dir / "report.csv").string();
        const auto r = run_cli({"eval", "--manifest", manifest, "--model", model, "--measure", "all", "--out", csv,
                                "--seed", "77"});
        REQUIRE(r.code == 0);
        const auto ls = lines(read_file(csv));
        REQUIRE(ls.size() == 5);
        CHECK(fields(ls[1])[0] == "l1");
        CHECK(fields(ls[4])[0] == "cosine");
        CHECK(r.out.find("77") != std::string::npos);
    }

    SUBCASE("predict prints label and distance") {
        const auto r = run_cli({"predict", "--model", model, "--image", (dir / "id1_positive-test0.pgm").string(),
                                "--measure", "l2"});
        REQUIRE(r.code == 0);
        std::istringstream in(r.out);
        std::string label;
        double d = -1;
        in >> label >> d;
        CHECK(label == "s1");
        CHECK(d >= 0.0);
    }

    SUBCASE("config file with flag override") {
        std::ofstream(dir / "cfg.txt") << "measure = l1\ntau = 0.25\n";
        const auto r = run_cli({"eval", "--manifest", manifest, "--model", model, "--config",
                                (dir / "cfg.txt").string(), "--measure", "cosine"});
        REQUIRE(r.code == 0);
        const auto ls = lines(r.out);
        REQUIRE(ls.size() == 2);
        CHECK(fields(ls[1])[0] == "cosine");
        CHECK(fields(ls[1])[1] == "0.25");
    }

    SUBCASE("corrupt model") {
        std::ofstream(dir / "bad.bin", std::ios::binary) << "not a model at all";
        const auto r = run_cli({"eval", "--manifest", manifest, "--model", (dir / "bad.bin").string()});
        CHECK(r.code != 0);
        CHECK(r.err.find("magic") != std::string::npos);

        auto bytes = read_file(model);
        bytes[8] = 42;
        std::ofstream(dir / "ver.bin", std::ios::binary) << bytes;
        const auto v = run_cli({"predict", "--model", (dir / "ver.bin").string(), "--image",
                                (dir / "id0_train0.pgm").string()});
        CHECK(v.code != 0);
        CHECK(v.err.find("version") != std::string::npos);
    }
}
