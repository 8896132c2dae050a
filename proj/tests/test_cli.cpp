#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "rodmat/cli.hpp"

using namespace rodmat;

namespace {

struct Result {
    int code;
    std::string out, err;
    json j() const { return json::parse(out); }
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "rodmat");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content)
{
    auto path = std::filesystem::temp_directory_path() / ("rodmat_test_" + name);
    std::ofstream(path) << content;
    return path.string();
}

} // namespace

TEST(Cli, ListAndShow)
{
    Result l = run({"list"});
    EXPECT_EQ(l.code, 0);
    EXPECT_GE(l.j()["families"].size(), 9u);

    Result k = run({"show", "kerr", "--m", "3", "--a", "4", "--rod", "top"});
    ASSERT_EQ(k.code, 0);
    EXPECT_EQ(k.j()["nodes"], json::array({"-5", "5"}));
    EXPECT_EQ(k.j()["family"], "kerr");

    Result full = run({"show", "double_schwarzschild", "--nodes", "0,1,2,3"});
    ASSERT_EQ(full.code, 0);
    EXPECT_EQ(full.j()["matrices"].size(), 5u);

    Result rods = run({"rods", "kerr"});
    EXPECT_EQ(rods.code, 0);
    EXPECT_EQ(rods.j()["rods"].size(), 3u);

    Result ts = run({"show", "tomimatsu_sato"});
    EXPECT_EQ(ts.code, 0);
    EXPECT_EQ(ts.j()["signature"], "lorentzian");
}

TEST(Cli, InverseKerr)
{
    Result r = run({"inverse", "--class", "alf", "--nodes", "2", "--m", "3", "--N", "0", "--L", "12"});
    ASSERT_EQ(r.code, 0);
    json s = r.j()["solutions"];
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0]["tag"], "Kerr");
    EXPECT_EQ(s[0]["sigma"], "5");

    Result ale = run({"inverse", "--class", "ale", "--nodes", "-3,1,2", "--M", "1/3", "--L", "2"});
    ASSERT_EQ(ale.code, 0);
    EXPECT_EQ(ale.j()["residual"]["degree"], 4);
    EXPECT_EQ(ale.j()["residual"]["variable"], "A");
    EXPECT_EQ(ale.j()["solutions"].size(), 4u);

    Result none = run({"inverse", "--class", "ale", "--nodes", "1", "--M", "1"});
    EXPECT_EQ(none.code, 4);
    EXPECT_EQ(none.j()["error"], "NoSolution");
}

TEST(Cli, AuditTomimatsuSato)
{
    std::string file = temp_file("ts.json", run({"show", "tomimatsu_sato"}).out);
    Result a = run({"audit", file});
    EXPECT_EQ(a.code, 3);
    bool double_at_1 = false, off_node = false;
    json report = a.j();
    for (const auto& f : report["findings"]) {
        double_at_1 = double_at_1 || (f["kind"] == "DoublePole" && f.value("location", "") == "1");
        off_node = off_node || f["kind"] == "OffNodePole";
    }
    EXPECT_TRUE(double_at_1);
    EXPECT_TRUE(off_node);

    Result charges = run({"charges", file});
    EXPECT_EQ(charges.code, 3);
    EXPECT_FALSE(charges.j()["audit"]["admissible"]);

    EXPECT_EQ(run({"audit", "gh_dipole"}).code, 3);
    EXPECT_EQ(run({"audit", "kerr"}).code, 0);
}

TEST(Cli, ShowRoundTripAndDeterminism)
{
    Result k = run({"show", "kerr", "--m", "3", "--a", "4", "--rod", "top"});
    std::string file = temp_file("kerr.json", k.out);
    Result a = run({"charges", file});
    Result b = run({"charges", "kerr", "--m", "3", "--a", "4"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.j()["charges"]["L"], "12");
    EXPECT_EQ(run({"show", "c_metric"}).out, run({"show", "c_metric"}).out);
    EXPECT_EQ(run({"inverse", "--class", "ale", "--nodes", "-3,1,2", "--M", "1/3", "--L", "2"}).out,
              run({"inverse", "--class", "ale", "--nodes", "-3,1,2", "--M", "1/3", "--L", "2"}).out);

    Result n = run({"normalize", "taub_nut", "--m", "5", "--N", "4"});
    ASSERT_EQ(n.code, 0);
    EXPECT_EQ(n.j()["charges"], (json{{"m", "5"}, {"N", "4"}, {"L", "0"}}));

    Result e = run({"equiv", "sdtn", file});
    EXPECT_EQ(e.code, 0);
    EXPECT_FALSE(e.j()["equivalent"]);
    Result same = run({"equiv", "kerr", file});
    EXPECT_TRUE(same.j()["equivalent"]);

    Result p = run({"passnode", "kerr", "--node", "5"});
    ASSERT_EQ(p.code, 0);
    EXPECT_TRUE(p.j().contains("conjugation"));
}

TEST(Cli, Errors)
{
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"show", "kerr", "--m", "x"}).code, 2);
    EXPECT_EQ(run({"show", "no_such_family"}).code, 2);
    EXPECT_EQ(run({"show", "plebanski_demianski", "--rod", "top"}).code, 2);

    std::string bad = temp_file("bad.json", R"({"signature": "riemannian", "nodes": ["0"],
        "entries": {"p11": {"num": ["1"], "den": ["0", "1"]}, "p22": {"num": ["0"], "den": ["1"]}}})");
    Result r = run({"charges", bad});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.j()["error"], "SchemaError");
    EXPECT_NE(r.out.find("/entries/p12"), std::string::npos);

    EXPECT_EQ(run({"charges", temp_file("junk.json", "{not json")}).code, 2);
}

TEST(Cli, SplitAndVerify)
{
    Result csv = run({"split", "schwarzschild", "--signature", "l", "--m", "1", "--grid", "0.5,1,1.5,2,3", "--format",
                      "csv"});
    ASSERT_EQ(csv.code, 0);
    EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 10);

    Result js = run({"split", "multi_taub_nut", "--grid", "0.5,1,1.5,2,4", "--quad", "128"});
    ASSERT_EQ(js.code, 0);
    EXPECT_EQ(js.j()["numeric"]["points"].size(), 16u);

    EXPECT_EQ(run({"split", "kerr", "--grid", "0.5,1,6,7,3"}).code, 2);
    EXPECT_EQ(run({"split", "kerr"}).code, 2);

    Result v = run({"verify", "schwarzschild", "--signature", "l", "--m", "1", "--grid", "0.3,1.5,1.5,3,24"});
    EXPECT_EQ(v.code, 0);
    EXPECT_TRUE(v.j()["pass"]);
}
